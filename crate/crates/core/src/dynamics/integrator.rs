//! Adaptive Dormand–Prince 5(4) integration of `dy/dt = f(t, y)` on complex vectors.
//!
//! Local error per step is controlled in the RMS norm with weights
//! `atol + rtol·max(|y_i|, |y_new_i|)`. Steps are shortened to land exactly on
//! each requested sample time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth- minus fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

/// Counters collected over one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct IntegrationStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    /// Largest `|‖y‖ − 1|` over every accepted step.
    pub max_norm_deviation: f64,
    pub last_error_estimate: f64,
}

struct Stages {
    k: [Vec<C64>; 7],
    tmp: Vec<C64>,
    y_new: Vec<C64>,
}

impl Stages {
    fn new(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        Self {
            k: std::array::from_fn(|_| z.clone()),
            tmp: z.clone(),
            y_new: z,
        }
    }
}

fn combine(out: &mut [C64], y: &[C64], h: f64, terms: &[(f64, &[C64])]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (a, k) in terms {
            acc += k[i] * *a;
        }
        *o = y[i] + acc * h;
    }
}

fn norm(y: &[C64]) -> f64 {
    y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl DormandPrince {
    pub fn new(rtol: f64, max_steps: usize) -> Self {
        Self {
            rtol,
            atol: rtol,
            max_steps,
        }
    }

    /// Integrates from `t0` through every time in `samples` (sorted, all ≥ `t0`),
    /// calling `observe(t, y)` at each. `f(t, y, dy)` writes the derivative.
    pub fn integrate<F, O>(
        &self,
        mut f: F,
        t0: f64,
        y0: &[C64],
        samples: &[f64],
        mut observe: O,
    ) -> Result<IntegrationStats>
    where
        F: FnMut(f64, &[C64], &mut [C64]),
        O: FnMut(f64, &[C64]) -> Result<()>,
    {
        let n = y0.len();
        let mut y = y0.to_vec();
        let mut t = t0;
        let mut st = Stages::new(n);
        let mut stats = IntegrationStats {
            max_norm_deviation: (norm(&y) - 1.0).abs(),
            ..Default::default()
        };

        f(t, &y, &mut st.k[0]);
        stats.rhs_evaluations += 1;
        let mut h = self.initial_step(&y, &st.k[0], samples.last().map_or(0.0, |&e| e - t0));

        for &target in samples {
            if target < t {
                return Err(Error::InvalidRun(format!(
                    "sample time {target} precedes current time {t}"
                )));
            }
            while t < target {
                if stats.accepted_steps + stats.rejected_steps >= self.max_steps {
                    return Err(Error::IntegrationFailure {
                        time: t,
                        error_estimate: stats.last_error_estimate,
                        reason: format!("step budget of {} exhausted", self.max_steps),
                    });
                }
                let remaining = target - t;
                let landing = h >= remaining;
                let step = if landing { remaining } else { h };

                let err = self.attempt(&mut f, t, &y, step, &mut st);
                stats.rhs_evaluations += 6;
                stats.last_error_estimate = err;

                if err <= 1.0 {
                    t = if landing { target } else { t + step };
                    std::mem::swap(&mut y, &mut st.y_new);
                    // FSAL: the last stage is the derivative at the new point.
                    st.k.swap(0, 6);
                    stats.accepted_steps += 1;
                    stats.max_norm_deviation = stats.max_norm_deviation.max((norm(&y) - 1.0).abs());
                    let factor = if err == 0.0 {
                        MAX_FACTOR
                    } else {
                        (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                    };
                    // A shortened landing step says nothing about the natural step size.
                    if !landing || step >= h {
                        h = step * factor;
                    }
                } else {
                    stats.rejected_steps += 1;
                    h = step * (SAFETY * err.powf(-0.2)).max(MIN_FACTOR);
                }
                if !err.is_finite() || h < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::IntegrationFailure {
                        time: t,
                        error_estimate: err,
                        reason: "step size underflow".into(),
                    });
                }
            }
            observe(t, &y)?;
        }
        Ok(stats)
    }

    fn initial_step(&self, y: &[C64], dy: &[C64], span: f64) -> f64 {
        let scale = |v: &[C64]| {
            (v.iter()
                .zip(y)
                .map(|(a, b)| (a.norm() / (self.atol + self.rtol * b.norm())).powi(2))
                .sum::<f64>()
                / v.len().max(1) as f64)
                .sqrt()
        };
        let d0 = scale(y);
        let d1 = scale(dy);
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        if span > 0.0 {
            h.min(span)
        } else {
            h
        }
    }

    /// One trial step from `(t, y)` of size `h`; returns the scaled error norm.
    /// Expects `st.k[0] = f(t, y)`; leaves the candidate in `st.y_new` and
    /// `f(t + h, y_new)` in `st.k[6]`.
    fn attempt<F>(&self, f: &mut F, t: f64, y: &[C64], h: f64, st: &mut Stages) -> f64
    where
        F: FnMut(f64, &[C64], &mut [C64]),
    {
        let [k1, k2, k3, k4, k5, k6, k7] = &mut st.k;
        let tmp = &mut st.tmp;

        combine(tmp, y, h, &[(A21, k1)]);
        f(t + C2 * h, tmp, k2);
        combine(tmp, y, h, &[(A31, k1), (A32, k2)]);
        f(t + C3 * h, tmp, k3);
        combine(tmp, y, h, &[(A41, k1), (A42, k2), (A43, k3)]);
        f(t + C4 * h, tmp, k4);
        combine(tmp, y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]);
        f(t + C5 * h, tmp, k5);
        combine(
            tmp,
            y,
            h,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        );
        f(t + h, tmp, k6);
        combine(
            &mut st.y_new,
            y,
            h,
            &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)],
        );
        f(t + h, &st.y_new, k7);

        let mut sum = 0.0;
        for i in 0..y.len() {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                * h;
            let sc = self.atol + self.rtol * y[i].norm().max(st.y_new[i].norm());
            sum += (e.norm() / sc).powi(2);
        }
        (sum / y.len().max(1) as f64).sqrt()
    }
}
