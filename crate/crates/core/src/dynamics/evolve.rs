//! Annealing runs: integrate `i dψ/dt = H(t) ψ` and sample observables.

use crate::dynamics::integrator::{DormandPrince, IntegrationStats};
use crate::error::{Error, Result};
use crate::hilbert::{quadrature, HilbertSpace, LinOp, StateVector};
use crate::model::{EffectiveHamiltonians, LabFrameParts};
use crate::sparse::CsrMatrix;
use crate::C64;
use nalgebra::DVector;

/// Default step budget; generous enough for ~10^4 drive periods at tight tolerance.
pub const DEFAULT_MAX_STEPS: usize = 50_000_000;

/// Which time-dependent Hamiltonian drives the run.
#[derive(Debug, Clone)]
pub enum HamiltonianSource {
    /// `H(t) = (1 − t/T) H_D + (t/T) H_P`.
    Standard { driver: LinOp, problem: LinOp },
    /// `H'(t) = (1 − t/T) H'_D(t) + (t/T) H'_P(t)` with `cos(ωt)` drives.
    LabFrame(LabFrameParts),
    /// `H^eff(t) = (1 − t/T) H_D^eff + (t/T) H_P^eff`.
    Effective(EffectiveHamiltonians),
}

impl HamiltonianSource {
    pub fn space(&self) -> &HilbertSpace {
        match self {
            HamiltonianSource::Standard { driver, .. } => driver.space(),
            HamiltonianSource::LabFrame(parts) => parts.problem_static.space(),
            HamiltonianSource::Effective(eff) => eff.driver.space(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            HamiltonianSource::Standard { .. } => "standard",
            HamiltonianSource::LabFrame(_) => "lab_frame",
            HamiltonianSource::Effective(_) => "effective",
        }
    }

    fn terms(&self) -> Vec<(Envelope, CsrMatrix)> {
        use Ramp::*;
        let term = |ramp, drive, op: &LinOp| (Envelope { ramp, drive }, CsrMatrix::from_op(op));
        match self {
            HamiltonianSource::Standard { driver, problem } => {
                vec![term(Down, None, driver), term(Up, None, problem)]
            }
            HamiltonianSource::Effective(eff) => {
                vec![term(Down, None, &eff.driver), term(Up, None, &eff.problem)]
            }
            HamiltonianSource::LabFrame(p) => {
                let w = Some(p.drive_frequency);
                vec![
                    term(Down, None, &p.driver_static),
                    term(Down, w, &p.driver_drive),
                    term(Up, None, &p.problem_static),
                    term(Up, w, &p.problem_drive),
                ]
                .into_iter()
                .filter(|(_, m)| m.nnz() > 0)
                .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Ramp {
    Down,
    Up,
}

#[derive(Debug, Clone, Copy)]
struct Envelope {
    ramp: Ramp,
    drive: Option<f64>,
}

impl Envelope {
    fn value(&self, t: f64, total_time: f64) -> f64 {
        let s = t / total_time;
        let r = match self.ramp {
            Ramp::Down => 1.0 - s,
            Ramp::Up => s,
        };
        match self.drive {
            Some(w) => r * (w * t).cos(),
            None => r,
        }
    }
}

/// One annealing run.
#[derive(Debug, Clone)]
pub struct AnnealRun {
    pub total_time: f64,
    pub source: HamiltonianSource,
    /// Strictly increasing times in `[0, T]` at which states are recorded.
    pub sample_times: Vec<f64>,
    /// Relative local-error tolerance of the integrator.
    pub integrator_tol: f64,
    pub max_steps: usize,
    /// Named observables sampled along the run (a `norm` series is always added).
    pub observables: Vec<(String, LinOp)>,
    /// Keep the state vector at every sample (memory grows with samples × dim).
    pub keep_states: bool,
}

impl AnnealRun {
    pub fn new(
        total_time: f64,
        source: HamiltonianSource,
        sample_times: Vec<f64>,
        integrator_tol: f64,
    ) -> Result<Self> {
        let run = Self {
            total_time,
            source,
            sample_times,
            integrator_tol,
            max_steps: DEFAULT_MAX_STEPS,
            observables: Vec::new(),
            keep_states: true,
        };
        run.validate()?;
        Ok(run)
    }

    pub fn with_observables(mut self, observables: Vec<(String, LinOp)>) -> Self {
        self.observables = observables;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.total_time > 0.0 && self.total_time.is_finite()) {
            return Err(Error::InvalidRun(format!(
                "total time must be positive, got {}",
                self.total_time
            )));
        }
        if !(self.integrator_tol > 0.0) {
            return Err(Error::InvalidRun(format!(
                "integrator tolerance must be positive, got {}",
                self.integrator_tol
            )));
        }
        if self.sample_times.is_empty() {
            return Err(Error::InvalidRun("no sample times".into()));
        }
        for w in self.sample_times.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidRun(format!(
                    "sample times not strictly increasing at {}",
                    w[1]
                )));
            }
        }
        let first = self.sample_times[0];
        let last = *self.sample_times.last().unwrap();
        // Allow rounding slack at the end of grids built as k·T/n.
        if first < 0.0 || last > self.total_time * (1.0 + 1e-12) {
            return Err(Error::InvalidRun(format!(
                "sample times must lie in [0, {}]",
                self.total_time
            )));
        }
        let space = self.source.space();
        for (name, op) in &self.observables {
            if op.space() != space {
                return Err(Error::InvalidRun(format!(
                    "observable {name} lives on a different space"
                )));
            }
        }
        Ok(())
    }
}

/// `n` uniformly spaced samples covering `[0, T]` inclusive.
pub fn uniform_times(total_time: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![total_time],
        _ => (0..n)
            .map(|k| total_time * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `H_P`, `y_i = (𝟙 + σz^(i))/2` and `x_j = (a_j + a_j†)/2`, named
/// `H_P`, `y1..yL`, `x1..xM`.
pub fn standard_observables(problem: &LinOp) -> Result<Vec<(String, LinOp)>> {
    let space = problem.space();
    let id = LinOp::identity_on(space);
    let mut out = vec![("H_P".to_string(), problem.clone())];
    let sz = crate::hilbert::pauli(crate::hilbert::PauliAxis::Z);
    for i in 0..space.num_qubits() {
        let z = space.qubit_op(i, &sz)?;
        out.push((format!("y{}", i + 1), (&id + &z).scale(0.5)));
    }
    for m in 0..space.num_resonators() {
        let q = quadrature(space.truncation(m)?)?;
        out.push((format!("x{}", m + 1), space.resonator_op(m, &q)?));
    }
    Ok(out)
}

/// Sampled states and observable series of one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Empty when the run was configured not to keep states.
    pub states: Vec<StateVector>,
    /// Observable series in the order requested, with `norm` last.
    pub observables: Vec<(String, Vec<f64>)>,
    pub final_state: StateVector,
    pub stats: IntegrationStats,
}

impl Trajectory {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.observables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn final_value(&self, name: &str) -> Option<f64> {
        self.series(name).and_then(|v| v.last().copied())
    }

    /// Largest `|‖ψ‖ − 1|` over every integration step.
    pub fn max_norm_deviation(&self) -> f64 {
        self.stats.max_norm_deviation
    }
}

/// Solves `i dψ/dt = H(t) ψ` from `psi0` at `t = 0` and samples the run's observables.
pub fn evolve(run: &AnnealRun, psi0: &StateVector) -> Result<Trajectory> {
    run.validate()?;
    let space = run.source.space();
    if psi0.space() != space {
        return Err(Error::SpaceMismatch);
    }
    if !psi0.is_normalized(1e-9) {
        return Err(Error::NotNormalized(psi0.norm()));
    }
    let total_time = run.total_time;
    let terms = run.source.terms();
    let dim = space.total_dim();
    let minus_i = C64::new(0.0, -1.0);

    let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
        dy.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (env, m) in &terms {
            let c = env.value(t, total_time);
            if c != 0.0 {
                m.mul_add(minus_i * c, y, dy);
            }
        }
    };

    let observables: Vec<(String, CsrMatrix)> = run
        .observables
        .iter()
        .map(|(n, op)| (n.clone(), CsrMatrix::from_op(op)))
        .collect();
    let mut series: Vec<Vec<f64>> = vec![Vec::with_capacity(run.sample_times.len()); observables.len() + 1];
    let mut times = Vec::with_capacity(run.sample_times.len());
    let mut states = Vec::new();
    let mut last = psi0.amplitudes().as_slice().to_vec();
    let mut scratch = vec![C64::new(0.0, 0.0); dim];

    let integrator = DormandPrince {
        rtol: run.integrator_tol,
        atol: run.integrator_tol,
        max_steps: run.max_steps,
    };
    let y0 = psi0.amplitudes().as_slice().to_vec();
    let mut record = |t: f64, y: &[C64]| -> Result<()> {
        let norm2: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        for (k, (_, op)) in observables.iter().enumerate() {
            scratch.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            op.mul_add(C64::new(1.0, 0.0), y, &mut scratch);
            let ev: C64 = y.iter().zip(&scratch).map(|(a, b)| a.conj() * b).sum();
            series[k].push(ev.re / norm2);
        }
        series[observables.len()].push(norm2.sqrt());
        times.push(t);
        if run.keep_states {
            states.push(StateVector::from_amplitudes(
                space.clone(),
                DVector::from_column_slice(y),
            )?);
        }
        last.copy_from_slice(y);
        Ok(())
    };

    let mut samples = run.sample_times.clone();
    if let Some(end) = samples.last_mut() {
        *end = end.min(total_time);
    }
    let stats = if samples[0] == 0.0 {
        record(0.0, &y0)?;
        integrator.integrate(rhs, 0.0, &y0, &samples[1..], &mut record)?
    } else {
        integrator.integrate(rhs, 0.0, &y0, &samples, &mut record)?
    };

    let mut named: Vec<(String, Vec<f64>)> = observables
        .iter()
        .map(|(n, _)| n.clone())
        .chain(std::iter::once("norm".to_string()))
        .zip(series)
        .collect();
    named.shrink_to_fit();
    Ok(Trajectory {
        times,
        states,
        observables: named,
        final_state: StateVector::from_amplitudes(space.clone(), DVector::from_vec(last))?,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::eigen::ground_state;
    use crate::hilbert::{expectation, number, pauli, PauliAxis};
    use crate::model::{build_effective, HybridProblemSpec};

    fn small_standard() -> (LinOp, LinOp) {
        let space = HilbertSpace::qubits_and_resonators(1, 1, 5).unwrap();
        let sx = space.qubit_op(0, &pauli(PauliAxis::X)).unwrap();
        let sz = space.qubit_op(0, &pauli(PauliAxis::Z)).unwrap();
        let n = space.resonator_op(0, &number(5).unwrap()).unwrap();
        let q = space.resonator_op(0, &quadrature(5).unwrap()).unwrap();
        let hd = &sx.scale(0.5) + &n;
        let hp = &(&sz.scale(0.3) + &n.scale(1.2)) + &(&sz * &q).scale(-0.4);
        (hd, hp)
    }

    #[test]
    fn stationary_driver_state() {
        let (hd, _) = small_standard();
        let (e0, psi0) = ground_state(&hd).unwrap();
        let run = AnnealRun::new(
            50.0,
            HamiltonianSource::Standard {
                driver: hd.clone(),
                problem: hd.clone(),
            },
            uniform_times(50.0, 26),
            1e-10,
        )
        .unwrap()
        .with_observables(vec![("H_D".into(), hd.clone())]);
        let traj = evolve(&run, &psi0).unwrap();
        for v in traj.series("H_D").unwrap() {
            assert!((v - e0).abs() < 1e-8);
        }
        assert!(traj.max_norm_deviation() < 1e-6);
        assert_eq!(traj.times.len(), 26);
        assert_eq!(traj.states.len(), 26);
    }

    #[test]
    fn sudden_limit_keeps_initial_state() {
        let (hd, hp) = small_standard();
        let (_, psi0) = ground_state(&hd).unwrap();
        let t = 1e-9;
        let run = AnnealRun::new(
            t,
            HamiltonianSource::Standard {
                driver: hd.clone(),
                problem: hp.clone(),
            },
            vec![t],
            1e-10,
        )
        .unwrap()
        .with_observables(standard_observables(&hp).unwrap());
        let traj = evolve(&run, &psi0).unwrap();
        assert!(traj.final_state.overlap_deficit(&psi0).unwrap() < 1e-12);
        let direct = expectation(&hp, &psi0).unwrap().value;
        assert!((traj.final_value("H_P").unwrap() - direct).abs() < 1e-8);
    }

    #[test]
    fn variational_bound_and_adiabatic_following() {
        let (hd, hp) = small_standard();
        let (_, psi0) = ground_state(&hd).unwrap();
        let (ep, _) = ground_state(&hp).unwrap();
        let run = AnnealRun::new(
            200.0,
            HamiltonianSource::Standard {
                driver: hd,
                problem: hp.clone(),
            },
            uniform_times(200.0, 11),
            1e-9,
        )
        .unwrap()
        .with_observables(standard_observables(&hp).unwrap());
        let traj = evolve(&run, &psi0).unwrap();
        let fin = traj.final_value("H_P").unwrap();
        assert!(fin >= ep - 1e-9);
        assert!(fin - ep < 1e-3, "excess {}", fin - ep);
    }

    #[test]
    fn run_validation() {
        let (hd, hp) = small_standard();
        let src = HamiltonianSource::Standard {
            driver: hd,
            problem: hp,
        };
        assert!(AnnealRun::new(-1.0, src.clone(), vec![0.0], 1e-8).is_err());
        assert!(AnnealRun::new(1.0, src.clone(), vec![0.5, 0.5], 1e-8).is_err());
        assert!(AnnealRun::new(1.0, src.clone(), vec![0.0, 2.0], 1e-8).is_err());
        assert!(AnnealRun::new(1.0, src, vec![0.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn unnormalized_initial_state_rejected() {
        let (hd, hp) = small_standard();
        let space = hd.space().clone();
        let run = AnnealRun::new(
            1.0,
            HamiltonianSource::Standard {
                driver: hd,
                problem: hp,
            },
            vec![1.0],
            1e-8,
        )
        .unwrap();
        let psi = StateVector::from_amplitudes(
            space.clone(),
            DVector::from_element(space.total_dim(), C64::new(1.0, 0.0)),
        )
        .unwrap();
        assert!(matches!(evolve(&run, &psi), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn effective_source_space() {
        let spec = HybridProblemSpec::single_pair(153.9, 153.7, 154.1, 0.55, 0.30, 0.15, 0.25);
        let space = HilbertSpace::qubits_and_resonators(1, 1, 4).unwrap();
        let src = HamiltonianSource::Effective(build_effective(&spec, &space).unwrap());
        assert_eq!(src.space(), &space);
        assert_eq!(src.label(), "effective");
    }
}
