//! Gap and adiabaticity analysis along the linear schedule.

use serde::Serialize;

use crate::dynamics::eigen::eigh;
use crate::error::{Error, Result};
use crate::hilbert::LinOp;
use crate::model::{total_hamiltonian, ScheduleSample};

/// Gaps below this are treated as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// `|⟨E₁|∂ₜH|E₀⟩| / (E₁ − E₀)²` at time `t` of a linear schedule of length `T`,
/// with `∂ₜH = (H_P − H_D)/T`.
///
/// When the first excited level is itself degenerate the numerator is the norm
/// of `∂ₜH|E₀⟩` projected onto the whole level, which does not depend on the
/// basis chosen inside it.
pub fn adiabaticity_metric(
    driver: &LinOp,
    problem: &LinOp,
    total_time: f64,
    t: f64,
) -> Result<f64> {
    let sample = ScheduleSample::new(t, total_time)?;
    let h = total_hamiltonian(driver, problem, sample)?;
    let (values, vectors) = eigh(&h)?;
    if values.len() < 2 {
        return Err(Error::DegenerateGap {
            gap: 0.0,
            threshold: DEGENERACY_THRESHOLD,
        });
    }
    let gap = values[1] - values[0];
    if gap < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateGap {
            gap,
            threshold: DEGENERACY_THRESHOLD,
        });
    }
    let rate = (problem - driver).scale(1.0 / total_time);
    let moved = rate.matrix() * &vectors[0];
    let level_tol = 1e-9 * values[1].abs().max(1.0);
    let numerator = values
        .iter()
        .zip(&vectors)
        .skip(1)
        .take_while(|(e, _)| (*e - values[1]).abs() <= level_tol)
        .map(|(_, v)| v.dotc(&moved).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(numerator / (gap * gap))
}

/// Lowest levels of `H(s)` over a grid of schedule fractions.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyDiagram {
    pub s: Vec<f64>,
    /// `levels[i][k]`: k-th lowest energy at `s[i]`.
    pub levels: Vec<Vec<f64>>,
    pub min_gap: f64,
    pub min_gap_s: f64,
}

impl EnergyDiagram {
    pub fn gaps(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l[1] - l[0]).collect()
    }
}

/// Lowest `k ≥ 2` energies of `h_of_s(s)` at every grid point, plus the
/// smallest `E₁ − E₀` and where it occurs.
pub fn energy_diagram<F>(h_of_s: F, s_grid: &[f64], k: usize) -> Result<EnergyDiagram>
where
    F: Fn(f64) -> Result<LinOp>,
{
    let k = k.max(2);
    let mut levels = Vec::with_capacity(s_grid.len());
    let mut min_gap = f64::INFINITY;
    let mut min_gap_s = f64::NAN;
    for &s in s_grid {
        let h = h_of_s(s)?;
        let (values, _) = eigh(&h)?;
        let take = k.min(values.len());
        if take < 2 {
            return Err(Error::InvalidRun("energy diagram needs dimension ≥ 2".into()));
        }
        let gap = values[1] - values[0];
        if gap < min_gap {
            min_gap = gap;
            min_gap_s = s;
        }
        levels.push(values[..take].to_vec());
    }
    Ok(EnergyDiagram {
        s: s_grid.to_vec(),
        levels,
        min_gap,
        min_gap_s,
    })
}

/// `H(s) = (1 − s) H_D + s H_P` as a closure for [`energy_diagram`].
pub fn linear_schedule<'a>(driver: &'a LinOp, problem: &'a LinOp) -> impl Fn(f64) -> Result<LinOp> + 'a {
    move |s| total_hamiltonian(driver, problem, ScheduleSample::at_fraction(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{number, pauli, HilbertSpace, PauliAxis};

    fn pair() -> (LinOp, LinOp) {
        let space = HilbertSpace::qubits_and_resonators(1, 1, 4).unwrap();
        let sx = space.qubit_op(0, &pauli(PauliAxis::X)).unwrap();
        let sz = space.qubit_op(0, &pauli(PauliAxis::Z)).unwrap();
        let n = space.resonator_op(0, &number(4).unwrap()).unwrap();
        (&sx.scale(0.5) + &n, &sz.scale(0.4) + &n.scale(0.8))
    }

    #[test]
    fn vanishes_without_schedule_motion() {
        let (hd, _) = pair();
        assert_eq!(adiabaticity_metric(&hd, &hd, 10.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn scales_inversely_with_total_time() {
        let (hd, hp) = pair();
        for s in [0.1, 0.5, 0.9] {
            let a = adiabaticity_metric(&hd, &hp, 100.0, 100.0 * s).unwrap();
            let b = adiabaticity_metric(&hd, &hp, 200.0, 200.0 * s).unwrap();
            assert!((a - 2.0 * b).abs() < 1e-12 * a.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn two_level_closed_form() {
        // H(s) = (1−s)(σx/2) + s(σz/2), gap = sqrt((1−s)² + s²).
        let hd = pauli(PauliAxis::X).scale(0.5);
        let hp = pauli(PauliAxis::Z).scale(0.5);
        let s: f64 = 0.5;
        let gap = ((1.0 - s).powi(2) + s * s).sqrt();
        // At s = 1/2, H ∝ (σx + σz); ∂H ∝ (σz − σx) is orthogonal and maps
        // ground to excited with amplitude |σz − σx|/2 = √2/2.
        let expected = (2f64.sqrt() / 2.0) / (gap * gap);
        let got = adiabaticity_metric(&hd, &hp, 1.0, s).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn degenerate_gap_rejected() {
        let space = HilbertSpace::qubits_and_resonators(2, 0, 2).unwrap();
        let h = LinOp::zeros(&space);
        assert!(matches!(
            adiabaticity_metric(&h, &h, 1.0, 0.5),
            Err(Error::DegenerateGap { .. })
        ));
    }

    #[test]
    fn diagram_endpoints() {
        let (hd, hp) = pair();
        let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let d = energy_diagram(linear_schedule(&hd, &hp), &grid, 3).unwrap();
        let (vd, _) = eigh(&hd).unwrap();
        let (vp, _) = eigh(&hp).unwrap();
        for k in 0..3 {
            assert!((d.levels[0][k] - vd[k]).abs() < 1e-12);
            assert!((d.levels[10][k] - vp[k]).abs() < 1e-12);
        }
        let gaps = d.gaps();
        let min = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(min, d.min_gap);
        assert!(d.min_gap > 0.0);
    }
}
