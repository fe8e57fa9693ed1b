//! Lab frame vs. rotating frame, compared at `ωt = 2nπ`.
//!
//! At those instants the frame change `U(t)` is a global phase, so states
//! evolved under the lab-frame `H'(t)` and under `H^eff(t)` must agree up to
//! the error of the rotating-wave approximation.

use std::f64::consts::PI;

use crate::dynamics::eigen::eigh;
use crate::dynamics::evolve::{evolve, standard_observables, AnnealRun, HamiltonianSource, Trajectory};
use crate::error::{Error, Result};
use crate::hilbert::{HilbertSpace, StateVector};
use crate::model::{build_effective, HybridProblemSpec, LabFrameParts};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StroboscopicOptions {
    /// Requested anneal time; moved to the nearest whole number of drive periods.
    pub nominal_time: f64,
    pub lab_tol: f64,
    pub effective_tol: f64,
    /// Record every `period_stride`-th period.
    pub period_stride: usize,
    /// Extra uniformly spaced samples for the continuous curves (0 for none).
    pub extra_samples: usize,
}

impl Default for StroboscopicOptions {
    fn default() -> Self {
        Self {
            nominal_time: 408.2,
            lab_tol: 1e-9,
            effective_tol: 1e-9,
            period_stride: 1,
            extra_samples: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StroboscopicComparison {
    pub drive_frequency: f64,
    /// `2π·periods/ω`.
    pub total_time: f64,
    pub periods: usize,
    /// Stroboscopic instants `2πn/ω`.
    pub strobe_times: Vec<f64>,
    /// Positions of the stroboscopic instants among the trajectory samples.
    pub strobe_index: Vec<usize>,
    pub lab: Trajectory,
    pub effective: Trajectory,
    /// Ground energy of `H_P^eff`.
    pub ground_energy: f64,
    /// `E_max − E_min` of `H_P^eff`.
    pub spectrum_width: f64,
    /// `5·max(g̃, λ, B)/ω · spectrum_width`.
    pub rwa_budget: f64,
}

impl StroboscopicComparison {
    /// `(lab, effective, lab − effective)` of an observable at the stroboscopic instants.
    pub fn paired(&self, name: &str) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let lab = self.lab.series(name)?;
        let eff = self.effective.series(name)?;
        let l: Vec<f64> = self.strobe_index.iter().map(|&k| lab[k]).collect();
        let e: Vec<f64> = self.strobe_index.iter().map(|&k| eff[k]).collect();
        let d = l.iter().zip(&e).map(|(a, b)| a - b).collect();
        Some((l, e, d))
    }

    pub fn max_abs_difference(&self, name: &str) -> Option<f64> {
        let (_, _, d) = self.paired(name)?;
        Some(d.iter().fold(0.0_f64, |m, x| m.max(x.abs())))
    }
}

/// Number of whole drive periods closest to `nominal_time`.
pub fn whole_periods(drive_frequency: f64, nominal_time: f64) -> usize {
    (nominal_time * drive_frequency / (2.0 * PI)).round().max(1.0) as usize
}

/// Runs both frames from the ground state of `H_D^eff` and samples
/// `H_P^eff`, `y = (𝟙+σz)/2` and `x = (a+a†)/2` at every stroboscopic instant.
pub fn stroboscopic_compare(
    spec: &HybridProblemSpec,
    space: &HilbertSpace,
    opts: &StroboscopicOptions,
) -> Result<StroboscopicComparison> {
    let omega = spec.drive_frequency.ok_or(Error::MissingDriveFrequency)?;
    if opts.period_stride == 0 {
        return Err(Error::InvalidRun("period stride must be ≥ 1".into()));
    }
    let periods = whole_periods(omega, opts.nominal_time);
    let period = 2.0 * PI / omega;
    let total_time = periods as f64 * period;

    let strobe_times: Vec<f64> = (0..=periods)
        .step_by(opts.period_stride)
        .map(|n| n as f64 * period)
        .collect();
    let mut grid: Vec<(f64, bool)> = strobe_times.iter().map(|&t| (t, true)).collect();
    if opts.extra_samples > 1 {
        let n = opts.extra_samples;
        grid.extend((0..n).map(|k| (total_time * k as f64 / (n - 1) as f64, false)));
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    // Drop extra samples that coincide with a stroboscopic instant.
    grid.dedup_by(|later, earlier| (later.0 - earlier.0).abs() <= 1e-12 * total_time);
    let strobe_index: Vec<usize> = grid
        .iter()
        .enumerate()
        .filter(|(_, (_, s))| *s)
        .map(|(k, _)| k)
        .collect();
    let times: Vec<f64> = grid.iter().map(|(t, _)| *t).collect();

    let eff = build_effective(spec, space)?;
    let lab_parts = LabFrameParts::new(spec, space)?;
    let (driver_vals, driver_vecs) = eigh(&eff.driver)?;
    let _ = driver_vals;
    let psi0 = StateVector::from_amplitudes(space.clone(), driver_vecs[0].clone())?;
    let (problem_vals, _) = eigh(&eff.problem)?;
    let ground_energy = problem_vals[0];
    let spectrum_width = problem_vals[problem_vals.len() - 1] - problem_vals[0];
    let rwa_budget = 5.0 * spec.max_drive_coupling() / omega * spectrum_width;

    let observables = standard_observables(&eff.problem)?;
    let mut lab_run = AnnealRun::new(
        total_time,
        HamiltonianSource::LabFrame(lab_parts),
        times.clone(),
        opts.lab_tol,
    )?
    .with_observables(observables.clone());
    lab_run.keep_states = false;
    let mut eff_run = AnnealRun::new(
        total_time,
        HamiltonianSource::Effective(eff),
        times,
        opts.effective_tol,
    )?
    .with_observables(observables);
    eff_run.keep_states = false;

    let (lab, effective) = std::thread::scope(|scope| {
        let lab = scope.spawn(|| evolve(&lab_run, &psi0));
        let effective = evolve(&eff_run, &psi0);
        (lab.join().expect("lab-frame run panicked"), effective)
    });

    Ok(StroboscopicComparison {
        drive_frequency: omega,
        total_time,
        periods,
        strobe_times,
        strobe_index,
        lab: lab?,
        effective: effective?,
        ground_energy,
        spectrum_width,
        rwa_budget,
    })
}
