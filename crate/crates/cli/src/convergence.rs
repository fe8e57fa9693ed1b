//! Truncation and tolerance certification: the run is repeated at `2N` and at
//! half the integrator tolerance, and every final observable is compared.

use anyhow::Result;
use serde::Serialize;

use crate::config::{ExperimentConfig, Mode};
use crate::experiment::execute;
use crate::output::{num, Table};

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub observable: String,
    pub base: f64,
    pub doubled_truncation: f64,
    pub halved_tol: f64,
    pub delta_truncation: f64,
    pub delta_tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub name: String,
    pub mode: Mode,
    pub truncation: usize,
    pub integrator_tol: f64,
    pub limit: f64,
    pub rows: Vec<ConvergenceRow>,
    pub converged: bool,
}

impl ConvergenceReport {
    pub fn row(&self, observable: &str) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.observable == observable)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new([
            "observable",
            "base",
            "doubled_truncation",
            "halved_tol",
            "delta_truncation",
            "delta_tol",
            "passed",
        ]);
        for r in &self.rows {
            t.push_raw(vec![
                r.observable.clone(),
                num(r.base),
                num(r.doubled_truncation),
                num(r.halved_tol),
                num(r.delta_truncation),
                num(r.delta_tol),
                r.passed.to_string(),
            ]);
        }
        t
    }
}

pub fn variants(cfg: &ExperimentConfig) -> [ExperimentConfig; 3] {
    let mut doubled = cfg.clone();
    doubled.truncation *= 2;
    let mut halved = cfg.clone();
    halved.integrator_tol /= 2.0;
    if let Some(t) = halved.appendix.lab_tol.as_mut() {
        *t /= 2.0;
    }
    [cfg.clone(), doubled, halved]
}

/// Compares observables of three finished runs (base, 2N, tol/2).
pub fn compare(
    cfg: &ExperimentConfig,
    runs: [Vec<(String, f64)>; 3],
) -> ConvergenceReport {
    let limit = cfg.checks.convergence_tol;
    let [base, doubled, halved] = runs;
    let lookup = |set: &[(String, f64)], name: &str| {
        set.iter().find(|(n, _)| n == name).map_or(f64::NAN, |(_, v)| *v)
    };
    let rows: Vec<ConvergenceRow> = base
        .iter()
        .map(|(name, b)| {
            let d = lookup(&doubled, name);
            let h = lookup(&halved, name);
            let delta_truncation = (d - b).abs();
            let delta_tol = (h - b).abs();
            ConvergenceRow {
                observable: name.clone(),
                base: *b,
                doubled_truncation: d,
                halved_tol: h,
                passed: delta_truncation < limit && delta_tol < limit,
                delta_truncation,
                delta_tol,
            }
        })
        .collect();
    ConvergenceReport {
        name: cfg.name.clone(),
        mode: cfg.mode,
        truncation: cfg.truncation,
        integrator_tol: cfg.integrator_tol,
        limit,
        converged: rows.iter().all(|r| r.passed),
        rows,
    }
}

pub fn convergence_report(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let [a, b, c] = variants(cfg);
    let (base, (doubled, halved)) = rayon::join(
        || execute(&a),
        || rayon::join(|| execute(&b), || execute(&c)),
    );
    Ok(compare(
        cfg,
        [
            base?.convergence_observables(),
            doubled?.convergence_observables(),
            halved?.convergence_observables(),
        ],
    ))
}
