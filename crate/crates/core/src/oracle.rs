//! Classical ground truth for [`MipInstance`]: every binary sector is solved in
//! closed form and the best sector wins.
//!
//! For fixed `y` the cost is a convex quadratic in `x` with Hessian
//! `2 diag(d) + 2λ 𝟙𝟙ᵀ`, so its minimizer solves
//! `(2 diag(d) + 2λ 𝟙𝟙ᵀ) x = −(c − c̃∘y) + 2λA 𝟙`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mip::{penalized_cost, MipInstance};

/// Largest `K` accepted by [`solve`].
pub const MAX_LINES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorSolution {
    pub y: Vec<bool>,
    pub x: Vec<f64>,
    pub cost: f64,
    /// `‖∇ₓf(y, x)‖_∞`.
    pub stationarity_residual: f64,
    pub nonnegative: bool,
    /// 2-norm condition number of the Hessian.
    pub condition_number: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    /// Sectors in lexicographic order of `y` (false before true, line 1 first).
    pub sectors: Vec<SectorSolution>,
    pub best: SectorSolution,
}

fn hessian(inst: &MipInstance) -> DMatrix<f64> {
    let k = inst.lines();
    let lam = inst.penalty_weight;
    DMatrix::from_fn(k, k, |i, j| {
        2.0 * lam + if i == j { 2.0 * inst.quadratic[i] } else { 0.0 }
    })
}

/// `∇ₓf(y, x)`.
pub fn gradient(inst: &MipInstance, y: &[bool], x: &[f64]) -> Vec<f64> {
    let excess = x.iter().sum::<f64>() - inst.total;
    (0..inst.lines())
        .map(|i| {
            let yi = if y[i] { 1.0 } else { 0.0 };
            inst.unit_cost[i] - inst.cost_reduction[i] * yi
                + 2.0 * inst.quadratic[i] * x[i]
                + 2.0 * inst.penalty_weight * excess
        })
        .collect()
}

fn linear_rhs(inst: &MipInstance, y: &[bool]) -> DVector<f64> {
    let lam = inst.penalty_weight;
    DVector::from_fn(inst.lines(), |i, _| {
        let yi = if y[i] { 1.0 } else { 0.0 };
        -(inst.unit_cost[i] - inst.cost_reduction[i] * yi) + 2.0 * lam * inst.total
    })
}

fn check_y(inst: &MipInstance, y: &[bool]) -> Result<()> {
    if y.len() != inst.lines() {
        return Err(Error::ShapeMismatch {
            field: "y",
            expected: inst.lines().to_string(),
            actual: y.len().to_string(),
        });
    }
    Ok(())
}

fn finish(inst: &MipInstance, y: &[bool], x: Vec<f64>, condition_number: f64) -> Result<SectorSolution> {
    let cost = penalized_cost(inst, y, &x)?;
    let stationarity_residual = gradient(inst, y, &x)
        .iter()
        .fold(0.0_f64, |m, g| m.max(g.abs()));
    Ok(SectorSolution {
        y: y.to_vec(),
        nonnegative: x.iter().all(|&v| v >= 0.0),
        x,
        cost,
        stationarity_residual,
        condition_number,
    })
}

/// Unconstrained minimizer of `f(y, ·)`.
pub fn solve_sector(inst: &MipInstance, y: &[bool]) -> Result<SectorSolution> {
    inst.validate()?;
    check_y(inst, y)?;
    let h = hessian(inst);
    let eig = h.clone().symmetric_eigen();
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &e| (lo.min(e), hi.max(e.abs())));
    let condition_number = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let chol = h.cholesky().ok_or(Error::IllPosed(condition_number))?;
    let mut x = chol.solve(&linear_rhs(inst, y));
    // One step of iterative refinement keeps the residual at rounding level
    // for badly scaled penalty weights.
    let r = linear_rhs(inst, y) - hessian(inst) * &x;
    x += chol.solve(&r);
    finish(inst, y, x.iter().copied().collect(), condition_number)
}

/// All `2^K` sectors and the best one; ties go to the lexicographically smallest `y`.
pub fn solve(inst: &MipInstance) -> Result<OracleSolution> {
    inst.validate()?;
    let k = inst.lines();
    if k > MAX_LINES {
        return Err(Error::TooManyLines(k));
    }
    let mut sectors = Vec::with_capacity(1 << k);
    for code in 0..(1usize << k) {
        // Line 1 is the most significant bit, so codes run in lexicographic order.
        let y: Vec<bool> = (0..k).map(|i| code >> (k - 1 - i) & 1 == 1).collect();
        sectors.push(solve_sector(inst, &y)?);
    }
    let mut best = &sectors[0];
    for s in &sectors[1..] {
        if s.cost < best.cost {
            best = s;
        }
    }
    let best = best.clone();
    Ok(OracleSolution { sectors, best })
}

/// Brute-force minimum of `f(y, ·)` over a uniform grid with `resolution`
/// points per axis spanning `[lo, hi]` (endpoints included).
pub fn grid_check(
    inst: &MipInstance,
    y: &[bool],
    range: (f64, f64),
    resolution: usize,
) -> Result<(Vec<f64>, f64)> {
    inst.validate()?;
    check_y(inst, y)?;
    if resolution < 100 {
        return Err(Error::InvalidRun(format!(
            "grid resolution {resolution} below 100 points per axis"
        )));
    }
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidRun(format!("empty grid range [{lo}, {hi}]")));
    }
    let k = inst.lines();
    let total = (resolution as f64).powi(k as i32);
    if total > 1e9 {
        return Err(Error::InvalidRun(format!("{total:e} grid points is too many")));
    }
    let step = (hi - lo) / (resolution - 1) as f64;
    let mut idx = vec![0usize; k];
    let mut x = vec![lo; k];
    let mut best = (x.clone(), f64::INFINITY);
    loop {
        for i in 0..k {
            x[i] = lo + idx[i] as f64 * step;
        }
        let c = penalized_cost(inst, y, &x)?;
        if c < best.1 {
            best = (x.clone(), c);
        }
        let mut axis = 0;
        loop {
            if axis == k {
                return Ok(best);
            }
            idx[axis] += 1;
            if idx[axis] < resolution {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

/// Minimizer of `f(y, ·)` subject to `x ≥ 0`, by a primal active-set method.
/// Agrees with [`solve_sector`] whenever the unconstrained minimizer is feasible.
pub fn solve_sector_nonnegative(inst: &MipInstance, y: &[bool]) -> Result<SectorSolution> {
    let free_solution = solve_sector(inst, y)?;
    if free_solution.nonnegative {
        return Ok(free_solution);
    }
    let k = inst.lines();
    let h = hessian(inst);
    let rhs = linear_rhs(inst, y);
    let mut active = vec![false; k];
    for _ in 0..4 * k + 4 {
        let free: Vec<usize> = (0..k).filter(|&i| !active[i]).collect();
        let mut x = vec![0.0; k];
        if !free.is_empty() {
            let hf = DMatrix::from_fn(free.len(), free.len(), |a, b| h[(free[a], free[b])]);
            let rf = DVector::from_fn(free.len(), |a, _| rhs[free[a]]);
            let sol = hf
                .cholesky()
                .ok_or(Error::IllPosed(free_solution.condition_number))?
                .solve(&rf);
            for (a, &i) in free.iter().enumerate() {
                x[i] = sol[a];
            }
        }
        if let Some(&worst) = free
            .iter()
            .filter(|&&i| x[i] < 0.0)
            .min_by(|&&a, &&b| x[a].total_cmp(&x[b]))
        {
            active[worst] = true;
            continue;
        }
        // Release a bound whose multiplier (the gradient component) is negative.
        let g = gradient(inst, y, &x);
        if let Some(i) = (0..k)
            .filter(|&i| active[i] && g[i] < -1e-12)
            .min_by(|&a, &b| g[a].total_cmp(&g[b]))
        {
            active[i] = false;
            continue;
        }
        let mut s = finish(inst, y, x, free_solution.condition_number)?;
        // Only free components must be stationary.
        s.stationarity_residual = g
            .iter()
            .enumerate()
            .filter(|(i, _)| !active[*i])
            .fold(0.0_f64, |m, (_, v)| m.max(v.abs()));
        return Ok(s);
    }
    Err(Error::IllPosed(free_solution.condition_number))
}
