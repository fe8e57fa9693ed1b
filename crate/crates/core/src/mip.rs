//! Production-planning mixed-integer program and its hybrid qubit–resonator encoding.
//!
//! The cost with the equality constraint `Σx = A` relaxed by a penalty is
//!
//! ```text
//! f(y, x) = Σ (c_i − c̃_i y_i) x_i + Σ d_i x_i² + Σ b_i y_i + λ (Σ x_i − A)²
//! ```
//!
//! with binary `y` (invest in line i) and continuous `x` (production of line i).
//! Each `y_i` becomes `(𝟙+σz)/2` on a qubit and each `x_i` the quadrature
//! `(a+a†)/2` of a resonator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    embed, embed_product, expectation, identity, number, pauli, quadrature, HilbertSpace, LinOp,
    PauliAxis, StateVector,
};
use crate::model::{build_driver_hamiltonian, build_problem_hamiltonian, HybridProblemSpec, HERMITIAN_TOL};

/// Tolerance on decoded `y` leaving `[0, 1]`.
pub const Y_RANGE_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MipInstance {
    /// Required total production `A`.
    pub total: f64,
    /// Investment costs `b_i`.
    pub investment: Vec<f64>,
    /// Linear unit costs `c_i`.
    pub unit_cost: Vec<f64>,
    /// Unit cost reductions `c̃_i` bought by investing.
    pub cost_reduction: Vec<f64>,
    /// Quadratic coefficients `d_i > 0`.
    pub quadratic: Vec<f64>,
    /// `λ_pen > 0`.
    pub penalty_weight: f64,
}

impl MipInstance {
    /// The two-line instance with `A = 2`, `b = (1, 2)`, `c = (2.1, 2.2)`,
    /// `c̃ = (1.8, 2.0)`, `d = (3.3, 3.8)` and `λ = 15`.
    pub fn production_planning() -> Self {
        Self {
            total: 2.0,
            investment: vec![1.0, 2.0],
            unit_cost: vec![2.1, 2.2],
            cost_reduction: vec![1.8, 2.0],
            quadratic: vec![3.3, 3.8],
            penalty_weight: 15.0,
        }
    }

    pub fn lines(&self) -> usize {
        self.unit_cost.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.lines();
        if k == 0 {
            return Err(Error::InvalidInstance("at least one production line is required".into()));
        }
        for (name, v) in [
            ("investment", &self.investment),
            ("cost_reduction", &self.cost_reduction),
            ("quadratic", &self.quadratic),
        ] {
            if v.len() != k {
                return Err(Error::ShapeMismatch {
                    field: name,
                    expected: k.to_string(),
                    actual: v.len().to_string(),
                });
            }
        }
        let all = self
            .investment
            .iter()
            .chain(&self.unit_cost)
            .chain(&self.cost_reduction)
            .chain(&self.quadratic)
            .chain([&self.total, &self.penalty_weight]);
        for v in all {
            if !v.is_finite() {
                return Err(Error::NonFinite("instance"));
            }
        }
        if let Some(d) = self.quadratic.iter().find(|&&d| d <= 0.0) {
            return Err(Error::InvalidInstance(format!("quadratic coefficient {d} must be > 0")));
        }
        if self.penalty_weight <= 0.0 {
            return Err(Error::InvalidInstance(format!(
                "penalty weight {} must be > 0",
                self.penalty_weight
            )));
        }
        Ok(())
    }
}

/// Penalized cost `f(y, x)`.
pub fn penalized_cost(inst: &MipInstance, y: &[bool], x: &[f64]) -> Result<f64> {
    let yf: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    relaxed_cost(inst, &yf, x)
}

/// `f(y, x)` with `y` allowed to take any real value.
pub fn relaxed_cost(inst: &MipInstance, y: &[f64], x: &[f64]) -> Result<f64> {
    let k = inst.lines();
    for (field, len) in [("y", y.len()), ("x", x.len())] {
        if len != k {
            return Err(Error::ShapeMismatch {
                field,
                expected: k.to_string(),
                actual: len.to_string(),
            });
        }
    }
    let mut cost = 0.0;
    for i in 0..k {
        cost += (inst.unit_cost[i] - inst.cost_reduction[i] * y[i]) * x[i]
            + inst.quadratic[i] * x[i] * x[i]
            + inst.investment[i] * y[i];
    }
    let excess = x.iter().sum::<f64>() - inst.total;
    Ok(cost + inst.penalty_weight * excess * excess)
}

/// Driver parameters: `Σ (B_i/2) σx + Σ ω_i a†a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MipDriver {
    pub transverse_field: Vec<f64>,
    pub resonator_frequency: Vec<f64>,
}

impl MipDriver {
    pub fn uniform(lines: usize, transverse_field: f64, resonator_frequency: f64) -> Self {
        Self {
            transverse_field: vec![transverse_field; lines],
            resonator_frequency: vec![resonator_frequency; lines],
        }
    }
}

/// An encoded instance. `K` qubits followed by `K` resonators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedMip {
    pub instance: MipInstance,
    pub driver: MipDriver,
    /// Coefficient form in which every squared quadrature is replaced by
    /// `a†a` and every cross product `x_i x_j` by `(a_i a_j† + a_i† a_j)/2`.
    /// Its driver is the same as the literal encoding's.
    pub spec: HybridProblemSpec,
}

pub fn encode(inst: &MipInstance, driver: &MipDriver) -> Result<EncodedMip> {
    inst.validate()?;
    let k = inst.lines();
    for (field, v) in [
        ("transverse_field", &driver.transverse_field),
        ("resonator_frequency", &driver.resonator_frequency),
    ] {
        if v.len() != k {
            return Err(Error::ShapeMismatch {
                field,
                expected: k.to_string(),
                actual: v.len().to_string(),
            });
        }
    }
    let lam = inst.penalty_weight;
    let a = inst.total;
    let mut spec = HybridProblemSpec::zeros(k, k);
    for i in 0..k {
        let (b, c, ct, d) = (
            inst.investment[i],
            inst.unit_cost[i],
            inst.cost_reduction[i],
            inst.quadratic[i],
        );
        // b(𝟙+σz)/2 = b/2 + (b/2)σz
        spec.h[i] = b / 2.0;
        // −c̃ (𝟙+σz)/2 · (a+a†)/2 contributes −(c̃/4) σz (a+a†)
        spec.displacement_coupling[i][i] = -ct / 4.0;
        spec.resonator_drive[i] = (c - ct / 2.0) / 2.0 - lam * a;
        spec.resonator_frequency[i] = d + lam;
        for j in i + 1..k {
            spec.hopping[i][j] = lam;
        }
        spec.transverse_field[i] = driver.transverse_field[i] / 2.0;
    }
    spec.driver_frequency = Some(driver.resonator_frequency.clone());
    spec.energy_offset = inst.investment.iter().sum::<f64>() / 2.0 + lam * a * a;
    spec.validate()?;
    Ok(EncodedMip {
        instance: inst.clone(),
        driver: driver.clone(),
        spec,
    })
}

impl EncodedMip {
    pub fn lines(&self) -> usize {
        self.instance.lines()
    }

    /// `K` qubits then `K` resonators truncated at `n` levels.
    pub fn space(&self, truncation: usize) -> Result<HilbertSpace> {
        HilbertSpace::qubits_and_resonators(self.lines(), self.lines(), truncation)
    }

    /// Problem Hamiltonian with the penalty built as the square of the
    /// operator `Σ (a_i+a_i†)/2 − A𝟙`:
    ///
    /// ```text
    /// Σ (c_i − c̃_i(𝟙+σz)/2)(a+a†)/2 + Σ d_i a†a + Σ b_i(𝟙+σz)/2 + λ(Σ(a+a†)/2 − A)²
    /// ```
    pub fn problem_hamiltonian(&self, space: &HilbertSpace) -> Result<LinOp> {
        self.check_space(space)?;
        let inst = &self.instance;
        let id = LinOp::identity_on(space);
        let sz = pauli(PauliAxis::Z);
        let up = (&identity(2)? + &sz).scale(0.5);
        let mut h = LinOp::zeros(space);
        let mut sum_x = id.scale(-inst.total);
        for i in 0..self.lines() {
            let n = space.truncation(i)?;
            let (qs, rs) = (space.qubit_site(i)?, space.resonator_site(i)?);
            let q = quadrature(n)?;
            let x = embed(space, rs, &q)?;
            let yx = embed_product(space, &[(qs, &up), (rs, &q)])?;
            h = &h + &(&x.scale(inst.unit_cost[i]) - &yx.scale(inst.cost_reduction[i]));
            h = &h + &embed(space, rs, &number(n)?)?.scale(inst.quadratic[i]);
            h = &h + &embed(space, qs, &up)?.scale(inst.investment[i]);
            sum_x = &sum_x + &x;
        }
        h = &h + &(&sum_x * &sum_x).scale(inst.penalty_weight);
        h.ensure_hermitian(HERMITIAN_TOL)?;
        Ok(h)
    }

    /// Problem Hamiltonian of [`EncodedMip::spec`].
    pub fn replacement_hamiltonian(&self, space: &HilbertSpace) -> Result<LinOp> {
        build_problem_hamiltonian(&self.spec, space)
    }

    /// `Σ (B_i/2) σx + Σ ω_i a†a`.
    pub fn driver_hamiltonian(&self, space: &HilbertSpace) -> Result<LinOp> {
        build_driver_hamiltonian(&self.spec, space)
    }

    fn check_space(&self, space: &HilbertSpace) -> Result<()> {
        let k = self.lines();
        if space.num_qubits() != k || space.num_resonators() != k || space.sites().len() != 2 * k {
            return Err(Error::ShapeMismatch {
                field: "space",
                expected: format!("{k} qubits then {k} resonators"),
                actual: space.describe(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodedSolution {
    /// `⟨(𝟙+σz)/2⟩` per qubit.
    pub y: Vec<f64>,
    /// `⟨(a+a†)/2⟩` per resonator.
    pub x: Vec<f64>,
    pub y_rounded: Vec<bool>,
    /// `f(y_rounded, x)`.
    pub cost: f64,
    /// Every `x_i ≥ 0`.
    pub nonnegative: bool,
}

/// Rounds at 0.5; a tie counts as no investment.
pub fn round_y(y: f64) -> bool {
    y > 0.5
}

/// Reads `y` and `x` off a state of an encoded instance.
pub fn decode(inst: &MipInstance, state: &StateVector) -> Result<DecodedSolution> {
    let space = state.space();
    let k = inst.lines();
    if space.num_qubits() != k || space.num_resonators() != k {
        return Err(Error::ShapeMismatch {
            field: "state",
            expected: format!("{k} qubits and {k} resonators"),
            actual: space.describe(),
        });
    }
    let id = LinOp::identity_on(space);
    let sz = pauli(PauliAxis::Z);
    let mut y = Vec::with_capacity(k);
    let mut x = Vec::with_capacity(k);
    for i in 0..k {
        let yi = (&id + &space.qubit_op(i, &sz)?).scale(0.5);
        y.push(expectation(&yi, state)?.value);
        let xi = space.resonator_op(i, &quadrature(space.truncation(i)?)?)?;
        x.push(expectation(&xi, state)?.value);
    }
    let y_rounded: Vec<bool> = y.iter().map(|&v| round_y(v)).collect();
    let cost = penalized_cost(inst, &y_rounded, &x)?;
    Ok(DecodedSolution {
        nonnegative: x.iter().all(|&v| v >= 0.0),
        y,
        x,
        y_rounded,
        cost,
    })
}
