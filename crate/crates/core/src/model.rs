//! Hamiltonian builders.
//!
//! Every Hamiltonian is assembled from a [`HybridProblemSpec`] on a space with
//! the spec's qubits first and resonators after them:
//!
//! - [`build_problem_hamiltonian`]: discrete + continuous + interaction parts,
//!   `Σ h σz + Σ J σzσz + Σ (g σz a†a + g̃ σz (a+a†)) + Σ (ω_c a†a + λ (a+a†)) + Σ J̃ (a_i a_j† + a_i† a_j)`.
//! - [`build_driver_hamiltonian`]: `Σ ω a†a + Σ B σx`.
//! - [`build_lab_frame`]: the microwave-driven forms, where the displacement and
//!   transverse terms are modulated by `cos(ω t)` and the qubit splitting is `h/2`.
//! - [`build_effective`]: rotating-frame forms after the rotating-wave approximation.
//! - [`rotating_transform`]: the diagonal frame change `exp(iωt(Σ σz/2 + Σ a†a))`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    annihilation, basis_digits, embed, embed_product, number, pauli, HilbertSpace, LinOp,
    PauliAxis, Site,
};
use crate::C64;

/// Tolerance used when checking builder outputs for Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Coefficient record shared by every builder.
///
/// Qubit–qubit couplings `J` and resonator hopping `J̃` are square matrices of
/// which only the strict upper triangle may be nonzero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridProblemSpec {
    pub qubits: usize,
    pub resonators: usize,
    /// Longitudinal qubit coefficients `h_i`.
    pub h: Vec<f64>,
    /// `J_ij`, i < j.
    pub qubit_coupling: Vec<Vec<f64>>,
    /// `g_ij σz^(i) a_j† a_j`, shape L × M.
    pub number_coupling: Vec<Vec<f64>>,
    /// `g̃_ij σz^(i) (a_j + a_j†)`, shape L × M.
    pub displacement_coupling: Vec<Vec<f64>>,
    /// `ω_c`.
    pub resonator_frequency: Vec<f64>,
    /// `λ_i (a_i + a_i†)`.
    pub resonator_drive: Vec<f64>,
    /// `J̃_ij`, i < j.
    pub hopping: Vec<Vec<f64>>,
    /// Transverse field `B_i` of the driver.
    pub transverse_field: Vec<f64>,
    /// Resonator frequencies used by the driver; defaults to `ω_c` when absent.
    #[serde(default)]
    pub driver_frequency: Option<Vec<f64>>,
    /// Frequency of the applied oscillating field (rotating-frame builders only).
    #[serde(default)]
    pub drive_frequency: Option<f64>,
    /// Constant added to the problem Hamiltonian.
    #[serde(default)]
    pub energy_offset: f64,
}

impl HybridProblemSpec {
    /// All coefficients zero.
    pub fn zeros(qubits: usize, resonators: usize) -> Self {
        Self {
            qubits,
            resonators,
            h: vec![0.0; qubits],
            qubit_coupling: vec![vec![0.0; qubits]; qubits],
            number_coupling: vec![vec![0.0; resonators]; qubits],
            displacement_coupling: vec![vec![0.0; resonators]; qubits],
            resonator_frequency: vec![0.0; resonators],
            resonator_drive: vec![0.0; resonators],
            hopping: vec![vec![0.0; resonators]; resonators],
            transverse_field: vec![0.0; qubits],
            driver_frequency: None,
            drive_frequency: None,
            energy_offset: 0.0,
        }
    }

    /// The single qubit–single resonator system with `J = J̃ = 0`.
    #[allow(clippy::too_many_arguments)]
    pub fn single_pair(
        drive_frequency: f64,
        h: f64,
        resonator_frequency: f64,
        transverse_field: f64,
        resonator_drive: f64,
        number_coupling: f64,
        displacement_coupling: f64,
    ) -> Self {
        let mut spec = Self::zeros(1, 1);
        spec.h = vec![h];
        spec.resonator_frequency = vec![resonator_frequency];
        spec.transverse_field = vec![transverse_field];
        spec.resonator_drive = vec![resonator_drive];
        spec.number_coupling = vec![vec![number_coupling]];
        spec.displacement_coupling = vec![vec![displacement_coupling]];
        spec.drive_frequency = Some(drive_frequency);
        spec
    }

    pub fn validate(&self) -> Result<()> {
        let (l, m) = (self.qubits, self.resonators);
        check_len("h", &self.h, l)?;
        check_len("transverse_field", &self.transverse_field, l)?;
        check_len("resonator_frequency", &self.resonator_frequency, m)?;
        check_len("resonator_drive", &self.resonator_drive, m)?;
        if let Some(w) = &self.driver_frequency {
            check_len("driver_frequency", w, m)?;
        }
        check_matrix("qubit_coupling", &self.qubit_coupling, l, l)?;
        check_matrix("number_coupling", &self.number_coupling, l, m)?;
        check_matrix("displacement_coupling", &self.displacement_coupling, l, m)?;
        check_matrix("hopping", &self.hopping, m, m)?;
        check_upper("qubit_coupling", &self.qubit_coupling)?;
        check_upper("hopping", &self.hopping)?;
        if let Some(w) = self.drive_frequency {
            if !w.is_finite() {
                return Err(Error::NonFinite("drive_frequency"));
            }
        }
        if !self.energy_offset.is_finite() {
            return Err(Error::NonFinite("energy_offset"));
        }
        Ok(())
    }

    fn check_space(&self, space: &HilbertSpace) -> Result<()> {
        self.validate()?;
        let sites = space.sites();
        let layout_ok = sites.len() == self.qubits + self.resonators
            && sites[..self.qubits].iter().all(|s| matches!(s, Site::Qubit))
            && sites[self.qubits..]
                .iter()
                .all(|s| matches!(s, Site::Resonator(_)));
        if !layout_ok {
            return Err(Error::ShapeMismatch {
                field: "space",
                expected: format!("{} qubits then {} resonators", self.qubits, self.resonators),
                actual: space.describe(),
            });
        }
        Ok(())
    }

    fn drive(&self) -> Result<f64> {
        self.drive_frequency.ok_or(Error::MissingDriveFrequency)
    }

    /// Largest drive-side coupling `max(|g̃|, |λ|, |B|)`; sets the size of the
    /// counter-rotating corrections relative to the drive frequency.
    pub fn max_drive_coupling(&self) -> f64 {
        self.displacement_coupling
            .iter()
            .flatten()
            .chain(&self.resonator_drive)
            .chain(&self.transverse_field)
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

fn check_len(field: &'static str, v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::ShapeMismatch {
            field,
            expected: n.to_string(),
            actual: v.len().to_string(),
        });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(field));
    }
    Ok(())
}

fn check_matrix(field: &'static str, m: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    let ok = m.len() == rows && m.iter().all(|r| r.len() == cols);
    if !ok {
        return Err(Error::ShapeMismatch {
            field,
            expected: format!("{rows}x{cols}"),
            actual: format!("{}x{}", m.len(), m.first().map_or(0, Vec::len)),
        });
    }
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(field));
    }
    Ok(())
}

fn check_upper(field: &'static str, m: &[Vec<f64>]) -> Result<()> {
    for (i, row) in m.iter().enumerate() {
        if row.iter().take(i + 1).any(|&x| x != 0.0) {
            return Err(Error::ShapeMismatch {
                field,
                expected: "strictly upper-triangular".into(),
                actual: format!("nonzero entry in row {i} on or below the diagonal"),
            });
        }
    }
    Ok(())
}

/// Position along the schedule: `s = t / T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSample {
    pub t: f64,
    pub s: f64,
}

impl ScheduleSample {
    pub fn new(t: f64, total_time: f64) -> Result<Self> {
        let s = t / total_time;
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::ScheduleOutOfRange(s));
        }
        Ok(Self { t, s })
    }

    pub fn at_fraction(s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::ScheduleOutOfRange(s));
        }
        Ok(Self { t: s, s })
    }
}

/// Embedded single-site operators, built once per space.
pub(crate) struct SiteOps {
    pub sz: Vec<LinOp>,
    pub sx: Vec<LinOp>,
    pub num: Vec<LinOp>,
    /// `a + a†`.
    pub disp: Vec<LinOp>,
    local_sz: LinOp,
    local_a: Vec<LinOp>,
    local_disp: Vec<LinOp>,
    local_num: Vec<LinOp>,
    qubit_sites: Vec<usize>,
    resonator_sites: Vec<usize>,
}

impl SiteOps {
    pub fn new(space: &HilbertSpace, qubits: usize, resonators: usize) -> Result<Self> {
        let local_sz = pauli(PauliAxis::Z);
        let local_sx = pauli(PauliAxis::X);
        let qubit_sites: Vec<usize> = (0..qubits)
            .map(|i| space.qubit_site(i))
            .collect::<Result<_>>()?;
        let resonator_sites: Vec<usize> = (0..resonators)
            .map(|m| space.resonator_site(m))
            .collect::<Result<_>>()?;
        let mut local_a = Vec::new();
        let mut local_disp = Vec::new();
        let mut local_num = Vec::new();
        for &site in &resonator_sites {
            let n = space.sites()[site].dim();
            let a = annihilation(n)?;
            local_disp.push(&a + &a.adjoint());
            local_a.push(a);
            local_num.push(number(n)?);
        }
        let sz = qubit_sites
            .iter()
            .map(|&k| embed(space, k, &local_sz))
            .collect::<Result<_>>()?;
        let sx = qubit_sites
            .iter()
            .map(|&k| embed(space, k, &local_sx))
            .collect::<Result<_>>()?;
        let num = resonator_sites
            .iter()
            .zip(&local_num)
            .map(|(&k, op)| embed(space, k, op))
            .collect::<Result<_>>()?;
        let disp = resonator_sites
            .iter()
            .zip(&local_disp)
            .map(|(&k, op)| embed(space, k, op))
            .collect::<Result<_>>()?;
        Ok(Self {
            sz,
            sx,
            num,
            disp,
            local_sz,
            local_a,
            local_disp,
            local_num,
            qubit_sites,
            resonator_sites,
        })
    }

    /// `σz^(i) a_j† a_j`.
    pub fn sz_num(&self, space: &HilbertSpace, i: usize, j: usize) -> Result<LinOp> {
        embed_product(
            space,
            &[
                (self.qubit_sites[i], &self.local_sz),
                (self.resonator_sites[j], &self.local_num[j]),
            ],
        )
    }

    /// `σz^(i) (a_j + a_j†)`.
    pub fn sz_disp(&self, space: &HilbertSpace, i: usize, j: usize) -> Result<LinOp> {
        embed_product(
            space,
            &[
                (self.qubit_sites[i], &self.local_sz),
                (self.resonator_sites[j], &self.local_disp[j]),
            ],
        )
    }

    /// `σz^(i) σz^(j)`.
    pub fn sz_sz(&self, space: &HilbertSpace, i: usize, j: usize) -> Result<LinOp> {
        embed_product(
            space,
            &[
                (self.qubit_sites[i], &self.local_sz),
                (self.qubit_sites[j], &self.local_sz),
            ],
        )
    }

    /// `a_i a_j† + a_i† a_j` for i ≠ j.
    pub fn hop(&self, space: &HilbertSpace, i: usize, j: usize) -> Result<LinOp> {
        let (ai, aj) = (&self.local_a[i], &self.local_a[j]);
        let fwd = embed_product(
            space,
            &[
                (self.resonator_sites[i], ai),
                (self.resonator_sites[j], &aj.adjoint()),
            ],
        )?;
        let back = embed_product(
            space,
            &[
                (self.resonator_sites[i], &ai.adjoint()),
                (self.resonator_sites[j], aj),
            ],
        )?;
        Ok(&fwd + &back)
    }
}

fn accumulate(acc: &mut LinOp, coef: f64, term: &LinOp) {
    if coef != 0.0 {
        *acc = &*acc + &term.scale(coef);
    }
}

/// Parts of a problem Hamiltonian split by how the oscillating field acts on them.
struct ProblemParts {
    /// `σz`, `σzσz`, `σz a†a`, `a†a` and hopping terms (without the qubit splitting).
    fixed: LinOp,
    /// `Σ g̃ σz (a+a†) + Σ λ (a+a†)`.
    displacement: LinOp,
    /// `Σ h σz`.
    splitting: LinOp,
    /// `Σ ω_c a†a`.
    resonator_energy: LinOp,
}

fn problem_parts(spec: &HybridProblemSpec, space: &HilbertSpace) -> Result<ProblemParts> {
    spec.check_space(space)?;
    let ops = SiteOps::new(space, spec.qubits, spec.resonators)?;
    let (l, m) = (spec.qubits, spec.resonators);

    let mut splitting = LinOp::zeros(space);
    for i in 0..l {
        accumulate(&mut splitting, spec.h[i], &ops.sz[i]);
    }
    let mut fixed = LinOp::zeros(space);
    for i in 0..l {
        for j in i + 1..l {
            if spec.qubit_coupling[i][j] != 0.0 {
                accumulate(&mut fixed, spec.qubit_coupling[i][j], &ops.sz_sz(space, i, j)?);
            }
        }
    }
    let mut displacement = LinOp::zeros(space);
    for i in 0..l {
        for j in 0..m {
            if spec.number_coupling[i][j] != 0.0 {
                accumulate(&mut fixed, spec.number_coupling[i][j], &ops.sz_num(space, i, j)?);
            }
            if spec.displacement_coupling[i][j] != 0.0 {
                accumulate(
                    &mut displacement,
                    spec.displacement_coupling[i][j],
                    &ops.sz_disp(space, i, j)?,
                );
            }
        }
    }
    let mut resonator_energy = LinOp::zeros(space);
    for j in 0..m {
        accumulate(&mut resonator_energy, spec.resonator_frequency[j], &ops.num[j]);
        accumulate(&mut displacement, spec.resonator_drive[j], &ops.disp[j]);
    }
    for i in 0..m {
        for j in i + 1..m {
            if spec.hopping[i][j] != 0.0 {
                accumulate(&mut fixed, spec.hopping[i][j], &ops.hop(space, i, j)?);
            }
        }
    }
    if spec.energy_offset != 0.0 {
        fixed = &fixed + &LinOp::identity_on(space).scale(spec.energy_offset);
    }
    Ok(ProblemParts {
        fixed,
        displacement,
        splitting,
        resonator_energy,
    })
}

fn checked(op: LinOp) -> Result<LinOp> {
    op.ensure_hermitian(HERMITIAN_TOL)?;
    Ok(op)
}

/// Hybrid problem Hamiltonian: discrete + continuous + interaction parts.
pub fn build_problem_hamiltonian(spec: &HybridProblemSpec, space: &HilbertSpace) -> Result<LinOp> {
    let p = problem_parts(spec, space)?;
    checked(&(&(&p.fixed + &p.displacement) + &p.splitting) + &p.resonator_energy)
}

/// `Σ ω a†a + Σ B σx` with `ω` the driver frequencies (or `ω_c` when unset).
pub fn build_driver_hamiltonian(spec: &HybridProblemSpec, space: &HilbertSpace) -> Result<LinOp> {
    spec.check_space(space)?;
    let ops = SiteOps::new(space, spec.qubits, spec.resonators)?;
    let freqs = spec
        .driver_frequency
        .as_ref()
        .unwrap_or(&spec.resonator_frequency);
    let mut h = LinOp::zeros(space);
    for (j, &w) in freqs.iter().enumerate() {
        accumulate(&mut h, w, &ops.num[j]);
    }
    for (i, &b) in spec.transverse_field.iter().enumerate() {
        accumulate(&mut h, b, &ops.sx[i]);
    }
    checked(h)
}

/// `(1 − s) H_D + s H_P`.
pub fn total_hamiltonian(driver: &LinOp, problem: &LinOp, sample: ScheduleSample) -> Result<LinOp> {
    if !(0.0..=1.0).contains(&sample.s) {
        return Err(Error::ScheduleOutOfRange(sample.s));
    }
    if driver.space() != problem.space() {
        return Err(Error::SpaceMismatch);
    }
    if sample.s == 0.0 {
        return Ok(driver.clone());
    }
    if sample.s == 1.0 {
        return Ok(problem.clone());
    }
    Ok(&driver.scale(1.0 - sample.s) + &problem.scale(sample.s))
}

/// Lab-frame Hamiltonians split into static and `cos(ωt)`-modulated parts:
/// `H'_P(t) = problem_static + cos(ωt)·problem_drive`, likewise for the driver.
#[derive(Debug, Clone)]
pub struct LabFrameParts {
    pub drive_frequency: f64,
    pub problem_static: LinOp,
    pub problem_drive: LinOp,
    pub driver_static: LinOp,
    pub driver_drive: LinOp,
}

impl LabFrameParts {
    pub fn new(spec: &HybridProblemSpec, space: &HilbertSpace) -> Result<Self> {
        let omega = spec.drive()?;
        let p = problem_parts(spec, space)?;
        let ops = SiteOps::new(space, spec.qubits, spec.resonators)?;
        let half_splitting = p.splitting.scale(0.5);

        let problem_static = &(&p.fixed + &half_splitting) + &p.resonator_energy;
        let problem_drive = p.displacement;

        // The driver uses the same qubit splitting and resonator frequencies as the problem.
        let mut driver_static = &half_splitting + &p.resonator_energy;
        if let Some(w) = &spec.driver_frequency {
            driver_static = half_splitting.clone();
            for (j, &wj) in w.iter().enumerate() {
                accumulate(&mut driver_static, wj, &ops.num[j]);
            }
        }
        let mut driver_drive = LinOp::zeros(space);
        for (i, &b) in spec.transverse_field.iter().enumerate() {
            accumulate(&mut driver_drive, b, &ops.sx[i]);
        }
        Ok(Self {
            drive_frequency: omega,
            problem_static: checked(problem_static)?,
            problem_drive: checked(problem_drive)?,
            driver_static: checked(driver_static)?,
            driver_drive: checked(driver_drive)?,
        })
    }

    /// `(H'_P(t), H'_D(t))`.
    pub fn at(&self, t: f64) -> LabFrame {
        let c = (self.drive_frequency * t).cos();
        LabFrame {
            problem: &self.problem_static + &self.problem_drive.scale(c),
            driver: &self.driver_static + &self.driver_drive.scale(c),
        }
    }
}

/// Lab-frame problem and driver Hamiltonians at one instant.
#[derive(Debug, Clone)]
pub struct LabFrame {
    pub problem: LinOp,
    pub driver: LinOp,
}

impl LabFrame {
    /// `H'(t) = (1 − t/T) H'_D + (t/T) H'_P`.
    pub fn total(&self, sample: ScheduleSample) -> Result<LinOp> {
        total_hamiltonian(&self.driver, &self.problem, sample)
    }
}

/// Lab-frame `H'_P(t)` and `H'_D(t)` under an oscillating field of frequency `ω`.
pub fn build_lab_frame(spec: &HybridProblemSpec, space: &HilbertSpace, t: f64) -> Result<LabFrame> {
    Ok(LabFrameParts::new(spec, space)?.at(t))
}

/// Rotating-frame Hamiltonians after the rotating-wave approximation.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonians {
    pub problem: LinOp,
    pub driver: LinOp,
}

/// `H_P^eff` and `H_D^eff`: qubit splitting `(h − ω)/2`, resonator detuning
/// `ω_c − ω`, displacement drives and transverse fields halved.
pub fn build_effective(
    spec: &HybridProblemSpec,
    space: &HilbertSpace,
) -> Result<EffectiveHamiltonians> {
    let omega = spec.drive()?;
    let mut detuned = spec.clone();
    detuned.h = spec.h.iter().map(|h| (h - omega) / 2.0).collect();
    detuned.resonator_frequency = spec.resonator_frequency.iter().map(|w| w - omega).collect();
    if let Some(w) = &spec.driver_frequency {
        detuned.driver_frequency = Some(w.iter().map(|w| w - omega).collect());
    }
    detuned.displacement_coupling = spec
        .displacement_coupling
        .iter()
        .map(|row| row.iter().map(|g| g / 2.0).collect())
        .collect();
    detuned.resonator_drive = spec.resonator_drive.iter().map(|l| l / 2.0).collect();
    detuned.transverse_field = spec.transverse_field.iter().map(|b| b / 2.0).collect();

    let problem = build_problem_hamiltonian(&detuned, space)?;
    let ops = SiteOps::new(space, spec.qubits, spec.resonators)?;
    let mut driver = build_driver_hamiltonian(&detuned, space)?;
    for i in 0..spec.qubits {
        accumulate(&mut driver, detuned.h[i], &ops.sz[i]);
    }
    Ok(EffectiveHamiltonians {
        problem,
        driver: checked(driver)?,
    })
}

/// Eigenvalue of the frame generator `Σ σz/2 + Σ a†a` on each basis state.
pub fn frame_generator_diagonal(spec: &HybridProblemSpec, space: &HilbertSpace) -> Result<Vec<f64>> {
    spec.check_space(space)?;
    Ok((0..space.total_dim())
        .map(|idx| {
            let digits = basis_digits(space, idx);
            let qubit_part: f64 = digits[..spec.qubits]
                .iter()
                .map(|&d| if d == 0 { 0.5 } else { -0.5 })
                .sum();
            let photons: usize = digits[spec.qubits..].iter().sum();
            qubit_part + photons as f64
        })
        .collect())
}

/// `U(t) = exp(iωt (Σ σz/2 + Σ a†a))`, exponentiated entry by entry on the diagonal.
pub fn rotating_transform(space: &HilbertSpace, spec: &HybridProblemSpec, t: f64) -> Result<LinOp> {
    let omega = spec.drive()?;
    let gen = frame_generator_diagonal(spec, space)?;
    let d = space.total_dim();
    let mut m = DMatrix::zeros(d, d);
    for (k, g) in gen.iter().enumerate() {
        m[(k, k)] = C64::from_polar(1.0, omega * t * g);
    }
    LinOp::new(space.clone(), m)
}
