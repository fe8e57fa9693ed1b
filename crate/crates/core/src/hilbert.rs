//! Operator algebra on truncated composite Hilbert spaces.
//!
//! A [`HilbertSpace`] is an ordered list of sites, each either a qubit
//! (dimension 2) or a bosonic mode truncated to `N` Fock levels. The
//! composite basis is the Kronecker product in site order, with the first
//! site as the most significant index. Builders in this crate always place
//! qubits first, then resonators, each in declaration order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    Qubit,
    /// Bosonic mode truncated to the given number of Fock levels.
    Resonator(usize),
}

impl Site {
    pub fn dim(&self) -> usize {
        match self {
            Site::Qubit => 2,
            Site::Resonator(n) => *n,
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Qubit => write!(f, "qubit"),
            Site::Resonator(n) => write!(f, "resonator(N={n})"),
        }
    }
}

/// Composite space descriptor. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    sites: Vec<Site>,
    total_dim: usize,
}

impl HilbertSpace {
    pub fn new(sites: Vec<Site>) -> Result<Self> {
        for site in &sites {
            if let Site::Resonator(n) = site {
                if *n < 2 {
                    return Err(Error::InvalidTruncation(*n));
                }
            }
        }
        let total_dim = sites.iter().map(Site::dim).product();
        Ok(Self { sites, total_dim })
    }

    /// `qubits` qubits followed by `resonators` modes, all truncated at `truncation`.
    pub fn qubits_and_resonators(
        qubits: usize,
        resonators: usize,
        truncation: usize,
    ) -> Result<Self> {
        let mut sites = vec![Site::Qubit; qubits];
        sites.extend(std::iter::repeat(Site::Resonator(truncation)).take(resonators));
        Self::new(sites)
    }

    /// A one-site space of the given dimension (used for local operators).
    pub fn single(dim: usize) -> Result<Self> {
        if dim == 2 {
            Self::new(vec![Site::Qubit])
        } else {
            Self::new(vec![Site::Resonator(dim)])
        }
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn num_qubits(&self) -> usize {
        self.sites.iter().filter(|s| matches!(s, Site::Qubit)).count()
    }

    pub fn num_resonators(&self) -> usize {
        self.sites.len() - self.num_qubits()
    }

    /// Site index of the `i`-th qubit.
    pub fn qubit_site(&self, i: usize) -> Result<usize> {
        self.sites
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Site::Qubit))
            .nth(i)
            .map(|(k, _)| k)
            .ok_or(Error::SiteOutOfRange {
                index: i,
                sites: self.num_qubits(),
            })
    }

    /// Site index of the `m`-th resonator.
    pub fn resonator_site(&self, m: usize) -> Result<usize> {
        self.sites
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Site::Resonator(_)))
            .nth(m)
            .map(|(k, _)| k)
            .ok_or(Error::SiteOutOfRange {
                index: m,
                sites: self.num_resonators(),
            })
    }

    /// Truncation of the `m`-th resonator.
    pub fn truncation(&self, m: usize) -> Result<usize> {
        Ok(self.sites[self.resonator_site(m)?].dim())
    }

    /// Human-readable site order, e.g. `qubit,qubit,resonator(N=8)`.
    pub fn describe(&self) -> String {
        self.sites
            .iter()
            .map(Site::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Embedded operator `local` acting on the `i`-th qubit.
    pub fn qubit_op(&self, i: usize, local: &LinOp) -> Result<LinOp> {
        embed(self, self.qubit_site(i)?, local)
    }

    /// Embedded operator `local` acting on the `m`-th resonator.
    pub fn resonator_op(&self, m: usize, local: &LinOp) -> Result<LinOp> {
        embed(self, self.resonator_site(m)?, local)
    }
}

/// Dense complex operator on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinOp {
    space: HilbertSpace,
    matrix: DMatrix<C64>,
}

impl LinOp {
    pub fn new(space: HilbertSpace, matrix: DMatrix<C64>) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space: space.clone(),
            matrix: DMatrix::zeros(d, d),
        }
    }

    pub fn identity_on(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space: space.clone(),
            matrix: DMatrix::identity(d, d),
        }
    }

    /// Builds a real diagonal operator.
    pub fn diagonal(space: &HilbertSpace, diag: &[f64]) -> Result<Self> {
        let d = space.total_dim();
        if diag.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: diag.len(),
            });
        }
        let v = DVector::from_iterator(d, diag.iter().map(|&x| C64::new(x, 0.0)));
        Ok(Self {
            space: space.clone(),
            matrix: DMatrix::from_diagonal(&v),
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * C64::new(factor, 0.0),
        }
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * factor,
        }
    }

    /// `max |M - M†|` over all entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                let dev = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let dev = self.hermitian_deviation();
        if dev < tol {
            Ok(())
        } else {
            Err(Error::NotHermitian(dev))
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Largest entry-wise difference to `other` (spaces must match).
    pub fn max_abs_diff(&self, other: &LinOp) -> Result<f64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm())))
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<DVector<C64>> {
        if self.space != psi.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(&self.matrix * &psi.amplitudes)
    }

    fn assert_same_space(&self, other: &LinOp) {
        assert!(
            self.space == other.space,
            "operator arithmetic across different spaces: [{}] vs [{}]",
            self.space.describe(),
            other.space.describe()
        );
    }
}

impl Add for &LinOp {
    type Output = LinOp;
    fn add(self, rhs: &LinOp) -> LinOp {
        self.assert_same_space(rhs);
        LinOp {
            space: self.space.clone(),
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Add for LinOp {
    type Output = LinOp;
    fn add(self, rhs: LinOp) -> LinOp {
        &self + &rhs
    }
}

impl Sub for &LinOp {
    type Output = LinOp;
    fn sub(self, rhs: &LinOp) -> LinOp {
        self.assert_same_space(rhs);
        LinOp {
            space: self.space.clone(),
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Sub for LinOp {
    type Output = LinOp;
    fn sub(self, rhs: LinOp) -> LinOp {
        &self - &rhs
    }
}

impl Mul for &LinOp {
    type Output = LinOp;
    fn mul(self, rhs: &LinOp) -> LinOp {
        self.assert_same_space(rhs);
        LinOp {
            space: self.space.clone(),
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Mul for LinOp {
    type Output = LinOp;
    fn mul(self, rhs: LinOp) -> LinOp {
        &self * &rhs
    }
}

impl Mul<&LinOp> for f64 {
    type Output = LinOp;
    fn mul(self, rhs: &LinOp) -> LinOp {
        rhs.scale(self)
    }
}

impl Mul<LinOp> for f64 {
    type Output = LinOp;
    fn mul(self, rhs: LinOp) -> LinOp {
        rhs.scale(self)
    }
}

impl Neg for LinOp {
    type Output = LinOp;
    fn neg(self) -> LinOp {
        self.scale(-1.0)
    }
}

/// Normalized state on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Wraps raw amplitudes without renormalizing.
    pub fn from_amplitudes(space: HilbertSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                actual: amplitudes.len(),
            });
        }
        Ok(Self { space, amplitudes })
    }

    /// Wraps and normalizes.
    pub fn normalized(space: HilbertSpace, amplitudes: DVector<C64>) -> Result<Self> {
        let mut psi = Self::from_amplitudes(space, amplitudes)?;
        let n = psi.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        psi.amplitudes /= C64::new(n, 0.0);
        Ok(psi)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(space: &HilbertSpace, index: usize) -> Result<Self> {
        let d = space.total_dim();
        if index >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: index,
            });
        }
        let mut amps = DVector::zeros(d);
        amps[index] = ONE;
        Ok(Self {
            space: space.clone(),
            amplitudes: amps,
        })
    }

    /// Tensor product of per-site vectors in site order. The result is normalized.
    pub fn product(space: &HilbertSpace, locals: &[DVector<C64>]) -> Result<Self> {
        if locals.len() != space.sites().len() {
            return Err(Error::DimensionMismatch {
                expected: space.sites().len(),
                actual: locals.len(),
            });
        }
        let mut acc = DVector::from_element(1, ONE);
        for (site, v) in space.sites().iter().zip(locals) {
            if v.len() != site.dim() {
                return Err(Error::DimensionMismatch {
                    expected: site.dim(),
                    actual: v.len(),
                });
            }
            acc = acc.kronecker(v);
        }
        Self::normalized(space.clone(), acc)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() < tol
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `1 - |⟨self|other⟩|²`, insensitive to global phase.
    pub fn overlap_deficit(&self, other: &StateVector) -> Result<f64> {
        Ok(1.0 - self.inner(other)?.norm_sqr())
    }
}

/// Expectation value split into its real part and the imaginary residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub value: f64,
    pub imaginary_residue: f64,
}

/// `a` on a single mode: `a[n, n+1] = √(n+1)`.
pub fn annihilation(n: usize) -> Result<LinOp> {
    if n < 2 {
        return Err(Error::InvalidTruncation(n));
    }
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n - 1 {
        m[(k, k + 1)] = C64::new(((k + 1) as f64).sqrt(), 0.0);
    }
    LinOp::new(HilbertSpace::single(n)?, m)
}

pub fn creation(n: usize) -> Result<LinOp> {
    Ok(annihilation(n)?.adjoint())
}

/// `a†a = diag(0, 1, …, N−1)`.
pub fn number(n: usize) -> Result<LinOp> {
    if n < 2 {
        return Err(Error::InvalidTruncation(n));
    }
    let diag: Vec<f64> = (0..n).map(|k| k as f64).collect();
    LinOp::diagonal(&HilbertSpace::single(n)?, &diag)
}

/// Position quadrature `(a + a†)/2` on a single mode.
pub fn quadrature(n: usize) -> Result<LinOp> {
    let a = annihilation(n)?;
    Ok((&a + &a.adjoint()).scale(0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: PauliAxis) -> LinOp {
    let i = C64::new(0.0, 1.0);
    let m = match axis {
        PauliAxis::X => DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        PauliAxis::Y => DMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]),
        PauliAxis::Z => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    };
    LinOp {
        space: HilbertSpace::single(2).expect("qubit space"),
        matrix: m,
    }
}

pub fn identity(dim: usize) -> Result<LinOp> {
    if dim < 2 {
        return Err(Error::InvalidTruncation(dim));
    }
    Ok(LinOp::identity_on(&HilbertSpace::single(dim)?))
}

/// `𝟙 ⊗ … ⊗ local ⊗ … ⊗ 𝟙` with `local` at `site_index`.
pub fn embed(space: &HilbertSpace, site_index: usize, local: &LinOp) -> Result<LinOp> {
    let sites = space.sites();
    if site_index >= sites.len() {
        return Err(Error::SiteOutOfRange {
            index: site_index,
            sites: sites.len(),
        });
    }
    let site_dim = sites[site_index].dim();
    if local.dim() != site_dim {
        return Err(Error::DimensionMismatch {
            expected: site_dim,
            actual: local.dim(),
        });
    }
    let left: usize = sites[..site_index].iter().map(Site::dim).product();
    let right: usize = sites[site_index + 1..].iter().map(Site::dim).product();
    let inner = local.matrix.kronecker(&DMatrix::<C64>::identity(right, right));
    let matrix = DMatrix::<C64>::identity(left, left).kronecker(&inner);
    LinOp::new(space.clone(), matrix)
}

/// Product of local operators on distinct sites, identity elsewhere.
///
/// Equivalent to multiplying the individual embeddings but built directly as
/// one Kronecker product.
pub fn embed_product(space: &HilbertSpace, factors: &[(usize, &LinOp)]) -> Result<LinOp> {
    let sites = space.sites();
    let mut locals: Vec<Option<&LinOp>> = vec![None; sites.len()];
    for &(site, op) in factors {
        if site >= sites.len() {
            return Err(Error::SiteOutOfRange {
                index: site,
                sites: sites.len(),
            });
        }
        if op.dim() != sites[site].dim() {
            return Err(Error::DimensionMismatch {
                expected: sites[site].dim(),
                actual: op.dim(),
            });
        }
        match locals[site] {
            None => locals[site] = Some(op),
            Some(_) => {
                return Err(Error::InvalidInstance(format!(
                    "site {site} appears twice in a product embedding"
                )))
            }
        }
    }
    let mut acc = DMatrix::from_element(1, 1, ONE);
    let mut pending_identity = 1usize;
    for (site, local) in sites.iter().zip(&locals) {
        match local {
            None => pending_identity *= site.dim(),
            Some(op) => {
                if pending_identity > 1 {
                    acc = acc.kronecker(&DMatrix::<C64>::identity(pending_identity, pending_identity));
                    pending_identity = 1;
                }
                acc = acc.kronecker(op.matrix());
            }
        }
    }
    if pending_identity > 1 {
        acc = acc.kronecker(&DMatrix::<C64>::identity(pending_identity, pending_identity));
    }
    LinOp::new(space.clone(), acc)
}

/// Per-site basis labels of composite basis index `index` (first site most significant).
pub fn basis_digits(space: &HilbertSpace, mut index: usize) -> Vec<usize> {
    let sites = space.sites();
    let mut digits = vec![0; sites.len()];
    for (k, site) in sites.iter().enumerate().rev() {
        digits[k] = index % site.dim();
        index /= site.dim();
    }
    digits
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &LinOp, b: &LinOp) -> Result<LinOp> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(&(a * b) - &(b * a))
}

/// `⟨ψ|op|ψ⟩` as a complex number.
pub fn expectation_complex(op: &LinOp, psi: &StateVector) -> Result<C64> {
    let v = op.apply(psi)?;
    Ok(psi.amplitudes.dotc(&v))
}

/// `⟨ψ|op|ψ⟩` for an observable; the imaginary part is reported, not discarded silently.
pub fn expectation(op: &LinOp, psi: &StateVector) -> Result<Expectation> {
    let z = expectation_complex(op, psi)?;
    Ok(Expectation {
        value: z.re,
        imaginary_residue: z.im.abs(),
    })
}

/// Coherent state `|α⟩` expanded in the first `n` Fock levels and renormalized
/// after truncation. Test and diagnostic helper.
pub fn coherent_state(n: usize, alpha: C64) -> Result<DVector<C64>> {
    if n < 2 {
        return Err(Error::InvalidTruncation(n));
    }
    let mut v = DVector::zeros(n);
    let mut coef = ONE;
    for k in 0..n {
        if k > 0 {
            coef = coef * alpha / (k as f64).sqrt();
        }
        v[k] = coef;
    }
    let norm = v.norm();
    Ok(v / C64::new(norm, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn ladder_matrices() {
        let a2 = annihilation(2).unwrap();
        assert_eq!(a2.matrix()[(0, 1)], c(1.0));
        assert_eq!(a2.matrix()[(0, 0)], c(0.0));
        assert_eq!(a2.matrix()[(1, 0)], c(0.0));
        assert_eq!(a2.matrix()[(1, 1)], c(0.0));

        let a3 = annihilation(3).unwrap();
        assert_eq!(a3.matrix()[(0, 1)], c(1.0));
        assert_eq!(a3.matrix()[(1, 2)], c(2f64.sqrt()));
        assert_eq!(a3.max_abs(), 2f64.sqrt());

        let adag = creation(3).unwrap();
        assert_eq!(adag.matrix(), &a3.matrix().adjoint());
    }

    #[test]
    fn invalid_truncation() {
        assert!(matches!(annihilation(1), Err(Error::InvalidTruncation(1))));
        assert!(matches!(number(0), Err(Error::InvalidTruncation(0))));
        assert!(HilbertSpace::new(vec![Site::Qubit, Site::Resonator(1)]).is_err());
    }

    #[test]
    fn number_and_pauli() {
        let n3 = number(3).unwrap();
        for k in 0..3 {
            assert_eq!(n3.matrix()[(k, k)], c(k as f64));
        }
        let z = pauli(PauliAxis::Z);
        assert_eq!(z.matrix()[(0, 0)], c(1.0));
        assert_eq!(z.matrix()[(1, 1)], c(-1.0));
        let id = identity(2).unwrap();
        for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
            let p = pauli(axis);
            assert_eq!((&p * &p).matrix(), id.matrix());
            assert_eq!(p.hermitian_deviation(), 0.0);
        }
    }

    #[test]
    fn truncated_canonical_commutator() {
        // Entries are squares of square roots, so allow a few ulps.
        for n in 2..12 {
            let a = annihilation(n).unwrap();
            let comm = commutator(&a, &a.adjoint()).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let expected = if i != j {
                        0.0
                    } else if i == n - 1 {
                        1.0 - n as f64
                    } else {
                        1.0
                    };
                    let got = comm.matrix()[(i, j)];
                    assert_eq!(got.im, 0.0, "N={n} ({i},{j})");
                    assert!(
                        (got.re - expected).abs() <= 4.0 * f64::EPSILON * n as f64,
                        "N={n} ({i},{j}): {got}"
                    );
                }
            }
        }
    }

    #[test]
    fn embed_site_order() {
        let space = HilbertSpace::qubits_and_resonators(2, 0, 2).unwrap();
        let z0 = embed(&space, 0, &pauli(PauliAxis::Z)).unwrap();
        let diag: Vec<f64> = (0..4).map(|k| z0.matrix()[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
        let z1 = embed(&space, 1, &pauli(PauliAxis::Z)).unwrap();
        let diag: Vec<f64> = (0..4).map(|k| z1.matrix()[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn embed_identity_and_errors() {
        let space = HilbertSpace::qubits_and_resonators(1, 2, 3).unwrap();
        assert_eq!(space.total_dim(), 18);
        for site in 0..3 {
            let id = identity(space.sites()[site].dim()).unwrap();
            let e = embed(&space, site, &id).unwrap();
            assert_eq!(e, LinOp::identity_on(&space));
        }
        assert!(matches!(
            embed(&space, 3, &pauli(PauliAxis::X)),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(matches!(
            embed(&space, 1, &pauli(PauliAxis::X)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn embed_product_matches_embedding_products() {
        let space = HilbertSpace::qubits_and_resonators(2, 2, 3).unwrap();
        let z = pauli(PauliAxis::Z);
        let a = annihilation(3).unwrap();
        let direct = embed_product(&space, &[(1, &z), (3, &a)]).unwrap();
        let via = &embed(&space, 1, &z).unwrap() * &embed(&space, 3, &a).unwrap();
        assert_eq!(direct.max_abs_diff(&via).unwrap(), 0.0);
        assert!(embed_product(&space, &[(1, &z), (1, &z)]).is_err());
    }

    #[test]
    fn basis_digit_decomposition() {
        let space = HilbertSpace::qubits_and_resonators(1, 2, 3).unwrap();
        assert_eq!(basis_digits(&space, 0), vec![0, 0, 0]);
        assert_eq!(basis_digits(&space, 17), vec![1, 2, 2]);
        assert_eq!(basis_digits(&space, 5), vec![0, 1, 2]);
    }

    #[test]
    fn distinct_sites_commute() {
        let space = HilbertSpace::qubits_and_resonators(1, 2, 4).unwrap();
        let a = annihilation(4).unwrap();
        let a0 = space.resonator_op(0, &a).unwrap();
        let a1dag = space.resonator_op(1, &a.adjoint()).unwrap();
        assert_eq!(commutator(&a0, &a1dag).unwrap().max_abs(), 0.0);
        let sx = space.qubit_op(0, &pauli(PauliAxis::X)).unwrap();
        assert_eq!(commutator(&sx, &a0).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn vacuum_and_coherent_expectations() {
        let space = HilbertSpace::single(8).unwrap();
        let vac = StateVector::basis(&space, 0).unwrap();
        let n = number(8).unwrap();
        assert_eq!(expectation(&n, &vac).unwrap().value, 0.0);

        // Independent check: ⟨α|a|α⟩ summed directly from the Fock coefficients.
        let alpha: f64 = 0.5;
        let nmax = 20;
        let coeffs: Vec<f64> = (0..nmax)
            .map(|k| {
                let fact: f64 = (1..=k).map(|j| j as f64).product();
                (-alpha * alpha / 2.0).exp() * alpha.powi(k as i32) / fact.sqrt()
            })
            .collect();
        let norm2: f64 = coeffs.iter().map(|c| c * c).sum();
        let direct: f64 = (0..nmax - 1)
            .map(|k| coeffs[k] * coeffs[k + 1] * ((k + 1) as f64).sqrt())
            .sum::<f64>()
            / norm2;
        assert!((direct - alpha).abs() < 1e-8);

        let space = HilbertSpace::single(nmax).unwrap();
        let psi =
            StateVector::normalized(space, coherent_state(nmax, c(alpha)).unwrap()).unwrap();
        let e = expectation(&quadrature(nmax).unwrap(), &psi).unwrap();
        assert!((e.value - alpha).abs() < 1e-8);
        assert!((e.value - direct).abs() < 1e-12);
        assert!(e.imaginary_residue < 1e-12);
    }

    #[test]
    fn expectation_space_mismatch() {
        let psi = StateVector::basis(&HilbertSpace::single(3).unwrap(), 0).unwrap();
        assert!(matches!(
            expectation(&pauli(PauliAxis::Z), &psi),
            Err(Error::SpaceMismatch)
        ));
        assert!(commutator(&pauli(PauliAxis::Z), &number(3).unwrap()).is_err());
    }

    #[test]
    fn product_state_matches_kron() {
        let space = HilbertSpace::qubits_and_resonators(1, 1, 3).unwrap();
        let minus = DVector::from_vec(vec![c(1.0), c(-1.0)]);
        let vac = DVector::from_vec(vec![c(1.0), c(0.0), c(0.0)]);
        let psi = StateVector::product(&space, &[minus, vac]).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((psi.amplitudes()[0] - c(h)).norm() < 1e-15);
        assert!((psi.amplitudes()[3] - c(-h)).norm() < 1e-15);
        assert!(psi.is_normalized(1e-14));
    }
}
