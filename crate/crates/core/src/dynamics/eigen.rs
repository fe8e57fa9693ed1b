//! Dense Hermitian eigensolver.
//!
//! Real symmetric inputs (every Hamiltonian built in this crate) take the
//! faster real path; general Hermitian inputs use the complex solver.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::hilbert::{LinOp, StateVector};
use crate::C64;

/// Relative Hermiticity tolerance accepted by the solver.
const HERMITIAN_RTOL: f64 = 1e-10;

/// All eigenpairs in ascending order. Each eigenvector is normalized with its
/// largest-magnitude component made real and positive.
pub fn eigh(op: &LinOp) -> Result<(Vec<f64>, Vec<DVector<C64>>)> {
    let scale = op.max_abs().max(1.0);
    let dev = op.hermitian_deviation();
    if dev > HERMITIAN_RTOL * scale {
        return Err(Error::NotHermitian(dev));
    }
    let d = op.dim();
    let (values, vectors): (Vec<f64>, DMatrix<C64>) = if op.is_real() {
        let real = DMatrix::from_fn(d, d, |i, j| {
            0.5 * (op.matrix()[(i, j)].re + op.matrix()[(j, i)].re)
        });
        let eig = SymmetricEigen::new(real);
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(|x| C64::new(x, 0.0)),
        )
    } else {
        let herm = (op.matrix() + op.matrix().adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors = order
        .iter()
        .map(|&k| fix_phase(vectors.column(k).into_owned()))
        .collect();
    Ok((sorted_values, sorted_vectors))
}

fn fix_phase(mut v: DVector<C64>) -> DVector<C64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C64::new(1.0, 0.0));
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        v *= phase;
    }
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Lowest `k` eigenpairs, ascending.
pub fn spectrum(op: &LinOp, k: usize) -> Result<(Vec<f64>, Vec<StateVector>)> {
    let (values, vectors) = eigh(op)?;
    let k = k.min(values.len());
    let states = vectors
        .into_iter()
        .take(k)
        .map(|v| StateVector::from_amplitudes(op.space().clone(), v))
        .collect::<Result<_>>()?;
    Ok((values[..k].to_vec(), states))
}

pub fn ground_state(op: &LinOp) -> Result<(f64, StateVector)> {
    let (mut e, mut v) = spectrum(op, 1)?;
    Ok((e.remove(0), v.remove(0)))
}

/// `‖H v − E v‖₂`.
pub fn residual(op: &LinOp, energy: f64, state: &StateVector) -> Result<f64> {
    let hv = op.apply(state)?;
    Ok((hv - state.amplitudes() * C64::new(energy, 0.0)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{annihilation, number, pauli, HilbertSpace, PauliAxis};

    #[test]
    fn number_operator_ground_state_is_vacuum() {
        let n = number(8).unwrap();
        let (e, psi) = ground_state(&n).unwrap();
        assert_eq!(e, 0.0);
        assert!((psi.amplitudes()[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn transverse_field_ground_state() {
        let h = pauli(PauliAxis::X).scale(0.5);
        let (e, psi) = ground_state(&h).unwrap();
        assert!((e + 0.5).abs() < 1e-14);
        let minus = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt()];
        let overlap = psi.amplitudes()[0] * minus[0] + psi.amplitudes()[1] * minus[1];
        assert!((overlap.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_hermitian_path() {
        let h = &pauli(PauliAxis::Y) + &pauli(PauliAxis::Z).scale(0.3);
        assert!(!h.is_real());
        let (vals, states) = spectrum(&h, 2).unwrap();
        let r = (1.0f64 + 0.09).sqrt();
        assert!((vals[0] + r).abs() < 1e-13);
        assert!((vals[1] - r).abs() < 1e-13);
        for (e, s) in vals.iter().zip(&states) {
            assert!(residual(&h, *e, s).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = annihilation(4).unwrap();
        assert!(matches!(eigh(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn residuals_are_small() {
        let space = HilbertSpace::qubits_and_resonators(1, 1, 6).unwrap();
        let a = space.resonator_op(0, &annihilation(6).unwrap()).unwrap();
        let sx = space.qubit_op(0, &pauli(PauliAxis::X)).unwrap();
        let h = &(&(&a + &a.adjoint()) * &sx) + &(&a.adjoint() * &a).scale(0.7);
        let norm = h.max_abs();
        let (vals, states) = spectrum(&h, 12).unwrap();
        for w in vals.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for (e, s) in vals.iter().zip(&states) {
            assert!(residual(&h, *e, s).unwrap() < 1e-9 * norm);
            assert!(s.is_normalized(1e-12));
        }
    }
}
