//! The encoded problem Hamiltonian only contains σz on the qubits, so it splits
//! into one bosonic block per binary assignment. Each block's ground state
//! should sit at the classical minimizer of that sector.

use hqa_core::hilbert::{basis_digits, quadrature, LinOp};
use hqa_core::mip::{encode, MipDriver, MipInstance};
use hqa_core::oracle::{solve, solve_sector};
use hqa_core::HilbertSpace;
use nalgebra::{DMatrix, DVector};

struct Block {
    energy: f64,
    x: Vec<f64>,
}

/// Lowest eigenpair of `h` restricted to basis states whose qubits read `y`
/// (qubit basis index 0 is σz = +1, i.e. y = 1).
fn sector_ground(h: &LinOp, space: &HilbertSpace, y: &[bool], xs: &[LinOp]) -> Block {
    let k = y.len();
    let idx: Vec<usize> = (0..space.total_dim())
        .filter(|&b| {
            let d = basis_digits(space, b);
            (0..k).all(|i| (d[i] == 0) == y[i])
        })
        .collect();
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |a, b| h.matrix()[(idx[a], idx[b])].re);
    let eig = sub.symmetric_eigen();
    let (g, energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &e)| if e < acc.1 { (i, e) } else { acc });
    let v: DVector<f64> = eig.eigenvectors.column(g).into_owned();
    let x = xs
        .iter()
        .map(|op| {
            let mut s = 0.0;
            for (a, &ia) in idx.iter().enumerate() {
                for (b, &ib) in idx.iter().enumerate() {
                    s += v[a] * op.matrix()[(ia, ib)].re * v[b];
                }
            }
            s
        })
        .collect();
    Block { energy, x }
}

fn blocks(n: usize) -> (MipInstance, Vec<(Vec<bool>, Block)>) {
    let inst = MipInstance::production_planning();
    let enc = encode(&inst, &MipDriver::uniform(2, 1.0, 1.0)).unwrap();
    let space = enc.space(n).unwrap();
    let h = enc.problem_hamiltonian(&space).unwrap();
    let xs: Vec<LinOp> = (0..2)
        .map(|m| space.resonator_op(m, &quadrature(n).unwrap()).unwrap())
        .collect();
    let out = [[false, false], [false, true], [true, false], [true, true]]
        .iter()
        .map(|y| (y.to_vec(), sector_ground(&h, &space, y, &xs)))
        .collect();
    (inst, out)
}

#[test]
fn sector_quadratures_match_classical_minimizers() {
    let (inst, sectors) = blocks(24);
    for (y, b) in &sectors {
        let exact = solve_sector(&inst, y).unwrap();
        for i in 0..2 {
            let d = (b.x[i] - exact.x[i]).abs();
            assert!(d < 1e-6, "sector {y:?} x{}: {} vs {} ({d:e})", i + 1, b.x[i], exact.x[i]);
        }
    }
}

#[test]
fn sector_argmin_matches_oracle() {
    let inst = MipInstance::production_planning();
    let best = solve(&inst).unwrap().best.y;
    for n in [8, 16] {
        let (_, sectors) = blocks(n);
        let (y, _) = sectors
            .iter()
            .min_by(|a, b| a.1.energy.total_cmp(&b.1.energy))
            .unwrap();
        assert_eq!(*y, best, "N = {n}");
    }
}

#[test]
fn zero_point_offset_is_sector_independent() {
    let (inst, sectors) = blocks(24);
    let offsets: Vec<f64> = sectors
        .iter()
        .map(|(y, b)| b.energy - solve_sector(&inst, y).unwrap().cost)
        .collect();
    for o in &offsets {
        assert!((o - offsets[0]).abs() < 1e-6, "{offsets:?}");
    }
    assert!(offsets[0] > 0.0);
}
