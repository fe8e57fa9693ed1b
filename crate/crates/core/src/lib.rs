//! Simulation of hybrid quantum annealing on coupled qubit–resonator systems.
//!
//! Binary decision variables live on qubits, continuous variables on the
//! position quadratures of truncated bosonic modes. The crate builds the
//! problem and driver Hamiltonians, integrates the annealing schedule,
//! diagonalizes exactly, and checks every result against a classical oracle.
//!
//! Module map:
//! - [`hilbert`]: composite spaces, dense operators, states.
//! - [`model`]: Hamiltonian builders (hybrid, driver, lab frame, rotating frame).
//! - [`mip`]: the production-planning program, its penalty form and encoding.
//! - [`dynamics`]: time evolution, diagonalization, gap and adiabaticity analysis.
//! - [`oracle`]: exact classical minimization per binary sector.
//!
//! Units: ħ = 1, all coefficients share one energy unit and time is its inverse.

pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod mip;
pub mod model;
pub mod oracle;
pub mod sparse;

pub use error::{Error, Result};
pub use hilbert::{HilbertSpace, LinOp, Site, StateVector};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
