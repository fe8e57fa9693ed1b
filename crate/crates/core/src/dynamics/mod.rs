//! Time evolution along the annealing schedule and spectral analysis.
//!
//! - [`eigen`]: dense Hermitian diagonalization (ground state, lowest levels).
//! - [`integrator`]: adaptive Dormand–Prince 5(4) for `i dψ/dt = H(t) ψ`.
//! - [`evolve`]: anneal runs over the standard, lab-frame and effective schedules.
//! - [`analysis`]: adiabaticity metric and energy diagrams.
//! - [`strobe`]: lab frame vs. rotating frame at `ωt = 2nπ`.

pub mod analysis;
pub mod eigen;
pub mod evolve;
pub mod integrator;
pub mod strobe;

pub use analysis::{adiabaticity_metric, energy_diagram, linear_schedule, EnergyDiagram};
pub use eigen::{eigh, ground_state, residual, spectrum};
pub use evolve::{
    evolve, standard_observables, uniform_times, AnnealRun, HamiltonianSource, Trajectory,
};
pub use integrator::IntegrationStats;
pub use strobe::{stroboscopic_compare, StroboscopicComparison, StroboscopicOptions};
