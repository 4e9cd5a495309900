//! Symmetry-breaking analysis of the energy: fixed subspaces, closed-form
//! branches, classification of critical points, a multistart oracle and the
//! `(a, d)` phase diagram.

mod branches;
mod classify;
mod fixed;
mod minimize;
mod scan;

use thiserror::Error;

use crate::energy::EnergyError;

pub use branches::{
    branch_solutions, branch_solutions_exact, closed_form_energy, exact_branch_point, predicted_spectrum, BranchId,
    BranchReport,
};
pub use classify::{
    admissibility, classify_point, isotropy, orbit, stabilizer, CriticalPoint, IsotropyType, ADMISSIBLE_TOL,
    ISOTROPY_TOL, STABILITY_TOL, STATIONARY_TOL,
};
pub use fixed::{fixed_subspace, fixed_subspace_of, restricted_system, restricted_system_terms, FixedSubspace};
pub use minimize::{
    compare_with_branches, descend, expected_minima, minimize_restarts, orbit_classes, sampling_half_width,
    MinimizeOptions, MinimizeResult, OracleComparison, DEFAULT_HALF_WIDTH,
};
pub use scan::{region_label, scan_phase_diagram, single_point, GridRange, PhaseCell, ScanConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BifurcationError {
    #[error("not a critical point: |grad E|_inf = {residual:.3e}")]
    NotStationary { residual: f64 },
    #[error("expected 12 coordinates, got {0}")]
    Dimension(usize),
    #[error("at least one start is required")]
    NoStarts,
    #[error("sampling half-width must be positive and finite, got {0}")]
    InvalidHalfWidth(f64),
    #[error("invalid grid range {0:?}, expected start:stop:step with step > 0 and stop >= start")]
    InvalidRange(String),
    #[error("{name} must be positive for the phase diagram")]
    NonPositive { name: &'static str },
    #[error(transparent)]
    Energy(#[from] EnergyError),
}
