//! Smeared operator algebra: fuzzy position operators, their noncanonical
//! commutators, the modified uncertainty relations and fuzzy angular
//! momentum.
//!
//! All commutator and Hermiticity checks exclude the outer
//! [`BOUNDARY_FRACTION`] of grid rows at each end: a finite grid cannot
//! represent the operators near its cutoff.

mod angular;
mod commutator;
mod position;
mod smearing;
mod state;
mod uncertainty;

pub use angular::{PERIODICITY_TOL, check_lfz_hermiticity_constraint, fuzzy_angular_eigenvalue, lfz_eigenfunction_samples};
pub use commutator::{
    commutator_ladder, convergence_slopes, snyder_limit_deviation, spacetime_commutator_matrices, verify_commutator_xf_p,
    verify_position_momentum, verify_spacetime_commutator, LadderRow, SpacetimeMatrices, DEFAULT_AXIS_CAP, DENSE_AXIS_CAP,
};
pub use position::{
    apply_fuzzy_position_convolution, apply_fuzzy_position_fourier, build_fuzzy_position_op, build_momentum_op,
    build_position_op, fuzzy_position_real, SmearedState, EDGE_MASS_WARNING,
};
pub use smearing::SmearingParams;
pub use state::{GridState, Measure, Representation};
pub use uncertainty::{symmetrized_product_spread, uncertainty_report, UncertaintyReport};

/// Fraction of rows dropped at each grid edge by interior checks.
pub const BOUNDARY_FRACTION: f64 = 0.1;
