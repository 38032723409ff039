//! Foundation layer shared by every physics module.

mod derivative;
mod eigen;
mod grid;
mod operator;
mod optimize;
mod quadrature;

pub use derivative::{derivative_matrix, derivative_matrix_real, DerivativeOrder, DiffScheme};
pub use eigen::{eig_generalized, eig_sym, eigenvalues_generalized, eig_sym_real, EigenDecomposition};
pub use grid::{GridKind, MomentumGrid};
pub use operator::OperatorMatrix;
pub use optimize::{find_root, log_space, minimize_scalar, minimize_scalar_on, Minimum};
pub use quadrature::{integrate, integrate_semi_infinite, Domain, QuadratureRule};
