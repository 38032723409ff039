use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("integrand is not finite at node x = {node} (value {value})")]
    NonFiniteIntegrand { node: f64, value: f64 },

    #[error("quadrature did not converge: last relative change {rel_change:e} with {nodes} nodes")]
    QuadratureNotConverged { rel_change: f64, nodes: usize },

    #[error("no interior minimum in [{lo}, {hi}]: scan minimum sits at x = {at}")]
    NoInteriorMinimum { lo: f64, hi: f64, at: f64 },

    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    RootNotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("matrix is not Hermitian: max |A - A†| = {residual:e} exceeds {tolerance:e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight entry {value:e} at index {index} is not a finite positive number below 1e300; reduce the grid cutoff")]
    WeightOverflow { index: usize, value: f64 },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("grid dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigenfunction is not normalizable: {0}")]
    NotNormalizable(String),

    #[error("spectrum did not converge under grid doubling: relative change {rel_change:e}")]
    RefinementNotConverged { rel_change: f64 },

    #[error("invalid trial/problem pairing: {0}")]
    InvalidPairing(String),

    #[error("no bound state for V0 = {v0} MeV, r0 = {r0} fm")]
    Unbound { v0: f64, r0: f64 },

    #[error("depth root not bracketed in [{lo}, {hi}] MeV; min-energy sweep: {sweep:?}")]
    DepthNotBracketed { lo: f64, hi: f64, sweep: Vec<(f64, f64)> },

    #[error("no sign change of the fuzzy depth in [{lo}, {hi}] fm; curve: {curve:?}")]
    NoCoreRadius { lo: f64, hi: f64, curve: Vec<(f64, f64)> },

    #[error("domain error: {0}")]
    Domain(String),
}
