use serde::Serialize;

use super::{build_fuzzy_position_op, build_momentum_op, build_position_op, GridState, Measure, SmearingParams};
use crate::numerics::{DiffScheme, OperatorMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub dxf: f64,
    pub dp: f64,
    /// `½|⟨e^{-P²/m²}⟩|`
    pub bound: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    /// `(2/m)√(⟨X⟩⟨P⟩)`; `None` when the product is negative.
    pub dx0: Option<f64>,
}

impl UncertaintyReport {
    /// `ΔX_f ΔP - bound`, nonnegative up to rounding.
    pub fn margin(&self) -> f64 {
        self.dxf * self.dp - self.bound
    }
}

fn mean_and_spread(state: &GridState, op: &OperatorMatrix) -> Result<(f64, f64)> {
    let mean = state.expectation(op)?.re;
    let second = state.applied_norm_sqr(op)?;
    Ok((mean, (second - mean * mean).max(0.0).sqrt()))
}

/// Spreads of `X_f` and `P`, the smeared Robertson bound and the minimal
/// position uncertainty for a normalized momentum-space state.
pub fn uncertainty_report(state: &GridState, smearing: &SmearingParams, scheme: DiffScheme) -> Result<UncertaintyReport> {
    state.require_normalized()?;
    let state = state.to_plain();
    let grid = state.grid();
    let (_, dxf) = mean_and_spread(&state, &build_fuzzy_position_op(grid, smearing, scheme))?;
    let (mean_p, dp) = mean_and_spread(&state, &build_momentum_op(grid))?;
    let mean_x = state.expectation(&build_position_op(grid, scheme))?.re;
    let h = grid.spacing();
    let bound = 0.5
        * grid.points().iter().zip(state.samples()).map(|(&p, z)| z.norm_sqr() * smearing.kernel(p)).sum::<f64>()
        * h;
    let product = mean_x * mean_p;
    let dx0 = (product >= 0.0).then(|| 2.0 / smearing.mass() * product.sqrt());
    Ok(UncertaintyReport { dxf, dp, bound, mean_x, mean_p, dx0 })
}

/// `(Δ((AB)), ⟨A⟩ΔB + ⟨B⟩ΔA)` with `(AB) = (AB + BA)/2`.
pub fn symmetrized_product_spread(a: &OperatorMatrix, b: &OperatorMatrix, state: &GridState) -> Result<(f64, f64)> {
    if state.measure() != Measure::Plain {
        return Err(Error::InvalidParameter("spreads are defined for plain-measure states".into()));
    }
    state.require_normalized()?;
    let ab = a.symmetrized_product(b)?;
    let (_, lhs) = mean_and_spread(state, &ab)?;
    let (ma, da) = mean_and_spread(state, a)?;
    let (mb, db) = mean_and_spread(state, b)?;
    Ok((lhs, ma * db + mb * da))
}
