use std::f64::consts::TAU;

use num_complex::Complex64;

use super::SmearingParams;

/// Relative tolerance on `|φ(0) − φ(2π)|`.
pub const PERIODICITY_TOL: f64 = 1e-9;

/// Eigenvalue `l_fz = e^{-p_ρ²/m²} k` of the fuzzy angular momentum.
pub fn fuzzy_angular_eigenvalue(k: i64, p_rho: f64, smearing: &SmearingParams) -> f64 {
    smearing.kernel(p_rho) * k as f64
}

/// Checks `φ(0) = φ(2π)` on samples over the closed angular grid
/// `p_φ = 2πj/n`, `j = 0..=n`.
pub fn check_lfz_hermiticity_constraint(phi: &[Complex64]) -> bool {
    let (Some(first), Some(last)) = (phi.first(), phi.last()) else {
        return false;
    };
    if phi.len() < 2 {
        return false;
    }
    let scale = first.norm().max(last.norm());
    if scale == 0.0 {
        return true;
    }
    (first - last).norm() <= PERIODICITY_TOL * scale
}

/// Samples of `φ = ψ e^{-p_ρ²/2m²}` for the eigenfunction
/// `ψ = e^{i l e^{p_ρ²/m²} p_φ + p_ρ²/2m²}` of eigenvalue `l` at fixed
/// `p_ρ`, on the closed grid with `n` intervals.
pub fn lfz_eigenfunction_samples(l: f64, p_rho: f64, smearing: &SmearingParams, n: usize) -> Vec<Complex64> {
    let winding = l / smearing.kernel(p_rho);
    (0..=n)
        .map(|j| {
            let phi = TAU * j as f64 / n as f64;
            Complex64::from_polar(1.0, winding * phi)
        })
        .collect()
}
