use serde::Serialize;

use super::PhysicalConstants;
use crate::numerics::find_root;
use crate::{Error, Result};

/// `V1 = e (V0 − V0′) e^{−r1/r0}/(r1/r0)`: the strength making the two-term
/// potential at `r1` equal to the single-term fuzzy one of depth `V0′`.
pub fn repulsive_strength(v0: f64, v0_prime: f64, r0: f64, r1: f64) -> Result<f64> {
    if !(r0 > 0.0 && r1 > 0.0) {
        return Err(Error::InvalidParameter(format!("ranges must be positive, got r0 = {r0}, r1 = {r1}")));
    }
    let x = r1 / r0;
    Ok(std::f64::consts::E * (v0 - v0_prime) * (-x).exp() / x)
}

/// `V(r) = −V0 e^{−r/r0}/(r/r0) + V1 e^{−r/r1}/(r/r1)` in MeV.
pub fn effective_potential(v0: f64, v1: f64, r0: f64, r1: f64, r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("effective potential needs r > 0, got {r}")));
    }
    Ok(-v0 * (-r / r0).exp() * r0 / r + v1 * (-r / r1).exp() * r1 / r)
}

/// Radius where [`effective_potential`] changes sign, found from a scan of
/// `(r_lo, r_hi)`.
pub fn potential_zero(v0: f64, v1: f64, r0: f64, r1: f64, r_lo: f64, r_hi: f64) -> Result<f64> {
    let f = |r: f64| effective_potential(v0, v1, r0, r1, r).unwrap_or(f64::NAN);
    let n = 200;
    let rs: Vec<f64> = (0..=n).map(|i| r_lo + (r_hi - r_lo) * i as f64 / n as f64).collect();
    let w = rs
        .windows(2)
        .find(|w| f(w[0]) * f(w[1]) < 0.0)
        .ok_or(Error::RootNotBracketed { lo: r_lo, hi: r_hi, f_lo: f(r_lo), f_hi: f(r_hi) })?;
    find_root(f, (w[0], w[1]), 1e-12)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub v0: f64,
    pub v0_prime: f64,
    pub r0: f64,
    pub r1: f64,
    pub r_c: Option<f64>,
    pub v1: f64,
    pub g_sigma_sq_over_4pi: f64,
    pub g_omega_sq_over_4pi: f64,
    /// `g_ω²/g_σ²`
    pub ratio: f64,
    /// `ratio × g_σp²/4π`
    pub g_omega_phenom_sq_over_4pi: f64,
    /// Scattering-fit value the prediction is compared with.
    pub g_omega_reference: f64,
    /// `100 (prediction − reference)/reference`
    pub deviation_percent: f64,
}

/// Couplings implied by the depths `v0` (ordinary) and `v0_prime` (fuzzy)
/// at the σ range `r0` and ω range `r1`.
pub fn coupling_report(constants: &PhysicalConstants, v0: f64, v0_prime: f64, r0: f64, r1: f64, r_c: Option<f64>) -> Result<CouplingReport> {
    let v1 = repulsive_strength(v0, v0_prime, r0, r1)?;
    let g_sigma = v0 * r0 / constants.hbar_c;
    let g_omega = v1 * r1 / constants.hbar_c;
    let ratio = g_omega / g_sigma;
    let prediction = ratio * constants.g_sigma_phenom_sq_over_4pi;
    let reference = constants.g_omega_phenom_sq_over_4pi;
    Ok(CouplingReport {
        v0,
        v0_prime,
        r0,
        r1,
        r_c,
        v1,
        g_sigma_sq_over_4pi: g_sigma,
        g_omega_sq_over_4pi: g_omega,
        ratio,
        g_omega_phenom_sq_over_4pi: prediction,
        g_omega_reference: reference,
        deviation_percent: 100.0 * (prediction - reference) / reference,
    })
}
