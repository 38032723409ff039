use serde::Serialize;

use crate::{Error, Result};

/// Compton-wavelength scale of a particle: the mass `m` entering
/// `e^{-P²/m²}`. Large masses recover point-particle operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmearingParams {
    mass: f64,
}

impl SmearingParams {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!("smearing mass must be finite and positive, got {mass}")));
        }
        Ok(Self { mass })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `e^{-p²/2m²}`, the factor applied on each side of `X`.
    pub fn half_kernel(&self, p: f64) -> f64 {
        (-0.5 * (p / self.mass).powi(2)).exp()
    }

    /// `e^{-p²/m²}`.
    pub fn kernel(&self, p: f64) -> f64 {
        (-(p / self.mass).powi(2)).exp()
    }

    /// `e^{-2p²/m²}`, the measure under which fuzzy eigenfunctions are
    /// normalizable.
    pub fn measure_weight(&self, p: f64) -> f64 {
        (-2.0 * (p / self.mass).powi(2)).exp()
    }
}
