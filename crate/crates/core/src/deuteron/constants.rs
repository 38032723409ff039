use serde::Serialize;

use crate::{Error, Result};

/// Physical inputs of the deuteron analysis. Energies and masses in MeV,
/// `hbar_c` in MeV·fm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub hbar_c: f64,
    pub m_proton: f64,
    pub m_neutron: f64,
    /// Deuteron ground-state energy (negative: bound).
    pub e0_binding: f64,
    pub m_sigma: f64,
    pub m_omega: f64,
    pub m_pi: f64,
    /// One-boson-exchange σ coupling `g_σ²/4π`.
    pub g_sigma_phenom_sq_over_4pi: f64,
    /// One-boson-exchange ω coupling `g_ω²/4π`, the reference the
    /// predicted value is compared against.
    pub g_omega_phenom_sq_over_4pi: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar_c: 197.327,
            m_proton: 938.272,
            m_neutron: 939.565,
            e0_binding: -2.226,
            m_sigma: 550.0,
            m_omega: 782.0,
            m_pi: 139.6,
            g_sigma_phenom_sq_over_4pi: 7.303,
            g_omega_phenom_sq_over_4pi: 10.83,
        }
    }
}

/// σ-exchange range used for the headline numbers, in fm.
pub const SIGMA_RANGE_FM: f64 = 0.3596;
/// ω-exchange range used for the headline numbers, in fm.
pub const OMEGA_RANGE_FM: f64 = 0.2529;

impl PhysicalConstants {
    pub fn reduced_mass(&self) -> f64 {
        self.m_proton * self.m_neutron / (self.m_proton + self.m_neutron)
    }

    /// Mean nucleon mass.
    pub fn nucleon_mass(&self) -> f64 {
        0.5 * (self.m_proton + self.m_neutron)
    }

    /// Yukawa range `ħc/μ` of a meson of mass `mass`, in fm.
    pub fn range_of(&self, mass: f64) -> f64 {
        self.hbar_c / mass
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("hbar_c", self.hbar_c),
            ("m_proton", self.m_proton),
            ("m_neutron", self.m_neutron),
            ("m_sigma", self.m_sigma),
            ("m_omega", self.m_omega),
            ("m_pi", self.m_pi),
            ("g_sigma_phenom_sq_over_4pi", self.g_sigma_phenom_sq_over_4pi),
            ("g_omega_phenom_sq_over_4pi", self.g_omega_phenom_sq_over_4pi),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.e0_binding.is_finite() && self.e0_binding < 0.0) {
            return Err(Error::InvalidParameter(format!("e0_binding must be negative, got {}", self.e0_binding)));
        }
        Ok(())
    }
}
