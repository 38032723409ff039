use serde::Serialize;

use super::PhysicalConstants;
use crate::numerics::integrate_semi_infinite;
use crate::operators::SmearingParams;
use crate::{Error, Result};

/// Relative tolerance of the radial quadratures.
pub const QUAD_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnerProduct {
    /// `d³p`
    Plain,
    /// `e^{-2p²/m²} d³p`
    Weighted,
}

/// Radial form of `⟨ψ|r_f²|ψ⟩` used for the fuzzy kinetic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KineticForm {
    /// `r_f² = −G ∇·(G² ∇(G ·))`, `G = e^{-p²/2m²}`, applied to `ψ` and
    /// integrated against `ψ` in the weighted measure.
    Direct,
    /// `∫ e^{-p²/m²} |∇(G ψ)|² d³p`, the positive form obtained by
    /// integrating by parts in `d³p`.
    IntegratedByParts,
}

/// S-wave Yukawa problem in the exchanged (momentum) representation, where
/// the potential reads `−V0 e^{-p r0}/(p r0)` with `p r0` dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YukawaProblem {
    /// Depth in MeV; positive is attractive.
    pub v0: f64,
    /// Range in fm.
    pub r0: f64,
    /// Mass in the kinetic term, MeV.
    pub kinetic_mass: f64,
    pub hbar_c: f64,
    pub smearing: Option<SmearingParams>,
    pub inner_product: InnerProduct,
    pub kinetic_form: KineticForm,
}

impl YukawaProblem {
    pub fn ordinary(constants: &PhysicalConstants, v0: f64, r0: f64) -> Result<Self> {
        Self::new(v0, r0, constants.reduced_mass(), constants.hbar_c, None, InnerProduct::Plain, KineticForm::Direct)
    }

    pub fn fuzzy(constants: &PhysicalConstants, v0: f64, r0: f64, smearing_mass: f64) -> Result<Self> {
        Self::new(
            v0,
            r0,
            constants.reduced_mass(),
            constants.hbar_c,
            Some(SmearingParams::new(smearing_mass)?),
            InnerProduct::Weighted,
            KineticForm::Direct,
        )
    }

    pub fn new(
        v0: f64,
        r0: f64,
        kinetic_mass: f64,
        hbar_c: f64,
        smearing: Option<SmearingParams>,
        inner_product: InnerProduct,
        kinetic_form: KineticForm,
    ) -> Result<Self> {
        if !v0.is_finite() {
            return Err(Error::InvalidParameter(format!("V0 must be finite, got {v0}")));
        }
        for (name, v) in [("r0", r0), ("kinetic_mass", kinetic_mass), ("hbar_c", hbar_c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if smearing.is_some() && inner_product != InnerProduct::Weighted {
            return Err(Error::InvalidPairing("a smeared problem needs the weighted inner product".into()));
        }
        Ok(Self { v0, r0, kinetic_mass, hbar_c, smearing, inner_product, kinetic_form })
    }

    pub fn with_depth(self, v0: f64) -> Self {
        Self { v0, ..self }
    }

    pub fn with_range(self, r0: f64) -> Self {
        Self { r0, ..self }
    }

    /// `r0/ħc` in MeV⁻¹.
    pub fn r0_natural(&self) -> f64 {
        self.r0 / self.hbar_c
    }

    /// `1/(2m r0²)` in MeV.
    pub fn kinetic_scale(&self) -> f64 {
        let r = self.r0_natural();
        1.0 / (2.0 * self.kinetic_mass * r * r)
    }

    /// `κ = 1/(m_s r0)²`, the smearing in units of `x = p r0`; zero without
    /// smearing.
    pub fn kappa(&self) -> f64 {
        self.smearing.map_or(0.0, |s| (s.mass() * self.r0_natural()).powi(-2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialForm {
    /// `e^{-α p r0}`
    Plain,
    /// `e^{p²/m² − α p r0}`
    Fuzzy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialState {
    pub alpha: f64,
    pub form: TrialForm,
}

impl TrialState {
    pub fn new(alpha: f64, form: TrialForm) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self { alpha, form })
    }

    /// The trial family matching `problem`.
    pub fn for_problem(problem: &YukawaProblem, alpha: f64) -> Result<Self> {
        Self::new(alpha, if problem.smearing.is_some() { TrialForm::Fuzzy } else { TrialForm::Plain })
    }

    /// `ln ψ(x)` at `x = p r0`.
    pub fn log_value(&self, x: f64, kappa: f64) -> f64 {
        match self.form {
            TrialForm::Plain => -self.alpha * x,
            TrialForm::Fuzzy => kappa * x * x - self.alpha * x,
        }
    }

    pub fn value(&self, x: f64, kappa: f64) -> f64 {
        self.log_value(x, kappa).exp()
    }
}

/// The three radial integrals, in `x = p r0`, with the `x²` volume factor
/// and the declared measure included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialIntegrals {
    pub norm: f64,
    pub kinetic: f64,
    pub potential: f64,
}

fn pairing(problem: &YukawaProblem, trial: &TrialState) -> Result<()> {
    match (trial.form, problem.smearing) {
        (TrialForm::Fuzzy, None) => Err(Error::InvalidPairing("fuzzy trial state needs a smeared problem".into())),
        (TrialForm::Plain, Some(_)) => {
            Err(Error::InvalidPairing("plain trial state is not normalizable against a smeared problem's measure".into()))
        }
        _ => Ok(()),
    }
}

pub fn radial_integrals(problem: &YukawaProblem, trial: &TrialState) -> Result<RadialIntegrals> {
    pairing(problem, trial)?;
    let a = trial.alpha;
    // For both pairings ψ² times the measure is e^{-2αx}.
    let norm = integrate_semi_infinite(|x| x * x * (-2.0 * a * x).exp(), 0.5 / a, QUAD_TOL)?;
    let potential = integrate_semi_infinite(|x| x * (-(2.0 * a + 1.0) * x).exp(), 1.0 / (2.0 * a + 1.0), QUAD_TOL)?;
    let kinetic = match problem.smearing {
        None => integrate_semi_infinite(|x| a * a * x * x * (-2.0 * a * x).exp(), 0.5 / a, QUAD_TOL)?,
        Some(_) => {
            let k = problem.kappa();
            let scale = 1.0 / (2.0 * a + 2.0 * (2.0 * k).sqrt());
            match problem.kinetic_form {
                KineticForm::Direct => integrate_semi_infinite(
                    |x| {
                        let u = k * x - a;
                        -(2.0 * x * u + x * x * (k - k * k * x * x + a * a)) * (-2.0 * k * x * x - 2.0 * a * x).exp()
                    },
                    scale,
                    QUAD_TOL,
                )?,
                KineticForm::IntegratedByParts => {
                    integrate_semi_infinite(|x| x * x * (k * x - a).powi(2) * (-2.0 * a * x).exp(), 0.5 / a, QUAD_TOL)?
                }
            }
        }
    };
    for (name, v) in [("norm", norm), ("kinetic", kinetic), ("potential", potential)] {
        if !v.is_finite() {
            return Err(Error::InvalidPairing(format!("{name} integral diverges")));
        }
    }
    Ok(RadialIntegrals { norm, kinetic, potential })
}

/// Kinetic and potential expectations `(⟨T⟩, ⟨V⟩)` in MeV.
pub fn energy_parts(problem: &YukawaProblem, trial: &TrialState) -> Result<(f64, f64)> {
    let i = radial_integrals(problem, trial)?;
    Ok((problem.kinetic_scale() * i.kinetic / i.norm, -problem.v0 * i.potential / i.norm))
}

/// `⟨ψ|H|ψ⟩/⟨ψ|ψ⟩` in MeV.
pub fn energy_expectation(problem: &YukawaProblem, trial: &TrialState) -> Result<f64> {
    let (t, v) = energy_parts(problem, trial)?;
    Ok(t + v)
}

/// Closed form of the ordinary functional,
/// `E(α) = α²/(2m r0²) − 4V0 α³/(2α+1)²`.
pub fn ordinary_energy_closed_form(problem: &YukawaProblem, alpha: f64) -> f64 {
    problem.kinetic_scale() * alpha * alpha - 4.0 * problem.v0 * alpha.powi(3) / (2.0 * alpha + 1.0).powi(2)
}

/// First moment `⟨p⟩` (MeV) of the normalized radial density
/// `p² |ψ|² × measure`.
pub fn mean_momentum(problem: &YukawaProblem, trial: &TrialState) -> Result<f64> {
    let i = radial_integrals(problem, trial)?;
    let a = trial.alpha;
    let first = integrate_semi_infinite(|x| x.powi(3) * (-2.0 * a * x).exp(), 0.5 / a, QUAD_TOL)?;
    Ok(first / i.norm / problem.r0_natural())
}

/// Samples `(p, ψ(p), density)` of the trial state on `ps` (MeV), with the
/// density `p²|ψ|²×measure` normalized to unit integral and `ψ` scaled
/// consistently.
pub fn trial_samples(problem: &YukawaProblem, trial: &TrialState, ps: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    let i = radial_integrals(problem, trial)?;
    let r = problem.r0_natural();
    let k = problem.kappa();
    // ∫ p² ψ² w dp = N / r³ in MeV units.
    let norm = i.norm / r.powi(3);
    Ok(ps
        .iter()
        .map(|&p| {
            let x = p * r;
            let log_psi = trial.log_value(x, k);
            let log_w = problem.smearing.map_or(0.0, |_| -2.0 * k * x * x);
            (p, log_psi.exp() / norm.sqrt(), p * p * (2.0 * log_psi + log_w).exp() / norm)
        })
        .collect())
}
