//! Variational and exact treatment of the S-wave Yukawa deuteron, ordinary
//! and fuzzy, and the couplings derived from the two depths.

mod constants;
mod exact;
mod potential;
mod range_depth;
mod variational;

pub use constants::{PhysicalConstants, OMEGA_RANGE_FM, SIGMA_RANGE_FM};
pub use exact::{count_nodes, exact_depth, exact_ground_state, ShootingOptions};
pub use potential::{coupling_report, effective_potential, potential_zero, repulsive_strength, CouplingReport};
pub use range_depth::{
    calibrate_smearing, core_radius, min_energy, range_depth_curve, solve_depth, AlphaMinimum, Calibration, CoreRadius,
    RangeDepthPoint, SmearingChoice, VariationalOptions, DEPTH_BRACKET, ENERGY_TOL,
};
pub use variational::{
    energy_expectation, energy_parts, mean_momentum, ordinary_energy_closed_form, radial_integrals, trial_samples, InnerProduct,
    KineticForm, RadialIntegrals, TrialForm, TrialState, YukawaProblem, QUAD_TOL,
};

use serde::Serialize;

/// Core-radius search bracket, fm.
pub const CORE_BRACKET: (f64, f64) = (0.2, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingAnalysis {
    pub calibration: Calibration,
    pub smearing: SmearingChoice,
    pub smearing_mass: f64,
    pub ordinary: RangeDepthPoint,
    pub fuzzy: RangeDepthPoint,
    pub core: CoreRadius,
    pub report: CouplingReport,
    /// `(r, V(r))` of the effective two-term potential.
    pub potential: Vec<(f64, f64)>,
}

/// Reference fuzzy depth at the σ range used to choose the smearing mass.
pub const CALIBRATION_DEPTH: f64 = -81.0;

/// Depths at the σ range, smearing calibration, core radius and couplings,
/// all from computed depths. `smearing` overrides the calibrated choice.
pub fn coupling_analysis(
    constants: &PhysicalConstants,
    smearing: Option<SmearingChoice>,
    opts: &VariationalOptions,
) -> crate::Result<CouplingAnalysis> {
    constants.validate()?;
    let (r0, r1) = (SIGMA_RANGE_FM, OMEGA_RANGE_FM);
    let e0 = constants.e0_binding;
    let calibration = calibrate_smearing(constants, r0, CALIBRATION_DEPTH, opts)?;
    let ordinary = solve_depth(&YukawaProblem::ordinary(constants, 0.0, r0)?, r0, e0, opts)?;
    let smearing = smearing.unwrap_or(calibration.choice);
    let smearing_mass = smearing.mass(constants);
    let template = YukawaProblem::fuzzy(constants, 0.0, r0, smearing_mass)?;
    let fuzzy = solve_depth(&template, r0, e0, opts)?;
    let core = core_radius(&template, e0, CORE_BRACKET, 9, 1e-7, opts)?;
    let report = coupling_report(constants, ordinary.depth, fuzzy.depth, r0, r1, Some(core.r_c))?;
    let potential = (1..=100)
        .map(|i| {
            let r = 0.02 * i as f64;
            effective_potential(report.v0, report.v1, r0, r1, r).map(|v| (r, v))
        })
        .collect::<crate::Result<_>>()?;
    Ok(CouplingAnalysis { calibration, smearing, smearing_mass, ordinary, fuzzy, core, report, potential })
}
