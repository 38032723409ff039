use rayon::prelude::*;
use serde::Serialize;

use super::variational::{energy_expectation, TrialState, YukawaProblem};
use super::PhysicalConstants;
use crate::numerics::{find_root, log_space, minimize_scalar_on};
use crate::{Error, Result};

/// Bracket searched for the depth, MeV.
pub const DEPTH_BRACKET: (f64, f64) = (-5000.0, 5000.0);
/// Largest `|min E − E_target|` of a converged point, MeV.
pub const ENERGY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariationalOptions {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub scan_points: usize,
    pub alpha_tol: f64,
    pub depth_tol: f64,
}

impl Default for VariationalOptions {
    fn default() -> Self {
        Self { alpha_lo: 0.01, alpha_hi: 20.0, scan_points: 200, alpha_tol: 1e-10, depth_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaMinimum {
    pub alpha: f64,
    pub energy: f64,
    /// False when the best scan point sits on the end of the α bracket.
    pub interior: bool,
}

/// `min_α E(α)` for `problem` by a log-spaced scan refined with Brent.
pub fn min_energy(problem: &YukawaProblem, opts: &VariationalOptions) -> Result<AlphaMinimum> {
    let scan = log_space(opts.alpha_lo, opts.alpha_hi, opts.scan_points);
    let f = |a: f64| TrialState::for_problem(problem, a).and_then(|t| energy_expectation(problem, &t)).unwrap_or(f64::NAN);
    match minimize_scalar_on(f, &scan, opts.alpha_tol) {
        Ok(m) => Ok(AlphaMinimum { alpha: m.x, energy: m.value, interior: true }),
        Err(Error::NoInteriorMinimum { at, .. }) => {
            let fa = f(at);
            Ok(AlphaMinimum { alpha: at, energy: fa, interior: false })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeDepthPoint {
    pub r0: f64,
    pub depth: f64,
    pub alpha_star: f64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Depth at range `r0` for which `min_α E = e_target`; `template` supplies
/// everything but the depth and range.
pub fn solve_depth(template: &YukawaProblem, r0: f64, e_target: f64, opts: &VariationalOptions) -> Result<RangeDepthPoint> {
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Error::InvalidParameter(format!("r0 must be positive, got {r0}")));
    }
    let base = template.with_range(r0);
    let gap = |v0: f64| min_energy(&base.with_depth(v0), opts).map_or(f64::NAN, |m| m.energy - e_target);
    let (lo, hi) = DEPTH_BRACKET;
    let depth = match find_root(gap, (lo, hi), opts.depth_tol) {
        Ok(v) => v,
        Err(Error::RootNotBracketed { .. }) => {
            let sweep = (0..=10)
                .map(|i| {
                    let v = lo + (hi - lo) * i as f64 / 10.0;
                    (v, gap(v) + e_target)
                })
                .collect();
            return Err(Error::DepthNotBracketed { lo, hi, sweep });
        }
        Err(e) => return Err(e),
    };
    let m = min_energy(&base.with_depth(depth), opts)?;
    let converged = m.interior && (m.energy - e_target).abs() <= ENERGY_TOL;
    Ok(RangeDepthPoint { r0, depth, alpha_star: m.alpha, converged, error: None })
}

/// [`solve_depth`] at every range, in parallel; failures are recorded in
/// the point and the curve continues.
pub fn range_depth_curve(template: &YukawaProblem, r0s: &[f64], e_target: f64, opts: &VariationalOptions) -> Vec<RangeDepthPoint> {
    r0s.par_iter()
        .map(|&r0| {
            solve_depth(template, r0, e_target, opts).unwrap_or_else(|e| RangeDepthPoint {
                r0,
                depth: f64::NAN,
                alpha_star: f64::NAN,
                converged: false,
                error: Some(e.to_string()),
            })
        })
        .collect()
}

/// Candidate masses for the smearing of the nucleon wavefunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmearingChoice {
    Nucleon,
    Reduced,
}

impl SmearingChoice {
    pub const ALL: [SmearingChoice; 2] = [SmearingChoice::Nucleon, SmearingChoice::Reduced];

    pub fn mass(self, constants: &PhysicalConstants) -> f64 {
        match self {
            SmearingChoice::Nucleon => constants.nucleon_mass(),
            SmearingChoice::Reduced => constants.reduced_mass(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub choice: SmearingChoice,
    pub smearing_mass: f64,
    pub r0: f64,
    pub target_depth: f64,
    /// Fuzzy depth found with each candidate.
    pub candidates: Vec<(SmearingChoice, f64)>,
}

/// Picks the smearing mass whose fuzzy depth at `r0` lies closest to
/// `target_depth`.
pub fn calibrate_smearing(constants: &PhysicalConstants, r0: f64, target_depth: f64, opts: &VariationalOptions) -> Result<Calibration> {
    let mut candidates = Vec::new();
    for choice in SmearingChoice::ALL {
        let template = YukawaProblem::fuzzy(constants, 0.0, r0, choice.mass(constants))?;
        let p = solve_depth(&template, r0, constants.e0_binding, opts)?;
        candidates.push((choice, p.depth));
    }
    let &(choice, _) = candidates
        .iter()
        .min_by(|a, b| (a.1 - target_depth).abs().total_cmp(&(b.1 - target_depth).abs()))
        .expect("two candidates");
    Ok(Calibration { choice, smearing_mass: choice.mass(constants), r0, target_depth, candidates })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreRadius {
    pub r_c: f64,
    /// Scan point just inside the core, `(r0, depth)` with depth < 0.
    pub below: (f64, f64),
    /// Scan point just outside, depth > 0.
    pub above: (f64, f64),
    pub curve: Vec<(f64, f64)>,
}

/// Range at which the fuzzy depth changes sign, searched in `bracket`.
pub fn core_radius(
    template: &YukawaProblem,
    e_target: f64,
    bracket: (f64, f64),
    scan_points: usize,
    tol: f64,
    opts: &VariationalOptions,
) -> Result<CoreRadius> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi > lo) || scan_points < 2 {
        return Err(Error::InvalidParameter(format!("bad core-radius bracket ({lo}, {hi})")));
    }
    let r0s: Vec<f64> = (0..scan_points).map(|i| lo + (hi - lo) * i as f64 / (scan_points - 1) as f64).collect();
    let curve: Vec<(f64, f64)> = range_depth_curve(template, &r0s, e_target, opts).iter().map(|p| (p.r0, p.depth)).collect();
    let Some(w) = curve.windows(2).find(|w| w[0].1 < 0.0 && w[1].1 > 0.0) else {
        return Err(Error::NoCoreRadius { lo, hi, curve });
    };
    let (below, above) = (w[0], w[1]);
    let depth = |r0: f64| solve_depth(template, r0, e_target, opts).map_or(f64::NAN, |p| p.depth);
    let r_c = find_root(depth, (below.0, above.0), tol)?;
    Ok(CoreRadius { r_c, below, above, curve })
}
