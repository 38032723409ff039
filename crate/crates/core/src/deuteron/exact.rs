use serde::Serialize;

use super::range_depth::DEPTH_BRACKET;
use super::variational::YukawaProblem;
use crate::numerics::find_root;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingOptions {
    /// Outer radius, fm.
    pub r_max: f64,
    pub steps: usize,
    /// Bisection tolerance on the energy, MeV.
    pub energy_tol: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self { r_max: 60.0, steps: 24_000, energy_tol: 1e-10 }
    }
}

/// Energies within this distance of threshold count as unbound, MeV.
const THRESHOLD: f64 = 1e-6;
const RESCALE: f64 = 1e100;

/// Sign changes of the outward Numerov solution of
/// `u'' = (2m/ħ²)(V(r) − E) u`, `u(0) = 0`, `u'(0) = 1`, on `(0, r_max]`.
pub fn count_nodes(problem: &YukawaProblem, energy: f64, opts: &ShootingOptions) -> usize {
    let k = 2.0 * problem.kinetic_mass / (problem.hbar_c * problem.hbar_c);
    let (v0, r0) = (problem.v0, problem.r0);
    let q = |r: f64| k * (-v0 * r0 * (-r / r0).exp() / r - energy);
    let h = opts.r_max / opts.steps as f64;
    let c = h * h / 12.0;
    // Limit of q(r) u(r) at the origin.
    let qu0 = -k * v0 * r0;
    let mut prev_term = -c * qu0;
    let mut u = h + 0.5 * qu0 * h * h;
    let mut q_cur = q(h);
    let mut nodes = 0;
    for n in 1..opts.steps {
        let r_next = (n + 1) as f64 * h;
        let q_next = q(r_next);
        let mut next = (2.0 * (1.0 + 5.0 * c * q_cur) * u - prev_term) / (1.0 - c * q_next);
        if next * u < 0.0 {
            nodes += 1;
        }
        let mut cur = u;
        if next.abs() > RESCALE {
            next /= RESCALE;
            cur /= RESCALE;
        }
        prev_term = (1.0 - c * q_cur) * cur;
        u = next;
        q_cur = q_next;
    }
    nodes
}

/// Ground-state energy of the ordinary radial problem by bisection on the
/// node count.
pub fn exact_ground_state(problem: &YukawaProblem, opts: &ShootingOptions) -> Result<f64> {
    if problem.smearing.is_some() {
        return Err(Error::InvalidPairing("shooting solves the ordinary problem only".into()));
    }
    if problem.v0 <= 0.0 || count_nodes(problem, -THRESHOLD, opts) == 0 {
        return Err(Error::Unbound { v0: problem.v0, r0: problem.r0 });
    }
    let mut lo = -1.0;
    while count_nodes(problem, lo, opts) > 0 {
        lo *= 2.0;
        if lo < -1e9 {
            return Err(Error::InvalidParameter("no nodeless energy found".into()));
        }
    }
    let mut hi = -THRESHOLD;
    while hi - lo > opts.energy_tol {
        let mid = 0.5 * (lo + hi);
        if count_nodes(problem, mid, opts) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Depth giving the ground-state energy `e_target` at range `problem.r0`.
pub fn exact_depth(problem: &YukawaProblem, e_target: f64, opts: &ShootingOptions) -> Result<f64> {
    let gap = |v0: f64| match exact_ground_state(&problem.with_depth(v0), opts) {
        Ok(e) => e - e_target,
        Err(Error::Unbound { .. }) => -e_target,
        Err(_) => f64::NAN,
    };
    find_root(gap, (1e-3, DEPTH_BRACKET.1), 1e-9)
}
