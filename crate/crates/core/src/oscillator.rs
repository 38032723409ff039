//! The fuzzy harmonic oscillator `H = P²/2m + ½mω²X_f²`.
//!
//! In the momentum basis, with `φ = e^{-p²/m²}ψ`, the eigenproblem reads
//!
//! ```text
//! (mω²/2) [φ'' − (p²/m⁴ − 1/m²) φ] = (p²/2m − E) e^{2p²/m²} φ
//! ```
//!
//! and is solved here both perturbatively and by dense diagonalization of
//! the generalized problem `A φ = E W φ`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::numerics::{
    derivative_matrix_real, eig_generalized, eigenvalues_generalized, find_root, DerivativeOrder, DiffScheme,
    MomentumGrid, OperatorMatrix,
};
use crate::operators::{GridState, Measure, SmearingParams};
use crate::{Error, Result};

/// Default number of interior grid points.
pub const DEFAULT_POINTS: usize = 1024;
/// Cutoff used for the exact weight, in units of `m`: `e^{2·3.7²} ≈ 8e11`.
pub const EXACT_CUTOFF: f64 = 3.7;
/// Cutoff in units of the oscillator width `√(mω)`.
pub const WIDTH_CUTOFF: f64 = 20.0;
/// Largest weight `e^{2P²/m²}` accepted for the exact problem.
pub const MAX_EXACT_WEIGHT: f64 = 1e12;
/// Relative change tolerated between a solve and its half-resolution check.
pub const REFINEMENT_TOL: f64 = 1e-4;
/// Largest anharmonic shift, as a fraction of `(n+½)ω`, before the
/// perturbative formula is flagged.
pub const BREAKDOWN_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truncation {
    /// `e^{2p²/m²} ≈ 1 + 2p²/m²`
    Quadratic,
    /// `e^{2p²/m²} ≈ 1 + 2p²/m² + 2p⁴/m⁴`
    Quartic,
    Exact,
}

impl Truncation {
    /// Weight `W(p)` expanded to this order.
    pub fn weight(self, p: f64, m: f64) -> f64 {
        let x = p * p / (m * m);
        match self {
            Truncation::Quadratic => 1.0 + 2.0 * x,
            Truncation::Quartic => 1.0 + 2.0 * x + 2.0 * x * x,
            Truncation::Exact => (2.0 * x).exp(),
        }
    }

    /// Kinetic term `(p²/2m)·e^{2p²/m²}` expanded to the same order in `p`.
    pub fn kinetic(self, p: f64, m: f64) -> f64 {
        let t = p * p / (2.0 * m);
        let x = p * p / (m * m);
        match self {
            Truncation::Quadratic => t,
            Truncation::Quartic => t * (1.0 + 2.0 * x),
            Truncation::Exact => t * (2.0 * x).exp(),
        }
    }
}

/// How the energy enters the discretized equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyCoupling {
    /// `E·W(p)φ`, the equation as written.
    Weighted,
    /// `E·φ`: the weight correction to the energy term is dropped, keeping
    /// the same perturbative order as the closed-form spectra.
    Leading,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorSpec {
    pub omega: f64,
    pub mass: f64,
    pub truncation: Truncation,
}

impl OscillatorSpec {
    pub fn new(omega: f64, mass: f64, truncation: Truncation) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { omega, mass, truncation })
    }

    /// `ω/m`; the closed-form spectra assume it is small.
    pub fn ratio(&self) -> f64 {
        self.omega / self.mass
    }

    pub fn with_truncation(self, truncation: Truncation) -> Self {
        Self { truncation, ..self }
    }

    /// `min(3.7m, 20√(mω))`.
    pub fn default_cutoff(&self) -> f64 {
        (EXACT_CUTOFF * self.mass).min(WIDTH_CUTOFF * (self.mass * self.omega).sqrt())
    }

    /// Dirichlet grid with `n` interior points inside `±default_cutoff()`.
    pub fn default_grid(&self, n: usize) -> Result<MomentumGrid> {
        MomentumGrid::symmetric_open(self.default_cutoff(), n)
    }
}

/// Coefficients of `φ'' = (−α + βp² + γp⁴) φ` for the quartic truncation
/// at trial energy `E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbativeCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl PerturbativeCoefficients {
    pub fn new(spec: &OscillatorSpec, energy: f64) -> Self {
        let (m, w) = (spec.mass, spec.omega);
        let mw2 = m * w * w;
        Self {
            alpha: 2.0 * energy / mw2 + 1.0 / (m * m),
            beta: -4.0 * energy / (m * m * mw2) + 1.0 / m.powi(4) + 1.0 / (m * m * w * w),
            gamma: 2.0 / (m.powi(3) * mw2) - 4.0 * energy / (m.powi(4) * mw2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    Formula,
    Diagonalization,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub energies: Vec<f64>,
    /// `ψ_n = e^{p²/m²} φ_n`, normalized under `e^{-2p²/m²} dp`.
    pub eigenfunctions: Option<Vec<GridState>>,
    pub method: SpectrumMethod,
    /// Per level: the perturbative-validity bound is violated.
    pub breakdown: Vec<bool>,
}

fn half(n: usize) -> f64 {
    n as f64 + 0.5
}

fn require(spec: &OscillatorSpec, truncation: Truncation) -> Result<()> {
    if spec.truncation != truncation {
        return Err(Error::InvalidParameter(format!("expected {truncation:?} truncation, got {:?}", spec.truncation)));
    }
    Ok(())
}

/// `E_n = (n+½)ω − ω²/2m`.
pub fn harmonic_spectrum_formula(spec: &OscillatorSpec, n_max: usize) -> Result<SpectrumResult> {
    require(spec, Truncation::Quadratic)?;
    let (m, w) = (spec.mass, spec.omega);
    Ok(SpectrumResult {
        energies: (0..=n_max).map(|n| half(n) * w - w * w / (2.0 * m)).collect(),
        eigenfunctions: None,
        method: SpectrumMethod::Formula,
        breakdown: vec![false; n_max + 1],
    })
}

/// First-order anharmonic shift `(3ω²/4m)(1 + 2n + 2n²)`.
pub fn anharmonic_shift(spec: &OscillatorSpec, n: usize) -> f64 {
    let n = n as f64;
    3.0 * spec.omega * spec.omega / (4.0 * spec.mass) * (1.0 + 2.0 * n + 2.0 * n * n)
}

/// `(3ω/4m)(1 + 2n + 2n²) > 0.1 (n+½)`.
pub fn perturbative_breakdown(spec: &OscillatorSpec, n: usize) -> bool {
    anharmonic_shift(spec, n) > BREAKDOWN_FRACTION * half(n) * spec.omega
}

/// `E_n = (n+½)ω − ω²/2m + (3ω²/4m)(1 + 2n + 2n²)`, with a breakdown flag
/// per level.
pub fn anharmonic_spectrum_formula(spec: &OscillatorSpec, n_max: usize) -> Result<SpectrumResult> {
    require(spec, Truncation::Quartic)?;
    let (m, w) = (spec.mass, spec.omega);
    Ok(SpectrumResult {
        energies: (0..=n_max).map(|n| half(n) * w - w * w / (2.0 * m) + anharmonic_shift(spec, n)).collect(),
        eigenfunctions: None,
        method: SpectrumMethod::Formula,
        breakdown: (0..=n_max).map(|n| perturbative_breakdown(spec, n)).collect(),
    })
}

/// Level of the quadratic-truncation equation with the full `E·W` coupling,
/// from the dummy-oscillator quantization `Ẽ = (n+½)Ω` with
/// `2mẼ = 2E/mω² + 1/m²` and `m²Ω² = −4E/m³ω² + 1/m⁴ + 1/m²ω²`.
pub fn displaced_oscillator_level(spec: &OscillatorSpec, n: usize) -> Result<f64> {
    let (m, w) = (spec.mass, spec.omega);
    let mw2 = m * w * w;
    let f = |e: f64| {
        let two_m_e_tilde = 2.0 * e / mw2 + 1.0 / (m * m);
        let m2_omega2 = -4.0 * e / (m * m * mw2) + 1.0 / m.powi(4) + 1.0 / (m * m * w * w);
        two_m_e_tilde - 2.0 * half(n) * m2_omega2.max(0.0).sqrt()
    };
    // m²Ω² vanishes at the upper end, where f is positive.
    let e_max = m * (1.0 + w * w / (m * m)) / 4.0;
    find_root(f, (-w * w / (2.0 * m), e_max), 1e-15 * m)
}

/// Options for [`numeric_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptions {
    pub coupling: EnergyCoupling,
    pub scheme: DiffScheme,
    pub eigenfunctions: bool,
    /// Re-solve at half resolution and fail if any level moves by more than
    /// [`REFINEMENT_TOL`] relative.
    pub refinement_check: bool,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self { coupling: EnergyCoupling::Leading, scheme: DiffScheme::Spectral, eigenfunctions: true, refinement_check: true }
    }
}

/// Assembles `A` and the diagonal `W` of `A φ = E W φ` on a Dirichlet grid.
pub fn generalized_problem(
    spec: &OscillatorSpec,
    grid: &MomentumGrid,
    coupling: EnergyCoupling,
    scheme: DiffScheme,
) -> Result<(OperatorMatrix, Vec<f64>)> {
    let (m, w) = (spec.mass, spec.omega);
    if spec.truncation == Truncation::Exact {
        let edge = grid.cutoff();
        let peak = (2.0 * edge * edge / (m * m)).exp();
        if peak > MAX_EXACT_WEIGHT {
            return Err(Error::WeightOverflow { index: grid.len() - 1, value: peak });
        }
    }
    let a_coef = m * w * w / 2.0;
    let d2 = derivative_matrix_real(grid, DerivativeOrder::Second, scheme);
    let pts = grid.points();
    let a = DMatrix::from_fn(grid.len(), grid.len(), |i, j| {
        let mut v = -a_coef * d2[(i, j)];
        if i == j {
            let p = pts[i];
            v += a_coef * (p * p / m.powi(4) - 1.0 / (m * m)) + spec.truncation.kinetic(p, m);
        }
        v
    });
    let weight = match coupling {
        EnergyCoupling::Weighted => pts.iter().map(|&p| spec.truncation.weight(p, m)).collect(),
        EnergyCoupling::Leading => vec![1.0; grid.len()],
    };
    Ok((OperatorMatrix::from_real(&a, grid.clone())?, weight))
}

fn check_levels(grid: &MomentumGrid, n_max: usize) -> Result<()> {
    if n_max + 1 > grid.len() / 4 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} is too large for a {}-point grid", grid.len())));
    }
    Ok(())
}

/// Lowest `n_max + 1` levels by dense diagonalization.
pub fn numeric_spectrum(
    spec: &OscillatorSpec,
    grid: &MomentumGrid,
    n_max: usize,
    options: &NumericOptions,
) -> Result<SpectrumResult> {
    check_levels(grid, n_max)?;
    let (a, weight) = generalized_problem(spec, grid, options.coupling, options.scheme)?;
    let (energies, eigenfunctions) = if options.eigenfunctions {
        let eig = eig_generalized(&a, &weight)?;
        let states = (0..=n_max).map(|k| weighted_state(spec, grid, &eig.vector(k))).collect::<Result<Vec<_>>>()?;
        (eig.values[..=n_max].to_vec(), Some(states))
    } else {
        (eigenvalues_generalized(&a, &weight)?[..=n_max].to_vec(), None)
    };
    if options.refinement_check {
        let wall = grid.points()[0].abs() + grid.spacing();
        let coarse = MomentumGrid::symmetric_open(wall, (grid.len() - 1) / 2)?;
        check_levels(&coarse, n_max)?;
        let (ca, cw) = generalized_problem(spec, &coarse, options.coupling, options.scheme)?;
        let coarse_e = eigenvalues_generalized(&ca, &cw)?;
        let rel_change = energies
            .iter()
            .zip(&coarse_e)
            .map(|(f, c)| (f - c).abs() / f.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if rel_change > REFINEMENT_TOL {
            return Err(Error::RefinementNotConverged { rel_change });
        }
    }
    Ok(SpectrumResult { energies, eigenfunctions, method: SpectrumMethod::Diagonalization, breakdown: vec![false; n_max + 1] })
}

/// Converts a `W`-orthonormal eigenvector `φ` to `ψ = e^{p²/m²} φ` normalized
/// in the weighted measure, with the sign fixed so the largest lobe at
/// `p ≥ 0` is positive.
fn weighted_state(spec: &OscillatorSpec, grid: &MomentumGrid, phi: &[Complex64]) -> Result<GridState> {
    let smear = SmearingParams::new(spec.mass)?;
    let pts = grid.points();
    let peak = (0..pts.len())
        .filter(|&i| pts[i] >= -0.5 * grid.spacing())
        .max_by(|&i, &j| phi[i].re.abs().total_cmp(&phi[j].re.abs()))
        .unwrap_or(0);
    let sign = if phi[peak].re < 0.0 { -1.0 } else { 1.0 };
    let psi = pts.iter().zip(phi).map(|(&p, z)| z * (sign / smear.kernel(p))).collect();
    GridState::new(psi, grid.clone(), Measure::Weighted(smear))?.normalize()
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        (prev, cur) = (cur, 2.0 * x * cur - 2.0 * k as f64 * prev);
    }
    cur
}

/// `ψ_n(p) ∝ e^{(p²/m²)(1 − m/2ω)} H_n(p/√(mω))`, normalized under
/// `e^{-2p²/m²} dp`.
pub fn eigenfunction(spec: &OscillatorSpec, n: usize, grid: &MomentumGrid) -> Result<GridState> {
    require(spec, Truncation::Quadratic)?;
    let (m, w) = (spec.mass, spec.omega);
    if w >= m / 2.0 {
        return Err(Error::NotNormalizable(format!("requires omega < m/2, got omega = {w}, m = {m}")));
    }
    let scale = (m * w).sqrt();
    let state = GridState::from_fn(grid, Measure::Weighted(SmearingParams::new(m)?), |p| {
        Complex64::new((p * p / (m * m) * (1.0 - m / (2.0 * w))).exp() * hermite(n, p / scale), 0.0)
    })?;
    state.normalize()
}

/// Sign changes of the real part, ignoring samples below `1e-8` of the peak.
pub fn count_nodes(state: &GridState) -> usize {
    let s = state.samples();
    let peak = s.iter().fold(0.0_f64, |a, z| a.max(z.re.abs()));
    let mut last = 0.0_f64;
    let mut nodes = 0;
    for z in s {
        if z.re.abs() <= 1e-8 * peak {
            continue;
        }
        if last != 0.0 && z.re.signum() != last.signum() {
            nodes += 1;
        }
        last = z.re;
    }
    nodes
}

/// `⟨p²⟩` in the state's own measure.
pub fn second_moment(state: &GridState) -> f64 {
    let h = state.grid().spacing();
    let m = state.measure();
    state.grid().points().iter().zip(state.samples()).map(|(&p, z)| p * p * z.norm_sqr() * m.weight(p)).sum::<f64>() * h
}
