use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{GridState, Measure, Representation, SmearingParams, BOUNDARY_FRACTION};
use crate::numerics::{derivative_matrix, derivative_matrix_real, DerivativeOrder, DiffScheme, MomentumGrid, OperatorMatrix};
use crate::{Error, Result};

/// Edge mass above which a position-space state is flagged as too close to
/// the grid boundary.
pub const EDGE_MASS_WARNING: f64 = 0.01;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `P → p`: the diagonal multiplication operator.
pub fn build_momentum_op(grid: &MomentumGrid) -> OperatorMatrix {
    OperatorMatrix::diagonal_fn(grid, |p| p)
}

/// `X → i d/dp`. Hermitian on interior rows; with the truncated boundary
/// rows the matrix is in fact exactly Hermitian for both schemes, but its
/// action near the cutoff does not represent `X`.
pub fn build_position_op(grid: &MomentumGrid, scheme: DiffScheme) -> OperatorMatrix {
    derivative_matrix(grid, DerivativeOrder::First, scheme).scale(I)
}

/// `X_f = e^{-P²/2m²} X e^{-P²/2m²}`, exactly Hermitian by construction.
pub fn build_fuzzy_position_op(grid: &MomentumGrid, smearing: &SmearingParams, scheme: DiffScheme) -> OperatorMatrix {
    OperatorMatrix::from_real(&fuzzy_position_real(grid, smearing, scheme), grid.clone())
        .expect("matrix matches grid")
        .scale(I)
}

/// Real part `G D G` of `X_f = i G D G`, with `G = diag(e^{-p²/2m²})`.
pub fn fuzzy_position_real(grid: &MomentumGrid, smearing: &SmearingParams, scheme: DiffScheme) -> DMatrix<f64> {
    let g: Vec<f64> = grid.points().iter().map(|&p| smearing.half_kernel(p)).collect();
    let d = derivative_matrix_real(grid, DerivativeOrder::First, scheme);
    DMatrix::from_fn(grid.len(), grid.len(), |i, j| g[i] * d[(i, j)] * g[j])
}

/// Output of a position-space smearing together with the boundary flag.
#[derive(Debug, Clone)]
pub struct SmearedState {
    pub state: GridState,
    /// Set when at least 1% of `|ψ|²` sits in the outer 10% of the grid.
    pub near_boundary: bool,
}

/// `X_f ψ(x) = (m / 2√π) ∫ dλ (x + λ/2) ψ(x + λ) e^{-m²λ²/4}` evaluated by
/// direct summation over grid shifts.
///
/// The Gaussian is normalised on the grid itself, so a kernel narrower than
/// the spacing degrades gracefully to `x ψ(x)`.
pub fn apply_fuzzy_position_convolution(state: &GridState, smearing: &SmearingParams) -> Result<SmearedState> {
    let grid = require_position(state)?;
    let h = grid.spacing();
    let m = smearing.mass();
    let n = grid.len();
    // e^{-m²λ²/4} < 1e-32 beyond this many steps.
    let reach = ((17.2 / m) / h).ceil().min(n as f64) as usize;
    let kernel: Vec<f64> = (0..=reach).map(|k| (-(m * k as f64 * h).powi(2) / 4.0).exp()).collect();
    let total: f64 = kernel[0] + 2.0 * kernel[1..].iter().sum::<f64>();
    let psi = state.samples();
    let x = grid.points();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let lo = i.saturating_sub(reach);
        let hi = (i + reach).min(n - 1);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in lo..=hi {
            let w = kernel[i.abs_diff(j)];
            // x + λ/2 with λ = x_j - x_i.
            acc += psi[j] * (w * 0.5 * (x[i] + x[j]));
        }
        out[i] = acc / total;
    }
    finish(state, out)
}

/// The same smeared action through momentum space: `(X K + K X)/2` with
/// `K = e^{-P²/m²}` applied as a Fourier multiplier.
pub fn apply_fuzzy_position_fourier(state: &GridState, smearing: &SmearingParams) -> Result<SmearedState> {
    let grid = require_position(state)?;
    let n = grid.len();
    let h = grid.spacing();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let multiplier: Vec<f64> = (0..n)
        .map(|j| {
            let j = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            smearing.kernel(2.0 * PI * j / (n as f64 * h))
        })
        .collect();
    let smear = |v: &[Complex64]| -> Vec<Complex64> {
        let mut buf = v.to_vec();
        forward.process(&mut buf);
        for (z, k) in buf.iter_mut().zip(&multiplier) {
            *z *= *k / n as f64;
        }
        inverse.process(&mut buf);
        buf
    };
    let x = grid.points();
    let psi = state.samples();
    let k_psi = smear(psi);
    let x_psi: Vec<Complex64> = psi.iter().zip(x).map(|(z, &x)| z * x).collect();
    let k_x_psi = smear(&x_psi);
    let out = (0..n).map(|i| 0.5 * (x[i] * k_psi[i] + k_x_psi[i])).collect();
    finish(state, out)
}

fn require_position(state: &GridState) -> Result<&MomentumGrid> {
    if state.representation() != Representation::Position || state.measure() != Measure::Plain {
        return Err(Error::InvalidParameter("expected a plain-measure position-space state".into()));
    }
    Ok(state.grid())
}

fn finish(state: &GridState, out: Vec<Complex64>) -> Result<SmearedState> {
    let near_boundary = state.edge_mass(BOUNDARY_FRACTION) >= EDGE_MASS_WARNING;
    let state = GridState::with_representation(out, state.grid().clone(), Measure::Plain, Representation::Position)?;
    Ok(SmearedState { state, near_boundary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn position_state(grid: &MomentumGrid, f: impl Fn(f64) -> Complex64) -> GridState {
        GridState::with_representation(
            grid.points().iter().map(|&x| f(x)).collect(),
            grid.clone(),
            Measure::Plain,
            Representation::Position,
        )
        .unwrap()
    }

    fn packet(x: f64) -> Complex64 {
        Complex64::from_polar((-(x - 0.4).powi(2) / (2.0 * 1.5 * 1.5)).exp(), 0.7 * x)
    }

    #[test]
    fn momentum_op_is_diagonal() {
        let g = MomentumGrid::symmetric(1.0, 9).unwrap();
        let p = build_momentum_op(&g);
        for i in 0..9 {
            assert_eq!(p.entries()[(i, i)].re, g.points()[i]);
        }
        assert!(p.is_hermitian());
    }

    #[test]
    fn fuzzy_op_is_hermitian_and_has_point_limit() {
        let g = MomentumGrid::symmetric(4.0, 64).unwrap();
        for scheme in [DiffScheme::CentralDifference, DiffScheme::Spectral] {
            let xf = build_fuzzy_position_op(&g, &SmearingParams::new(1.0).unwrap(), scheme);
            assert!(xf.hermiticity_residual() <= 1e-12);
            let big = build_fuzzy_position_op(&g, &SmearingParams::new(1e12).unwrap(), scheme);
            let x = build_position_op(&g, scheme);
            assert!(big.sub(&x).unwrap().max_abs() <= 1e-8);
        }
    }

    #[test]
    fn fuzzy_eigenvectors_orthonormal_in_weighted_measure() {
        let g = MomentumGrid::symmetric(3.0, 96).unwrap();
        let s = SmearingParams::new(1.0).unwrap();
        let eig = crate::numerics::eig_sym(&build_fuzzy_position_op(&g, &s, DiffScheme::Spectral)).unwrap();
        let h = g.spacing();
        let states: Vec<GridState> = [0, 17, 48, 60, 95]
            .iter()
            .map(|&k| {
                let psi = g.points().iter().zip(eig.vector(k)).map(|(&p, z)| z / (s.kernel(p) * h.sqrt())).collect();
                GridState::new(psi, g.clone(), Measure::Weighted(s)).unwrap()
            })
            .collect();
        for (a, sa) in states.iter().enumerate() {
            for (b, sb) in states.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((sa.inner(sb).unwrap() - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn plane_wave_eigenrelation() {
        // i d/dp e^{-i x0 p} = x0 e^{-i x0 p}.
        let x0 = 0.8;
        let mut errs = Vec::new();
        for n in [257, 513, 1025] {
            let g = MomentumGrid::symmetric(6.0, n).unwrap();
            let x = build_position_op(&g, DiffScheme::CentralDifference);
            let v: Vec<Complex64> = g.points().iter().map(|&p| Complex64::from_polar(1.0, -x0 * p)).collect();
            let out = x.apply(&v).unwrap();
            let worst = g.interior(0.1).map(|i| (out[i] - v[i] * x0).norm()).fold(0.0, f64::max);
            errs.push(worst);
        }
        assert!(errs[2] < errs[1] && errs[1] < errs[0]);
        assert!(errs[2] < 1e-4);
    }

    #[test]
    fn symmetric_state_has_zero_mean_position() {
        let g = MomentumGrid::symmetric(8.0, 256).unwrap();
        let st = GridState::from_fn(&g, Measure::Plain, |p| Complex64::new((-p * p / 2.0).exp(), 0.0)).unwrap();
        let st = st.normalize().unwrap();
        let x = build_position_op(&g, DiffScheme::Spectral);
        assert!(st.expectation(&x).unwrap().norm() < 1e-12);
    }

    #[test]
    fn convolution_point_limit_is_multiplication() {
        let g = MomentumGrid::symmetric(20.0, 801).unwrap();
        let st = position_state(&g, packet);
        let out = apply_fuzzy_position_convolution(&st, &SmearingParams::new(1e12).unwrap()).unwrap();
        for (i, &x) in g.points().iter().enumerate() {
            assert!((out.state.samples()[i] - packet(x) * x).norm() < 1e-12);
        }
    }

    #[test]
    fn even_state_maps_to_odd_output() {
        let g = MomentumGrid::symmetric(20.0, 801).unwrap();
        let st = position_state(&g, |x| Complex64::new((-x * x / 2.0).exp(), 0.0));
        let out = apply_fuzzy_position_convolution(&st, &SmearingParams::new(1.3).unwrap()).unwrap();
        let s = out.state.samples();
        for i in 0..801 {
            assert!((s[i] + s[800 - i]).norm() < 1e-13);
        }
        assert!(!out.near_boundary);
    }

    #[test]
    fn convolution_and_fourier_routes_agree() {
        let g = MomentumGrid::symmetric(30.0, 1024).unwrap();
        let st = position_state(&g, packet);
        let s = SmearingParams::new(1.0).unwrap();
        let a = apply_fuzzy_position_convolution(&st, &s).unwrap();
        let b = apply_fuzzy_position_fourier(&st, &s).unwrap();
        let worst = a.state.samples().iter().zip(b.state.samples()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(worst <= 1e-6, "{worst}");
    }

    #[test]
    fn wide_state_is_flagged() {
        let g = MomentumGrid::symmetric(5.0, 200).unwrap();
        let st = position_state(&g, |x| Complex64::new((-x * x / 20.0).exp(), 0.0));
        let out = apply_fuzzy_position_convolution(&st, &SmearingParams::new(1.0).unwrap()).unwrap();
        assert!(out.near_boundary);
    }
}
