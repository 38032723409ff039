use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{fuzzy_position_real, SmearingParams, BOUNDARY_FRACTION};
use crate::numerics::{derivative_matrix_real, DerivativeOrder, DiffScheme, MomentumGrid, OperatorMatrix};
use crate::{Error, Result};

/// Largest points-per-axis accepted by the matrix-free 2-D check.
pub const DEFAULT_AXIS_CAP: usize = 64;
/// Largest points-per-axis for which dense 2-D matrices are assembled.
pub const DENSE_AXIS_CAP: usize = 32;

/// Smooth probes used to measure a commutator's action: a centred Gaussian
/// of width `P/6`, the same Gaussian times `p`, and an off-centre copy.
fn probes(grid: &MomentumGrid) -> Vec<Vec<f64>> {
    let sigma = grid.cutoff() / 6.0;
    let gauss = |p: f64, c: f64| (-(p - c).powi(2) / (2.0 * sigma * sigma)).exp();
    let pts = grid.points();
    vec![
        pts.iter().map(|&p| gauss(p, 0.0)).collect(),
        pts.iter().map(|&p| p / sigma * gauss(p, 0.0)).collect(),
        pts.iter().map(|&p| gauss(p, 0.7 * sigma)).collect(),
    ]
}

fn scaled_deviation(got: &[f64], want: &[f64], probe: &[f64], rows: std::ops::Range<usize>) -> f64 {
    let scale = probe.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    rows.map(|i| (got[i] - want[i]).abs()).fold(0.0, f64::max) / scale
}

fn mat_vec(a: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (a * nalgebra::DVector::from_column_slice(v)).as_slice().to_vec()
}

/// Interior residual of `[R, P] f - k(p) f` over the probe set, where the
/// operator under test is `i R`: `[iR, P] = i k(P)` is checked through its
/// real part.
fn residual_with_p(grid: &MomentumGrid, r: &DMatrix<f64>, k: impl Fn(f64) -> f64) -> f64 {
    let pts = grid.points();
    probes(grid)
        .iter()
        .map(|f| {
            let pf: Vec<f64> = f.iter().zip(pts).map(|(x, p)| x * p).collect();
            let rpf = mat_vec(r, &pf);
            let rf = mat_vec(r, f);
            let got: Vec<f64> = (0..f.len()).map(|i| rpf[i] - pts[i] * rf[i]).collect();
            let want: Vec<f64> = f.iter().zip(pts).map(|(x, &p)| x * k(p)).collect();
            scaled_deviation(&got, &want, f, grid.interior(BOUNDARY_FRACTION))
        })
        .fold(0.0, f64::max)
}

/// Interior residual of the canonical `[X, P] = i`, measured on smooth
/// probe states and scaled by their peak amplitude.
pub fn verify_position_momentum(grid: &MomentumGrid, scheme: DiffScheme) -> f64 {
    let d = derivative_matrix_real(grid, DerivativeOrder::First, scheme);
    residual_with_p(grid, &d, |_| 1.0)
}

/// Interior residual of `[X_f, P] = i e^{-P²/m²}` on the probe set.
pub fn verify_commutator_xf_p(grid: &MomentumGrid, smearing: &SmearingParams, scheme: DiffScheme) -> f64 {
    let r = fuzzy_position_real(grid, smearing, scheme);
    residual_with_p(grid, &r, |p| smearing.kernel(p))
}

/// Log-log slopes `ln(r_k / r_{k+1}) / ln(h_k / h_{k+1})` between successive
/// `(spacing, residual)` pairs.
pub fn convergence_slopes(ladder: &[(f64, f64)]) -> Vec<f64> {
    ladder.windows(2).map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln()).collect()
}

/// One grid level of a commutator refinement study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderRow {
    pub points: usize,
    pub spacing: f64,
    pub residual: f64,
    /// Slope against the previous, coarser level.
    pub order: Option<f64>,
}

/// `[X_f, P]` residuals on `levels` nested grids over `[-cutoff, cutoff]`
/// with `base·2^k + 1` points.
pub fn commutator_ladder(
    smearing: &SmearingParams,
    cutoff: f64,
    base: usize,
    levels: usize,
    scheme: DiffScheme,
) -> Result<Vec<LadderRow>> {
    let mut rows: Vec<LadderRow> = Vec::with_capacity(levels);
    for k in 0..levels {
        let grid = MomentumGrid::symmetric(cutoff, (base << k) + 1)?;
        let residual = verify_commutator_xf_p(&grid, smearing, scheme);
        let order = rows.last().map(|prev| convergence_slopes(&[(prev.spacing, prev.residual), (grid.spacing(), residual)])[0]);
        rows.push(LadderRow { points: grid.len(), spacing: grid.spacing(), residual, order });
    }
    Ok(rows)
}

/// Real factors of the 2-D operators on an `n × n` tensor grid with row-major
/// index `i·n + j`, `i` along `p₁`: each fuzzy position is `X_fμ = i R_μ`.
struct Axes2d {
    n: usize,
    d: DMatrix<f64>,
    g: DMatrix<f64>,
    p1: DMatrix<f64>,
    p2: DMatrix<f64>,
}

impl Axes2d {
    fn new(grid: &MomentumGrid, smearing: &SmearingParams, scheme: DiffScheme) -> Self {
        let n = grid.len();
        let pts = grid.points();
        let p1 = DMatrix::from_fn(n, n, |i, _| pts[i]);
        let p2 = DMatrix::from_fn(n, n, |_, j| pts[j]);
        let g = DMatrix::from_fn(n, n, |i, j| smearing.half_kernel((pts[i] * pts[i] + pts[j] * pts[j]).sqrt()));
        Self { n, d: derivative_matrix_real(grid, DerivativeOrder::First, scheme), g, p1, p2 }
    }

    fn d1(&self, f: &DMatrix<f64>) -> DMatrix<f64> {
        &self.d * f
    }

    fn d2(&self, f: &DMatrix<f64>) -> DMatrix<f64> {
        f * self.d.transpose()
    }

    fn gpow(&self, f: &DMatrix<f64>, k: i32) -> DMatrix<f64> {
        f.zip_map(&self.g, |x, g| x * g.powi(k))
    }

    fn r1(&self, f: &DMatrix<f64>) -> DMatrix<f64> {
        self.gpow(&self.d1(&self.gpow(f, 1)), 1)
    }

    fn r2(&self, f: &DMatrix<f64>) -> DMatrix<f64> {
        self.gpow(&self.d2(&self.gpow(f, 1)), 1)
    }

    /// `L' = p₂ D₁ − p₁ D₂`, so that `L = P₂X₁ − P₁X₂ = i L'`.
    fn l(&self, f: &DMatrix<f64>) -> DMatrix<f64> {
        self.d1(f).component_mul(&self.p2) - self.d2(f).component_mul(&self.p1)
    }

    /// `[R₁, R₂] f`, so `[X_f1, X_f2] = −[R₁, R₂]`.
    fn lhs(&self, f: &DMatrix<f64>) -> DMatrix<f64> {
        self.r1(&self.r2(f)) - self.r2(&self.r1(f))
    }

    /// `(G³L'G + GL'G³) f / m²`: the Hermitian-symmetrised discrete form of
    /// `(2i/m²) G³ L G`, written for the real factor.
    fn rhs(&self, f: &DMatrix<f64>, m: f64) -> DMatrix<f64> {
        (self.gpow(&self.l(&self.gpow(f, 1)), 3) + self.gpow(&self.l(&self.gpow(f, 3)), 1)) / (m * m)
    }

    fn probes(&self, grid: &MomentumGrid) -> Vec<DMatrix<f64>> {
        let sigma = grid.cutoff() / 6.0;
        let pts = grid.points();
        let gauss = |a: f64, b: f64, c1: f64, c2: f64| (-((a - c1).powi(2) + (b - c2).powi(2)) / (2.0 * sigma * sigma)).exp();
        let n = self.n;
        vec![
            DMatrix::from_fn(n, n, |i, j| pts[i] / sigma * gauss(pts[i], pts[j], 0.0, 0.0)),
            DMatrix::from_fn(n, n, |i, j| gauss(pts[i], pts[j], 0.7 * sigma, -0.4 * sigma)),
            DMatrix::from_fn(n, n, |i, j| (pts[i] + 0.5 * pts[j]) / sigma * gauss(pts[i], pts[j], -0.3 * sigma, 0.5 * sigma)),
        ]
    }

    fn interior_max(&self, a: &DMatrix<f64>, b: &DMatrix<f64>, grid: &MomentumGrid) -> f64 {
        let rows = grid.interior(BOUNDARY_FRACTION);
        let mut worst = 0.0_f64;
        for i in rows.clone() {
            for j in rows.clone() {
                worst = worst.max((a[(i, j)] - b[(i, j)]).abs());
            }
        }
        worst
    }
}

fn check_cap(grid: &MomentumGrid, cap: usize) -> Result<()> {
    if grid.len() > cap {
        return Err(Error::DimensionCap { dim: grid.len(), cap });
    }
    Ok(())
}

/// Interior residual of `[X_f1, X_f2] = (2i/m²) e^{-P²/2m²}·e^{-P²/m²} L e^{-P²/2m²}`
/// on the tensor grid `grid × grid`, applied matrix-free to smooth probes.
pub fn verify_spacetime_commutator(
    grid: &MomentumGrid,
    smearing: &SmearingParams,
    scheme: DiffScheme,
    cap: usize,
) -> Result<f64> {
    check_cap(grid, cap)?;
    let ax = Axes2d::new(grid, smearing, scheme);
    Ok(ax
        .probes(grid)
        .iter()
        .map(|f| {
            let scale = f.amax();
            ax.interior_max(&ax.lhs(f), &ax.rhs(f, smearing.mass()), grid) / scale
        })
        .fold(0.0, f64::max))
}

/// Relative deviation of `[X_f1, X_f2]` from the point-limit form
/// `(2i/m²) L` on a patch with `p²/m² ≤ 0.01`.
pub fn snyder_limit_deviation(smearing: &SmearingParams, n: usize, scheme: DiffScheme) -> Result<f64> {
    let m = smearing.mass();
    let grid = MomentumGrid::symmetric(0.07 * m, n)?;
    check_cap(&grid, DEFAULT_AXIS_CAP)?;
    let ax = Axes2d::new(&grid, smearing, scheme);
    Ok(ax
        .probes(&grid)
        .iter()
        .map(|f| {
            let want = ax.l(f) * (2.0 / (m * m));
            ax.interior_max(&ax.lhs(f), &want, &grid) / want.amax()
        })
        .fold(0.0, f64::max))
}

/// Dense 2-D operators, `xf1`, `xf2`, `lhs = [X_f1, X_f2]` and its
/// symmetrised right-hand side.
#[derive(Debug, Clone)]
pub struct SpacetimeMatrices {
    pub xf1: OperatorMatrix,
    pub xf2: OperatorMatrix,
    pub lhs: OperatorMatrix,
    pub rhs: OperatorMatrix,
}

pub fn spacetime_commutator_matrices(
    grid: &MomentumGrid,
    smearing: &SmearingParams,
    scheme: DiffScheme,
) -> Result<SpacetimeMatrices> {
    check_cap(grid, DENSE_AXIS_CAP)?;
    let n = grid.len();
    let dim = n * n;
    let pts = grid.points();
    let d = derivative_matrix_real(grid, DerivativeOrder::First, scheme);
    let g: Vec<f64> = (0..dim).map(|r| smearing.half_kernel((pts[r / n].powi(2) + pts[r % n].powi(2)).sqrt())).collect();
    // Entry formulas keep exact antisymmetry: every factor pairs symmetrically
    // in (r, c).
    let d1 = |r: usize, c: usize| if r % n == c % n { d[(r / n, c / n)] } else { 0.0 };
    let d2 = |r: usize, c: usize| if r / n == c / n { d[(r % n, c % n)] } else { 0.0 };
    let r1 = DMatrix::from_fn(dim, dim, |r, c| d1(r, c) * (g[r] * g[c]));
    let r2 = DMatrix::from_fn(dim, dim, |r, c| d2(r, c) * (g[r] * g[c]));
    let lhs = -(&r1 * &r2 - &r2 * &r1);
    let m2 = smearing.mass().powi(2);
    let rhs = DMatrix::from_fn(dim, dim, |r, c| {
        let l = pts[r % n] * d1(r, c) - pts[r / n] * d2(r, c);
        l * ((g[r] * g[c]) * (g[r] * g[r] + g[c] * g[c])) / m2
    });
    let wrap = |m: DMatrix<f64>, c: Complex64| {
        OperatorMatrix::with_axes(m.map(|x| Complex64::new(x, 0.0) * c), grid.clone(), 2).expect("dense 2-D size")
    };
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    // RHS real factor S satisfies (2i/m²)G³LG ≈ −S, matching lhs = −[R₁, R₂].
    Ok(SpacetimeMatrices { xf1: wrap(r1, i), xf2: wrap(r2, i), lhs: wrap(lhs, one), rhs: wrap(-rhs, one) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn antihermitian_residual(a: &OperatorMatrix) -> f64 {
        let e = a.entries();
        (e + e.adjoint()).iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    #[test]
    fn canonical_commutator_converges() {
        let mut ladder = Vec::new();
        for k in 0..4 {
            let g = MomentumGrid::symmetric(6.0, (64 << k) + 1).unwrap();
            ladder.push((g.spacing(), verify_position_momentum(&g, DiffScheme::CentralDifference)));
        }
        for s in convergence_slopes(&ladder) {
            assert!((s - 2.0).abs() <= 0.3, "{s}");
        }
    }

    #[test]
    fn large_mass_matches_canonical() {
        let g = MomentumGrid::symmetric(6.0, 201).unwrap();
        let big = SmearingParams::new(1e12).unwrap();
        for scheme in [DiffScheme::CentralDifference, DiffScheme::Spectral] {
            let a = verify_commutator_xf_p(&g, &big, scheme);
            let b = verify_position_momentum(&g, scheme);
            assert!((a - b).abs() <= 1e-12 * b.max(1e-300) + 1e-15, "{a} {b}");
        }
    }

    #[test]
    fn fuzzy_ladder_is_second_order() {
        let rows = commutator_ladder(&SmearingParams::new(1.0).unwrap(), 8.0, 128, 4, DiffScheme::CentralDifference).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].order.is_none());
        for r in &rows[1..] {
            assert!((r.order.unwrap() - 2.0).abs() <= 0.3, "{:?}", r);
        }
    }

    #[test]
    fn regression_residual_at_1024_points() {
        let g = MomentumGrid::symmetric(8.0, 1024).unwrap();
        let r = verify_commutator_xf_p(&g, &SmearingParams::new(1.0).unwrap(), DiffScheme::Spectral);
        assert!(r <= 1e-4, "{r}");
    }

    #[test]
    fn spacetime_both_sides_antihermitian() {
        let g = MomentumGrid::symmetric(4.0, 16).unwrap();
        let mats = spacetime_commutator_matrices(&g, &SmearingParams::new(1.0).unwrap(), DiffScheme::Spectral).unwrap();
        assert_eq!(antihermitian_residual(&mats.lhs), 0.0);
        assert_eq!(antihermitian_residual(&mats.rhs), 0.0);
        assert!(mats.xf1.is_hermitian() && mats.xf2.is_hermitian());
    }

    #[test]
    fn spacetime_dense_matches_matrix_free() {
        let g = MomentumGrid::symmetric(4.0, 17).unwrap();
        let s = SmearingParams::new(1.0).unwrap();
        let mats = spacetime_commutator_matrices(&g, &s, DiffScheme::CentralDifference).unwrap();
        let ax = Axes2d::new(&g, &s, DiffScheme::CentralDifference);
        let f = &ax.probes(&g)[1];
        let v: Vec<Complex64> = (0..17 * 17).map(|c| Complex64::new(f[(c / 17, c % 17)], 0.0)).collect();
        let out = mats.lhs.apply(&v).unwrap();
        let want = -ax.lhs(f);
        for c in 0..17 * 17 {
            assert!((out[c].re - want[(c / 17, c % 17)]).abs() < 1e-12);
        }
    }

    #[test]
    fn spacetime_residual_decreases() {
        let s = SmearingParams::new(1.0).unwrap();
        let mut ladder = Vec::new();
        for n in [16, 32, 64] {
            let g = MomentumGrid::symmetric(4.0, n).unwrap();
            ladder.push((g.spacing(), verify_spacetime_commutator(&g, &s, DiffScheme::CentralDifference, DEFAULT_AXIS_CAP).unwrap()));
        }
        assert!(ladder[2].1 < ladder[1].1 && ladder[1].1 < ladder[0].1, "{ladder:?}");
        let spectral = verify_spacetime_commutator(
            &MomentumGrid::symmetric(4.0, 64).unwrap(),
            &s,
            DiffScheme::Spectral,
            DEFAULT_AXIS_CAP,
        )
        .unwrap();
        assert!(spectral < 1e-6, "{spectral}");
    }

    #[test]
    fn spacetime_cap_is_enforced() {
        let g = MomentumGrid::symmetric(4.0, 65).unwrap();
        let s = SmearingParams::new(1.0).unwrap();
        assert!(matches!(
            verify_spacetime_commutator(&g, &s, DiffScheme::Spectral, DEFAULT_AXIS_CAP),
            Err(Error::DimensionCap { .. })
        ));
        assert!(spacetime_commutator_matrices(&g, &s, DiffScheme::Spectral).is_err());
    }

    #[test]
    fn positions_commute_for_point_particles() {
        let g = MomentumGrid::symmetric(4.0, 12).unwrap();
        let mats = spacetime_commutator_matrices(&g, &SmearingParams::new(1e12).unwrap(), DiffScheme::Spectral).unwrap();
        assert!(mats.lhs.max_abs() <= 1e-12);
    }

    #[test]
    fn snyder_limit_holds_on_small_patch() {
        let d = snyder_limit_deviation(&SmearingParams::new(1.0).unwrap(), 48, DiffScheme::Spectral).unwrap();
        assert!(d < 0.05, "{d}");
    }
}
