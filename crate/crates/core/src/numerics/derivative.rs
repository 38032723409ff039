use nalgebra::DMatrix;
use serde::Serialize;

use super::{MomentumGrid, OperatorMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DerivativeOrder {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffScheme {
    /// Three-point central differences, second order. Missing neighbours at
    /// the two boundary rows are treated as zero (Dirichlet truncation).
    CentralDifference,
    /// Sinc (band-limited) differentiation; spectrally accurate for samples
    /// that decay before the grid edge.
    Spectral,
}

impl DiffScheme {
    /// Nominal convergence order in the grid spacing.
    pub fn nominal_order(self) -> Option<f64> {
        match self {
            DiffScheme::CentralDifference => Some(2.0),
            DiffScheme::Spectral => None,
        }
    }
}

pub fn derivative_matrix(grid: &MomentumGrid, order: DerivativeOrder, scheme: DiffScheme) -> OperatorMatrix {
    OperatorMatrix::from_real(&derivative_matrix_real(grid, order, scheme), grid.clone())
        .expect("derivative matrix matches grid size")
}

/// Real-valued derivative matrix; the first-order matrix is exactly
/// antisymmetric and the second-order one exactly symmetric for both schemes.
pub fn derivative_matrix_real(grid: &MomentumGrid, order: DerivativeOrder, scheme: DiffScheme) -> DMatrix<f64> {
    let n = grid.len();
    let h = grid.spacing();
    match (scheme, order) {
        (DiffScheme::CentralDifference, DerivativeOrder::First) => DMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                0.5 / h
            } else if i == j + 1 {
                -0.5 / h
            } else {
                0.0
            }
        }),
        (DiffScheme::CentralDifference, DerivativeOrder::Second) => DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                -2.0 / (h * h)
            } else if i.abs_diff(j) == 1 {
                1.0 / (h * h)
            } else {
                0.0
            }
        }),
        (DiffScheme::Spectral, DerivativeOrder::First) => DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else {
                let k = i as f64 - j as f64;
                sign(i, j) / (k * h)
            }
        }),
        (DiffScheme::Spectral, DerivativeOrder::Second) => DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                -std::f64::consts::PI.powi(2) / (3.0 * h * h)
            } else {
                let k = i as f64 - j as f64;
                -2.0 * sign(i, j) / (k * k * h * h)
            }
        }),
    }
}

fn sign(i: usize, j: usize) -> f64 {
    if (i + j).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn apply(m: &DMatrix<f64>, f: &[f64]) -> Vec<f64> {
        (m * nalgebra::DVector::from_column_slice(f)).iter().copied().collect()
    }

    #[test]
    fn constant_has_zero_first_derivative() {
        let g = MomentumGrid::symmetric(2.0, 32).unwrap();
        let d = derivative_matrix_real(&g, DerivativeOrder::First, DiffScheme::CentralDifference);
        let out = apply(&d, &vec![1.0; 32]);
        for i in 1..31 {
            assert!(out[i].abs() < 1e-12);
        }
    }

    #[test]
    fn parabola_has_constant_second_derivative() {
        let g = MomentumGrid::symmetric(2.0, 40).unwrap();
        let d = derivative_matrix_real(&g, DerivativeOrder::Second, DiffScheme::CentralDifference);
        let f: Vec<f64> = g.points().iter().map(|p| p * p).collect();
        let out = apply(&d, &f);
        for v in &out[1..39] {
            assert!((v - 2.0).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn sine_derivative_within_1e4() {
        let g = MomentumGrid::symmetric(PI, 512).unwrap();
        let d = derivative_matrix_real(&g, DerivativeOrder::First, DiffScheme::CentralDifference);
        let f: Vec<f64> = g.points().iter().map(|p| p.sin()).collect();
        let out = apply(&d, &f);
        let worst = (1..511).map(|i| (out[i] - g.points()[i].cos()).abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-4, "{worst}");
    }

    #[test]
    fn first_derivative_is_antisymmetric() {
        let g = MomentumGrid::symmetric(1.0, 24).unwrap();
        for scheme in [DiffScheme::CentralDifference, DiffScheme::Spectral] {
            let d = derivative_matrix_real(&g, DerivativeOrder::First, scheme);
            assert_eq!(&d + d.transpose(), DMatrix::zeros(24, 24));
        }
    }

    #[test]
    fn spectral_second_derivative_of_gaussian() {
        let g = MomentumGrid::symmetric(10.0, 201).unwrap();
        let d = derivative_matrix_real(&g, DerivativeOrder::Second, DiffScheme::Spectral);
        let f: Vec<f64> = g.points().iter().map(|p| (-p * p / 2.0).exp()).collect();
        let out = apply(&d, &f);
        for (i, &p) in g.points().iter().enumerate() {
            let exact = (p * p - 1.0) * (-p * p / 2.0).exp();
            assert!((out[i] - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn plane_wave_eigenrelation_converges() {
        // D e^{ikp} -> ik e^{ikp}; the central-difference error is O(h^2).
        let k = 1.3;
        let mut errs = Vec::new();
        for n in [101, 201, 401] {
            let g = MomentumGrid::symmetric(4.0, n).unwrap();
            let d = derivative_matrix_real(&g, DerivativeOrder::First, DiffScheme::CentralDifference);
            let re: Vec<f64> = g.points().iter().map(|p| (k * p).cos()).collect();
            let im: Vec<f64> = g.points().iter().map(|p| (k * p).sin()).collect();
            let (dre, dim) = (apply(&d, &re), apply(&d, &im));
            let worst = (1..n - 1)
                .map(|i| ((dre[i] + k * im[i]).powi(2) + (dim[i] - k * re[i]).powi(2)).sqrt())
                .fold(0.0, f64::max);
            errs.push(worst);
        }
        for w in errs.windows(2) {
            let slope = (w[0] / w[1]).log2();
            assert!((slope - 2.0).abs() < 0.2, "slope {slope}");
        }
    }
}
