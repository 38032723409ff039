use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::HERMITIAN_TOL;
use super::OperatorMatrix;
use crate::{Error, Result};

/// Largest weight entry accepted before the reduction loses all precision.
pub const MAX_WEIGHT: f64 = 1e300;

/// Eigenpairs sorted by ascending eigenvalue; `vectors` holds one eigenvector
/// per column.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k).iter().copied().collect()
    }
}

/// Full eigendecomposition of a Hermitian operator.
///
/// Purely real input goes through the real symmetric solver.
pub fn eig_sym(a: &OperatorMatrix) -> Result<EigenDecomposition> {
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let residual = a.hermiticity_residual();
    if residual > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { residual, tolerance: HERMITIAN_TOL * scale });
    }
    if a.is_real() {
        let (values, vectors) = eig_sym_real(&a.real_part());
        return Ok(EigenDecomposition { values, vectors: vectors.map(|x| Complex64::new(x, 0.0)) });
    }
    // Symmetrise away round-off before handing to the Hermitian solver.
    let m = a.entries();
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenDecomposition { values, vectors })
}

/// Real symmetric eigendecomposition, ascending. The caller guarantees
/// symmetry; the strictly lower triangle is ignored.
pub fn eig_sym_real(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| if i <= j { a[(i, j)] } else { a[(j, i)] });
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(a.nrows(), a.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Solves `A φ = E W φ` for Hermitian `A` and positive diagonal `W` through
/// the symmetric reduction `W^{-1/2} A W^{-1/2}`.
///
/// Returned eigenvectors are the generalized `φ`, orthonormal in the
/// `W`-weighted inner product.
pub fn eig_generalized(a: &OperatorMatrix, weight: &[f64]) -> Result<EigenDecomposition> {
    if weight.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: weight.len() });
    }
    for (index, &value) in weight.iter().enumerate() {
        if !(value.is_finite() && value > 0.0 && value <= MAX_WEIGHT) {
            return Err(Error::WeightOverflow { index, value });
        }
    }
    let inv_sqrt: Vec<f64> = weight.iter().map(|w| w.sqrt().recip()).collect();
    let reduced = a.sandwich_diagonal(&inv_sqrt)?;
    let mut eig = eig_sym(&reduced)?;
    for (r, s) in inv_sqrt.iter().enumerate() {
        for c in 0..eig.vectors.ncols() {
            eig.vectors[(r, c)] *= *s;
        }
    }
    Ok(eig)
}

/// Eigenvalues only of `A φ = E W φ`, ascending; skips the eigenvector
/// accumulation, which dominates the cost for large grids.
pub fn eigenvalues_generalized(a: &OperatorMatrix, weight: &[f64]) -> Result<Vec<f64>> {
    if weight.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: weight.len() });
    }
    for (index, &value) in weight.iter().enumerate() {
        if !(value.is_finite() && value > 0.0 && value <= MAX_WEIGHT) {
            return Err(Error::WeightOverflow { index, value });
        }
    }
    let inv_sqrt: Vec<f64> = weight.iter().map(|w| w.sqrt().recip()).collect();
    let reduced = a.sandwich_diagonal(&inv_sqrt)?;
    let scale = reduced.max_abs().max(f64::MIN_POSITIVE);
    let residual = reduced.hermiticity_residual();
    if residual > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { residual, tolerance: HERMITIAN_TOL * scale });
    }
    let mut values: Vec<f64> = if reduced.is_real() {
        let m = reduced.real_part();
        let sym = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| if i <= j { m[(i, j)] } else { m[(j, i)] });
        sym.symmetric_eigenvalues().iter().copied().collect()
    } else {
        let m = reduced.entries();
        ((m + m.adjoint()) * Complex64::new(0.5, 0.0)).symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{derivative_matrix, DerivativeOrder, DiffScheme, MomentumGrid};

    fn grid(n: usize) -> MomentumGrid {
        MomentumGrid::symmetric(1.0, n).unwrap()
    }

    fn real_op(m: DMatrix<f64>) -> OperatorMatrix {
        let n = m.nrows();
        OperatorMatrix::from_real(&m, grid(n)).unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let eig = eig_sym(&OperatorMatrix::identity(&grid(8))).unwrap();
        assert!(eig.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn diagonal_sorted() {
        let mut m = DMatrix::zeros(8, 8);
        for (i, v) in [3.0, 1.0, 2.0, 8.0, 7.0, 6.0, 5.0, 4.0].iter().enumerate() {
            m[(i, i)] = *v;
        }
        let eig = eig_sym(&real_op(m)).unwrap();
        assert_eq!(&eig.values[..3], &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = DMatrix::identity(8, 8);
        m[(0, 1)] = 1.0;
        assert!(matches!(eig_sym(&real_op(m)), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn complex_hermitian_residuals_and_orthonormality() {
        let g = grid(24);
        let x = derivative_matrix(&g, DerivativeOrder::First, DiffScheme::Spectral).scale(Complex64::new(0.0, 1.0));
        let p = OperatorMatrix::diagonal_fn(&g, |p| p * p);
        let h = OperatorMatrix::new(x.entries() + p.entries(), g).unwrap();
        let eig = eig_sym(&h).unwrap();
        let norm = h.max_abs();
        for k in 0..24 {
            let v = eig.vectors.column(k);
            let r = h.entries() * v - v * Complex64::new(eig.values[k], 0.0);
            assert!(r.norm() <= 1e-8 * norm);
        }
        let gram = eig.vectors.adjoint() * &eig.vectors;
        let off = (gram - DMatrix::<Complex64>::identity(24, 24)).iter().fold(0.0_f64, |a, z| a.max(z.norm()));
        assert!(off < 1e-10, "{off}");
    }

    #[test]
    fn generalized_identity_weight_matches_standard() {
        let m = DMatrix::from_fn(10, 10, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let a = real_op(m);
        let plain = eig_sym(&a).unwrap();
        let gen = eig_generalized(&a, &[1.0; 10]).unwrap();
        for (x, y) in plain.values.iter().zip(&gen.values) {
            assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn values_only_matches_full_solve() {
        let m = DMatrix::from_fn(12, 12, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { i as f64 } else { 0.0 });
        let a = real_op(m);
        let w: Vec<f64> = (0..12).map(|i| 1.0 + 0.3 * i as f64).collect();
        let full = eig_generalized(&a, &w).unwrap();
        let vals = eigenvalues_generalized(&a, &w).unwrap();
        for (x, y) in full.values.iter().zip(&vals) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn generalized_diagonal_example() {
        let mut m = DMatrix::zeros(8, 8);
        let mut w = vec![1.0; 8];
        m[(0, 0)] = 2.0;
        m[(1, 1)] = 8.0;
        w[1] = 2.0;
        for i in 2..8 {
            m[(i, i)] = 10.0 + i as f64;
        }
        let eig = eig_generalized(&real_op(m), &w).unwrap();
        assert!((eig.values[0] - 2.0).abs() < 1e-14);
        assert!((eig.values[1] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn generalized_rejects_overflowing_weight() {
        let a = OperatorMatrix::identity(&grid(8));
        let mut w = vec![1.0; 8];
        w[3] = f64::INFINITY;
        assert!(matches!(eig_generalized(&a, &w), Err(Error::WeightOverflow { index: 3, .. })));
        w[3] = 2e300;
        assert!(eig_generalized(&a, &w).is_err());
        w[3] = -1.0;
        assert!(eig_generalized(&a, &w).is_err());
    }
}
