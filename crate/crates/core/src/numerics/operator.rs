use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::MomentumGrid;
use crate::{Error, Result};

/// Relative tolerance under which a matrix counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense square operator acting on samples over a [`MomentumGrid`].
///
/// One-dimensional operators have dimension `grid.len()`; operators on a
/// tensor-product plane (`axes == 2`) have dimension `grid.len()²`, with the
/// first axis varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    grid: MomentumGrid,
    axes: usize,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<Complex64>, grid: MomentumGrid) -> Result<Self> {
        Self::with_axes(entries, grid, 1)
    }

    pub fn with_axes(entries: DMatrix<Complex64>, grid: MomentumGrid, axes: usize) -> Result<Self> {
        let expected = grid.len().pow(axes as u32);
        if entries.nrows() != expected || entries.ncols() != expected {
            return Err(Error::DimensionMismatch { expected, got: entries.nrows().max(entries.ncols()) });
        }
        Ok(Self { entries, grid, axes })
    }

    pub fn from_real(entries: &DMatrix<f64>, grid: MomentumGrid) -> Result<Self> {
        Self::new(entries.map(|x| Complex64::new(x, 0.0)), grid)
    }

    pub fn identity(grid: &MomentumGrid) -> Self {
        let n = grid.len();
        Self { entries: DMatrix::identity(n, n), grid: grid.clone(), axes: 1 }
    }

    /// Diagonal operator with real entries `f(p_i)`.
    pub fn diagonal_fn(grid: &MomentumGrid, f: impl Fn(f64) -> f64) -> Self {
        let diag = DVector::from_iterator(grid.len(), grid.points().iter().map(|&p| Complex64::new(f(p), 0.0)));
        Self { entries: DMatrix::from_diagonal(&diag), grid: grid.clone(), axes: 1 }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    /// `max |A - A†|` over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual_rows(&self.entries, 0..self.dim())
    }

    /// `max |A - A†|` restricted to the given rows (and the matching columns
    /// of `A†`).
    pub fn hermiticity_residual_on(&self, rows: std::ops::Range<usize>) -> f64 {
        hermiticity_residual_rows(&self.entries, rows)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= HERMITIAN_TOL * self.max_abs().max(f64::MIN_POSITIVE)
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.re)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        let x = DVector::from_column_slice(v);
        Ok((&self.entries * x).iter().copied().collect())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self { entries: &self.entries * &other.entries, grid: self.grid.clone(), axes: self.axes })
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = &self.entries * &other.entries - &other.entries * &self.entries;
        Ok(Self { entries, grid: self.grid.clone(), axes: self.axes })
    }

    /// `(AB + BA) / 2`.
    pub fn symmetrized_product(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = (&self.entries * &other.entries + &other.entries * &self.entries) * Complex64::new(0.5, 0.0);
        Ok(Self { entries, grid: self.grid.clone(), axes: self.axes })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { entries: &self.entries * c, grid: self.grid.clone(), axes: self.axes }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self { entries: &self.entries - &other.entries, grid: self.grid.clone(), axes: self.axes })
    }

    /// `D A D` for a real diagonal `D` given by its entries.
    pub fn sandwich_diagonal(&self, d: &[f64]) -> Result<Self> {
        if d.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: d.len() });
        }
        let entries = DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.entries[(i, j)] * (d[i] * d[j]));
        Ok(Self { entries, grid: self.grid.clone(), axes: self.axes })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }
}

fn hermiticity_residual_rows(a: &DMatrix<Complex64>, rows: std::ops::Range<usize>) -> f64 {
    let mut worst = 0.0_f64;
    for i in rows.clone() {
        for j in rows.clone() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}
