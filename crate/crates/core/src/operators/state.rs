use num_complex::Complex64;

use super::SmearingParams;
use crate::numerics::{MomentumGrid, OperatorMatrix};
use crate::{Error, Result};

/// Tolerance on `|‖ψ‖ - 1|` accepted as normalized.
pub const NORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    /// `dp`
    Plain,
    /// `e^{-2p²/m²} dp`
    Weighted(SmearingParams),
}

impl Measure {
    pub fn weight(&self, p: f64) -> f64 {
        match self {
            Measure::Plain => 1.0,
            Measure::Weighted(s) => s.measure_weight(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Momentum,
    Position,
}

/// Complex samples of a wavefunction over a grid, with the measure that
/// defines its norm.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    samples: Vec<Complex64>,
    grid: MomentumGrid,
    measure: Measure,
    representation: Representation,
}

impl GridState {
    pub fn new(samples: Vec<Complex64>, grid: MomentumGrid, measure: Measure) -> Result<Self> {
        Self::with_representation(samples, grid, measure, Representation::Momentum)
    }

    pub fn with_representation(
        samples: Vec<Complex64>,
        grid: MomentumGrid,
        measure: Measure,
        representation: Representation,
    ) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: samples.len() });
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParameter("state samples must be finite".into()));
        }
        Ok(Self { samples, grid, measure, representation })
    }

    /// Samples `f` on the grid.
    pub fn from_fn(
        grid: &MomentumGrid,
        measure: Measure,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        Self::new(grid.points().iter().map(|&p| f(p)).collect(), grid.clone(), measure)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// `⟨a|b⟩` under this state's measure, by the rectangle rule.
    pub fn inner(&self, other: &GridState) -> Result<Complex64> {
        if other.samples.len() != self.samples.len() {
            return Err(Error::DimensionMismatch { expected: self.samples.len(), got: other.samples.len() });
        }
        let h = self.grid.spacing();
        Ok(self
            .grid
            .points()
            .iter()
            .zip(self.samples.iter().zip(&other.samples))
            .map(|(&p, (a, b))| a.conj() * b * self.measure.weight(p))
            .sum::<Complex64>()
            * h)
    }

    pub fn norm(&self) -> f64 {
        let h = self.grid.spacing();
        let s: f64 = self
            .grid
            .points()
            .iter()
            .zip(&self.samples)
            .map(|(&p, z)| z.norm_sqr() * self.measure.weight(p))
            .sum();
        (s * h).sqrt()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized { norm: n });
        }
        for z in &mut self.samples {
            *z /= n;
        }
        Ok(self)
    }

    pub fn require_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(())
    }

    /// Same state re-expressed under the plain measure: a weighted `ψ`
    /// becomes `φ = e^{-p²/m²} ψ`, which has the same norm in `dp`.
    pub fn to_plain(&self) -> GridState {
        match self.measure {
            Measure::Plain => self.clone(),
            Measure::Weighted(s) => GridState {
                samples: self.grid.points().iter().zip(&self.samples).map(|(&p, z)| z * s.kernel(p)).collect(),
                grid: self.grid.clone(),
                measure: Measure::Plain,
                representation: self.representation,
            },
        }
    }

    /// Fraction of `|ψ|²` (under the state's measure) carried by the outer
    /// `fraction` of rows at each end.
    pub fn edge_mass(&self, fraction: f64) -> f64 {
        let interior = self.grid.interior(fraction);
        let weights: Vec<f64> = self
            .grid
            .points()
            .iter()
            .zip(&self.samples)
            .map(|(&p, z)| z.norm_sqr() * self.measure.weight(p))
            .collect();
        let total: f64 = weights.iter().sum();
        let inner: f64 = weights[interior].iter().sum();
        if total == 0.0 {
            0.0
        } else {
            (total - inner) / total
        }
    }

    /// `⟨ψ|A|ψ⟩` for a plain-measure state.
    pub fn expectation(&self, op: &OperatorMatrix) -> Result<Complex64> {
        let applied = self.apply(op)?;
        self.inner_plain(&applied)
    }

    /// `‖Aψ‖²`, which equals `⟨A²⟩` for Hermitian `A`.
    pub fn applied_norm_sqr(&self, op: &OperatorMatrix) -> Result<f64> {
        let applied = self.apply(op)?;
        Ok(applied.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.spacing())
    }

    fn apply(&self, op: &OperatorMatrix) -> Result<Vec<Complex64>> {
        if self.measure != Measure::Plain {
            return Err(Error::InvalidParameter("operator expectations need a plain-measure state; call to_plain()".into()));
        }
        op.apply(&self.samples)
    }

    fn inner_plain(&self, v: &[Complex64]) -> Result<Complex64> {
        Ok(self.samples.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.grid.spacing())
    }
}
