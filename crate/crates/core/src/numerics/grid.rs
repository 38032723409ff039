use serde::Serialize;

use crate::{Error, Result};

/// Smallest grid the operator builders accept.
pub const MIN_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    /// `[-P, P]`, used by one-dimensional Cartesian problems.
    Symmetric,
    /// `[0, P]`, used by S-state problems.
    Radial,
}

/// Uniform, strictly increasing sample axis.
///
/// The same type carries position samples for the position-space routes of
/// [`crate::operators`]; only the units change.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumGrid {
    points: Vec<f64>,
    spacing: f64,
    kind: GridKind,
}

impl MomentumGrid {
    /// `n` points spanning `[-cutoff, cutoff]`, endpoints included.
    pub fn symmetric(cutoff: f64, n: usize) -> Result<Self> {
        check(cutoff, n)?;
        let spacing = 2.0 * cutoff / (n - 1) as f64;
        let points = (0..n).map(|i| -cutoff + i as f64 * spacing).collect();
        Ok(Self { points, spacing, kind: GridKind::Symmetric })
    }

    /// `n` interior nodes of `[-cutoff, cutoff]` for Dirichlet problems: the
    /// endpoints, where the solution vanishes, are not stored.
    pub fn symmetric_open(cutoff: f64, n: usize) -> Result<Self> {
        check(cutoff, n)?;
        let spacing = 2.0 * cutoff / (n + 1) as f64;
        let points = (1..=n).map(|i| -cutoff + i as f64 * spacing).collect();
        Ok(Self { points, spacing, kind: GridKind::Symmetric })
    }

    /// `n` points spanning `[0, cutoff]`, endpoints included.
    pub fn radial(cutoff: f64, n: usize) -> Result<Self> {
        check(cutoff, n)?;
        let spacing = cutoff / (n - 1) as f64;
        let points = (0..n).map(|i| i as f64 * spacing).collect();
        Ok(Self { points, spacing, kind: GridKind::Radial })
    }

    /// Grid centred on zero with `n` points and the given spacing. Used for
    /// FFT-compatible position axes.
    pub fn centered(spacing: f64, n: usize) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        let half = (n as f64 - 1.0) / 2.0;
        Self::symmetric(half * spacing, n)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Largest |p| on the grid.
    pub fn cutoff(&self) -> f64 {
        self.points.iter().fold(0.0_f64, |acc, p| acc.max(p.abs()))
    }

    /// Row indices that survive dropping `fraction` of the rows at each end.
    pub fn interior(&self, fraction: f64) -> std::ops::Range<usize> {
        let skip = (fraction * self.len() as f64).ceil() as usize;
        let skip = skip.min(self.len() / 2);
        skip..self.len() - skip
    }
}

fn check(cutoff: f64, n: usize) -> Result<()> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::InvalidGrid(format!("cutoff must be positive and finite, got {cutoff}")));
    }
    if n < MIN_POINTS {
        return Err(Error::InvalidGrid(format!("need at least {MIN_POINTS} points, got {n}")));
    }
    Ok(())
}
