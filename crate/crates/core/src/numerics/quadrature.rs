use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { a: f64, b: f64 },
    /// `[0, ∞)` with nodes placed as `x = scale · t` for a unit-scale rule.
    SemiInfinite { scale: f64 },
}

/// Fixed set of nodes and positive weights; [`integrate`] returns
/// `Σ wᵢ f(xᵢ)`.
///
/// Semi-infinite rules are Gauss–Laguerre rules whose weights already absorb
/// the `e^{-t}` factor, so they integrate plain `f` rather than `f e^{-t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: Domain,
    degree: usize,
}

impl QuadratureRule {
    /// `n`-point Gauss–Legendre on `[a, b]`, exact through degree `2n - 1`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 || !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!("Gauss-Legendre needs n > 0 and a < b, got n={n}, [{a}, {b}]")));
        }
        let (t, w) = legendre_unit(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Ok(Self {
            nodes: t.iter().map(|t| mid + half * t).collect(),
            weights: w.iter().map(|w| half * w).collect(),
            domain: Domain::Finite { a, b },
            degree: 2 * n - 1,
        })
    }

    /// `n`-point Gauss–Laguerre on `[0, ∞)` scaled by `scale`: exact for
    /// `e^{-x/scale}` times polynomials of degree `2n - 1`.
    pub fn gauss_laguerre(n: usize, scale: f64) -> Result<Self> {
        if n == 0 || n > MAX_LAGUERRE || !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Gauss-Laguerre needs 0 < n <= {MAX_LAGUERRE} and scale > 0, got n={n}, scale={scale}"
            )));
        }
        let (t, w) = laguerre_unit(n);
        Ok(Self {
            nodes: t.iter().map(|t| scale * t).collect(),
            weights: w.iter().map(|w| scale * w).collect(),
            domain: Domain::SemiInfinite { scale },
            degree: 2 * n - 1,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub fn integrate(f: impl Fn(f64) -> f64, rule: &QuadratureRule) -> Result<f64> {
    let mut sum = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let value = f(x);
        if !value.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: x, value });
        }
        sum += w * value;
    }
    Ok(sum)
}

/// Laguerre orders tried by [`integrate_semi_infinite`].
const LADDER: [usize; 4] = [16, 32, 64, 128];
pub const MAX_LAGUERRE: usize = 128;

/// `∫₀^∞ f(x) dx` by scaled Gauss–Laguerre rules of doubling order, stopping
/// once two successive orders agree to `rel_tol`.
///
/// `scale` should match the slowest decay length of `f`.
pub fn integrate_semi_infinite(f: impl Fn(f64) -> f64, scale: f64, rel_tol: f64) -> Result<f64> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    let eval = |n: usize| -> Result<f64> {
        let (t, w) = laguerre_unit(n);
        let mut sum = 0.0;
        for (&t, &w) in t.iter().zip(w) {
            let x = scale * t;
            let value = f(x);
            if !value.is_finite() {
                return Err(Error::NonFiniteIntegrand { node: x, value });
            }
            sum += w * value;
        }
        Ok(scale * sum)
    };
    let mut prev = eval(LADDER[0])?;
    let mut rel_change = f64::INFINITY;
    for &n in &LADDER[1..] {
        let next = eval(n)?;
        let diff = (next - prev).abs();
        rel_change = if next == 0.0 { diff } else { diff / next.abs() };
        if rel_change <= rel_tol || diff <= f64::MIN_POSITIVE {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged { rel_change, nodes: MAX_LAGUERRE })
}

fn legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d.is_finite() { d } else { dp };
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Unit-scale Gauss–Laguerre nodes and `e^{t}`-absorbed weights, cached per
/// order.
fn laguerre_unit(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: [OnceLock<(Vec<f64>, Vec<f64>)>; MAX_LAGUERRE + 1] = [const { OnceLock::new() }; MAX_LAGUERRE + 1];
    CACHE[n].get_or_init(|| compute_laguerre(n))
}

fn compute_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Golub–Welsch for starting values, then Newton on L_n.
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0
        } else if i.abs_diff(j) == 1 {
            i.max(j) as f64
        } else {
            0.0
        }
    });
    let mut guess: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    guess.sort_by(f64::total_cmp);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for mut x in guess {
        for _ in 0..50 {
            let (l, lm1) = laguerre(n, x);
            let d = n as f64 * (l - lm1) / x;
            let dx = l / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.max(1.0) {
                break;
            }
        }
        let (ln1, _) = laguerre(n + 1, x);
        let log_w = x.ln() - 2.0 * ((n as f64 + 1.0) * ln1.abs()).ln() + x;
        nodes.push(x);
        weights.push(log_w.exp());
    }
    (nodes, weights)
}

/// `(L_n(x), L_{n-1}(x))`.
fn laguerre(n: usize, x: f64) -> (f64, f64) {
    let (mut l0, mut l1) = (1.0, 1.0 - x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let l2 = ((2.0 * k + 1.0 - x) * l1 - k * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    (l1, l0)
}
