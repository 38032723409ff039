use crate::{Error, Result};

/// Default number of scan points used by [`minimize_scalar`].
pub const DEFAULT_SCAN: usize = 101;
const GOLDEN: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Minimises `f` on `(lo, hi)`: a uniform scan locates an interior
/// sub-bracket, then Brent's method refines it to `tol` in `x`.
pub fn minimize_scalar(f: impl Fn(f64) -> f64, bracket: (f64, f64), tol: f64) -> Result<Minimum> {
    let (lo, hi) = ordered(bracket)?;
    let scan: Vec<f64> = (0..DEFAULT_SCAN).map(|i| lo + (hi - lo) * i as f64 / (DEFAULT_SCAN - 1) as f64).collect();
    minimize_scalar_on(f, &scan, tol)
}

/// Like [`minimize_scalar`] but scans the caller's increasing abscissae.
pub fn minimize_scalar_on(f: impl Fn(f64) -> f64, scan: &[f64], tol: f64) -> Result<Minimum> {
    if scan.len() < 3 {
        return Err(Error::InvalidParameter("scan needs at least three points".into()));
    }
    let values: Vec<f64> = scan.iter().map(|&x| f(x)).collect();
    let best = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::InvalidParameter("objective is not finite anywhere on the scan".into()))?;
    let (lo, hi) = (scan[0], scan[scan.len() - 1]);
    if best == 0 || best == scan.len() - 1 {
        return Err(Error::NoInteriorMinimum { lo, hi, at: scan[best] });
    }
    let (x, value) = brent_minimize(&f, scan[best - 1], scan[best + 1], scan[best], values[best], tol);
    Ok(Minimum { x, value })
}

/// Brent's parabolic/golden-section minimiser on `[a, b]` seeded at `x`.
fn brent_minimize(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, x0: f64, fx0: f64, tol: f64) -> (f64, f64) {
    let tol = tol.max(1e-15);
    let (mut x, mut w, mut v) = (x0, x0, x0);
    let (mut fx, mut fw, mut fv) = (fx0, fx0, fx0);
    let (mut d, mut e) = (0.0_f64, 0.0_f64);
    for _ in 0..500 {
        let m = 0.5 * (a + b);
        let tol1 = tol / 3.0 + f64::EPSILON * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(m - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= m { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    (x, fx)
}

/// Brent–Dekker root finder on a sign-changing bracket. Every step keeps a
/// valid bracket, so convergence is guaranteed; iteration stops when the
/// bracket is narrower than `tol` or `f` vanishes exactly.
pub fn find_root(f: impl Fn(f64) -> f64, bracket: (f64, f64), tol: f64) -> Result<f64> {
    let (mut a, mut b) = ordered(bracket)?;
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::RootNotBracketed { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }
    let tol = tol.max(0.0);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb.signum() == fc.signum() {
            (c, fc) = (a, fa);
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            (a, fa) = (b, fb);
            (b, fb) = (c, fc);
            (c, fc) = (a, fa);
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        (a, fa) = (b, fb);
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b);
    }
    Ok(b)
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn ordered((lo, hi): (f64, f64)) -> Result<(f64, f64)> {
    if !(lo.is_finite() && hi.is_finite()) || lo == hi {
        return Err(Error::InvalidParameter(format!("degenerate bracket ({lo}, {hi})")));
    }
    Ok(if lo < hi { (lo, hi) } else { (hi, lo) })
}
