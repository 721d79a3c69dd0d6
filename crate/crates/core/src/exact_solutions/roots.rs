//! Safeguarded Newton iterations in one and two unknowns.

use super::ExactError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NewtonSettings {
    /// Residual tolerance, scaled by `1 + |target|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Smallest admissible `|det J|`.
    pub degeneracy_tol: f64,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 50, degeneracy_tol: 1e-10 }
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

pub type Eval2 = Result<([f64; 2], [[f64; 2]; 2]), ExactError>;

/// Newton's method with backtracking line search on `f(p) = 0`, where `f`
/// returns the residual and its Jacobian.
pub fn newton2(f: impl Fn([f64; 2]) -> Eval2, p0: [f64; 2], scale: f64, s: &NewtonSettings) -> Result<[f64; 2], ExactError> {
    let tol = s.tol * (1.0 + scale.abs());
    let mut p = p0;
    let (mut r, mut j) = f(p)?;
    for _ in 0..s.max_iter {
        let nr = norm(r);
        if !nr.is_finite() {
            break;
        }
        if nr <= tol {
            return Ok(p);
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < s.degeneracy_tol || !det.is_finite() {
            return Err(ExactError::Degenerate { det });
        }
        let dp = [-(j[1][1] * r[0] - j[0][1] * r[1]) / det, -(-j[1][0] * r[0] + j[0][0] * r[1]) / det];
        let mut lambda = 1.0;
        loop {
            let trial = [p[0] + lambda * dp[0], p[1] + lambda * dp[1]];
            if let Ok((rt, jt)) = f(trial) {
                if norm(rt) <= (1.0 - 1e-4 * lambda) * nr || lambda < 1e-3 && norm(rt).is_finite() {
                    p = trial;
                    r = rt;
                    j = jt;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return Err(ExactError::NoConvergence { residual: nr });
            }
        }
        // Residual stalls at rounding level once the step is negligible.
        if lambda * norm(dp) <= 1e-15 * (1.0 + norm(p)) && norm(r) <= 1e3 * tol {
            return Ok(p);
        }
    }
    let nr = norm(r);
    if nr <= tol {
        Ok(p)
    } else {
        Err(ExactError::NoConvergence { residual: nr })
    }
}

/// Root of `f` in `[lo, hi]` given a sign change, combining Newton steps
/// with bisection. `f` returns `(f, f')`.
pub fn rtsafe(f: impl Fn(f64) -> (f64, f64), lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64, ExactError> {
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(ExactError::NoRoot { lo, hi });
    }
    let (mut a, mut b) = if flo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = 0.5 * (lo + hi);
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    let (mut fx, mut dfx) = f(x);
    for _ in 0..max_iter {
        let newton_out = ((x - b) * dfx - fx) * ((x - a) * dfx - fx) > 0.0;
        if newton_out || (2.0 * fx).abs() > (dx_old * dfx).abs() || !dfx.is_finite() {
            dx_old = dx;
            dx = 0.5 * (b - a);
            x = a + dx;
        } else {
            dx_old = dx;
            dx = fx / dfx;
            x -= dx;
        }
        if dx.abs() < tol * (1.0 + x.abs()) {
            return Ok(x);
        }
        (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
    }
    Err(ExactError::NoConvergence { residual: fx.abs() })
}

/// Subintervals of `[lo, hi]` (split into `n` parts) on which `f` changes sign.
pub fn sign_changes(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    (0..n)
        .filter(|&i| fs[i].is_finite() && fs[i + 1].is_finite())
        .filter(|&i| fs[i] == 0.0 || fs[i].signum() != fs[i + 1].signum())
        .map(|i| (xs[i], xs[i + 1]))
        .collect()
}
