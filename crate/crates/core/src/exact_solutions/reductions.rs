//! Closed-form and parametric solutions obtained by Lie reduction, plus two
//! partially invariant families with an arbitrary profile `ψ`.
//!
//! Parametric cases give `ω` as an explicit function of `φ` and invert it on
//! a caller-chosen seed interval. The interval must avoid every zero and pole
//! of `dω/dφ`, so `ω` is strictly monotone there and no branch jump can
//! happen silently.
//!
//! In case 2B the `c₁/ω` term of `ψ` carries the factor `δ₁`; this is what
//! integrating `ωψ′ + δ₁φ = 0` gives, and the residual tests confirm it.

use super::roots::rtsafe;
use super::{ExactError, Sampler};
use crate::model::{UvwJet, UvwState};
use crate::telegraph::SmoothFn;
use serde::{Deserialize, Serialize};

/// Reduction case with its parameters. Names follow the standard list of
/// one-dimensional subalgebras used for the ansatz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum ReductionCase {
    /// `u = μ + x/t + a`, `v = −(a+μ)ω + c₂ + b ln t` with `ω = x/t − a ln t`
    /// and `b = μ² + aμ − 1`. For `μ = 0`, `w = ψ(ω)`.
    #[serde(rename = "1A")]
    Case1A {
        a: f64,
        mu: f64,
        /// Checked against `μ² + aμ − 1` when given.
        #[serde(default)]
        b: Option<f64>,
        #[serde(default)]
        delta1: f64,
        #[serde(default)]
        c2: f64,
        #[serde(default)]
        c3: f64,
        #[serde(default)]
        psi: Option<SmoothFn>,
    },
    /// Parametric in `φ` with `dω/dφ = (1 − φ²)/(φ² + aφ − b − 1)`.
    #[serde(rename = "1B")]
    Case1B {
        a: f64,
        b: f64,
        #[serde(default)]
        delta1: f64,
        #[serde(default)]
        c1: f64,
        #[serde(default)]
        c2: f64,
        #[serde(default)]
        c3: f64,
        seed: [f64; 2],
    },
    /// `u = φ + t`, `v = χ + bt`, `w = ψ + δ₁t` with `ω = x − t²/2`.
    #[serde(rename = "2A")]
    Case2A {
        b: f64,
        #[serde(default)]
        delta1: f64,
        #[serde(default)]
        c1: f64,
        #[serde(default)]
        c2: f64,
        #[serde(default)]
        c3: f64,
        seed: [f64; 2],
    },
    /// `u = c₁/t − b + x/t` with logarithmic `v` and `w`.
    #[serde(rename = "2B")]
    Case2B {
        b: f64,
        #[serde(default)]
        delta1: f64,
        #[serde(default)]
        c1: f64,
        #[serde(default)]
        c2: f64,
        #[serde(default)]
        c3: f64,
    },
    /// Stationary `u = φ(x)` with `δ₂x = φ³/3 − φ − c₁`. For `δ₂ = 0`, `φ`
    /// is a constant root of the cubic, chosen nearest to `phi`.
    #[serde(rename = "3")]
    Case3 {
        #[serde(default)]
        delta1: f64,
        delta2: f64,
        #[serde(default)]
        c1: f64,
        #[serde(default)]
        c2: f64,
        #[serde(default)]
        c3: f64,
        #[serde(default)]
        seed: Option<[f64; 2]>,
        #[serde(default)]
        phi: Option<f64>,
        #[serde(default)]
        psi: Option<SmoothFn>,
    },
    /// `u = x/t + a + μ`, `v = −(a+μ)x/t + ((a+μ)² − 1) ln t + c₂`,
    /// `w = ψ(x/t − (a+μ) ln t)`.
    #[serde(rename = "PI-5A")]
    Pi5A {
        a: f64,
        mu: f64,
        #[serde(default)]
        c2: f64,
        #[serde(default = "SmoothFn::identity")]
        psi: SmoothFn,
    },
    /// `u`, `v` as in 1B and `w = ψ(ln t − ψ̂(φ))`.
    #[serde(rename = "PI-5B")]
    Pi5B {
        a: f64,
        b: f64,
        #[serde(default)]
        c1: f64,
        #[serde(default)]
        c2: f64,
        seed: [f64; 2],
        #[serde(default = "SmoothFn::identity")]
        psi: SmoothFn,
    },
}

/// A reduction solution, optionally reflected by `(t, x) → (−t, −x)` to
/// cover `t < 0` where `ln t` appears.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionSolution {
    #[serde(flatten)]
    pub case: ReductionCase,
    #[serde(default)]
    pub reflected: bool,
}

/// Integrals `∫ (αφ + β)/q dφ` for `q = φ² + aφ − (b+1)`.
#[derive(Debug, Clone, Copy)]
struct Quadratic {
    a: f64,
    b: f64,
}

impl Quadratic {
    fn q(&self, p: f64) -> f64 {
        p * p + self.a * p - (self.b + 1.0)
    }

    fn disc(&self) -> f64 {
        self.a * self.a + 4.0 * (self.b + 1.0)
    }

    fn roots(&self) -> Vec<f64> {
        let d = self.disc();
        if d < 0.0 {
            return vec![];
        }
        let s = d.sqrt();
        vec![0.5 * (-self.a - s), 0.5 * (-self.a + s)]
    }

    /// `∫ dφ/q`
    fn j(&self, p: f64) -> f64 {
        let d = self.disc();
        if d > 0.0 {
            let r = self.roots();
            (((p - r[1]) / (p - r[0])).abs()).ln() / d.sqrt()
        } else if d < 0.0 {
            let s = (-d).sqrt();
            2.0 / s * ((2.0 * p + self.a) / s).atan()
        } else {
            -2.0 / (2.0 * p + self.a)
        }
    }

    fn integral(&self, alpha: f64, beta: f64, p: f64) -> f64 {
        0.5 * alpha * self.q(p).abs().ln() + (beta - 0.5 * alpha * self.a) * self.j(p)
    }

    /// `ω(φ)` and `dω/dφ` in case 1B.
    fn omega(&self, p: f64, c1: f64) -> (f64, f64) {
        (-p + self.integral(self.a, -self.b, p) + c1, (1.0 - p * p) / self.q(p))
    }

    /// `χ(φ)` and `dχ/dφ`.
    fn chi(&self, p: f64, c2: f64) -> (f64, f64) {
        (self.integral(self.b, -self.a, p) + c2, (self.b * p - self.a) / self.q(p))
    }

    /// `ψ̂(φ) = ∫ (1−φ²)/(φq) dφ` and its derivative; needs `b ≠ −1`.
    fn psi_hat(&self, p: f64) -> (f64, f64) {
        let k = 1.0 / (self.b + 1.0);
        let val = -k * p.abs().ln() + self.integral(-self.b * k, self.a * k, p);
        (val, (1.0 - p * p) / (p * self.q(p)))
    }
}

fn check_seed(seed: [f64; 2], forbidden: &[f64]) -> Result<(), ExactError> {
    let [lo, hi] = seed;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(ExactError::InvalidParameters(format!("seed interval [{lo}, {hi}] is empty")));
    }
    if let Some(s) = forbidden.iter().find(|&&s| lo <= s && s <= hi) {
        return Err(ExactError::InvalidParameters(format!("seed interval [{lo}, {hi}] contains the singular point {s} of the branch")));
    }
    Ok(())
}

/// Solves `ω(φ) = target` on a monotone branch.
fn invert(f: impl Fn(f64) -> (f64, f64), seed: [f64; 2], target: f64) -> Result<f64, ExactError> {
    let [lo, hi] = seed;
    let (flo, fhi) = (f(lo).0 - target, f(hi).0 - target);
    if flo * fhi > 0.0 {
        return Err(ExactError::OutsideDomain(format!("ω = {target} is not reached on the branch [{lo}, {hi}]")));
    }
    rtsafe(
        |p| {
            let (v, d) = f(p);
            (v - target, d)
        },
        lo,
        hi,
        1e-15,
        200,
    )
    .map_err(|_| ExactError::OutsideDomain(format!("ω = {target} could not be inverted on [{lo}, {hi}]")))
}

fn need_positive_t(t: f64) -> Result<(), ExactError> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(ExactError::OutsideDomain(format!("t = {t}; this family needs t > 0 (use `reflected` for t < 0)")))
    }
}

/// Real roots of `φ³/3 − φ − c₁`.
fn cubic_roots(c1: f64) -> Vec<f64> {
    let f = |p: f64| (p * p * p / 3.0 - p - c1, p * p - 1.0);
    let r = 3.0 + c1.abs();
    let mut edges = vec![-r, -1.0, 1.0, r];
    edges.dedup();
    let mut out = vec![];
    for w in edges.windows(2) {
        let (a, b) = (f(w[0]).0, f(w[1]).0);
        if a == 0.0 {
            out.push(w[0]);
        } else if a * b < 0.0 {
            if let Ok(p) = rtsafe(f, w[0], w[1], 1e-15, 200) {
                out.push(p);
            }
        }
    }
    if f(r).0 == 0.0 {
        out.push(r);
    }
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

impl ReductionSolution {
    pub fn new(case: ReductionCase) -> Result<Self, ExactError> {
        let s = Self { case, reflected: false };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ExactError> {
        use ReductionCase::*;
        let bad = |m: String| Err(ExactError::InvalidParameters(m));
        match &self.case {
            Case1A { a, mu, b, delta1, psi, .. } => {
                let implied = mu * mu + a * mu - 1.0;
                if let Some(b) = b {
                    if (b - implied).abs() > 1e-12 * (1.0 + b.abs()) {
                        return bad(format!("1A needs b = μ² + aμ − 1 = {implied}, got {b}"));
                    }
                }
                if *mu == 0.0 {
                    if *delta1 != 0.0 {
                        return bad("1A with μ = 0 needs δ₁ = 0".into());
                    }
                } else if psi.is_some() {
                    return bad("1A admits a free ψ only for μ = 0".into());
                }
                if let Some(p) = psi {
                    p.validate()?;
                }
                Ok(())
            }
            Case1B { a, b, delta1, seed, .. } => {
                let q = Quadratic { a: *a, b: *b };
                let mut forbidden = vec![-1.0, 1.0];
                forbidden.extend(q.roots());
                if *delta1 != 0.0 {
                    if *b == -1.0 {
                        return bad("1B with b = −1 and δ₁ ≠ 0 is not supported".into());
                    }
                    forbidden.push(0.0);
                }
                check_seed(*seed, &forbidden)
            }
            Case2A { b, delta1, seed, .. } => {
                let mut forbidden = vec![-1.0, 1.0, *b];
                if *delta1 != 0.0 {
                    forbidden.push(0.0);
                }
                check_seed(*seed, &forbidden)
            }
            Case2B { .. } => Ok(()),
            Case3 { delta1, delta2, c1, seed, psi, .. } => {
                if *delta2 != 0.0 {
                    let Some(seed) = seed else {
                        return bad("case 3 with δ₂ ≠ 0 needs a seed interval".into());
                    };
                    let mut forbidden = vec![-1.0, 1.0];
                    if *delta1 != 0.0 {
                        forbidden.push(0.0);
                    }
                    if psi.is_some() {
                        return bad("case 3 admits a free ψ only for δ₂ = 0 and φ = 0".into());
                    }
                    return check_seed(*seed, &forbidden);
                }
                let p = self.stationary_root()?;
                if p == 0.0 && *delta1 != 0.0 {
                    return bad("case 3 with φ = 0 needs δ₁ = 0".into());
                }
                if p != 0.0 && psi.is_some() {
                    return bad("case 3 admits a free ψ only for φ = 0".into());
                }
                if cubic_roots(*c1).is_empty() {
                    return bad(format!("φ³/3 − φ = {c1} has no real root"));
                }
                if let Some(f) = psi {
                    f.validate()?;
                }
                Ok(())
            }
            Pi5A { psi, .. } => Ok(psi.validate()?),
            Pi5B { b, seed, psi, a, .. } => {
                if *b == -1.0 {
                    return bad("PI-5B needs b ≠ −1".into());
                }
                psi.validate()?;
                let mut forbidden = vec![-1.0, 0.0, 1.0];
                forbidden.extend(Quadratic { a: *a, b: *b }.roots());
                check_seed(*seed, &forbidden)
            }
        }
    }

    /// Constant `φ` of case 3 with `δ₂ = 0`.
    fn stationary_root(&self) -> Result<f64, ExactError> {
        let ReductionCase::Case3 { c1, phi, .. } = &self.case else { unreachable!("only called for case 3") };
        let target = phi.unwrap_or(0.0);
        cubic_roots(*c1)
            .into_iter()
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
            .ok_or_else(|| ExactError::InvalidParameters(format!("φ³/3 − φ = {c1} has no real root")))
    }

    /// Jet at `(t, x)` in the unreflected frame.
    fn base_jet(&self, t: f64, x: f64) -> Result<UvwJet, ExactError> {
        use ReductionCase::*;
        let jet = |s: [f64; 3], dt: [f64; 3], dx: [f64; 3]| UvwJet { t, x, state: UvwState::from_array(s), dt, dx };
        match &self.case {
            Case1A { a, mu, delta1, c2, c3, psi, .. } => {
                need_positive_t(t)?;
                let (a, mu) = (*a, *mu);
                let b = mu * mu + a * mu - 1.0;
                let om = x / t - a * t.ln();
                let (om_t, om_x) = (-x / (t * t) - a / t, 1.0 / t);
                let u = mu + x / t + a;
                let v = -(a + mu) * om + c2 + b * t.ln();
                let (w, w_t, w_x) = if mu == 0.0 {
                    let f = psi.clone().unwrap_or_else(SmoothFn::identity);
                    let d = f.deriv(om);
                    (f.eval(om), d * om_t, d * om_x)
                } else {
                    let k = -delta1 / mu;
                    (k * om + c3 + delta1 * t.ln(), k * om_t + delta1 / t, k * om_x)
                };
                Ok(jet([u, v, w], [-x / (t * t), -(a + mu) * om_t + b / t, w_t], [1.0 / t, -(a + mu) * om_x, w_x]))
            }
            Case1B { a, b, delta1, c1, c2, c3, seed } => {
                need_positive_t(t)?;
                let q = Quadratic { a: *a, b: *b };
                let (p, pt, px) = self.branch_1b(&q, *c1, *seed, t, x)?;
                let (chi, chi_p) = q.chi(p, *c2);
                let (psi, psi_p) = if *delta1 != 0.0 { q.psi_hat(p) } else { (0.0, 0.0) };
                let d = *delta1;
                Ok(jet(
                    [p + x / t + a, chi + b * t.ln(), -d * psi + c3 + d * t.ln()],
                    [pt - x / (t * t), chi_p * pt + b / t, -d * psi_p * pt + d / t],
                    [px + 1.0 / t, chi_p * px, -d * psi_p * px],
                ))
            }
            Case2A { b, delta1, c1, c2, c3, seed } => {
                let (b, d) = (*b, *delta1);
                let k = b * b - 1.0;
                let omega = |p: f64| (-0.5 * p * p - b * p - k * (p - b).abs().ln() + c1, (1.0 - p * p) / (p - b));
                let p = invert(omega, *seed, x - 0.5 * t * t)?;
                let op = omega(p).1;
                let (pt, px) = (-t / op, 1.0 / op);
                let chi = b * p + k * (p - b).abs().ln() + c2;
                let chi_p = (b * p - 1.0) / (p - b);
                let psi = if d == 0.0 {
                    *c3
                } else if b == 0.0 {
                    d * (p + 1.0 / p) + c3
                } else {
                    d * p + d / b * p.abs().ln() + d / b * k * (p - b).abs().ln() + c3
                };
                let psi_p = if d == 0.0 { 0.0 } else { -d * (1.0 - p * p) / (p * (p - b)) };
                Ok(jet([p + t, chi + b * t, psi + d * t], [pt + 1.0, chi_p * pt + b, psi_p * pt + d], [px, chi_p * px, psi_p * px]))
            }
            Case2B { b, delta1, c1, c2, c3 } => {
                need_positive_t(t)?;
                let (b, d, c1) = (*b, *delta1, *c1);
                let lt = t.ln();
                let u = c1 / t - b + x / t;
                let v = (b * b - 1.0) * lt + c1 * b / t + c2 + b * x / t;
                let w = d * c1 / t + d * b * lt + c3 + d * x / t;
                let t2 = t * t;
                Ok(jet(
                    [u, v, w],
                    [-(c1 + x) / t2, (b * b - 1.0) / t - (c1 * b + b * x) / t2, d * b / t - d * (c1 + x) / t2],
                    [1.0 / t, b / t, d / t],
                ))
            }
            Case3 { delta1, delta2, c1, c2, c3, seed, psi, .. } => {
                let (d1, d2) = (*delta1, *delta2);
                if d2 == 0.0 {
                    let p = self.stationary_root()?;
                    let (w, wx) = if p == 0.0 {
                        let f = psi.clone().unwrap_or_else(SmoothFn::identity);
                        (f.eval(x), f.deriv(x))
                    } else {
                        (-d1 * x / p + c3 + d1 * t, -d1 / p)
                    };
                    let wt = if p == 0.0 { 0.0 } else { d1 };
                    return Ok(jet([p, *c2, w], [0.0, 0.0, wt], [0.0, 0.0, wx]));
                }
                let seed = seed.expect("validated");
                let f = |p: f64| (p * p * p / 3.0 - p - c1, p * p - 1.0);
                let p = invert(f, seed, d2 * x)?;
                let px = d2 / (p * p - 1.0);
                let psi = if d1 == 0.0 { 0.0 } else { -(d1 / d2) * (0.5 * p * p - p.abs().ln()) };
                Ok(jet(
                    [p, -0.5 * p * p + c2 + d2 * t, psi + c3 + d1 * t],
                    [0.0, d2, d1],
                    [px, -p * px, if d1 == 0.0 { 0.0 } else { -d1 / p }],
                ))
            }
            Pi5A { a, mu, c2, psi } => {
                need_positive_t(t)?;
                let m = a + mu;
                let xi = x / t - m * t.ln();
                let (xi_t, xi_x) = (-x / (t * t) - m / t, 1.0 / t);
                let k = m * m - 1.0;
                let d = psi.deriv(xi);
                Ok(jet(
                    [x / t + m, -m * x / t + k * t.ln() + c2, psi.eval(xi)],
                    [-x / (t * t), m * x / (t * t) + k / t, d * xi_t],
                    [1.0 / t, -m / t, d * xi_x],
                ))
            }
            Pi5B { a, b, c1, c2, seed, psi } => {
                need_positive_t(t)?;
                let q = Quadratic { a: *a, b: *b };
                let (p, pt, px) = self.branch_1b(&q, *c1, *seed, t, x)?;
                let (chi, chi_p) = q.chi(p, *c2);
                let (h, h_p) = q.psi_hat(p);
                let s = t.ln() - h;
                let d = psi.deriv(s);
                Ok(jet(
                    [p + x / t + a, chi + b * t.ln(), psi.eval(s)],
                    [pt - x / (t * t), chi_p * pt + b / t, d * (1.0 / t - h_p * pt)],
                    [px + 1.0 / t, chi_p * px, -d * h_p * px],
                ))
            }
        }
    }

    /// `φ`, `φ_t`, `φ_x` on the 1B branch at `ω = x/t − a ln t`.
    fn branch_1b(&self, q: &Quadratic, c1: f64, seed: [f64; 2], t: f64, x: f64) -> Result<(f64, f64, f64), ExactError> {
        let p = invert(|p| q.omega(p, c1), seed, x / t - q.a * t.ln())?;
        let op = q.omega(p, c1).1;
        Ok((p, (-x / (t * t) - q.a / t) / op, 1.0 / (t * op)))
    }

    pub fn jet(&self, t: f64, x: f64) -> Result<UvwJet, ExactError> {
        if !self.reflected {
            return self.base_jet(t, x);
        }
        let j = self.base_jet(-t, -x)?;
        Ok(UvwJet { t, x, state: j.state, dt: j.dt.map(|d| -d), dx: j.dx.map(|d| -d) })
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<UvwState, ExactError> {
        Ok(self.jet(t, x)?.state)
    }
}

impl Sampler for ReductionSolution {
    fn state(&self, t: f64, x: f64, _hint: Option<&UvwState>) -> Result<UvwState, ExactError> {
        self.eval(t, x)
    }

    fn analytic_jet(&self, t: f64, x: f64, _hint: Option<&UvwState>) -> Option<Result<UvwJet, ExactError>> {
        Some(self.jet(t, x))
    }
}
