//! Singular family `x − (u+ε)t = e^{−εu}Θ_u`, `v = εu + c`, and the
//! ultra-singular family of constant `(u, v)` with an advected `w`.

use super::roots::{rtsafe, sign_changes};
use super::{ExactError, Sampler};
use crate::model::{UvwJet, UvwState};
use crate::telegraph::{MonotoneFn, SmoothFn, ThetaFn};
use serde::{Deserialize, Serialize};

fn default_search() -> [f64; 2] {
    [-50.0, 50.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSolution {
    /// `ε ∈ {−1, 1}`
    pub eps: f64,
    #[serde(default)]
    pub c: f64,
    #[serde(default = "ThetaFn::zero")]
    pub theta: ThetaFn,
    #[serde(default = "MonotoneFn::identity")]
    pub w_map: MonotoneFn,
    /// Interval searched for `u`.
    #[serde(default = "default_search")]
    pub search: [f64; 2],
}

/// Result of a singular-family evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularEval {
    pub state: UvwState,
    /// More than one root was found in the search interval.
    pub multiple_roots: bool,
}

const SCAN_CELLS: usize = 64;

impl SingularSolution {
    pub fn new(eps: f64, c: f64, theta: ThetaFn, w_map: MonotoneFn) -> Result<Self, ExactError> {
        let s = Self { eps, c, theta, w_map, search: default_search() };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ExactError> {
        if self.eps != 1.0 && self.eps != -1.0 {
            return Err(ExactError::InvalidParameters(format!("eps must be ±1, got {}", self.eps)));
        }
        if !(self.search[0] < self.search[1]) {
            return Err(ExactError::InvalidParameters("search interval is empty".into()));
        }
        Ok(self.w_map.validate()?)
    }

    /// `(G, G_u)` with `G(u) = x − (u+ε)t − e^{−εu}Θ_u`.
    fn g(&self, u: f64, t: f64, x: f64) -> (f64, f64) {
        let e = self.eps;
        let [_, th1, th2] = self.theta.eval(u);
        let k = (-e * u).exp();
        (x - (u + e) * t - k * th1, -t - k * (th2 - e * th1))
    }

    /// First integral `e^{εu}t + εΘ_u − Θ`, and its `u`-derivative.
    fn invariant(&self, u: f64, t: f64) -> (f64, f64) {
        let e = self.eps;
        let [th0, th1, th2] = self.theta.eval(u);
        let k = (e * u).exp();
        (k * t + e * th1 - th0, e * k * t + e * th2 - th1)
    }

    fn solve_u(&self, t: f64, x: f64, guess: Option<f64>) -> Result<(f64, bool), ExactError> {
        let [lo, hi] = self.search;
        let brackets = sign_changes(|u| self.g(u, t, x).0, lo, hi, SCAN_CELLS);
        let roots: Vec<f64> = brackets.iter().filter_map(|&(a, b)| rtsafe(|u| self.g(u, t, x), a, b, 1e-15, 200).ok()).collect();
        let mut roots = roots;
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let target = guess.unwrap_or(0.5 * (lo + hi));
        let best =
            roots.iter().copied().min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs())).ok_or(ExactError::NoRoot { lo, hi })?;
        Ok((best, roots.len() > 1))
    }

    pub fn eval_flagged(&self, t: f64, x: f64, guess: Option<f64>) -> Result<SingularEval, ExactError> {
        let (u, multiple_roots) = self.solve_u(t, x, guess)?;
        let (i, _) = self.invariant(u, t);
        Ok(SingularEval { state: UvwState::new(u, self.eps * u + self.c, self.w_map.eval(i)), multiple_roots })
    }

    pub fn jet(&self, t: f64, x: f64, guess: Option<f64>) -> Result<UvwJet, ExactError> {
        let (u, _) = self.solve_u(t, x, guess)?;
        let (_, gu) = self.g(u, t, x);
        if gu == 0.0 {
            return Err(ExactError::Degenerate { det: gu });
        }
        let e = self.eps;
        let (ux, ut) = (-1.0 / gu, (u + e) / gu);
        let (i, iu) = self.invariant(u, t);
        let dw = self.w_map.deriv(i);
        let wt = dw * (iu * ut + (e * u).exp());
        let wx = dw * iu * ux;
        let state = UvwState::new(u, e * u + self.c, self.w_map.eval(i));
        Ok(UvwJet { t, x, state, dt: [ut, e * ut, wt], dx: [ux, e * ux, wx] })
    }
}

impl Sampler for SingularSolution {
    fn state(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Result<UvwState, ExactError> {
        Ok(self.eval_flagged(t, x, hint.map(|h| h.u))?.state)
    }

    fn analytic_jet(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Option<Result<UvwJet, ExactError>> {
        Some(self.jet(t, x, hint.map(|h| h.u)))
    }
}

/// `u = u0`, `v = v0`, `w = W(x − u0 t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UltraSingularSolution {
    pub u0: f64,
    pub v0: f64,
    #[serde(default = "SmoothFn::identity")]
    pub profile: SmoothFn,
}

impl UltraSingularSolution {
    pub fn validate(&self) -> Result<(), ExactError> {
        Ok(self.profile.validate()?)
    }

    pub fn eval(&self, t: f64, x: f64) -> UvwState {
        UvwState::new(self.u0, self.v0, self.profile.eval(x - self.u0 * t))
    }

    pub fn jet(&self, t: f64, x: f64) -> UvwJet {
        let d = self.profile.deriv(x - self.u0 * t);
        UvwJet { t, x, state: self.eval(t, x), dt: [0.0, 0.0, -self.u0 * d], dx: [0.0, 0.0, d] }
    }
}

impl Sampler for UltraSingularSolution {
    fn state(&self, t: f64, x: f64, _hint: Option<&UvwState>) -> Result<UvwState, ExactError> {
        Ok(self.eval(t, x))
    }

    fn analytic_jet(&self, t: f64, x: f64, _hint: Option<&UvwState>) -> Option<Result<UvwJet, ExactError>> {
        Some(Ok(self.jet(t, x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::residual_uvw;

    fn close(a: UvwState, b: [f64; 3]) -> bool {
        (a.u - b[0]).abs() < 1e-10 && (a.v - b[1]).abs() < 1e-10 && (a.w - b[2]).abs() < 1e-10
    }

    #[test]
    fn singular_examples() {
        let s = SingularSolution::new(1.0, 0.0, ThetaFn::zero(), MonotoneFn::Identity).unwrap();
        assert!(close(s.state(1.0, 3.0, None).unwrap(), [2.0, 2.0, 2f64.exp()]));
        assert!(close(s.state(1.0, 1.0, None).unwrap(), [0.0, 0.0, 1.0]));
        let m = SingularSolution::new(-1.0, 5.0, ThetaFn::zero(), MonotoneFn::Identity).unwrap();
        assert!(close(m.state(2.0, 2.0, None).unwrap(), [2.0, 3.0, 2.0 * (-2f64).exp()]));
        assert!(SingularSolution::new(0.5, 0.0, ThetaFn::zero(), MonotoneFn::Identity).is_err());
    }

    #[test]
    fn singular_jet_solves_system() {
        let th = ThetaFn::Polynomial { coeffs: vec![0.0, 0.0, 0.5, 0.02] };
        for eps in [1.0, -1.0] {
            let s = SingularSolution::new(eps, 0.4, th.clone(), MonotoneFn::Tanh).unwrap();
            for &(t, x) in &[(1.0, 0.5), (1.5, -0.25), (2.0, 1.0)] {
                let j = s.jet(t, x, None).unwrap();
                let r = residual_uvw(&j);
                assert!(r.iter().all(|r| r.abs() < 1e-12), "{r:?}");
                // u_t v_x − u_x v_t vanishes on this family.
                assert!((j.dt[0] * j.dx[1] - j.dx[0] * j.dt[1]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn multiple_roots_are_flagged() {
        // G(u) = 0.1 − 0.1u − u²e^{−u} changes sign on both sides of u = 0.
        let th = ThetaFn::Polynomial { coeffs: vec![0.0, 0.0, 0.0, 1.0 / 3.0] };
        let s = SingularSolution { search: [-3.0, 3.0], ..SingularSolution::new(1.0, 0.0, th, MonotoneFn::Identity).unwrap() };
        let e = s.eval_flagged(0.1, 0.2, Some(0.0)).unwrap();
        assert!(e.multiple_roots);
    }

    #[test]
    fn ultra_examples() {
        let s = UltraSingularSolution { u0: 0.0, v0: 0.0, profile: SmoothFn::identity() };
        assert_eq!(s.eval(5.0, 7.0), UvwState::new(0.0, 0.0, 7.0));
        let s = UltraSingularSolution { u0: 1.0, v0: 2.0, profile: SmoothFn::identity() };
        assert_eq!(s.eval(3.0, 3.0), UvwState::new(1.0, 2.0, 0.0));
        let s = UltraSingularSolution { u0: 0.0, v0: 1.5, profile: SmoothFn::Monotone { of: MonotoneFn::Tanh } };
        assert_eq!(s.eval(0.0, 0.4), UvwState::new(0.0, 1.5, 0.4f64.tanh()));
        assert!(residual_uvw(&s.jet(0.3, 0.2)).iter().all(|r| *r == 0.0));
    }
}
