//! Action of the point symmetry group on solutions:
//! `t̃ = T¹t + T⁰`, `x̃ = T¹x + T¹U⁰t + X⁰`, `ũ = u + U⁰`, `ṽ = v + V⁰`,
//! `w̃ = W(w)`.

use super::VerifyError;
use crate::exact_solutions::{ExactError, Sampler};
use crate::model::{UvwJet, UvwState};
use crate::telegraph::MonotoneFn;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupParams {
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub u0: f64,
    #[serde(default)]
    pub v0: f64,
    #[serde(default = "MonotoneFn::identity")]
    pub w_map: MonotoneFn,
}

impl GroupParams {
    pub fn identity() -> Self {
        Self { t0: 0.0, t1: 1.0, x0: 0.0, u0: 0.0, v0: 0.0, w_map: MonotoneFn::Identity }
    }

    /// `(t, x) → (−t, −x)`
    pub fn time_reflection() -> Self {
        Self { t1: -1.0, ..Self::identity() }
    }

    /// `w → −w`
    pub fn w_reflection() -> Self {
        Self { w_map: MonotoneFn::affine(-1.0, 0.0), ..Self::identity() }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.t1 == 0.0 || !self.t1.is_finite() {
            return Err(VerifyError::InvalidGroup(format!("T1 must be nonzero, got {}", self.t1)));
        }
        if ![self.t0, self.x0, self.u0, self.v0].iter().all(|v| v.is_finite()) {
            return Err(VerifyError::InvalidGroup("shifts must be finite".into()));
        }
        self.w_map.validate().map_err(|e| VerifyError::InvalidGroup(e.to_string()))
    }

    /// Image of `(t, x)`.
    pub fn forward(&self, t: f64, x: f64) -> (f64, f64) {
        (self.t1 * t + self.t0, self.t1 * x + self.t1 * self.u0 * t + self.x0)
    }

    /// Preimage of `(t̃, x̃)`.
    pub fn pull_back(&self, tt: f64, xt: f64) -> (f64, f64) {
        let t = (tt - self.t0) / self.t1;
        (t, (xt - self.x0) / self.t1 - self.u0 * t)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &GroupParams) -> GroupParams {
        let (a, b) = (self, first);
        GroupParams {
            t0: a.t1 * b.t0 + a.t0,
            t1: a.t1 * b.t1,
            x0: a.t1 * b.x0 + a.t1 * a.u0 * b.t0 + a.x0,
            u0: a.u0 + b.u0,
            v0: a.v0 + b.v0,
            w_map: MonotoneFn::compose(a.w_map.clone(), b.w_map.clone()),
        }
    }

    /// Random element with shifts in `[−1, 1]`, `|T¹| ∈ [½, 2]` of either
    /// sign and an affine or odd-cubic `W`.
    pub fn random(rng: &mut impl Rng) -> Self {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let w_map = match rng.gen_range(0..3) {
            0 => MonotoneFn::Identity,
            1 => {
                let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                MonotoneFn::affine(s * rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0))
            }
            _ => MonotoneFn::OddCubic { a: rng.gen_range(0.5..2.0), b: rng.gen_range(0.1..0.5) },
        };
        Self {
            t0: rng.gen_range(-1.0..1.0),
            t1: sign * rng.gen_range(0.5..2.0),
            x0: rng.gen_range(-1.0..1.0),
            u0: rng.gen_range(-1.0..1.0),
            v0: rng.gen_range(-1.0..1.0),
            w_map,
        }
    }
}

/// Transformed solution.
pub struct Orbit<'a> {
    pub base: &'a dyn Sampler,
    pub g: GroupParams,
}

impl<'a> Orbit<'a> {
    pub fn new(base: &'a dyn Sampler, g: GroupParams) -> Result<Self, VerifyError> {
        g.validate()?;
        Ok(Self { base, g })
    }

    fn base_hint(&self, h: Option<&UvwState>) -> Option<UvwState> {
        let h = h?;
        let w = self.g.w_map.inverse(h.w).ok()?;
        Some(UvwState::new(h.u - self.g.u0, h.v - self.g.v0, w))
    }

    fn push(&self, s: UvwState) -> UvwState {
        UvwState::new(s.u + self.g.u0, s.v + self.g.v0, self.g.w_map.eval(s.w))
    }
}

impl Sampler for Orbit<'_> {
    fn state(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Result<UvwState, ExactError> {
        let (t0, x0) = self.g.pull_back(t, x);
        Ok(self.push(self.base.state(t0, x0, self.base_hint(hint).as_ref())?))
    }

    fn analytic_jet(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Option<Result<UvwJet, ExactError>> {
        let (t0, x0) = self.g.pull_back(t, x);
        let j = match self.base.analytic_jet(t0, x0, self.base_hint(hint).as_ref())? {
            Ok(j) => j,
            Err(e) => return Some(Err(e)),
        };
        let (k, c) = (1.0 / self.g.t1, self.g.u0);
        let dw = self.g.w_map.deriv(j.state.w);
        let scale = [1.0, 1.0, dw];
        let dt = [0, 1, 2].map(|i| scale[i] * k * (j.dt[i] - c * j.dx[i]));
        let dx = [0, 1, 2].map(|i| scale[i] * k * j.dx[i]);
        Some(Ok(UvwJet { t, x, state: self.push(j.state), dt, dx }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_solutions::{JetMode, Rect, RegularSolution, UltraSingularSolution};
    use crate::model::residual_uvw;
    use crate::telegraph::{Mode, SmoothFn, TelegraphFn};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quad() -> RegularSolution {
        RegularSolution::new(TelegraphFn::single(Mode::Quad), MonotoneFn::Tanh, Rect::new([-10.0, -10.0], [10.0, 10.0])).unwrap()
    }

    #[test]
    fn identity_is_identity() {
        let s = quad();
        let o = Orbit::new(&s, GroupParams::identity()).unwrap();
        assert_eq!(o.state(1.2, 0.3, None).unwrap(), s.state(1.2, 0.3, None).unwrap());
    }

    #[test]
    fn reflection_keeps_residual() {
        let s = quad();
        let o = Orbit::new(&s, GroupParams::time_reflection()).unwrap();
        let j = o.jet(-1.5, 0.2, None, JetMode::FiniteDifference { h: 1e-5 }).unwrap();
        assert!(residual_uvw(&j).iter().all(|r| r.abs() < 1e-6));
    }

    #[test]
    fn galilean_boost_of_rest_state() {
        let s = UltraSingularSolution { u0: 0.0, v0: 0.0, profile: SmoothFn::Sine { amp: 1.0, k: 1.0, phase: 0.0 } };
        let o = Orbit::new(&s, GroupParams { u0: 1.0, ..GroupParams::identity() }).unwrap();
        let st = o.state(0.7, 2.0, None).unwrap();
        assert_eq!(st.u, 1.0);
        assert!((st.w - (2.0f64 - 0.7).sin()).abs() < 1e-15);
    }

    #[test]
    fn group_law() {
        let s = quad();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let (a, b) = (GroupParams::random(&mut rng), GroupParams::random(&mut rng));
            let inner = Orbit::new(&s, a.clone()).unwrap();
            let nested = Orbit::new(&inner, b.clone()).unwrap();
            let direct = Orbit::new(&s, b.after(&a)).unwrap();
            let (t, x) = b.after(&a).forward(1.3, 0.1);
            let (p, q) = (nested.state(t, x, None).unwrap(), direct.state(t, x, None).unwrap());
            assert!((p.u - q.u).abs() < 1e-10 && (p.v - q.v).abs() < 1e-10 && (p.w - q.w).abs() < 1e-10);
            let j = direct.jet(t, x, None, JetMode::Auto).unwrap();
            assert!(residual_uvw(&j).iter().all(|r| r.abs() < 1e-9));
        }
    }

    #[test]
    fn zero_dilation_rejected() {
        let s = quad();
        assert!(Orbit::new(&s, GroupParams { t1: 0.0, ..GroupParams::identity() }).is_err());
    }
}
