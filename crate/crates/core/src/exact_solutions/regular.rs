//! Regular hodograph family: `t = Φ_u`, `x = uΦ_u − Φ_v − Φ`, `w = W(e^v Φ_v)`.

use super::roots::{newton2, Eval2, NewtonSettings};
use super::{continue_from_anchor, ExactError, Rect, Sampler};
use crate::model::{UvwJet, UvwState};
use crate::telegraph::{MonotoneFn, Partials, TelegraphFn};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularSolution {
    pub phi: TelegraphFn,
    #[serde(default = "MonotoneFn::identity")]
    pub w_map: MonotoneFn,
    /// Admissible `(u, v)` rectangle.
    pub validity: Rect,
    #[serde(default)]
    pub newton: NewtonSettings,
}

/// `∂(t, x)/∂(u, v)`.
fn jacobian(u: f64, p: &Partials) -> [[f64; 2]; 2] {
    [[p.fuu, p.fuv], [u * p.fuu - p.fuv, u * p.fuv - p.fvv - p.fv]]
}

impl RegularSolution {
    pub fn new(phi: TelegraphFn, w_map: MonotoneFn, validity: Rect) -> Result<Self, ExactError> {
        let s = Self { phi, w_map, validity, newton: NewtonSettings::default() };
        s.validate()?;
        Ok(s)
    }

    /// Rejects `Φ` with `Φ_uu² = Φ_uv²` at the centre of the validity window.
    pub fn validate(&self) -> Result<(), ExactError> {
        self.w_map.validate()?;
        self.validity.validate()?;
        let [u, v] = self.validity.center();
        let p = self.phi.eval(u, v);
        let det = p.fuv * p.fuv - p.fuu * p.fuu;
        if det.abs() < self.newton.degeneracy_tol {
            return Err(ExactError::Degenerate { det });
        }
        Ok(())
    }

    /// `(t, x)` as a function of `(u, v)`.
    pub fn forward(&self, u: f64, v: f64) -> [f64; 2] {
        let p = self.phi.eval(u, v);
        [p.fu, u * p.fu - p.fv - p.f]
    }

    fn residual(&self, uv: [f64; 2], target: [f64; 2]) -> Eval2 {
        let p = self.phi.eval(uv[0], uv[1]);
        let r = [p.fu - target[0], uv[0] * p.fu - p.fv - p.f - target[1]];
        Ok((r, jacobian(uv[0], &p)))
    }

    /// Solves for `(u, v)` at `(t, x)`.
    pub fn solve_uv(&self, t: f64, x: f64, guess: Option<[f64; 2]>) -> Result<[f64; 2], ExactError> {
        let goal = [t, x];
        let scale = t.abs().max(x.abs());
        let solve = |p0: [f64; 2], target: [f64; 2]| newton2(|p| self.residual(p, target), p0, scale, &self.newton);
        let center = self.validity.center();
        let found = match guess {
            Some(g) => solve(g, goal).or_else(|_| solve(center, goal)),
            None => solve(center, goal),
        };
        let uv = match found {
            Ok(uv) if self.validity.contains(uv) => uv,
            _ => continue_from_anchor(center, self.forward(center[0], center[1]), goal, solve)?,
        };
        if !self.validity.contains(uv) {
            return Err(ExactError::NoSolutionInWindow { t, x });
        }
        Ok(uv)
    }

    pub fn eval(&self, t: f64, x: f64, guess: Option<[f64; 2]>) -> Result<UvwState, ExactError> {
        let [u, v] = self.solve_uv(t, x, guess)?;
        let p = self.phi.eval(u, v);
        Ok(UvwState::new(u, v, self.w_map.eval(v.exp() * p.fv)))
    }

    /// Jet by implicit differentiation: `∂(u, v)/∂(t, x) = J⁻¹`.
    pub fn jet(&self, t: f64, x: f64, guess: Option<[f64; 2]>) -> Result<UvwJet, ExactError> {
        let [u, v] = self.solve_uv(t, x, guess)?;
        let p = self.phi.eval(u, v);
        let j = jacobian(u, &p);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < self.newton.degeneracy_tol {
            return Err(ExactError::Degenerate { det });
        }
        let (ut, ux) = (j[1][1] / det, -j[0][1] / det);
        let (vt, vx) = (-j[1][0] / det, j[0][0] / det);
        let ev = v.exp();
        let s = ev * p.fv;
        let (su, sv) = (ev * p.fuv, ev * (p.fv + p.fvv));
        let dw = self.w_map.deriv(s);
        let wt = dw * (su * ut + sv * vt);
        let wx = dw * (su * ux + sv * vx);
        Ok(UvwJet { t, x, state: UvwState::new(u, v, self.w_map.eval(s)), dt: [ut, vt, wt], dx: [ux, vx, wx] })
    }
}

impl Sampler for RegularSolution {
    fn state(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Result<UvwState, ExactError> {
        self.eval(t, x, hint.map(|h| [h.u, h.v]))
    }

    fn analytic_jet(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Option<Result<UvwJet, ExactError>> {
        Some(self.jet(t, x, hint.map(|h| [h.u, h.v])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::residual_uvw;
    use crate::telegraph::{Branch, Mode};

    fn quad() -> RegularSolution {
        RegularSolution::new(TelegraphFn::single(Mode::Quad), MonotoneFn::Identity, Rect::new([-10.0, -10.0], [10.0, 10.0])).unwrap()
    }

    #[test]
    fn quad_examples() {
        let s = quad();
        let a = s.eval(2.0, 0.0, None).unwrap();
        assert!((a.u - 1.0).abs() < 1e-12 && (a.v + 0.5).abs() < 1e-12);
        assert!((a.w - 2.0 * (-0.5f64).exp()).abs() < 1e-12);
        let b = s.eval(0.0, -2.0, None).unwrap();
        assert!(b.u.abs() < 1e-12 && b.v.abs() < 1e-12 && (b.w - 2.0).abs() < 1e-12);
    }

    #[test]
    fn const_phi_is_degenerate() {
        let r = RegularSolution::new(TelegraphFn::single(Mode::Const), MonotoneFn::Identity, Rect::new([-1.0, -1.0], [1.0, 1.0]));
        assert!(matches!(r, Err(ExactError::Degenerate { .. })));
    }

    #[test]
    fn exp_mode_matches_closed_form() {
        let phi = TelegraphFn::single(Mode::exp(2f64.sqrt(), Branch::Plus));
        let s = RegularSolution::new(phi, MonotoneFn::Identity, Rect::new([-5.0, -10.0], [5.0, 5.0])).unwrap();
        for &(t, x) in &[(1.0, 0.0), (1.5, 0.7), (2.0, -1.0)] {
            let st = s.eval(t, x, None).unwrap();
            let u = x / t + 2f64.sqrt();
            let v = (t / 2f64.sqrt()).ln() - 2f64.sqrt() * u;
            assert!((st.u - u).abs() < 1e-10 && (st.v - v).abs() < 1e-10, "{st:?}");
        }
    }

    #[test]
    fn analytic_jet_solves_system() {
        let s = RegularSolution { w_map: MonotoneFn::Tanh, ..quad() };
        for &(t, x) in &[(1.0, 0.3), (1.7, -0.9)] {
            let j = s.jet(t, x, None).unwrap();
            assert!(residual_uvw(&j).iter().all(|r| r.abs() < 1e-12));
        }
    }
}
