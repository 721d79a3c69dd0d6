//! Generalized hodograph representation in Riemann invariants:
//! `x − V¹t = Φ + Φ₁`, `x − V²t = Φ − Φ₂`, `F(r³) = (x − V³t − Φ)e^{r¹−r²}`.

use super::regular::RegularSolution;
use super::roots::{newton2, Eval2, NewtonSettings};
use super::{continue_from_anchor, ExactError, Rect, Sampler};
use crate::model::{char_speeds, from_riemann, to_riemann, RiemannState, UvwJet, UvwState};
use crate::telegraph::{MonotoneFn, RiemannPhi};
use serde::{Deserialize, Serialize};

/// Third-component rule: through `F`, or a constant `r³`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThirdComponent {
    Map { f: MonotoneFn },
    Constant { r3: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenHodographSolution {
    /// `Φ̂(r¹, r²)` solving `2Φ̂₁₂ = Φ̂₁ − Φ̂₂`.
    pub phi_hat: RiemannPhi,
    pub third: ThirdComponent,
    /// Admissible `(r¹, r²)` rectangle.
    pub validity: Rect,
    #[serde(default)]
    pub newton: NewtonSettings,
}

impl GenHodographSolution {
    /// Representation of the same solution as a regular hodograph family:
    /// `Φ̂ = −Φ(r¹+r², r¹−r²)` and `F = −W⁻¹`.
    pub fn from_regular(s: &RegularSolution) -> Self {
        let f = MonotoneFn::compose(MonotoneFn::affine(-1.0, 0.0), MonotoneFn::inverse_of(s.w_map.clone()));
        let [ulo, vlo] = s.validity.lo;
        let [uhi, vhi] = s.validity.hi;
        // The (u, v) rectangle maps to a diamond in (r1, r2); keep its inscribed box.
        let (cu, cv) = (0.5 * (ulo + uhi), 0.5 * (vlo + vhi));
        let half = 0.25 * (uhi - ulo).min(vhi - vlo);
        let c = [0.5 * (cu + cv), 0.5 * (cu - cv)];
        Self {
            phi_hat: s.phi.scaled(-1.0).to_riemann_form(),
            third: ThirdComponent::Map { f },
            validity: Rect::new([c[0] - half, c[1] - half], [c[0] + half, c[1] + half]),
            newton: s.newton,
        }
    }

    pub fn validate(&self) -> Result<(), ExactError> {
        self.validity.validate()?;
        if let ThirdComponent::Map { f } = &self.third {
            f.validate()?;
        }
        let [r1, r2] = self.validity.center();
        let p = self.phi_hat.eval(r1, r2);
        let [t, _] = self.forward(r1, r2);
        let j = Self::jacobian(t, &p);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < self.newton.degeneracy_tol {
            return Err(ExactError::Degenerate { det });
        }
        Ok(())
    }

    /// `(t, x)` as a function of `(r¹, r²)`.
    pub fn forward(&self, r1: f64, r2: f64) -> [f64; 2] {
        let p = self.phi_hat.eval(r1, r2);
        let a = p.f + p.f1;
        let b = p.f - p.f2;
        let t = 0.5 * (b - a);
        [t, a + (r1 + r2 + 1.0) * t]
    }

    fn jacobian(t: f64, p: &crate::telegraph::RiemannPartials) -> [[f64; 2]; 2] {
        [[-t - p.f1 - p.f11, -t - p.f2 - p.f12], [-t - p.f1 + p.f12, -t - p.f2 + p.f22]]
    }

    fn residual(&self, r: [f64; 2], target: [f64; 2]) -> Eval2 {
        let [t, x] = target;
        let p = self.phi_hat.eval(r[0], r[1]);
        let [v1, v2, _] = char_speeds(r[0], r[1]);
        let g = [x - v1 * t - p.f - p.f1, x - v2 * t - p.f + p.f2];
        Ok((g, Self::jacobian(t, &p)))
    }

    pub fn solve_r12(&self, t: f64, x: f64, guess: Option<[f64; 2]>) -> Result<[f64; 2], ExactError> {
        let goal = [t, x];
        let scale = t.abs().max(x.abs());
        let solve = |p0: [f64; 2], target: [f64; 2]| newton2(|p| self.residual(p, target), p0, scale, &self.newton);
        let center = self.validity.center();
        let found = match guess {
            Some(g) => solve(g, goal).or_else(|_| solve(center, goal)),
            None => solve(center, goal),
        };
        let r = match found {
            Ok(r) if self.validity.contains(r) => r,
            _ => continue_from_anchor(center, self.forward(center[0], center[1]), goal, solve)?,
        };
        if !self.validity.contains(r) {
            return Err(ExactError::NoSolutionInWindow { t, x });
        }
        Ok(r)
    }

    /// `y = (x − V³t − Φ̂)e^{r¹−r²}`, the argument of `F⁻¹`.
    fn third_arg(&self, t: f64, x: f64, r1: f64, r2: f64) -> f64 {
        let p = self.phi_hat.eval(r1, r2);
        (x - (r1 + r2) * t - p.f) * (r1 - r2).exp()
    }

    pub fn eval_riemann(&self, t: f64, x: f64, guess: Option<[f64; 2]>) -> Result<RiemannState, ExactError> {
        let [r1, r2] = self.solve_r12(t, x, guess)?;
        let r3 = match &self.third {
            ThirdComponent::Constant { r3 } => *r3,
            ThirdComponent::Map { f } => f.inverse(self.third_arg(t, x, r1, r2))?,
        };
        Ok(RiemannState::new(r1, r2, r3))
    }

    pub fn jet(&self, t: f64, x: f64, guess: Option<[f64; 2]>) -> Result<UvwJet, ExactError> {
        let r = self.eval_riemann(t, x, guess)?;
        let (r1, r2) = (r.r1, r.r2);
        let p = self.phi_hat.eval(r1, r2);
        let j = Self::jacobian(t, &p);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < self.newton.degeneracy_tol {
            return Err(ExactError::Degenerate { det });
        }
        let [v1, v2, v3] = char_speeds(r1, r2);
        // J·∂r/∂s = −∂G/∂s with ∂G/∂t = (−V¹, −V²), ∂G/∂x = (1, 1).
        let solve = |b: [f64; 2]| [(j[1][1] * b[0] - j[0][1] * b[1]) / det, (-j[1][0] * b[0] + j[0][0] * b[1]) / det];
        let [r1t, r2t] = solve([v1, v2]);
        let [r1x, r2x] = solve([-1.0, -1.0]);
        let (r3t, r3x) = match &self.third {
            ThirdComponent::Constant { .. } => (0.0, 0.0),
            ThirdComponent::Map { f } => {
                let e = (r1 - r2).exp();
                let y = self.third_arg(t, x, r1, r2);
                let (a1, a2) = (-t - p.f1, -t - p.f2);
                let yt = e * (-v3 + a1 * r1t + a2 * r2t) + y * (r1t - r2t);
                let yx = e * (1.0 + a1 * r1x + a2 * r2x) + y * (r1x - r2x);
                let fp = f.deriv(r.r3);
                (yt / fp, yx / fp)
            }
        };
        let rt = [r1t, r2t, r3t];
        let rx = [r1x, r2x, r3x];
        let jp = crate::model::JetPoint { t, x, state: r, rx, rt, rxx: None };
        Ok(jp.to_uvw())
    }
}

impl Sampler for GenHodographSolution {
    fn state(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Result<UvwState, ExactError> {
        let g = hint.map(|h| {
            let r = to_riemann(*h);
            [r.r1, r.r2]
        });
        Ok(from_riemann(self.eval_riemann(t, x, g)?))
    }

    fn analytic_jet(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Option<Result<UvwJet, ExactError>> {
        let g = hint.map(|h| {
            let r = to_riemann(*h);
            [r.r1, r.r2]
        });
        Some(self.jet(t, x, g))
    }
}
