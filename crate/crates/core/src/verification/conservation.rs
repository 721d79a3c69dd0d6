//! Conserved currents, their characteristics and the advected `ω` chain.
//!
//! With `E = e^{r1−r2}` and `S = r1 + r2`, the zeroth-order currents are
//!
//! ```text
//! ρ = E Ω(r3) + Ψ_1 − Ψ_2,       σ = S E Ω(r3) + V¹Ψ_1 − V²Ψ_2
//! ρ = E (x − V³t),               σ = E (V³(x − V³t) − t)
//! ```
//!
//! where `Ψ` solves `2Ψ_12 = Ψ_2 − Ψ_1`. First-order currents are
//! `ρ = (1/r1_x − 1/r2_x) E` with `σ = (V¹/r1_x − V²/r2_x) E`, and
//! `ρ = E Ω(ω⁰, ω¹)` with `σ = S ρ`.

use super::poly::BiPoly;
use super::{halving, Refinement, VerifyError};
use crate::exact_solutions::{JetMode, Sampler};
use crate::model::{char_speeds, JetPoint, RiemannState, UvwState};
use crate::telegraph::{RiemannPhi, SmoothFn, TelegraphFn};
use serde::{Deserialize, Serialize};

/// `|r1_x|` or `|r2_x|` below this puts the first-order current out of domain.
pub const GRADIENT_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConservedCurrent {
    /// General zeroth-order current; `psi` must be in adjoint form.
    General {
        omega: SmoothFn,
        psi: RiemannPhi,
    },
    NonTranslation,
    /// `Ω = r3`, `Ψ = 0`.
    Dhc,
    /// `Ω = 0`.
    Ehc {
        psi: RiemannPhi,
    },
    C0,
    /// `Ω(ω⁰, ω¹)`.
    C1 {
        omega: BiPoly,
    },
}

/// Explicit `(t, x)` partials and `r`-gradients of a zeroth-order current.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentGradients {
    pub rho_t: f64,
    pub sigma_x: f64,
    pub rho_r: [f64; 3],
    pub sigma_r: [f64; 3],
}

impl ConservedCurrent {
    pub fn name(&self) -> &'static str {
        match self {
            ConservedCurrent::General { .. } => "general",
            ConservedCurrent::NonTranslation => "non-translation",
            ConservedCurrent::Dhc => "dhc",
            ConservedCurrent::Ehc { .. } => "ehc",
            ConservedCurrent::C0 => "c0",
            ConservedCurrent::C1 { .. } => "c1",
        }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        match self {
            ConservedCurrent::General { psi, omega } => {
                omega.validate().map_err(|e| VerifyError::Domain(e.to_string()))?;
                need_adjoint(psi)
            }
            ConservedCurrent::Ehc { psi } => need_adjoint(psi),
            _ => Ok(()),
        }
    }

    fn zeroth(&self) -> Option<(SmoothFn, RiemannPhi)> {
        match self {
            ConservedCurrent::General { omega, psi } => Some((omega.clone(), psi.clone())),
            ConservedCurrent::Dhc => Some((SmoothFn::identity(), TelegraphFn::zero().adjoint_form())),
            ConservedCurrent::Ehc { psi } => Some((SmoothFn::Polynomial { coeffs: vec![] }, psi.clone())),
            _ => None,
        }
    }

    /// `(ρ, σ)` at a jet.
    pub fn density_flux(&self, j: &JetPoint) -> Result<(f64, f64), VerifyError> {
        let RiemannState { r1, r2, r3 } = j.state;
        let v = char_speeds(r1, r2);
        let e = (r1 - r2).exp();
        if let Some((omega, psi)) = self.zeroth() {
            let p = psi.eval(r1, r2);
            let om = omega.eval(r3);
            return Ok((e * om + p.f1 - p.f2, (r1 + r2) * e * om + v[0] * p.f1 - v[1] * p.f2));
        }
        match self {
            ConservedCurrent::NonTranslation => {
                let z = j.x - v[2] * j.t;
                Ok((e * z, e * (v[2] * z - j.t)))
            }
            ConservedCurrent::C0 => {
                let [a, b, _] = j.rx;
                if a.abs() < GRADIENT_FLOOR || b.abs() < GRADIENT_FLOOR {
                    return Err(VerifyError::Domain(format!(
                        "first-order current needs r1_x, r2_x ≠ 0, got {a:e}, {b:e} at ({}, {})",
                        j.t, j.x
                    )));
                }
                Ok(((1.0 / a - 1.0 / b) * e, (v[0] / a - v[1] / b) * e))
            }
            ConservedCurrent::C1 { omega } => {
                let rho = e * omega.eval(r3, (r2 - r1).exp() * j.rx[2]);
                Ok((rho, (r1 + r2) * rho))
            }
            _ => unreachable!("zeroth-order currents handled above"),
        }
    }

    /// Analytic gradients of currents that depend on `r` and `(t, x)` only.
    pub fn gradients(&self, t: f64, x: f64, s: RiemannState) -> Option<CurrentGradients> {
        let RiemannState { r1, r2, r3 } = s;
        let v = char_speeds(r1, r2);
        let e = (r1 - r2).exp();
        if let Some((omega, psi)) = self.zeroth() {
            let p = psi.eval(r1, r2);
            let (om, dom) = (omega.eval(r3), omega.deriv(r3));
            return Some(CurrentGradients {
                rho_t: 0.0,
                sigma_x: 0.0,
                rho_r: [e * om + p.f11 - p.f12, -e * om + p.f12 - p.f22, e * dom],
                sigma_r: [
                    v[0] * e * om + p.f1 - p.f2 + v[0] * p.f11 - v[1] * p.f12,
                    -v[1] * e * om + p.f1 - p.f2 + v[0] * p.f12 - v[1] * p.f22,
                    (r1 + r2) * e * dom,
                ],
            });
        }
        match self {
            ConservedCurrent::NonTranslation => {
                let z = x - v[2] * t;
                let f = v[2] * z - t;
                Some(CurrentGradients {
                    rho_t: -e * v[2],
                    sigma_x: e * v[2],
                    rho_r: [e * (z - t), -e * (z + t), 0.0],
                    sigma_r: [e * (f + z - v[2] * t), e * (-f + z - v[2] * t), 0.0],
                })
            }
            _ => None,
        }
    }

    /// Characteristic `λ` with `ρ_t + σ_x = λ · (r_t + V r_x)`, for
    /// zeroth-order currents.
    pub fn characteristic(&self, t: f64, x: f64, s: RiemannState) -> Option<[f64; 3]> {
        self.gradients(t, x, s).map(|g| g.rho_r)
    }
}

fn need_adjoint(psi: &RiemannPhi) -> Result<(), VerifyError> {
    if psi.adjoint || psi.is_zero() {
        Ok(())
    } else {
        Err(VerifyError::Domain("Ψ must solve the adjoint equation 2Ψ_12 = Ψ_2 − Ψ_1".into()))
    }
}

/// `ρ_t + σ_x − λ·(r_t + V r_x)` at an arbitrary, possibly off-shell jet.
pub fn pairing_residual(c: &ConservedCurrent, j: &JetPoint) -> Option<f64> {
    let g = c.gradients(j.t, j.x, j.state)?;
    let v = char_speeds(j.state.r1, j.state.r2);
    let lam = c.characteristic(j.t, j.x, j.state)?;
    let mut r = g.rho_t + g.sigma_x;
    for k in 0..3 {
        r += g.rho_r[k] * j.rt[k] + g.sigma_r[k] * j.rx[k] - lam[k] * (j.rt[k] + v[k] * j.rx[k]);
    }
    Some(r)
}

/// Mismatches of the characteristic check for a zeroth-order current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingReport {
    /// `|∇_r ρ − λ|` with `∇_r ρ` from a sixth-order difference stencil,
    /// relative to `1 + |λ|`.
    pub gradient: f64,
    /// `|∂σ/∂r^k − V^k ∂ρ/∂r^k|` plus the explicit `ρ_t + σ_x`, relative.
    pub flux: f64,
}

/// Checks `λ = ∇_r ρ` and `∂σ/∂r^k = V^k ∂ρ/∂r^k` at the given states.
/// Returns `None` for first-order currents.
pub fn pairing_check(c: &ConservedCurrent, states: &[(f64, f64, RiemannState)]) -> Option<PairingReport> {
    const W: [f64; 3] = [45.0, -9.0, 1.0];
    let h = 2e-3;
    let mut out = PairingReport { gradient: 0.0, flux: 0.0 };
    for &(t, x, s) in states {
        let g = c.gradients(t, x, s)?;
        let lam = c.characteristic(t, x, s)?;
        let v = char_speeds(s.r1, s.r2);
        let rho = |a: [f64; 3]| {
            let j = JetPoint::on_shell(t, x, RiemannState::from_array(a), [0.0; 3], None);
            c.density_flux(&j).map(|p| p.0).unwrap_or(f64::NAN)
        };
        for k in 0..3 {
            let mut d = 0.0;
            for (m, w) in W.iter().enumerate() {
                let step = h * (m + 1) as f64;
                let (mut p, mut q) = (s.to_array(), s.to_array());
                p[k] += step;
                q[k] -= step;
                d += w * (rho(p) - rho(q));
            }
            d /= 60.0 * h;
            out.gradient = out.gradient.max((d - lam[k]).abs() / (1.0 + lam[k].abs()));
            let f = g.sigma_r[k] - v[k] * g.rho_r[k];
            out.flux = out.flux.max(f.abs() / (1.0 + g.sigma_r[k].abs()));
        }
        out.flux = out.flux.max((g.rho_t + g.sigma_x).abs() / (1.0 + g.rho_t.abs()));
    }
    Some(out)
}

fn riemann_jet(sol: &dyn Sampler, t: f64, x: f64, hint: Option<&UvwState>, mode: JetMode) -> Result<JetPoint, VerifyError> {
    Ok(sol.jet(t, x, hint, mode)?.to_riemann())
}

/// Central-difference divergence `ρ_t + σ_x` at `(t, x)` with step `h`.
pub fn divergence(sol: &dyn Sampler, c: &ConservedCurrent, t: f64, x: f64, h: f64, mode: JetMode) -> Result<f64, VerifyError> {
    let j0 = sol.jet(t, x, None, mode)?;
    let df = |a: (f64, f64), b: (f64, f64)| -> Result<[f64; 2], VerifyError> {
        let p = c.density_flux(&riemann_jet(sol, a.0, a.1, Some(&j0.state), mode)?)?;
        let m = c.density_flux(&riemann_jet(sol, b.0, b.1, Some(&j0.state), mode)?)?;
        Ok([p.0 - m.0, p.1 - m.1])
    };
    let dt = df((t + h, x), (t - h, x))?[0];
    let dx = df((t, x + h), (t, x - h))?[1];
    Ok((dt + dx) / (2.0 * h))
}

/// `d/dt ∫ρ dx + σ(x₁) − σ(x₀)` with the trapezoid rule on `n` cells and a
/// central difference in time of step `(x₁ − x₀)/n`.
pub fn integral_balance(sol: &dyn Sampler, c: &ConservedCurrent, t: f64, x: [f64; 2], n: usize, mode: JetMode) -> Result<f64, VerifyError> {
    let dx = (x[1] - x[0]) / n as f64;
    let integral = |tt: f64| -> Result<f64, VerifyError> {
        let mut hint: Option<UvwState> = None;
        let mut s = 0.0;
        for i in 0..=n {
            let xx = x[0] + dx * i as f64;
            let j = sol.jet(tt, xx, hint.as_ref(), mode)?;
            hint = Some(j.state);
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            s += w * c.density_flux(&j.to_riemann())?.0;
        }
        Ok(s * dx)
    };
    let didt = (integral(t + dx)? - integral(t - dx)?) / (2.0 * dx);
    let flux = |xx: f64| -> Result<f64, VerifyError> { Ok(c.density_flux(&riemann_jet(sol, t, xx, None, mode)?)?.1) };
    Ok(didt + flux(x[1])? - flux(x[0])?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationReport {
    pub current: String,
    /// Max divergence over the sample points against the difference step.
    pub divergence: Refinement,
    /// Integral balance against the cell width.
    pub drift: Refinement,
}

/// Divergence and integral-balance refinement of one current.
pub fn conservation_check(
    sol: &dyn Sampler,
    c: &ConservedCurrent,
    points: &[(f64, f64)],
    window: ([f64; 2], [f64; 2]),
    mode: JetMode,
) -> Result<ConservationReport, VerifyError> {
    c.validate()?;
    let hs = halving(4e-2, 4);
    let div = hs
        .iter()
        .map(|&h| points.iter().try_fold(0.0f64, |m, &(t, x)| Ok::<_, VerifyError>(m.max(divergence(sol, c, t, x, h, mode)?.abs()))))
        .collect::<Result<Vec<_>, _>>()?;
    let t_mid = 0.5 * (window.0[0] + window.0[1]);
    let ns = [16usize, 32, 64, 128];
    let drift = ns.iter().map(|&n| integral_balance(sol, c, t_mid, window.1, n, mode).map(f64::abs)).collect::<Result<Vec<_>, _>>()?;
    let widths = ns.iter().map(|&n| (window.1[1] - window.1[0]) / n as f64).collect();
    Ok(ConservationReport { current: c.name().into(), divergence: Refinement::new(hs, div), drift: Refinement::new(widths, drift) })
}

/// `ω^ι` at `(t, x)`: `ω⁰ = r3`, `ω^{ι+1} = e^{r2−r1} ∂_x ω^ι`, with nested
/// central differences of step `h`.
pub fn omega_level(sol: &dyn Sampler, iota: usize, t: f64, x: f64, h: f64, hint: &UvwState) -> Result<f64, VerifyError> {
    let s = sol.state(t, x, Some(hint))?;
    if iota == 0 {
        return Ok(s.w);
    }
    let r = crate::model::to_riemann(s);
    let d = (omega_level(sol, iota - 1, t, x + h, h, &s)? - omega_level(sol, iota - 1, t, x - h, h, &s)?) / (2.0 * h);
    Ok((r.r2 - r.r1).exp() * d)
}

/// Residual of `∂_t ω^ι + (r1 + r2) ∂_x ω^ι` by central differences.
pub fn omega_transport(sol: &dyn Sampler, iota: usize, t: f64, x: f64, h: f64) -> Result<f64, VerifyError> {
    let s = sol.state(t, x, None)?;
    let r = crate::model::to_riemann(s);
    let w = |tt: f64, xx: f64| omega_level(sol, iota, tt, xx, h, &s);
    let dt = (w(t + h, x)? - w(t - h, x)?) / (2.0 * h);
    let dx = (w(t, x + h)? - w(t, x - h)?) / (2.0 * h);
    Ok(dt + (r.r1 + r.r2) * dx)
}

/// Refinement of the transport residual of `ω^ι`, max over `points`.
/// Nested differences lose `ι + 1` powers of `h` to round-off, so each step
/// carries a floor proportional to `ε |ω^ι| (1 + |S|) / h^{ι+1}`.
pub fn omega_chain(sol: &dyn Sampler, iota: usize, points: &[(f64, f64)]) -> Result<Refinement, VerifyError> {
    const ROUND_OFF: f64 = 32.0 * f64::EPSILON;
    let hs = halving(2e-2, 4);
    let mut errs = Vec::with_capacity(hs.len());
    let mut floors = Vec::with_capacity(hs.len());
    for &h in &hs {
        let (mut e, mut f) = (0.0f64, 0.0f64);
        for &(t, x) in points {
            let s = sol.state(t, x, None)?;
            let r = crate::model::to_riemann(s);
            let scale = (1.0 + omega_level(sol, iota, t, x, h, &s)?.abs()) * (1.0 + (r.r1 + r.r2).abs());
            e = e.max(omega_transport(sol, iota, t, x, h)?.abs());
            f = f.max(ROUND_OFF * scale / h.powi(iota as i32 + 1));
        }
        errs.push(e);
        floors.push(f);
    }
    Ok(Refinement::with_floors(hs, errs, &floors))
}

/// The six currents exercised by the conservation suite.
pub fn standard_currents() -> Vec<ConservedCurrent> {
    use crate::telegraph::{Branch, Mode};
    let psi = TelegraphFn::single(Mode::exp(0.6, Branch::Plus)).adjoint_form();
    vec![
        ConservedCurrent::General { omega: SmoothFn::Sine { amp: 1.0, k: 0.8, phase: 0.2 }, psi: psi.clone() },
        ConservedCurrent::NonTranslation,
        ConservedCurrent::Dhc,
        ConservedCurrent::Ehc { psi },
        ConservedCurrent::C0,
        ConservedCurrent::C1 { omega: BiPoly::monomial(1.0, 1, 1).add(&BiPoly::w1()) },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_solutions::{Rect, RegularSolution};
    use crate::telegraph::{Mode, MonotoneFn};
    use crate::verification::gensym::random_jet;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sol() -> RegularSolution {
        let phi = TelegraphFn::single(Mode::Quad).plus(&TelegraphFn::single(Mode::exp(0.5, crate::telegraph::Branch::Plus)).scaled(0.1));
        RegularSolution::new(phi, MonotoneFn::Tanh, Rect::new([-3.0, -3.0], [3.0, 3.0])).unwrap()
    }

    fn pts() -> Vec<(f64, f64)> {
        vec![(1.3, -0.4), (1.6, 0.2)]
    }

    #[test]
    fn all_currents_conserved() {
        let s = sol();
        for c in standard_currents() {
            let r = conservation_check(&s, &c, &pts(), ([1.2, 1.8], [-0.5, 0.5]), JetMode::Auto).unwrap();
            assert!(r.divergence.converges_at(1.0), "{}: {:?}", c.name(), r.divergence);
            assert!(r.drift.converges_at(1.0), "{}: {:?}", c.name(), r.drift);
        }
    }

    #[test]
    fn direct_potential_rejected() {
        let bad = ConservedCurrent::General { omega: SmoothFn::identity(), psi: TelegraphFn::single(Mode::Quad).to_riemann_form() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn c0_domain_error() {
        let j = JetPoint::on_shell(1.0, 0.0, RiemannState::new(0.1, 0.2, 0.3), [0.0, 1.0, 1.0], None);
        assert!(matches!(ConservedCurrent::C0.density_flux(&j), Err(VerifyError::Domain(_))));
    }

    #[test]
    fn omega_chain_transported() {
        let s = sol();
        for iota in 0..=2 {
            let r = omega_chain(&s, iota, &pts()).unwrap();
            assert!(r.order.is_some_and(|o| o > 1.5), "iota {iota}: {r:?}");
        }
    }

    #[test]
    fn gradients_match_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for c in standard_currents() {
            for _ in 0..20 {
                let j = random_jet(&mut rng);
                let Some(g) = c.gradients(j.t, j.x, j.state) else { continue };
                let h = 1e-4;
                let at = |k: usize, d: f64| {
                    let mut a = j.state.to_array();
                    a[k] += d;
                    c.density_flux(&JetPoint { state: RiemannState::from_array(a), ..j }).unwrap()
                };
                for k in 0..3 {
                    let (p, m) = (at(k, h), at(k, -h));
                    let (dr, ds) = ((p.0 - m.0) / (2.0 * h), (p.1 - m.1) / (2.0 * h));
                    assert!((dr - g.rho_r[k]).abs() < 1e-6 * (1.0 + dr.abs()), "{} rho_{k}", c.name());
                    assert!((ds - g.sigma_r[k]).abs() < 1e-6 * (1.0 + ds.abs()), "{} sigma_{k}", c.name());
                }
            }
        }
    }

    #[test]
    fn pairing_at_sample_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let states: Vec<_> = (0..50)
            .map(|_| {
                let j = random_jet(&mut rng);
                (j.t, j.x, j.state)
            })
            .collect();
        for c in standard_currents() {
            match pairing_check(&c, &states) {
                Some(p) => assert!(p.gradient < 1e-10 && p.flux < 1e-10, "{}: {p:?}", c.name()),
                None => assert!(matches!(c, ConservedCurrent::C0 | ConservedCurrent::C1 { .. })),
            }
        }
    }

    proptest! {
        #[test]
        fn pairing_identity(seed in 0u64..2000, rt in prop::array::uniform3(-1.0..1.0f64)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut j = random_jet(&mut rng);
            j.rt = rt;
            for c in standard_currents() {
                if let Some(r) = pairing_residual(&c, &j) {
                    prop_assert!(r.abs() < 1e-10, "{}: {}", c.name(), r);
                }
            }
        }
    }
}
