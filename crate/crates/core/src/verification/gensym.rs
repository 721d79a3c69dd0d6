//! Generalized symmetries in Riemann invariants.
//!
//! A characteristic is fixed by a constant `γ`, constants `ζ₁, ζ₂`, a
//! solution `Φ(r1, r2)` of `2Φ_12 = Φ_1 − Φ_2` and a polynomial
//! `Ω(ω⁰, ω¹)` with `ω⁰ = r3`, `ω¹ = e^{r2−r1} r3_x`:
//!
//! ```text
//! η¹ = A₁ r1_x + ζ₁,   A₁ = γx − γtV¹ − (ζ₁+ζ₂)t + Φ + Φ_1
//! η² = A₂ r2_x + ζ₂,   A₂ = γx − γtV² − (ζ₁+ζ₂)t + Φ − Φ_2
//! η³ = A₃ r3_x + Ω,    A₃ = γx − γtV³ − (ζ₁+ζ₂)t + Φ
//! ```
//!
//! All partials are analytic, so determining equations and commutators are
//! evaluated at arbitrary second-order jets without differencing.

use super::poly::BiPoly;
use super::VerifyError;
use crate::model::{char_speeds, JetPoint, RiemannState};
use crate::telegraph::{Mode, RiemannPhi, TelegraphFn};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GenSymCharacteristic {
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub zeta1: f64,
    #[serde(default)]
    pub zeta2: f64,
    #[serde(default)]
    pub phi: RiemannPhi,
    #[serde(default)]
    pub omega: BiPoly,
}

/// Value and first partials of `η = (η¹, η², η³)`; `r[k][j] = ∂η^k/∂r^j`,
/// `rx[k][j] = ∂η^k/∂r^j_x`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EtaJet {
    pub value: [f64; 3],
    pub t: [f64; 3],
    pub x: [f64; 3],
    pub r: [[f64; 3]; 3],
    pub rx: [[f64; 3]; 3],
}

impl EtaJet {
    /// Total `x`-derivative of each component.
    pub fn total_x(&self, j: &JetPoint, rxx: &[f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|k| self.x[k] + (0..3).map(|i| self.r[k][i] * j.rx[i] + self.rx[k][i] * rxx[i]).sum::<f64>())
    }
}

fn need_rxx(j: &JetPoint) -> Result<[f64; 3], VerifyError> {
    j.rxx.ok_or_else(|| VerifyError::Domain("jet lacks second x-derivatives".into()))
}

impl GenSymCharacteristic {
    /// Dilation `Ď`.
    pub fn dilation() -> Self {
        Self { gamma: 1.0, ..Self::default() }
    }

    /// First Galilean-type generator `Ǧ₁`.
    pub fn g1() -> Self {
        Self { zeta1: -1.0, ..Self::default() }
    }

    /// Second Galilean-type generator `Ǧ₂`.
    pub fn g2() -> Self {
        Self { zeta1: 1.0, zeta2: -1.0, ..Self::default() }
    }

    pub fn p(phi: RiemannPhi) -> Self {
        Self { phi, ..Self::default() }
    }

    pub fn w(omega: BiPoly) -> Self {
        Self { omega, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.phi.adjoint {
            return Err(VerifyError::Domain("Φ must solve 2Φ_12 = Φ_1 − Φ_2, not the adjoint equation".into()));
        }
        Ok(())
    }

    pub fn plus(&self, o: &Self) -> Self {
        Self {
            gamma: self.gamma + o.gamma,
            zeta1: self.zeta1 + o.zeta1,
            zeta2: self.zeta2 + o.zeta2,
            phi: self.phi.plus(&o.phi),
            omega: self.omega.add(&o.omega),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { gamma: c * self.gamma, zeta1: c * self.zeta1, zeta2: c * self.zeta2, phi: self.phi.scaled(c), omega: self.omega.scale(c) }
    }

    pub fn eta(&self, j: &JetPoint) -> EtaJet {
        let RiemannState { r1, r2, r3 } = j.state;
        let [r1x, r2x, r3x] = j.rx;
        let v = char_speeds(r1, r2);
        let (g, z, t, x) = (self.gamma, self.zeta1 + self.zeta2, j.t, j.x);
        let p = self.phi.eval(r1, r2);
        let base = |k: usize| g * x - g * t * v[k] - z * t + p.f;
        let a = [base(0) + p.f1, base(1) - p.f2, base(2)];
        let a_t = [0, 1, 2].map(|k| -g * v[k] - z);
        let a_r1 = [-g * t + p.f1 + p.f11, -g * t + p.f1 - p.f12, -g * t + p.f1];
        let a_r2 = [-g * t + p.f2 + p.f12, -g * t + p.f2 - p.f22, -g * t + p.f2];
        let e = (r2 - r1).exp();
        let w1 = e * r3x;
        let (om, om0, om1) = (self.omega.eval(r3, w1), self.omega.d0().eval(r3, w1), self.omega.d1().eval(r3, w1));
        let s = [r1x, r2x, r3x];
        let mut out = EtaJet {
            value: [a[0] * r1x + self.zeta1, a[1] * r2x + self.zeta2, a[2] * r3x + om],
            t: [0, 1, 2].map(|k| a_t[k] * s[k]),
            x: [0, 1, 2].map(|k| g * s[k]),
            ..EtaJet::default()
        };
        for k in 0..3 {
            out.r[k][0] = a_r1[k] * s[k];
            out.r[k][1] = a_r2[k] * s[k];
            out.rx[k][k] = a[k];
        }
        out.r[2][0] -= om1 * w1;
        out.r[2][1] += om1 * w1;
        out.r[2][2] = om0;
        out.rx[2][2] += om1 * e;
        out
    }

    /// Linearized system `D_t η^k + V^k D_x η^k + (η¹ + η²) r^k_x`
    /// evaluated on shell.
    pub fn determining_residual(&self, j: &JetPoint) -> Result<[f64; 3], VerifyError> {
        let rxx = need_rxx(j)?;
        let v = char_speeds(j.state.r1, j.state.r2);
        let e = self.eta(j);
        let dx = e.total_x(j, &rxx);
        let sum_rx = j.rx[0] + j.rx[1];
        Ok([0, 1, 2].map(|k| {
            let mut dt = e.t[k];
            for i in 0..3 {
                dt -= e.r[k][i] * v[i] * j.rx[i];
                dt -= e.rx[k][i] * (sum_rx * j.rx[i] + v[i] * rxx[i]);
            }
            dt + v[k] * dx[k] + (e.value[0] + e.value[1]) * j.rx[k]
        }))
    }
}

/// Derivative of the characteristic `b` along the evolutionary field with
/// characteristic `a`: `Σ_j ∂η_b/∂r^j η_a^j + ∂η_b/∂r^j_x D_x η_a^j`.
fn along(a: &EtaJet, b: &EtaJet, j: &JetPoint, rxx: &[f64; 3]) -> [f64; 3] {
    let dxa = a.total_x(j, rxx);
    [0, 1, 2].map(|k| (0..3).map(|i| b.r[k][i] * a.value[i] + b.rx[k][i] * dxa[i]).sum())
}

/// Characteristic of `[Q₁, Q₂]` at a jet, as `pr Q₁(η₂) − pr Q₂(η₁)`.
pub fn commutator(c1: &GenSymCharacteristic, c2: &GenSymCharacteristic, j: &JetPoint) -> Result<[f64; 3], VerifyError> {
    let rxx = need_rxx(j)?;
    let (e1, e2) = (c1.eta(j), c2.eta(j));
    let a = along(&e1, &e2, j, &rxx);
    let b = along(&e2, &e1, j, &rxx);
    Ok([0, 1, 2].map(|k| a[k] - b[k]))
}

/// Uniform random second-order jet with `r, r_x, r_xx ∈ [−1, 1]³`,
/// `t ∈ [0.5, 2]` and `x ∈ [−1, 1]`.
pub fn random_jet(rng: &mut impl Rng) -> JetPoint {
    let mut v3 = || [0; 3].map(|_| rng.gen_range(-1.0..1.0));
    let (r, rx, rxx) = (v3(), v3(), v3());
    let t = rng.gen_range(0.5..2.0);
    let x = rng.gen_range(-1.0..1.0);
    JetPoint::on_shell(t, x, RiemannState::from_array(r), rx, Some(rxx))
}

/// One row of the commutator table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableEntry {
    pub name: String,
    /// Largest scaled mismatch over the sampled jets.
    pub error: f64,
}

fn phi_samples() -> Vec<(&'static str, RiemannPhi)> {
    vec![
        ("quad", TelegraphFn::single(Mode::Quad).to_riemann_form()),
        ("exp", TelegraphFn::single(Mode::exp(0.7, crate::telegraph::Branch::Plus)).to_riemann_form()),
        ("damped", TelegraphFn::single(Mode::damped(0.3, crate::telegraph::Branch::Minus, 0.4).expect("k in range")).to_riemann_form()),
    ]
}

fn omega_samples() -> Vec<(&'static str, BiPoly)> {
    vec![
        ("w0^2", BiPoly::monomial(1.0, 2, 0)),
        ("w0*w1^2", BiPoly::monomial(1.0, 1, 2)),
        ("1+w1^3", BiPoly::constant(1.0).add(&BiPoly::monomial(1.0, 0, 3))),
    ]
}

/// Every pair of the commutator table: `(name, Q₁, Q₂, expected)`.
pub fn table_cases() -> Vec<(String, GenSymCharacteristic, GenSymCharacteristic, GenSymCharacteristic)> {
    use GenSymCharacteristic as C;
    let named = [("D", C::dilation()), ("G1", C::g1()), ("G2", C::g2())];
    let mut out = vec![];
    for (n, phi) in phi_samples() {
        let p = C::p(phi.clone());
        out.push((format!("[D,P({n})]"), C::dilation(), p.clone(), p.clone()));
        out.push((format!("[G1,P({n})]"), C::g1(), p.clone(), C::p(phi.d1().scaled(-1.0))));
        out.push((format!("[G2,P({n})]"), C::g2(), p.clone(), C::p(phi.d1().plus(&phi.d2().scaled(-1.0)))));
        for (m, other) in phi_samples() {
            out.push((format!("[P({n}),P({m})]"), p.clone(), C::p(other), C::default()));
        }
    }
    for (n, om) in omega_samples() {
        let w = C::w(om.clone());
        let e = om.euler1();
        out.push((format!("[D,W({n})]"), C::dilation(), w.clone(), C::w(e.clone())));
        out.push((format!("[G1,W({n})]"), C::g1(), w.clone(), C::w(e.clone())));
        out.push((format!("[G2,W({n})]"), C::g2(), w.clone(), C::w(e.scale(-2.0))));
        for (pn, phi) in phi_samples() {
            out.push((format!("[P({pn}),W({n})]"), C::p(phi), w.clone(), C::default()));
        }
        for (m, o2) in omega_samples() {
            let a = om.d0().mul(&o2.euler1().sub(&o2));
            let b = o2.d0().mul(&om.euler1().sub(&om));
            out.push((format!("[W({n}),W({m})]"), w.clone(), C::w(o2), C::w(a.sub(&b))));
        }
    }
    for (a, qa) in &named {
        for (b, qb) in &named {
            out.push((format!("[{a},{b}]"), qa.clone(), qb.clone(), C::default()));
        }
    }
    out
}

/// Largest mismatch `|[Q₁,Q₂] − expected| / (1 + |expected|)` of each table
/// entry over `jets`.
pub fn check_table(jets: &[JetPoint]) -> Result<Vec<TableEntry>, VerifyError> {
    table_cases()
        .into_iter()
        .map(|(name, a, b, want)| {
            let mut error = 0.0f64;
            for j in jets {
                let got = commutator(&a, &b, j)?;
                let exp = want.eta(j).value;
                for k in 0..3 {
                    error = error.max((got[k] - exp[k]).abs() / (1.0 + exp[k].abs()));
                }
            }
            Ok(TableEntry { name, error })
        })
        .collect()
}

/// The five characteristics used for determining-equation sweeps.
pub fn standard_characteristics() -> Vec<(String, GenSymCharacteristic)> {
    use GenSymCharacteristic as C;
    let phi = TelegraphFn::single(Mode::exp(0.7, crate::telegraph::Branch::Plus)).to_riemann_form();
    vec![
        ("D".into(), C::dilation()),
        ("G1".into(), C::g1()),
        ("G2".into(), C::g2()),
        ("P(exp)".into(), C::p(phi)),
        ("W(w0*w1^2+w1)".into(), C::w(BiPoly::monomial(1.0, 1, 2).add(&BiPoly::w1()))),
    ]
}
