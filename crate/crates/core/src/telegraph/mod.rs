//! Closed-form solutions of the telegraph equation `Φ_vv + Φ_v = Φ_uu`.
//!
//! A [`TelegraphFn`] is a finite superposition of catalog modes, each with
//! exact partials through order two. The same catalog, pulled back to
//! Riemann invariants by `u = r1 + r2`, `v = r1 - r2`, parameterizes
//! solutions of `2Φ_12 = Φ_1 - Φ_2` ([`RiemannPhi`]); swapping the arguments
//! gives solutions of the adjoint equation `2Ψ_12 = Ψ_2 - Ψ_1`.

mod handles;

pub use handles::{HandleError, MonotoneFn, SmoothFn, ThetaFn};

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Tolerance on the dispersion relations of exponential and damped modes.
pub const DISPERSION_TOL: f64 = 1e-14;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum TelegraphError {
    /// `(λ, μ)` does not satisfy `μ² + μ = λ²`.
    #[error("exponential mode violates mu^2 + mu = lambda^2: lambda={lambda}, mu={mu}")]
    ExpDispersion { lambda: f64, mu: f64 },
    /// `(k, μ)` does not satisfy `μ² + μ + k² = 0`.
    #[error("damped mode violates mu^2 + mu + k^2 = 0: k={k}, mu={mu}")]
    DampedDispersion { k: f64, mu: f64 },
    /// Damped modes need `0 <= k <= 1/2` for a real decay rate.
    #[error("damped mode wavenumber must lie in [0, 1/2], got {0}")]
    WavenumberRange(f64),
    /// Exponential mode given neither a branch nor an explicit `mu`.
    #[error("exponential mode needs either `branch` or `mu`")]
    MissingBranch,
    #[error("non-finite coefficient {0}")]
    NonFinite(f64),
}

/// Root branch of a quadratic dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `μ` solving `μ² + μ = λ²` on the chosen branch.
pub fn dispersion_mu(lambda: f64, branch: Branch) -> f64 {
    0.5 * (-1.0 + branch.sign() * (1.0 + 4.0 * lambda * lambda).sqrt())
}

/// `μ` solving `μ² + μ + k² = 0` on the chosen branch, for `k <= 1/2`.
pub fn damped_mu(k: f64, branch: Branch) -> Result<f64, TelegraphError> {
    if !(0.0..=0.5).contains(&k) {
        return Err(TelegraphError::WavenumberRange(k));
    }
    Ok(0.5 * (-1.0 + branch.sign() * (1.0 - 4.0 * k * k).max(0.0).sqrt()))
}

/// One catalog mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// `Φ = 1`
    Const,
    /// `Φ = u`
    LinU,
    /// `Φ = e^{-v}`
    ExpV,
    /// `Φ = u² + 2v`
    Quad,
    /// `Φ = e^{λu + μv}` with `μ² + μ = λ²`
    Exp { lambda: f64, mu: f64 },
    /// `Φ = e^{μv} cos(ku + φ₀)` with `μ² + μ + k² = 0`
    Damped { k: f64, mu: f64, phase: f64 },
}

impl Mode {
    pub fn exp(lambda: f64, branch: Branch) -> Self {
        Mode::Exp { lambda, mu: dispersion_mu(lambda, branch) }
    }

    pub fn exp_checked(lambda: f64, mu: f64) -> Result<Self, TelegraphError> {
        if (mu * mu + mu - lambda * lambda).abs() > DISPERSION_TOL * (1.0 + lambda * lambda) {
            return Err(TelegraphError::ExpDispersion { lambda, mu });
        }
        Ok(Mode::Exp { lambda, mu })
    }

    pub fn damped(k: f64, branch: Branch, phase: f64) -> Result<Self, TelegraphError> {
        Ok(Mode::Damped { k, mu: damped_mu(k, branch)?, phase })
    }

    pub fn damped_checked(k: f64, mu: f64, phase: f64) -> Result<Self, TelegraphError> {
        if !(0.0..=0.5).contains(&k) {
            return Err(TelegraphError::WavenumberRange(k));
        }
        if (mu * mu + mu + k * k).abs() > DISPERSION_TOL {
            return Err(TelegraphError::DampedDispersion { k, mu });
        }
        Ok(Mode::Damped { k, mu, phase })
    }

    fn partials(&self, u: f64, v: f64) -> Partials {
        match *self {
            Mode::Const => Partials { f: 1.0, ..Partials::ZERO },
            Mode::LinU => Partials { f: u, fu: 1.0, ..Partials::ZERO },
            Mode::ExpV => {
                let e = (-v).exp();
                Partials { f: e, fv: -e, fvv: e, ..Partials::ZERO }
            }
            Mode::Quad => Partials { f: u * u + 2.0 * v, fu: 2.0 * u, fv: 2.0, fuu: 2.0, ..Partials::ZERO },
            Mode::Exp { lambda, mu } => {
                let e = (lambda * u + mu * v).exp();
                Partials { f: e, fu: lambda * e, fv: mu * e, fuu: lambda * lambda * e, fuv: lambda * mu * e, fvv: mu * mu * e }
            }
            Mode::Damped { k, mu, phase } => {
                let e = (mu * v).exp();
                let (s, c) = (k * u + phase).sin_cos();
                Partials { f: e * c, fu: -k * e * s, fv: mu * e * c, fuu: -k * k * e * c, fuv: -k * mu * e * s, fvv: mu * mu * e * c }
            }
        }
    }

    fn du(&self) -> Vec<Term> {
        match *self {
            Mode::Const | Mode::ExpV => vec![],
            Mode::LinU => vec![Term::new(1.0, Mode::Const)],
            Mode::Quad => vec![Term::new(2.0, Mode::LinU)],
            Mode::Exp { lambda, .. } => vec![Term::new(lambda, *self)],
            Mode::Damped { k, mu, phase } => vec![Term::new(k, Mode::Damped { k, mu, phase: phase + FRAC_PI_2 })],
        }
    }

    fn dv(&self) -> Vec<Term> {
        match *self {
            Mode::Const | Mode::LinU => vec![],
            Mode::ExpV => vec![Term::new(-1.0, Mode::ExpV)],
            Mode::Quad => vec![Term::new(2.0, Mode::Const)],
            Mode::Exp { mu, .. } | Mode::Damped { mu, .. } => vec![Term::new(mu, *self)],
        }
    }
}

/// Value and partials `(Φ, Φ_u, Φ_v, Φ_uu, Φ_uv, Φ_vv)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Partials {
    pub f: f64,
    pub fu: f64,
    pub fv: f64,
    pub fuu: f64,
    pub fuv: f64,
    pub fvv: f64,
}

impl Partials {
    pub const ZERO: Partials = Partials { f: 0.0, fu: 0.0, fv: 0.0, fuu: 0.0, fuv: 0.0, fvv: 0.0 };

    fn add_scaled(&mut self, c: f64, o: &Partials) {
        self.f += c * o.f;
        self.fu += c * o.fu;
        self.fv += c * o.fv;
        self.fuu += c * o.fuu;
        self.fuv += c * o.fuv;
        self.fvv += c * o.fvv;
    }

    /// `Φ_vv + Φ_v - Φ_uu`
    pub fn telegraph_residual(&self) -> f64 {
        self.fvv + self.fv - self.fuu
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub mode: Mode,
}

impl Term {
    pub fn new(coef: f64, mode: Mode) -> Self {
        Self { coef, mode }
    }
}

/// Finite superposition of catalog modes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<TermSpec>", into = "Vec<TermSpec>")]
pub struct TelegraphFn {
    terms: Vec<Term>,
}

impl TelegraphFn {
    pub fn zero() -> Self {
        Self { terms: vec![] }
    }

    pub fn single(mode: Mode) -> Self {
        Self { terms: vec![Term::new(1.0, mode)] }
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        Self { terms: terms.into_iter().filter(|t| t.coef != 0.0).collect() }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term::new(c * t.coef, t.mode)).collect())
    }

    pub fn plus(&self, other: &TelegraphFn) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::from_terms(terms)
    }

    pub fn eval(&self, u: f64, v: f64) -> Partials {
        let mut p = Partials::ZERO;
        for t in &self.terms {
            p.add_scaled(t.coef, &t.mode.partials(u, v));
        }
        p
    }

    /// `∂Φ/∂u` as another catalog function.
    pub fn du(&self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|t| t.mode.du().into_iter().map(move |d| Term::new(t.coef * d.coef, d.mode))).collect())
    }

    /// `∂Φ/∂v` as another catalog function.
    pub fn dv(&self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|t| t.mode.dv().into_iter().map(move |d| Term::new(t.coef * d.coef, d.mode))).collect())
    }

    pub fn telegraph_residual(&self, u: f64, v: f64) -> f64 {
        self.eval(u, v).telegraph_residual()
    }

    /// Residual of the Klein–Gordon form: `p = e^{v/2} Φ` satisfies
    /// `p_uu - p_vv + p/4 = 0`.
    pub fn klein_gordon_residual(&self, u: f64, v: f64) -> f64 {
        let d = self.eval(u, v);
        let e = (0.5 * v).exp();
        let p = e * d.f;
        let puu = e * d.fuu;
        let pvv = e * (d.fvv + d.fv + 0.25 * d.f);
        puu - pvv + 0.25 * p
    }

    pub fn to_riemann_form(&self) -> RiemannPhi {
        RiemannPhi { base: self.clone(), adjoint: false }
    }

    pub fn adjoint_form(&self) -> RiemannPhi {
        RiemannPhi { base: self.clone(), adjoint: true }
    }
}

/// Value and partials of a function of `(r1, r2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RiemannPartials {
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub f11: f64,
    pub f12: f64,
    pub f22: f64,
}

/// Telegraph function pulled back to Riemann invariants.
///
/// With `adjoint == false` this is `Φ̂(r1, r2) = Φ(r1 + r2, r1 - r2)`,
/// solving `2Φ̂_12 = Φ̂_1 - Φ̂_2`. With `adjoint == true` it is
/// `Ψ̂(r1, r2) = Φ̂(r2, r1)`, solving `2Ψ̂_12 = Ψ̂_2 - Ψ̂_1`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RiemannPhi {
    pub base: TelegraphFn,
    #[serde(default)]
    pub adjoint: bool,
}

impl RiemannPhi {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero()
    }

    pub fn eval(&self, r1: f64, r2: f64) -> RiemannPartials {
        let (a, b) = if self.adjoint { (r2, r1) } else { (r1, r2) };
        let p = self.base.eval(a + b, a - b);
        let q = RiemannPartials {
            f: p.f,
            f1: p.fu + p.fv,
            f2: p.fu - p.fv,
            f11: p.fuu + 2.0 * p.fuv + p.fvv,
            f12: p.fuu - p.fvv,
            f22: p.fuu - 2.0 * p.fuv + p.fvv,
        };
        if self.adjoint {
            RiemannPartials { f: q.f, f1: q.f2, f2: q.f1, f11: q.f22, f12: q.f12, f22: q.f11 }
        } else {
            q
        }
    }

    /// Residual of the governing equation: `2f_12 - f_1 + f_2`, or
    /// `2f_12 - f_2 + f_1` for the adjoint form.
    pub fn residual(&self, r1: f64, r2: f64) -> f64 {
        let p = self.eval(r1, r2);
        if self.adjoint {
            2.0 * p.f12 - p.f2 + p.f1
        } else {
            2.0 * p.f12 - p.f1 + p.f2
        }
    }

    /// Derivative with respect to `r1`, again in the same family.
    pub fn d1(&self) -> Self {
        let (du, dv) = (self.base.du(), self.base.dv());
        let base = if self.adjoint { du.plus(&dv.scaled(-1.0)) } else { du.plus(&dv) };
        Self { base, adjoint: self.adjoint }
    }

    /// Derivative with respect to `r2`, again in the same family.
    pub fn d2(&self) -> Self {
        let (du, dv) = (self.base.du(), self.base.dv());
        let base = if self.adjoint { du.plus(&dv) } else { du.plus(&dv.scaled(-1.0)) };
        Self { base, adjoint: self.adjoint }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { base: self.base.scaled(c), adjoint: self.adjoint }
    }

    /// Sum of two evaluators of the same kind.
    pub fn plus(&self, other: &RiemannPhi) -> Self {
        assert_eq!(self.adjoint, other.adjoint, "cannot add direct and adjoint forms");
        Self { base: self.base.plus(&other.base), adjoint: self.adjoint }
    }
}

/// Serialized form of one term: `{"mode": "exp", "lambda": 1.4, "branch": "+", "coef": 2}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermSpec {
    #[serde(default = "one")]
    pub coef: f64,
    #[serde(flatten)]
    pub mode: ModeSpec,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ModeSpec {
    Const,
    LinU,
    ExpV,
    Quad,
    Exp {
        lambda: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        branch: Option<Branch>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<f64>,
    },
    Damped {
        k: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        branch: Option<Branch>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<f64>,
        #[serde(default)]
        phase: f64,
    },
}

impl TryFrom<TermSpec> for Term {
    type Error = TelegraphError;

    fn try_from(s: TermSpec) -> Result<Self, Self::Error> {
        if !s.coef.is_finite() {
            return Err(TelegraphError::NonFinite(s.coef));
        }
        let mode = match s.mode {
            ModeSpec::Const => Mode::Const,
            ModeSpec::LinU => Mode::LinU,
            ModeSpec::ExpV => Mode::ExpV,
            ModeSpec::Quad => Mode::Quad,
            ModeSpec::Exp { lambda, mu: Some(mu), .. } => Mode::exp_checked(lambda, mu)?,
            ModeSpec::Exp { lambda, branch: Some(b), mu: None } => Mode::exp(lambda, b),
            ModeSpec::Exp { .. } => return Err(TelegraphError::MissingBranch),
            ModeSpec::Damped { k, mu: Some(mu), phase, .. } => Mode::damped_checked(k, mu, phase)?,
            ModeSpec::Damped { k, branch, mu: None, phase } => Mode::damped(k, branch.unwrap_or(Branch::Plus), phase)?,
        };
        Ok(Term::new(s.coef, mode))
    }
}

impl From<Term> for TermSpec {
    fn from(t: Term) -> Self {
        let mode = match t.mode {
            Mode::Const => ModeSpec::Const,
            Mode::LinU => ModeSpec::LinU,
            Mode::ExpV => ModeSpec::ExpV,
            Mode::Quad => ModeSpec::Quad,
            Mode::Exp { lambda, mu } => ModeSpec::Exp { lambda, branch: None, mu: Some(mu) },
            Mode::Damped { k, mu, phase } => ModeSpec::Damped { k, branch: None, mu: Some(mu), phase },
        };
        TermSpec { coef: t.coef, mode }
    }
}

impl TryFrom<Vec<TermSpec>> for TelegraphFn {
    type Error = TelegraphError;

    fn try_from(v: Vec<TermSpec>) -> Result<Self, Self::Error> {
        Ok(Self::from_terms(v.into_iter().map(Term::try_from).collect::<Result<_, _>>()?))
    }
}

impl From<TelegraphFn> for Vec<TermSpec> {
    fn from(f: TelegraphFn) -> Self {
        f.terms.into_iter().map(TermSpec::from).collect()
    }
}
