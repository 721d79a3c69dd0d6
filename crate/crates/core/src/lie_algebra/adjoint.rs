//! Pushforwards by elementary symmetry transformations and the optimal list
//! of one-dimensional subalgebras.

use super::poly::{fmt_q, QPoly, Q};
use super::vector::{Basis, GVector};
use super::LieError;
use num::traits::{One, Zero};
use serde::Serialize;
use std::fmt;

/// Reparametrization `w ↦ W(w)` used by [`GroupElement::WReparam`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WMap {
    /// `W(w) = αw + β`, with `α ≠ 0`.
    Affine { alpha: Q, beta: Q },
    /// The map `∫ s/Ω dw`, which sends `W(kΩ)` to `W(k·s)`.
    Normalize { source: QPoly, target: Q },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupElement {
    PtShift(Q),
    PxShift(Q),
    PvShift(Q),
    Dilation(Q),
    Galilean(Q),
    WReparam(WMap),
}

impl GroupElement {
    pub fn validate(&self) -> Result<(), LieError> {
        match self {
            GroupElement::Dilation(t1) if t1.is_zero() => Err(LieError::ZeroDilation),
            GroupElement::WReparam(WMap::Affine { alpha, .. }) if alpha.is_zero() => Err(LieError::InvalidReparam("α = 0".into())),
            GroupElement::WReparam(WMap::Normalize { source, target }) if source.is_zero() || target.is_zero() => {
                Err(LieError::InvalidReparam("degenerate normalization".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::PtShift(c) => write!(f, "Pt-shift({})", fmt_q(c)),
            GroupElement::PxShift(c) => write!(f, "Px-shift({})", fmt_q(c)),
            GroupElement::PvShift(c) => write!(f, "Pv-shift({})", fmt_q(c)),
            GroupElement::Dilation(c) => write!(f, "dilation({})", fmt_q(c)),
            GroupElement::Galilean(c) => write!(f, "galilean({})", fmt_q(c)),
            GroupElement::WReparam(WMap::Affine { alpha, beta }) => {
                write!(f, "W-reparam({}w + {})", fmt_q(alpha), fmt_q(beta))
            }
            GroupElement::WReparam(WMap::Normalize { source, target }) => {
                write!(f, "W-normalize({} -> {})", source, fmt_q(target))
            }
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Pushforward `g_* X`.
pub fn adjoint_push(g: &GroupElement, x: &GVector) -> Result<GVector, LieError> {
    g.validate()?;
    let mut y = x.clone();
    let c = |b: Basis| x.coeff(b).clone();
    match g {
        GroupElement::PtShift(t0) => {
            y.fin[Basis::Pt as usize] -= t0 * c(Basis::D);
            y.fin[Basis::Px as usize] -= t0 * c(Basis::G);
        }
        GroupElement::PxShift(x0) => {
            y.fin[Basis::Px as usize] -= x0 * c(Basis::D);
        }
        GroupElement::PvShift(_) => {}
        GroupElement::Dilation(t1) => {
            y.fin[Basis::Pt as usize] *= t1;
            y.fin[Basis::Px as usize] *= t1;
        }
        GroupElement::Galilean(u0) => {
            y.fin[Basis::Px as usize] += u0 * c(Basis::Pt);
        }
        GroupElement::WReparam(WMap::Affine { alpha, beta }) => {
            let inv = Q::one() / alpha;
            y.omega = x.omega.compose_affine(&inv, &(-beta * &inv)).scale(alpha);
        }
        GroupElement::WReparam(WMap::Normalize { source, target }) => {
            if !x.omega.is_zero() {
                let k = x
                    .omega
                    .ratio_to(source)
                    .ok_or_else(|| LieError::UnsupportedTransport { omega: x.omega.to_string(), map: g.to_string() })?;
                y.omega = QPoly::constant(k * target);
            }
        }
    }
    Ok(y)
}

/// Applies `witness` left to right.
pub fn replay(witness: &[GroupElement], x: &GVector) -> Result<GVector, LieError> {
    witness.iter().try_fold(x.clone(), |acc, g| adjoint_push(g, &acc))
}

/// Families of the optimal list of one-dimensional subalgebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family1D {
    /// `D + aG + bPv + W(δ₁)`
    Dilational,
    /// `G + δ₂Pt + bPv + W(δ₁)`
    Galilean,
    /// `Pt + δ₂Pv + W(δ₁)`
    TimeShift,
    /// `Px + δ₂Pv + W(δ₁)`
    SpaceShift,
    /// `Pv + W(δ₁)`
    VShift,
    /// `W(1)`
    WOnly,
}

impl Family1D {
    pub fn id(self) -> usize {
        self as usize + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical1D {
    pub family: Family1D,
    pub a: Q,
    pub b: Q,
    pub delta1: bool,
    pub delta2: bool,
}

impl Canonical1D {
    pub fn vector(&self) -> GVector {
        let d = |f: bool| if f { Q::one() } else { Q::zero() };
        let mut v = GVector::zero();
        let set = |v: &mut GVector, b: Basis, c: Q| v.fin[b as usize] = c;
        match self.family {
            Family1D::Dilational => {
                set(&mut v, Basis::D, Q::one());
                set(&mut v, Basis::G, self.a.clone());
                set(&mut v, Basis::Pv, self.b.clone());
            }
            Family1D::Galilean => {
                set(&mut v, Basis::G, Q::one());
                set(&mut v, Basis::Pt, d(self.delta2));
                set(&mut v, Basis::Pv, self.b.clone());
            }
            Family1D::TimeShift => {
                set(&mut v, Basis::Pt, Q::one());
                set(&mut v, Basis::Pv, d(self.delta2));
            }
            Family1D::SpaceShift => {
                set(&mut v, Basis::Px, Q::one());
                set(&mut v, Basis::Pv, d(self.delta2));
            }
            Family1D::VShift => set(&mut v, Basis::Pv, Q::one()),
            Family1D::WOnly => {}
        }
        v.omega = if self.family == Family1D::WOnly || self.delta1 { QPoly::constant(Q::one()) } else { QPoly::zero() };
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonicalization {
    pub canonical: Canonical1D,
    pub witness: Vec<GroupElement>,
    /// Replaying the witness on the input gives `scale · canonical.vector()`.
    pub scale: Q,
}

/// Maps `⟨X⟩` to its representative in the optimal list of one-dimensional
/// subalgebras, following the leading coefficient in the order
/// `D ≻ G ≻ Pt ≻ Px ≻ Pv ≻ W`.
pub fn canonicalize_1d(x: &GVector) -> Result<Canonicalization, LieError> {
    if x.is_zero() {
        return Err(LieError::ZeroVector);
    }
    let a: Vec<Q> = x.fin.to_vec();
    let has_w = !x.omega.is_zero();
    let mut witness = vec![];
    let nz = |c: &Q| !c.is_zero();
    let mut canon = Canonical1D { family: Family1D::WOnly, a: Q::zero(), b: Q::zero(), delta1: has_w, delta2: false };
    let scale: Q;
    if nz(&a[0]) {
        let t0 = &a[2] / &a[0];
        let x0 = (&a[3] - &a[1] * &t0) / &a[0];
        if nz(&t0) {
            witness.push(GroupElement::PtShift(t0));
        }
        if nz(&x0) {
            witness.push(GroupElement::PxShift(x0));
        }
        scale = a[0].clone();
        canon.family = Family1D::Dilational;
        canon.a = &a[1] / &scale;
        canon.b = &a[4] / &scale;
    } else if nz(&a[1]) {
        let t0 = &a[3] / &a[1];
        if nz(&t0) {
            witness.push(GroupElement::PtShift(t0));
        }
        if nz(&a[2]) {
            witness.push(GroupElement::Dilation(&a[1] / &a[2]));
            canon.delta2 = true;
        }
        scale = a[1].clone();
        canon.family = Family1D::Galilean;
        canon.b = &a[4] / &scale;
    } else if nz(&a[2]) {
        let u0 = -&a[3] / &a[2];
        if nz(&u0) {
            witness.push(GroupElement::Galilean(u0));
        }
        if nz(&a[4]) {
            witness.push(GroupElement::Dilation(&a[4] / &a[2]));
            canon.delta2 = true;
            scale = a[4].clone();
        } else {
            scale = a[2].clone();
        }
        canon.family = Family1D::TimeShift;
    } else if nz(&a[3]) {
        if nz(&a[4]) {
            witness.push(GroupElement::Dilation(&a[4] / &a[3]));
            canon.delta2 = true;
            scale = a[4].clone();
        } else {
            scale = a[3].clone();
        }
        canon.family = Family1D::SpaceShift;
    } else if nz(&a[4]) {
        scale = a[4].clone();
        canon.family = Family1D::VShift;
    } else {
        scale = Q::one();
        canon.family = Family1D::WOnly;
    }
    if has_w {
        witness.push(GroupElement::WReparam(WMap::Normalize { source: x.omega.clone(), target: scale.clone() }));
    }
    Ok(Canonicalization { canonical: canon, witness, scale })
}
