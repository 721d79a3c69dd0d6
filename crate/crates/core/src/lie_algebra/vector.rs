//! Elements of the symmetry algebra and their Lie bracket.

use super::poly::{fmt_q, q, QPoly, Q};
use super::LieError;
use num::traits::{One, Signed, Zero};
use std::fmt;

/// Index of a finite basis element in `(D, G, Pt, Px, Pv)` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    D = 0,
    G = 1,
    Pt = 2,
    Px = 3,
    Pv = 4,
}

impl Basis {
    pub const ALL: [Basis; 5] = [Basis::D, Basis::G, Basis::Pt, Basis::Px, Basis::Pv];

    pub fn name(self) -> &'static str {
        match self {
            Basis::D => "D",
            Basis::G => "G",
            Basis::Pt => "Pt",
            Basis::Px => "Px",
            Basis::Pv => "Pv",
        }
    }
}

/// Nonzero brackets of basis elements: `[Pt, D] = Pt`, `[Px, D] = Px`,
/// `[Pt, G] = Px`, plus antisymmetry.
pub fn basis_bracket(i: Basis, j: Basis) -> Option<(Basis, i64)> {
    use Basis::*;
    match (i, j) {
        (Pt, D) => Some((Pt, 1)),
        (D, Pt) => Some((Pt, -1)),
        (Px, D) => Some((Px, 1)),
        (D, Px) => Some((Px, -1)),
        (Pt, G) => Some((Px, 1)),
        (G, Pt) => Some((Px, -1)),
        _ => None,
    }
}

/// `a_D D + a_G G + a_Pt Pt + a_Px Px + a_Pv Pv + W(Ω)`, where the vector
/// fields are `D = t∂t + x∂x`, `G = t∂x + ∂u`, `Pt = ∂t`, `Px = ∂x`,
/// `Pv = ∂v` and `W(Ω) = Ω(w)∂w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GVector {
    pub fin: [Q; 5],
    pub omega: QPoly,
}

impl GVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: Basis) -> Self {
        let mut v = Self::zero();
        v.fin[b as usize] = Q::one();
        v
    }

    pub fn w(omega: QPoly) -> Self {
        Self { fin: Default::default(), omega }
    }

    pub fn new(fin: [Q; 5], omega: QPoly) -> Self {
        Self { fin, omega }
    }

    pub fn from_ints(fin: [i64; 5], omega: &[i64]) -> Self {
        Self { fin: fin.map(q), omega: QPoly::from_ints(omega) }
    }

    pub fn coeff(&self, b: Basis) -> &Q {
        &self.fin[b as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.fin.iter().all(|c| c.is_zero()) && self.omega.is_zero()
    }

    pub fn finite_part(&self) -> GVector {
        Self { fin: self.fin.clone(), omega: QPoly::zero() }
    }

    pub fn add(&self, o: &GVector) -> GVector {
        let mut fin = self.fin.clone();
        for (a, b) in fin.iter_mut().zip(&o.fin) {
            *a += b;
        }
        GVector { fin, omega: self.omega.add(&o.omega) }
    }

    pub fn sub(&self, o: &GVector) -> GVector {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> GVector {
        GVector { fin: self.fin.clone().map(|a| a * c), omega: self.omega.scale(c) }
    }

    /// Coordinates in `(D, G, Pt, Px, Pv, 1, w, …, w^deg)`.
    pub fn coords(&self, deg: usize) -> Vec<Q> {
        let mut v: Vec<Q> = self.fin.to_vec();
        v.extend((0..=deg).map(|k| self.omega.coeff(k)));
        v
    }

    pub fn from_coords(c: &[Q]) -> GVector {
        let fin = [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone()];
        GVector { fin, omega: QPoly::new(c[5..].to_vec()) }
    }

    pub fn omega_degree(&self) -> usize {
        self.omega.degree().unwrap_or(0)
    }

    /// Parses expressions such as `D+3Pt+2Px`, `-1/2*G + W(w^2 - 1)`.
    pub fn parse(s: &str) -> Result<GVector, LieError> {
        super::parse::parse_vector(s)
    }
}

/// Lie bracket on `g`.
pub fn commutator(x: &GVector, y: &GVector) -> GVector {
    let mut out = GVector::zero();
    for i in Basis::ALL {
        let xi = x.coeff(i);
        if xi.is_zero() {
            continue;
        }
        for j in Basis::ALL {
            let yj = y.coeff(j);
            if yj.is_zero() {
                continue;
            }
            if let Some((k, s)) = basis_bracket(i, j) {
                out.fin[k as usize] += xi * yj * q(s);
            }
        }
    }
    out.omega = x.omega.mul(&y.omega.deriv()).sub(&y.omega.mul(&x.omega.deriv()));
    out
}

impl fmt::Display for GVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = vec![];
        for b in Basis::ALL {
            let c = self.coeff(b);
            if c.is_zero() {
                continue;
            }
            let a = c.abs();
            let s = if a.is_one() { b.name().to_string() } else { format!("{}{}", fmt_q(&a), b.name()) };
            parts.push((c.is_negative(), s));
        }
        if !self.omega.is_zero() {
            parts.push((false, format!("W({})", self.omega)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (k, (neg, s)) in parts.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{s}")?,
                (0, false) => write!(f, "{s}")?,
                (_, true) => write!(f, " - {s}")?,
                (_, false) => write!(f, " + {s}")?,
            }
        }
        Ok(())
    }
}
