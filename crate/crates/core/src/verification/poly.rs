//! Real polynomials in two variables `(ω⁰, ω¹)`, used for the free
//! functions `Ω` of generalized symmetries and conserved currents.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `c · (ω⁰)^p0 (ω¹)^p1`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub c: f64,
    #[serde(default)]
    pub p0: u32,
    #[serde(default)]
    pub p1: u32,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Monomial>", into = "Vec<Monomial>")]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), f64>,
}

impl From<Vec<Monomial>> for BiPoly {
    fn from(v: Vec<Monomial>) -> Self {
        let mut p = BiPoly::zero();
        for m in v {
            p.add_term(m.c, m.p0, m.p1);
        }
        p
    }
}

impl From<BiPoly> for Vec<Monomial> {
    fn from(p: BiPoly) -> Self {
        p.terms.into_iter().map(|((p0, p1), c)| Monomial { c, p0, p1 }).collect()
    }
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: f64, p0: u32, p1: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(c, p0, p1);
        p
    }

    /// `ω⁰`
    pub fn w0() -> Self {
        Self::monomial(1.0, 1, 0)
    }

    /// `ω¹`
    pub fn w1() -> Self {
        Self::monomial(1.0, 0, 1)
    }

    fn add_term(&mut self, c: f64, p0: u32, p1: u32) {
        let e = self.terms.entry((p0, p1)).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&(p0, p1));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Depends on `ω⁰` only.
    pub fn is_univariate(&self) -> bool {
        self.terms.keys().all(|&(_, p1)| p1 == 0)
    }

    pub fn eval(&self, w0: f64, w1: f64) -> f64 {
        self.terms.iter().map(|(&(p0, p1), c)| c * w0.powi(p0 as i32) * w1.powi(p1 as i32)).sum()
    }

    pub fn d0(&self) -> Self {
        let mut p = Self::zero();
        for (&(p0, p1), &c) in &self.terms {
            if p0 > 0 {
                p.add_term(c * p0 as f64, p0 - 1, p1);
            }
        }
        p
    }

    pub fn d1(&self) -> Self {
        let mut p = Self::zero();
        for (&(p0, p1), &c) in &self.terms {
            if p1 > 0 {
                p.add_term(c * p1 as f64, p0, p1 - 1);
            }
        }
        p
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (&(p0, p1), &c) in &o.terms {
            p.add_term(c, p0, p1);
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut p = Self::zero();
        for (&(p0, p1), &c) in &self.terms {
            p.add_term(s * c, p0, p1);
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (&(a0, a1), &c) in &self.terms {
            for (&(b0, b1), &d) in &o.terms {
                p.add_term(c * d, a0 + b0, a1 + b1);
            }
        }
        p
    }

    /// `ω¹ ∂Ω/∂ω¹`
    pub fn euler1(&self) -> Self {
        Self::w1().mul(&self.d1())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_and_products() {
        let p = BiPoly::w0().mul(&BiPoly::w1()).add(&BiPoly::monomial(2.0, 0, 3));
        assert_eq!(p.eval(2.0, 3.0), 6.0 + 54.0);
        assert_eq!(p.d1().eval(2.0, 3.0), 2.0 + 54.0);
        assert_eq!(p.d0(), BiPoly::w1());
        assert_eq!(p.euler1(), BiPoly::w0().mul(&BiPoly::w1()).add(&BiPoly::monomial(6.0, 0, 3)));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn json_form() {
        let p: BiPoly = serde_json::from_str(r#"[{"c": 1.5, "p0": 1}, {"c": -1, "p1": 2}]"#).unwrap();
        assert_eq!(p.eval(2.0, 3.0), 3.0 - 9.0);
        let back: BiPoly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
