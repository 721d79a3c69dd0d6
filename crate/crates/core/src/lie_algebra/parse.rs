//! Text syntax for algebra elements: `D+3Pt+2Px`, `-1/2*G`, `W(w^2+1)`.

use super::poly::{QPoly, Q};
use super::vector::{Basis, GVector};
use super::LieError;
use num::traits::{One, Zero};
use num::BigInt;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { s: src.as_bytes(), pos: 0, src }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> LieError {
        LieError::Parse { input: self.src.to_string(), pos: self.pos, msg: msg.to_string() }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    /// Unsigned rational literal: `3`, `3/4`, `0.25`.
    fn number(&mut self) -> Result<Option<Q>, LieError> {
        self.skip_ws();
        let int = self.digits();
        if int.is_empty() {
            return Ok(None);
        }
        let mut val = Q::from_integer(int.parse::<BigInt>().map_err(|_| self.err("bad integer"))?);
        if self.pos < self.s.len() && self.s[self.pos] == b'.' {
            self.pos += 1;
            let frac = self.digits();
            if !frac.is_empty() {
                let num: BigInt = frac.parse().map_err(|_| self.err("bad decimal"))?;
                let den = num::pow(BigInt::from(10), frac.len());
                val += Q::new(num, den);
            }
        }
        if self.eat(b'/') {
            let d = self.digits();
            if d.is_empty() {
                return Err(self.err("expected denominator"));
            }
            let d: BigInt = d.parse().map_err(|_| self.err("bad denominator"))?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            val /= Q::from_integer(d);
        }
        Ok(Some(val))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn sign(c: &mut Cursor, first: bool) -> Result<Option<Q>, LieError> {
    if c.eat(b'+') {
        Ok(Some(Q::one()))
    } else if c.eat(b'-') {
        Ok(Some(-Q::one()))
    } else if first {
        Ok(Some(Q::one()))
    } else {
        Ok(None)
    }
}

fn parse_poly(c: &mut Cursor) -> Result<QPoly, LieError> {
    let mut p = QPoly::zero();
    let mut first = true;
    loop {
        if c.peek() == Some(b')') {
            if first {
                return Err(c.err("empty polynomial"));
            }
            return Ok(p);
        }
        let Some(sg) = sign(c, first)? else {
            return Err(c.err("expected '+' or '-'"));
        };
        first = false;
        let coef = c.number()?;
        let has_coef = coef.is_some();
        let coef = sg * coef.unwrap_or_else(Q::one);
        c.eat(b'*');
        let k = if c.eat(b'w') {
            if c.eat(b'^') {
                c.skip_ws();
                c.digits().parse::<usize>().map_err(|_| c.err("expected exponent"))?
            } else {
                1
            }
        } else if has_coef {
            0
        } else {
            return Err(c.err("expected coefficient or 'w'"));
        };
        p = p.add(&QPoly::monomial(coef, k));
    }
}

pub(crate) fn parse_vector(src: &str) -> Result<GVector, LieError> {
    let mut c = Cursor::new(src);
    let mut out = GVector::zero();
    let mut first = true;
    if c.at_end() {
        return Err(c.err("empty expression"));
    }
    while !c.at_end() {
        let Some(sg) = sign(&mut c, first)? else {
            return Err(c.err("expected '+' or '-'"));
        };
        first = false;
        let coef = sg * c.number()?.unwrap_or_else(Q::one);
        c.eat(b'*');
        // Longest names first so `Pt` is not read as `P`.
        let basis = [("Pt", Basis::Pt), ("Px", Basis::Px), ("Pv", Basis::Pv), ("D", Basis::D), ("G", Basis::G)];
        if let Some(&(_, b)) = basis.iter().find(|(name, _)| c.eat_word(name)) {
            out.fin[b as usize] += coef;
        } else if c.eat_word("W") {
            if !c.eat(b'(') {
                return Err(c.err("expected '(' after W"));
            }
            let p = parse_poly(&mut c)?;
            if !c.eat(b')') {
                return Err(c.err("expected ')'"));
            }
            out.omega = out.omega.add(&p.scale(&coef));
        } else {
            return Err(c.err("expected one of D, G, Pt, Px, Pv, W(...)"));
        }
    }
    Ok(out)
}
