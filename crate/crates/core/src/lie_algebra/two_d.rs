//! Closure check for the optimal list of two-dimensional subalgebras.

use super::poly::{q, qr, QPoly, Q};
use super::subspace::Subspace;
use super::vector::{commutator, Basis, GVector};
use num::traits::{One, Zero};
use serde::Serialize;

#[derive(Debug, Clone, Default)]
struct P {
    a: Q,
    b: Q,
    c: Q,
    d: [Q; 6],
}

fn vec_of(terms: &[(Basis, Q)], omega: QPoly) -> GVector {
    let mut v = GVector::w(omega);
    for (b, c) in terms {
        v.fin[*b as usize] += c;
    }
    v
}

fn cst(c: &Q) -> QPoly {
    QPoly::constant(c.clone())
}

fn lin(c: &Q) -> QPoly {
    QPoly::monomial(c.clone(), 1)
}

/// The basis pair of family `id` (1-based) at parameters `p`.
fn family(id: usize, p: &P) -> (GVector, GVector) {
    use Basis::*;
    let one = Q::one();
    let d = &p.d;
    match id {
        1 => (vec_of(&[(D, one.clone()), (Pv, p.a.clone())], cst(&d[1])), vec_of(&[(G, one), (Pv, p.b.clone())], cst(&d[2]))),
        2 => (vec_of(&[(D, one.clone()), (Pv, p.a.clone())], cst(&d[5])), vec_of(&[(Pt, one)], QPoly::zero())),
        3 => (vec_of(&[(D, one.clone()), (Pv, p.a.clone())], lin(&one)), vec_of(&[(Pt, one.clone())], cst(&one))),
        4 => (vec_of(&[(D, one.clone()), (G, p.a.clone()), (Pv, p.b.clone())], cst(&d[5])), vec_of(&[(Px, one)], QPoly::zero())),
        5 => (vec_of(&[(D, one.clone()), (G, p.a.clone()), (Pv, p.b.clone())], lin(&one)), vec_of(&[(Px, one.clone())], cst(&one))),
        6 => (vec_of(&[(D, one.clone()), (G, p.a.clone())], cst(&d[1])), vec_of(&[(Pv, one)], cst(&d[2]))),
        7 => (
            vec_of(&[(G, one.clone()), (Pt, d[3].clone()), (Pv, p.a.clone())], cst(&d[1])),
            vec_of(&[(Px, one), (Pv, d[4].clone())], cst(&d[2])),
        ),
        8 => (vec_of(&[(G, one.clone()), (Pt, d[5].clone())], cst(&d[1])), vec_of(&[(Pv, one)], cst(&d[2]))),
        9 => (vec_of(&[(Pt, one.clone()), (Pv, d[3].clone())], cst(&d[1])), vec_of(&[(Px, one), (Pv, d[4].clone())], cst(&d[2]))),
        10 => (vec_of(&[(Pt, one.clone())], cst(&d[1])), vec_of(&[(Pv, one)], cst(&d[2]))),
        11 => (vec_of(&[(Px, one.clone())], cst(&d[1])), vec_of(&[(Pv, one)], cst(&d[2]))),
        12 => (vec_of(&[(D, one.clone()), (G, p.a.clone()), (Pv, p.b.clone())], lin(&p.c)), GVector::w(cst(&one))),
        13 => (vec_of(&[(G, one.clone()), (Pt, d[5].clone()), (Pv, p.b.clone())], lin(&p.c)), GVector::w(cst(&one))),
        14 => (vec_of(&[(Pt, one.clone()), (Pv, d[1].clone())], lin(&d[2])), GVector::w(cst(&one))),
        15 => (vec_of(&[(Px, one.clone()), (Pv, d[1].clone())], lin(&d[2])), GVector::w(cst(&one))),
        16 => (vec_of(&[(Pv, one.clone())], lin(&p.c)), GVector::w(cst(&one))),
        17 => (GVector::w(lin(&one)), GVector::w(cst(&one))),
        _ => unreachable!("family ids run from 1 to 17"),
    }
}

pub const FAMILY_COUNT: usize = 17;

/// Which parameters each family uses: (a, b, c, indices of δ's).
fn uses(id: usize) -> (bool, bool, bool, &'static [usize]) {
    match id {
        1 => (true, true, false, &[1, 2]),
        2 => (true, false, false, &[5]),
        3 => (true, false, false, &[]),
        4 => (true, true, false, &[5]),
        5 => (true, true, false, &[]),
        6 => (true, false, false, &[1, 2]),
        7 => (true, false, false, &[1, 2, 3, 4]),
        8 => (false, false, false, &[1, 2, 5]),
        9 => (false, false, false, &[1, 2, 3, 4]),
        10 | 11 => (false, false, false, &[1, 2]),
        12 => (true, true, true, &[]),
        13 => (false, true, true, &[5]),
        14 | 15 => (false, false, false, &[1, 2]),
        16 => (false, false, true, &[]),
        17 => (false, false, false, &[]),
        _ => unreachable!(),
    }
}

fn samples(id: usize) -> Vec<P> {
    let reals = [q(0), q(1), qr(-3, 2)];
    let deltas = [q(0), q(1)];
    let (ua, ub, uc, ds) = uses(id);
    let pick = |used: bool| if used { reals.to_vec() } else { vec![Q::zero()] };
    let mut out = vec![];
    for a in pick(ua) {
        for b in pick(ub) {
            for c in pick(uc) {
                for mask in 0..(1usize << ds.len()) {
                    let mut p = P { a: a.clone(), b: b.clone(), c: c.clone(), ..Default::default() };
                    for (k, &di) in ds.iter().enumerate() {
                        p.d[di] = deltas[(mask >> k) & 1].clone();
                    }
                    // Gauge of the seventh family: a = 0 if δ₄ ≠ 0, and δ₁ = 0 if δ₂ ≠ 0.
                    if id == 7 && ((!p.d[4].is_zero() && !p.a.is_zero()) || (!p.d[2].is_zero() && !p.d[1].is_zero())) {
                        continue;
                    }
                    out.push(p);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyCheck {
    pub id: usize,
    pub samples: usize,
    pub closed: bool,
    /// `Q₁`, `Q₂` and `[Q₁, Q₂]` at the last sample.
    pub example: [String; 3],
}

/// Verifies `[Q₁, Q₂] ∈ ⟨Q₁, Q₂⟩` with `Q₁, Q₂` independent for every family
/// over a grid of sampled parameter values.
pub fn verify_2d_list() -> Vec<FamilyCheck> {
    (1..=FAMILY_COUNT)
        .map(|id| {
            let ps = samples(id);
            let mut closed = true;
            for p in &ps {
                let (q1, q2) = family(id, p);
                let Ok(s) = Subspace::new(vec![q1.clone(), q2.clone()], false) else {
                    closed = false;
                    continue;
                };
                closed &= s.contains(&commutator(&q1, &q2));
            }
            let p = ps.last().expect("every family has samples");
            let (q1, q2) = family(id, p);
            let br = commutator(&q1, &q2);
            FamilyCheck { id, samples: ps.len(), closed, example: [q1.to_string(), q2.to_string(), br.to_string()] }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family_with_a(id: usize, a: i64) -> (GVector, GVector) {
        family(id, &P { a: q(a), ..Default::default() })
    }

    #[test]
    fn all_families_closed() {
        let r = verify_2d_list();
        assert_eq!(r.len(), 17);
        for f in &r {
            assert!(f.closed, "family {}", f.id);
        }
    }

    #[test]
    fn third_family_bracket_sign() {
        let (q1, q2) = family_with_a(3, 1);
        assert_eq!(commutator(&q1, &q2), q2.scale(&q(-1)));
    }

    #[test]
    fn simple_pairs() {
        let pt = GVector::basis(Basis::Pt);
        let px = GVector::basis(Basis::Px);
        assert!(commutator(&pt, &px).is_zero());
        let gpt = GVector::parse("G + Pt").unwrap();
        let s = Subspace::new(vec![gpt.clone(), px.clone()], false).unwrap();
        assert!(s.contains(&commutator(&gpt, &px)));
    }
}
