//! Random rational inputs for property checks.

use super::aut::{AutMatrix, AutParams};
use super::poly::{qr, QPoly, Q};
use super::vector::GVector;
use num::traits::Zero;
use rand::Rng;

/// `n/d` with `|n| ≤ 6`, `1 ≤ d ≤ 4`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    qr(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    loop {
        let c = rational(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random element with sparse finite part and omega of degree at most `max_deg`.
pub fn vector<R: Rng + ?Sized>(rng: &mut R, max_deg: usize) -> GVector {
    let mut fin: [Q; 5] = Default::default();
    for c in fin.iter_mut() {
        if rng.gen_bool(0.6) {
            *c = rational(rng);
        }
    }
    let omega = if rng.gen_bool(0.7) {
        let deg = rng.gen_range(0..=max_deg);
        QPoly::new((0..=deg).map(|_| rational(rng)).collect())
    } else {
        QPoly::zero()
    };
    GVector::new(fin, omega)
}

pub fn nonzero_vector<R: Rng + ?Sized>(rng: &mut R, max_deg: usize) -> GVector {
    loop {
        let v = vector(rng, max_deg);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn aut_matrix<R: Rng + ?Sized>(rng: &mut R) -> AutMatrix {
    let p = AutParams {
        b22: nonzero_rational(rng),
        b31: rational(rng),
        b33: nonzero_rational(rng),
        b41: rational(rng),
        b43: rational(rng),
        b51: rational(rng),
        b52: rational(rng),
        b55: nonzero_rational(rng),
    };
    AutMatrix::from_params(&p).expect("diagonal entries are nonzero")
}
