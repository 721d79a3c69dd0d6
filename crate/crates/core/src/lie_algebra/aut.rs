//! Automorphisms of the radical `⟨D, G, Pt, Px, Pv⟩` in matrix form.

use super::linalg::{rref, Mat};
use super::poly::Q;
use super::subspace::Subspace;
use super::vector::{commutator, Basis, GVector};
use super::LieError;
use num::traits::{One, Zero};

/// Free entries of an automorphism matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutParams {
    pub b22: Q,
    pub b31: Q,
    pub b33: Q,
    pub b41: Q,
    pub b43: Q,
    pub b51: Q,
    pub b52: Q,
    pub b55: Q,
}

/// 5×5 matrix acting on coordinates in `(D, G, Pt, Px, Pv)`; column `j` is
/// the image of the `j`-th basis element. The W part is left unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutMatrix {
    m: [[Q; 5]; 5],
}

impl AutMatrix {
    pub fn identity() -> Self {
        let one = Q::one;
        Self::from_params(&AutParams {
            b22: one(),
            b31: Q::zero(),
            b33: one(),
            b41: Q::zero(),
            b43: Q::zero(),
            b51: Q::zero(),
            b52: Q::zero(),
            b55: one(),
        })
        .expect("identity is valid")
    }

    pub fn from_params(p: &AutParams) -> Result<Self, LieError> {
        if (&p.b22 * &p.b33 * &p.b55).is_zero() {
            return Err(LieError::InvalidAutMatrix("b22·b33·b55 = 0".into()));
        }
        let z = Q::zero;
        let m = [
            [Q::one(), z(), z(), z(), z()],
            [z(), p.b22.clone(), z(), z(), z()],
            [p.b31.clone(), z(), p.b33.clone(), z(), z()],
            [p.b41.clone(), &p.b31 * &p.b22, p.b43.clone(), &p.b22 * &p.b33, z()],
            [p.b51.clone(), p.b52.clone(), z(), z(), p.b55.clone()],
        ];
        Ok(Self { m })
    }

    /// Accepts a matrix only if it has the parametric shape.
    pub fn from_matrix(m: [[Q; 5]; 5]) -> Result<Self, LieError> {
        let p = AutParams {
            b22: m[1][1].clone(),
            b31: m[2][0].clone(),
            b33: m[2][2].clone(),
            b41: m[3][0].clone(),
            b43: m[3][2].clone(),
            b51: m[4][0].clone(),
            b52: m[4][1].clone(),
            b55: m[4][4].clone(),
        };
        let candidate = Self::from_params(&p)?;
        if candidate.m != m {
            return Err(LieError::InvalidAutMatrix("entries outside the parametric shape".into()));
        }
        Ok(candidate)
    }

    pub fn params(&self) -> AutParams {
        let m = &self.m;
        AutParams {
            b22: m[1][1].clone(),
            b31: m[2][0].clone(),
            b33: m[2][2].clone(),
            b41: m[3][0].clone(),
            b43: m[3][2].clone(),
            b51: m[4][0].clone(),
            b52: m[4][1].clone(),
            b55: m[4][4].clone(),
        }
    }

    pub fn matrix(&self) -> &[[Q; 5]; 5] {
        &self.m
    }

    pub fn apply(&self, v: &GVector) -> GVector {
        let mut fin: [Q; 5] = Default::default();
        for (i, fi) in fin.iter_mut().enumerate() {
            *fi = (0..5).map(|j| &self.m[i][j] * &v.fin[j]).sum();
        }
        GVector::new(fin, v.omega.clone())
    }

    /// `self · other`, checked to stay in the parametric family.
    pub fn compose(&self, other: &AutMatrix) -> Result<AutMatrix, LieError> {
        let mut m: [[Q; 5]; 5] = Default::default();
        for i in 0..5 {
            for j in 0..5 {
                m[i][j] = (0..5).map(|k| &self.m[i][k] * &other.m[k][j]).sum();
            }
        }
        Self::from_matrix(m)
    }

    pub fn inverse(&self) -> Result<AutMatrix, LieError> {
        let mut aug: Mat = (0..5)
            .map(|i| {
                let mut row = self.m[i].to_vec();
                row.extend((0..5).map(|j| if i == j { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        rref(&mut aug);
        let mut m: [[Q; 5]; 5] = Default::default();
        for i in 0..5 {
            for j in 0..5 {
                m[i][j] = aug[i][5 + j].clone();
            }
        }
        Self::from_matrix(m)
    }

    /// `A[e_i, e_j] = [A e_i, A e_j]` for all basis pairs.
    pub fn preserves_brackets(&self) -> bool {
        Basis::ALL.iter().all(|&i| {
            Basis::ALL.iter().all(|&j| {
                let (ei, ej) = (GVector::basis(i), GVector::basis(j));
                self.apply(&commutator(&ei, &ej)) == commutator(&self.apply(&ei), &self.apply(&ej))
            })
        })
    }

    /// Image of every generator stays in `s`.
    pub fn preserves(&self, s: &Subspace) -> bool {
        s.gens().iter().all(|g| s.contains(&self.apply(g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::poly::{q, qr};
    use crate::lie_algebra::subspace::standard;

    fn sample() -> AutMatrix {
        AutMatrix::from_params(&AutParams {
            b22: q(2),
            b31: qr(1, 3),
            b33: q(-1),
            b41: q(5),
            b43: qr(-7, 2),
            b51: q(1),
            b52: q(4),
            b55: qr(3, 4),
        })
        .unwrap()
    }

    #[test]
    fn identity_and_sample_preserve_brackets() {
        assert!(AutMatrix::identity().preserves_brackets());
        assert!(sample().preserves_brackets());
    }

    #[test]
    fn group_closed() {
        let a = sample();
        let b = a.compose(&a).unwrap();
        assert!(b.preserves_brackets());
        let inv = a.inverse().unwrap();
        assert_eq!(a.compose(&inv).unwrap(), AutMatrix::identity());
    }

    #[test]
    fn zero_b22_rejected() {
        let mut p = sample().params();
        p.b22 = q(0);
        assert!(AutMatrix::from_params(&p).is_err());
        let mut m = sample().matrix().clone();
        m[0][1] = q(1);
        assert!(AutMatrix::from_matrix(m).is_err());
    }

    #[test]
    fn megaideals_invariant() {
        let a = sample();
        for (_, s) in standard::megaideal_list() {
            assert!(a.preserves(&s));
        }
        assert!(a.preserves(&standard::m2()));
    }
}
