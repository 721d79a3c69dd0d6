//! Named closed-form function handles used as free functions in the
//! solution families: `Θ(u)`, monotone reparameterizations `W`, `F`, and
//! generic smooth profiles.

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum HandleError {
    /// Argument outside the range of the function being inverted.
    #[error("{name}: inverse undefined at {value}")]
    OutsideRange { name: &'static str, value: f64 },
    /// Handle parameters make the map non-monotone or degenerate.
    #[error("invalid handle parameters: {0}")]
    Invalid(String),
}

/// `Θ(u)` for the singular family, with derivatives through order two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThetaFn {
    /// `Σ c_i u^i`, ascending coefficients.
    Polynomial { coeffs: Vec<f64> },
    /// `scale · e^{αu}`
    Exp {
        alpha: f64,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl ThetaFn {
    pub fn zero() -> Self {
        ThetaFn::Polynomial { coeffs: vec![] }
    }

    /// `(Θ, Θ_u, Θ_uu)`
    pub fn eval(&self, u: f64) -> [f64; 3] {
        match self {
            ThetaFn::Polynomial { coeffs } => {
                let d1 = poly_deriv(coeffs);
                let d2 = poly_deriv(&d1);
                [horner(coeffs, u), horner(&d1, u), horner(&d2, u)]
            }
            ThetaFn::Exp { alpha, scale } => {
                let e = scale * (alpha * u).exp();
                [e, alpha * e, alpha * alpha * e]
            }
        }
    }
}

pub(crate) fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn poly_deriv(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, a)| i as f64 * a).collect()
}

/// Strictly monotone map with derivative and inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MonotoneFn {
    Identity,
    /// `a·x + b`, `a ≠ 0`
    Affine {
        a: f64,
        b: f64,
    },
    Exp,
    Tanh,
    /// `a·x³ + b·x` with `a > 0`, `b > 0`
    OddCubic {
        a: f64,
        b: f64,
    },
    Inverse {
        of: Box<MonotoneFn>,
    },
    /// `outer ∘ inner`
    Compose {
        outer: Box<MonotoneFn>,
        inner: Box<MonotoneFn>,
    },
}

impl MonotoneFn {
    pub fn identity() -> Self {
        MonotoneFn::Identity
    }

    pub fn affine(a: f64, b: f64) -> Self {
        MonotoneFn::Affine { a, b }
    }

    pub fn inverse_of(f: MonotoneFn) -> Self {
        match f {
            MonotoneFn::Identity => MonotoneFn::Identity,
            MonotoneFn::Inverse { of } => *of,
            other => MonotoneFn::Inverse { of: Box::new(other) },
        }
    }

    pub fn compose(outer: MonotoneFn, inner: MonotoneFn) -> Self {
        match (outer, inner) {
            (MonotoneFn::Identity, f) | (f, MonotoneFn::Identity) => f,
            (MonotoneFn::Affine { a, b }, MonotoneFn::Affine { a: c, b: d }) => MonotoneFn::Affine { a: a * c, b: a * d + b },
            (o, i) => MonotoneFn::Compose { outer: Box::new(o), inner: Box::new(i) },
        }
    }

    pub fn validate(&self) -> Result<(), HandleError> {
        match self {
            MonotoneFn::Affine { a, b } if *a == 0.0 || !a.is_finite() || !b.is_finite() => {
                Err(HandleError::Invalid(format!("affine slope must be finite and nonzero, got a={a}")))
            }
            MonotoneFn::OddCubic { a, b } if !(*a > 0.0 && *b > 0.0) => {
                Err(HandleError::Invalid(format!("odd cubic needs a > 0 and b > 0, got a={a}, b={b}")))
            }
            MonotoneFn::Inverse { of } => of.validate(),
            MonotoneFn::Compose { outer, inner } => {
                outer.validate()?;
                inner.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            MonotoneFn::Identity => x,
            MonotoneFn::Affine { a, b } => a * x + b,
            MonotoneFn::Exp => x.exp(),
            MonotoneFn::Tanh => x.tanh(),
            MonotoneFn::OddCubic { a, b } => a * x * x * x + b * x,
            MonotoneFn::Inverse { of } => of.inverse(x).unwrap_or(f64::NAN),
            MonotoneFn::Compose { outer, inner } => outer.eval(inner.eval(x)),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self {
            MonotoneFn::Identity => 1.0,
            MonotoneFn::Affine { a, .. } => *a,
            MonotoneFn::Exp => x.exp(),
            MonotoneFn::Tanh => {
                let c = x.cosh();
                1.0 / (c * c)
            }
            MonotoneFn::OddCubic { a, b } => 3.0 * a * x * x + b,
            MonotoneFn::Inverse { of } => match of.inverse(x) {
                Ok(y) => 1.0 / of.deriv(y),
                Err(_) => f64::NAN,
            },
            MonotoneFn::Compose { outer, inner } => outer.deriv(inner.eval(x)) * inner.deriv(x),
        }
    }

    pub fn inverse(&self, y: f64) -> Result<f64, HandleError> {
        match self {
            MonotoneFn::Identity => Ok(y),
            MonotoneFn::Affine { a, b } => Ok((y - b) / a),
            MonotoneFn::Exp if y > 0.0 => Ok(y.ln()),
            MonotoneFn::Exp => Err(HandleError::OutsideRange { name: "exp", value: y }),
            MonotoneFn::Tanh if y.abs() < 1.0 => Ok(y.atanh()),
            MonotoneFn::Tanh => Err(HandleError::OutsideRange { name: "tanh", value: y }),
            MonotoneFn::OddCubic { a, b } => Ok(odd_cubic_root(*a, *b, y)),
            MonotoneFn::Inverse { of } => Ok(of.eval(y)),
            MonotoneFn::Compose { outer, inner } => inner.inverse(outer.inverse(y)?),
        }
    }

    /// True when the map is `x ↦ a·x + b`, returning `(a, b)`.
    pub fn as_affine(&self) -> Option<(f64, f64)> {
        match self {
            MonotoneFn::Identity => Some((1.0, 0.0)),
            MonotoneFn::Affine { a, b } => Some((*a, *b)),
            _ => None,
        }
    }
}

/// Real root of `a y³ + b y = z` (unique for `a, b > 0`).
fn odd_cubic_root(a: f64, b: f64, z: f64) -> f64 {
    let p = b / a;
    let q = -z / a;
    let d = (0.25 * q * q + p * p * p / 27.0).sqrt();
    let mut y = (-0.5 * q + d).cbrt() + (-0.5 * q - d).cbrt();
    for _ in 0..3 {
        let f = a * y * y * y + b * y - z;
        let df = 3.0 * a * y * y + b;
        y -= f / df;
    }
    y
}

/// Smooth function handle without a monotonicity requirement, used for
/// arbitrary profiles such as `w = W(x - u0 t)` or the free `ψ` of
/// reduction families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SmoothFn {
    /// `amp · exp(-((x - center)/width)²)`
    Gaussian {
        amp: f64,
        center: f64,
        width: f64,
    },
    /// `amp · sin(k x + phase)`
    Sine {
        amp: f64,
        k: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `Σ c_i x^i`, ascending coefficients.
    Polynomial {
        coeffs: Vec<f64>,
    },
    Monotone {
        of: MonotoneFn,
    },
}

impl SmoothFn {
    pub fn identity() -> Self {
        SmoothFn::Monotone { of: MonotoneFn::Identity }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SmoothFn::Gaussian { amp, center, width } => {
                let s = (x - center) / width;
                amp * (-s * s).exp()
            }
            SmoothFn::Sine { amp, k, phase } => amp * (k * x + phase).sin(),
            SmoothFn::Polynomial { coeffs } => horner(coeffs, x),
            SmoothFn::Monotone { of } => of.eval(x),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self {
            SmoothFn::Gaussian { amp, center, width } => {
                let s = (x - center) / width;
                -2.0 * s / width * amp * (-s * s).exp()
            }
            SmoothFn::Sine { amp, k, phase } => amp * k * (k * x + phase).cos(),
            SmoothFn::Polynomial { coeffs } => horner(&poly_deriv(coeffs), x),
            SmoothFn::Monotone { of } => of.deriv(x),
        }
    }

    pub fn validate(&self) -> Result<(), HandleError> {
        match self {
            SmoothFn::Gaussian { width, .. } if *width == 0.0 => Err(HandleError::Invalid("gaussian width must be nonzero".into())),
            SmoothFn::Monotone { of } => of.validate(),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn theta_polynomial() {
        let th = ThetaFn::Polynomial { coeffs: vec![1.0, -2.0, 0.5, 3.0] };
        let u = 0.7;
        let [f, d1, d2] = th.eval(u);
        assert!((f - (1.0 - 2.0 * u + 0.5 * u * u + 3.0 * u * u * u)).abs() < 1e-14);
        assert!((d1 - (-2.0 + u + 9.0 * u * u)).abs() < 1e-14);
        assert!((d2 - (1.0 + 18.0 * u)).abs() < 1e-14);
        assert_eq!(ThetaFn::zero().eval(3.0), [0.0; 3]);
    }

    #[test]
    fn out_of_range_inverse() {
        assert!(MonotoneFn::Exp.inverse(-1.0).is_err());
        assert!(MonotoneFn::Tanh.inverse(1.0).is_err());
        assert!(MonotoneFn::OddCubic { a: 1.0, b: 0.0 }.validate().is_err());
        assert!(MonotoneFn::affine(0.0, 1.0).validate().is_err());
    }

    fn arb_monotone() -> impl Strategy<Value = MonotoneFn> {
        let leaf = prop_oneof![
            Just(MonotoneFn::Identity),
            (prop_oneof![-3.0f64..-0.2, 0.2f64..3.0], -2.0f64..2.0).prop_map(|(a, b)| MonotoneFn::affine(a, b)),
            Just(MonotoneFn::Exp),
            Just(MonotoneFn::Tanh),
            (0.1f64..3.0, 0.1f64..3.0).prop_map(|(a, b)| MonotoneFn::OddCubic { a, b }),
        ];
        leaf.prop_recursive(2, 4, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(MonotoneFn::inverse_of),
                (inner.clone(), inner).prop_map(|(o, i)| MonotoneFn::compose(o, i)),
            ]
        })
    }

    proptest! {
        #[test]
        fn inverse_after_forward_is_identity(f in arb_monotone(), x in -1.5f64..1.5) {
            let y = f.eval(x);
            // Skip saturated points where the inverse is ill-conditioned.
            prop_assume!(y.is_finite() && f.deriv(x).abs() > 1e-4);
            if let Ok(back) = f.inverse(y) {
                prop_assert!((back - x).abs() <= 1e-10 * (1.0 + x.abs()), "{:?}: {} -> {} -> {}", f, x, y, back);
            }
        }

        #[test]
        fn derivative_matches_difference_quotient(f in arb_monotone(), x in -1.0f64..1.0) {
            let h = 1e-6;
            let (a, b) = (f.eval(x + h), f.eval(x - h));
            prop_assume!(a.is_finite() && b.is_finite());
            let d = f.deriv(x);
            prop_assert!(d != 0.0);
            prop_assert!(((a - b) / (2.0 * h) - d).abs() <= 1e-5 * (1.0 + d.abs()));
        }
    }
}
