//! Coordinate charts, characteristic speeds and pointwise residuals of the
//! isothermal no-slip drift flux system.
//!
//! Three charts are used for the same physical state:
//!
//! * physical `(rho1, rho2, u)` with the densities of the two phases,
//! * `(u, v, w)` with `v = ln(rho1 + rho2)` and `w = rho1 / rho2`,
//! * Riemann invariants `(r1, r2, r3)` with `r1 = (u + v) / 2`,
//!   `r2 = (u - v) / 2`, `r3 = w`.
//!
//! The sound speed is normalized to one throughout. In the `(u, v, w)` chart
//! the system reads
//!
//! ```text
//! u_t + u u_x + v_x = 0,   v_t + u v_x + u_x = 0,   w_t + u w_x = 0,
//! ```
//!
//! and in Riemann invariants it is diagonal, `r^k_t + V^k r^k_x = 0` with
//! `V^1 = r1 + r2 + 1`, `V^2 = r1 + r2 - 1`, `V^3 = r1 + r2`.

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ModelError {
    /// A phase density was zero or negative.
    #[error("densities must be positive, got rho1={rho1}, rho2={rho2}")]
    NonPositiveDensity { rho1: f64, rho2: f64 },
    /// `w = -1` has no preimage in the physical chart.
    #[error("w = -1 is outside the physical chart")]
    SingularChart,
}

/// State in the physical chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysState {
    pub rho1: f64,
    pub rho2: f64,
    pub u: f64,
}

/// State in the `(u, v, w)` chart. `w <= 0` is allowed here, since point
/// symmetries reparameterize `w` arbitrarily.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UvwState {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

/// State in Riemann invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannState {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl UvwState {
    pub fn new(u: f64, v: f64, w: f64) -> Self {
        Self { u, v, w }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.w.is_finite()
    }
}

impl RiemannState {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Self {
        Self { r1, r2, r3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn is_finite(&self) -> bool {
        self.r1.is_finite() && self.r2.is_finite() && self.r3.is_finite()
    }
}

pub fn to_uvw(p: PhysState) -> Result<UvwState, ModelError> {
    if !(p.rho1 > 0.0 && p.rho2 > 0.0) {
        return Err(ModelError::NonPositiveDensity { rho1: p.rho1, rho2: p.rho2 });
    }
    Ok(UvwState { u: p.u, v: (p.rho1 + p.rho2).ln(), w: p.rho1 / p.rho2 })
}

pub fn from_uvw(s: UvwState) -> Result<PhysState, ModelError> {
    if s.w == -1.0 {
        return Err(ModelError::SingularChart);
    }
    let e = s.v.exp();
    Ok(PhysState { rho1: s.w * e / (s.w + 1.0), rho2: e / (s.w + 1.0), u: s.u })
}

pub fn to_riemann(s: UvwState) -> RiemannState {
    RiemannState { r1: 0.5 * (s.u + s.v), r2: 0.5 * (s.u - s.v), r3: s.w }
}

pub fn from_riemann(r: RiemannState) -> UvwState {
    UvwState { u: r.r1 + r.r2, v: r.r1 - r.r2, w: r.r3 }
}

/// Characteristic speeds `(V1, V2, V3)`.
pub fn char_speeds(r1: f64, r2: f64) -> [f64; 3] {
    let s = r1 + r2;
    [s + 1.0, s - 1.0, s]
}

/// First-order jet of a function `(t, x) -> (u, v, w)` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UvwJet {
    pub t: f64,
    pub x: f64,
    pub state: UvwState,
    /// `(u_t, v_t, w_t)`
    pub dt: [f64; 3],
    /// `(u_x, v_x, w_x)`
    pub dx: [f64; 3],
}

/// Jet point in Riemann invariants. `rxx` is only needed by
/// generalized-symmetry and commutator checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JetPoint {
    pub t: f64,
    pub x: f64,
    pub state: RiemannState,
    pub rx: [f64; 3],
    pub rt: [f64; 3],
    pub rxx: Option<[f64; 3]>,
}

fn mix(a: [f64; 3]) -> [f64; 3] {
    [0.5 * (a[0] + a[1]), 0.5 * (a[0] - a[1]), a[2]]
}

fn unmix(a: [f64; 3]) -> [f64; 3] {
    [a[0] + a[1], a[0] - a[1], a[2]]
}

impl UvwJet {
    pub fn to_riemann(&self) -> JetPoint {
        JetPoint { t: self.t, x: self.x, state: to_riemann(self.state), rx: mix(self.dx), rt: mix(self.dt), rxx: None }
    }
}

impl JetPoint {
    pub fn to_uvw(&self) -> UvwJet {
        UvwJet { t: self.t, x: self.x, state: from_riemann(self.state), dx: unmix(self.rx), dt: unmix(self.rt) }
    }

    /// Jet on the solution manifold: `rt = -diag(V) rx`.
    pub fn on_shell(t: f64, x: f64, state: RiemannState, rx: [f64; 3], rxx: Option<[f64; 3]>) -> Self {
        let v = char_speeds(state.r1, state.r2);
        let rt = [-v[0] * rx[0], -v[1] * rx[1], -v[2] * rx[2]];
        Self { t, x, state, rx, rt, rxx }
    }
}

/// `(u_t + u u_x + v_x, v_t + u v_x + u_x, w_t + u w_x)`.
pub fn residual_uvw(j: &UvwJet) -> [f64; 3] {
    let u = j.state.u;
    let [ut, vt, wt] = j.dt;
    let [ux, vx, wx] = j.dx;
    [ut + u * ux + vx, vt + u * vx + ux, wt + u * wx]
}

/// `r^k_t + V^k r^k_x` for `k = 1, 2, 3`.
pub fn residual_riemann(j: &JetPoint) -> [f64; 3] {
    let v = char_speeds(j.state.r1, j.state.r2);
    [j.rt[0] + v[0] * j.rx[0], j.rt[1] + v[1] * j.rx[1], j.rt[2] + v[2] * j.rx[2]]
}

/// Constant matrix `M` with `residual_riemann = M · residual_uvw`.
pub const MIXING: [[f64; 3]; 3] = [[0.5, 0.5, 0.0], [0.5, -0.5, 0.0], [0.0, 0.0, 1.0]];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn to_uvw_examples() {
        let s = to_uvw(PhysState { rho1: 1.0, rho2: 1.0, u: 0.0 }).unwrap();
        assert_eq!(s, UvwState::new(0.0, 2f64.ln(), 1.0));
        let e = std::f64::consts::E;
        let s = to_uvw(PhysState { rho1: e / 2.0, rho2: e / 2.0, u: 3.0 }).unwrap();
        assert_abs_diff_eq!(s.v, 1.0, epsilon = 1e-15);
        assert_eq!((s.u, s.w), (3.0, 1.0));
        let s = to_uvw(PhysState { rho1: 2.0, rho2: 1.0, u: -1.0 }).unwrap();
        assert_eq!(s, UvwState::new(-1.0, 3f64.ln(), 2.0));
        assert!(to_uvw(PhysState { rho1: 0.0, rho2: 1.0, u: 0.0 }).is_err());
    }

    #[test]
    fn from_uvw_examples() {
        let p = from_uvw(UvwState::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(p, PhysState { rho1: 0.5, rho2: 0.5, u: 0.0 });
        let e = std::f64::consts::E;
        let p = from_uvw(UvwState::new(3.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(p.rho1, e / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.rho2, e / 2.0, epsilon = 1e-15);
        assert_eq!(from_uvw(UvwState::new(0.0, 0.0, -1.0)), Err(ModelError::SingularChart));
    }

    #[test]
    fn riemann_examples() {
        assert_eq!(to_riemann(UvwState::new(1.0, 1.0, 2.0)), RiemannState::new(1.0, 0.0, 2.0));
        assert_eq!(to_riemann(UvwState::new(0.0, 0.0, 7.0)), RiemannState::new(0.0, 0.0, 7.0));
        assert_eq!(to_riemann(UvwState::new(3.0, -1.0, 5.0)), RiemannState::new(1.0, 2.0, 5.0));
    }

    #[test]
    fn speeds() {
        assert_eq!(char_speeds(0.0, 0.0), [1.0, -1.0, 0.0]);
        assert_eq!(char_speeds(1.0, 2.0), [4.0, 2.0, 3.0]);
    }

    fn quad_jet(t: f64, x: f64) -> UvwJet {
        // u = t/2, v = t^2/8 - x/2 - 1, w = 2 e^v
        let v = t * t / 8.0 - x / 2.0 - 1.0;
        let w = 2.0 * v.exp();
        UvwJet { t, x, state: UvwState::new(t / 2.0, v, w), dt: [0.5, t / 4.0, w * t / 4.0], dx: [0.0, -0.5, -0.5 * w] }
    }

    #[test]
    fn residual_examples() {
        let c = UvwJet { t: 0.3, x: 0.1, state: UvwState::new(1.0, 2.0, 3.0), dt: [0.0; 3], dx: [0.0; 3] };
        assert_eq!(residual_uvw(&c), [0.0; 3]);
        let unit = UvwJet { dt: [1.0, 0.0, 0.0], ..c };
        assert_eq!(residual_uvw(&unit), [1.0, 0.0, 0.0]);
        for &(t, x) in &[(1.0, 0.0), (2.0, -1.0), (1.5, 0.7)] {
            let j = quad_jet(t, x);
            for r in residual_uvw(&j) {
                assert_abs_diff_eq!(r, 0.0, epsilon = 1e-14);
            }
            for r in residual_riemann(&j.to_riemann()) {
                assert_abs_diff_eq!(r, 0.0, epsilon = 1e-14);
            }
        }
    }

    proptest! {
        #[test]
        fn chart_round_trips(rho1 in 1e-3f64..1e3, rho2 in 1e-3f64..1e3, u in -10.0f64..10.0) {
            let p = PhysState { rho1, rho2, u };
            let back = from_uvw(to_uvw(p).unwrap()).unwrap();
            prop_assert!((back.rho1 - rho1).abs() <= 1e-12 * rho1.max(1.0));
            prop_assert!((back.rho2 - rho2).abs() <= 1e-12 * rho2.max(1.0));
            prop_assert_eq!(back.u, u);
            let s = to_uvw(p).unwrap();
            let s2 = from_riemann(to_riemann(s));
            prop_assert!((s2.u - s.u).abs() <= 1e-12 && (s2.v - s.v).abs() <= 1e-12 && s2.w == s.w);
        }

        #[test]
        fn hyperbolic_gaps(r1 in -1e3f64..1e3, r2 in -1e3f64..1e3) {
            let v = char_speeds(r1, r2);
            prop_assert!(v[0] > v[2] && v[2] > v[1]);
            prop_assert!(((v[0] - v[1]) - 2.0).abs() < 1e-9);
            prop_assert!(((v[0] - v[2]) - 1.0).abs() < 1e-9);
        }

        #[test]
        fn on_shell_jets_have_zero_residual(r in proptest::array::uniform3(-5.0f64..5.0), rx in proptest::array::uniform3(-5.0f64..5.0)) {
            let j = JetPoint::on_shell(0.0, 0.0, RiemannState::from_array(r), rx, None);
            for c in residual_riemann(&j) {
                prop_assert!(c.abs() < 1e-12);
            }
        }

        #[test]
        fn riemann_residual_is_mixed_uvw_residual(
            s in proptest::array::uniform3(-3.0f64..3.0),
            dt in proptest::array::uniform3(-3.0f64..3.0),
            dx in proptest::array::uniform3(-3.0f64..3.0),
        ) {
            let j = UvwJet { t: 0.0, x: 0.0, state: UvwState::from_array(s), dt, dx };
            let ru = residual_uvw(&j);
            let rr = residual_riemann(&j.to_riemann());
            for k in 0..3 {
                let m: f64 = (0..3).map(|i| MIXING[k][i] * ru[i]).sum();
                prop_assert!((m - rr[k]).abs() < 1e-12);
            }
        }
    }
}
