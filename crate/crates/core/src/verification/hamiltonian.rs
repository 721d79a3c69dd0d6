//! Hamiltonian form `r_t = P_λ ∇h` in Riemann invariants.
//!
//! The density is `h = −¼ E (S² + 2D)` with `E = e^{r1−r2}`, `S = r1 + r2`,
//! `D = r1 − r2`, and `P_λ` is the first-order operator
//!
//! ```text
//! P_λ g = e^{r2−r1} diag(1, −1, λ e^{r2−r1}) D_x g + ½ e^{r2−r1} M g,
//! M = [[r2x − r1x, r1x − r2x, −2 r3x],
//!      [r2x − r1x, r1x − r2x, −2 r3x],
//!      [2 r3x,     2 r3x,     −2λ e^{r2−r1} (r1x − r2x)]].
//! ```

use super::{halving, Refinement, VerifyError};
use crate::exact_solutions::{JetMode, Sampler};
use crate::model::{char_speeds, from_riemann, to_riemann, RiemannState};

/// `∇h` at `r`.
pub fn grad_h(r: RiemannState) -> [f64; 3] {
    let e = (r.r1 - r.r2).exp();
    let (s, d) = (r.r1 + r.r2, r.r1 - r.r2);
    let q = s * s + 2.0 * d;
    [-0.25 * e * (q + 2.0 * s + 2.0), 0.25 * e * (q - 2.0 * s + 2.0), 0.0]
}

/// `P_λ g` given `g` and its total `x`-derivative `dg`.
pub fn apply_operator(lambda: f64, r: RiemannState, rx: [f64; 3], g: [f64; 3], dg: [f64; 3]) -> [f64; 3] {
    let e = (r.r2 - r.r1).exp();
    let [a, b, c] = rx;
    let m = [[b - a, a - b, -2.0 * c], [b - a, a - b, -2.0 * c], [2.0 * c, 2.0 * c, -2.0 * lambda * e * (a - b)]];
    let diag = [1.0, -1.0, lambda * e];
    [0, 1, 2].map(|k| e * diag[k] * dg[k] + 0.5 * e * (0..3).map(|i| m[k][i] * g[i]).sum::<f64>())
}

/// Largest component of `P_λ ∇h − r_t` at `(t, x)`, with `D_x ∇h` by a
/// central difference of step `h`.
pub fn hamiltonian_residual(sol: &dyn Sampler, lambda: f64, t: f64, x: f64, h: f64, mode: JetMode) -> Result<f64, VerifyError> {
    let j = sol.jet(t, x, None, mode)?.to_riemann();
    let at = |xx: f64| -> Result<[f64; 3], VerifyError> { Ok(grad_h(to_riemann(sol.state(t, xx, Some(&from_riemann(j.state)))?))) };
    let (p, m) = (at(x + h)?, at(x - h)?);
    let dg = [0, 1, 2].map(|k| (p[k] - m[k]) / (2.0 * h));
    let lhs = apply_operator(lambda, j.state, j.rx, grad_h(j.state), dg);
    let v = char_speeds(j.state.r1, j.state.r2);
    Ok((0..3).map(|k| (lhs[k] + v[k] * j.rx[k]).abs()).fold(0.0, f64::max))
}

/// Refinement of the Hamiltonian residual, max over `points`.
pub fn hamiltonian_check(sol: &dyn Sampler, lambda: f64, points: &[(f64, f64)], mode: JetMode) -> Result<Refinement, VerifyError> {
    let hs = halving(1e-2, 4);
    let errs = hs
        .iter()
        .map(|&h| {
            points.iter().try_fold(0.0f64, |m, &(t, x)| Ok::<_, VerifyError>(m.max(hamiltonian_residual(sol, lambda, t, x, h, mode)?)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Refinement::new(hs, errs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_solutions::{Rect, RegularSolution};
    use crate::telegraph::{Branch, Mode, MonotoneFn, TelegraphFn};
    use proptest::prelude::*;

    fn density(r: [f64; 3]) -> f64 {
        let (s, d) = (r[0] + r[1], r[0] - r[1]);
        -0.25 * d.exp() * (s * s + 2.0 * d)
    }

    #[test]
    fn hamiltonian_form_holds() {
        let phi = TelegraphFn::single(Mode::Quad).plus(&TelegraphFn::single(Mode::exp(0.5, Branch::Plus)).scaled(0.1));
        let s = RegularSolution::new(phi, MonotoneFn::Tanh, Rect::new([-3.0, -3.0], [3.0, 3.0])).unwrap();
        for lambda in [0.0, 1.0, -2.0] {
            let r = hamiltonian_check(&s, lambda, &[(1.3, -0.4), (1.7, 0.3)], JetMode::Auto).unwrap();
            assert!(r.converges_at(1.0), "λ={lambda}: {r:?}");
        }
    }

    proptest! {
        #[test]
        fn third_row_is_transport(r in prop::array::uniform3(-1.5..1.5f64), rx in prop::array::uniform3(-1.0..1.0f64), dg in prop::array::uniform2(-1.0..1.0f64), lambda in -3.0..3.0f64) {
            let st = RiemannState::from_array(r);
            let p = apply_operator(lambda, st, rx, grad_h(st), [dg[0], dg[1], 0.0]);
            prop_assert!((p[2] + (r[0] + r[1]) * rx[2]).abs() < 1e-12 * (1.0 + p[2].abs()));
        }

        #[test]
        fn gradient_matches_density(r in prop::array::uniform3(-1.5..1.5f64)) {
            let g = grad_h(RiemannState::from_array(r));
            let h = 1e-5;
            for k in 0..3 {
                let (mut p, mut m) = (r, r);
                p[k] += h;
                m[k] -= h;
                let fd = (density(p) - density(m)) / (2.0 * h);
                prop_assert!((fd - g[k]).abs() < 1e-7 * (1.0 + fd.abs()));
            }
        }
    }
}
