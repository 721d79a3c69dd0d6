//! Property engine: PDE residuals, symmetry orbits and flows, determining
//! equations of generalized symmetries, conserved currents and the
//! Hamiltonian form.
//!
//! Checks that rely on finite differences are reported as refinement
//! families: the residual is measured at several step sizes and the order
//! is fitted by least squares in log–log coordinates.

pub mod conservation;
pub mod flow;
pub mod gensym;
pub mod hamiltonian;
pub mod orbit;
pub mod poly;
pub mod residual;

use crate::exact_solutions::ExactError;
use serde::Serialize;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    /// A quantity in a current or characteristic divides by zero here.
    #[error("outside domain: {0}")]
    Domain(String),
    /// Group parameters violate `T¹ ≠ 0` or the map is not monotone.
    #[error("invalid group parameters: {0}")]
    InvalidGroup(String),
    /// Too few or non-positive samples to fit an order.
    #[error("cannot fit an order: {0}")]
    Fit(String),
}

/// Least-squares slope of `ln e` against `ln h`.
pub fn fit_order(h: &[f64], e: &[f64]) -> Result<f64, VerifyError> {
    if h.len() != e.len() || h.len() < 2 {
        return Err(VerifyError::Fit(format!("need at least two paired samples, got {} and {}", h.len(), e.len())));
    }
    if h.iter().chain(e).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(VerifyError::Fit(format!("samples must be positive and finite: h={h:?}, e={e:?}")));
    }
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Residuals recorded at a sequence of step sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refinement {
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    /// Fitted order, absent when every error is at the noise floor.
    pub order: Option<f64>,
    /// Largest error is already below the noise floor.
    pub at_noise_floor: bool,
}

/// Errors at or below this level count as exact.
pub const NOISE_FLOOR: f64 = 1e-12;

impl Refinement {
    pub fn new(steps: Vec<f64>, errors: Vec<f64>) -> Self {
        let floors = vec![NOISE_FLOOR; steps.len()];
        Self::with_floors(steps, errors, &floors)
    }

    /// Like [`Refinement::new`] with a round-off level per step. Errors at
    /// or below their level count as exact and are left out of the fit.
    pub fn with_floors(steps: Vec<f64>, errors: Vec<f64>, floors: &[f64]) -> Self {
        let above: Vec<usize> =
            (0..errors.len()).filter(|&k| errors[k] > floors.get(k).copied().unwrap_or(NOISE_FLOOR).max(NOISE_FLOOR)).collect();
        let at_noise_floor = above.is_empty();
        let order = if at_noise_floor {
            None
        } else {
            let h: Vec<f64> = above.iter().map(|&k| steps[k]).collect();
            let e: Vec<f64> = above.iter().map(|&k| errors[k]).collect();
            fit_order(&h, &e).ok()
        };
        Self { steps, errors, order, at_noise_floor }
    }

    /// Order at least `p`, or exactness.
    pub fn converges_at(&self, p: f64) -> bool {
        self.at_noise_floor || self.order.is_some_and(|o| o >= p)
    }
}

/// Halving sequence `h₀, h₀/2, …` of length `n`.
pub fn halving(h0: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| h0 / f64::powi(2.0, k as i32)).collect()
}
