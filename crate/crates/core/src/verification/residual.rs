//! Pointwise PDE residuals of sampled solutions over a window.

use super::VerifyError;
use crate::exact_solutions::{ExactError, JetMode, Sampler};
use crate::model::{residual_uvw, UvwState};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Rectangle `[t₀, t₁] × [x₀, x₁]` in space-time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub t: [f64; 2],
    pub x: [f64; 2],
}

impl Window {
    pub fn new(t: [f64; 2], x: [f64; 2]) -> Self {
        Self { t, x }
    }

    /// `n × n` lattice including the corners, row-major in `t`.
    pub fn lattice(&self, n: usize) -> Vec<Vec<(f64, f64)>> {
        let at = |r: [f64; 2], k: usize| if n == 1 { 0.5 * (r[0] + r[1]) } else { r[0] + (r[1] - r[0]) * k as f64 / (n - 1) as f64 };
        (0..n).map(|i| (0..n).map(|j| (at(self.t, i), at(self.x, j))).collect()).collect()
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.t[0] + self.t[1]), 0.5 * (self.x[0] + self.x[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max: f64,
    pub worst: (f64, f64),
    pub points: usize,
}

/// Max-norm of `residual_uvw` over the `n × n` lattice of `w`.
pub fn residual_on_window(sol: &dyn Sampler, w: &Window, n: usize, mode: JetMode) -> Result<ResidualReport, VerifyError> {
    let rows = w.lattice(n);
    let per_row: Vec<(f64, (f64, f64))> = rows
        .par_iter()
        .map(|row| {
            let mut hint: Option<UvwState> = None;
            let mut best = (0.0f64, row[0]);
            for &(t, x) in row {
                let j = sol.jet(t, x, hint.as_ref(), mode)?;
                hint = Some(j.state);
                let r = residual_uvw(&j).iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if !r.is_finite() {
                    return Err(ExactError::OutsideDomain(format!("non-finite residual at ({t}, {x})")));
                }
                if r > best.0 {
                    best = (r, (t, x));
                }
            }
            Ok(best)
        })
        .collect::<Result<_, ExactError>>()?;
    let (max, worst) = per_row.into_iter().fold((0.0, w.center()), |a, b| if b.0 > a.0 { b } else { a });
    Ok(ResidualReport { max, worst, points: n * n })
}
