//! Evaluators `(t, x) -> state` for the explicit solution families: the
//! regular, singular and ultra-singular hodograph families, the
//! generalized hodograph representation in Riemann invariants, and the
//! solutions obtained by Lie reduction.
//!
//! Implicit families are inverted with safeguarded Newton iterations and
//! supply analytic first derivatives by implicit differentiation.

mod genhodograph;
mod reductions;
mod regular;
mod roots;
mod singular;

pub use genhodograph::{GenHodographSolution, ThirdComponent};
pub use reductions::{ReductionCase, ReductionSolution};
pub use regular::RegularSolution;
pub use roots::{newton2, rtsafe, sign_changes, NewtonSettings};
pub use singular::{SingularEval, SingularSolution, UltraSingularSolution};

use crate::model::{to_riemann, RiemannState, UvwJet, UvwState};
use crate::numeric_solver::GridField;
use crate::telegraph::{HandleError, TelegraphError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ExactError {
    /// The hodograph Jacobian vanishes (up to tolerance).
    #[error("degenerate family: |det J| = {det:e} below tolerance")]
    Degenerate { det: f64 },
    /// Newton iteration stalled.
    #[error("Newton iteration did not converge, residual {residual:e}")]
    NoConvergence { residual: f64 },
    /// No sign change of the scalar equation in the search interval.
    #[error("no root in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
    /// A root exists only outside the validity window, or none was found.
    #[error("no solution in the validity window at (t, x) = ({t}, {x})")]
    NoSolutionInWindow { t: f64, x: f64 },
    /// Parameters violate the family's constraints.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// `(t, x)` lies outside the family's domain.
    #[error("outside domain: {0}")]
    OutsideDomain(String),
    #[error(transparent)]
    Handle(#[from] HandleError),
    #[error(transparent)]
    Telegraph(#[from] TelegraphError),
    /// Grid sampling failed at a cell.
    #[error("cell (row {row}, col {col}): {source}")]
    AtCell { row: usize, col: usize, source: Box<ExactError> },
}

/// Axis-aligned rectangle `[lo₀, hi₀] × [lo₁, hi₁]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Rect {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Self { lo, hi }
    }

    pub fn validate(&self) -> Result<(), ExactError> {
        let ok = (0..2).all(|k| self.lo[k].is_finite() && self.hi[k].is_finite() && self.lo[k] < self.hi[k]);
        if ok {
            Ok(())
        } else {
            Err(ExactError::InvalidParameters(format!("empty validity rectangle {:?}..{:?}", self.lo, self.hi)))
        }
    }

    pub fn center(&self) -> [f64; 2] {
        [0.5 * (self.lo[0] + self.hi[0]), 0.5 * (self.lo[1] + self.hi[1])]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        (0..2).all(|k| p[k] >= self.lo[k] && p[k] <= self.hi[k])
    }
}

/// How jets are obtained from a sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum JetMode {
    /// Analytic derivatives when the family has them, else central differences.
    Auto,
    FiniteDifference {
        h: f64,
    },
}

impl Default for JetMode {
    fn default() -> Self {
        JetMode::Auto
    }
}

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Pointwise evaluator of a solution.
pub trait Sampler: Send + Sync {
    /// State at `(t, x)`; `hint` seeds implicit solves.
    fn state(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Result<UvwState, ExactError>;

    fn analytic_jet(&self, _t: f64, _x: f64, _hint: Option<&UvwState>) -> Option<Result<UvwJet, ExactError>> {
        None
    }

    fn jet(&self, t: f64, x: f64, hint: Option<&UvwState>, mode: JetMode) -> Result<UvwJet, ExactError> {
        let h = match mode {
            JetMode::Auto => match self.analytic_jet(t, x, hint) {
                Some(j) => return j,
                None => DEFAULT_FD_STEP,
            },
            JetMode::FiniteDifference { h } => h,
        };
        let s0 = self.state(t, x, hint)?;
        let at = |tt: f64, xx: f64| self.state(tt, xx, Some(&s0)).map(UvwState::to_array);
        let (tp, tm) = (at(t + h, x)?, at(t - h, x)?);
        let (xp, xm) = (at(t, x + h)?, at(t, x - h)?);
        let d = |p: [f64; 3], m: [f64; 3]| [0, 1, 2].map(|k| (p[k] - m[k]) / (2.0 * h));
        Ok(UvwJet { t, x, state: s0, dt: d(tp, tm), dx: d(xp, xm) })
    }
}

/// Follows the solution branch from a known pair `anchor_p ↦ anchor_target`
/// to `goal` by moving the target along a straight line, reusing each
/// solution as the next seed. Refines the step count on failure.
pub fn continue_from_anchor(
    anchor_p: [f64; 2],
    anchor_target: [f64; 2],
    goal: [f64; 2],
    solve: impl Fn([f64; 2], [f64; 2]) -> Result<[f64; 2], ExactError>,
) -> Result<[f64; 2], ExactError> {
    let mut last = ExactError::NoSolutionInWindow { t: goal[0], x: goal[1] };
    'steps: for n in [8usize, 32, 128] {
        let mut p = anchor_p;
        for k in 1..=n {
            let s = k as f64 / n as f64;
            let target = [0, 1].map(|i| anchor_target[i] + s * (goal[i] - anchor_target[i]));
            match solve(p, target) {
                Ok(q) => p = q,
                Err(e) => {
                    last = e;
                    continue 'steps;
                }
            }
        }
        return Ok(p);
    }
    Err(last)
}

/// Tagged union of all families, as read from scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ExactSolution {
    Regular(RegularSolution),
    Singular(SingularSolution),
    UltraSingular(UltraSingularSolution),
    GenHodograph(GenHodographSolution),
    Reduction(ReductionSolution),
}

impl ExactSolution {
    pub fn validate(&self) -> Result<(), ExactError> {
        match self {
            ExactSolution::Regular(s) => s.validate(),
            ExactSolution::Singular(s) => s.validate(),
            ExactSolution::UltraSingular(s) => s.validate(),
            ExactSolution::GenHodograph(s) => s.validate(),
            ExactSolution::Reduction(s) => s.validate(),
        }
    }

    fn inner(&self) -> &dyn Sampler {
        match self {
            ExactSolution::Regular(s) => s,
            ExactSolution::Singular(s) => s,
            ExactSolution::UltraSingular(s) => s,
            ExactSolution::GenHodograph(s) => s,
            ExactSolution::Reduction(s) => s,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExactSolution::Regular(_) => "regular",
            ExactSolution::Singular(_) => "singular",
            ExactSolution::UltraSingular(_) => "ultra-singular",
            ExactSolution::GenHodograph(_) => "gen-hodograph",
            ExactSolution::Reduction(_) => "reduction",
        }
    }

    pub fn riemann(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Result<RiemannState, ExactError> {
        self.state(t, x, hint).map(to_riemann)
    }
}

impl Sampler for ExactSolution {
    fn state(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Result<UvwState, ExactError> {
        self.inner().state(t, x, hint)
    }

    fn analytic_jet(&self, t: f64, x: f64, hint: Option<&UvwState>) -> Option<Result<UvwJet, ExactError>> {
        self.inner().analytic_jet(t, x, hint)
    }
}

/// Time levels and cells of a sampling grid. Cells are centred, so a row
/// over `[x₀, x₁]` with `cells` entries has spacing `(x₁ − x₀)/cells`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_range: [f64; 2],
    #[serde(default = "one_level")]
    pub t_levels: usize,
    pub x_range: [f64; 2],
    pub cells: usize,
}

fn one_level() -> usize {
    1
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), ExactError> {
        let r = &self.x_range;
        if self.cells == 0 || self.t_levels == 0 || !(r[0] < r[1]) || !self.t_range.iter().all(|t| t.is_finite()) {
            return Err(ExactError::InvalidParameters(format!("bad grid spec {self:?}")));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_range[1] - self.x_range[0]) / self.cells as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let [a, b] = self.t_range;
        if self.t_levels == 1 {
            return vec![a];
        }
        (0..self.t_levels).map(|k| a + (b - a) * k as f64 / (self.t_levels - 1) as f64).collect()
    }

    pub fn cell_centers(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.cells).map(|i| self.x_range[0] + (i as f64 + 0.5) * dx).collect()
    }
}

/// One sampled time level: the cell states and their jets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledRow {
    pub field: GridField,
    pub jets: Vec<UvwJet>,
}

/// Samples `sol` at every cell centre and time level. Rows run in parallel;
/// within a row each cell is seeded with its left neighbour.
pub fn sample_to_grid(sol: &dyn Sampler, spec: &GridSpec, mode: JetMode) -> Result<Vec<SampledRow>, ExactError> {
    spec.validate()?;
    let xs = spec.cell_centers();
    spec.times()
        .into_par_iter()
        .enumerate()
        .map(|(row, t)| {
            let mut jets = Vec::with_capacity(xs.len());
            let mut hint: Option<UvwState> = None;
            for (col, &x) in xs.iter().enumerate() {
                let j = sol.jet(t, x, hint.as_ref(), mode).map_err(|e| ExactError::AtCell { row, col, source: Box::new(e) })?;
                hint = Some(j.state);
                jets.push(j);
            }
            let cells = jets.iter().map(|j| to_riemann(j.state)).collect();
            Ok(SampledRow { field: GridField { x0: spec.x_range[0], dx: spec.dx(), cells, time: t }, jets })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::residual_uvw;
    use crate::telegraph::{Mode, MonotoneFn, SmoothFn, TelegraphFn};

    fn quad() -> ExactSolution {
        ExactSolution::Regular(
            RegularSolution::new(TelegraphFn::single(Mode::Quad), MonotoneFn::Identity, Rect::new([-10.0, -10.0], [10.0, 10.0])).unwrap(),
        )
    }

    #[test]
    fn quad_grid_residuals() {
        let spec = GridSpec { t_range: [1.0, 2.0], t_levels: 5, x_range: [-1.0, 1.0], cells: 128 };
        let rows = sample_to_grid(&quad(), &spec, JetMode::Auto).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            assert_eq!(r.field.cells.len(), 128);
            for j in &r.jets {
                assert!(residual_uvw(j).iter().all(|e| e.abs() < 1e-9));
            }
        }
    }

    #[test]
    fn ultra_grid_is_translation() {
        let sol = ExactSolution::UltraSingular(UltraSingularSolution {
            u0: 0.5,
            v0: 1.0,
            profile: SmoothFn::Sine { amp: 1.0, k: 1.0, phase: 0.0 },
        });
        let spec = GridSpec { t_range: [0.0, 1.0], t_levels: 3, x_range: [0.0, 2.0], cells: 16 };
        for r in sample_to_grid(&sol, &spec, JetMode::Auto).unwrap() {
            for (c, x) in r.field.cells.iter().zip(spec.cell_centers()) {
                assert!((c.r3 - (x - 0.5 * r.field.time).sin()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_cell_is_named() {
        // Θ ≡ 0, ε = 1: G_u = −t vanishes on t = 0, the first time level.
        let sol =
            ExactSolution::Singular(SingularSolution::new(1.0, 0.0, crate::telegraph::ThetaFn::zero(), MonotoneFn::Identity).unwrap());
        let spec = GridSpec { t_range: [0.0, 1.0], t_levels: 2, x_range: [0.0, 1.0], cells: 4 };
        match sample_to_grid(&sol, &spec, JetMode::Auto) {
            Err(ExactError::AtCell { row: 0, col: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fd_matches_analytic() {
        let s = quad();
        let a = s.jet(1.3, 0.4, None, JetMode::Auto).unwrap();
        let f = s.jet(1.3, 0.4, None, JetMode::FiniteDifference { h: 1e-5 }).unwrap();
        for k in 0..3 {
            assert!((a.dt[k] - f.dt[k]).abs() < 1e-7 && (a.dx[k] - f.dx[k]).abs() < 1e-7);
        }
    }

    #[test]
    fn solution_json_roundtrip() {
        let s = quad();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"family\":\"regular\""));
        let back: ExactSolution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
