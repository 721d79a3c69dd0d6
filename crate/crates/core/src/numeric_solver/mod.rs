//! First-order upwind solver for the diagonal form `r^k_t + V^k r^k_x = 0`,
//! used as an independent oracle against the exact families.
//!
//! Speeds are frozen per cell per step. With `cfl ≤ 1` every update is a
//! convex combination of the cell and its upwind neighbour, which the
//! solver checks after each step.

use crate::exact_solutions::{ExactError, Sampler};
use crate::model::{char_speeds, from_riemann, to_riemann, RiemannState, UvwState};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SolverError {
    /// A cell became NaN or infinite.
    #[error("blow-up at t = {time}, cell {cell}")]
    BlowUp { time: f64, cell: usize },
    /// An update left the range of its stencil values.
    #[error("maximum principle violated at t = {time}, cell {cell}, component r{}", component + 1)]
    MaximumPrinciple { time: f64, cell: usize, component: usize },
    /// Bad grid or configuration.
    #[error("invalid solver input: {0}")]
    Invalid(String),
    /// The exact solution used for boundary data or errors failed.
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Cell averages of the Riemann invariants at one time. Cell `i` has centre
/// `x0 + (i + ½)dx`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub x0: f64,
    pub dx: f64,
    pub cells: Vec<RiemannState>,
    pub time: f64,
}

pub const MIN_CELLS: usize = 4;

impl GridField {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.dx > 0.0) || !self.dx.is_finite() {
            return Err(SolverError::Invalid(format!("dx must be positive, got {}", self.dx)));
        }
        if self.cells.len() < MIN_CELLS {
            return Err(SolverError::Invalid(format!("need at least {MIN_CELLS} cells, got {}", self.cells.len())));
        }
        if let Some(cell) = self.cells.iter().position(|c| !c.is_finite()) {
            return Err(SolverError::BlowUp { time: self.time, cell });
        }
        Ok(())
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    pub fn length(&self) -> f64 {
        self.dx * self.cells.len() as f64
    }

    /// Samples `sol` at the cell centres, seeding each cell with its left neighbour.
    pub fn from_exact(sol: &dyn Sampler, x0: f64, x1: f64, cells: usize, time: f64) -> Result<Self, SolverError> {
        let dx = (x1 - x0) / cells as f64;
        let mut out = Vec::with_capacity(cells);
        let mut hint: Option<UvwState> = None;
        for i in 0..cells {
            let s = sol.state(time, x0 + (i as f64 + 0.5) * dx, hint.as_ref())?;
            hint = Some(s);
            out.push(to_riemann(s));
        }
        let f = Self { x0, dx, cells: out, time };
        f.validate()?;
        Ok(f)
    }

    /// `∫ e^{r¹−r²} r³ dx`, the density integral of the mass-type current.
    pub fn dhc_integral(&self) -> f64 {
        self.cells.iter().map(|c| (c.r1 - c.r2).exp() * c.r3).sum::<f64>() * self.dx
    }
}

#[derive(Clone)]
pub enum Boundary {
    Periodic,
    /// Ghost cells take the exact solution at the current time.
    ExactInflow(Arc<dyn Sampler>),
}

impl std::fmt::Debug for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Periodic => write!(f, "Periodic"),
            Boundary::ExactInflow(_) => write!(f, "ExactInflow"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub cfl: f64,
    pub boundary: Boundary,
    pub t_end: f64,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::Invalid(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !self.t_end.is_finite() {
            return Err(SolverError::Invalid("t_end must be finite".into()));
        }
        Ok(())
    }
}

/// Largest `|V^k|` over the grid.
pub fn max_speed(f: &GridField) -> f64 {
    f.cells.iter().flat_map(|c| char_speeds(c.r1, c.r2)).fold(0.0, |m, v| m.max(v.abs()))
}

/// CFL time step `cfl·dx / max|V^k|`.
pub fn cfl_dt(f: &GridField, cfl: f64) -> f64 {
    cfl * f.dx / max_speed(f)
}

fn ghosts(f: &GridField, b: &Boundary) -> Result<(RiemannState, RiemannState), SolverError> {
    let n = f.cells.len();
    match b {
        Boundary::Periodic => Ok((f.cells[n - 1], f.cells[0])),
        Boundary::ExactInflow(sol) => {
            let hl = from_riemann(f.cells[0]);
            let hr = from_riemann(f.cells[n - 1]);
            let l = sol.state(f.time, f.x0 - 0.5 * f.dx, Some(&hl))?;
            let r = sol.state(f.time, f.x0 + f.length() + 0.5 * f.dx, Some(&hr))?;
            Ok((to_riemann(l), to_riemann(r)))
        }
    }
}

/// Advances by exactly `dt`, which must satisfy the CFL bound.
fn advance(f: &GridField, b: &Boundary, dt: f64) -> Result<GridField, SolverError> {
    let n = f.cells.len();
    let (gl, gr) = ghosts(f, b)?;
    let lam = dt / f.dx;
    let time = f.time + dt;
    let cells: Vec<RiemannState> = (0..n)
        .into_par_iter()
        .with_min_len(512)
        .map(|i| {
            let c = f.cells[i];
            let l = if i == 0 { gl } else { f.cells[i - 1] };
            let r = if i + 1 == n { gr } else { f.cells[i + 1] };
            let v = char_speeds(c.r1, c.r2);
            let (ca, la, ra) = (c.to_array(), l.to_array(), r.to_array());
            let mut out = [0.0; 3];
            for k in 0..3 {
                let nu = lam * v[k];
                out[k] = if v[k] >= 0.0 { ca[k] - nu * (ca[k] - la[k]) } else { ca[k] - nu * (ra[k] - ca[k]) };
                let nb = if v[k] >= 0.0 { la[k] } else { ra[k] };
                let (lo, hi) = (ca[k].min(nb), ca[k].max(nb));
                let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
                if !out[k].is_finite() {
                    return Err(SolverError::BlowUp { time, cell: i });
                }
                if out[k] < lo - slack || out[k] > hi + slack {
                    return Err(SolverError::MaximumPrinciple { time, cell: i, component: k });
                }
            }
            Ok(RiemannState::from_array(out))
        })
        .collect::<Result<_, _>>()?;
    Ok(GridField { x0: f.x0, dx: f.dx, cells, time })
}

/// One CFL step, clipped so as not to pass `cfg.t_end`.
pub fn step(f: &GridField, cfg: &SolverConfig) -> Result<GridField, SolverError> {
    f.validate()?;
    cfg.validate()?;
    let dt = cfl_dt(f, cfg.cfl).min((cfg.t_end - f.time).max(0.0));
    if dt == 0.0 {
        return Ok(f.clone());
    }
    advance(f, &cfg.boundary, dt)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub field: GridField,
    /// Fields at `snapshots` evenly spaced times, ending at `t_end`.
    pub snapshots: Vec<GridField>,
    pub steps: usize,
}

/// Steps from `init.time` to `cfg.t_end`, landing exactly on `t_end` and on
/// each snapshot time.
pub fn solve(init: &GridField, cfg: &SolverConfig, snapshots: usize) -> Result<SolveResult, SolverError> {
    init.validate()?;
    cfg.validate()?;
    if cfg.t_end < init.time {
        return Err(SolverError::Invalid(format!("t_end {} precedes the initial time {}", cfg.t_end, init.time)));
    }
    let t0 = init.time;
    let targets: Vec<f64> = (1..=snapshots.max(1)).map(|k| t0 + (cfg.t_end - t0) * k as f64 / snapshots.max(1) as f64).collect();
    let mut f = init.clone();
    let mut shots = vec![];
    let mut steps = 0;
    for (k, &target) in targets.iter().enumerate() {
        let target = if k + 1 == targets.len() { cfg.t_end } else { target };
        while f.time < target {
            let remaining = target - f.time;
            let dt = cfl_dt(&f, cfg.cfl);
            f = if dt >= remaining {
                let mut g = advance(&f, &cfg.boundary, remaining)?;
                g.time = target;
                g
            } else {
                advance(&f, &cfg.boundary, dt)?
            };
            steps += 1;
        }
        if snapshots > 0 {
            shots.push(f.clone());
        }
    }
    Ok(SolveResult { field: f, snapshots: shots, steps })
}

/// `Σ |f_i − exact(x_i, t)| dx` per Riemann component.
pub fn l1_error(f: &GridField, sol: &dyn Sampler) -> Result<[f64; 3], SolverError> {
    let exact = GridField::from_exact(sol, f.x0, f.x0 + f.length(), f.cells.len(), f.time)?;
    l1_distance(f, &exact)
}

/// `Σ |f_i − g_i| dx` per component; the grids must match.
pub fn l1_distance(f: &GridField, g: &GridField) -> Result<[f64; 3], SolverError> {
    if f.cells.len() != g.cells.len() || (f.dx - g.dx).abs() > 1e-14 * f.dx {
        return Err(SolverError::Invalid("grids differ".into()));
    }
    let mut e = [0.0; 3];
    for (a, b) in f.cells.iter().zip(&g.cells) {
        let (a, b) = (a.to_array(), b.to_array());
        for k in 0..3 {
            e[k] += (a[k] - b[k]).abs() * f.dx;
        }
    }
    Ok(e)
}

/// `log₂(e_k / e_{k+1})` for errors on grids refined by factors of two.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_solutions::{ExactSolution, Rect, RegularSolution, UltraSingularSolution};
    use crate::telegraph::{Mode, MonotoneFn, SmoothFn, TelegraphFn};
    use proptest::prelude::*;

    fn periodic(t_end: f64) -> SolverConfig {
        SolverConfig { cfl: 0.9, boundary: Boundary::Periodic, t_end }
    }

    fn constant(n: usize) -> GridField {
        GridField { x0: 0.0, dx: 1.0 / n as f64, cells: vec![RiemannState::new(0.3, -0.2, 1.5); n], time: 0.0 }
    }

    #[test]
    fn constant_field_unchanged() {
        let f = constant(16);
        let g = step(&f, &periodic(1.0)).unwrap();
        assert_eq!(g.cells, f.cells);
        assert!(g.time > 0.0);
    }

    #[test]
    fn dt_hits_cfl() {
        let f = constant(16);
        let g = step(&f, &periodic(1.0)).unwrap();
        assert!((max_speed(&f) * g.time / f.dx - 0.9).abs() < 1e-14);
    }

    #[test]
    fn zero_length_is_identity() {
        let f = constant(8);
        let r = solve(&f, &periodic(0.0), 0).unwrap();
        assert_eq!(r.field, f);
        assert_eq!(r.steps, 0);
    }

    #[test]
    fn rejects_bad_input() {
        let mut f = constant(3);
        assert!(matches!(step(&f, &periodic(1.0)), Err(SolverError::Invalid(_))));
        f = constant(8);
        let cfg = SolverConfig { cfl: 1.5, ..periodic(1.0) };
        assert!(matches!(step(&f, &cfg), Err(SolverError::Invalid(_))));
        f.cells[2].r1 = f64::NAN;
        assert!(matches!(step(&f, &periodic(1.0)), Err(SolverError::BlowUp { cell: 2, .. })));
    }

    fn bump_error(n: usize) -> f64 {
        let sol = ExactSolution::UltraSingular(UltraSingularSolution {
            u0: 0.5,
            v0: 0.0,
            profile: SmoothFn::Sine { amp: 1.0, k: 2.0 * std::f64::consts::PI, phase: 0.0 },
        });
        let init = GridField::from_exact(&sol, 0.0, 1.0, n, 0.0).unwrap();
        let out = solve(&init, &periodic(0.5), 0).unwrap().field;
        l1_error(&out, &sol).unwrap()[2]
    }

    #[test]
    fn advected_bump_converges() {
        let e: Vec<f64> = [64, 128, 256].iter().map(|&n| bump_error(n)).collect();
        for o in observed_orders(&e) {
            assert!((0.8..=1.2).contains(&o), "{e:?}");
        }
    }

    #[test]
    fn quad_regular_first_order() {
        let sol: Arc<dyn Sampler> = Arc::new(ExactSolution::Regular(
            RegularSolution::new(TelegraphFn::single(Mode::Quad), MonotoneFn::Tanh, Rect::new([-10.0, -10.0], [10.0, 10.0])).unwrap(),
        ));
        let cfg = SolverConfig { cfl: 0.9, boundary: Boundary::ExactInflow(sol.clone()), t_end: 1.5 };
        let errs: Vec<f64> = [50, 100, 200]
            .iter()
            .map(|&n| {
                let init = GridField::from_exact(sol.as_ref(), -1.0, 1.0, n, 1.0).unwrap();
                let out = solve(&init, &cfg, 2).unwrap();
                assert_eq!(out.snapshots.len(), 2);
                assert_eq!(out.field.time, 1.5);
                let e = l1_error(&out.field, sol.as_ref()).unwrap();
                e.iter().sum()
            })
            .collect();
        for o in observed_orders(&errs) {
            assert!(o >= 0.8, "{errs:?}");
        }
    }

    #[test]
    fn shifted_gradient_error() {
        let n = 20;
        let (slope, dx) = (3.0, 0.05);
        let mk = |shift: f64| GridField {
            x0: 0.0,
            dx,
            cells: (0..n).map(|i| RiemannState::new(slope * ((i as f64 + 0.5) * dx - shift), 0.0, 0.0)).collect(),
            time: 0.0,
        };
        let e = l1_distance(&mk(0.0), &mk(dx)).unwrap();
        assert!((e[0] - dx * slope * 1.0).abs() < 1e-12);
    }

    #[test]
    fn dhc_drift_is_small() {
        let sol = ExactSolution::UltraSingular(UltraSingularSolution {
            u0: 0.5,
            v0: 0.2,
            profile: SmoothFn::Gaussian { amp: 1.0, center: 0.5, width: 0.1 },
        });
        let init = GridField::from_exact(&sol, 0.0, 1.0, 200, 0.0).unwrap();
        let out = solve(&init, &periodic(1.0), 0).unwrap().field;
        assert!((out.dhc_integral() - init.dhc_integral()).abs() <= init.dx);
    }

    proptest! {
        #[test]
        fn l1_symmetric(a in proptest::collection::vec(-5.0..5.0f64, 12), b in proptest::collection::vec(-5.0..5.0f64, 12)) {
            let mk = |v: &[f64]| GridField {
                x0: 0.0,
                dx: 0.25,
                cells: v.chunks(3).map(|c| RiemannState::new(c[0], c[1], c[2])).collect(),
                time: 0.0,
            };
            let (f, g) = (mk(&a), mk(&b));
            prop_assert_eq!(l1_distance(&f, &g).unwrap(), l1_distance(&g, &f).unwrap());
        }

        #[test]
        fn step_respects_maximum_principle(v in proptest::collection::vec(-1.0..1.0f64, 24)) {
            let f = GridField {
                x0: 0.0,
                dx: 0.1,
                cells: v.chunks(3).map(|c| RiemannState::new(c[0], c[1], c[2])).collect(),
                time: 0.0,
            };
            prop_assert!(step(&f, &periodic(1.0)).is_ok());
        }
    }
}
