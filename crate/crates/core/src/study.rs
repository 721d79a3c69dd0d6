//! Solver runs driven by a scenario: trajectories with their error against
//! the exact solution, grid convergence studies, and CSV output.

use crate::exact_solutions::{ExactError, ExactSolution, JetMode, Sampler};
use crate::model::{from_riemann, RiemannState};
use crate::numeric_solver::{l1_error, solve, Boundary, GridField, SolverConfig, SolverError};
use crate::scenario::{BoundarySpec, Scenario, SolverSpec};
use crate::verification::fit_order;
use serde::Serialize;
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    /// The scenario has no `solver` block.
    #[error("scenario `{0}` has no solver settings")]
    NoSolver(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Command-line overrides of the scenario's solver settings.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolverOverrides {
    pub cells: Option<usize>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub snapshots: Option<usize>,
}

impl SolverOverrides {
    pub fn apply(&self, s: &SolverSpec) -> SolverSpec {
        let mut out = s.clone();
        out.cells = self.cells.unwrap_or(s.cells);
        out.cfl = self.cfl.unwrap_or(s.cfl);
        out.t_end = self.t_end.unwrap_or(s.t_end);
        out.snapshots = self.snapshots.unwrap_or(s.snapshots);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    pub t: f64,
    pub cells: usize,
    pub dx: f64,
    /// L1 error of `r1, r2, r3`.
    pub l1: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    /// The initial field followed by every snapshot; the last is at `t_end`.
    pub frames: Vec<GridField>,
    pub errors: Vec<ErrorRow>,
    pub steps: usize,
}

fn solver_spec(s: &Scenario) -> Result<&SolverSpec, StudyError> {
    s.solver.as_ref().ok_or_else(|| StudyError::NoSolver(s.name.clone()))
}

fn config(sol: &Arc<ExactSolution>, spec: &SolverSpec) -> SolverConfig {
    let boundary = match spec.boundary {
        BoundarySpec::ExactInflow => Boundary::ExactInflow(sol.clone() as Arc<dyn Sampler>),
        BoundarySpec::Periodic => Boundary::Periodic,
    };
    SolverConfig { cfl: spec.cfl, boundary, t_end: spec.t_end }
}

fn run(sol: &Arc<ExactSolution>, spec: &SolverSpec, cells: usize) -> Result<(Vec<GridField>, usize), StudyError> {
    let [x0, x1] = spec.x_range;
    let init = GridField::from_exact(sol.as_ref(), x0, x1, cells, spec.t_start)?;
    let out = solve(&init, &config(sol, spec), spec.snapshots)?;
    let mut frames = vec![init];
    if out.snapshots.is_empty() {
        frames.push(out.field);
    } else {
        frames.extend(out.snapshots);
    }
    Ok((frames, out.steps))
}

/// Evolves the scenario's initial data and measures the error of each frame.
pub fn simulate(s: &Scenario, over: &SolverOverrides) -> Result<Simulation, StudyError> {
    let spec = over.apply(solver_spec(s)?);
    let sol = Arc::new(s.solution.clone());
    let (frames, steps) = run(&sol, &spec, spec.cells)?;
    let errors = frames
        .iter()
        .map(|f| Ok(ErrorRow { t: f.time, cells: f.cells.len(), dx: f.dx, l1: l1_error(f, sol.as_ref())? }))
        .collect::<Result<Vec<_>, StudyError>>()?;
    Ok(Simulation { frames, errors, steps })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub cells: usize,
    pub dx: f64,
    pub l1: [f64; 3],
    /// Sum of the component errors.
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub scenario: String,
    pub t_end: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Fitted order per component; absent when a component is exact.
    pub orders: [Option<f64>; 3],
    /// Fitted order of the total error.
    pub order: Option<f64>,
}

/// L1 error at `t_end` on each of the scenario's `compare_cells` grids.
pub fn compare(s: &Scenario) -> Result<ConvergenceTable, StudyError> {
    let spec = solver_spec(s)?;
    let sol = Arc::new(s.solution.clone());
    let mut spec = spec.clone();
    spec.snapshots = 0;
    let rows = spec
        .compare_cells
        .iter()
        .map(|&n| {
            let (frames, _) = run(&sol, &spec, n)?;
            let last = frames.last().expect("run returns the final frame");
            let l1 = l1_error(last, sol.as_ref())?;
            Ok(ConvergenceRow { cells: n, dx: last.dx, l1, total: l1.iter().sum() })
        })
        .collect::<Result<Vec<_>, StudyError>>()?;
    let dx: Vec<f64> = rows.iter().map(|r| r.dx).collect();
    let fit = |e: Vec<f64>| fit_order(&dx, &e).ok();
    let orders = [0, 1, 2].map(|k| fit(rows.iter().map(|r| r.l1[k]).collect()));
    let order = fit(rows.iter().map(|r| r.total).collect());
    Ok(ConvergenceTable { scenario: s.name.clone(), t_end: spec.t_end, rows, orders, order })
}

pub const CSV_HEADER: &str = "t,x,u,v,w,r1,r2,r3";

fn push_row(out: &mut String, t: f64, x: f64, r: RiemannState) {
    let s = from_riemann(r);
    let vals = [t, x, s.u, s.v, s.w, r.r1, r.r2, r.r3];
    for (i, v) in vals.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{v:.16e}").expect("writing to a String");
    }
    out.push('\n');
}

/// CSV of grid fields, one row per cell, 17 significant digits.
pub fn fields_csv<'a>(frames: impl IntoIterator<Item = &'a GridField>) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for f in frames {
        for (i, c) in f.cells.iter().enumerate() {
            push_row(&mut out, f.time, f.center(i), *c);
        }
    }
    out
}

/// Samples the exact solution on the scenario grid.
pub fn generate(s: &Scenario) -> Result<String, ExactError> {
    let rows = crate::exact_solutions::sample_to_grid(&s.solution, &s.grid(), JetMode::Auto)?;
    Ok(fields_csv(rows.iter().map(|r| &r.field)))
}
