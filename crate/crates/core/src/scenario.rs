//! Scenario files: a solution, the windows and grids it is sampled on,
//! solver settings and the verification suites to run.

use crate::exact_solutions::{ExactError, ExactSolution, GridSpec};
use crate::report::sha256_hex;
use crate::verification::conservation::{standard_currents, ConservedCurrent};
use crate::verification::residual::Window;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// Malformed JSON or schema mismatch; `path` names the offending key.
    #[error("invalid scenario at `{path}`: {msg}")]
    Parse { path: String, msg: String },
    /// Schema-valid but semantically invalid.
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Residual,
    Orbit,
    Flow,
    Gensym,
    Conservation,
    Hamiltonian,
    OmegaChain,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Residual, Suite::Orbit, Suite::Flow, Suite::Gensym, Suite::Conservation, Suite::Hamiltonian, Suite::OmegaChain];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Residual => "residual",
            Suite::Orbit => "orbit",
            Suite::Flow => "flow",
            Suite::Gensym => "gensym",
            Suite::Conservation => "conservation",
            Suite::Hamiltonian => "hamiltonian",
            Suite::OmegaChain => "omega-chain",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH.into_iter().chain([Suite::All]).find(|x| x.name() == s).ok_or_else(|| {
            format!("unknown suite {s:?}; expected one of residual, orbit, flow, gensym, conservation, hamiltonian, omega-chain, all")
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundarySpec {
    /// Ghost cells sampled from the exact solution.
    #[default]
    ExactInflow,
    Periodic,
}

fn default_cfl() -> f64 {
    0.8
}

fn default_compare() -> Vec<usize> {
    vec![64, 128, 256]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub x_range: [f64; 2],
    pub cells: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub boundary: BoundarySpec,
    /// Intermediate snapshots written by `simulate`.
    #[serde(default)]
    pub snapshots: usize,
    /// Cell counts of the convergence study.
    #[serde(default = "default_compare")]
    pub compare_cells: Vec<usize>,
}

/// Acceptance thresholds; defaults are the documented tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub residual_analytic: f64,
    pub residual_fd: f64,
    pub fd_step: f64,
    pub orbit_fd: f64,
    pub group_law: f64,
    pub flow_exponent: [f64; 2],
    pub gensym: f64,
    pub commutator: f64,
    pub pairing: f64,
    pub min_order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual_analytic: 1e-8,
            residual_fd: 1e-5,
            fd_step: 1e-5,
            orbit_fd: 1e-5,
            group_law: 1e-10,
            flow_exponent: [1.8, 2.2],
            gensym: 1e-10,
            commutator: 1e-8,
            pairing: 1e-10,
            min_order: 1.0,
        }
    }
}

fn default_suites() -> Vec<Suite> {
    vec![Suite::All]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifySpec {
    /// Suites run by `verify` when no `--suite` is given.
    pub suites: Vec<Suite>,
    /// The residual suite checks an `n × n` lattice of the window.
    pub lattice: usize,
    /// Interior sample points for difference-based suites.
    pub points: usize,
    /// Generators for the flow suite, e.g. `"D"`, `"G"`, `"W(w)"`.
    pub flows: Vec<String>,
    /// Points per flow test.
    pub flow_points: usize,
    pub orbits: usize,
    pub gensym_jets: usize,
    /// Currents for the conservation suite; absent means the standard six.
    pub currents: Option<Vec<ConservedCurrent>>,
    pub omega_levels: usize,
    pub lambdas: Vec<f64>,
    pub tolerances: Tolerances,
}

impl Default for VerifySpec {
    fn default() -> Self {
        Self {
            suites: default_suites(),
            lattice: 64,
            points: 50,
            flows: vec!["D".into(), "G".into()],
            flow_points: 5,
            orbits: 20,
            gensym_jets: 1000,
            currents: None,
            omega_levels: 2,
            lambdas: vec![0.0, 1.0, -2.0],
            tolerances: Tolerances::default(),
        }
    }
}

impl VerifySpec {
    pub fn currents(&self) -> Vec<ConservedCurrent> {
        self.currents.clone().unwrap_or_else(standard_currents)
    }

    /// Suites selected by the scenario, with `all` expanded.
    pub fn suites_or_each(&self) -> Vec<Suite> {
        if self.suites.contains(&Suite::All) {
            Suite::EACH.to_vec()
        } else {
            Suite::EACH.into_iter().filter(|x| self.suites.contains(x)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default)]
    pub seed: u64,
    pub solution: ExactSolution,
    /// Space-time window where the solution is smooth and single-valued.
    pub window: Window,
    /// Sampling grid for `generate`; defaults to 64 cells and 5 time levels
    /// over the window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSpec>,
    #[serde(default)]
    pub verify: VerifySpec,
    #[serde(default)]
    pub outputs: Outputs,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let s: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ScenarioError::Parse { path, msg: e.into_inner().to_string() }
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.solution.validate()?;
        let w = &self.window;
        if !(w.t[0] < w.t[1] && w.x[0] < w.x[1]) || !w.t.iter().chain(&w.x).all(|v| v.is_finite()) {
            return Err(ScenarioError::Invalid(format!("empty window {w:?}")));
        }
        if let Some(g) = &self.grid {
            g.validate()?;
        }
        if let Some(s) = &self.solver {
            if !(s.t_start <= s.t_end) || s.cells < 4 || !(s.x_range[0] < s.x_range[1]) || s.compare_cells.iter().any(|&c| c < 4) {
                return Err(ScenarioError::Invalid(format!("bad solver settings {s:?}")));
            }
        }
        let v = &self.verify;
        if v.lattice < 2 || v.points == 0 || v.flow_points == 0 {
            return Err(ScenarioError::Invalid("verify.lattice must be ≥ 2 and point counts positive".into()));
        }
        for c in v.currents() {
            c.validate().map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        }
        Ok(())
    }

    pub fn grid(&self) -> GridSpec {
        self.grid.unwrap_or(GridSpec { t_range: self.window.t, t_levels: 5, x_range: self.window.x, cells: 64 })
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("scenario serializes"))
    }
}

/// Directory of the scenarios bundled with the crate.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

/// Loads a bundled scenario by file stem, e.g. `"quad-regular"`.
pub fn bundled(name: &str) -> Result<Scenario, ScenarioError> {
    Scenario::load(&bundled_dir().join(format!("{name}.json")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "q",
        "solution": {"family": "regular", "phi": [{"mode": "quad"}], "validity": {"lo": [-5, -5], "hi": [5, 5]}},
        "window": {"t": [1, 2], "x": [-1, 1]}
    }"#;

    #[test]
    fn minimal_scenario_parses_with_defaults() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(s.verify.suites, vec![Suite::All]);
        assert_eq!(s.grid().cells, 64);
        assert_eq!(s.hash(), Scenario::from_json(MINIMAL).unwrap().hash());
    }

    #[test]
    fn bad_key_is_named() {
        let bad = MINIMAL.replace(r#""x": [-1, 1]"#, r#""x": "wide""#);
        match Scenario::from_json(&bad) {
            Err(ScenarioError::Parse { path, .. }) => assert_eq!(path, "window.x"),
            other => panic!("{other:?}"),
        }
        let bad = MINIMAL.replace(r#""lo": [-5, -5]"#, r#""lo": "x""#);
        match Scenario::from_json(&bad) {
            Err(ScenarioError::Parse { path, msg }) => {
                assert!(path.starts_with("solution") && msg.contains("invalid type"), "{path}: {msg}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn empty_window_rejected() {
        let bad = MINIMAL.replace(r#""t": [1, 2]"#, r#""t": [2, 1]"#);
        assert!(matches!(Scenario::from_json(&bad), Err(ScenarioError::Invalid(_))));
    }
}
