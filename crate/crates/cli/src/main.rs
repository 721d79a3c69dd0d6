//! `driftflux` command line: sample exact solutions, run the upwind solver,
//! verify scenarios and query the symmetry algebra.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! errors, unreadable or malformed scenarios, and evaluation failures.

use clap::{Args, Parser, Subcommand};
use driftflux::scenario::{bundled_dir, Scenario, ScenarioError, Suite};
use driftflux::study::{self, SolverOverrides};
use driftflux::suites::{algebra_report, canonical_form, verify, AlgebraCounts};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "driftflux", version, about = "Exact solutions and symmetry checks for the no-slip drift flux model")]
struct Cli {
    /// Scenario JSON file, or the name of a bundled scenario.
    #[arg(long, global = true)]
    scenario: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the exact solution on the scenario grid as CSV.
    Generate,
    /// Evolve the initial data with the upwind solver; CSV of every frame.
    Simulate(SimulateArgs),
    /// Run verification suites and write a JSON report.
    Verify(VerifyArgs),
    /// Grid convergence table of the solver against the exact solution.
    Compare,
    /// Exact checks of the symmetry algebra, or the canonical form of one element.
    Algebra(AlgebraArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    snapshots: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// One of residual, orbit, flow, gensym, conservation, hamiltonian, omega-chain, all.
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Report path; falls back to `--out`, then the scenario's `outputs.report`.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    /// Element such as `D+3Pt+2Px` to bring to canonical form.
    #[arg(long)]
    canonicalize: Option<String>,
}

/// A failure with its exit code.
struct Failure(u8, String);

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure(2, e.to_string())
    }
}

fn load(cli: &Cli) -> Result<Scenario, Failure> {
    let arg = cli.scenario.as_deref().ok_or_else(|| Failure(2, "--scenario is required for this command".into()))?;
    let path = Path::new(arg);
    let bundled = bundled_dir().join(format!("{arg}.json"));
    let path = if !path.exists() && !arg.contains(['/', '\\']) && bundled.exists() { bundled.as_path() } else { path };
    let mut s = Scenario::load(path)?;
    if let Some(seed) = cli.seed {
        s.seed = seed;
    }
    Ok(s)
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure(2, format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize") + "\n"
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Generate => {
            let s = load(cli)?;
            let csv = study::generate(&s).map_err(|e| Failure(2, e.to_string()))?;
            write(cli.out.as_deref().or(s.outputs.csv.as_deref()), &csv)?;
            Ok(true)
        }
        Command::Simulate(a) => {
            let s = load(cli)?;
            let over = SolverOverrides { cells: a.cells, cfl: a.cfl, t_end: a.t_end, snapshots: a.snapshots };
            let sim = study::simulate(&s, &over).map_err(|e| Failure(2, e.to_string()))?;
            let out = cli.out.as_deref().or(s.outputs.csv.as_deref());
            write(out, &study::fields_csv(&sim.frames))?;
            let table = json(&sim.errors);
            if out.is_some() {
                print!("{table}");
            } else {
                eprint!("{table}");
            }
            Ok(true)
        }
        Command::Verify(a) => {
            let s = load(cli)?;
            let r = verify(&s, a.suite);
            write(a.report.as_deref().or(cli.out.as_deref()).or(s.outputs.report.as_deref()), &json(&r))?;
            for c in r.failures() {
                eprintln!("FAIL {} value={:?} {}", c.name, c.value, c.note.as_deref().unwrap_or(""));
            }
            Ok(r.overall)
        }
        Command::Compare => {
            let s = load(cli)?;
            let t = study::compare(&s).map_err(|e| Failure(2, e.to_string()))?;
            write(cli.out.as_deref(), &json(&t))?;
            Ok(true)
        }
        Command::Algebra(a) => match &a.canonicalize {
            Some(expr) => {
                let c = canonical_form(expr).map_err(|e| Failure(2, e.to_string()))?;
                write(cli.out.as_deref(), &json(&c))?;
                Ok(c.replay_exact)
            }
            None => {
                let r = algebra_report(cli.seed.unwrap_or(0), AlgebraCounts::default());
                write(cli.out.as_deref(), &json(&r))?;
                Ok(r.report.overall)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
