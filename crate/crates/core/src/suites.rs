//! Verification suites run against a scenario, and the exact algebra checks.

use crate::exact_solutions::{JetMode, Sampler};
use crate::lie_algebra::{self as lie, canonicalize_1d, commutator, megaideal_closure, replay, sample, standard, Basis, GVector, LieError};
use crate::model::to_riemann;
use crate::report::{Check, Report, Threshold};
use crate::scenario::{Scenario, Suite};
use crate::verification::conservation::{conservation_check, omega_chain, pairing_check};
use crate::verification::flow::{flow_order_test, FlowGenerator, FlowSettings};
use crate::verification::gensym::{check_table, random_jet, standard_characteristics};
use crate::verification::hamiltonian::hamiltonian_check;
use crate::verification::orbit::{GroupParams, Orbit};
use crate::verification::residual::{residual_on_window, Window};
use crate::verification::VerifyError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Deterministic points in the window shrunk by 10% on each side.
pub fn interior_points(w: &Window, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shrink = |r: [f64; 2]| {
        let m = 0.1 * (r[1] - r[0]);
        [r[0] + m, r[1] - m]
    };
    let (t, x) = (shrink(w.t), shrink(w.x));
    (0..n).map(|_| (rng.gen_range(t[0]..=t[1]), rng.gen_range(x[0]..=x[1]))).collect()
}

fn or_error(name: &str, threshold: Threshold, r: Result<Check, VerifyError>) -> Check {
    r.unwrap_or_else(|e| Check::error(name, threshold, e.to_string()))
}

fn residual_suite(s: &Scenario) -> Vec<Check> {
    let tol = &s.verify.tolerances;
    let n = s.verify.lattice;
    let modes = [
        ("residual/analytic", JetMode::Auto, tol.residual_analytic),
        ("residual/fd", JetMode::FiniteDifference { h: tol.fd_step }, tol.residual_fd),
    ];
    modes
        .into_iter()
        .map(|(name, mode, max)| {
            or_error(
                name,
                Threshold::Max { max },
                residual_on_window(&s.solution, &s.window, n, mode)
                    .map(|r| Check::max(name, r.max, max).with_note(format!("{n}x{n} lattice, worst at {:?}", r.worst))),
            )
        })
        .collect()
}

/// The two reflections followed by random elements.
pub fn orbit_params(n: usize, seed: u64) -> Vec<GroupParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![GroupParams::time_reflection(), GroupParams::w_reflection()];
    while out.len() < n.max(2) {
        out.push(GroupParams::random(&mut rng));
    }
    out.truncate(n.max(2));
    out
}

fn orbit_suite(s: &Scenario) -> Vec<Check> {
    let tol = &s.verify.tolerances;
    let pts = interior_points(&s.window, 9, s.seed);
    let params = orbit_params(s.verify.orbits, s.seed);
    let fd = JetMode::FiniteDifference { h: tol.fd_step };
    let mut checks: Vec<Check> = params
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let name = format!("orbit/{i}/residual");
            let r = (|| {
                let o = Orbit::new(&s.solution, g.clone())?;
                let mut worst = 0.0f64;
                for &(t, x) in &pts {
                    let (tt, xt) = g.forward(t, x);
                    let j = o.jet(tt, xt, None, fd)?;
                    worst = crate::model::residual_uvw(&j).iter().fold(worst, |m, v| m.max(v.abs()));
                }
                Ok(Check::max(&name, worst, tol.orbit_fd))
            })();
            or_error(&name, Threshold::Max { max: tol.orbit_fd }, r)
        })
        .collect();
    let law = (|| {
        let mut worst = 0.0f64;
        for pair in params.windows(2) {
            let (a, b) = (&pair[1], &pair[0]);
            let inner = Orbit::new(&s.solution, b.clone())?;
            let twice = Orbit::new(&inner, a.clone())?;
            let once = Orbit::new(&s.solution, a.after(b))?;
            for &(t, x) in &pts {
                let (tt, xt) = a.forward(b.forward(t, x).0, b.forward(t, x).1);
                let (p, q) = (twice.state(tt, xt, None)?, once.state(tt, xt, None)?);
                let d = [p.u - q.u, p.v - q.v, p.w - q.w];
                let scale = 1.0 + q.u.abs().max(q.v.abs()).max(q.w.abs());
                worst = d.iter().fold(worst, |m, v| m.max(v.abs() / scale));
            }
        }
        Ok(Check::max("orbit/group-law", worst, tol.group_law))
    })();
    checks.push(or_error("orbit/group-law", Threshold::Max { max: tol.group_law }, law));
    checks
}

fn flow_suite(s: &Scenario) -> Vec<Check> {
    let [lo, hi] = s.verify.tolerances.flow_exponent;
    let pts = interior_points(&s.window, s.verify.flow_points, s.seed ^ 0xF10);
    s.verify
        .flows
        .par_iter()
        .map(|name| {
            let label = format!("flow/{name}");
            let th = Threshold::Range { lo, hi };
            let g = match GVector::parse(name) {
                Ok(v) => FlowGenerator::from_gvector(&v),
                Err(e) => return Check::error(&label, th, e.to_string()),
            };
            match flow_order_test(&s.solution, &g, &pts, &FlowSettings::default()) {
                Ok(f) => {
                    let c = Check::range(&label, f.exponent, lo, hi).with_samples(f.residuals.clone());
                    if f.inconclusive {
                        c.with_note("inconclusive: residuals at round-off, the first-order flow is itself an exact solution")
                    } else {
                        c
                    }
                }
                Err(e) => Check::error(&label, th, e.to_string()),
            }
        })
        .collect()
}

fn gensym_suite(s: &Scenario) -> Vec<Check> {
    let tol = &s.verify.tolerances;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ 0x6E5);
    let jets: Vec<_> = (0..s.verify.gensym_jets.max(1)).map(|_| random_jet(&mut rng)).collect();
    let mut out: Vec<Check> = standard_characteristics()
        .into_par_iter()
        .map(|(name, c)| {
            let label = format!("gensym/{name}");
            let r =
                jets.iter().try_fold(0.0f64, |m, j| Ok::<_, VerifyError>(c.determining_residual(j)?.iter().fold(m, |m, v| m.max(v.abs()))));
            or_error(&label, Threshold::Max { max: tol.gensym }, r.map(|v| Check::max(&label, v, tol.gensym)))
        })
        .collect();
    let table_jets = &jets[..jets.len().min(200)];
    match check_table(table_jets) {
        Ok(rows) => out.extend(rows.into_iter().map(|e| Check::max(format!("commutator/{}", e.name), e.error, tol.commutator))),
        Err(e) => out.push(Check::error("commutator", Threshold::Max { max: tol.commutator }, e.to_string())),
    }
    out
}

fn conservation_suite(s: &Scenario) -> Vec<Check> {
    let v = &s.verify;
    let tol = &v.tolerances;
    let pts = interior_points(&s.window, v.points, s.seed ^ 0xC0);
    let states: Vec<_> = pts.iter().filter_map(|&(t, x)| s.solution.state(t, x, None).ok().map(|st| (t, x, to_riemann(st)))).collect();
    let ord = Threshold::Order { min: tol.min_order };
    v.currents()
        .par_iter()
        .flat_map_iter(|c| {
            let n = c.name();
            let mut out = vec![];
            match conservation_check(&s.solution, c, &pts, (s.window.t, s.window.x), JetMode::Auto) {
                Ok(r) => {
                    out.push(Check::order(format!("conservation/{n}/divergence"), &r.divergence, tol.min_order));
                    out.push(Check::order(format!("conservation/{n}/integral"), &r.drift, tol.min_order));
                }
                Err(e) => out.push(Check::error(format!("conservation/{n}"), ord.clone(), e.to_string())),
            }
            if let Some(p) = pairing_check(c, &states) {
                out.push(Check::max(format!("pairing/{n}/gradient"), p.gradient, tol.pairing));
                out.push(Check::max(format!("pairing/{n}/flux"), p.flux, tol.pairing));
            }
            out
        })
        .collect()
}

fn hamiltonian_suite(s: &Scenario) -> Vec<Check> {
    let v = &s.verify;
    let pts = interior_points(&s.window, v.points, s.seed ^ 0x4A);
    v.lambdas
        .par_iter()
        .map(|&l| {
            let name = format!("hamiltonian/lambda={l}");
            let th = Threshold::Order { min: v.tolerances.min_order };
            or_error(
                &name,
                th,
                hamiltonian_check(&s.solution, l, &pts, JetMode::Auto).map(|r| Check::order(&name, &r, v.tolerances.min_order)),
            )
        })
        .collect()
}

fn omega_suite(s: &Scenario) -> Vec<Check> {
    let v = &s.verify;
    let pts = interior_points(&s.window, v.points.min(10), s.seed ^ 0x03);
    (0..=v.omega_levels)
        .into_par_iter()
        .map(|iota| {
            let name = format!("omega-chain/{iota}");
            let th = Threshold::Order { min: v.tolerances.min_order };
            or_error(&name, th, omega_chain(&s.solution, iota, &pts).map(|r| Check::order(&name, &r, v.tolerances.min_order)))
        })
        .collect()
}

pub fn run_suite(s: &Scenario, suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Residual => residual_suite(s),
        Suite::Orbit => orbit_suite(s),
        Suite::Flow => flow_suite(s),
        Suite::Gensym => gensym_suite(s),
        Suite::Conservation => conservation_suite(s),
        Suite::Hamiltonian => hamiltonian_suite(s),
        Suite::OmegaChain => omega_suite(s),
        Suite::All => s.verify.suites_or_each().into_iter().flat_map(|x| run_suite(s, x)).collect(),
    }
}

/// Runs `suite` and wraps the checks in a report.
pub fn verify(s: &Scenario, suite: Suite) -> Report {
    Report::new(&s.name, s.hash(), suite.name(), run_suite(s, suite))
}

/// Sample sizes of the algebra checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraCounts {
    pub automorphisms: usize,
    pub jacobi: usize,
    pub replays: usize,
}

impl Default for AlgebraCounts {
    fn default() -> Self {
        Self { automorphisms: 100, jacobi: 1000, replays: 200 }
    }
}

fn lie_check(name: &str, r: Result<bool, LieError>) -> Check {
    match r {
        Ok(p) => Check::exact(name, p),
        Err(e) => Check::error(name, Threshold::Exact, e.to_string()),
    }
}

/// Exact checks of the structure of the symmetry algebra.
pub fn algebra_checks(seed: u64, n: AlgebraCounts) -> Vec<Check> {
    use standard::*;
    let mut out = vec![];
    out.push(lie_check(
        "derived-series/g",
        g().derived_series().map(|s| s.len() == 3 && s[1].same_as(&g_prime()) && s[2].same_as(&w_ideal())),
    ));
    out.push(lie_check(
        "derived-series/radical",
        radical().derived_series().map(|s| s.len() == 3 && s[1].same_as(&r_prime()) && s[2].is_zero()),
    ));
    out.push(lie_check("center/g", g().center().map(|c| c.same_as(&center_g()))));
    out.push(Check::exact("radical", lie::radical_check(&radical())));
    out.push(Check::exact("nilradical", lie::nilradical_check(&nilradical())));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let auts: Vec<_> = (0..n.automorphisms).map(|_| sample::aut_matrix(&mut rng)).collect();
    for (name, m) in megaideal_list() {
        out.push(Check::exact(format!("megaideal/{name}"), m.is_ideal_of(&g()) && auts.iter().all(|a| a.preserves(&m))));
    }
    out.push(lie_check("megaideal-closure/m1", megaideal_closure(&radical(), &radical(), &n_prime()).map(|m| m.same_as(&m1()))));
    out.push(Check::exact("automorphisms/brackets", auts.iter().all(|a| a.preserves_brackets())));
    let jacobi = (0..n.jacobi).all(|_| {
        let (x, y, z) = (sample::vector(&mut rng, 3), sample::vector(&mut rng, 3), sample::vector(&mut rng, 3));
        commutator(&x, &commutator(&y, &z)).add(&commutator(&y, &commutator(&z, &x))).add(&commutator(&z, &commutator(&x, &y))).is_zero()
    });
    out.push(Check::exact("jacobi", jacobi));
    let replays: Result<bool, LieError> = (0..n.replays).try_fold(true, |ok, _| {
        let x = sample::nonzero_vector(&mut rng, 3);
        let c = canonicalize_1d(&x)?;
        Ok(ok && replay(&c.witness, &x)? == c.canonical.vector().scale(&c.scale))
    });
    out.push(lie_check("canonicalize/replay", replays));
    let fams = lie::verify_2d_list();
    out.push(Check::exact("two-dimensional/count", fams.len() == lie::FAMILY_COUNT));
    for f in fams {
        out.push(Check::exact(format!("two-dimensional/{}", f.id), f.closed));
    }
    out
}

/// Nonzero brackets of basis elements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureConstant {
    pub left: &'static str,
    pub right: &'static str,
    pub result: String,
}

pub fn structure_constants() -> Vec<StructureConstant> {
    let mut out = vec![];
    for a in Basis::ALL {
        for b in Basis::ALL {
            let c = commutator(&GVector::basis(a), &GVector::basis(b));
            if !c.is_zero() {
                out.push(StructureConstant { left: a.name(), right: b.name(), result: c.to_string() });
            }
        }
    }
    out
}

/// Named subspaces of the algebra, for display.
pub fn named_subspaces() -> Vec<(&'static str, String)> {
    use standard::*;
    let mut v = vec![("g", g().to_string()), ("g'", g_prime().to_string()), ("nilradical", nilradical().to_string())];
    v.extend(megaideal_list().into_iter().map(|(n, s)| (n, s.to_string())));
    v.push(("m2", m2().to_string()));
    v
}

/// Output of the `algebra` command: the exact checks plus the bracket table
/// and named subspaces they refer to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub report: Report,
    pub structure_constants: Vec<StructureConstant>,
    pub subspaces: Vec<(&'static str, String)>,
}

pub fn algebra_report(seed: u64, n: AlgebraCounts) -> AlgebraReport {
    let label = format!("algebra seed={seed} auts={} jacobi={} replays={}", n.automorphisms, n.jacobi, n.replays);
    AlgebraReport {
        report: Report::new("algebra", crate::report::sha256_hex(label.as_bytes()), "algebra", algebra_checks(seed, n)),
        structure_constants: structure_constants(),
        subspaces: named_subspaces(),
    }
}

/// Canonical form of a one-dimensional subalgebra, for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalForm {
    pub input: String,
    pub family: usize,
    pub family_name: String,
    pub a: String,
    pub b: String,
    pub delta1: bool,
    pub delta2: bool,
    pub canonical: String,
    pub scale: String,
    pub witness: Vec<String>,
    /// Replaying the witness reproduces `scale · canonical` exactly.
    pub replay_exact: bool,
}

pub fn canonical_form(expr: &str) -> Result<CanonicalForm, LieError> {
    let x = GVector::parse(expr)?;
    let c = canonicalize_1d(&x)?;
    let replay_exact = replay(&c.witness, &x)? == c.canonical.vector().scale(&c.scale);
    Ok(CanonicalForm {
        input: x.to_string(),
        family: c.canonical.family.id(),
        family_name: format!("{:?}", c.canonical.family),
        a: lie::format_q(&c.canonical.a),
        b: lie::format_q(&c.canonical.b),
        delta1: c.canonical.delta1,
        delta2: c.canonical.delta2,
        canonical: c.canonical.vector().to_string(),
        scale: lie::format_q(&c.scale),
        witness: c.witness.iter().map(|w| w.to_string()).collect(),
        replay_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_of_example() {
        let c = canonical_form("D+3Pt+2Px").unwrap();
        assert_eq!(c.family, 1);
        assert_eq!((c.a.as_str(), c.b.as_str()), ("0", "0"));
        assert!(c.replay_exact);
    }

    #[test]
    fn algebra_checks_pass() {
        let checks = algebra_checks(3, AlgebraCounts { automorphisms: 10, jacobi: 50, replays: 20 });
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn reflections_lead_orbit_params() {
        let p = orbit_params(5, 1);
        assert_eq!(p.len(), 5);
        assert_eq!(p[0], GroupParams::time_reflection());
        assert_eq!(p[1], GroupParams::w_reflection());
    }

    #[test]
    fn interior_points_are_deterministic() {
        let w = Window::new([1.0, 2.0], [-1.0, 1.0]);
        let a = interior_points(&w, 10, 4);
        assert_eq!(a, interior_points(&w, 10, 4));
        assert!(a.iter().all(|&(t, x)| (1.1..=1.9).contains(&t) && (-0.8..=0.8).contains(&x)));
    }
}
