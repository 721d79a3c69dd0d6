//! Acceptance harness: the ten numbered criteria at their stated tolerances,
//! one PASS/FAIL line each.
//!
//! Criterion 6 is red: the first-order flows of `Pv` and `W(w)` are exact
//! solutions of the system, so the flow residual sits at round-off and no
//! exponent exists to fit. Those two generators are listed in
//! `UNATTAINABLE_FLOWS`; the test asserts that they still fail and that
//! everything else passes.

use driftflux::exact_solutions::{ExactSolution, GenHodographSolution, JetMode, Sampler};
use driftflux::report::Check;
use driftflux::scenario::{bundled, Scenario, Suite, Tolerances};
use driftflux::study::compare;
use driftflux::suites::{algebra_checks, orbit_params, run_suite, AlgebraCounts};
use driftflux::verification::orbit::GroupParams;
use driftflux::verification::residual::{residual_on_window, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNATTAINABLE_FLOWS: [&str; 2] = ["Pv", "W(w)"];

struct Outcome {
    id: usize,
    pass: bool,
    detail: String,
}

fn load(name: &str) -> Scenario {
    let s = bundled(name).unwrap_or_else(|e| panic!("{name}: {e}"));
    assert_eq!(s.verify.tolerances, Tolerances::default(), "{name} overrides the acceptance tolerances");
    s
}

fn failures(checks: &[Check]) -> Vec<String> {
    checks.iter().filter(|c| !c.pass).map(|c| format!("{} = {:?}", c.name, c.value)).collect()
}

fn summary(id: usize, checks: &[Check], what: &str) -> Outcome {
    let bad = failures(checks);
    let pass = !checks.is_empty() && bad.is_empty();
    let detail = if pass { format!("{} checks on {what}", checks.len()) } else { format!("{what}: {}", bad.join("; ")) };
    Outcome { id, pass, detail }
}

fn exact_residuals() -> Outcome {
    let names = [
        "quad-regular",
        "exp-regular",
        "singular-plus",
        "singular-minus",
        "ultra-singular",
        "gen-hodograph",
        "reduction-2b",
        "reduction-3",
    ];
    let mut worst = [0.0f64; 2];
    let mut bad = vec![];
    for n in names {
        let s = load(n);
        for (k, (mode, tol)) in [(JetMode::Auto, 1e-8), (JetMode::FiniteDifference { h: 1e-5 }, 1e-5)].into_iter().enumerate() {
            match residual_on_window(&s.solution, &s.window, 64, mode) {
                Ok(r) if r.max <= tol => worst[k] = worst[k].max(r.max),
                Ok(r) => bad.push(format!("{n} {mode:?}: {:.3e}", r.max)),
                Err(e) => bad.push(format!("{n}: {e}")),
            }
        }
    }
    let mut detail = format!("{} scenarios, worst analytic {:.2e}, worst FD {:.2e}", names.len(), worst[0], worst[1]);
    if !bad.is_empty() {
        detail = format!("{detail}; over tolerance: {}", bad.join("; "));
    }
    Outcome { id: 1, pass: bad.is_empty(), detail }
}

fn closed_form() -> Outcome {
    let s = load("quad-regular");
    let w = Window::new([1.0, 2.0], [-1.0, 1.0]);
    let mut worst = 0.0f64;
    for row in w.lattice(64) {
        for (t, x) in row {
            let st = s.solution.state(t, x, None).unwrap();
            worst = worst.max((st.u - t / 2.0).abs()).max((st.v - (t * t / 8.0 - x / 2.0 - 1.0)).abs());
        }
    }
    Outcome { id: 2, pass: worst <= 1e-10, detail: format!("max deviation {worst:.2e} on a 64x64 lattice") }
}

fn representations() -> Outcome {
    let mut worst = 0.0f64;
    for name in ["gen-hodograph", "generic-regular"] {
        let s = load(name);
        let (reg, gh) = match &s.solution {
            ExactSolution::Regular(r) => (s.solution.clone(), ExactSolution::GenHodograph(GenHodographSolution::from_regular(r))),
            ExactSolution::GenHodograph(g) => {
                let quad = load("quad-regular");
                let ExactSolution::Regular(mut r) = quad.solution else { unreachable!() };
                r.w_map = driftflux::telegraph::MonotoneFn::Tanh;
                let r = ExactSolution::Regular(r);
                (r, ExactSolution::GenHodograph(g.clone()))
            }
            _ => unreachable!(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        for _ in 0..100 {
            let (t, x) = (rng.gen_range(s.window.t[0]..=s.window.t[1]), rng.gen_range(s.window.x[0]..=s.window.x[1]));
            let (a, b) = (reg.state(t, x, None).unwrap(), gh.state(t, x, None).unwrap());
            worst = worst.max((a.u - b.u).abs()).max((a.v - b.v).abs()).max((a.w - b.w).abs());
        }
    }
    Outcome { id: 3, pass: worst <= 1e-8, detail: format!("max difference {worst:.2e} over 2 x 100 random points") }
}

fn solver_convergence() -> Outcome {
    let t = compare(&load("quad-regular")).unwrap();
    let dx: Vec<f64> = t.rows.iter().map(|r| r.dx).collect();
    let grids = dx == [1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0];
    let decreasing = t.rows.windows(2).all(|w| w[1].total < w[0].total);
    let pass = grids && decreasing && t.order.is_some_and(|p| (0.8..=1.2).contains(&p));
    let errs: Vec<String> = t.rows.iter().map(|r| format!("{:.3e}", r.total)).collect();
    Outcome { id: 4, pass, detail: format!("L1 {} -> fitted order {:?}", errs.join(", "), t.order) }
}

fn symmetry_group() -> Outcome {
    let mut s = load("quad-regular");
    s.verify.orbits = 20;
    let params = orbit_params(20, s.seed);
    let reflections = params.contains(&GroupParams::time_reflection()) && params.contains(&GroupParams::w_reflection());
    let checks = run_suite(&s, Suite::Orbit);
    let mut o = summary(5, &checks, "20 group elements on quad-regular");
    o.pass &= reflections && checks.len() == 21;
    o
}

/// Returns the outcome and whether only `UNATTAINABLE_FLOWS` failed.
fn symmetry_flows() -> (Outcome, bool) {
    let mut all = vec![];
    for name in ["quad-regular", "generic-regular"] {
        let mut s = load(name);
        s.verify.flows = ["D", "G", "Pv", "W(w)"].map(String::from).to_vec();
        for mut c in run_suite(&s, Suite::Flow) {
            c.name = format!("{name}:{}", c.name);
            all.push(c);
        }
    }
    let unattainable = |c: &Check| UNATTAINABLE_FLOWS.iter().any(|g| c.name.ends_with(&format!("flow/{g}")));
    let expected_red = all.iter().filter(|c| !c.pass).all(unattainable) && all.iter().filter(|c| unattainable(c)).all(|c| !c.pass);
    let fits: Vec<String> = all
        .iter()
        .map(|c| match c.value {
            Some(p) => format!("{} p={p:.3}", c.name),
            None => format!("{} no fit (max residual {:.1e})", c.name, c.samples.iter().fold(0.0f64, |m, v| m.max(*v))),
        })
        .collect();
    let pass = all.iter().all(|c| c.pass);
    (Outcome { id: 6, pass, detail: fits.join("; ") }, expected_red)
}

fn generalized_symmetries() -> Outcome {
    let s = load("quad-regular");
    assert_eq!(s.verify.gensym_jets, 1000);
    let checks = run_suite(&s, Suite::Gensym);
    let n = checks.iter().filter(|c| c.name.starts_with("gensym/")).count();
    let mut o = summary(7, &checks, "1000 random jets");
    o.pass &= n == 5;
    o
}

fn conservation() -> Outcome {
    let names = [
        "quad-regular",
        "generic-regular",
        "exp-regular",
        "singular-plus",
        "singular-minus",
        "gen-hodograph",
        "reduction-2b",
        "reduction-3",
    ];
    let mut checks = vec![];
    for n in names {
        let s = load(n);
        assert!(s.verify.omega_levels >= 2);
        for suite in [Suite::Conservation, Suite::OmegaChain] {
            checks.extend(run_suite(&s, suite).into_iter().map(|mut c| {
                c.name = format!("{n}:{}", c.name);
                c
            }));
        }
    }
    let generic = checks.iter().filter(|c| c.name.starts_with("generic-regular:conservation/") && c.name.ends_with("/divergence")).count();
    let mut o = summary(8, &checks, &format!("{} scenarios", names.len()));
    o.pass &= generic == 6;
    o
}

fn hamiltonian() -> Outcome {
    let mut checks = vec![];
    for n in ["quad-regular", "generic-regular", "singular-plus", "reduction-2b"] {
        let s = load(n);
        assert_eq!((s.verify.points, &s.verify.lambdas[..]), (50, &[0.0, 1.0, -2.0][..]));
        checks.extend(run_suite(&s, Suite::Hamiltonian));
    }
    summary(9, &checks, "lambda in {0, 1, -2} at 50 points on 4 scenarios")
}

fn algebra() -> Outcome {
    let checks = algebra_checks(2024, AlgebraCounts { automorphisms: 100, jacobi: 1000, replays: 200 });
    let families = checks.iter().filter(|c| c.name.starts_with("two-dimensional/") && c.name != "two-dimensional/count").count();
    let megaideals = checks.iter().filter(|c| c.name.starts_with("megaideal/")).count();
    let mut o = summary(10, &checks, "the symmetry algebra");
    o.pass &= families == 17 && megaideals == 6;
    o
}

#[test]
fn acceptance() {
    let (flows, flows_as_expected) = symmetry_flows();
    let outcomes = vec![
        exact_residuals(),
        closed_form(),
        representations(),
        solver_convergence(),
        symmetry_group(),
        flows,
        generalized_symmetries(),
        conservation(),
        hamiltonian(),
        algebra(),
    ];
    for o in &outcomes {
        println!("criterion {:>2}: {} - {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let red: Vec<usize> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(flows_as_expected, "criterion 6 failed outside the unattainable flows");
    assert_eq!(red, vec![6], "unexpected criterion results");
}
