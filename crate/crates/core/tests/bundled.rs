//! Every bundled scenario parses, validates and passes its own suites.

use driftflux::scenario::{bundled_dir, Scenario, Suite};
use driftflux::study::compare;
use driftflux::suites::verify;

fn all() -> Vec<Scenario> {
    let mut paths: Vec<_> = std::fs::read_dir(bundled_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .iter()
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| Scenario::load(p).unwrap_or_else(|e| panic!("{}: {e}", p.display())))
        .collect()
}

#[test]
fn names_match_file_stems() {
    let mut paths: Vec<_> = std::fs::read_dir(bundled_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for p in paths {
        let s = Scenario::load(&p).unwrap();
        assert_eq!(p.file_stem().unwrap().to_str().unwrap(), s.name);
    }
}

#[test]
fn every_family_and_suite_is_covered() {
    let s = all();
    for fam in ["regular", "singular", "ultra-singular", "gen-hodograph", "reduction"] {
        assert!(s.iter().any(|x| x.solution.name() == fam), "{fam}");
    }
    for suite in Suite::EACH {
        assert!(s.iter().any(|x| x.verify.suites_or_each().contains(&suite)), "{suite}");
    }
}

#[test]
fn bundled_scenarios_pass() {
    for s in all() {
        let r = verify(&s, Suite::All);
        let failed: Vec<_> = r.failures().map(|c| format!("{} {:?} {:?}", c.name, c.value, c.note)).collect();
        assert!(r.overall, "{}: {failed:#?}", s.name);
    }
}

#[test]
fn solver_blocks_converge() {
    for s in all().into_iter().filter(|s| s.solver.is_some()) {
        let t = compare(&s).unwrap();
        assert!(t.rows.windows(2).all(|w| w[1].total <= w[0].total), "{}: {t:?}", s.name);
    }
}
