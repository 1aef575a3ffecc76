mod common;

use fusion6j_core::builtin::builtin;
use fusion6j_core::report::{render_json, render_text, run, Options, Section};
use fusion6j_core::scalar::{Exact, Float, Scalar};

fn all() -> Vec<Section> {
    Section::for_command("report").unwrap()
}

#[test]
fn fib_report_all_pass_and_tetrahedral() {
    let c = builtin::<Exact>("fib", None).unwrap();
    let r = run(&c, &all(), &Options::default());
    assert_eq!(r.exit_code, 0, "{}", render_text(&r));
    assert_eq!(r.verdict("F is tetrahedrally invariant"), Some(true));
    assert_eq!(r.verdict("basis-level tetrahedral relations (multiplicity-free)"), Some(true));
    assert_eq!(r.verdict("pseudo-unitary"), Some(true));
    assert_eq!(r.verdict("S4 relations hold"), Some(true));
    // The criterion-4 identity G° = 1/F° is a reported verdict.
    assert_eq!(r.verdict("G° of i equals 1/F° of i"), Some(false));
    let json: serde_json::Value = serde_json::from_str(&render_json(&r)).unwrap();
    assert_eq!(json["schema"], "v1");
}

#[test]
fn fib_b_one_report() {
    let c = builtin::<Exact>("fib", Some("1")).unwrap();
    let r = run(&c, &all(), &Options::default());
    assert_eq!(r.exit_code, 0, "{}", render_text(&r));
    assert_eq!(r.verdict("S4 relations hold"), Some(true));
    assert_eq!(r.verdict("F is tetrahedrally invariant"), Some(true));
    assert_eq!(r.verdict("basis-level tetrahedral relations (multiplicity-free)"), Some(false));
    assert_eq!(r.check("F(tau23 v) = F(v)"), Some(true));
}

#[test]
fn yanglee_fails_only_pseudo_unitarity() {
    let c = builtin::<Float>("yanglee", None).unwrap();
    let r = run(&c, &all(), &Options::default());
    assert_eq!(r.exit_code, 0, "{}", render_text(&r));
    assert_eq!(r.verdict("pseudo-unitary"), Some(false));
    let pu = &r.pivotal.as_ref().unwrap().pseudo_unitarity;
    let (_, paired, fp2) = &pu.comparison[1];
    assert!((paired - 0.3819660).abs() < 1e-6 && (fp2 - 2.6180340).abs() < 1e-6);
}

#[test]
fn every_builtin_passes_checks_on_both_backends() {
    for name in ["vec", "fib", "yanglee", "pointed:Z2:1", "pointed:Z3:1", "pointed:Z4:1"] {
        let r = run(&builtin::<Exact>(name, None).unwrap(), &all(), &Options::default());
        assert_eq!(r.exit_code, 0, "{}", render_text(&r));
    }
    for name in ["vec", "fib", "yanglee", "pointed:Z2:1", "pointed:Z3:1", "pointed:Z5:2", "pointed:Z6:1"] {
        let r = run(&builtin::<Float>(name, None).unwrap(), &all(), &Options::default());
        assert_eq!(r.exit_code, 0, "{}", render_text(&r));
    }
}

#[test]
fn multiplicity_fixture_report() {
    let r = run(&common::rep_a4(), &all(), &Options::default());
    assert_eq!(r.exit_code, 0, "{}", render_text(&r));
    assert!(r.tetra.as_ref().unwrap().s4_balanced.sampled);
}

#[test]
fn broken_pentagon_exits_one() {
    let c = builtin::<Exact>("fib", None).unwrap();
    let mut f = c.block(1, 1, 1, 1).unwrap().f.clone();
    f[(0, 0)] = f[(0, 0)].clone() + Exact::from_i64(1);
    let bad = c.with_block([1, 1, 1, 1], f).unwrap();
    let r = run(&bad, &Section::for_command("pentagon").unwrap(), &Options::default());
    assert_eq!(r.exit_code, 1);
    assert!(r.pentagon.unwrap().first_violation.is_some());
}
