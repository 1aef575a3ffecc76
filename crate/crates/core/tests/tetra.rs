mod common;

use fusion6j_core::builtin::builtin;
use fusion6j_core::duality::{choose_mu, dimensions, paired_roots, user_mu, MuPolicy};
use fusion6j_core::fsym::CodualConvention;
use fusion6j_core::partial::{check_s3, epsilon_table, PartialDuals};
use fusion6j_core::scalar::{Exact, Field, Float, RootChoice, Scalar};
use fusion6j_core::tetra::*;
use fusion6j_core::CategoryData;
use proptest::prelude::*;

const EXACT: &[&str] = &["vec", "fib", "yanglee", "pointed:Z2:1", "pointed:Z3:1", "pointed:Z4:1"];

fn roots() -> RootChoice<Exact> {
    RootChoice::new(Field::Tower, 0.0)
}

fn verdict<S: Scalar>(c: &CategoryData<S>, policy: MuPolicy, rc: &mut RootChoice<S>) -> TetraVerdict {
    let mu = choose_mu(c, policy, rc).unwrap();
    let dims = dimensions(c, &mu).unwrap();
    let pr = paired_roots(c, &dims, rc).unwrap();
    let table = epsilon_table(c, &pr).unwrap();
    let (eig, _) = c.apply_gauge(&table.eigengauge()).unwrap();
    let dims_e = dimensions(&eig, &mu).unwrap();
    let table_e = epsilon_table(&eig, &paired_roots(&eig, &dims_e, rc).unwrap()).unwrap();
    let ctx = TetraContext::new(&eig, mu, rc).unwrap();
    check_tau_identities(&ctx, Some(&table_e), Sampling::auto(c.ring().rank(), 7)).unwrap()
}

#[test]
fn vec_f_is_one_and_taus_permute() {
    let c = builtin::<Exact>("vec", None).unwrap();
    let mut rc = roots();
    let ctx = TetraContext::new(&c, choose_mu(&c, MuPolicy::Balanced, &mut rc).unwrap(), &mut rc).unwrap();
    let b = basis(c.ring(), Side::F);
    assert_eq!(b.len(), 1);
    assert!(ctx.f_basis(&b[0]).is_one(0.0));
    for t in GENERATORS {
        let img = ctx.tau_basis(t, &b[0]).unwrap();
        assert_eq!(img.len(), 1);
        assert!(img.values().all(|x| x.is_one(0.0)));
    }
}

#[test]
fn fibonacci_f_on_unit_channel() {
    // d_x (-a) = 1 since d_x = -1/a.
    let c = builtin::<Exact>("fib", None).unwrap();
    let mut rc = roots();
    let ctx = TetraContext::new(&c, choose_mu(&c, MuPolicy::Balanced, &mut rc).unwrap(), &mut rc).unwrap();
    let b = H4Basis { side: Side::F, labels: [1, 1, 1, 1, 0, 0], mults: [0; 4] };
    assert!(b.is_valid(c.ring()));
    assert_eq!(ctx.f_basis(&b), Exact::one());
    let absent = H4Basis { side: Side::F, labels: [1, 1, 1, 0, 0, 1], mults: [0; 4] };
    assert!(!absent.is_valid(c.ring()));
}

#[test]
fn fibonacci_default_b_is_tetrahedral() {
    let c = builtin::<Exact>("fib", None).unwrap();
    let v = verdict(&c, MuPolicy::Balanced, &mut roots());
    assert!(v.s4_relations_hold && v.f_invariant && v.tau23_invariant, "{v:?}");
    assert_eq!(v.explicit_routes, [true; 3]);
    assert_eq!(v.m_forms, [true; 2]);
    assert_eq!(v.epsilon_forms, Some([true; 2]));
    assert_eq!(v.prefactors_trivial, Some(true));

    let c = c.with_convention(CodualConvention::DimWeighted);
    let mut rc = roots();
    let mu = choose_mu(&c, MuPolicy::Balanced, &mut rc).unwrap();
    let dims = dimensions(&c, &mu).unwrap();
    let table = epsilon_table(&c, &paired_roots(&c, &dims, &mut rc).unwrap()).unwrap();
    let mf = check_mf_reduction(&c, &dims, &table, &mut rc).unwrap();
    assert!(mf.holds, "{mf:?}");
    assert!(mf.relations.iter().all(|r| r.passed > 0));
}

#[test]
fn fibonacci_b_one_breaks_basis_relations_only() {
    let c = builtin::<Exact>("fib", Some("1")).unwrap().with_convention(CodualConvention::DimWeighted);
    let v = verdict(&c, MuPolicy::Balanced, &mut roots());
    assert!(v.s4_relations_hold && v.tau23_invariant, "{v:?}");
    assert_eq!(v.explicit_routes, [true; 3]);
    // The 6j function itself does not see the covector basis choice.
    assert!(v.f_invariant);
    let mut rc = roots();
    let mu = choose_mu(&c, MuPolicy::Balanced, &mut rc).unwrap();
    let dims = dimensions(&c, &mu).unwrap();
    let table = epsilon_table(&c, &paired_roots(&c, &dims, &mut rc).unwrap()).unwrap();
    let mf = check_mf_reduction(&c, &dims, &table, &mut rc).unwrap();
    assert!(mf.preconditions.is_empty());
    assert!(!mf.gauge_condition_holds && !mf.holds);
    assert!(mf.relations.iter().any(|r| r.failed > 0));
    assert!(mf.relation_failures.iter().all(|e| e.labels.iter().filter(|x| *x == "x").count() >= 4));
}

#[test]
fn tau23_route_holds_for_any_b() {
    for b in ["1", "2", "1/3", "sqrt(5)"] {
        let c = builtin::<Exact>("fib", Some(b)).unwrap();
        let mut rc = roots();
        let ctx = TetraContext::new(&c, choose_mu(&c, MuPolicy::AllOnes, &mut rc).unwrap(), &mut rc).unwrap();
        for e in basis(c.ring(), Side::F) {
            assert_eq!(ctx.route23(&e).unwrap(), ctx.f_basis(&e), "b={b} {e:?}");
        }
    }
}

#[test]
fn s4_matches_s3_and_is_mu_independent() {
    for name in EXACT {
        let c = builtin::<Exact>(name, None).unwrap();
        let mut rc = roots();
        let mut holds = Vec::new();
        for policy in [MuPolicy::AllOnes, MuPolicy::Balanced] {
            let mu = choose_mu(&c, policy, &mut rc).unwrap();
            let s3 = check_s3(&c, &PartialDuals::new(&c, &mu).unwrap()).unwrap();
            let ctx = TetraContext::new(&c, mu, &mut rc).unwrap();
            let r = check_s4(&ctx, Sampling::Full).unwrap();
            assert_eq!(r.holds, s3.genuine_s3, "{name} {policy:?}");
            holds.push(r.holds);
            let v = check_tau_identities(&ctx, None, Sampling::Full).unwrap();
            assert!(v.tau23_invariant, "{name}");
            assert_eq!(v.explicit_routes, [true; 3], "{name}");
            assert_eq!(v.m_forms, [true; 2], "{name}");
        }
        // With non-self-dual labels, balanced mu moves the dimensions (for Z3 from (1, w, wbar)
        // to (1, -1, -1)) and the double dual stops being the identity.
        if c.ring().labels().any(|i| c.ring().dual(i) != i) {
            assert_eq!(holds, [true, false]);
        } else {
            assert_eq!(holds[0], holds[1], "{name}");
        }
    }
}

#[test]
fn pointed_with_skewed_mu_fails_s4_with_witness() {
    let c = builtin::<Exact>("pointed:Z3:1", None).unwrap();
    let mut rc = roots();
    let mu = user_mu(&c, vec![Exact::one(), Exact::from_i64(2), Exact::one()]).unwrap();
    let ctx = TetraContext::new(&c, mu, &mut rc).unwrap();
    let r = check_s4(&ctx, Sampling::Full).unwrap();
    assert!(!r.holds);
    assert!(!r.witnesses.is_empty());
}

#[test]
fn yanglee_verdicts_are_consistent() {
    let c = builtin::<Exact>("yanglee", None).unwrap();
    let v = verdict(&c, MuPolicy::Balanced, &mut roots());
    assert!(v.s4_relations_hold);
    assert_eq!(v.epsilon_forms, Some([true; 2]));
    assert_eq!(Some(v.f_invariant), v.prefactors_trivial);
}

#[test]
fn multiplicity_fixture_identities() {
    let c = common::rep_a4();
    let mut rc = RootChoice::<Float>::new(Field::C, 1e-9);
    let v = verdict(&c, MuPolicy::Balanced, &mut rc);
    assert!(v.s4_relations_hold && v.tau23_invariant, "{v:?}");
    assert_eq!(v.explicit_routes, [true; 3]);
    assert_eq!(v.m_forms, [true; 2]);
    assert_eq!(v.epsilon_forms, Some([true; 2]));
    assert_eq!(Some(v.f_invariant), v.prefactors_trivial);
}

#[test]
fn sampling_is_seeded() {
    let c = common::rep_a4();
    let all = basis(c.ring(), Side::F);
    let s = Sampling::Seeded { seed: 3, size: 50 };
    assert_eq!(s.pick(all.clone()), s.pick(all.clone()));
    assert_ne!(s.pick(all.clone()), Sampling::Seeded { seed: 4, size: 50 }.pick(all));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coxeter_relations_on_random_vectors(coeffs in prop::collection::vec(-5i64..5, 1..12)) {
        let c = builtin::<Exact>("fib", None).unwrap();
        let mut rc = roots();
        let ctx = TetraContext::new(&c, choose_mu(&c, MuPolicy::Balanced, &mut rc).unwrap(), &mut rc).unwrap();
        let all = basis(c.ring(), Side::F);
        let v: H4Vector<Exact> = all.iter().zip(&coeffs).filter(|(_, &x)| x != 0)
            .map(|(b, &x)| (*b, Exact::from_i64(x))).collect();
        let w = [Tau::T12, Tau::T23, Tau::T12, Tau::T23, Tau::T12, Tau::T23];
        prop_assert_eq!(ctx.apply(&w, &v).unwrap(), v.clone());
        // F is linear and tau-invariant here.
        let f = ctx.f_function(&v);
        for t in GENERATORS {
            prop_assert_eq!(ctx.f_function(&ctx.tau(t, &v).unwrap()), f.clone());
        }
    }
}
