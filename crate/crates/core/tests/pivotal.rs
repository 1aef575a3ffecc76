mod common;

use fusion6j_core::builtin::{builtin, fibonacci_ring, rank3_ring, vec_ring};
use fusion6j_core::duality::{choose_mu, dimensions, paired_roots, MuPolicy};
use fusion6j_core::partial::{epsilon_table, EpsilonEntry, EpsilonTable};
use fusion6j_core::pivotal::*;
use fusion6j_core::scalar::{Exact, Field, Float, RootChoice, Scalar};
use fusion6j_core::{CategoryData, Matrix};

fn setup<S: Scalar>(c: &CategoryData<S>, field: Field) -> (fusion6j_core::duality::DimensionTable<S>, fusion6j_core::duality::PairedRoots<S>, EpsilonTable<S>) {
    let mut rc = RootChoice::new(field, c.tol);
    let mu = choose_mu(c, MuPolicy::Balanced, &mut rc).unwrap();
    let dims = dimensions(c, &mu).unwrap();
    let pr = paired_roots(c, &dims, &mut rc).unwrap();
    let t = epsilon_table(c, &pr).unwrap();
    (dims, pr, t)
}

#[test]
fn fibonacci_has_the_trivial_pivotal_structure() {
    let c = builtin::<Exact>("fib", None).unwrap();
    let (_, pr, t) = setup(&c, Field::Tower);
    assert!(pivotal_obstruction(&t).is_empty());
    let out = solve_pivotal(&c, &t, &pr).unwrap();
    let sols = out.solutions();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0].varpi, vec![Exact::one(), Exact::one()]);
    assert!(sols[0].spherical);
    assert!(verify_solution(&c, &t, &sols[0]));
    assert_eq!(fs_indicators(&c, &sols[0]), vec![Exact::one(), Exact::one()]);
}

#[test]
fn semion_has_two_spherical_structures() {
    let c = builtin::<Exact>("pointed:Z2:1", None).unwrap();
    let (_, pr, t) = setup(&c, Field::Tower);
    let out = solve_pivotal(&c, &t, &pr).unwrap();
    let sols = out.solutions();
    assert_eq!(sols.len(), 2);
    let mut nus: Vec<Exact> = sols.iter().map(|s| fs_indicators(&c, s)[1].clone()).collect();
    nus.sort_by_key(|x| x.to_string());
    assert_eq!(nus, vec![Exact::from_i(-1), Exact::one()]);
    for s in sols {
        assert!(s.spherical && verify_solution(&c, &t, s));
    }
}

#[test]
fn pointed_z3_solutions_are_characters() {
    let c = builtin::<Exact>("pointed:Z3:1", None).unwrap();
    let (_, pr, t) = setup(&c, Field::Tower);
    let sols = solve_pivotal(&c, &t, &pr).unwrap();
    let sols = sols.solutions();
    assert_eq!(sols.len(), 3);
    assert_eq!(sols.iter().filter(|s| s.spherical).count(), 1);
    let f = builtin::<Float>("pointed:Z3:1", None).unwrap();
    let (_, pr, t) = setup(&f, Field::C);
    assert_eq!(solve_pivotal(&f, &t, &pr).unwrap().solutions().len(), 3);
}

#[test]
fn synthetic_alpha_dependent_sign_is_an_obstruction() {
    let c = builtin::<Exact>("fib", None).unwrap();
    let (_, pr, mut t) = setup(&c, Field::Tower);
    let k = Matrix::diagonal(vec![Exact::one(), -Exact::one()]);
    t.entries.insert(
        (1, 1, 1),
        EpsilonEntry { m: k.clone(), k, eps: vec![1, -1], basis_change: Matrix::identity(2) },
    );
    assert_eq!(pivotal_obstruction(&t), vec![(1, 1, 1)]);
    assert!(matches!(solve_pivotal(&c, &t, &pr).unwrap(), PivotalOutcome::Obstructed(_)));
}

#[test]
fn inconsistent_signs_are_unsolvable() {
    let c = builtin::<Exact>("fib", None).unwrap();
    let (_, pr, mut t) = setup(&c, Field::Tower);
    // x is self-dual, so varpi_x^2 = 1 contradicts varpi_x^2 = -varpi_1.
    t.entries.get_mut(&(1, 1, 0)).unwrap().eps = vec![-1];
    match solve_pivotal(&c, &t, &pr).unwrap() {
        PivotalOutcome::Unsolvable { witness } => assert!(witness.contains("varpi")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn frobenius_perron_dimensions() {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let fp = fp_dimensions(&vec_ring()).unwrap();
    assert!((fp.dims[0] - 1.0).abs() < 1e-12);
    let fp = fp_dimensions(&fibonacci_ring()).unwrap();
    assert!((fp.dims[1] - golden).abs() < 1e-10);
    let ring = rank3_ring();
    let fp = fp_dimensions(&ring).unwrap();
    assert!((fp.dims[1] - (1.0 + 3f64.sqrt())).abs() < 1e-10);
    assert!((fp.dims[2] - 1.0).abs() < 1e-10);
    assert!(fp.multiplicativity_residual(&ring) < 1e-9);
    let a4 = common::rep_a4();
    let fp = fp_dimensions(a4.ring()).unwrap();
    assert!((fp.dims[3] - 3.0).abs() < 1e-10);
}

#[test]
fn pseudo_unitarity_dichotomy() {
    for (name, expect) in [("fib", true), ("yanglee", false), ("vec", true), ("pointed:Z3:1", true)] {
        let c = builtin::<Float>(name, None).unwrap();
        let (dims, pr, t) = setup(&c, Field::C);
        let fp = fp_dimensions(c.ring()).unwrap();
        let sols = solve_pivotal(&c, &t, &pr).unwrap();
        let v = pseudo_unitarity(&c, &dims.paired, &t, &fp, sols.solutions());
        assert_eq!(v.pseudo_unitary, expect, "{name}: {v:?}");
        assert!(v.pivotal_dims_consistent, "{name}");
        if expect {
            assert_eq!(v.positive_roots_give_trivial_k, Some(true), "{name}");
        }
    }
    let c = builtin::<Float>("yanglee", None).unwrap();
    let (dims, pr, t) = setup(&c, Field::C);
    let fp = fp_dimensions(c.ring()).unwrap();
    let v = pseudo_unitarity(&c, &dims.paired, &t, &fp, solve_pivotal(&c, &t, &pr).unwrap().solutions());
    let (_, paired, fp2) = &v.comparison[1];
    assert!((paired - 0.381966011250105).abs() < 1e-6);
    assert!((fp2 - 2.618033988749895).abs() < 1e-6);
}

#[test]
fn rep_a4_is_spherical_and_pseudo_unitary() {
    let c = common::rep_a4();
    let (dims, pr, t) = setup(&c, Field::C);
    let fp = fp_dimensions(c.ring()).unwrap();
    let sols = solve_pivotal(&c, &t, &pr).unwrap();
    assert!(sols.solutions().iter().any(|s| s.varpi.iter().all(|w| w.is_one(1e-9))));
    let v = pseudo_unitarity(&c, &dims.paired, &t, &fp, sols.solutions());
    assert!(v.pseudo_unitary && v.epsilon_all_plus);
}
