use fusion6j_core::builtin::builtin;
use fusion6j_core::duality::{choose_mu, dimensions, paired_roots, user_mu, MuPolicy};
use fusion6j_core::partial::*;
use fusion6j_core::scalar::{Exact, Field, RootChoice, Scalar};
use fusion6j_core::CategoryData;

const EXACT: &[&str] = &["vec", "fib", "yanglee", "pointed:Z2:1", "pointed:Z3:1", "pointed:Z4:1", "pointed:Z6:1"];

fn ex(s: &str) -> Exact {
    Exact::parse_scalar(s).unwrap()
}

fn roots() -> RootChoice<Exact> {
    RootChoice::new(Field::Tower, 0.0)
}

#[test]
fn fibonacci_m_matrix_is_minus_a() {
    for (name, a) in [("fib", "1/2-1/2*sqrt(5)"), ("yanglee", "1/2+1/2*sqrt(5)")] {
        let c = builtin::<Exact>(name, None).unwrap();
        let m = m_matrix(&c, 1, 1, 1).unwrap();
        assert_eq!(m[(0, 0)], -ex(a));
        assert_eq!(m_matrix(&c, 1, 0, 1).unwrap()[(0, 0)], Exact::one());
    }
}

#[test]
fn unmodified_squares_are_special_symbols() {
    for name in EXACT {
        let c = builtin::<Exact>(name, None).unwrap();
        let ring = c.ring();
        for space in HomSpaceRef::all(ring) {
            let l = partial_map(&c, Dual::L, space).unwrap();
            let ll = partial_map(&c, Dual::L, l.target).unwrap().after(&l).unwrap();
            let r = partial_map(&c, Dual::R, space).unwrap();
            let rr = partial_map(&c, Dual::R, r.target).unwrap().after(&r).unwrap();
            let n = space.dim(ring);
            let id = fusion6j_core::Matrix::<Exact>::identity(n);
            // On Hbar_{ij}^k: L^2 = F°_i and R^2 = G°_j.
            let (lf, rf) = match space.orientation {
                Orientation::FromK => (c.fo(space.i), c.go(space.j)),
                Orientation::ToK => (c.fo(ring.dual(space.i)), c.go(ring.dual(space.j))),
            };
            assert_eq!(ll.matrix, id.scale(&lf), "{name} {space:?}");
            assert_eq!(rr.matrix, id.scale(&rf), "{name} {space:?}");
        }
    }
}

fn pipeline(c: &CategoryData<Exact>, policy: MuPolicy) {
    let mut rc = roots();
    let mu = choose_mu(c, policy, &mut rc).unwrap();
    let dims = dimensions(c, &mu).unwrap();
    let duals = PartialDuals::new(c, &mu).unwrap();
    let ring = c.ring();
    for space in HomSpaceRef::all(ring) {
        let dd = double_dual_map(c, &duals, &dims, space).unwrap();
        assert!(dd.matches_closed_form, "{} {space:?}", c.name);
        assert!(dd.quadruple_ok, "{} {space:?}", c.name);
        let left = left_double_dual(&duals, space).unwrap();
        assert_eq!(left.matrix, left_double_dual_closed_form(c, &dims, space).unwrap());
        if space.orientation == Orientation::ToK {
            let it = iterated_rl(c, &mu, &duals, space).unwrap();
            assert!(it.rl_matches && it.lr_matches && it.inverse_pair, "{} {space:?}", c.name);
            assert_eq!(it.rl3.matrix, left.matrix);
        }
    }
    let s3 = check_s3(c, &duals).unwrap();
    assert!(s3.l_squared_identity && s3.r_squared_identity, "{}", c.name);
    assert_eq!(s3.braid_relation, s3.double_dual_identity, "{}", c.name);
    let pr = paired_roots(c, &dims, &mut rc).unwrap();
    let table = epsilon_table(c, &pr).unwrap();
    assert!(forced_signs_ok(ring, &table).is_empty());
    assert!(sum_rule_violations(c, &pr, &table).is_empty(), "{}", c.name);
    assert!(t_matrix_violations(c, &pr, &table).is_empty(), "{}", c.name);
}

#[test]
fn double_duals_and_iterates_on_builtins() {
    for name in EXACT {
        let c = builtin::<Exact>(name, None).unwrap();
        pipeline(&c, MuPolicy::AllOnes);
        pipeline(&c, MuPolicy::Balanced);
        for b in ["1", "2"] {
            if name.starts_with("fib") || *name == "yanglee" {
                pipeline(&builtin::<Exact>(name, Some(b)).unwrap(), MuPolicy::Balanced);
            }
        }
    }
}

#[test]
fn fibonacci_epsilon_is_plus_one() {
    let c = builtin::<Exact>("fib", None).unwrap();
    let mut rc = roots();
    let mu = choose_mu(&c, MuPolicy::Balanced, &mut rc).unwrap();
    let dims = dimensions(&c, &mu).unwrap();
    let pr = paired_roots(&c, &dims, &mut rc).unwrap();
    let t = epsilon_table(&c, &pr).unwrap();
    assert_eq!(t.eps(1, 1, 1), Some(&[1i8][..]));
    assert!(t.all_plus());
}

#[test]
fn z3_user_mu_breaks_s3() {
    let c = builtin::<Exact>("pointed:Z3:1", None).unwrap();
    let mu = user_mu(&c, vec![Exact::one(), Exact::from_i(2), Exact::one()]).unwrap();
    let dims = dimensions(&c, &mu).unwrap();
    assert_ne!(dims.rel[1], Exact::one());
    let duals = PartialDuals::new(&c, &mu).unwrap();
    let s3 = check_s3(&c, &duals).unwrap();
    assert!(!s3.genuine_s3 && !s3.double_dual_identity);
    assert!(!s3.witnesses.is_empty());
    let ones = fusion6j_core::duality::choose_mu(&c, MuPolicy::AllOnes, &mut roots()).unwrap();
    let s3 = check_s3(&c, &PartialDuals::new(&c, &ones).unwrap()).unwrap();
    assert!(s3.genuine_s3);
}

#[test]
fn involution_eigenbasis_of_synthetic_k() {
    let k = fusion6j_core::Matrix::from_rows(vec![
        vec![Exact::zero(), Exact::one()],
        vec![Exact::one(), Exact::zero()],
    ])
    .unwrap();
    let (c, eps) = involution_eigenbasis(&k, 0.0).unwrap();
    assert_eq!(eps, vec![1, -1]);
    let d = c.mul(&k).mul(&c.inverse(0.0).unwrap());
    assert!(d.is_diagonal(0.0));
    assert_eq!(d[(0, 0)], Exact::one());
    assert_eq!(d[(1, 1)], -Exact::one());
}
