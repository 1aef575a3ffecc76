use fusion6j_core::scalar::{Exact, Field, Float, RootChoice, Scalar};
use num_complex::Complex64;
use proptest::prelude::*;

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

fn golden() -> Exact {
    Exact::parse_scalar("1/2+1/2*sqrt(5)").unwrap()
}

#[test]
fn golden_ratio_identities() {
    let phi = golden();
    let sq = phi.clone() * phi.clone();
    assert_eq!(sq, Exact::parse_scalar("3/2+1/2*sqrt(5)").unwrap());
    assert_eq!(sq.sqrt_in(Field::QSqrt5).unwrap(), phi);
    assert_eq!(Exact::from_i(4).sqrt_in(Field::Q).unwrap(), Exact::from_i(2));
    assert!(Exact::from_i(2).sqrt_in(Field::QSqrt5).is_none());
}

#[test]
fn rho_squares_to_a_plus() {
    // rho^2 = (sqrt5 - 1)/2, the positive root of a^2 + a - 1.
    let rho = Exact::rho();
    let a_plus = rho.clone() * rho.clone();
    let expected = (5f64.sqrt() - 1.0) / 2.0;
    assert!(close(a_plus.to_complex(), Complex64::new(expected, 0.0)));
    let a_minus = Exact::parse_scalar("-1/2-1/2*sqrt(5)").unwrap();
    let lhs = a_minus.clone() * a_minus.clone() + a_minus.clone() - Exact::one();
    assert!(lhs.is_zero(0.0));
}

#[test]
fn sqrt_of_negative_a_plus_needs_i() {
    let a_plus = Exact::parse_scalar("-1/2+1/2*sqrt(5)").unwrap();
    let neg = -a_plus.clone();
    assert!(neg.sqrt_in(Field::QSqrt5Rho).is_none());
    let b = neg.sqrt_in(Field::QSqrt5RhoI).unwrap();
    assert_eq!(b.clone() * b.clone(), neg);
    let want = Complex64::new(0.0, expected_rho());
    assert!(close(b.to_complex(), want) || close(b.to_complex(), -want));
    assert_eq!(a_plus.sqrt_in(Field::QSqrt5Rho).unwrap(), Exact::rho());
}

fn expected_rho() -> f64 {
    ((5f64.sqrt() - 1.0) / 2.0).sqrt()
}

#[test]
fn sqrt_of_minus_a_minus_is_golden_ratio_root() {
    // -a_- = (1+sqrt5)/2 and its root lies in Q(sqrt5, rho).
    let a_minus = Exact::parse_scalar("-1/2-1/2*sqrt(5)").unwrap();
    let b = (-a_minus.clone()).sqrt_in(Field::QSqrt5Rho).unwrap();
    assert_eq!(b.clone() * b.clone(), -a_minus);
    let want = ((1.0 + 5f64.sqrt()) / 2.0).sqrt();
    assert!(close(b.to_complex(), Complex64::new(want, 0.0)));
}

#[test]
fn twelfth_roots_of_unity() {
    for k in 0..12 {
        let z = Exact::root_of_unity(12, k, Field::QSqrt3I).unwrap();
        let want = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 12.0);
        assert!(close(z.to_complex(), want), "k = {k}");
        assert!(z.pow(12).is_one(0.0));
    }
    assert!(Exact::root_of_unity(5, 1, Field::Tower).is_none());
    let w = Float::root_of_unity(5, 2, Field::C).unwrap();
    assert!(w.pow(5).is_one(1e-12));
}

#[test]
fn parse_and_display_round_trip() {
    for s in ["0", "1", "-3/4", "1/2+1/2*sqrt(5)", "I", "rho", "sqrt(3)*I", "2-sqrt(15)"] {
        let x = Exact::parse_scalar(s).unwrap();
        let back = Exact::parse_scalar(&x.to_string()).unwrap();
        assert_eq!(x, back, "{s} -> {x}");
    }
    assert!(Exact::parse_scalar("sqrt(7)").is_err());
    assert!(Exact::parse_scalar("1/0").is_err());
    let f = Float::parse_scalar("1.5-2i").unwrap();
    assert!(close(f.0, Complex64::new(1.5, -2.0)));
    let g = Float::parse_scalar("1/2+1/2*sqrt(5)").unwrap();
    assert!(close(g.0, golden().to_complex()));
}

#[test]
fn field_membership() {
    let x = Exact::sqrt3() * Exact::i();
    assert_eq!(x.field_of(), Field::QSqrt3I);
    assert!(!x.in_field(Field::QSqrt5Rho));
    assert!(x.in_field(Field::Tower));
    assert_eq!(Exact::rho().field_of(), Field::QSqrt5Rho);
    assert_eq!(Field::QSqrt5.join(Field::QSqrt3I), Field::Tower);
}

#[test]
fn root_choice_reuses_recorded_roots() {
    let mut roots: RootChoice<Exact> = RootChoice::new(Field::QSqrt5, 0.0);
    let four = Exact::from_i(4);
    roots.set("x", Exact::from_i(-2));
    assert_eq!(roots.sqrt("x", &four).unwrap(), Exact::from_i(-2));
    assert_eq!(roots.sqrt("y", &four).unwrap(), Exact::from_i(2));
    assert!(roots.sqrt("z", &Exact::from_i(2)).is_err());
    assert_eq!(roots.len(), 2);
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, 1i64..=4)
}

fn tower_element() -> impl Strategy<Value = Exact> {
    proptest::collection::vec((0u8..16, small_rational()), 0..5).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(m, (n, d))| Exact::basis(m) * Exact::from_ratio(n, d))
            .fold(Exact::zero(), |a, b| a + b)
    })
}

proptest! {
    #[test]
    fn ring_ops_commute_with_embedding(a in tower_element(), b in tower_element()) {
        prop_assert!(close((a.clone() * b.clone()).to_complex(), a.to_complex() * b.to_complex()));
        prop_assert!(close((a.clone() + b.clone()).to_complex(), a.to_complex() + b.to_complex()));
        prop_assert!(close((a.clone() - b.clone()).to_complex(), a.to_complex() - b.to_complex()));
    }

    #[test]
    fn inverse_law(a in tower_element()) {
        prop_assume!(!a.is_zero(0.0));
        let inv = a.inv().unwrap();
        prop_assert!((inv * a).is_one(0.0));
    }

    #[test]
    fn sqrt_of_square(a in tower_element()) {
        let sq = a.clone() * a.clone();
        let r = sq.sqrt_in(Field::Tower).unwrap();
        prop_assert_eq!(r.clone() * r.clone(), sq);
        prop_assert!(r == a || r == -a);
    }

    #[test]
    fn display_round_trips(a in tower_element()) {
        prop_assert_eq!(Exact::parse_scalar(&a.to_string()).unwrap(), a);
    }
}
