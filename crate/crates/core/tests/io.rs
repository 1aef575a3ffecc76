mod common;

use fusion6j_core::builtin::builtin;
use fusion6j_core::io;
use fusion6j_core::scalar::{Exact, Float, Scalar};
use fusion6j_core::{CategoryData, Error};

const EXACT: &[&str] = &["vec", "fib", "yanglee", "pointed:Z2:1", "pointed:Z3:1", "pointed:Z4:1"];

fn same<S: Scalar>(a: &CategoryData<S>, b: &CategoryData<S>) {
    assert_eq!(a.name, b.name);
    assert_eq!(a.ring(), b.ring());
    assert_eq!(a.field(), b.field());
    assert_eq!(a.convention, b.convention);
    for (x, y) in a.blocks().zip(b.blocks()) {
        assert_eq!(x.labels, y.labels);
        assert_eq!(x.f, y.f);
        assert_eq!(x.g, y.g);
    }
    assert_eq!(a.blocks().count(), b.blocks().count());
}

#[test]
fn exact_round_trip_is_identical() {
    for name in EXACT {
        let c = builtin::<Exact>(name, None).unwrap();
        let text = io::to_string(&c);
        same(&c, &io::from_str::<Exact>(&text).unwrap());
        // A second pass gives the same text.
        assert_eq!(io::to_string(&io::from_str::<Exact>(&text).unwrap()), text);
    }
}

#[test]
fn float_round_trip_with_multiplicity() {
    let c = common::rep_a4();
    let text = io::to_string(&c);
    same(&c, &io::from_str::<Float>(&text).unwrap());
}

#[test]
fn files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fib.json");
    let c = builtin::<Exact>("fib", Some("1")).unwrap();
    io::save(&c, &path).unwrap();
    same(&c, &io::load::<Exact>(&path).unwrap());
    assert!(matches!(io::load::<Exact>(dir.path().join("nope.json")), Err(Error::Io(_))));
}

const SEMION: &str = r#"{
  "schema": "fusion6j-category/v1",
  "name": "semion",
  "field": "Q",
  "labels": { "names": ["1", "s"], "unit": "1", "dual": ["1", "s"] },
  "fusion": [["s", "s", "1", 1]],
  "fblocks": [
    ["s", "s", "s", "s", "1", 0, 0, "1", 0, 0, "-1"]
  ]
}"#;

#[test]
fn unit_blocks_and_rules_default() {
    let c = io::from_str::<Exact>(SEMION).unwrap();
    assert_eq!(c.f(1, 1, 1, 1, (0, 0, 0), (0, 0, 0)), &-Exact::one());
    assert_eq!(c.f(0, 1, 1, 0, (0, 0, 0), (1, 0, 0)), &Exact::one());
    assert!(c.check_pentagon(None).passed);
    let z2 = builtin::<Exact>("pointed:Z2:1", None).unwrap();
    for (x, y) in c.blocks().zip(z2.blocks()) {
        assert_eq!((x.labels, &x.f), (y.labels, &y.f));
    }
}

#[test]
fn bad_scalar_has_location() {
    let text = SEMION.replace("\"-1\"", "\"-1+*\"");
    match io::from_str::<Exact>(&text) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (8, 48)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn syntax_error_has_location() {
    let text = SEMION.replace("\"Q\",", "\"Q\"");
    match io::from_str::<Exact>(&text) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_block_names_quadruple() {
    let text = SEMION.replace(r#"["s", "s", "s", "s", "1", 0, 0, "1", 0, 0, "-1"]"#, "");
    match io::from_str::<Exact>(&text) {
        Err(Error::RingInvalid(m)) => assert!(m.contains("(s,s,s,s)"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn field_and_label_errors() {
    let text = SEMION.replace("\"-1\"", "\"sqrt(5)\"");
    assert!(matches!(io::from_str::<Exact>(&text), Err(Error::FieldMismatch { .. })));
    let text = SEMION.replace("[\"s\", \"s\", \"1\", 1]", "[\"s\", \"t\", \"1\", 1]");
    assert!(matches!(io::from_str::<Exact>(&text), Err(Error::Parse { line: 6, .. })));
    let text = SEMION.replace("\"fusion\": [[\"s\", \"s\", \"1\", 1]]", "\"fusion\": []");
    assert!(matches!(io::from_str::<Exact>(&text), Err(Error::RingInvalid(_))));
}
