//! Built-in example categories: `vec`, `fib`, `yanglee` and `pointed:Z<n>:<s>`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fsym::{CategoryData, CodualConvention};
use crate::linalg::Matrix;
use crate::ring::{FusionRing, Label};
use crate::scalar::{default_tol, Backend, Exact, Field, Scalar};

pub const BUILTIN_NAMES: &[&str] = &["vec", "fib", "yanglee", "pointed:Z<n>:<s>"];

pub(crate) fn tol_for<S: Scalar>() -> f64 {
    match S::BACKEND {
        Backend::Exact => 0.0,
        Backend::Float => default_tol(),
    }
}

/// Identity blocks for every quadruple with the unit among its first three labels.
pub fn unit_blocks<S: Scalar>(ring: &FusionRing) -> BTreeMap<[Label; 4], Matrix<S>> {
    let one = ring.unit();
    ring.block_quads()
        .into_iter()
        .filter(|q| q[..3].contains(&one))
        .map(|q| {
            let (r, _) = ring.block_dims(q[0], q[1], q[2], q[3]);
            (q, Matrix::identity(r))
        })
        .collect()
}

pub fn vec_ring() -> FusionRing {
    FusionRing::new(vec!["1".into()], 0, vec![0], &[(0, 0, 0, 1)]).expect("valid ring")
}

/// `x (x) x = 1 + x`.
pub fn fibonacci_ring() -> FusionRing {
    FusionRing::new(
        vec!["1".into(), "x".into()],
        0,
        vec![0, 1],
        &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)],
    )
    .expect("valid ring")
}

/// `y (x) y = 1`, `x (x) y = y (x) x = x`, `x (x) x = 1 + 2x + y`.
pub fn rank3_ring() -> FusionRing {
    let (one, x, y) = (0, 1, 2);
    let mut rules = vec![(x, x, one, 1), (x, x, x, 2), (x, x, y, 1), (y, y, one, 1), (x, y, x, 1), (y, x, x, 1)];
    for i in 0..3 {
        rules.push((one, i, i, 1));
        if i != one {
            rules.push((i, one, i, 1));
        }
    }
    FusionRing::new(vec!["1".into(), "x".into(), "y".into()], one, vec![0, 1, 2], &rules)
        .expect("valid ring")
}

pub fn cyclic_ring(n: usize) -> FusionRing {
    let names = (0..n)
        .map(|g| match g {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{g}"),
        })
        .collect();
    let dual = (0..n).map(|g| (n - g) % n).collect();
    let mut rules = Vec::new();
    for g in 0..n {
        for h in 0..n {
            rules.push((g, h, (g + h) % n, 1));
        }
    }
    FusionRing::new(names, 0, dual, &rules).expect("valid ring")
}

pub fn vec_category<S: Scalar>() -> CategoryData<S> {
    let ring = vec_ring();
    let blocks = unit_blocks(&ring);
    CategoryData::new("vec", ring, Field::Q, blocks, CodualConvention::UnitPairing, tol_for::<S>())
        .expect("vec is valid")
}

/// The rank-two category with `a^2 = a + 1`; `plus` selects `a = (1+sqrt5)/2`.
///
/// `b` defaults to `sqrt(-a)`, the tetrahedrally symmetric gauge.
pub fn fibonacci<S: Scalar>(plus: bool, b: Option<S>) -> Result<CategoryData<S>> {
    let name = if plus { "yanglee" } else { "fib" };
    let a = S::parse_scalar(if plus { "1/2+1/2*sqrt(5)" } else { "1/2-1/2*sqrt(5)" })
        .expect("literal parses");
    let b = match b {
        Some(b) => b,
        None => {
            let field = match S::BACKEND {
                Backend::Exact => Field::QSqrt5RhoI,
                Backend::Float => Field::C,
            };
            let minus_a = -a.clone();
            minus_a.sqrt_in(field).ok_or_else(|| Error::NoRootInField {
                key: "b".into(),
                value: minus_a.to_string(),
                field: field.to_string(),
            })?
        }
    };
    let binv = b.inv()?;
    let ring = fibonacci_ring();
    let mut blocks = unit_blocks(&ring);
    blocks.insert([1, 1, 1, 0], Matrix::identity(1));
    blocks.insert(
        [1, 1, 1, 1],
        Matrix::from_rows(vec![
            vec![-a.clone(), -(a.clone() * binv)],
            vec![b, a],
        ])?,
    );
    finish(name, ring, blocks)
}

/// Pointed `Z_n` with cocycle `omega(g,h,k) = exp(2 pi i s g (h + k - [h+k]) / n^2)`.
pub fn pointed<S: Scalar>(n: usize, s: i64) -> Result<CategoryData<S>> {
    if n == 0 {
        return Err(Error::UnknownBuiltin("pointed:Z0".into()));
    }
    let field = match S::BACKEND {
        Backend::Float => Field::C,
        Backend::Exact if n <= 2 => Field::Q,
        Backend::Exact => Field::QSqrt3I,
    };
    let ring = cyclic_ring(n);
    let mut blocks = BTreeMap::new();
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                // (h + k - [h+k]_n) / n is the carry bit.
                let carry = ((h + k) / n) as i64;
                let e = s.rem_euclid(n as i64) * g as i64 * carry;
                let omega = S::root_of_unity(n as u32, e, field).ok_or_else(|| Error::FieldMismatch {
                    value: format!("exp(2 pi i {e}/{n})"),
                    field: field.to_string(),
                })?;
                blocks.insert([g, h, k, (g + h + k) % n], Matrix::scalar(omega));
            }
        }
    }
    finish(&format!("pointed:Z{n}:{s}"), ring, blocks)
}

fn finish<S: Scalar>(
    name: &str,
    ring: FusionRing,
    blocks: BTreeMap<[Label; 4], Matrix<S>>,
) -> Result<CategoryData<S>> {
    let field = match S::BACKEND {
        Backend::Float => Field::C,
        Backend::Exact => blocks
            .values()
            .flat_map(|m| m.entries().iter())
            .fold(Field::Q, |f, x| f.join(x.field_of())),
    };
    CategoryData::new(name, ring, field, blocks, CodualConvention::UnitPairing, tol_for::<S>())
}

fn parse_pointed(name: &str) -> Option<(usize, i64)> {
    let rest = name.strip_prefix("pointed:Z")?;
    let (n, s) = match rest.split_once(':') {
        Some((n, s)) => (n, s),
        None => (rest, "1"),
    };
    Some((n.parse().ok()?, s.parse().ok()?))
}

fn build<S: Scalar>(name: &str, b: Option<&str>) -> Result<CategoryData<S>> {
    let b = b
        .map(|b| {
            S::parse_scalar(b).map_err(|message| Error::Parse {
                line: 1,
                column: 1,
                message: format!("--b: {message}"),
            })
        })
        .transpose()?;
    match name {
        "vec" => Ok(vec_category()),
        "fib" => fibonacci(false, b),
        "yanglee" => fibonacci(true, b),
        _ => match parse_pointed(name) {
            Some((n, s)) => pointed(n, s),
            None => Err(Error::UnknownBuiltin(name.into())),
        },
    }
}

/// Looks up a built-in by name; `b` overrides the Fibonacci gauge parameter.
///
/// The float backend is the embedding of the exact data whenever the exact
/// construction succeeds, so both backends share square-root choices.
pub fn builtin<S: Scalar>(name: &str, b: Option<&str>) -> Result<CategoryData<S>> {
    if S::BACKEND == Backend::Exact {
        return build::<S>(name, b);
    }
    match build::<Exact>(name, b) {
        Ok(c) => Ok(c.convert::<S>().expect("float backend accepts complex values")),
        Err(Error::NoRootInField { .. }) | Err(Error::FieldMismatch { .. }) | Err(Error::Parse { .. }) => {
            build::<S>(name, b)
        }
        Err(e) => Err(e),
    }
}
