//! Coefficient fields and the square-root policy.

mod exact;
mod float;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub use exact::Exact;
pub use float::{default_tol, Float, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Backend {
    Exact,
    Float,
}

/// Coefficient fields a category file may declare.
///
/// The exact fields are subfields of the tower
/// `Q(sqrt5)(rho)(sqrt3)(i)` with `rho = sqrt((sqrt5-1)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    Q,
    QSqrt5,
    QSqrt5Rho,
    QSqrt3I,
    QSqrt5RhoI,
    Tower,
    C,
}

impl Field {
    pub const ALL: [Field; 7] = [
        Field::Q,
        Field::QSqrt5,
        Field::QSqrt3I,
        Field::QSqrt5Rho,
        Field::QSqrt5RhoI,
        Field::Tower,
        Field::C,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Field::Q => "Q",
            Field::QSqrt5 => "Q(sqrt5)",
            Field::QSqrt5Rho => "Q(sqrt5,rho)",
            Field::QSqrt3I => "Q(sqrt3,i)",
            Field::QSqrt5RhoI => "Q(sqrt5,rho,i)",
            Field::Tower => "Q(sqrt5,rho,sqrt3,i)",
            Field::C => "C",
        }
    }

    pub fn parse(s: &str) -> Option<Field> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        Field::ALL.into_iter().find(|f| f.name() == compact)
    }

    /// Generator mask of an exact field: bit 0 `sqrt5`, bit 1 `rho`, bit 2 `sqrt3`, bit 3 `i`.
    pub fn generators(self) -> u8 {
        match self {
            Field::Q => 0,
            Field::QSqrt5 => 0b0001,
            Field::QSqrt5Rho => 0b0011,
            Field::QSqrt3I => 0b1100,
            Field::QSqrt5RhoI => 0b1011,
            Field::Tower | Field::C => 0b1111,
        }
    }

    pub fn is_exact(self) -> bool {
        self != Field::C
    }

    /// Smallest named exact field whose generators cover `mask`.
    pub fn smallest_containing(mask: u8) -> Field {
        let mut mask = mask;
        if mask & 0b0010 != 0 {
            mask |= 0b0001;
        }
        Field::ALL
            .into_iter()
            .filter(|f| f.is_exact())
            .find(|f| f.generators() & mask == mask)
            .unwrap_or(Field::Tower)
    }

    /// Smallest named field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::C || other == Field::C {
            return Field::C;
        }
        Field::smallest_containing(self.generators() | other.generators())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;

    /// Exact zero test, or `|a| <= tol` for floats.
    fn is_zero(&self, tol: f64) -> bool;
    /// Exact equality, or `|a-b| <= tol*max(1,|a|,|b|)` for floats.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    fn inv(&self) -> Result<Self>;
    /// Canonical square root inside `field`, if there is one.
    fn sqrt_in(&self, field: Field) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    /// `exp(2 pi i k/n)` if it lies in `field`.
    fn root_of_unity(n: u32, k: i64, field: Field) -> Option<Self>;
    fn in_field(&self, field: Field) -> bool;
    /// Smallest named field containing the value.
    fn field_of(&self) -> Field;
    fn parse_scalar(s: &str) -> std::result::Result<Self, String>;
    fn from_complex(z: Complex64) -> Option<Self>;

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }

    fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out * self.clone();
        }
        out
    }

    fn is_one(&self, tol: f64) -> bool {
        self.approx_eq(&Self::one(), tol)
    }
}

/// Square roots recorded per use-site key.
#[derive(Clone, Debug)]
pub struct RootChoice<S> {
    field: Field,
    tol: f64,
    roots: BTreeMap<String, (S, S)>,
}

impl<S: Scalar> RootChoice<S> {
    pub fn new(field: Field, tol: f64) -> Self {
        RootChoice {
            field,
            tol,
            roots: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Returns the recorded root for `key` when it was taken of the same value,
    /// otherwise computes the canonical root and records it.
    pub fn sqrt(&mut self, key: &str, s: &S) -> Result<S> {
        if let Some((value, root)) = self.roots.get(key) {
            if value.approx_eq(s, self.tol) {
                return Ok(root.clone());
            }
        }
        let root = s.sqrt_in(self.field).ok_or_else(|| Error::NoRootInField {
            key: key.to_string(),
            value: s.to_string(),
            field: self.field.to_string(),
        })?;
        self.roots.insert(key.to_string(), (s.clone(), root.clone()));
        Ok(root)
    }

    /// Pins `key` to a caller-chosen root of `root * root`.
    pub fn set(&mut self, key: &str, root: S) {
        let value = root.clone() * root.clone();
        self.roots.insert(key.to_string(), (value, root));
    }

    pub fn get(&self, key: &str) -> Option<&S> {
        self.roots.get(key).map(|(_, r)| r)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &S, &S)> {
        self.roots.iter().map(|(k, (v, r))| (k.as_str(), v, r))
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}
