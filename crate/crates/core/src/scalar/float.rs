use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{Backend, Exact, Field, Scalar};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Default tolerance, overridden by the `FUSION6J_TOL` environment variable.
pub fn default_tol() -> f64 {
    std::env::var("FUSION6J_TOL")
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(DEFAULT_TOL)
}

/// Complex double; comparisons use a relative tolerance supplied by the caller.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Float(pub Complex64);

impl Float {
    pub fn new(re: f64, im: f64) -> Float {
        Float(Complex64::new(re, im))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }
}

impl From<&Exact> for Float {
    fn from(x: &Exact) -> Float {
        Float(x.to_complex())
    }
}

fn parse_complex_literal(s: &str) -> Option<Complex64> {
    let body = match s.strip_suffix('i') {
        Some(b) if b.ends_with(|c: char| c.is_ascii_digit() || c == '.') => b,
        Some(b) if b.is_empty() || b == "+" || b == "-" => {
            let sign = if b == "-" { -1.0 } else { 1.0 };
            return Some(Complex64::new(0.0, sign));
        }
        Some(_) => return None,
        None => return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0)),
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    match split {
        Some(p) => {
            let re = body[..p].parse::<f64>().ok()?;
            let im = body[p..].parse::<f64>().ok()?;
            Some(Complex64::new(re, im))
        }
        None => body.parse::<f64>().ok().map(|im| Complex64::new(0.0, im)),
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = self.0.im;
        let sign = if im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{:?}{}{:?}i", self.0.re, sign, im.abs())
    }
}

impl Add for Float {
    type Output = Float;
    fn add(self, rhs: Float) -> Float {
        Float(self.0 + rhs.0)
    }
}

impl Sub for Float {
    type Output = Float;
    fn sub(self, rhs: Float) -> Float {
        Float(self.0 - rhs.0)
    }
}

impl Mul for Float {
    type Output = Float;
    fn mul(self, rhs: Float) -> Float {
        Float(self.0 * rhs.0)
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Float::new(0.0, 0.0)
    }

    fn one() -> Self {
        Float::new(1.0, 0.0)
    }

    fn from_i64(n: i64) -> Self {
        Float::new(n as f64, 0.0)
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Float::new(n as f64 / d as f64, 0.0)
    }

    fn is_zero(&self, tol: f64) -> bool {
        self.0.norm() <= tol
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = 1f64.max(self.0.norm()).max(other.0.norm());
        (self.0 - other.0).norm() <= tol * scale
    }

    fn inv(&self) -> Result<Self> {
        if self.0.norm() == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Float(self.0.inv()))
    }

    fn sqrt_in(&self, _field: Field) -> Option<Self> {
        Some(Float(self.0.sqrt()))
    }

    fn to_complex(&self) -> Complex64 {
        self.0
    }

    fn root_of_unity(n: u32, k: i64, _field: Field) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let k = k.rem_euclid(n as i64);
        // keep the real axis exact for the common cases
        if let Some(0) = (4 * k).checked_rem(n as i64) {
            return Some(match 4 * k / n as i64 {
                0 => Float::new(1.0, 0.0),
                1 => Float::new(0.0, 1.0),
                2 => Float::new(-1.0, 0.0),
                _ => Float::new(0.0, -1.0),
            });
        }
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        Some(Float(Complex64::from_polar(1.0, theta)))
    }

    fn in_field(&self, _field: Field) -> bool {
        true
    }

    fn field_of(&self) -> Field {
        Field::C
    }

    fn parse_scalar(s: &str) -> std::result::Result<Self, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(z) = parse_complex_literal(&compact) {
            return Ok(Float(z));
        }
        Exact::parse_scalar(&compact).map(|x| Float(x.to_complex()))
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        Some(Float(z))
    }
}

impl fmt::Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
