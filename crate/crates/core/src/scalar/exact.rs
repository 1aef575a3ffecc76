//! Exact arithmetic in the tower `Q(sqrt5)(rho)(sqrt3)(i)`, `rho^2 = (sqrt5-1)/2`.
//!
//! An element is a sparse rational combination of the 16 monomials
//! `e_m = prod_{b in m} g_b` with generators `g_0 = sqrt5`, `g_1 = rho`,
//! `g_2 = sqrt3`, `g_3 = i`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Backend, Field, Scalar};
use crate::error::{Error, Result};

const DIM: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Exact {
    // sorted by monomial mask, no zero coefficients
    terms: Vec<(u8, BigRational)>,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn gen_square(bit: u8) -> Exact {
    match bit {
        0 => Exact::from_i(5),
        1 => Exact::from_coords([(0, ratio(-1, 2)), (1, ratio(1, 2))]),
        2 => Exact::from_i(3),
        _ => Exact::from_i(-1),
    }
}

fn top_bit(mask: u8) -> u8 {
    7 - mask.leading_zeros() as u8
}

fn basis_mul_rec(m: u8, n: u8) -> Exact {
    if m == 0 {
        return Exact::basis(n);
    }
    if n == 0 {
        return Exact::basis(m);
    }
    let h = top_bit(m | n);
    let bit = 1u8 << h;
    let base = basis_mul_rec(m & !bit, n & !bit);
    if m & bit != 0 && n & bit != 0 {
        mul_raw(&gen_square(h), &base)
    } else {
        base.shift(h)
    }
}

fn mul_raw(a: &Exact, b: &Exact) -> Exact {
    let mut out = Exact::zero();
    for (m, x) in &a.terms {
        for (n, y) in &b.terms {
            out = out + basis_mul_rec(*m, *n).scale(&(x * y));
        }
    }
    out
}

fn table() -> &'static [Vec<(u8, BigRational)>] {
    static TABLE: OnceLock<Vec<Vec<(u8, BigRational)>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..DIM * DIM)
            .map(|idx| basis_mul_rec((idx / DIM) as u8, (idx % DIM) as u8).terms)
            .collect()
    })
}

fn generator_values() -> [Complex64; 4] {
    let s5 = 5f64.sqrt();
    [
        Complex64::new(s5, 0.0),
        Complex64::new(((s5 - 1.0) / 2.0).sqrt(), 0.0),
        Complex64::new(3f64.sqrt(), 0.0),
        Complex64::new(0.0, 1.0),
    ]
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl Exact {
    pub fn from_i(n: i64) -> Exact {
        Exact::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(r: BigRational) -> Exact {
        Exact::from_coords([(0, r)])
    }

    pub fn from_coords(coords: impl IntoIterator<Item = (u8, BigRational)>) -> Exact {
        let mut dense: Vec<BigRational> = vec![BigRational::zero(); DIM];
        for (m, c) in coords {
            dense[m as usize & (DIM - 1)] += c;
        }
        Exact::from_dense(dense)
    }

    fn from_dense(dense: Vec<BigRational>) -> Exact {
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m as u8, c))
            .collect();
        Exact { terms }
    }

    /// The monomial `e_mask`.
    pub fn basis(mask: u8) -> Exact {
        Exact {
            terms: vec![(mask, BigRational::one())],
        }
    }

    pub fn sqrt5() -> Exact {
        Exact::basis(0b0001)
    }

    pub fn rho() -> Exact {
        Exact::basis(0b0010)
    }

    pub fn sqrt3() -> Exact {
        Exact::basis(0b0100)
    }

    pub fn i() -> Exact {
        Exact::basis(0b1000)
    }

    pub fn coords(&self) -> &[(u8, BigRational)] {
        &self.terms
    }

    pub fn coeff(&self, mask: u8) -> BigRational {
        self.terms
            .iter()
            .find(|(m, _)| *m == mask)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn mask_union(&self) -> u8 {
        self.terms.iter().fold(0, |acc, (m, _)| acc | m)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    fn scale(&self, r: &BigRational) -> Exact {
        if r.is_zero() {
            return Exact::zero();
        }
        Exact {
            terms: self.terms.iter().map(|(m, c)| (*m, c * r)).collect(),
        }
    }

    // (a, b) with self = a + b*g_bit, both free of bit
    fn split(&self, bit: u8) -> (Exact, Exact) {
        let flag = 1u8 << bit;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (m, c) in &self.terms {
            if m & flag != 0 {
                b.push((m & !flag, c.clone()));
            } else {
                a.push((*m, c.clone()));
            }
        }
        (Exact::from_coords(a), Exact::from_coords(b))
    }

    fn shift(&self, bit: u8) -> Exact {
        let flag = 1u8 << bit;
        Exact::from_coords(self.terms.iter().map(|(m, c)| (m | flag, c.clone())))
    }

    fn half(&self) -> Exact {
        self.scale(&ratio(1, 2))
    }

    fn inv_rec(&self) -> Option<Exact> {
        let union = self.mask_union();
        if union == 0 {
            let c = self.as_rational()?;
            if c.is_zero() {
                return None;
            }
            return Some(Exact::rational(c.recip()));
        }
        let h = top_bit(union);
        let (a, b) = self.split(h);
        let norm = a.clone() * a.clone() - gen_square(h) * b.clone() * b.clone();
        let norm_inv = norm.inv_rec()?;
        Some((a - b.shift(h)) * norm_inv)
    }

    fn sqrt_rec(&self, gens: u8) -> Option<Exact> {
        if self.terms.is_empty() {
            return Some(Exact::zero());
        }
        if self.mask_union() & !gens != 0 {
            return None;
        }
        if gens == 0 {
            return rational_sqrt(&self.as_rational()?).map(Exact::rational);
        }
        let h = top_bit(gens);
        let lower = gens & !(1u8 << h);
        let g = gen_square(h);
        let (a, b) = self.split(h);
        if b.terms.is_empty() {
            if let Some(c) = a.sqrt_rec(lower) {
                return Some(c);
            }
            let q = a * g.inv_rec()?;
            return q.sqrt_rec(lower).map(|d| d.shift(h));
        }
        let disc = a.clone() * a.clone() - g * b.clone() * b.clone();
        let n = disc.sqrt_rec(lower)?;
        for s in [n.clone(), -n] {
            let c2 = (a.clone() + s).half();
            if let Some(c) = c2.sqrt_rec(lower) {
                if c.terms.is_empty() {
                    continue;
                }
                let d = b.clone() * (c.clone() + c.clone()).inv_rec()?;
                return Some(c + d.shift(h));
            }
        }
        None
    }

    fn canonical_sign(self) -> Exact {
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self,
        }
    }

    fn parse_exact(s: &str) -> std::result::Result<Exact, String> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err("empty scalar".into());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut depth = 0i32;
        for (pos, &ch) in bytes.iter().enumerate() {
            match ch {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && pos > start => {
                    let prev = bytes[pos - 1];
                    if prev != b'*' && prev != b'/' && prev != b'e' && prev != b'E' {
                        terms.push(&compact[start..pos]);
                        start = pos;
                    }
                }
                _ => {}
            }
        }
        terms.push(&compact[start..]);
        let mut total = Exact::zero();
        for term in terms {
            total = total + parse_term(term)?;
        }
        Ok(total)
    }
}

fn parse_term(term: &str) -> std::result::Result<Exact, String> {
    let (negative, body) = match term.as_bytes().first() {
        Some(b'-') => (true, &term[1..]),
        Some(b'+') => (false, &term[1..]),
        _ => (false, term),
    };
    if body.is_empty() {
        return Err(format!("dangling sign in {term:?}"));
    }
    let mut value = Exact::one();
    for factor in body.split('*') {
        value = value * parse_factor(factor)?;
    }
    Ok(if negative { -value } else { value })
}

fn parse_factor(factor: &str) -> std::result::Result<Exact, String> {
    match factor {
        "I" | "i" => return Ok(Exact::i()),
        "rho" => return Ok(Exact::rho()),
        _ => {}
    }
    if let Some(inner) = factor.strip_prefix("sqrt(").and_then(|f| f.strip_suffix(')')) {
        let n: i64 = inner
            .parse()
            .map_err(|_| format!("sqrt argument {inner:?} is not an integer"))?;
        return sqrt_of_integer(n);
    }
    parse_rational(factor).map(Exact::rational)
}

fn sqrt_of_integer(n: i64) -> std::result::Result<Exact, String> {
    let mut rest = n.unsigned_abs();
    let mut outside: u64 = 1;
    let mut p = 2u64;
    while p * p <= rest {
        while rest.is_multiple_of(p * p) {
            rest /= p * p;
            outside *= p;
        }
        p += 1;
    }
    let mut mask = match rest {
        1 => 0b0000,
        3 => 0b0100,
        5 => 0b0001,
        15 => 0b0101,
        _ => return Err(format!("sqrt({n}) is outside the supported fields")),
    };
    if n < 0 {
        mask |= 0b1000;
    }
    let mut base = Exact::basis(0);
    if mask & 0b0001 != 0 {
        base = base * Exact::sqrt5();
    }
    if mask & 0b0100 != 0 {
        base = base * Exact::sqrt3();
    }
    if mask & 0b1000 != 0 {
        base = base * Exact::i();
    }
    Ok(base * Exact::from_i(outside as i64))
}

fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let bad = || format!("cannot parse number {s:?}");
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

fn monomial_name(mask: u8) -> String {
    let mut parts = Vec::new();
    match (mask & 0b0001 != 0, mask & 0b0100 != 0) {
        (true, true) => parts.push("sqrt(15)"),
        (true, false) => parts.push("sqrt(5)"),
        (false, true) => parts.push("sqrt(3)"),
        _ => {}
    }
    if mask & 0b0010 != 0 {
        parts.push("rho");
    }
    if mask & 0b1000 != 0 {
        parts.push("I");
    }
    parts.join("*")
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if idx > 0 {
                out.push(if negative { '-' } else { '+' });
            } else if negative {
                out.push('-');
            }
            let abs = c.abs();
            if *m == 0 {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&monomial_name(*m));
            } else {
                out.push_str(&format!("{}*{}", abs, monomial_name(*m)));
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        if rhs.terms.is_empty() {
            return self;
        }
        if self.terms.is_empty() {
            return rhs;
        }
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut a = self.terms.into_iter().peekable();
        let mut b = rhs.terms.into_iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    let (m, c) = a.next().unwrap();
                    let (_, d) = b.next().unwrap();
                    let s = c + d;
                    if !s.is_zero() {
                        out.push((m, s));
                    }
                }
                (Some(x), Some(y)) if x.0 < y.0 => out.push(a.next().unwrap()),
                (Some(_), Some(_)) => out.push(b.next().unwrap()),
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (None, None) => break,
            }
        }
        Exact { terms: out }
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        self + (-rhs)
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return Exact::zero();
        }
        if let [(0, c)] = self.terms.as_slice() {
            return rhs.scale(c);
        }
        if let [(0, c)] = rhs.terms.as_slice() {
            return self.scale(c);
        }
        let table = table();
        let mut dense: Vec<BigRational> = vec![BigRational::zero(); DIM];
        for (m, x) in &self.terms {
            for (n, y) in &rhs.terms {
                let xy = x * y;
                for (k, c) in &table[*m as usize * DIM + *n as usize] {
                    dense[*k as usize] += &xy * c;
                }
            }
        }
        Exact::from_dense(dense)
    }
}

impl Scalar for Exact {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Exact { terms: Vec::new() }
    }

    fn one() -> Self {
        Exact::from_i(1)
    }

    fn from_i64(n: i64) -> Self {
        Exact::from_i(n)
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Exact::rational(ratio(n, d))
    }

    fn is_zero(&self, _tol: f64) -> bool {
        self.terms.is_empty()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn inv(&self) -> Result<Self> {
        self.inv_rec().ok_or(Error::DivisionByZero)
    }

    fn sqrt_in(&self, field: Field) -> Option<Self> {
        let root = self.sqrt_rec(field.generators())?.canonical_sign();
        debug_assert!(root.clone() * root.clone() == *self);
        Some(root)
    }

    fn to_complex(&self) -> Complex64 {
        let gens = generator_values();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
                for (b, g) in gens.iter().enumerate() {
                    if m & (1 << b) != 0 {
                        v *= g;
                    }
                }
                v
            })
            .sum()
    }

    fn root_of_unity(n: u32, k: i64, field: Field) -> Option<Self> {
        if n == 0 {
            return None;
        }
        // Reduce k/n so that trivial powers of any order are found.
        let k = k.rem_euclid(n as i64);
        let g = num_integer::gcd(k, n as i64).max(1);
        let (k, n) = (k / g, n as i64 / g);
        if 12 % n != 0 {
            return None;
        }
        let m = (k * (12 / n)) as u8;
        let half = ratio(1, 2);
        let h = |s: i64| Exact::rational(half.clone() * BigInt::from(s));
        let r3 = |s: i64| Exact::sqrt3() * h(s);
        let i = Exact::i();
        let value = match m {
            0 => Exact::one(),
            1 => r3(1) + i * h(1),
            2 => h(1) + r3(1) * i,
            3 => i,
            4 => h(-1) + r3(1) * i,
            5 => r3(-1) + i * h(1),
            6 => -Exact::one(),
            7 => r3(-1) + i * h(-1),
            8 => h(-1) + r3(-1) * i,
            9 => -i,
            10 => h(1) + r3(-1) * i,
            _ => r3(1) + i * h(-1),
        };
        value.in_field(field).then_some(value)
    }

    fn in_field(&self, field: Field) -> bool {
        field == Field::C || self.mask_union() & !field.generators() == 0
    }

    fn field_of(&self) -> Field {
        Field::smallest_containing(self.mask_union())
    }

    fn parse_scalar(s: &str) -> std::result::Result<Self, String> {
        Exact::parse_exact(s)
    }

    fn from_complex(_z: Complex64) -> Option<Self> {
        None
    }
}
