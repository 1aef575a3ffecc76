//! F-symbol storage, inverse blocks, pentagon/triangle checks and gauge transformations.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{FusionRing, Label, LeftIdx, RightIdx, ValidationReport};
use crate::scalar::{Field, Float, RootChoice, Scalar};

/// Normalization of the covector pairing `alpha' o alpha-bar`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodualConvention {
    /// `alpha' o alpha-bar = delta id_k`.
    UnitPairing,
    /// `alpha' o alpha-bar = sqrt(d_i d_j / d_k) delta id_k`.
    DimWeighted,
}

impl CodualConvention {
    pub fn name(self) -> &'static str {
        match self {
            CodualConvention::UnitPairing => "unit",
            CodualConvention::DimWeighted => "dimweighted",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "unit" => Some(CodualConvention::UnitPairing),
            "dimweighted" => Some(CodualConvention::DimWeighted),
            _ => None,
        }
    }
}

/// The block `F^{(ijk)l}` together with its inverse `G^{(ijk)l}`.
///
/// Rows of `f` run over the right-bracket basis `(p, a, b)`, columns over the
/// left-bracket basis `(q, c, d)`; `g` is indexed the other way round.
#[derive(Clone)]
pub struct FBlock<S> {
    pub labels: [Label; 4],
    pub f: Matrix<S>,
    pub g: Matrix<S>,
    right_off: Vec<usize>,
    left_off: Vec<usize>,
    right_inner: Vec<usize>,
    left_inner: Vec<usize>,
}

impl<S: Scalar> FBlock<S> {
    fn new(ring: &FusionRing, labels: [Label; 4], f: Matrix<S>, tol: f64) -> Result<Self> {
        let [i, j, k, l] = labels;
        let (rows, cols) = ring.block_dims(i, j, k, l);
        if f.rows() != rows || f.cols() != cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{rows}x{cols} block for {labels:?}"),
                found: format!("{}x{}", f.rows(), f.cols()),
            });
        }
        let g = f.inverse(tol).ok_or(Error::SingularBlock(labels))?;
        let mut right_off = Vec::with_capacity(ring.rank());
        let mut left_off = Vec::with_capacity(ring.rank());
        let mut right_inner = Vec::with_capacity(ring.rank());
        let mut left_inner = Vec::with_capacity(ring.rank());
        let (mut ro, mut lo) = (0, 0);
        for x in ring.labels() {
            right_off.push(ro);
            left_off.push(lo);
            right_inner.push(ring.n(j, k, x));
            left_inner.push(ring.n(x, k, l));
            ro += ring.n(i, x, l) * ring.n(j, k, x);
            lo += ring.n(i, j, x) * ring.n(x, k, l);
        }
        Ok(FBlock {
            labels,
            f,
            g,
            right_off,
            left_off,
            right_inner,
            left_inner,
        })
    }

    pub fn right_pos(&self, (p, a, b): RightIdx) -> usize {
        self.right_off[p] + a * self.right_inner[p] + b
    }

    pub fn left_pos(&self, (q, c, d): LeftIdx) -> usize {
        self.left_off[q] + c * self.left_inner[q] + d
    }
}

#[derive(Clone)]
pub struct CategoryData<S> {
    pub name: String,
    ring: FusionRing,
    field: Field,
    blocks: BTreeMap<[Label; 4], FBlock<S>>,
    pub convention: CodualConvention,
    pub tol: f64,
    /// Warnings attached by gauge transformations and rescalings.
    pub notes: Vec<String>,
    zero: S,
}

#[derive(Clone, Debug, Serialize)]
pub struct PentagonViolation {
    /// `(p, q, r, s, t, u, v, x, y)`
    pub labels: [Label; 9],
    /// `(mu, beta, gamma, alpha, delta, nu)`
    pub multiplicities: [usize; 6],
    pub lhs: String,
    pub rhs: String,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PentagonReport {
    pub checked: usize,
    pub max_residual: f64,
    pub exact_zero: bool,
    pub first_violation: Option<PentagonViolation>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecialSymbol<S> {
    pub label: Label,
    pub fo: S,
    pub go: S,
    /// `G°_i = F°_{i-bar}`
    pub go_equals_fo_dual: bool,
    /// `G°_i F°_i = 1`
    pub go_inverts_fo: bool,
}

/// Basis changes on the spaces `H_{ij}^k`; rows of each matrix are the new
/// basis vectors in old coordinates. Absent blocks are identities.
#[derive(Clone)]
pub struct GaugeTransform<S> {
    blocks: BTreeMap<(Label, Label, Label), Matrix<S>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GaugeFlags {
    /// Spaces where `g g^T != 1`, i.e. the covector duality is not preserved.
    pub non_covector_preserving: Vec<(Label, Label, Label)>,
    /// Unit spaces `H_{i1}^i`, `H_{1i}^i` that were altered.
    pub alters_unit_spaces: Vec<(Label, Label, Label)>,
}

impl<S: Scalar> Default for GaugeTransform<S> {
    fn default() -> Self {
        GaugeTransform::identity()
    }
}

impl<S: Scalar> GaugeTransform<S> {
    pub fn identity() -> Self {
        GaugeTransform {
            blocks: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, i: Label, j: Label, k: Label, m: Matrix<S>) {
        self.blocks.insert((i, j, k), m);
    }

    pub fn get(&self, i: Label, j: Label, k: Label) -> Option<&Matrix<S>> {
        self.blocks.get(&(i, j, k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Label, Label, Label), &Matrix<S>)> {
        self.blocks.iter()
    }
}

impl<S: Scalar> std::fmt::Debug for FBlock<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F{:?} = {:?}", self.labels, self.f)
    }
}

impl<S: Scalar> std::fmt::Debug for GaugeTransform<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.blocks.iter()).finish()
    }
}

impl<S: Scalar> std::fmt::Debug for CategoryData<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CategoryData")
            .field("name", &self.name)
            .field("field", &self.field)
            .field("blocks", &self.blocks.values().collect::<Vec<_>>())
            .finish()
    }
}

fn entry_or_delta<S: Scalar>(m: Option<&Matrix<S>>, x: usize, y: usize) -> S {
    match m {
        Some(m) => m[(x, y)].clone(),
        None if x == y => S::one(),
        None => S::zero(),
    }
}

impl<S: Scalar> CategoryData<S> {
    /// Validates the ring and block shapes and inverts every block.
    pub fn new(
        name: impl Into<String>,
        ring: FusionRing,
        field: Field,
        mut fblocks: BTreeMap<[Label; 4], Matrix<S>>,
        convention: CodualConvention,
        tol: f64,
    ) -> Result<Self> {
        let report = ring.validate();
        if !report.is_ok() {
            return Err(Error::RingInvalid(report.violations.join("; ")));
        }
        let mut blocks = BTreeMap::new();
        for quad in ring.block_quads() {
            let f = fblocks.remove(&quad).ok_or(Error::MissingBlock(quad))?;
            if let Some(bad) = f.entries().iter().find(|x| !x.in_field(field)) {
                return Err(Error::FieldMismatch {
                    value: bad.to_string(),
                    field: field.to_string(),
                });
            }
            blocks.insert(quad, FBlock::new(&ring, quad, f, tol)?);
        }
        if let Some(extra) = fblocks.keys().next() {
            return Err(Error::RingInvalid(format!(
                "block {extra:?} has zero dimension"
            )));
        }
        Ok(CategoryData {
            name: name.into(),
            ring,
            field,
            blocks,
            convention,
            tol,
            notes: Vec::new(),
            zero: S::zero(),
        })
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn block(&self, i: Label, j: Label, k: Label, l: Label) -> Result<&FBlock<S>> {
        self.blocks
            .get(&[i, j, k, l])
            .ok_or(Error::MissingBlock([i, j, k, l]))
    }

    pub fn blocks(&self) -> impl Iterator<Item = &FBlock<S>> {
        self.blocks.values()
    }

    /// `F^{(ijk)l}_{(p,a,b),(q,c,d)}`; zero when the indices do not exist.
    pub fn f(&self, i: Label, j: Label, k: Label, l: Label, row: RightIdx, col: LeftIdx) -> &S {
        match self.blocks.get(&[i, j, k, l]) {
            Some(b) if self.right_valid(i, j, k, l, row) && self.left_valid(i, j, k, l, col) => {
                &b.f[(b.right_pos(row), b.left_pos(col))]
            }
            _ => &self.zero,
        }
    }

    /// `G^{(ijk)l}_{(q,c,d),(p,a,b)}`; zero when the indices do not exist.
    pub fn g(&self, i: Label, j: Label, k: Label, l: Label, row: LeftIdx, col: RightIdx) -> &S {
        match self.blocks.get(&[i, j, k, l]) {
            Some(b) if self.left_valid(i, j, k, l, row) && self.right_valid(i, j, k, l, col) => {
                &b.g[(b.left_pos(row), b.right_pos(col))]
            }
            _ => &self.zero,
        }
    }

    fn right_valid(&self, i: Label, j: Label, k: Label, l: Label, (p, a, b): RightIdx) -> bool {
        p < self.ring.rank() && a < self.ring.n(i, p, l) && b < self.ring.n(j, k, p)
    }

    fn left_valid(&self, i: Label, j: Label, k: Label, l: Label, (q, c, d): LeftIdx) -> bool {
        q < self.ring.rank() && c < self.ring.n(i, j, q) && d < self.ring.n(q, k, l)
    }

    /// `G^{(ijk)l}` as a matrix.
    pub fn gblock(&self, i: Label, j: Label, k: Label, l: Label) -> Result<&Matrix<S>> {
        Ok(&self.block(i, j, k, l)?.g)
    }

    /// `F°_i = F^{(i ibar i)i}_{(1,o,o),(1,o,o)}`.
    pub fn fo(&self, i: Label) -> S {
        let one = self.ring.unit();
        let ib = self.ring.dual(i);
        self.f(i, ib, i, i, (one, 0, 0), (one, 0, 0)).clone()
    }

    /// `G°_i = G^{(i ibar i)i}_{(1,o,o),(1,o,o)}`.
    pub fn go(&self, i: Label) -> S {
        let one = self.ring.unit();
        let ib = self.ring.dual(i);
        self.g(i, ib, i, i, (one, 0, 0), (one, 0, 0)).clone()
    }

    pub fn special_symbols(&self) -> Vec<SpecialSymbol<S>> {
        self.ring
            .labels()
            .map(|i| {
                let fo = self.fo(i);
                let go = self.go(i);
                let fo_dual = self.fo(self.ring.dual(i));
                SpecialSymbol {
                    label: i,
                    go_equals_fo_dual: go.approx_eq(&fo_dual, self.tol),
                    go_inverts_fo: (go.clone() * fo.clone()).is_one(self.tol),
                    fo,
                    go,
                }
            })
            .collect()
    }

    pub fn is_veined(&self) -> bool {
        self.ring.labels().all(|i| !self.fo(i).is_zero(self.tol))
    }

    /// `sum_{k,a,b} G^{(ibar i j)j}_{(1oo),(k,a,b)} F^{(ibar i j)j}_{(k,a,b),(1oo)}` for every `(i, j)`.
    pub fn completeness_traces(&self) -> Vec<((Label, Label), S)> {
        let one = self.ring.unit();
        let mut out = Vec::new();
        for i in self.ring.labels() {
            let ib = self.ring.dual(i);
            for j in self.ring.labels() {
                let mut acc = S::zero();
                for (k, a, b) in self.ring.right_basis(ib, i, j, j) {
                    acc = acc
                        + self.g(ib, i, j, j, (one, 0, 0), (k, a, b)).clone()
                            * self.f(ib, i, j, j, (k, a, b), (one, 0, 0)).clone();
                }
                out.push(((i, j), acc));
            }
        }
        out
    }

    pub fn check_triangle(&self) -> ValidationReport {
        let one = self.ring.unit();
        let mut report = ValidationReport::default();
        for (quad, b) in &self.blocks {
            if !quad[..3].contains(&one) {
                continue;
            }
            if !b.f.is_identity(self.tol) {
                let names: Vec<&str> = quad.iter().map(|&x| self.ring.name(x)).collect();
                report.push(format!("F^({},{},{}){} is not the identity: {:?}", names[0], names[1], names[2], names[3], b.f));
            }
        }
        report
    }

    /// Evaluates the pentagon equation, optionally restricted to tuples drawn from `labels`.
    pub fn check_pentagon(&self, labels: Option<&[Label]>) -> PentagonReport {
        let all: Vec<Label> = self.ring.labels().collect();
        let pool: Vec<Label> = labels.map(|l| l.to_vec()).unwrap_or(all);
        let mut outer = Vec::new();
        for &p in &pool {
            for &q in &pool {
                for &r in &pool {
                    for &s in &pool {
                        for &t in &pool {
                            outer.push((p, q, r, s, t));
                        }
                    }
                }
            }
        }
        let partial: Vec<(usize, f64, bool, Option<PentagonViolation>)> = outer
            .par_iter()
            .map(|&(p, q, r, s, t)| self.pentagon_outer(&pool, p, q, r, s, t))
            .collect();
        let mut report = PentagonReport {
            checked: 0,
            max_residual: 0.0,
            exact_zero: true,
            first_violation: None,
            passed: true,
        };
        for (n, res, zero, viol) in partial {
            report.checked += n;
            report.max_residual = report.max_residual.max(res);
            report.exact_zero &= zero;
            if report.first_violation.is_none() && viol.is_some() {
                report.first_violation = viol;
                report.passed = false;
            }
        }
        report
    }

    fn pentagon_outer(
        &self,
        pool: &[Label],
        p: Label,
        q: Label,
        r: Label,
        s: Label,
        t: Label,
    ) -> (usize, f64, bool, Option<PentagonViolation>) {
        let n = |a, b, c| self.ring.n(a, b, c);
        let mut count = 0;
        let mut max_res: f64 = 0.0;
        let mut exact_zero = true;
        let mut first = None;
        for &u in pool.iter().filter(|&&u| n(p, q, u) > 0) {
            for &x in pool.iter().filter(|&&x| n(u, r, x) > 0 && n(x, s, t) > 0) {
                for &v in pool.iter().filter(|&&v| n(r, s, v) > 0) {
                    for &y in pool.iter().filter(|&&y| n(q, v, y) > 0 && n(p, y, t) > 0) {
                        for mu in 0..n(p, y, t) {
                            for be in 0..n(q, v, y) {
                                for ga in 0..n(r, s, v) {
                                    for al in 0..n(p, q, u) {
                                        for de in 0..n(u, r, x) {
                                            for nu in 0..n(x, s, t) {
                                                let mut lhs = S::zero();
                                                for w in self.ring.labels() {
                                                    for ka in 0..n(w, s, y) {
                                                        for la in 0..n(p, w, x) {
                                                            for et in 0..n(q, r, w) {
                                                                lhs = lhs
                                                                    + self.f(p, q, r, x, (w, la, et), (u, al, de)).clone()
                                                                        * self.f(p, w, s, t, (y, mu, ka), (x, la, nu)).clone()
                                                                        * self.f(q, r, s, y, (v, be, ga), (w, et, ka)).clone();
                                                            }
                                                        }
                                                    }
                                                }
                                                let mut rhs = S::zero();
                                                for si in 0..n(u, v, t) {
                                                    rhs = rhs
                                                        + self.f(p, q, v, t, (y, mu, be), (u, al, si)).clone()
                                                            * self.f(u, r, s, t, (v, si, ga), (x, de, nu)).clone();
                                                }
                                                count += 1;
                                                let diff = lhs.clone() - rhs.clone();
                                                let res = diff.magnitude();
                                                max_res = max_res.max(res);
                                                exact_zero &= diff.is_zero(0.0);
                                                if first.is_none() && !lhs.approx_eq(&rhs, self.tol) {
                                                    first = Some(PentagonViolation {
                                                        labels: [p, q, r, s, t, u, v, x, y],
                                                        multiplicities: [mu, be, ga, al, de, nu],
                                                        lhs: lhs.to_string(),
                                                        rhs: rhs.to_string(),
                                                        residual: res,
                                                    });
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        (count, max_res, exact_zero, first)
    }

    /// Conjugates every block by the induced basis change: `F' = A F B^{-1}`.
    pub fn apply_gauge(&self, gauge: &GaugeTransform<S>) -> Result<(CategoryData<S>, GaugeFlags)> {
        let ring = &self.ring;
        let one = ring.unit();
        let mut flags = GaugeFlags::default();
        let mut inverses = BTreeMap::new();
        for (&(i, j, k), m) in gauge.iter() {
            let dim = ring.n(i, j, k);
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::ShapeMismatch {
                    expected: format!("{dim}x{dim} gauge block for ({i},{j},{k})"),
                    found: format!("{}x{}", m.rows(), m.cols()),
                });
            }
            let inv = m.inverse(self.tol).ok_or(Error::NonInvertibleGauge([i, j, k]))?;
            inverses.insert((i, j, k), inv);
            if !m.mul(&m.transpose()).is_identity(self.tol) {
                flags.non_covector_preserving.push((i, j, k));
            }
            if (i == one || j == one) && !m.is_identity(self.tol) {
                flags.alters_unit_spaces.push((i, j, k));
            }
        }
        let mut fblocks = BTreeMap::new();
        for (&[i, j, k, l], b) in &self.blocks {
            let rows = ring.right_basis(i, j, k, l);
            let cols = ring.left_basis(i, j, k, l);
            let mut a = Matrix::zeros(rows.len(), rows.len());
            for (x, &(p, a1, b1)) in rows.iter().enumerate() {
                for (y, &(p2, a2, b2)) in rows.iter().enumerate() {
                    if p != p2 {
                        continue;
                    }
                    a[(x, y)] = entry_or_delta(gauge.get(i, p, l), a1, a2)
                        * entry_or_delta(gauge.get(j, k, p), b1, b2);
                }
            }
            let mut binv = Matrix::zeros(cols.len(), cols.len());
            for (x, &(q, c1, d1)) in cols.iter().enumerate() {
                for (y, &(q2, c2, d2)) in cols.iter().enumerate() {
                    if q != q2 {
                        continue;
                    }
                    binv[(x, y)] = entry_or_delta(inverses.get(&(i, j, q)), c1, c2)
                        * entry_or_delta(inverses.get(&(q, k, l)), d1, d2);
                }
            }
            fblocks.insert([i, j, k, l], a.mul(&b.f).mul(&binv));
        }
        let field = self.field;
        let mut out = CategoryData::new(
            self.name.clone(),
            ring.clone(),
            if S::BACKEND == crate::scalar::Backend::Exact {
                fblocks
                    .values()
                    .flat_map(|m| m.entries().iter())
                    .fold(field, |acc, x| acc.join(x.field_of()))
            } else {
                field
            },
            fblocks,
            self.convention,
            self.tol,
        )?;
        out.notes = self.notes.clone();
        if !flags.non_covector_preserving.is_empty() {
            out.notes.push(format!(
                "gauge does not preserve the covector duality on {:?}",
                flags.non_covector_preserving
            ));
        }
        if !flags.alters_unit_spaces.is_empty() {
            out.notes.push(format!(
                "gauge alters unit spaces {:?}",
                flags.alters_unit_spaces
            ));
        }
        Ok((out, flags))
    }

    /// Rescales the spaces `H_{kbar k}^1` so that `F°_k = F°_{kbar}` for every label.
    pub fn rebalance_fo(&self, roots: &mut RootChoice<S>) -> Result<CategoryData<S>> {
        let mut gauge = GaugeTransform::identity();
        let one = self.ring.unit();
        let mut touched = false;
        for k in self.ring.labels() {
            let kb = self.ring.dual(k);
            if kb <= k {
                continue;
            }
            let ratio = self.fo(k).div(&self.fo(kb))?;
            if ratio.is_one(self.tol) {
                continue;
            }
            let r = roots.sqrt(&format!("rebalance:{k}"), &ratio)?;
            let xi = roots.sqrt(&format!("rebalance4:{k}"), &r)?;
            // F°_k picks up the square of the scale on H_{kbar k}^1 and the
            // inverse square of the scale on H_{k kbar}^1.
            gauge.set(kb, k, one, Matrix::scalar(xi.inv()?));
            gauge.set(k, kb, one, Matrix::scalar(xi));
            touched = true;
        }
        if !touched {
            return Ok(self.clone());
        }
        let (mut out, _) = self.apply_gauge(&gauge)?;
        out.notes.push("rebalanced so that F°_k = F°_kbar".into());
        Ok(out)
    }

    /// The same data over complex doubles.
    pub fn to_float(&self) -> CategoryData<Float> {
        self.convert().expect("float backend accepts complex values")
    }

    /// Re-expresses the data in another backend via the complex embedding;
    /// `None` if the target cannot represent some entry.
    pub fn convert<T: Scalar>(&self) -> Option<CategoryData<T>> {
        let mut fblocks = BTreeMap::new();
        for (q, b) in &self.blocks {
            let rows = (0..b.f.rows())
                .map(|r| b.f.row(r).iter().map(|x| T::from_complex(x.to_complex())).collect::<Option<Vec<T>>>())
                .collect::<Option<Vec<_>>>()?;
            fblocks.insert(*q, Matrix::from_rows(rows).ok()?);
        }
        let mut out = CategoryData::new(
            self.name.clone(),
            self.ring.clone(),
            Field::C,
            fblocks,
            self.convention,
            if S::BACKEND == crate::scalar::Backend::Exact && T::BACKEND == crate::scalar::Backend::Float {
                crate::scalar::default_tol()
            } else {
                self.tol
            },
        )
        .ok()?;
        out.notes = self.notes.clone();
        Some(out)
    }

    /// Replaces one block; used to build perturbed data.
    pub fn with_block(&self, quad: [Label; 4], f: Matrix<S>) -> Result<CategoryData<S>> {
        let mut fblocks: BTreeMap<[Label; 4], Matrix<S>> =
            self.blocks.iter().map(|(q, b)| (*q, b.f.clone())).collect();
        fblocks.insert(quad, f);
        let field = if S::BACKEND == crate::scalar::Backend::Exact {
            fblocks
                .values()
                .flat_map(|m| m.entries().iter())
                .fold(self.field, |acc, x| acc.join(x.field_of()))
        } else {
            self.field
        };
        let mut out = CategoryData::new(
            self.name.clone(),
            self.ring.clone(),
            field,
            fblocks,
            self.convention,
            self.tol,
        )?;
        out.notes = self.notes.clone();
        Ok(out)
    }

    pub fn with_convention(mut self, convention: CodualConvention) -> Self {
        self.convention = convention;
        self
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn to_float(&self) -> Matrix<Float> {
        let rows = (0..self.rows())
            .map(|r| self.row(r).iter().map(|x| Float(x.to_complex())).collect())
            .collect();
        Matrix::from_rows(rows).expect("rectangular")
    }
}
