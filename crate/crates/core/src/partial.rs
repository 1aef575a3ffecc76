//! Partial duals `L`, `R` and their rescalings as explicit linear maps, the
//! M-matrices, the sign spectrum `epsilon` and the S3 check.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::duality::{DimensionTable, MuChoice, PairedRoots};
use crate::error::{Error, Result};
use crate::fsym::{CategoryData, GaugeTransform};
use crate::linalg::Matrix;
use crate::ring::{FusionRing, Label};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Orientation {
    /// `H_{ij}^k = Hom(i (x) j, k)`
    ToK,
    /// `Hbar_{ij}^k = Hom(k, i (x) j)`
    FromK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HomSpaceRef {
    pub orientation: Orientation,
    pub i: Label,
    pub j: Label,
    pub k: Label,
}

impl HomSpaceRef {
    pub fn to_k(i: Label, j: Label, k: Label) -> Self {
        HomSpaceRef { orientation: Orientation::ToK, i, j, k }
    }

    pub fn from_k(i: Label, j: Label, k: Label) -> Self {
        HomSpaceRef { orientation: Orientation::FromK, i, j, k }
    }

    pub fn dim(&self, ring: &FusionRing) -> usize {
        ring.n(self.i, self.j, self.k)
    }

    /// All nonzero spaces of both orientations.
    pub fn all(ring: &FusionRing) -> Vec<HomSpaceRef> {
        let mut out = Vec::new();
        for (i, j, k) in ring.triples() {
            out.push(HomSpaceRef::to_k(i, j, k));
            out.push(HomSpaceRef::from_k(i, j, k));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Dual {
    L,
    R,
}

/// The space a partial dual lands in.
pub fn target(ring: &FusionRing, op: Dual, src: HomSpaceRef) -> HomSpaceRef {
    let HomSpaceRef { orientation, i, j, k } = src;
    let flipped = match orientation {
        Orientation::ToK => Orientation::FromK,
        Orientation::FromK => Orientation::ToK,
    };
    match op {
        Dual::L => HomSpaceRef { orientation: flipped, i: ring.dual(i), j: k, k: j },
        Dual::R => HomSpaceRef { orientation: flipped, i: k, j: ring.dual(j), k: i },
    }
}

/// `matrix[t][s]` is the coefficient of target basis vector `t` in the image of source vector `s`.
#[derive(Clone, Debug)]
pub struct HomLinearMap<S> {
    pub source: HomSpaceRef,
    pub target: HomSpaceRef,
    pub matrix: Matrix<S>,
}

impl<S: Scalar> HomLinearMap<S> {
    pub fn identity(ring: &FusionRing, space: HomSpaceRef) -> Self {
        HomLinearMap {
            source: space,
            target: space,
            matrix: Matrix::identity(space.dim(ring)),
        }
    }

    /// `self o first`
    pub fn after(&self, first: &HomLinearMap<S>) -> Result<HomLinearMap<S>> {
        if first.target != self.source {
            return Err(Error::ShapeMismatch {
                expected: format!("{:?}", self.source),
                found: format!("{:?}", first.target),
            });
        }
        Ok(HomLinearMap {
            source: first.source,
            target: self.target,
            matrix: self.matrix.try_mul(&first.matrix)?,
        })
    }

    pub fn scale(&self, s: &S) -> HomLinearMap<S> {
        HomLinearMap {
            source: self.source,
            target: self.target,
            matrix: self.matrix.scale(s),
        }
    }

    pub fn approx_eq(&self, other: &HomLinearMap<S>, tol: f64) -> bool {
        self.source == other.source && self.target == other.target && self.matrix.approx_eq(&other.matrix, tol)
    }
}

fn nonzero<S: Scalar>(c: &CategoryData<S>, src: HomSpaceRef) -> Result<usize> {
    match src.dim(c.ring()) {
        0 => Err(Error::ShapeMismatch {
            expected: "a nonzero morphism space".into(),
            found: format!("{src:?}"),
        }),
        n => Ok(n),
    }
}

/// The unmodified partial dual `L` or `R`.
pub fn partial_map<S: Scalar>(c: &CategoryData<S>, op: Dual, src: HomSpaceRef) -> Result<HomLinearMap<S>> {
    let ring = c.ring();
    let n = nonzero(c, src)?;
    let tgt = target(ring, op, src);
    let m = tgt.dim(ring);
    let one = ring.unit();
    let HomSpaceRef { orientation, i, j, k } = src;
    let (ib, jb) = (ring.dual(i), ring.dual(j));
    let mut mat = Matrix::zeros(m, n);
    match (op, orientation) {
        (Dual::L, Orientation::ToK) => {
            c.block(ib, i, j, j)?;
            for a in 0..n {
                for d in 0..m {
                    mat[(d, a)] = c.f(ib, i, j, j, (k, d, a), (one, 0, 0)).clone();
                }
            }
        }
        (Dual::L, Orientation::FromK) => {
            c.block(ib, i, j, j)?;
            for a in 0..n {
                for d in 0..m {
                    mat[(d, a)] = c.g(ib, i, j, j, (one, 0, 0), (k, d, a)).clone();
                }
            }
        }
        (Dual::R, Orientation::ToK) => {
            c.block(i, j, jb, i)?;
            for a in 0..n {
                for d in 0..m {
                    mat[(d, a)] = c.g(i, j, jb, i, (k, a, d), (one, 0, 0)).clone();
                }
            }
        }
        (Dual::R, Orientation::FromK) => {
            c.block(i, j, jb, i)?;
            for a in 0..n {
                for d in 0..m {
                    mat[(d, a)] = c.f(i, j, jb, i, (one, 0, 0), (k, a, d)).clone();
                }
            }
        }
    }
    Ok(HomLinearMap { source: src, target: tgt, matrix: mat })
}

/// Rescaling that turns `L`, `R` into the involutions `L̆`, `R̆`.
pub fn modified_factor<S: Scalar>(c: &CategoryData<S>, mu: &MuChoice<S>, op: Dual, src: HomSpaceRef) -> Result<S> {
    let ring = c.ring();
    let HomSpaceRef { orientation, i, j, .. } = src;
    let (ib, jb) = (ring.dual(i), ring.dual(j));
    Ok(match (op, orientation) {
        (Dual::L, Orientation::ToK) => mu.get(i).clone(),
        (Dual::L, Orientation::FromK) => (mu.get(ib).clone() * c.fo(i)).inv()?,
        (Dual::R, Orientation::ToK) => mu.get(jb).clone(),
        (Dual::R, Orientation::FromK) => (mu.get(j).clone() * c.fo(jb)).inv()?,
    })
}

pub fn modified_map<S: Scalar>(c: &CategoryData<S>, mu: &MuChoice<S>, op: Dual, src: HomSpaceRef) -> Result<HomLinearMap<S>> {
    let m = partial_map(c, op, src)?;
    Ok(m.scale(&modified_factor(c, mu, op, src)?))
}

/// All `L̆` and `R̆` maps of a category, computed once.
#[derive(Clone, Debug)]
pub struct PartialDuals<S> {
    maps: HashMap<(Dual, HomSpaceRef), HomLinearMap<S>>,
}

impl<S: Scalar> PartialDuals<S> {
    pub fn new(c: &CategoryData<S>, mu: &MuChoice<S>) -> Result<Self> {
        let mut maps = HashMap::new();
        for src in HomSpaceRef::all(c.ring()) {
            for op in [Dual::L, Dual::R] {
                maps.insert((op, src), modified_map(c, mu, op, src)?);
            }
        }
        Ok(PartialDuals { maps })
    }

    pub fn get(&self, op: Dual, src: HomSpaceRef) -> Result<&HomLinearMap<S>> {
        self.maps.get(&(op, src)).ok_or_else(|| Error::ShapeMismatch {
            expected: "a nonzero morphism space".into(),
            found: format!("{src:?}"),
        })
    }

    /// Applies `word` left to right, i.e. `word[0]` acts first.
    pub fn apply_word(&self, src: HomSpaceRef, word: &[Dual]) -> Result<HomLinearMap<S>> {
        let mut acc: Option<HomLinearMap<S>> = None;
        let mut at = src;
        for &op in word {
            let step = self.get(op, at)?;
            at = step.target;
            acc = Some(match acc {
                None => step.clone(),
                Some(prev) => step.after(&prev)?,
            });
        }
        acc.ok_or_else(|| Error::ShapeMismatch {
            expected: "a nonempty word".into(),
            found: "empty".into(),
        })
    }
}

/// First form: `M_{ab} = sum_mu F^{(i j jbar)i}_{(1oo),(k,b,mu)} G^{(i j jbar)i}_{(k,a,mu),(1oo)}`.
pub fn m_matrix_first<S: Scalar>(c: &CategoryData<S>, i: Label, j: Label, k: Label) -> Result<Matrix<S>> {
    let ring = c.ring();
    let (jb, one) = (ring.dual(j), ring.unit());
    let n = ring.n(i, j, k);
    c.block(i, j, jb, i)?;
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = S::zero();
            for mu in 0..ring.n(k, jb, i) {
                acc = acc
                    + c.f(i, j, jb, i, (one, 0, 0), (k, b, mu)).clone()
                        * c.g(i, j, jb, i, (k, a, mu), (one, 0, 0)).clone();
            }
            m[(a, b)] = acc;
        }
    }
    Ok(m)
}

/// Second form: `M_{ab} = sum_mu G^{(ibar i j)j}_{(1oo),(k,mu,b)} F^{(ibar i j)j}_{(k,mu,a),(1oo)}`.
pub fn m_matrix_second<S: Scalar>(c: &CategoryData<S>, i: Label, j: Label, k: Label) -> Result<Matrix<S>> {
    let ring = c.ring();
    let (ib, one) = (ring.dual(i), ring.unit());
    let n = ring.n(i, j, k);
    c.block(ib, i, j, j)?;
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = S::zero();
            for mu in 0..ring.n(ib, k, j) {
                acc = acc
                    + c.g(ib, i, j, j, (one, 0, 0), (k, mu, b)).clone()
                        * c.f(ib, i, j, j, (k, mu, a), (one, 0, 0)).clone();
            }
            m[(a, b)] = acc;
        }
    }
    Ok(m)
}

/// `M^{(ijk)}`, computed both ways; disagreement signals inconsistent data.
pub fn m_matrix<S: Scalar>(c: &CategoryData<S>, i: Label, j: Label, k: Label) -> Result<Matrix<S>> {
    if c.ring().n(i, j, k) == 0 {
        return Err(Error::ShapeMismatch {
            expected: "N_ij^k > 0".into(),
            found: format!("({i},{j},{k})"),
        });
    }
    let m1 = m_matrix_first(c, i, j, k)?;
    let m2 = m_matrix_second(c, i, j, k)?;
    if !m1.approx_eq(&m2, c.tol) {
        return Err(Error::FormulaMismatch(format!(
            "M^({i},{j},{k}): {m1:?} vs {m2:?}"
        )));
    }
    Ok(m1)
}

#[derive(Clone, Debug)]
pub struct EpsilonEntry<S> {
    pub m: Matrix<S>,
    /// `K = D_i D_j / D_k M`, an involution.
    pub k: Matrix<S>,
    /// Signs in the order of the eigenbasis.
    pub eps: Vec<i8>,
    /// Rows are the eigenbasis vectors in the original basis.
    pub basis_change: Matrix<S>,
}

#[derive(Clone, Debug)]
pub struct EpsilonTable<S> {
    pub entries: BTreeMap<(Label, Label, Label), EpsilonEntry<S>>,
}

impl<S: Scalar> EpsilonTable<S> {
    pub fn eps(&self, i: Label, j: Label, k: Label) -> Option<&[i8]> {
        self.entries.get(&(i, j, k)).map(|e| e.eps.as_slice())
    }

    /// `epsilon_{i,j;a}^k`; panics outside the table.
    pub fn sign(&self, i: Label, j: Label, k: Label, a: usize) -> i8 {
        self.entries[&(i, j, k)].eps[a]
    }

    /// Triples where the sign depends on the basis vector.
    pub fn alpha_dependent(&self) -> Vec<(Label, Label, Label)> {
        self.entries
            .iter()
            .filter(|(_, e)| e.eps.windows(2).any(|w| w[0] != w[1]))
            .map(|(t, _)| *t)
            .collect()
    }

    pub fn all_plus(&self) -> bool {
        self.entries.values().all(|e| e.eps.iter().all(|&s| s == 1))
    }

    /// The gauge transformation to the eigenbasis of every `K`.
    pub fn eigengauge(&self) -> GaugeTransform<S> {
        let mut g = GaugeTransform::identity();
        for (&(i, j, k), e) in &self.entries {
            if !e.basis_change.is_identity(0.0) {
                g.set(i, j, k, e.basis_change.clone());
            }
        }
        g
    }

    /// `(T_i)_{jk} = sum_a epsilon_{i,j;a}^k` for every `i`.
    pub fn t_matrices(&self, rank: usize) -> Vec<Vec<Vec<i64>>> {
        let mut t = vec![vec![vec![0i64; rank]; rank]; rank];
        for (&(i, j, k), e) in &self.entries {
            t[i][j][k] = e.eps.iter().map(|&s| s as i64).sum();
        }
        t
    }
}

/// Sign of a matrix known to be `+1` or `-1` times the identity.
fn sign_of<S: Scalar>(x: &S, tol: f64) -> Option<i8> {
    if x.is_one(tol) {
        Some(1)
    } else if (-x.clone()).is_one(tol) {
        Some(-1)
    } else {
        None
    }
}

/// Diagonalizes `K` via the projectors `(1 +- K)/2`.
///
/// Returns the eigenbasis (as rows) and the signs; rows are ordered by the
/// index of the projector row they come from, `+` first on ties.
pub fn involution_eigenbasis<S: Scalar>(k: &Matrix<S>, tol: f64) -> Option<(Matrix<S>, Vec<i8>)> {
    let n = k.rows();
    let half = S::from_ratio(1, 2);
    let id = Matrix::identity(n);
    let plus = id.add(k).scale(&half);
    let minus = id.sub(k).scale(&half);
    let mut picks: Vec<(usize, i8)> = plus
        .independent_rows(tol)
        .into_iter()
        .map(|r| (r, 1))
        .chain(minus.independent_rows(tol).into_iter().map(|r| (r, -1)))
        .collect();
    if picks.len() != n {
        return None;
    }
    picks.sort_by_key(|&(r, s)| (r, -s));
    let rows = picks
        .iter()
        .map(|&(r, s)| if s == 1 { plus.row(r).to_vec() } else { minus.row(r).to_vec() })
        .collect();
    let c = Matrix::from_rows(rows).ok()?;
    c.inverse(tol)?;
    Some((c, picks.iter().map(|&(_, s)| s).collect()))
}

pub fn epsilon_table<S: Scalar>(c: &CategoryData<S>, roots: &PairedRoots<S>) -> Result<EpsilonTable<S>> {
    let ring = c.ring();
    let mut entries = BTreeMap::new();
    for (i, j, k) in ring.triples() {
        let m = m_matrix(c, i, j, k)?;
        let scale = (roots.get(i).clone() * roots.get(j).clone()).div(roots.get(k))?;
        let kmat = m.scale(&scale);
        let n = kmat.rows();
        if !kmat.mul(&kmat).is_identity(c.tol) {
            return Err(Error::NotInvolutive([i, j, k]));
        }
        let (basis_change, eps) = if n == 1 {
            let s = sign_of(&kmat[(0, 0)], c.tol).ok_or(Error::NotInvolutive([i, j, k]))?;
            (Matrix::identity(1), vec![s])
        } else {
            involution_eigenbasis(&kmat, c.tol).ok_or(Error::NotInvolutive([i, j, k]))?
        };
        entries.insert((i, j, k), EpsilonEntry { m, k: kmat, eps, basis_change });
    }
    Ok(EpsilonTable { entries })
}

/// Signs that must be `+1` regardless of the data: `H_{i1}^i`, `H_{1i}^i`, `H_{i ibar}^1`.
pub fn forced_signs_ok<S: Scalar>(ring: &FusionRing, table: &EpsilonTable<S>) -> Vec<String> {
    let one = ring.unit();
    let mut bad = Vec::new();
    for i in ring.labels() {
        for t in [(i, one, i), (one, i, i), (i, ring.dual(i), one)] {
            if table.eps(t.0, t.1, t.2) != Some(&[1][..]) {
                bad.push(format!("epsilon at {t:?} is {:?}", table.eps(t.0, t.1, t.2)));
            }
        }
    }
    bad
}

/// `sum_k D_k sum_a epsilon_{i,j;a}^k = D_i D_j` for every pair.
pub fn sum_rule_violations<S: Scalar>(c: &CategoryData<S>, roots: &PairedRoots<S>, table: &EpsilonTable<S>) -> Vec<(Label, Label)> {
    let ring = c.ring();
    let mut bad = Vec::new();
    for i in ring.labels() {
        for j in ring.labels() {
            let mut lhs = S::zero();
            for k in ring.labels() {
                if let Some(e) = table.eps(i, j, k) {
                    let s: i64 = e.iter().map(|&x| x as i64).sum();
                    lhs = lhs + roots.get(k).clone() * S::from_i64(s);
                }
            }
            let rhs = roots.get(i).clone() * roots.get(j).clone();
            if !lhs.approx_eq(&rhs, c.tol) {
                bad.push((i, j));
            }
        }
    }
    bad
}

/// `T_ibar = T_i^T` and `T_i D = D_i D`; returns the failing labels.
pub fn t_matrix_violations<S: Scalar>(c: &CategoryData<S>, roots: &PairedRoots<S>, table: &EpsilonTable<S>) -> Vec<Label> {
    let ring = c.ring();
    let n = ring.rank();
    let t = table.t_matrices(n);
    let mut bad = Vec::new();
    for i in ring.labels() {
        let ib = ring.dual(i);
        let transpose_ok = (0..n).all(|a| (0..n).all(|b| t[ib][a][b] == t[i][b][a]));
        let eigen_ok = (0..n).all(|a| {
            let lhs = (0..n).fold(S::zero(), |acc, b| acc + S::from_i64(t[i][a][b]) * roots.get(b).clone());
            lhs.approx_eq(&(roots.get(i).clone() * roots.get(a).clone()), c.tol)
        });
        if !(transpose_ok && eigen_ok) {
            bad.push(i);
        }
    }
    bad
}

const LR3: [Dual; 6] = [Dual::R, Dual::L, Dual::R, Dual::L, Dual::R, Dual::L];
const RL3: [Dual; 6] = [Dual::L, Dual::R, Dual::L, Dual::R, Dual::L, Dual::R];

#[derive(Clone, Debug)]
pub struct DoubleDual<S> {
    /// `(L̆R̆)^3`, `R̆` acting first; the right double dual on `H`, the left one on `Hbar`.
    pub composed: HomLinearMap<S>,
    pub closed_form: Matrix<S>,
    pub matches_closed_form: bool,
    /// `((L̆R̆)^3)^2 = reldim_i reldim_j reldim_kbar`.
    pub quadruple_ok: bool,
}

/// Closed form of `(L̆R̆)^3` (`right = true`) or `(R̆L̆)^3` on `space`.
pub fn double_dual_closed_form<S: Scalar>(c: &CategoryData<S>, dims: &DimensionTable<S>, space: HomSpaceRef, right: bool) -> Result<Matrix<S>> {
    let ring = c.ring();
    let HomSpaceRef { orientation, i, j, k } = space;
    let m = m_matrix(c, i, j, k)?;
    let (a, b, d) = if right {
        (i, j, k)
    } else {
        (ring.dual(i), ring.dual(j), ring.dual(k))
    };
    let factor = (dims.d(a).clone() * dims.d(b).clone()).div(dims.d(d))?;
    Ok(match orientation {
        Orientation::ToK => m.transpose().scale(&factor),
        Orientation::FromK => m.scale(&factor),
    })
}

pub fn double_dual_map<S: Scalar>(
    c: &CategoryData<S>,
    duals: &PartialDuals<S>,
    dims: &DimensionTable<S>,
    space: HomSpaceRef,
) -> Result<DoubleDual<S>> {
    let ring = c.ring();
    let composed = duals.apply_word(space, &LR3)?;
    let closed_form = double_dual_closed_form(c, dims, space, true)?;
    let matches_closed_form = composed.matrix.approx_eq(&closed_form, c.tol);
    let quad = composed.matrix.mul(&composed.matrix);
    let HomSpaceRef { i, j, k, .. } = space;
    let factor = dims.rel[i].clone() * dims.rel[j].clone() * dims.rel[ring.dual(k)].clone();
    let quadruple_ok = quad.approx_eq(&Matrix::identity(quad.rows()).scale(&factor), c.tol);
    Ok(DoubleDual { composed, closed_form, matches_closed_form, quadruple_ok })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct S3Report {
    pub l_squared_identity: bool,
    pub r_squared_identity: bool,
    /// `L̆R̆L̆ = R̆L̆R̆` on every space.
    pub braid_relation: bool,
    /// `(L̆R̆)^3 = id` on every space.
    pub double_dual_identity: bool,
    pub genuine_s3: bool,
    /// `epsilon_{L̆a} = epsilon_a = epsilon_{R̆a}` in the eigenbasis gauge.
    pub epsilon_preserved: Option<bool>,
    pub witnesses: Vec<String>,
}

pub fn check_s3<S: Scalar>(c: &CategoryData<S>, duals: &PartialDuals<S>) -> Result<S3Report> {
    let ring = c.ring();
    let mut rep = S3Report {
        l_squared_identity: true,
        r_squared_identity: true,
        braid_relation: true,
        double_dual_identity: true,
        ..Default::default()
    };
    for space in HomSpaceRef::all(ring) {
        let id = HomLinearMap::identity(ring, space);
        if !duals.apply_word(space, &[Dual::L, Dual::L])?.approx_eq(&id, c.tol) {
            rep.l_squared_identity = false;
            rep.witnesses.push(format!("L̆² != id on {space:?}"));
        }
        if !duals.apply_word(space, &[Dual::R, Dual::R])?.approx_eq(&id, c.tol) {
            rep.r_squared_identity = false;
            rep.witnesses.push(format!("R̆² != id on {space:?}"));
        }
        let lrl = duals.apply_word(space, &[Dual::L, Dual::R, Dual::L])?;
        let rlr = duals.apply_word(space, &[Dual::R, Dual::L, Dual::R])?;
        if !lrl.approx_eq(&rlr, c.tol) {
            rep.braid_relation = false;
            rep.witnesses.push(format!("L̆R̆L̆ != R̆L̆R̆ on {space:?}"));
        }
        if !duals.apply_word(space, &LR3)?.approx_eq(&id, c.tol) {
            rep.double_dual_identity = false;
            rep.witnesses.push(format!("double dual != id on {space:?}"));
        }
    }
    rep.genuine_s3 = rep.l_squared_identity && rep.r_squared_identity && rep.braid_relation;
    Ok(rep)
}

/// Checks that `L̆` and `R̆` only connect eigenvectors of equal sign.
///
/// `c` must be in the eigenbasis gauge of `table`.
pub fn epsilon_preserved<S: Scalar>(c: &CategoryData<S>, duals: &PartialDuals<S>, table: &EpsilonTable<S>) -> Result<Vec<String>> {
    let ring = c.ring();
    let mut bad = Vec::new();
    for (i, j, k) in ring.triples() {
        let src = HomSpaceRef::to_k(i, j, k);
        for op in [Dual::L, Dual::R] {
            let map = duals.get(op, src)?;
            let t = map.target;
            for a in 0..map.matrix.cols() {
                for d in 0..map.matrix.rows() {
                    if map.matrix[(d, a)].is_zero(c.tol) {
                        continue;
                    }
                    if table.sign(i, j, k, a) != table.sign(t.i, t.j, t.k, d) {
                        bad.push(format!("{op:?} mixes signs between {src:?}[{a}] and {t:?}[{d}]"));
                    }
                }
            }
        }
    }
    Ok(bad)
}

#[derive(Clone, Debug)]
pub struct IteratedRl<S> {
    /// `RL` on `H_{ij}^{kbar}` from the closed form.
    pub rl: HomLinearMap<S>,
    /// `LR` on `H_{ij}^{kbar}` from the closed form.
    pub lr: HomLinearMap<S>,
    pub rl_matches: bool,
    pub lr_matches: bool,
    /// `(R̆L̆)^3` built from the closed forms.
    pub rl3: HomLinearMap<S>,
    /// `(L̆R̆)^3 (R̆L̆)^3 = id`
    pub inverse_pair: bool,
}

/// `RL(a) = F°_ibar sum_d G^{(ijk)1}_{(kbar,a,o),(ibar,o,d)} d` for `a` in `H_{ij}^{kbar}`.
pub fn rl_closed<S: Scalar>(c: &CategoryData<S>, i: Label, j: Label, kb: Label) -> Result<HomLinearMap<S>> {
    let ring = c.ring();
    let (k, ib) = (ring.dual(kb), ring.dual(i));
    let src = HomSpaceRef::to_k(i, j, kb);
    let n = nonzero(c, src)?;
    let tgt = HomSpaceRef::to_k(j, k, ib);
    let m = tgt.dim(ring);
    c.block(i, j, k, ring.unit())?;
    let fo = c.fo(ib);
    let mut mat = Matrix::zeros(m, n);
    for a in 0..n {
        for d in 0..m {
            mat[(d, a)] = fo.clone() * c.g(i, j, k, ring.unit(), (kb, a, 0), (ib, 0, d)).clone();
        }
    }
    Ok(HomLinearMap { source: src, target: tgt, matrix: mat })
}

/// `LR(a) = F°_j sum_d F^{(kij)1}_{(kbar,o,a),(jbar,d,o)} d` for `a` in `H_{ij}^{kbar}`.
pub fn lr_closed<S: Scalar>(c: &CategoryData<S>, i: Label, j: Label, kb: Label) -> Result<HomLinearMap<S>> {
    let ring = c.ring();
    let (k, jb) = (ring.dual(kb), ring.dual(j));
    let src = HomSpaceRef::to_k(i, j, kb);
    let n = nonzero(c, src)?;
    let tgt = HomSpaceRef::to_k(k, i, jb);
    let m = tgt.dim(ring);
    c.block(k, i, j, ring.unit())?;
    let fo = c.fo(j);
    let mut mat = Matrix::zeros(m, n);
    for a in 0..n {
        for d in 0..m {
            mat[(d, a)] = fo.clone() * c.f(k, i, j, ring.unit(), (kb, 0, a), (jb, d, 0)).clone();
        }
    }
    Ok(HomLinearMap { source: src, target: tgt, matrix: mat })
}

/// `R̆L̆` on `H_{ij}^{kbar}`: `mu_i / (mu_kbar F°_k) RL`.
fn rl_rescaled<S: Scalar>(c: &CategoryData<S>, mu: &MuChoice<S>, i: Label, j: Label, kb: Label) -> Result<HomLinearMap<S>> {
    let k = c.ring().dual(kb);
    let f = mu.get(i).div(&(mu.get(kb).clone() * c.fo(k)))?;
    Ok(rl_closed(c, i, j, kb)?.scale(&f))
}

/// `L̆R̆` on `H_{ij}^{kbar}`: `mu_jbar / (mu_k F°_kbar) LR`.
fn lr_rescaled<S: Scalar>(c: &CategoryData<S>, mu: &MuChoice<S>, i: Label, j: Label, kb: Label) -> Result<HomLinearMap<S>> {
    let ring = c.ring();
    let (k, jb) = (ring.dual(kb), ring.dual(j));
    let f = mu.get(jb).div(&(mu.get(k).clone() * c.fo(kb)))?;
    Ok(lr_closed(c, i, j, kb)?.scale(&f))
}

pub fn iterated_rl<S: Scalar>(c: &CategoryData<S>, mu: &MuChoice<S>, duals: &PartialDuals<S>, space: HomSpaceRef) -> Result<IteratedRl<S>> {
    let ring = c.ring();
    if space.orientation != Orientation::ToK {
        return Err(Error::ShapeMismatch {
            expected: "a space H_{ij}^k".into(),
            found: format!("{space:?}"),
        });
    }
    let HomSpaceRef { i, j, k: kb, .. } = space;
    let rl = rl_closed(c, i, j, kb)?;
    let lr = lr_closed(c, i, j, kb)?;
    let rl_comp = partial_map(c, Dual::R, partial_map(c, Dual::L, space)?.target)?.after(&partial_map(c, Dual::L, space)?)?;
    let lr_comp = partial_map(c, Dual::L, partial_map(c, Dual::R, space)?.target)?.after(&partial_map(c, Dual::R, space)?)?;
    let rl_matches = rl.approx_eq(&rl_comp, c.tol)
        && rl_rescaled(c, mu, i, j, kb)?.approx_eq(&duals.apply_word(space, &[Dual::L, Dual::R])?, c.tol);
    let lr_matches = lr.approx_eq(&lr_comp, c.tol)
        && lr_rescaled(c, mu, i, j, kb)?.approx_eq(&duals.apply_word(space, &[Dual::R, Dual::L])?, c.tol);
    let mut rl3 = HomLinearMap::identity(ring, space);
    let mut lr3 = HomLinearMap::identity(ring, space);
    for _ in 0..3 {
        let t = rl3.target;
        rl3 = rl_rescaled(c, mu, t.i, t.j, t.k)?.after(&rl3)?;
        let t = lr3.target;
        lr3 = lr_rescaled(c, mu, t.i, t.j, t.k)?.after(&lr3)?;
    }
    let inverse_pair = lr3.after(&rl3)?.approx_eq(&HomLinearMap::identity(ring, space), c.tol);
    Ok(IteratedRl { rl, lr, rl_matches, lr_matches, rl3, inverse_pair })
}

/// Closed form of the left double dual `(R̆L̆)^3`, for comparison with [`IteratedRl::rl3`].
pub fn left_double_dual_closed_form<S: Scalar>(c: &CategoryData<S>, dims: &DimensionTable<S>, space: HomSpaceRef) -> Result<Matrix<S>> {
    double_dual_closed_form(c, dims, space, false)
}

/// `(R̆L̆)^3` composed from the single-step duals.
pub fn left_double_dual<S: Scalar>(duals: &PartialDuals<S>, space: HomSpaceRef) -> Result<HomLinearMap<S>> {
    duals.apply_word(space, &RL3)
}
