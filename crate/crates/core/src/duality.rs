//! Rigidity scalars, dimensions, paired-dimension roots and traces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fsym::CategoryData;
use crate::linalg::Matrix;
use crate::partial::m_matrix;
use crate::ring::Label;
use crate::scalar::{RootChoice, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MuPolicy {
    AllOnes,
    /// `mu_i^2 / mu_ibar^2 = F°_i / F°_ibar`, so left and right dimensions agree.
    Balanced,
    UserSupplied,
}

impl MuPolicy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ones" => Some(MuPolicy::AllOnes),
            "balanced" => Some(MuPolicy::Balanced),
            _ => None,
        }
    }
}

/// The scalars `mu_i` normalizing the evaluation maps.
#[derive(Clone, Debug)]
pub struct MuChoice<S> {
    pub policy: MuPolicy,
    pub mu: Vec<S>,
}

impl<S: Scalar> MuChoice<S> {
    pub fn get(&self, i: Label) -> &S {
        &self.mu[i]
    }
}

pub fn choose_mu<S: Scalar>(
    c: &CategoryData<S>,
    policy: MuPolicy,
    roots: &mut RootChoice<S>,
) -> Result<MuChoice<S>> {
    let ring = c.ring();
    let mut mu = vec![S::one(); ring.rank()];
    match policy {
        MuPolicy::AllOnes => {}
        MuPolicy::Balanced => {
            for i in ring.labels() {
                let ib = ring.dual(i);
                if ib <= i {
                    continue;
                }
                // Lowest label of the orbit keeps mu = 1.
                let ratio = c.fo(i).div(&c.fo(ib))?;
                if ratio.is_one(c.tol) {
                    continue;
                }
                let r = roots.sqrt(&format!("mu:{i}"), &ratio)?;
                mu[ib] = r.inv()?;
            }
        }
        MuPolicy::UserSupplied => {
            return Err(Error::ShapeMismatch {
                expected: "explicit mu values (use user_mu)".into(),
                found: "UserSupplied policy".into(),
            })
        }
    }
    Ok(MuChoice { policy, mu })
}

/// Wraps explicit values; `mu_1` must be 1 and every value invertible.
pub fn user_mu<S: Scalar>(c: &CategoryData<S>, mu: Vec<S>) -> Result<MuChoice<S>> {
    let ring = c.ring();
    if mu.len() != ring.rank() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} values of mu", ring.rank()),
            found: mu.len().to_string(),
        });
    }
    if !mu[ring.unit()].is_one(c.tol) {
        return Err(Error::FormulaMismatch(format!("mu of the unit must be 1, got {}", mu[ring.unit()])));
    }
    if mu.iter().any(|m| m.is_zero(c.tol)) {
        return Err(Error::DivisionByZero);
    }
    Ok(MuChoice {
        policy: MuPolicy::UserSupplied,
        mu,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionTable<S> {
    pub dim_l: Vec<S>,
    pub dim_r: Vec<S>,
    /// `dim_L dim_R = 1 / (F°_i F°_ibar)`
    pub paired: Vec<S>,
    /// `dim_L / dim_R`
    pub rel: Vec<S>,
}

impl<S: Scalar> DimensionTable<S> {
    /// `d_i = dim_L(i)`
    pub fn d(&self, i: Label) -> &S {
        &self.dim_l[i]
    }
}

pub fn dimensions<S: Scalar>(c: &CategoryData<S>, mu: &MuChoice<S>) -> Result<DimensionTable<S>> {
    let ring = c.ring();
    let n = ring.rank();
    let mut dim_l = Vec::with_capacity(n);
    for i in ring.labels() {
        let ib = ring.dual(i);
        dim_l.push(mu.get(ib).div(&(mu.get(i).clone() * c.fo(ib)))?);
    }
    let dim_r: Vec<S> = ring.labels().map(|i| dim_l[ring.dual(i)].clone()).collect();
    let mut paired = Vec::with_capacity(n);
    let mut rel = Vec::with_capacity(n);
    for i in ring.labels() {
        paired.push((c.fo(i) * c.fo(ring.dual(i))).inv()?);
        rel.push(dim_l[i].div(&dim_r[i])?);
    }
    Ok(DimensionTable {
        dim_l,
        dim_r,
        paired,
        rel,
    })
}

/// Square roots `D_i = sqrt(d_i d_ibar)` and `d_i / D_i`, a root of the relative dimension.
#[derive(Clone, Debug, Serialize)]
pub struct PairedRoots<S> {
    pub root: Vec<S>,
    pub rel_root: Vec<S>,
}

impl<S: Scalar> PairedRoots<S> {
    pub fn get(&self, i: Label) -> &S {
        &self.root[i]
    }
}

/// Takes `D_i = 1/F°_i` whenever `F°_i = F°_ibar`; otherwise records a root
/// under the key `paired-dim:<lowest label of the orbit>`.
pub fn paired_roots<S: Scalar>(
    c: &CategoryData<S>,
    dims: &DimensionTable<S>,
    roots: &mut RootChoice<S>,
) -> Result<PairedRoots<S>> {
    let ring = c.ring();
    let mut root = Vec::with_capacity(ring.rank());
    for i in ring.labels() {
        let ib = ring.dual(i);
        let (fo, fob) = (c.fo(i), c.fo(ib));
        let r = if fo.approx_eq(&fob, c.tol) {
            fo.inv()?
        } else {
            roots.sqrt(&format!("paired-dim:{}", i.min(ib)), &dims.paired[i])?
        };
        root.push(r);
    }
    let rel_root = ring
        .labels()
        .map(|i| dims.dim_l[i].div(&root[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok(PairedRoots { root, rel_root })
}

/// Endomorphism of `i (x) j` given by `sum_k sum_{a,b} f^k_{ab} abar o b`.
pub type EndCoeffs<S> = BTreeMap<Label, Matrix<S>>;

fn trace_with<S: Scalar>(c: &CategoryData<S>, i: Label, j: Label, f: &EndCoeffs<S>, scale: S) -> Result<S> {
    let ring = c.ring();
    let mut acc = S::zero();
    for (&k, fk) in f {
        let n = ring.n(i, j, k);
        if fk.rows() != n || fk.cols() != n || n == 0 {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n} coefficients for k = {k}"),
                found: format!("{}x{}", fk.rows(), fk.cols()),
            });
        }
        acc = acc + fk.mul(&m_matrix(c, i, j, k)?).trace();
    }
    Ok(scale * acc)
}

/// `tr_L(abar o b) = d_i d_j M_{b,a}`
pub fn trace_l<S: Scalar>(c: &CategoryData<S>, dims: &DimensionTable<S>, i: Label, j: Label, f: &EndCoeffs<S>) -> Result<S> {
    trace_with(c, i, j, f, dims.dim_l[i].clone() * dims.dim_l[j].clone())
}

/// `tr_R(abar o b) = d_ibar d_jbar M_{b,a}`
pub fn trace_r<S: Scalar>(c: &CategoryData<S>, dims: &DimensionTable<S>, i: Label, j: Label, f: &EndCoeffs<S>) -> Result<S> {
    trace_with(c, i, j, f, dims.dim_r[i].clone() * dims.dim_r[j].clone())
}

/// The identity of `i (x) j` in the `abar o b` basis.
pub fn identity_coeffs<S: Scalar>(c: &CategoryData<S>, i: Label, j: Label) -> EndCoeffs<S> {
    let ring = c.ring();
    ring.labels()
        .filter(|&k| ring.n(i, j, k) > 0)
        .map(|k| (k, Matrix::identity(ring.n(i, j, k))))
        .collect()
}
