//! Pivotal structures, Frobenius-Perron dimensions, pseudo-unitarity and
//! Frobenius-Schur indicators.

use serde::Serialize;

use crate::duality::PairedRoots;
use crate::error::{Error, Result};
use crate::fsym::CategoryData;
use crate::partial::EpsilonTable;
use crate::ring::{FusionRing, Label};
use crate::scalar::{Backend, Field, Scalar};

const MAX_SOLUTIONS: usize = 256;

/// Triples whose sign depends on the basis vector; nonempty means no pivotal structure.
pub fn pivotal_obstruction<S: Scalar>(table: &EpsilonTable<S>) -> Vec<(Label, Label, Label)> {
    table.alpha_dependent()
}

#[derive(Clone, Debug, Serialize)]
pub struct PivotalSolution<S> {
    /// `pi_i = sqrt(reldim_i) varpi_i id_i`
    pub varpi: Vec<S>,
    /// `D_i / varpi_i`
    pub dim_l: Vec<S>,
    /// `D_i varpi_i`
    pub dim_r: Vec<S>,
    /// Multiplicative order of each `varpi_i`.
    pub order: Vec<u32>,
    pub spherical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub enum PivotalOutcome<S> {
    Solutions(Vec<PivotalSolution<S>>),
    /// Signs depend on the basis vector at these triples.
    Obstructed(Vec<(Label, Label, Label)>),
    /// The coboundary equation has no root-of-unity solution.
    Unsolvable { witness: String },
}

impl<S> PivotalOutcome<S> {
    pub fn solutions(&self) -> &[PivotalSolution<S>] {
        match self {
            PivotalOutcome::Solutions(s) => s,
            _ => &[],
        }
    }
}

/// Candidate values of `varpi`: roots of unity of order up to `2|I|`
/// (twelfth roots inside the field for the exact backend).
fn candidates<S: Scalar>(rank: usize, field: Field, tol: f64) -> Vec<S> {
    let mut out: Vec<S> = Vec::new();
    let mut push = |z: S| {
        if !out.iter().any(|x| x.approx_eq(&z, tol)) {
            out.push(z);
        }
    };
    match S::BACKEND {
        Backend::Exact => {
            for k in 0..12 {
                if let Some(z) = S::root_of_unity(12, k, field) {
                    push(z);
                }
            }
        }
        Backend::Float => {
            for n in 1..=(2 * rank.max(1)) as u32 {
                for k in 0..n as i64 {
                    if let Some(z) = S::root_of_unity(n, k, field) {
                        push(z);
                    }
                }
            }
        }
    }
    out
}

struct Constraint {
    i: Label,
    j: Label,
    k: Label,
    sign: i8,
}

fn constraints<S: Scalar>(table: &EpsilonTable<S>) -> Vec<Constraint> {
    table
        .entries
        .iter()
        .map(|(&(i, j, k), e)| Constraint { i, j, k, sign: e.eps[0] })
        .collect()
}

fn signed<S: Scalar>(x: S, sign: i8) -> S {
    if sign < 0 {
        -x
    } else {
        x
    }
}

/// Propagates forced values; returns a violated constraint on conflict.
fn propagate<S: Scalar>(
    ring: &FusionRing,
    cons: &[Constraint],
    vals: &mut [Option<S>],
    tol: f64,
) -> std::result::Result<(), String> {
    loop {
        let mut progress = false;
        for i in ring.labels() {
            let ib = ring.dual(i);
            if let (Some(v), None) = (&vals[i], &vals[ib]) {
                vals[ib] = Some(v.inv().map_err(|e| e.to_string())?);
                progress = true;
            }
        }
        for c in cons {
            let (vi, vj, vk) = (vals[c.i].clone(), vals[c.j].clone(), vals[c.k].clone());
            match (vi, vj, vk) {
                (Some(a), Some(b), None) => {
                    vals[c.k] = Some(signed(a * b, c.sign));
                    progress = true;
                }
                (Some(a), Some(b), Some(k)) => {
                    if !(a * b).approx_eq(&signed(k, c.sign), tol) {
                        return Err(format!(
                            "varpi_{} varpi_{} != epsilon varpi_{} with epsilon = {}",
                            c.i, c.j, c.k, c.sign
                        ));
                    }
                }
                _ => {}
            }
        }
        for i in ring.labels() {
            if let (Some(a), Some(b)) = (&vals[i], &vals[ring.dual(i)]) {
                if !(a.clone() * b.clone()).is_one(tol) {
                    return Err(format!("varpi_{i} varpi_ibar != 1"));
                }
            }
        }
        if !progress {
            return Ok(());
        }
    }
}

fn search<S: Scalar>(
    ring: &FusionRing,
    cons: &[Constraint],
    vals: Vec<Option<S>>,
    cands: &[S],
    tol: f64,
    out: &mut Vec<Vec<S>>,
    witness: &mut Option<String>,
) {
    let mut vals = vals;
    if let Err(w) = propagate(ring, cons, &mut vals, tol) {
        witness.get_or_insert(w);
        return;
    }
    match vals.iter().position(|v| v.is_none()) {
        None => {
            if out.len() < MAX_SOLUTIONS {
                out.push(vals.into_iter().map(|v| v.expect("assigned")).collect());
            }
        }
        Some(free) => {
            for z in cands {
                let mut next = vals.clone();
                next[free] = Some(z.clone());
                search(ring, cons, next, cands, tol, out, witness);
            }
        }
    }
}

fn order_of<S: Scalar>(x: &S, tol: f64) -> u32 {
    let mut p = x.clone();
    for m in 1..=1000 {
        if p.is_one(tol) {
            return m;
        }
        p = p * x.clone();
    }
    0
}

/// Solves `varpi_i varpi_j = epsilon_{ij}^k varpi_k`, `varpi_i varpi_ibar = 1`, `varpi_1 = 1`.
pub fn solve_pivotal<S: Scalar>(
    c: &CategoryData<S>,
    table: &EpsilonTable<S>,
    roots: &PairedRoots<S>,
) -> Result<PivotalOutcome<S>> {
    let obstruction = pivotal_obstruction(table);
    if !obstruction.is_empty() {
        return Ok(PivotalOutcome::Obstructed(obstruction));
    }
    let ring = c.ring();
    let cons = constraints(table);
    let cands = candidates::<S>(ring.rank(), c.field(), c.tol);
    let mut start = vec![None; ring.rank()];
    start[ring.unit()] = Some(S::one());
    let mut found = Vec::new();
    let mut witness = None;
    search(ring, &cons, start, &cands, c.tol, &mut found, &mut witness);
    if found.is_empty() {
        return Ok(PivotalOutcome::Unsolvable {
            witness: witness.unwrap_or_else(|| "no candidate root of unity fits".into()),
        });
    }
    let mut sols = Vec::new();
    for varpi in found {
        let dim_l = ring
            .labels()
            .map(|i| roots.get(i).div(&varpi[i]))
            .collect::<Result<Vec<_>>>()?;
        let dim_r = ring.labels().map(|i| roots.get(i).clone() * varpi[i].clone()).collect();
        let order: Vec<u32> = varpi.iter().map(|v| order_of(v, c.tol)).collect();
        let spherical = order.iter().all(|&m| m == 1 || m == 2);
        sols.push(PivotalSolution { varpi, dim_l, dim_r, order, spherical });
    }
    Ok(PivotalOutcome::Solutions(sols))
}

/// Every coboundary relation holds for `sol`.
pub fn verify_solution<S: Scalar>(c: &CategoryData<S>, table: &EpsilonTable<S>, sol: &PivotalSolution<S>) -> bool {
    let ring = c.ring();
    let w = &sol.varpi;
    w[ring.unit()].is_one(c.tol)
        && ring.labels().all(|i| (w[i].clone() * w[ring.dual(i)].clone()).is_one(c.tol))
        && constraints(table).iter().all(|k| {
            (w[k.i].clone() * w[k.j].clone()).approx_eq(&signed(w[k.k].clone(), k.sign), c.tol)
        })
        && sol.order.iter().all(|&m| m > 0)
}

/// `nu_i = varpi_i` for self-dual labels and 1 otherwise.
pub fn fs_indicators<S: Scalar>(c: &CategoryData<S>, sol: &PivotalSolution<S>) -> Vec<S> {
    let ring = c.ring();
    ring.labels()
        .map(|i| if ring.dual(i) == i { sol.varpi[i].clone() } else { S::one() })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FpTable {
    pub dims: Vec<f64>,
    pub iterations: Vec<usize>,
}

impl FpTable {
    /// Largest deviation of `sum_k N_ij^k d_k = d_i d_j`.
    pub fn multiplicativity_residual(&self, ring: &FusionRing) -> f64 {
        let d = &self.dims;
        let mut worst: f64 = 0.0;
        for i in ring.labels() {
            for j in ring.labels() {
                let lhs: f64 = ring.labels().map(|k| ring.n(i, j, k) as f64 * d[k]).sum();
                worst = worst.max((lhs - d[i] * d[j]).abs());
            }
        }
        worst
    }
}

pub const FP_TOL: f64 = 1e-12;
pub const FP_MAX_ITER: usize = 100_000;

/// Spectral radius of each fusion matrix by power iteration on `N_i + 1`.
pub fn fp_dimensions(ring: &FusionRing) -> Result<FpTable> {
    let r = ring.rank();
    let mut dims = Vec::with_capacity(r);
    let mut iterations = Vec::with_capacity(r);
    for i in ring.labels() {
        let apply = |v: &[f64]| -> Vec<f64> {
            (0..r)
                .map(|j| v[j] + (0..r).map(|k| ring.n(i, j, k) as f64 * v[k]).sum::<f64>())
                .collect()
        };
        let mut v = vec![1.0 / (r as f64).sqrt(); r];
        let mut lambda = 0.0;
        let mut done = None;
        for it in 1..=FP_MAX_ITER {
            let w = apply(&v);
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
            let delta = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            lambda = norm;
            v = next;
            if delta < FP_TOL {
                done = Some(it);
                break;
            }
        }
        let it = done.ok_or(Error::NonConvergence {
            label: i,
            iterations: FP_MAX_ITER,
        })?;
        dims.push(lambda - 1.0);
        iterations.push(it);
    }
    Ok(FpTable { dims, iterations })
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudoUnitarity {
    /// Paired dimension and `dFP^2` per label.
    pub comparison: Vec<(String, f64, f64)>,
    pub pseudo_unitary: bool,
    /// `dim_R^pi(i) = dim_L^pi(ibar)` and `dim_L^pi dim_R^pi` = paired, for every solution.
    pub pivotal_dims_consistent: bool,
    /// With positive real roots of the paired dimensions, `K = 1` on every space.
    pub positive_roots_give_trivial_k: Option<bool>,
    pub epsilon_all_plus: bool,
}

pub fn pseudo_unitarity<S: Scalar>(
    c: &CategoryData<S>,
    paired: &[S],
    table: &EpsilonTable<S>,
    fp: &FpTable,
    solutions: &[PivotalSolution<S>],
) -> PseudoUnitarity {
    let ring = c.ring();
    let tol = 1e-9;
    let mut comparison = Vec::new();
    let mut pseudo_unitary = true;
    for i in ring.labels() {
        let z = paired[i].to_complex();
        let fp2 = fp.dims[i] * fp.dims[i];
        if (z.re - fp2).abs() > tol * fp2.max(1.0) || z.im.abs() > tol {
            pseudo_unitary = false;
        }
        comparison.push((ring.name(i).to_string(), z.re, fp2));
    }
    let pivotal_dims_consistent = solutions.iter().all(|s| {
        ring.labels().all(|i| {
            s.dim_r[i].approx_eq(&s.dim_l[ring.dual(i)], c.tol)
                && (s.dim_l[i].clone() * s.dim_r[i].clone()).approx_eq(&paired[i], c.tol)
        })
    });
    let positive_roots_give_trivial_k = pseudo_unitary.then(|| {
        let pos: Vec<f64> = ring.labels().map(|i| paired[i].to_complex().re.sqrt()).collect();
        table.entries.iter().all(|(&(i, j, k), e)| {
            let s = pos[i] * pos[j] / pos[k];
            let n = e.m.rows();
            (0..n).all(|a| {
                (0..n).all(|b| {
                    let want = if a == b { 1.0 } else { 0.0 };
                    (e.m[(a, b)].to_complex() * s - want).norm() < 1e-9
                })
            })
        })
    });
    PseudoUnitarity {
        comparison,
        pseudo_unitary,
        pivotal_dims_consistent,
        positive_roots_give_trivial_k,
        epsilon_all_plus: table.all_plus(),
    }
}
