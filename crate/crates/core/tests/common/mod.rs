//! Float fixture with fusion multiplicities: the representation category of A4.
#![allow(dead_code)]

use std::collections::BTreeMap;

use fusion6j_core::fsym::CodualConvention;
use fusion6j_core::scalar::{Field, Float};
use fusion6j_core::{CategoryData, FusionRing, Matrix};
use nalgebra::DMatrix;
use num_complex::Complex64;

type M = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Images of the generators `a = (12)(34)` and `b = (123)` for `1, w, wb, 3`.
fn irreps() -> Vec<(M, M)> {
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let one = |z: Complex64| M::from_element(1, 1, z);
    let a3 = M::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-1.0), c(-1.0)]));
    let mut b3 = M::zeros(3, 3);
    b3[(1, 0)] = c(1.0);
    b3[(2, 1)] = c(1.0);
    b3[(0, 2)] = c(1.0);
    vec![
        (one(c(1.0)), one(c(1.0))),
        (one(c(1.0)), one(w)),
        (one(c(1.0)), one(w * w)),
        (a3, b3),
    ]
}

fn vec_of(x: &M) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_column_slice(x.as_slice())
}

/// Basis of `Hom(V_i (x) V_j, V_k)` as `d_k x (d_i d_j)` matrices.
fn hom_basis(reps: &[(M, M)], i: usize, j: usize, k: usize) -> Vec<M> {
    let (di, dj, dk) = (reps[i].0.nrows(), reps[j].0.nrows(), reps[k].0.nrows());
    if i == 0 || j == 0 {
        return if (i == 0 && j == k) || (j == 0 && i == k) { vec![M::identity(dk, dk)] } else { vec![] };
    }
    let n = dk * di * dj;
    let mut rows = Vec::new();
    for g in 0..2 {
        let pick = |r: &(M, M)| if g == 0 { r.0.clone() } else { r.1.clone() };
        let t = pick(&reps[i]).kronecker(&pick(&reps[j]));
        // vec(X T) - vec(rho_k X) with column-major vec.
        let a = t.transpose().kronecker(&M::identity(dk, dk)) - M::identity(di * dj, di * dj).kronecker(&pick(&reps[k]));
        rows.push(a);
    }
    let mut stacked = M::zeros(2 * n, n);
    stacked.view_mut((0, 0), (n, n)).copy_from(&rows[0]);
    stacked.view_mut((n, 0), (n, n)).copy_from(&rows[1]);
    let svd = stacked.svd(false, true);
    let vt = svd.v_t.unwrap();
    let mut out = Vec::new();
    for (idx, s) in svd.singular_values.iter().enumerate() {
        if *s < 1e-9 {
            let v: Vec<Complex64> = vt.row(idx).iter().map(|z| z.conj()).collect();
            out.push(M::from_column_slice(dk, di * dj, &v));
        }
    }
    out
}

pub fn rep_a4() -> CategoryData<Float> {
    let reps = irreps();
    let dims: Vec<usize> = reps.iter().map(|r| r.0.nrows()).collect();
    let r = reps.len();
    let mut hom = BTreeMap::new();
    let mut rules = Vec::new();
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let b = hom_basis(&reps, i, j, k);
                if !b.is_empty() {
                    rules.push((i, j, k, b.len() as u32));
                    hom.insert((i, j, k), b);
                }
            }
        }
    }
    let ring = FusionRing::new(
        vec!["1".into(), "w".into(), "wb".into(), "3".into()],
        0,
        vec![0, 2, 1, 3],
        &rules,
    )
    .unwrap();
    let empty = Vec::new();
    let h = |i: usize, j: usize, k: usize| hom.get(&(i, j, k)).unwrap_or(&empty);
    let mut blocks = BTreeMap::new();
    for [i, j, k, l] in ring.block_quads() {
        let (di, dk) = (dims[i], dims[k]);
        let mut targets = Vec::new();
        for (p, a, b) in ring.right_basis(i, j, k, l) {
            targets.push(&h(i, p, l)[a] * M::identity(di, di).kronecker(&h(j, k, p)[b]));
        }
        let mut cols = Vec::new();
        for (q, cc, d) in ring.left_basis(i, j, k, l) {
            cols.push(&h(q, k, l)[d] * h(i, j, q)[cc].kronecker(&M::identity(dk, dk)));
        }
        let len = cols[0].len();
        let mut basis = M::zeros(len, cols.len());
        for (x, col) in cols.iter().enumerate() {
            basis.set_column(x, &vec_of(col));
        }
        let svd = basis.clone().svd(true, true);
        let mut rows = Vec::new();
        for t in &targets {
            let sol = svd.solve(&vec_of(t), 1e-12).unwrap();
            assert!((&basis * &sol - vec_of(t)).norm() < 1e-10, "F^({i}{j}{k}){l} not solvable");
            rows.push(sol.iter().map(|z| Float(*z)).collect());
        }
        blocks.insert([i, j, k, l], Matrix::from_rows(rows).unwrap());
    }
    CategoryData::new("rep-a4", ring, Field::C, blocks, CodualConvention::UnitPairing, 1e-9).unwrap()
}
