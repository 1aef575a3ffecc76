//! The JSON category file format.
//!
//! ```json
//! {
//!   "schema": "fusion6j-category/v1",
//!   "name": "fib",
//!   "field": "Q(sqrt5)",
//!   "labels": { "names": ["1", "x"], "unit": "1", "dual": ["1", "x"] },
//!   "fusion": [["x", "x", "1", 1], ["x", "x", "x", 1], ...],
//!   "fblocks": [["x", "x", "x", "x", "1", 0, 0, "1", 0, 0, "1/2+1/2*sqrt(5)"], ...],
//!   "convention": "unit"
//! }
//! ```
//!
//! Fusion rules with the unit as a factor may be omitted. An F-entry is
//! `(i, j, k, l, p, alpha, beta, q, gamma, delta, value)` with
//! `alpha` in `H_{ip}^l`, `beta` in `H_{jk}^p`, `gamma` in `H_{ij}^q`,
//! `delta` in `H_{qk}^l`. Omitted entries are zero and omitted blocks with
//! the unit among `i, j, k` are the identity.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::builtin::{tol_for, unit_blocks};
use crate::error::{Error, Result};
use crate::fsym::{CategoryData, CodualConvention};
use crate::linalg::Matrix;
use crate::ring::{FusionRing, Label};
use crate::scalar::{Field, Scalar};

pub const SCHEMA: &str = "fusion6j-category/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelSection {
    pub names: Vec<String>,
    pub unit: String,
    pub dual: Vec<String>,
}

pub type FEntry = (String, String, String, String, String, usize, usize, String, usize, usize, String);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub schema: String,
    pub name: String,
    pub field: String,
    pub labels: LabelSection,
    pub fusion: Vec<(String, String, String, u32)>,
    #[serde(default)]
    pub fblocks: Vec<FEntry>,
    #[serde(default = "default_convention")]
    pub convention: String,
}

fn default_convention() -> String {
    CodualConvention::UnitPairing.name().to_string()
}

/// Line and column (1-based) of the first occurrence of the JSON string `s`.
fn locate(text: &str, s: &str) -> (usize, usize) {
    let needle = serde_json::to_string(s).unwrap_or_default();
    match text.find(&needle) {
        Some(pos) => {
            let before = &text[..pos];
            let line = before.matches('\n').count() + 1;
            let column = pos - before.rfind('\n').map_or(0, |n| n + 1) + 1;
            (line, column)
        }
        None => (1, 1),
    }
}

fn parse_error(text: &str, at: &str, message: String) -> Error {
    let (line, column) = locate(text, at);
    Error::Parse { line, column, message }
}

pub fn from_str<S: Scalar>(text: &str) -> Result<CategoryData<S>> {
    let file: CategoryFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.schema != SCHEMA {
        return Err(parse_error(text, &file.schema, format!("unsupported schema {:?}, expected {SCHEMA:?}", file.schema)));
    }
    let field = Field::parse(&file.field)
        .ok_or_else(|| parse_error(text, &file.field, format!("unknown field {:?}", file.field)))?;
    let convention = CodualConvention::parse(&file.convention)
        .ok_or_else(|| parse_error(text, &file.convention, format!("unknown convention {:?}", file.convention)))?;

    let names = &file.labels.names;
    let index: BTreeMap<&str, Label> = names.iter().enumerate().map(|(n, s)| (s.as_str(), n)).collect();
    if index.len() != names.len() {
        return Err(Error::RingInvalid("duplicate label names".into()));
    }
    let label = |s: &str| index.get(s).copied().ok_or_else(|| parse_error(text, s, format!("unknown label {s:?}")));
    let unit = label(&file.labels.unit)?;
    let dual = file.labels.dual.iter().map(|s| label(s)).collect::<Result<Vec<_>>>()?;
    let mut rules = Vec::new();
    for (i, j, k, n) in &file.fusion {
        rules.push((label(i)?, label(j)?, label(k)?, *n));
    }
    for x in 0..names.len() {
        if !rules.iter().any(|&(i, j, _, _)| (i, j) == (unit, x)) {
            rules.push((unit, x, x, 1));
        }
        if !rules.iter().any(|&(i, j, _, _)| (i, j) == (x, unit)) {
            rules.push((x, unit, x, 1));
        }
    }
    let ring = FusionRing::new(names.clone(), unit, dual, &rules)?;
    let report = ring.validate();
    if !report.is_ok() {
        return Err(Error::RingInvalid(report.violations.join("; ")));
    }

    let mut blocks: BTreeMap<[Label; 4], Matrix<S>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for e in &file.fblocks {
        let quad = [label(&e.0)?, label(&e.1)?, label(&e.2)?, label(&e.3)?];
        let [i, j, k, l] = quad;
        let (p, q) = (label(&e.4)?, label(&e.7)?);
        let row = ring.right_basis(i, j, k, l).iter().position(|&x| x == (p, e.5, e.6));
        let col = ring.left_basis(i, j, k, l).iter().position(|&x| x == (q, e.8, e.9));
        let (Some(row), Some(col)) = (row, col) else {
            return Err(parse_error(
                text,
                &e.10,
                format!("entry ({},{},{},{}) p={} q={} has no basis position", e.0, e.1, e.2, e.3, e.4, e.7),
            ));
        };
        if !seen.insert((quad, row, col)) {
            return Err(parse_error(text, &e.10, format!("duplicate entry for ({},{},{},{})", e.0, e.1, e.2, e.3)));
        }
        let value = S::parse_scalar(&e.10).map_err(|m| parse_error(text, &e.10, format!("bad scalar {:?}: {m}", e.10)))?;
        let (r, c) = ring.block_dims(i, j, k, l);
        blocks.entry(quad).or_insert_with(|| Matrix::zeros(r, c))[(row, col)] = value;
    }
    for (quad, id) in unit_blocks::<S>(&ring) {
        blocks.entry(quad).or_insert(id);
    }
    if let Some(q) = ring.block_quads().into_iter().find(|q| !blocks.contains_key(q)) {
        let n: Vec<&str> = q.iter().map(|&x| ring.name(x)).collect();
        return Err(Error::RingInvalid(format!("no F-entries for required block ({})", n.join(","))));
    }
    CategoryData::new(file.name, ring, field, blocks, convention, tol_for::<S>())
}

pub fn load<S: Scalar>(path: impl AsRef<Path>) -> Result<CategoryData<S>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_str(&text)
}

pub fn to_file<S: Scalar>(c: &CategoryData<S>) -> CategoryFile {
    let ring = c.ring();
    let name = |x: Label| ring.name(x).to_string();
    let fusion = ring.rules().into_iter().map(|(i, j, k, n)| (name(i), name(j), name(k), n)).collect();
    let mut fblocks = Vec::new();
    for b in c.blocks() {
        let [i, j, k, l] = b.labels;
        for (r, &(p, a, bb)) in ring.right_basis(i, j, k, l).iter().enumerate() {
            for (col, &(q, g, d)) in ring.left_basis(i, j, k, l).iter().enumerate() {
                let v = &b.f[(r, col)];
                if !v.is_zero(0.0) {
                    fblocks.push((name(i), name(j), name(k), name(l), name(p), a, bb, name(q), g, d, v.to_string()));
                }
            }
        }
    }
    CategoryFile {
        schema: SCHEMA.to_string(),
        name: c.name.clone(),
        field: c.field().name().to_string(),
        labels: LabelSection {
            names: ring.names().to_vec(),
            unit: name(ring.unit()),
            dual: ring.labels().map(|x| name(ring.dual(x))).collect(),
        },
        fusion,
        fblocks,
        convention: c.convention.name().to_string(),
    }
}

/// Pretty JSON with one fusion rule or F-entry per line.
pub fn to_string<S: Scalar>(c: &CategoryData<S>) -> String {
    let f = to_file(c);
    let rows = |xs: Vec<String>| {
        if xs.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n    {}\n  ]", xs.join(",\n    "))
        }
    };
    format!(
        "{{\n  \"schema\": {},\n  \"name\": {},\n  \"field\": {},\n  \"labels\": {},\n  \"fusion\": {},\n  \"fblocks\": {},\n  \"convention\": {}\n}}",
        j(&f.schema),
        j(&f.name),
        j(&f.field),
        j(&f.labels),
        rows(f.fusion.iter().map(j).collect()),
        rows(f.fblocks.iter().map(j).collect()),
        j(&f.convention),
    )
}

fn j<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("category files serialize")
}

pub fn save<S: Scalar>(c: &CategoryData<S>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_string(c) + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
