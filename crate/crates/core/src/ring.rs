//! Fusion rings: labels, duals, multiplicities and their validity checks.

use serde::Serialize;

use crate::error::{Error, Result};

pub type Label = usize;

/// Index into a right-bracket basis: `(p, a, b)` with `a` in `H_{ip}^l`, `b` in `H_{jk}^p`.
pub type RightIdx = (Label, usize, usize);
/// Index into a left-bracket basis: `(q, c, d)` with `c` in `H_{ij}^q`, `d` in `H_{qk}^l`.
pub type LeftIdx = (Label, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionRing {
    names: Vec<String>,
    unit: Label,
    dual: Vec<Label>,
    // n[(i*r + j)*r + k]
    n: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, msg: String) {
        self.violations.push(msg);
    }
}

impl FusionRing {
    /// Builds a ring from sparse rules `(i, j, k, N)`; checks only index ranges.
    pub fn new(
        names: Vec<String>,
        unit: Label,
        dual: Vec<Label>,
        rules: &[(Label, Label, Label, u32)],
    ) -> Result<Self> {
        let r = names.len();
        if r == 0 {
            return Err(Error::RingInvalid("empty label set".into()));
        }
        if unit >= r {
            return Err(Error::RingInvalid(format!("unit {unit} out of range")));
        }
        if dual.len() != r || dual.iter().any(|&d| d >= r) {
            return Err(Error::RingInvalid("dual map has wrong length or range".into()));
        }
        let mut n = vec![0u32; r * r * r];
        for &(i, j, k, m) in rules {
            if i >= r || j >= r || k >= r {
                return Err(Error::RingInvalid(format!(
                    "fusion rule ({i},{j},{k}) out of range"
                )));
            }
            n[(i * r + j) * r + k] = m;
        }
        Ok(FusionRing {
            names,
            unit,
            dual,
            n,
        })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn labels(&self) -> std::ops::Range<Label> {
        0..self.rank()
    }

    pub fn unit(&self) -> Label {
        self.unit
    }

    pub fn dual(&self, i: Label) -> Label {
        self.dual[i]
    }

    pub fn name(&self, i: Label) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, name: &str) -> Option<Label> {
        self.names.iter().position(|n| n == name)
    }

    pub fn n(&self, i: Label, j: Label, k: Label) -> usize {
        let r = self.rank();
        self.n[(i * r + j) * r + k] as usize
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.n.iter().all(|&m| m <= 1)
    }

    /// All `(i, j, k)` with `N_{ij}^k > 0`.
    pub fn triples(&self) -> Vec<(Label, Label, Label)> {
        let mut out = Vec::new();
        for i in self.labels() {
            for j in self.labels() {
                for k in self.labels() {
                    if self.n(i, j, k) > 0 {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// Nonzero sparse rules, sorted.
    pub fn rules(&self) -> Vec<(Label, Label, Label, u32)> {
        self.triples()
            .into_iter()
            .map(|(i, j, k)| (i, j, k, self.n(i, j, k) as u32))
            .collect()
    }

    pub fn right_basis(&self, i: Label, j: Label, k: Label, l: Label) -> Vec<RightIdx> {
        let mut out = Vec::new();
        for p in self.labels() {
            for a in 0..self.n(i, p, l) {
                for b in 0..self.n(j, k, p) {
                    out.push((p, a, b));
                }
            }
        }
        out
    }

    pub fn left_basis(&self, i: Label, j: Label, k: Label, l: Label) -> Vec<LeftIdx> {
        let mut out = Vec::new();
        for q in self.labels() {
            for c in 0..self.n(i, j, q) {
                for d in 0..self.n(q, k, l) {
                    out.push((q, c, d));
                }
            }
        }
        out
    }

    /// `(rows, cols)` of the block `F^{(ijk)l}`.
    pub fn block_dims(&self, i: Label, j: Label, k: Label, l: Label) -> (usize, usize) {
        let rows = self
            .labels()
            .map(|p| self.n(j, k, p) * self.n(i, p, l))
            .sum();
        let cols = self
            .labels()
            .map(|q| self.n(i, j, q) * self.n(q, k, l))
            .sum();
        (rows, cols)
    }

    /// Quadruples with a nonzero block.
    pub fn block_quads(&self) -> Vec<[Label; 4]> {
        let mut out = Vec::new();
        for i in self.labels() {
            for j in self.labels() {
                for k in self.labels() {
                    for l in self.labels() {
                        let (r, c) = self.block_dims(i, j, k, l);
                        if r > 0 || c > 0 {
                            out.push([i, j, k, l]);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let one = self.unit;
        for i in self.labels() {
            if self.dual(self.dual(i)) != i {
                report.push(format!("dual is not an involution at {}", self.name(i)));
            }
        }
        if self.dual(one) != one {
            report.push("unit is not self-dual".into());
        }
        for i in self.labels() {
            for j in self.labels() {
                let delta = usize::from(i == j);
                if self.n(i, one, j) != delta {
                    report.push(format!(
                        "unit law: N_({},1)^{} = {}",
                        self.name(i),
                        self.name(j),
                        self.n(i, one, j)
                    ));
                }
                if self.n(one, i, j) != delta {
                    report.push(format!(
                        "unit law: N_(1,{})^{} = {}",
                        self.name(i),
                        self.name(j),
                        self.n(one, i, j)
                    ));
                }
                let dual_delta = usize::from(j == self.dual(i));
                if self.n(i, j, one) != dual_delta {
                    report.push(format!(
                        "duality: N_({},{})^1 = {}",
                        self.name(i),
                        self.name(j),
                        self.n(i, j, one)
                    ));
                }
            }
        }
        for i in self.labels() {
            for j in self.labels() {
                for k in self.labels() {
                    for l in self.labels() {
                        let (r, c) = self.block_dims(i, j, k, l);
                        if r != c {
                            report.push(format!(
                                "associativity: ({},{},{},{}) gives {} vs {}",
                                self.name(i),
                                self.name(j),
                                self.name(k),
                                self.name(l),
                                r,
                                c
                            ));
                        }
                    }
                }
            }
        }
        report
    }
}
