//! Runs the verification pipeline and renders the result as JSON or text.
//!
//! Checks are consistency conditions that every valid input must satisfy; a
//! failed check gives exit code 1. Verdicts (pseudo-unitarity, sphericality,
//! tetrahedral symmetry and so on) are properties of the data and never change
//! the exit code.

use std::fmt::Write as _;

use serde::Serialize;

use crate::duality::{choose_mu, dimensions, paired_roots, DimensionTable, MuChoice, MuPolicy, PairedRoots};
use crate::error::{Error, Result};
use crate::fsym::CategoryData;
use crate::partial::{
    check_s3, double_dual_map, epsilon_preserved, epsilon_table, forced_signs_ok, iterated_rl, m_matrix_first,
    m_matrix_second, sum_rule_violations, t_matrix_violations, EpsilonTable, HomSpaceRef, Orientation, PartialDuals,
};
use crate::pivotal::{fp_dimensions, fs_indicators, pseudo_unitarity, solve_pivotal, verify_solution, PivotalOutcome, PseudoUnitarity};
use crate::ring::Label;
use crate::scalar::{Backend, Field, RootChoice, Scalar};
use crate::tetra::{check_mf_reduction, check_s4, check_tau_identities, MfReport, S4Report, Sampling, TetraContext, TetraVerdict};

pub const SCHEMA: &str = "v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GaugeMode {
    Raw,
    Eigen,
}

impl GaugeMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "raw" => Some(GaugeMode::Raw),
            "eigen" => Some(GaugeMode::Eigen),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Section {
    Validate,
    Pentagon,
    Dims,
    Epsilon,
    Pivotal,
    Tetra,
}

impl Section {
    /// Sections computed by a CLI subcommand.
    pub fn for_command(cmd: &str) -> Option<Vec<Section>> {
        use Section::*;
        Some(match cmd {
            "validate" => vec![Validate],
            "pentagon" => vec![Validate, Pentagon],
            "dims" => vec![Validate, Dims],
            "epsilon" => vec![Validate, Dims, Epsilon],
            "pivotal" => vec![Validate, Dims, Epsilon, Pivotal],
            "tetra" => vec![Validate, Dims, Tetra],
            "report" => vec![Validate, Pentagon, Dims, Epsilon, Pivotal, Tetra],
            _ => return None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub mu: MuPolicy,
    pub gauge: GaugeMode,
    pub seed: u64,
    /// Restrict the pentagon check to these labels.
    pub pentagon_labels: Option<Vec<Label>>,
}

impl Default for Options {
    fn default() -> Self {
        Options { mu: MuPolicy::Balanced, gauge: GaugeMode::Eigen, seed: 0, pentagon_labels: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingSection {
    pub rank: usize,
    pub labels: Vec<String>,
    pub unit: String,
    pub duals: Vec<String>,
    pub multiplicity_free: bool,
    pub rules: Vec<(String, String, String, u32)>,
    pub blocks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PentagonSection {
    pub checked: usize,
    pub max_residual: f64,
    pub exact_zero: bool,
    pub passed: bool,
    pub first_violation: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimRow {
    pub label: String,
    pub fo: String,
    pub go: String,
    pub mu: String,
    pub dim_l: String,
    pub dim_r: String,
    pub paired: String,
    pub paired_root: String,
    pub reldim: String,
    pub fp: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsSection {
    pub mu_policy: MuPolicy,
    pub rows: Vec<DimRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsRow {
    pub triple: [String; 3],
    pub m: Vec<Vec<String>>,
    pub eps: Vec<i8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonSection {
    pub rows: Vec<EpsRow>,
    pub all_plus: bool,
    pub alpha_dependent: Vec<[String; 3]>,
    pub genuine_s3: bool,
    pub braid_relation: bool,
    pub double_dual_identity: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionRow {
    pub varpi: Vec<String>,
    pub order: Vec<u32>,
    pub dim_l: Vec<String>,
    pub dim_r: Vec<String>,
    pub fs_indicators: Vec<String>,
    pub spherical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PivotalSection {
    pub outcome: String,
    pub obstruction: Vec<[String; 3]>,
    pub witness: Option<String>,
    pub solutions: Vec<SolutionRow>,
    pub pseudo_unitarity: PseudoUnitarity,
}

#[derive(Clone, Debug, Serialize)]
pub struct TetraSection {
    pub gauge: GaugeMode,
    pub sampling: Sampling,
    pub s4_all_ones: S4Report,
    pub s4_balanced: S4Report,
    pub mu_independent: bool,
    pub verdict: TetraVerdict,
    pub mf: Option<MfReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub name: String,
    pub backend: Backend,
    pub field: String,
    pub tol: f64,
    pub convention: String,
    pub options: OptionsEcho,
    pub notes: Vec<String>,
    pub ring: Option<RingSection>,
    pub pentagon: Option<PentagonSection>,
    pub dims: Option<DimsSection>,
    pub epsilon: Option<EpsilonSection>,
    pub pivotal: Option<PivotalSection>,
    pub tetra: Option<TetraSection>,
    pub checks: Vec<Check>,
    pub verdicts: Vec<Verdict>,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptionsEcho {
    pub mu: MuPolicy,
    pub gauge: GaugeMode,
    pub seed: u64,
}

struct Builder<'a, S> {
    c: &'a CategoryData<S>,
    report: Report,
}

impl<S: Scalar> Builder<'_, S> {
    fn name(&self, i: Label) -> String {
        self.c.ring().name(i).to_string()
    }

    fn triple(&self, (i, j, k): (Label, Label, Label)) -> [String; 3] {
        [self.name(i), self.name(j), self.name(k)]
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.report.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn verdict(&mut self, name: &str, value: bool, detail: impl Into<String>) {
        self.report.verdicts.push(Verdict { name: name.into(), value, detail: detail.into() });
    }

    fn failed(&mut self, name: &str, e: &Error) {
        self.check(name, false, e.to_string());
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn root_choice<S: Scalar>(tol: f64) -> RootChoice<S> {
    match S::BACKEND {
        Backend::Exact => RootChoice::new(Field::Tower, 0.0),
        Backend::Float => RootChoice::new(Field::C, tol),
    }
}

struct Derived<S> {
    mu: MuChoice<S>,
    dims: DimensionTable<S>,
    roots: PairedRoots<S>,
    table: Option<EpsilonTable<S>>,
}

fn derive<S: Scalar>(c: &CategoryData<S>, policy: MuPolicy, rc: &mut RootChoice<S>) -> Result<Derived<S>> {
    let mu = choose_mu(c, policy, rc)?;
    let dims = dimensions(c, &mu)?;
    let roots = paired_roots(c, &dims, rc)?;
    Ok(Derived { mu, dims, roots, table: None })
}

/// Runs `sections` on `input`.
pub fn run<S: Scalar>(input: &CategoryData<S>, sections: &[Section], opts: &Options) -> Report {
    let mut rc = root_choice::<S>(input.tol);
    let report = Report {
        schema: SCHEMA,
        name: input.name.clone(),
        backend: S::BACKEND,
        field: input.field().to_string(),
        tol: input.tol,
        convention: input.convention.name().to_string(),
        options: OptionsEcho { mu: opts.mu, gauge: opts.gauge, seed: opts.seed },
        notes: input.notes.clone(),
        ring: None,
        pentagon: None,
        dims: None,
        epsilon: None,
        pivotal: None,
        tetra: None,
        checks: Vec::new(),
        verdicts: Vec::new(),
        exit_code: 0,
    };
    let mut b = Builder { c: input, report };
    let has = |s: Section| sections.contains(&s);

    if has(Section::Validate) {
        validate(&mut b);
    }
    if has(Section::Pentagon) {
        pentagon(&mut b, opts);
    }
    let needs_dims = has(Section::Dims) || has(Section::Epsilon) || has(Section::Pivotal) || has(Section::Tetra);
    if needs_dims && input.is_veined() {
        let derived = derive(input, opts.mu, &mut rc).and_then(|mut d| {
            d.table = Some(epsilon_table(input, &d.roots)?);
            Ok(d)
        });
        // Everything downstream runs in the eigenbasis gauge when requested.
        let gauged = match (&derived, opts.gauge) {
            (Ok(d), GaugeMode::Eigen) => match input.apply_gauge(&d.table.as_ref().expect("table").eigengauge()) {
                Ok((g, flags)) => {
                    if !flags.non_covector_preserving.is_empty() {
                        let spaces: Vec<String> = flags.non_covector_preserving.iter().map(|&t| b.triple(t).join(",")).collect();
                        b.report.notes.push(format!("eigenbasis gauge is not covector-preserving on {}", spaces.join("; ")));
                    }
                    Some(g)
                }
                Err(e) => {
                    b.failed("eigenbasis gauge", &e);
                    None
                }
            },
            _ => None,
        };
        let c = gauged.as_ref().unwrap_or(input);
        let derived = match (gauged.is_some(), derived) {
            (true, _) => derive(c, opts.mu, &mut rc).and_then(|mut d| {
                d.table = Some(epsilon_table(c, &d.roots)?);
                Ok(d)
            }),
            (false, Err(Error::NotInvolutive(_))) | (false, Err(Error::FormulaMismatch(_))) => derive(c, opts.mu, &mut rc),
            (false, d) => d,
        };
        match derived {
            Ok(d) => {
                let mut inner = Builder { c, report: b.report };
                if has(Section::Dims) || has(Section::Epsilon) || has(Section::Pivotal) {
                    dims_section(&mut inner, &d);
                }
                if has(Section::Epsilon) || has(Section::Pivotal) {
                    epsilon_section(&mut inner, &d);
                }
                if has(Section::Pivotal) {
                    pivotal_section(&mut inner, &d);
                }
                if has(Section::Tetra) {
                    tetra_section(&mut inner, &d, opts, &mut rc);
                }
                b.report = inner.report;
            }
            Err(e) => b.failed("dimensions and signs", &e),
        }
    } else if needs_dims {
        b.check("veined", false, "some F° vanishes; rigidity cannot be constructed");
    }

    b.report.exit_code = if b.report.checks.iter().all(|c| c.passed) { 0 } else { 1 };
    b.report
}

fn validate<S: Scalar>(b: &mut Builder<S>) {
    let c = b.c;
    let ring = c.ring();
    let v = ring.validate();
    b.check("fusion ring axioms", v.is_ok(), v.violations.join("; "));
    let t = c.check_triangle();
    b.check("unit blocks are identities", t.is_ok(), t.violations.join("; "));
    let bad: Vec<String> = ring.labels().filter(|&i| c.fo(i).is_zero(c.tol)).map(|i| b.name(i)).collect();
    b.check("veined (every F° invertible)", bad.is_empty(), list(&bad));
    let bad: Vec<String> = c
        .completeness_traces()
        .into_iter()
        .filter(|(_, x)| !x.is_one(c.tol))
        .map(|((i, j), x)| format!("({},{}) -> {x}", b.name(i), b.name(j)))
        .collect();
    b.check("completeness of dual bases", bad.is_empty(), list(&bad));
    b.report.ring = Some(RingSection {
        rank: ring.rank(),
        labels: ring.names().to_vec(),
        unit: b.name(ring.unit()),
        duals: ring.labels().map(|i| b.name(ring.dual(i))).collect(),
        multiplicity_free: ring.is_multiplicity_free(),
        rules: ring.rules().into_iter().map(|(i, j, k, n)| (b.name(i), b.name(j), b.name(k), n)).collect(),
        blocks: c.blocks().count(),
    });
}

fn pentagon<S: Scalar>(b: &mut Builder<S>, opts: &Options) {
    let p = b.c.check_pentagon(opts.pentagon_labels.as_deref());
    let first = p.first_violation.as_ref().map(|v| {
        let names: Vec<String> = v.labels.iter().map(|&x| b.name(x)).collect();
        format!("labels ({}) multiplicities {:?}: lhs {} rhs {}", names.join(","), v.multiplicities, v.lhs, v.rhs)
    });
    b.check(
        "pentagon",
        p.passed,
        format!("{} equations, max residual {:e}{}", p.checked, p.max_residual, if p.exact_zero { " (exactly zero)" } else { "" }),
    );
    b.report.pentagon = Some(PentagonSection {
        checked: p.checked,
        max_residual: p.max_residual,
        exact_zero: p.exact_zero,
        passed: p.passed,
        first_violation: first,
    });
}

fn dims_section<S: Scalar>(b: &mut Builder<S>, d: &Derived<S>) {
    let c = b.c;
    let ring = c.ring();
    let fp = match fp_dimensions(ring) {
        Ok(fp) => {
            let r = fp.multiplicativity_residual(ring);
            b.check("Frobenius-Perron dimensions multiplicative", r < 1e-9, format!("residual {r:e}"));
            fp.dims
        }
        Err(e) => {
            b.failed("Frobenius-Perron dimensions", &e);
            vec![f64::NAN; ring.rank()]
        }
    };
    let specials = c.special_symbols();
    let bad: Vec<String> = specials.iter().filter(|s| !s.go_equals_fo_dual).map(|s| b.name(s.label)).collect();
    b.check("G° of i equals F° of ibar", bad.is_empty(), list(&bad));
    let bad: Vec<String> = specials.iter().filter(|s| !s.go_inverts_fo).map(|s| b.name(s.label)).collect();
    b.verdict("G° of i equals 1/F° of i", bad.is_empty(), if bad.is_empty() { String::new() } else { format!("fails for {}", list(&bad)) });
    let bad: Vec<String> = ring
        .labels()
        .filter(|&i| {
            !(d.dims.paired[i].clone() * c.fo(i) * c.fo(ring.dual(i))).is_one(c.tol)
                || !d.dims.dim_r[i].approx_eq(&d.dims.dim_l[ring.dual(i)], c.tol)
        })
        .map(|i| b.name(i))
        .collect();
    b.check("paired dimension is 1/(F° F°bar) and dim_R(i) = dim_L(ibar)", bad.is_empty(), list(&bad));
    let unequal: Vec<String> = ring.labels().filter(|&i| !d.dims.rel[i].is_one(c.tol)).map(|i| b.name(i)).collect();
    b.verdict("left and right dimensions coincide", unequal.is_empty(), list(&unequal));
    let rows = ring
        .labels()
        .map(|i| DimRow {
            label: b.name(i),
            fo: c.fo(i).to_string(),
            go: c.go(i).to_string(),
            mu: d.mu.get(i).to_string(),
            dim_l: d.dims.dim_l[i].to_string(),
            dim_r: d.dims.dim_r[i].to_string(),
            paired: d.dims.paired[i].to_string(),
            paired_root: d.roots.get(i).to_string(),
            reldim: d.dims.rel[i].to_string(),
            fp: fp[i],
        })
        .collect();
    b.report.dims = Some(DimsSection { mu_policy: d.mu.policy, rows });
}

fn epsilon_section<S: Scalar>(b: &mut Builder<S>, d: &Derived<S>) {
    let c = b.c;
    let ring = c.ring();
    let mut bad = Vec::new();
    for (i, j, k) in ring.triples() {
        match (m_matrix_first(c, i, j, k), m_matrix_second(c, i, j, k)) {
            (Ok(x), Ok(y)) if x.approx_eq(&y, c.tol) => {}
            _ => bad.push(b.triple((i, j, k)).join(",")),
        }
    }
    b.check("both M-matrix formulas agree", bad.is_empty(), bad.join("; "));
    let table = match &d.table {
        Some(t) => t,
        None => {
            b.check("rescaled M is an involution", false, "K^2 != 1 for some triple");
            return;
        }
    };
    b.check("rescaled M is an involution", true, "");
    let f = forced_signs_ok(ring, table);
    b.check("signs forced by unit spaces", f.is_empty(), f.join("; "));
    let s: Vec<String> = sum_rule_violations(c, &d.roots, table).into_iter().map(|(i, j)| format!("({},{})", b.name(i), b.name(j))).collect();
    b.check("dimension sum rule", s.is_empty(), list(&s));
    let t: Vec<String> = t_matrix_violations(c, &d.roots, table).into_iter().map(|i| b.name(i)).collect();
    b.check("T-matrix eigenvector", t.is_empty(), list(&t));
    b.verdict("all epsilon = +1", table.all_plus(), "");

    let duals = match PartialDuals::new(c, &d.mu) {
        Ok(x) => x,
        Err(e) => return b.failed("partial duals", &e),
    };
    let mut closed = Vec::new();
    let mut quad = Vec::new();
    let mut iter = Vec::new();
    for space in HomSpaceRef::all(ring) {
        let tag = || format!("{:?}({},{},{})", space.orientation, b.name(space.i), b.name(space.j), b.name(space.k));
        match double_dual_map(c, &duals, &d.dims, space) {
            Ok(dd) => {
                if !dd.matches_closed_form {
                    closed.push(tag());
                }
                if !dd.quadruple_ok {
                    quad.push(tag());
                }
            }
            Err(e) => closed.push(format!("{}: {e}", tag())),
        }
        if space.orientation == Orientation::ToK {
            match iterated_rl(c, &d.mu, &duals, space) {
                Ok(it) if it.rl_matches && it.lr_matches && it.inverse_pair => {}
                Ok(_) => iter.push(tag()),
                Err(e) => iter.push(format!("{}: {e}", tag())),
            }
        }
    }
    b.check("double dual matches (d_i d_j/d_k) M", closed.is_empty(), closed.join("; "));
    b.check("quadruple dual is reldim_i reldim_j reldim_kbar", quad.is_empty(), quad.join("; "));
    b.check("RL and LR closed forms", iter.is_empty(), iter.join("; "));
    match check_s3(c, &duals) {
        Ok(s3) => {
            b.check("L̆² = R̆² = id", s3.l_squared_identity && s3.r_squared_identity, s3.witnesses.join("; "));
            b.check("braid relation iff double dual is the identity", s3.braid_relation == s3.double_dual_identity, "");
            b.verdict("genuine S3 action", s3.genuine_s3, s3.witnesses.iter().take(4).cloned().collect::<Vec<_>>().join("; "));
            if table.entries.values().all(|e| e.m.is_diagonal(c.tol)) {
                match epsilon_preserved(c, &duals, table) {
                    Ok(bad) => b.verdict("partial duals preserve epsilon", bad.is_empty(), bad.join("; ")),
                    Err(e) => b.failed("partial duals preserve epsilon", &e),
                }
            }
            b.report.epsilon = Some(EpsilonSection {
                rows: table
                    .entries
                    .iter()
                    .map(|(&t, e)| EpsRow {
                        triple: b.triple(t),
                        m: (0..e.m.rows()).map(|r| e.m.row(r).iter().map(|x| x.to_string()).collect()).collect(),
                        eps: e.eps.clone(),
                    })
                    .collect(),
                all_plus: table.all_plus(),
                alpha_dependent: table.alpha_dependent().into_iter().map(|t| b.triple(t)).collect(),
                genuine_s3: s3.genuine_s3,
                braid_relation: s3.braid_relation,
                double_dual_identity: s3.double_dual_identity,
            });
        }
        Err(e) => b.failed("S3 relations", &e),
    }
}

fn pivotal_section<S: Scalar>(b: &mut Builder<S>, d: &Derived<S>) {
    let c = b.c;
    let Some(table) = &d.table else { return };
    let outcome = match solve_pivotal(c, table, &d.roots) {
        Ok(o) => o,
        Err(e) => return b.failed("pivotal structures", &e),
    };
    let sols = outcome.solutions();
    let bad = sols.iter().filter(|s| !verify_solution(c, table, s)).count();
    b.check("pivotal solutions satisfy the coboundary equations", bad == 0, format!("{bad} invalid"));
    b.verdict("pivotal structure exists", !sols.is_empty(), "");
    b.verdict("spherical structure exists", sols.iter().any(|s| s.spherical), "");
    let fp = match fp_dimensions(c.ring()) {
        Ok(fp) => fp,
        Err(e) => return b.failed("Frobenius-Perron dimensions", &e),
    };
    let pu = pseudo_unitarity(c, &d.dims.paired, table, &fp, sols);
    b.check("pivotal dimensions pair to the paired dimension", pu.pivotal_dims_consistent, "");
    if let Some(k) = pu.positive_roots_give_trivial_k {
        b.check("pseudo-unitary data has K = 1 for positive roots", k, "");
    }
    let detail = pu
        .comparison
        .iter()
        .map(|(n, p, f)| format!("{n}: paired {p:.7} vs dFP^2 {f:.7}"))
        .collect::<Vec<_>>()
        .join("; ");
    b.verdict("pseudo-unitary", pu.pseudo_unitary, detail);
    let (name, obstruction, witness) = match &outcome {
        PivotalOutcome::Solutions(_) => ("solutions", vec![], None),
        PivotalOutcome::Obstructed(t) => ("obstructed", t.iter().map(|&x| b.triple(x)).collect(), None),
        PivotalOutcome::Unsolvable { witness } => ("unsolvable", vec![], Some(witness.clone())),
    };
    let strs = |xs: &[S]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    b.report.pivotal = Some(PivotalSection {
        outcome: name.into(),
        obstruction,
        witness,
        solutions: sols
            .iter()
            .map(|s| SolutionRow {
                varpi: strs(&s.varpi),
                order: s.order.clone(),
                dim_l: strs(&s.dim_l),
                dim_r: strs(&s.dim_r),
                fs_indicators: strs(&fs_indicators(c, s)),
                spherical: s.spherical,
            })
            .collect(),
        pseudo_unitarity: pu,
    });
}

fn tetra_section<S: Scalar>(b: &mut Builder<S>, d: &Derived<S>, opts: &Options, rc: &mut RootChoice<S>) {
    let c = b.c;
    let ring = c.ring();
    let sampling = Sampling::auto(ring.rank(), opts.seed);
    let run = |policy: MuPolicy, rc: &mut RootChoice<S>| -> Result<(S4Report, bool)> {
        let mu = choose_mu(c, policy, rc)?;
        let s3 = check_s3(c, &PartialDuals::new(c, &mu)?)?;
        let ctx = TetraContext::new(c, mu, rc)?;
        Ok((check_s4(&ctx, sampling)?, s3.genuine_s3))
    };
    let (ones, bal) = match (run(MuPolicy::AllOnes, rc), run(MuPolicy::Balanced, rc)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return b.failed("S4 relations", &e),
    };
    b.check(
        "S4 relations iff genuine S3 (all-ones and balanced mu)",
        ones.0.holds == ones.1 && bal.0.holds == bal.1,
        "",
    );
    let mu_independent = ones.0.holds == bal.0.holds;
    b.verdict(
        "S4 verdict identical under all-ones and balanced mu",
        mu_independent,
        format!("all-ones {}, balanced {}", ones.0.holds, bal.0.holds),
    );
    let ctx = match TetraContext::new(c, d.mu.clone(), rc) {
        Ok(x) => x,
        Err(e) => return b.failed("tetrahedral context", &e),
    };
    let table = (opts.gauge == GaugeMode::Eigen).then_some(d.table.as_ref()).flatten();
    let v = match check_tau_identities(&ctx, table, sampling) {
        Ok(v) => v,
        Err(e) => return b.failed("tau identities", &e),
    };
    let w = v.witnesses.iter().take(4).cloned().collect::<Vec<_>>().join("; ");
    b.check("F(tau23 v) = F(v)", v.tau23_invariant, w.clone());
    b.check("explicit F/G routes for tau12, tau23, tau34", v.explicit_routes.iter().all(|&x| x), w.clone());
    b.check("M-matrix forms for tau12, tau34", v.m_forms.iter().all(|&x| x), w.clone());
    if let Some(ef) = v.epsilon_forms {
        b.check("sqrt(reldim) epsilon prefactors for tau12, tau34", ef.iter().all(|&x| x), w);
    }
    if let Some(pt) = v.prefactors_trivial {
        b.check("F invariant iff all prefactors are 1", pt == v.f_invariant, "");
    }
    b.verdict("S4 relations hold", v.s4_relations_hold, "");
    b.verdict(
        "F is tetrahedrally invariant",
        v.f_invariant,
        v.deviation_factors.iter().take(4).map(|(x, t, f)| format!("{t} factor {f} on {x}")).collect::<Vec<_>>().join("; "),
    );
    let mf = match d.table.as_ref().filter(|_| ring.is_multiplicity_free()) {
        Some(t) => match check_mf_reduction(c, &d.dims, t, rc) {
            Ok(r) => {
                let detail = if !r.preconditions.is_empty() {
                    r.preconditions.join("; ")
                } else {
                    let counts = r.relations.iter().map(|x| format!("{}: {} pass, {} fail", x.relation, x.passed, x.failed));
                    counts.collect::<Vec<_>>().join("; ")
                };
                b.verdict("basis-level tetrahedral relations (multiplicity-free)", r.holds, detail);
                Some(r)
            }
            Err(e) => {
                b.failed("multiplicity-free reduction", &e);
                None
            }
        },
        None => None,
    };
    b.report.tetra = Some(TetraSection {
        gauge: opts.gauge,
        sampling,
        s4_all_ones: ones.0,
        s4_balanced: bal.0,
        mu_independent,
        verdict: v,
        mf,
    });
}

/// Human-readable rendering.
pub fn render_text(r: &Report) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "fusion6j report (schema {})", r.schema);
    let _ = writeln!(o, "data: {}  backend: {:?}  field: {}  tol: {:e}  convention: {}", r.name, r.backend, r.field, r.tol, r.convention);
    let _ = writeln!(o, "options: mu {:?}, gauge {:?}, seed {}", r.options.mu, r.options.gauge, r.options.seed);
    for n in &r.notes {
        let _ = writeln!(o, "note: {n}");
    }
    if let Some(g) = &r.ring {
        let _ = writeln!(o, "\n[ring] rank {} labels {} unit {} duals {}", g.rank, g.labels.join(" "), g.unit, g.duals.join(" "));
        let _ = writeln!(o, "  multiplicity-free: {}  F-blocks: {}", g.multiplicity_free, g.blocks);
        for (i, j, k, n) in g.rules.iter().filter(|(i, j, ..)| *i != g.unit && *j != g.unit) {
            let _ = writeln!(o, "  N({i},{j};{k}) = {n}");
        }
    }
    if let Some(p) = &r.pentagon {
        let _ = writeln!(o, "\n[pentagon] {} equations, max residual {:e}, exact zero {}", p.checked, p.max_residual, p.exact_zero);
        if let Some(v) = &p.first_violation {
            let _ = writeln!(o, "  first violation: {v}");
        }
    }
    if let Some(d) = &r.dims {
        let _ = writeln!(o, "\n[dimensions] mu policy {:?}", d.mu_policy);
        for x in &d.rows {
            let _ = writeln!(
                o,
                "  {}: F° {}  G° {}  mu {}  dim_L {}  dim_R {}  paired {}  D {}  reldim {}  dFP {:.10}",
                x.label, x.fo, x.go, x.mu, x.dim_l, x.dim_r, x.paired, x.paired_root, x.reldim, x.fp
            );
        }
    }
    if let Some(e) = &r.epsilon {
        let _ = writeln!(o, "\n[epsilon] all +1: {}  genuine S3: {}", e.all_plus, e.genuine_s3);
        for x in &e.rows {
            let signs: String = x.eps.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
            let m: Vec<String> = x.m.iter().map(|row| format!("[{}]", row.join(", "))).collect();
            let _ = writeln!(o, "  ({}) eps {}  M {}", x.triple.join(","), signs, m.join(" "));
        }
    }
    if let Some(p) = &r.pivotal {
        let _ = writeln!(o, "\n[pivotal] {}", p.outcome);
        for t in &p.obstruction {
            let _ = writeln!(o, "  obstruction at ({})", t.join(","));
        }
        if let Some(w) = &p.witness {
            let _ = writeln!(o, "  witness: {w}");
        }
        for s in &p.solutions {
            let _ = writeln!(o, "  varpi [{}] orders {:?} spherical {} nu [{}]", s.varpi.join(", "), s.order, s.spherical, s.fs_indicators.join(", "));
        }
        for (n, pd, f) in &p.pseudo_unitarity.comparison {
            let _ = writeln!(o, "  {n}: paired {pd:.7}  dFP^2 {f:.7}");
        }
    }
    if let Some(t) = &r.tetra {
        let _ = writeln!(o, "\n[tetra] gauge {:?}, {} basis elements checked", t.gauge, t.verdict.checked);
        for (name, s4) in [("all-ones mu", &t.s4_all_ones), ("balanced mu", &t.s4_balanced)] {
            let counts: Vec<String> = s4.relations.iter().map(|x| format!("{} {}/{}", x.relation, x.passed, x.passed + x.failed)).collect();
            let _ = writeln!(o, "  S4 ({name}): {}  [{}]", s4.holds, counts.join(", "));
        }
        let v = &t.verdict;
        let _ = writeln!(o, "  s4_relations_hold {}  f_invariant {}  tau23 {}", v.s4_relations_hold, v.f_invariant, v.tau23_invariant);
        for (x, g, f) in &v.deviation_factors {
            let _ = writeln!(o, "  {g} prefactor {f} on {x}");
        }
        if let Some(mf) = &t.mf {
            let _ = writeln!(o, "  basis-level relations: {}  gauge condition: {}", mf.holds, mf.gauge_condition_holds);
            for x in &mf.relations {
                let _ = writeln!(o, "    {}: {} pass, {} fail", x.relation, x.passed, x.failed);
            }
            for p in &mf.preconditions {
                let _ = writeln!(o, "    precondition not met: {p}");
            }
            if let Some(n) = &mf.convention_note {
                let _ = writeln!(o, "    note: {n}");
            }
        }
    }
    let _ = writeln!(o, "\n[checks]");
    for c in &r.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() || c.passed {
            let _ = writeln!(o, "  {tag} {}", c.name);
        } else {
            let _ = writeln!(o, "  {tag} {}: {}", c.name, c.detail);
        }
    }
    let _ = writeln!(o, "\n[verdicts]");
    for v in &r.verdicts {
        if v.detail.is_empty() {
            let _ = writeln!(o, "  {}: {}", v.name, v.value);
        } else {
            let _ = writeln!(o, "  {}: {} ({})", v.name, v.value, v.detail);
        }
    }
    let _ = writeln!(o, "\nexit code {}", r.exit_code);
    o
}

pub fn render_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}

impl Report {
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }

    pub fn verdict(&self, name: &str) -> Option<bool> {
        self.verdicts.iter().find(|v| v.name == name).map(|v| v.value)
    }
}
