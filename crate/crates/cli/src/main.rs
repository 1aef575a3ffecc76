use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fusion6j_core::builtin::{builtin, BUILTIN_NAMES};
use fusion6j_core::duality::MuPolicy;
use fusion6j_core::report::{render_json, render_text, run, GaugeMode, Options, Report, Section};
use fusion6j_core::{io, CategoryData, CodualConvention, Error, Exact, Float, Scalar};

/// Verification toolkit for fusion-category 6j-symbol data.
#[derive(Parser)]
#[command(name = "fusion6j", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fusion-ring axioms, unit blocks and invertibility of the special symbols.
    Validate(Common),
    /// Pentagon equations.
    Pentagon(Common),
    /// Special symbols, dimensions and Frobenius-Perron dimensions.
    Dims(Common),
    /// M-matrices, epsilon signs and the partial-dual (S3) checks.
    Epsilon(Common),
    /// Pivotal structures, Frobenius-Schur indicators and pseudo-unitarity.
    Pivotal(Common),
    /// S4 action, tau identities and tetrahedral symmetry.
    Tetra(Common),
    /// Everything above.
    Report(Common),
    /// Writes the input data as a category file to stdout.
    Export(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum MuArg {
    Ones,
    Balanced,
}

#[derive(Clone, Copy, ValueEnum)]
enum GaugeArg {
    Raw,
    Eigen,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Unit,
    Dimweighted,
}

#[derive(Args)]
struct Common {
    /// Built-in data: vec, fib, yanglee, pointed:Z<n>:<s>.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    builtin: Option<String>,
    /// Category file (JSON).
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendArg,
    /// Comparison tolerance for the float backend (default from FUSION6J_TOL or 1e-9).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "balanced")]
    mu: MuArg,
    #[arg(long, value_enum, default_value = "eigen")]
    gauge: GaugeArg,
    /// Overrides the convention stored with the data.
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    /// Seed for sampled S4 checks (rank > 3).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Off-diagonal Fibonacci parameter b (default sqrt(-a)).
    #[arg(long, requires = "builtin")]
    b: Option<String>,
    /// Comma-separated labels restricting the pentagon check.
    #[arg(long, value_delimiter = ',')]
    labels: Option<Vec<String>>,
    /// Print the report as JSON (schema "v1").
    #[arg(long)]
    json: bool,
}

fn load<S: Scalar>(a: &Common) -> Result<CategoryData<S>, Error> {
    let mut c = match (&a.builtin, &a.file) {
        (Some(name), _) => builtin::<S>(name, a.b.as_deref())?,
        (None, Some(path)) => io::load::<S>(path)?,
        (None, None) => unreachable!("clap enforces an input"),
    };
    if let Some(tol) = a.tol {
        c = c.with_tol(tol);
    }
    if let Some(conv) = a.convention {
        c = c.with_convention(match conv {
            ConventionArg::Unit => CodualConvention::UnitPairing,
            ConventionArg::Dimweighted => CodualConvention::DimWeighted,
        });
    }
    Ok(c)
}

fn options<S: Scalar>(a: &Common, c: &CategoryData<S>) -> Result<Options, Error> {
    let pentagon_labels = match &a.labels {
        None => None,
        Some(names) => Some(
            names
                .iter()
                .map(|n| c.ring().label(n).ok_or_else(|| Error::RingInvalid(format!("unknown label {n:?}"))))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    Ok(Options {
        mu: match a.mu {
            MuArg::Ones => MuPolicy::AllOnes,
            MuArg::Balanced => MuPolicy::Balanced,
        },
        gauge: match a.gauge {
            GaugeArg::Raw => GaugeMode::Raw,
            GaugeArg::Eigen => GaugeMode::Eigen,
        },
        seed: a.seed,
        pentagon_labels,
    })
}

enum Outcome {
    Report(Box<Report>),
    Text(String),
}

fn execute<S: Scalar>(cmd: &str, a: &Common) -> Result<Outcome, Error> {
    let c = load::<S>(a)?;
    if cmd == "export" {
        return Ok(Outcome::Text(io::to_string(&c)));
    }
    let opts = options(a, &c)?;
    let sections = Section::for_command(cmd).expect("known subcommand");
    Ok(Outcome::Report(Box::new(run(&c, &sections, &opts))))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, a) = match &cli.command {
        Command::Validate(a) => ("validate", a),
        Command::Pentagon(a) => ("pentagon", a),
        Command::Dims(a) => ("dims", a),
        Command::Epsilon(a) => ("epsilon", a),
        Command::Pivotal(a) => ("pivotal", a),
        Command::Tetra(a) => ("tetra", a),
        Command::Report(a) => ("report", a),
        Command::Export(a) => ("export", a),
    };
    let result = match a.backend {
        BackendArg::Exact => execute::<Exact>(cmd, a),
        BackendArg::Float => execute::<Float>(cmd, a),
    };
    match result {
        // Write errors (a closed pipe) are ignored.
        Ok(Outcome::Text(t)) => {
            let _ = writeln!(std::io::stdout().lock(), "{t}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report(r)) => {
            let text = if a.json { render_json(&r) + "\n" } else { render_text(&r) };
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(r.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::NoRootInField { .. } | Error::FieldMismatch { .. }) && matches!(a.backend, BackendArg::Exact) {
                eprintln!("hint: the data does not fit an exact field; try --backend float");
            }
            if matches!(e, Error::UnknownBuiltin(_)) {
                eprintln!("known builtins: {}", BUILTIN_NAMES.join(", "));
            }
            ExitCode::from(2)
        }
    }
}
