//! Command-line front end for `unirat-core`.
//!
//! Every run prints one `unirat-report` document (see `docs/schema.md`), or a
//! human rendering of it with `--out human`. Exit status: 0 on success, 1
//! when the pipeline stops on a domain error (cone, no usable point, low
//! yield, failed verification), 2 on malformed input.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use unirat_core::points::DEFAULT_SCAN_BUDGET;
use unirat_core::rng::DEFAULT_SEED;

pub mod commands;
pub mod doc;
pub mod error;
mod render;

pub use doc::{psi_from_doc, psi_to_doc, PsiDoc, PSI_SCHEMA, REPORT_SCHEMA, SCHEMA_VERSION};
pub use error::{ErrorClass, ErrorDoc, Failure};

/// Environment variable read when `--seed` is absent.
pub const SEED_ENV: &str = "UNIRAT_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "unirat",
    version,
    about = "Unirational parametrizations of cubic hypersurfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Triple points, cone test, normality, point census.
    Analyze(AnalyzeArgs),
    /// Build, certify and (optionally) slice the parametrization.
    Parametrize(ParametrizeArgs),
    /// Recheck a serialized parametrization against a form.
    Verify(VerifyArgs),
    /// Rational points by specializing the parametrization.
    Generate(GenerateArgs),
    /// Exhaustive point census over a finite field.
    Enumerate(EnumerateArgs),
    /// Lines on a cubic surface over a finite field.
    Lines(LinesArgs),
    /// Restriction of scalars from an extension to its prime field.
    Weilres(WeilArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Modular,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// `Q`, `F<p>` or `F<q>` (q = 4, 8, 9, 16, ...).
    #[arg(long)]
    pub field: String,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    #[serde(skip)]
    pub out: OutFormat,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FormArgs {
    /// Cubic form, e.g. `x0^3+x1^3+x2^3+x3^3`.
    #[arg(long)]
    pub form: String,
    /// Number of ambient coordinates `x0..x{N-1}`; inferred from the form
    /// when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vars: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub form: FormArgs,
    /// Points scanned (finite fields) or vectors searched (Q).
    #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
    pub budget_enum: u64,
    /// Over F3, also run the characteristic-3 search up to this degree.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ParametrizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub form: FormArgs,
    /// Base point `a,b,...`; searched for when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Budget for point searches and censuses.
    #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
    pub budget_enum: u64,
    /// Start from the conjugate root.
    #[arg(long)]
    pub conjugate: bool,
    /// Also restrict to an n-dimensional slice.
    #[arg(long)]
    pub slice: bool,
    /// Write the parametrization to this file instead of embedding it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub form: FormArgs,
    /// A `unirat-psi` document, or a `parametrize` report embedding one.
    #[arg(long)]
    pub psi: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub form: FormArgs,
    /// Parametrization to specialize; built from `--point` when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Over Q, inputs are integers of absolute value at most this.
    #[arg(long, default_value_t = 3)]
    pub height: i64,
    /// Samples drawn before reporting a low yield.
    #[arg(long, default_value_t = 10_000)]
    pub budget_attempts: usize,
    #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
    pub budget_enum: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EnumerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub form: FormArgs,
    #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
    pub budget_enum: u64,
    /// Points listed in the report.
    #[arg(long, default_value_t = 64)]
    pub cap: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LinesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub form: FormArgs,
    #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
    pub budget_enum: u64,
    /// Lines listed in the report.
    #[arg(long, default_value_t = 64)]
    pub cap: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WeilArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Equation over the extension; repeat for a system.
    #[arg(long = "form", required = true)]
    pub forms: Vec<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vars: Option<usize>,
    /// Basis over the prime field, e.g. `1,w`; powers of `w` by default.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Parametrize(_) => "parametrize",
            Command::Verify(_) => "verify",
            Command::Generate(_) => "generate",
            Command::Enumerate(_) => "enumerate",
            Command::Lines(_) => "lines",
            Command::Weilres(_) => "weilres",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Analyze(a) => &a.common,
            Command::Parametrize(a) => &a.common,
            Command::Verify(a) => &a.common,
            Command::Generate(a) => &a.common,
            Command::Enumerate(a) => &a.common,
            Command::Lines(a) => &a.common,
            Command::Weilres(a) => &a.common,
        }
    }

    fn config(&self) -> Value {
        let v = match self {
            Command::Analyze(a) => serde_json::to_value(a),
            Command::Parametrize(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
            Command::Generate(a) => serde_json::to_value(a),
            Command::Enumerate(a) => serde_json::to_value(a),
            Command::Lines(a) => serde_json::to_value(a),
            Command::Weilres(a) => serde_json::to_value(a),
        };
        v.unwrap_or(Value::Null)
    }
}

/// The single document printed per run.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: u32,
    pub command: &'static str,
    pub seed: u64,
    pub config: Value,
    /// `ok` or `error`.
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorDoc>,
    pub result: Value,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    /// `None` when argument parsing failed.
    pub report: Option<Report>,
}

/// Runs one command; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                code,
                stdout,
                stderr,
                report: None,
            };
        }
    };
    run_command(&cli.command)
}

pub fn run_command(cmd: &Command) -> Outcome {
    let start = Instant::now();
    let res = match cmd {
        Command::Analyze(a) => commands::analyze(a),
        Command::Parametrize(a) => commands::parametrize(a),
        Command::Verify(a) => commands::verify(a),
        Command::Generate(a) => commands::generate(a),
        Command::Enumerate(a) => commands::enumerate(a),
        Command::Lines(a) => commands::lines(a),
        Command::Weilres(a) => commands::weilres(a),
    };
    let elapsed = start.elapsed();
    let common = cmd.common();
    let (code, status, error, result) = match res {
        Ok(v) => (0, "ok", None, v),
        Err(f) => (
            f.exit_code(),
            "error",
            Some(f.doc),
            f.partial.unwrap_or(Value::Null),
        ),
    };
    let report = Report {
        schema: REPORT_SCHEMA,
        version: SCHEMA_VERSION,
        command: cmd.name(),
        seed: common.seed,
        config: cmd.config(),
        status,
        error,
        result,
    };
    let stdout = match common.out {
        OutFormat::Json => {
            let mut s = serde_json::to_string(&report).expect("report serializes");
            s.push('\n');
            s
        }
        OutFormat::Human => render::human(&report, elapsed),
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
        report: Some(report),
    }
}
