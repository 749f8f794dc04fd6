//! Job specs, the expression parser, dispatch to the engines, the on-disk result
//! cache and JSON report emission for the `stablehom` binary.

mod cache;
mod exec;
mod job;
mod parse;

use serde::Serialize;
use thiserror::Error;

pub use cache::{sha256_hex, ResultCache, CACHE_ENV};
pub use exec::{build_cat, execute, Executed};
pub use job::{CapsOverride, Caps, CatKind, Command, CompareTarget, Expr, FieldSpec, Functors, GroupArg, JobSpec, Rect, VerifyTarget};
pub use parse::{parse_expr, ParseError};

pub const SCHEMA: &str = "stablehom/v1";
pub const CONFIG_ENV: &str = "STABLEHOM_CONFIG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("at {path}: {msg}")]
    Kind { path: String, msg: String },
    #[error("invalid job: {0}")]
    Job(String),
    #[error("io: {0}")]
    Io(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("{module}: {message}")]
    Compute { module: &'static str, message: String },
}

macro_rules! from_engine {
    ($($ty:ty => $module:literal),+ $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> CliError {
                let message = e.to_string();
                if message.contains("cap exceeded") {
                    CliError::Cap(message)
                } else {
                    CliError::Compute { module: $module, message }
                }
            }
        }
    )+};
}

from_engine!(
    crate::fincat::CatError => "fincat",
    crate::homalg::HomAlgError => "homalg",
    crate::grouphom::GroupError => "grouphom",
    crate::mobius::MobiusError => "mobius",
    crate::spans::SpanError => "spans",
    crate::comparison::ComparisonError => "comparison",
    crate::predict::PredictError => "predict",
);

impl From<crate::funrep::FunRepError> for CliError {
    fn from(e: crate::funrep::FunRepError) -> CliError {
        match e {
            crate::funrep::FunRepError::Kind { path, msg } => CliError::Kind { path, msg },
            other => CliError::Compute { module: "funrep", message: other.to_string() },
        }
    }
}

/// The machine-readable form of an error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl From<&CliError> for ErrorRecord {
    fn from(e: &CliError) -> ErrorRecord {
        let (kind, position, path) = match e {
            CliError::Syntax(p) => ("syntax", Some(p.pos), None),
            CliError::Kind { path, .. } => ("kind", None, Some(path.clone())),
            CliError::Job(_) => ("job", None, None),
            CliError::Io(_) => ("io", None, None),
            CliError::Cap(_) => ("cap", None, None),
            CliError::Compute { module, .. } => (*module, None, None),
        };
        ErrorRecord { kind, message: e.to_string(), position, path }
    }
}

/// How a finished job ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    /// A stabilization was not observed within the caps.
    Inconclusive,
    /// A verification failed or the two sides of a comparison differ.
    Fail,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Ok => EXIT_OK,
            RunStatus::Inconclusive => EXIT_INCONCLUSIVE,
            RunStatus::Fail => EXIT_ERROR,
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    command: String,
    status: RunStatus,
    job: &'a JobSpec,
    result: serde_json::Value,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    schema: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    command: Option<String>,
    error: &'a ErrorRecord,
}

/// The result of [`run`]: the JSON report, the optional CSV table and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub json: String,
    pub csv: Option<String>,
    pub cache_hit: bool,
}

#[derive(Serialize, serde::Deserialize)]
struct Cached {
    json: String,
    csv: Option<String>,
}

pub fn error_json(command: Option<String>, e: &CliError) -> String {
    let record = ErrorRecord::from(e);
    let mut s = serde_json::to_string_pretty(&ErrorReport { schema: SCHEMA, status: "error", command, error: &record }).expect("reports serialize");
    s.push('\n');
    s
}

/// Cache key: schema, crate version and the canonical job.
pub fn job_key(job: &JobSpec) -> String {
    sha256_hex(format!("{SCHEMA}\n{}\n{}", env!("CARGO_PKG_VERSION"), job.canonical().to_toml()).as_bytes())
}

fn render(job: &JobSpec) -> Result<(i32, String), CliError> {
    let canonical = job.canonical();
    let done = execute(&canonical)?;
    let mut json = serde_json::to_string_pretty(&Report { schema: SCHEMA, command: job.command.label(), status: done.status, job: &canonical, result: done.result })
        .expect("reports serialize");
    json.push('\n');
    let payload = serde_json::to_string(&Cached { json, csv: done.csv }).expect("reports serialize");
    Ok((done.status.exit_code(), payload))
}

/// Runs a job, through the cache when one is given. Errors become error records with exit code 1.
pub fn run(job: &JobSpec, cache: Option<&ResultCache>) -> Outcome {
    let attempt = match cache {
        Some(c) => c.get_or_compute(&job_key(job), || render(job)),
        None => render(job).map(|(code, payload)| (code, payload, false)),
    };
    match attempt {
        Ok((exit_code, payload, cache_hit)) => {
            let cached: Cached = serde_json::from_str(&payload).expect("payloads are written by render");
            Outcome { exit_code, json: cached.json, csv: cached.csv, cache_hit }
        }
        Err(e) => Outcome { exit_code: EXIT_ERROR, json: error_json(Some(job.command.label()), &e), csv: None, cache_hit: false },
    }
}
