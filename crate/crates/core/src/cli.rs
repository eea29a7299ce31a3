//! Batch front end: each command reads one JSON document, delegates to a
//! single library operation, and writes a JSON report.
//!
//! Exit codes: 0 success, 1 negative answer (relations violated, not
//! realizable, verification failed), 2 malformed input, 3 unsupported input.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::canonical::{canonical_spanning_forest, canonicalize, AssociatedBipartiteGraph};
use crate::error::Error;
use crate::json::{
    forest_to_doc, parse_matrix, parse_phirotope, CanonicalizationDoc, PhirotopeDoc, VerdictDoc, ViolationDoc,
    WitnessDoc,
};
use crate::phase::Tolerance;
use crate::phirotope::Phirotope;
use crate::realize::{decide_realizability, verify, RealizabilityVerdict, UnsupportedReason};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Validate,
    FromMatrix,
    Canonicalize,
    OrientCheck,
    Realize,
    Verify,
    Tree,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Validate => "validate",
            CommandKind::FromMatrix => "from-matrix",
            CommandKind::Canonicalize => "canonicalize",
            CommandKind::OrientCheck => "orient-check",
            CommandKind::Realize => "realize",
            CommandKind::Verify => "verify",
            CommandKind::Tree => "tree",
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "phasemat",
    version,
    about = "Phirotope validation, canonical forms and realizability"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the Grassmann–Plücker relations of a phirotope
    Validate(CommonArgs),
    /// Phirotope of a matrix
    FromMatrix(CommonArgs),
    /// Canonical rephasing of a phirotope
    Canonicalize(CommonArgs),
    /// Whether a phirotope is essentially oriented
    OrientCheck(CommonArgs),
    /// Decide realizability of a uniform phirotope
    Realize(CommonArgs),
    /// Check that a matrix realizes a phirotope
    Verify(CommonArgs),
    /// Canonical spanning forest of the associated bipartite graph
    Tree(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Input JSON file
    #[arg(long)]
    pub input: PathBuf,
    /// Output file (standard output if absent)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Angular tolerance in radians
    #[arg(long, default_value_t = Tolerance::DEFAULT.eps(), allow_negative_numbers = true)]
    pub tol: f64,
    #[arg(long)]
    pub pretty: bool,
    /// Worker threads for the parallel checks
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandConfig {
    pub command: CommandKind,
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub tolerance: f64,
    pub pretty: bool,
    pub threads: Option<usize>,
}

impl From<Cli> for CommandConfig {
    fn from(cli: Cli) -> Self {
        let (command, a) = match cli.command {
            Command::Validate(a) => (CommandKind::Validate, a),
            Command::FromMatrix(a) => (CommandKind::FromMatrix, a),
            Command::Canonicalize(a) => (CommandKind::Canonicalize, a),
            Command::OrientCheck(a) => (CommandKind::OrientCheck, a),
            Command::Realize(a) => (CommandKind::Realize, a),
            Command::Verify(a) => (CommandKind::Verify, a),
            Command::Tree(a) => (CommandKind::Tree, a),
        };
        CommandConfig {
            command,
            input: a.input,
            output: a.output,
            tolerance: a.tol,
            pretty: a.pretty,
            threads: a.threads,
        }
    }
}

/// A finished command: exit code and the JSON report.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn malformed(kind: &'static str, message: impl ToString) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            kind,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::DisconnectedGraph(_) => (EXIT_UNSUPPORTED, "disconnected"),
            Error::FirstSubsetNotBasis => (EXIT_UNSUPPORTED, "first_subset_not_basis"),
            Error::RankDeficient => (EXIT_MALFORMED, "rank_deficient"),
            Error::InvalidTolerance(_) => (EXIT_MALFORMED, "invalid_tolerance"),
            Error::DimensionMismatch(_) => (EXIT_MALFORMED, "dimension_mismatch"),
            _ => (EXIT_MALFORMED, "schema"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn payload(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyInput {
    phirotope: Value,
    matrix: Value,
}

/// Runs `command` on already-read input bytes.
pub fn execute(command: CommandKind, input: &[u8], tol: Tolerance) -> (i32, Map<String, Value>) {
    match dispatch(command, input, tol) {
        Ok(out) => out,
        Err(f) => (
            f.code,
            payload(vec![("error", json!({"kind": f.kind, "message": f.message}))]),
        ),
    }
}

fn dispatch(command: CommandKind, input: &[u8], tol: Tolerance) -> Result<(i32, Map<String, Value>), Failure> {
    let value: Value = serde_json::from_slice(input).map_err(|e| Failure::malformed("parse", e))?;
    let phirotope = |v: Value| -> Result<Phirotope, Failure> { Ok(parse_phirotope(v, tol)?) };
    Ok(match command {
        CommandKind::Validate => {
            let phi = phirotope(value)?;
            let violations = phi.check_gp();
            let code = if violations.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
            let docs: Vec<ViolationDoc> = violations.iter().map(Into::into).collect();
            (
                code,
                payload(vec![
                    ("valid", json!(violations.is_empty())),
                    ("violations", to_value(&docs)),
                ]),
            )
        }
        CommandKind::FromMatrix => {
            let m = parse_matrix(value)?;
            let phi = Phirotope::from_matrix(&m, tol)?;
            (
                EXIT_OK,
                payload(vec![
                    ("phirotope", to_value(&PhirotopeDoc::from(&phi))),
                    ("uniform", json!(phi.is_uniform())),
                ]),
            )
        }
        CommandKind::Canonicalize => {
            let c = canonicalize(&phirotope(value)?)?;
            let doc = to_value(&CanonicalizationDoc::from(&c));
            (
                EXIT_OK,
                doc.as_object().expect("struct serializes to an object").clone(),
            )
        }
        CommandKind::OrientCheck => {
            let eo = crate::canonical::is_essentially_oriented(&phirotope(value)?)?;
            (EXIT_OK, payload(vec![("essentially_oriented", json!(eo))]))
        }
        CommandKind::Realize => {
            let verdict = decide_realizability(&phirotope(value)?);
            let code = match verdict {
                RealizabilityVerdict::Realizable { .. } => EXIT_OK,
                RealizabilityVerdict::NotRealizable(_)
                | RealizabilityVerdict::Unsupported(UnsupportedReason::NotAPhirotope) => EXIT_NEGATIVE,
                RealizabilityVerdict::Unsupported(_) => EXIT_UNSUPPORTED,
            };
            let doc = to_value(&VerdictDoc::from(&verdict));
            (code, doc.as_object().expect("verdict serializes to an object").clone())
        }
        CommandKind::Verify => {
            let v: VerifyInput = serde_json::from_value(value).map_err(|e| Failure::malformed("schema", e))?;
            let phi = phirotope(v.phirotope)?;
            let m = parse_matrix(v.matrix)?;
            let witness = verify(&phi, &m)?;
            let code = if witness.is_none() { EXIT_OK } else { EXIT_NEGATIVE };
            (
                code,
                payload(vec![
                    ("verified", json!(witness.is_none())),
                    ("witness", to_value(&witness.as_ref().map(WitnessDoc::from))),
                ]),
            )
        }
        CommandKind::Tree => {
            let g = AssociatedBipartiteGraph::from_phirotope(&phirotope(value)?)?;
            let f = canonical_spanning_forest(&g);
            (
                EXIT_OK,
                payload(vec![
                    ("forest", to_value(&forest_to_doc(&f))),
                    ("component_count", json!(f.component_count)),
                ]),
            )
        }
    })
}

fn report(command: CommandKind, digest: Option<String>, tol: f64, body: Map<String, Value>) -> Value {
    let mut out = Map::new();
    out.insert("command".into(), json!(command.name()));
    out.insert(
        "provenance".into(),
        json!({
            "input_sha256": digest,
            "tolerance": tol,
            "version": env!("CARGO_PKG_VERSION"),
        }),
    );
    out.extend(body);
    Value::Object(out)
}

/// Reads the input, runs the command (on a dedicated pool when a thread
/// count is given) and builds the report. Does not write anything.
pub fn run(config: &CommandConfig) -> Outcome {
    let fail = |digest: Option<String>, f: Failure| Outcome {
        code: f.code,
        report: report(
            config.command,
            digest,
            config.tolerance,
            payload(vec![("error", json!({"kind": f.kind, "message": f.message}))]),
        ),
    };
    let bytes = match fs::read(&config.input) {
        Ok(b) => b,
        Err(e) => {
            return fail(
                None,
                Failure::malformed("io", format!("{}: {e}", config.input.display())),
            )
        }
    };
    let digest = hex::encode(Sha256::digest(&bytes));
    let tol = match Tolerance::new(config.tolerance) {
        Ok(t) => t,
        Err(e) => return fail(Some(digest), e.into()),
    };
    let exec = || execute(config.command, &bytes, tol);
    let (code, body) = match config.threads {
        None => exec(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(exec),
            Err(e) => return fail(Some(digest), Failure::malformed("threads", e)),
        },
    };
    Outcome {
        code,
        report: report(config.command, Some(digest), config.tolerance, body),
    }
}

/// Serializes the report (with a trailing newline) to the configured
/// output. Returns the exit code, or 2 if writing fails.
pub fn run_and_write(config: &CommandConfig) -> i32 {
    let outcome = run(config);
    let mut text = if config.pretty {
        serde_json::to_string_pretty(&outcome.report)
    } else {
        serde_json::to_string(&outcome.report)
    }
    .expect("report serializes");
    text.push('\n');
    let written = match &config.output {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => outcome.code,
        Err(e) => {
            eprintln!("phasemat: cannot write report: {e}");
            EXIT_MALFORMED
        }
    }
}
