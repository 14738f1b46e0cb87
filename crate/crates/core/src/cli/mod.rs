//! Batch front end: reads facet lists and monomial lists, runs check suites and
//! renders deterministic reports.

mod checks;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::linalg::{LinalgError, Ring};
use crate::monomial::{MonomialDivisors, MonomialError};
use crate::poset::{subset_label, PosetError, SimplicialComplex};

pub use checks::{MORPHISM_CHECKS, REPORT_CHECKS};

/// Version of the JSON layout.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Complex { path: String, source: PosetError },
    #[error("{path}: {source}")]
    Monomials { path: String, source: MonomialError },
    #[error("unknown checks: {}; valid checks are {}", .unknown.join(", "), .valid.join(", "))]
    UnknownChecks {
        unknown: Vec<String>,
        valid: Vec<&'static str>,
    },
    #[error("--ring Fp needs --p")]
    MissingPrime,
    #[error(transparent)]
    Ring(#[from] LinalgError),
}

#[derive(Debug, Parser)]
#[command(
    name = "srgeom",
    version,
    about = "Sheaves on finite posets and Stanley-Reisner checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks on a simplicial complex given as a facet list.
    Report(ReportArgs),
    /// Checks on a morphism given by a list of monomials.
    Morphism(MorphismArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingChoice {
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "Fp", alias = "fp")]
    Fp,
    #[value(name = "Z", alias = "z")]
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct RingArgs {
    #[arg(long, value_enum, default_value = "Q")]
    pub ring: RingChoice,
    /// Characteristic for `--ring Fp`.
    #[arg(long)]
    pub p: Option<u64>,
}

impl RingArgs {
    pub fn resolve(&self) -> Result<Ring, CliError> {
        match self.ring {
            RingChoice::Q => Ok(Ring::Rationals),
            RingChoice::Z => Ok(Ring::Integers),
            RingChoice::Fp => Ok(Ring::prime_field(self.p.ok_or(CliError::MissingPrime)?)?),
        }
    }
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Facet-list file.
    pub input: PathBuf,
    #[command(flatten)]
    pub ring: RingArgs,
    /// Comma-separated checks; all of them when omitted.
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub out: OutFormat,
}

#[derive(Debug, Args)]
pub struct MorphismArgs {
    /// Monomial-list file.
    pub input: PathBuf,
    #[command(flatten)]
    pub ring: RingArgs,
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub out: OutFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational output with nothing to verify.
    Info,
    /// Not applicable to the chosen ring or input.
    Skipped,
}

impl Verdict {
    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
            Verdict::Skipped => "skipped",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A finished report: the JSON document and whether every verification passed.
#[derive(Clone, Debug)]
pub struct Report {
    pub document: Value,
    pub passed: bool,
    pub format: OutFormat,
}

impl Report {
    /// Exit status: 0 when every verification passed, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        u8::from(!self.passed)
    }

    pub fn render(&self) -> String {
        match self.format {
            OutFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.document).expect("values serialize");
                s.push('\n');
                s
            }
            OutFormat::Text => render_text(&self.document),
        }
    }
}

fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    let field = |k: &str| doc[k].as_str().unwrap_or_default().to_string();
    let _ = writeln!(
        out,
        "srgeom {} {} (ring {})",
        field("command"),
        field("input"),
        field("ring")
    );
    if let Some(checks) = doc["checks"].as_object() {
        for (name, entry) in checks {
            let verdict = entry["verdict"].as_str().unwrap_or_default().to_uppercase();
            let _ = writeln!(out, "{verdict:<7} {name}");
            let body = serde_json::to_string(&entry["result"]).expect("values serialize");
            let _ = writeln!(out, "        {body}");
        }
    }
    let overall = if doc["passed"].as_bool() == Some(true) {
        "PASS"
    } else {
        "FAIL"
    };
    let _ = writeln!(out, "overall {overall}");
    out
}

fn select(
    requested: &[String],
    valid: &'static [&'static str],
) -> Result<Vec<&'static str>, CliError> {
    if requested.is_empty() {
        return Ok(valid.to_vec());
    }
    let unknown: Vec<String> = requested
        .iter()
        .filter(|c| !valid.contains(&c.as_str()))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(CliError::UnknownChecks {
            unknown,
            valid: valid.to_vec(),
        });
    }
    Ok(valid
        .iter()
        .copied()
        .filter(|v| requested.iter().any(|c| c == v))
        .collect())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn assemble(
    command: &str,
    input: &Path,
    ring: Ring,
    subject: Value,
    results: Vec<(&'static str, Verdict, Value)>,
    format: OutFormat,
) -> Report {
    let passed = results.iter().all(|(_, v, _)| *v != Verdict::Fail);
    let mut checks = Map::new();
    for (name, verdict, result) in results {
        checks.insert(
            name.to_string(),
            json!({ "verdict": verdict.label(), "result": result }),
        );
    }
    let document = json!({
        "schema": SCHEMA,
        "command": command,
        "input": input.display().to_string(),
        "ring": ring.label(),
        "subject": subject,
        "checks": checks,
        "passed": passed,
    });
    Report {
        document,
        passed,
        format,
    }
}

pub fn run_report(args: &ReportArgs) -> Result<Report, CliError> {
    let ring = args.ring.resolve()?;
    let checks = select(&args.checks, REPORT_CHECKS)?;
    let path = args.input.display().to_string();
    let k = SimplicialComplex::parse(&read(&args.input)?)
        .map_err(|source| CliError::Complex { path, source })?;
    let subject = json!({
        "ambient": k.ambient(),
        "facets": k.facets().iter().map(|&f| subset_label(f, 1)).collect::<Vec<_>>(),
    });
    let results = checks.into_iter().map(|name| {
        let (verdict, value) = checks::report_check(name, &k, ring);
        (name, verdict, value)
    });
    Ok(assemble(
        "report",
        &args.input,
        ring,
        subject,
        results.collect(),
        args.out,
    ))
}

pub fn run_morphism(args: &MorphismArgs) -> Result<Report, CliError> {
    let ring = args.ring.resolve()?;
    let checks = select(&args.checks, MORPHISM_CHECKS)?;
    let path = args.input.display().to_string();
    let d = MonomialDivisors::parse(&read(&args.input)?)
        .map_err(|source| CliError::Monomials { path, source })?;
    let subject = json!({ "variables": d.vars(), "monomials": d.labels() });
    let results = checks.into_iter().map(|name| {
        let (verdict, value) = checks::morphism_check(name, &d, ring);
        (name, verdict, value)
    });
    Ok(assemble(
        "morphism",
        &args.input,
        ring,
        subject,
        results.collect(),
        args.out,
    ))
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Report(args) => run_report(args),
        Command::Morphism(args) => run_morphism(args),
    }
}
