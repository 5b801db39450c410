//! Command-line front end.
//!
//! Exit codes: 0 verified, 1 mathematical violation found, 2 input or usage
//! error. Only JSON goes to stdout; progress and timing go to stderr.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::gf::{Field, FieldCtx, DEFAULT_MAX_Q};
use crate::ovals::{
    enumerate_ovals_with, oval_violation, with_workers, EnumerateOptions, EnumerationMode, Oval, OvalRecord,
};
use crate::plane::ProjPoint;
use crate::poly::Polynomial;
use crate::segre::{identity_report, normalize_oval, oval_to_function, segre_reconstruct, AffineFunction};

/// Environment variable overriding the field-size cap.
pub const MAX_Q_ENV: &str = "SEGRE_MAX_Q";

/// Largest q exhaustive enumeration accepts without `--force`.
pub const EXHAUSTIVE_MAX_Q: u64 = 7;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "segre", version, about = "Ovals and conics in PG(2,q), q odd")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a point set is an oval.
    Verify(InputArgs),
    /// Stream ovals of PG(2,q) as JSON Lines.
    Enumerate(SearchArgs),
    /// Recover the conic through an oval, with the identity audit.
    Reconstruct(InputArgs),
    /// Reconstruct every enumerated oval and confirm it is a conic.
    CheckTheorem(SearchArgs),
    /// Audit every identity for a polynomial or an oval.
    Identities(IdentityArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Oval JSON: a file path, `-` for stdin, or an inline object.
    pub input: String,
    /// Expected field order; must match the input when given.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Allow exhaustive enumeration above q = 7.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    #[arg(long)]
    pub q: Option<u64>,
    /// Coefficients of f, ascending: `0,0,1` or `[0,0,1]`.
    #[arg(long, conflicts_with = "oval")]
    pub f: Option<String>,
    /// Oval JSON (path, `-` or inline); f is read off after normalization.
    #[arg(long)]
    pub oval: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Violation,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

/// Field-size cap, honouring `SEGRE_MAX_Q`.
pub fn max_q() -> u64 {
    std::env::var(MAX_Q_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_Q)
}

/// The field for a user-supplied order: a prime power, odd, under the cap.
pub fn validate_q(q: u64) -> Result<Field, String> {
    if q >= 2 && q.is_power_of_two() {
        return Err(format!("even order unsupported (q = {q})"));
    }
    let ctx = FieldCtx::with_max_q(q, max_q()).map_err(|e| e.to_string())?;
    if !ctx.is_odd() {
        return Err(format!("even order unsupported (q = {q})"));
    }
    Ok(ctx)
}

/// Runs one command and returns the process exit code.
pub fn run(config: RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let out_path = match &config.command {
        Command::Verify(a) | Command::Reconstruct(a) => a.out.clone(),
        Command::Enumerate(a) | Command::CheckTheorem(a) => a.out.clone(),
        Command::Identities(a) => a.out.clone(),
    };
    let mut file;
    let sink: &mut dyn Write = match out_path {
        Some(path) => match File::create(&path) {
            Ok(f) => {
                file = BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot open {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => stdout,
    };
    let outcome = match &config.command {
        Command::Verify(a) => verify(a, sink),
        Command::Enumerate(a) => enumerate(a, sink, stderr),
        Command::Reconstruct(a) => reconstruct(a, sink),
        Command::CheckTheorem(a) => check_theorem(a, sink, stderr),
        Command::Identities(a) => identities(a, sink),
    };
    let flushed = sink.flush();
    match (outcome, flushed) {
        (Ok(()), Ok(())) => EXIT_OK,
        (Err(Failure::Violation), _) => EXIT_VIOLATION,
        (Err(Failure::Usage(msg)), _) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        (Ok(()), Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}

fn read_input(input: &str) -> Result<String, Failure> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        return Ok(input.to_string());
    }
    let mut text = String::new();
    if input == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        File::open(input)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| usage(format!("cannot read {input}: {e}")))?;
    }
    Ok(text)
}

/// Parses an oval record and its field; the points are not yet validated.
fn load_record(input: &str, expected_q: Option<u64>) -> Result<(Field, Vec<ProjPoint>), Failure> {
    let record: OvalRecord = serde_json::from_str(&read_input(input)?)?;
    if let Some(q) = expected_q {
        if q != u64::from(record.q) {
            return Err(usage(format!("--q {q} does not match input q = {}", record.q)));
        }
    }
    let ctx = validate_q(u64::from(record.q)).map_err(usage)?;
    let points = record
        .points
        .iter()
        .map(|&c| ProjPoint::from_codes(&ctx, c))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(usage)?;
    Ok((ctx, points))
}

fn load_oval(input: &str, expected_q: Option<u64>) -> Result<Oval, Failure> {
    let (ctx, points) = load_record(input, expected_q)?;
    Oval::new(&ctx, points).map_err(usage)
}

fn verify(args: &InputArgs, out: &mut dyn Write) -> Outcome {
    let (ctx, points) = load_record(&args.input, args.q)?;
    let violation = oval_violation(&ctx, &points).map_err(usage)?;
    let witness = match &violation {
        Some(crate::ovals::OvalViolation::Collinear(t)) => Some(t.map(|p| p.codes())),
        _ => None,
    };
    emit(
        out,
        &json!({
            "field": ctx.info(),
            "verdict": if violation.is_none() { "oval" } else { "not_oval" },
            "reason": violation.as_ref().map(|v| v.to_string()),
            "witness": witness,
        }),
    )?;
    match violation {
        None => Ok(()),
        Some(_) => Err(Failure::Violation),
    }
}

fn search_options(args: &SearchArgs, ctx: &Field) -> Result<EnumerateOptions, Failure> {
    let mode = match args.mode {
        ModeArg::Exhaustive => {
            if args.q > EXHAUSTIVE_MAX_Q && !args.force {
                return Err(usage(format!(
                    "exhaustive enumeration is limited to q <= {EXHAUSTIVE_MAX_Q}; pass --force to override"
                )));
            }
            EnumerationMode::Exhaustive
        }
        ModeArg::Sampled => EnumerationMode::Sampled {
            seed: args.seed,
            count: args.count,
        },
    };
    let _ = ctx;
    let mut opts = EnumerateOptions::new(mode);
    opts.workers = args.workers.max(1);
    Ok(opts)
}

fn mode_json(args: &SearchArgs) -> serde_json::Value {
    match args.mode {
        ModeArg::Exhaustive => json!({"mode": "exhaustive"}),
        ModeArg::Sampled => json!({"mode": "sampled", "seed": args.seed, "count": args.count}),
    }
}

fn enumerate(args: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let ctx = validate_q(args.q).map_err(usage)?;
    let opts = search_options(args, &ctx)?;
    let start = Instant::now();
    let result = enumerate_ovals_with(&ctx, &opts);
    emit(
        out,
        &json!({"kind": "header", "field": ctx.info(), "search": mode_json(args)}),
    )?;
    for oval in &result.ovals {
        emit(out, &oval.to_record())?;
    }
    let mut summary = json!({"kind": "summary", "count": result.ovals.len()});
    if let EnumerationMode::Sampled { count, .. } = opts.mode {
        summary["requested"] = json!(count);
        summary["attempts"] = json!(result.attempts);
    }
    emit(out, &summary)?;
    writeln!(
        err,
        "enumerated {} ovals of PG(2,{}) in {:.3}s",
        result.ovals.len(),
        args.q,
        start.elapsed().as_secs_f64()
    )?;
    Ok(())
}

fn reconstruct(args: &InputArgs, out: &mut dyn Write) -> Outcome {
    let oval = load_oval(&args.input, args.q)?;
    let info = oval.ctx().info();
    match segre_reconstruct(&oval) {
        Ok((conic, mut report)) => {
            report.oval_id = Some("input".into());
            emit(
                out,
                &json!({"field": info, "conic": conic.to_record(), "report": report}),
            )?;
            Ok(())
        }
        Err(Error::TheoremViolation(mut report)) => {
            report.oval_id = Some("input".into());
            emit(out, &json!({"field": info, "violation": report}))?;
            Err(Failure::Violation)
        }
        Err(e) => Err(usage(e)),
    }
}

fn check_theorem(args: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let ctx = validate_q(args.q).map_err(usage)?;
    let opts = search_options(args, &ctx)?;
    let start = Instant::now();
    let ovals = enumerate_ovals_with(&ctx, &opts).ovals;
    let enumerated = start.elapsed();
    let results: Vec<_> = with_workers(opts.workers, || {
        ovals
            .par_iter()
            .enumerate()
            .map(|(i, oval)| segre_reconstruct(oval).map(|(conic, _)| conic).map_err(|e| (i, e)))
            .collect()
    });
    let mut conics = 0usize;
    let mut first_failure = None;
    for r in results {
        match r {
            Ok(_) => conics += 1,
            Err(f) if first_failure.is_none() => first_failure = Some(f),
            Err(_) => {}
        }
    }
    writeln!(
        err,
        "q={}: enumerated {} ovals in {:.3}s, reconstructed in {:.3}s",
        args.q,
        ovals.len(),
        enumerated.as_secs_f64(),
        (start.elapsed() - enumerated).as_secs_f64()
    )?;
    let total = ovals.len();
    let summary = format!("{conics}/{total} ovals are conics");
    match first_failure {
        None => {
            emit(
                out,
                &json!({
                    "field": ctx.info(),
                    "search": mode_json(args),
                    "ovals": total,
                    "conics": conics,
                    "verified": true,
                    "summary": summary,
                }),
            )?;
            Ok(())
        }
        Some((i, Error::TheoremViolation(mut report))) => {
            report.oval_id = Some(i.to_string());
            emit(
                out,
                &json!({
                    "field": ctx.info(),
                    "search": mode_json(args),
                    "ovals": total,
                    "conics": conics,
                    "verified": false,
                    "summary": summary,
                    "violation": report,
                    "oval": ovals[i].to_record(),
                }),
            )?;
            Err(Failure::Violation)
        }
        Some((i, e)) => Err(usage(format!("oval {i}: {e}"))),
    }
}

fn parse_coefficients(text: &str) -> Result<Vec<u32>, Failure> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("malformed coefficient {t:?}")))
        })
        .collect()
}

fn identities(args: &IdentityArgs, out: &mut dyn Write) -> Outcome {
    let (af, oval_id) = match (&args.f, &args.oval) {
        (Some(text), None) => {
            let q = args.q.ok_or_else(|| usage("--f requires --q"))?;
            let ctx = validate_q(q).map_err(usage)?;
            let poly = Polynomial::from_codes(&ctx, &parse_coefficients(text)?).map_err(usage)?;
            (AffineFunction::from_polynomial(&poly).map_err(usage)?, None)
        }
        (None, Some(input)) => {
            let oval = load_oval(input, args.q)?;
            let (_, normalized) = normalize_oval(&oval).map_err(usage)?;
            (oval_to_function(&normalized).map_err(usage)?, Some("input".to_string()))
        }
        _ => return Err(usage("exactly one of --f or --oval is required")),
    };
    let mut report = identity_report(&af).map_err(usage)?;
    report.oval_id = oval_id;
    emit(out, &report)?;
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}
