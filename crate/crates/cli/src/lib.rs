//! `ringfill` command-line front end.
//!
//! Exit codes: 0 success, 1 bad input, 2 a requirement failed.

pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{PlanDocument, PlanRecord, SweepDocument, TraceDocument, VerifyDocument};
use ringfill_core::{
    check_requirements, gap, label, plan_stage1, run_lifecycle, sweep, PlacementParams, SweepDomain,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ringfill",
    version,
    about = "Plan, trace, verify and sweep ring token placements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stage-1 bucket and label for every token.
    Plan(PlanArgs),
    /// Full three-stage trace with occupancies, gap and requirement verdicts.
    Trace(TraceArgs),
    /// Check every requirement for one instance or a saved JSON trace.
    Verify(VerifyArgs),
    /// Check every instance in a small parameter domain.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Number of tokens T.
    #[arg(long)]
    pub tokens: u64,
    /// Size B of the first bucket set.
    #[arg(long)]
    pub buckets: u64,
    /// Width C of the fill window.
    #[arg(long)]
    pub fill: u64,
    /// First bucket f of the fill window.
    #[arg(long)]
    pub first: u64,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Size B' of the second set; does not affect stage 1 (default B+1).
    #[arg(long)]
    pub target_buckets: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Size B' of the second set, B' > B.
    #[arg(long)]
    pub target_buckets: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub tokens: Option<u64>,
    #[arg(long)]
    pub buckets: Option<u64>,
    #[arg(long)]
    pub fill: Option<u64>,
    #[arg(long)]
    pub first: Option<u64>,
    #[arg(long)]
    pub target_buckets: Option<u64>,
    /// Re-verify a JSON trace written by `trace --format json`.
    #[arg(long, conflicts_with_all = ["tokens", "buckets", "fill", "first", "target_buckets"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    pub min_buckets: u64,
    #[arg(long, default_value_t = 10)]
    pub max_buckets: u64,
    /// T ranges over 0..=max_rounds*B + extra_tokens.
    #[arg(long, default_value_t = 4)]
    pub max_rounds: u64,
    #[arg(long, default_value_t = 3)]
    pub extra_tokens: u64,
    /// B' ranges over B+1..=target_span*B.
    #[arg(long, default_value_t = 2)]
    pub target_span: u64,
    /// Only instances whose label set has no gap.
    #[arg(long)]
    pub gap_free_only: bool,
    /// Include every violating instance in the report.
    #[arg(long)]
    pub list_violations: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn params_from(instance: &InstanceArgs, target: u64) -> Result<PlacementParams> {
    PlacementParams::new(
        instance.tokens,
        instance.buckets,
        instance.fill,
        instance.first,
        target,
    )
    .map_err(|e| anyhow!("invalid parameters: {e}"))
}

fn emit(out: &OutputArgs, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &out.output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => stdout
            .write_all(text.as_bytes())
            .context("writing to stdout"),
    }
}

fn render<T: serde::Serialize>(
    format: Format,
    doc: &T,
    table: impl FnOnce(&T) -> String,
    csv: impl FnOnce(&T) -> Result<String>,
) -> Result<String> {
    match format {
        Format::Table => Ok(table(doc)),
        Format::Json => report::json(doc),
        Format::Csv => csv(doc),
    }
}

fn cmd_plan(args: &PlanArgs, stdout: &mut dyn Write) -> Result<i32> {
    let target = match args.target_buckets {
        Some(t) => t,
        None => args.instance.buckets.saturating_add(1),
    };
    let params = params_from(&args.instance, target)?;
    let placements = plan_stage1(&params)
        .into_iter()
        .map(|(t, bucket)| {
            Ok(PlanRecord {
                token: t.0,
                label: label(&params, t)?.0,
                stage1_bucket: bucket,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = PlanDocument { params, placements };
    let text = render(args.out.format, &doc, report::plan_table, report::plan_csv)?;
    emit(&args.out, &text, stdout)?;
    Ok(EXIT_OK)
}

pub fn build_trace_document(params: &PlacementParams) -> TraceDocument {
    let trace = run_lifecycle(params);
    let requirements = check_requirements(&trace);
    TraceDocument::new(trace, gap(params), requirements)
}

fn cmd_trace(args: &TraceArgs, stdout: &mut dyn Write) -> Result<i32> {
    let params = params_from(&args.instance, args.target_buckets)?;
    let doc = build_trace_document(&params);
    let text = render(
        args.out.format,
        &doc,
        report::trace_table,
        report::trace_csv,
    )?;
    emit(&args.out, &text, stdout)?;
    Ok(EXIT_OK)
}

/// Reads a JSON trace and re-checks it from its placements.
pub fn reverify_file(path: &Path) -> Result<VerifyDocument> {
    let raw =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: TraceDocument =
        serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
    let trace = doc.into_trace();
    trace
        .validate()
        .with_context(|| format!("malformed trace in {}", path.display()))?;
    Ok(VerifyDocument {
        params: trace.params,
        requirements: check_requirements(&trace),
    })
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let doc = match &args.input {
        Some(path) => reverify_file(path)?,
        None => {
            let missing: Vec<&str> = [
                ("--tokens", args.tokens),
                ("--buckets", args.buckets),
                ("--fill", args.fill),
                ("--first", args.first),
                ("--target-buckets", args.target_buckets),
            ]
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(name, _)| *name)
            .collect();
            if !missing.is_empty() {
                bail!("missing {} (or pass --input)", missing.join(", "));
            }
            let instance = InstanceArgs {
                tokens: args.tokens.unwrap_or_default(),
                buckets: args.buckets.unwrap_or_default(),
                fill: args.fill.unwrap_or_default(),
                first: args.first.unwrap_or_default(),
            };
            let params = params_from(&instance, args.target_buckets.unwrap_or_default())?;
            VerifyDocument {
                params,
                requirements: check_requirements(&run_lifecycle(&params)),
            }
        }
    };
    let text = render(
        args.out.format,
        &doc,
        report::verify_table,
        report::verify_csv,
    )?;
    emit(&args.out, &text, stdout)?;
    Ok(if doc.requirements.all_pass() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<i32> {
    let domain = SweepDomain {
        min_buckets: args.min_buckets,
        max_buckets: args.max_buckets,
        max_rounds: args.max_rounds,
        extra_tokens: args.extra_tokens,
        target_span: args.target_span,
        gap_free_only: args.gap_free_only,
    };
    let result = sweep(&domain).map_err(|e| anyhow!("invalid sweep domain: {e}"))?;
    let code = if result.only_known_violations() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    let doc = SweepDocument::new(result, args.list_violations);
    let text = render(
        args.out.format,
        &doc,
        report::sweep_table,
        report::sweep_csv,
    )?;
    emit(&args.out, &text, stdout)?;
    Ok(code)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Plan(a) => cmd_plan(a, stdout),
        Command::Trace(a) => cmd_trace(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_INPUT
        }
    }
}
