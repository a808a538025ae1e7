//! `hjatlas` — command-line front end for the resolution-atlas toolkit.
//!
//! Subcommands: `expand` (continued-fraction data), `atlas5` / `atlas4`
//! (atlas dumps as canonical JSON), `verify` / `report` (the seeded
//! verification suite, as JSON or Markdown).
//!
//! Data goes to stdout (or `--output`); diagnostics go to stderr.
//! Exit codes: 0 success, 1 failure (verification failed, I/O error),
//! 2 invalid input (bad fiber type, bad flags, bad config file).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use hj_atlas::jsonfmt::to_canonical_json;
use hj_atlas::verify::{run_suite, CheckConfig};
use hj_atlas::{Atlas4, Atlas5, Error, FiberType};

/// Exit code for invalid input (mirrors the conventional usage error).
const EXIT_INVALID: u8 = 2;
/// Exit code for failures (failed verification, I/O trouble).
const EXIT_FAILURE: u8 = 1;

#[derive(Parser)]
#[command(
    name = "hjatlas",
    version,
    about = "Resolution atlases and their numerical verification for fiber types 1/r (1, a)",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the minus continued-fraction expansion of r/a.
    Expand(FiberArgs),
    /// Emit the 5-d resolution atlas as canonical JSON.
    Atlas5(AtlasArgs),
    /// Emit the 4-d resolution atlas as canonical JSON.
    Atlas4(AtlasArgs),
    /// Run the verification suite; emit the report as JSON by default.
    Verify(SuiteArgs),
    /// Run the verification suite; emit the report as Markdown by default.
    Report(SuiteArgs),
}

#[derive(Args)]
struct FiberArgs {
    /// Order r of the fiber type 1/r (1, a).
    #[arg(long, allow_negative_numbers = true)]
    r: i64,
    /// Weight a of the fiber type 1/r (1, a); canonicalized into [1, r).
    #[arg(long, allow_negative_numbers = true)]
    a: i64,
}

#[derive(Args)]
struct AtlasArgs {
    #[command(flatten)]
    fiber: FiberArgs,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    #[command(flatten)]
    fiber: FiberArgs,
    /// Seed for the per-check sample streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Sample points per check.
    #[arg(long)]
    samples: Option<usize>,
    /// Circle-group elements per sampled point in equivariance checks.
    #[arg(long)]
    group_samples: Option<usize>,
    /// Comparison tolerance for the scaled distance.
    #[arg(long)]
    tol: Option<f64>,
    /// Lower bound of the plane-slot modulus range.
    #[arg(long)]
    radius_min: Option<f64>,
    /// Upper bound of the plane-slot modulus range.
    #[arg(long)]
    radius_max: Option<f64>,
    /// TOML file with the same keys as the flags above
    /// (seed, samples, group_samples, tol, radius_min, radius_max).
    /// Flags take precedence over the file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

/// Optional overrides loaded from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    samples: Option<usize>,
    group_samples: Option<usize>,
    tol: Option<f64>,
    radius_min: Option<f64>,
    radius_max: Option<f64>,
}

/// Invalid-input errors exit with 2; everything else with 1.
fn classify(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<toml::de::Error>().is_some() {
        return EXIT_INVALID;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::InvalidFiberType { .. }
            | Error::NonFaithful { .. }
            | Error::InvalidExpansion { .. }
            | Error::RegularFiber
            | Error::InvalidConfig { .. },
        ) => EXIT_INVALID,
        _ => EXIT_FAILURE,
    }
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn fiber(args: &FiberArgs) -> anyhow::Result<FiberType> {
    Ok(FiberType::new(args.r, args.a)?)
}

fn build_config(args: &SuiteArgs) -> anyhow::Result<CheckConfig> {
    let mut cfg = CheckConfig::default();
    if let Some(path) = &args.config {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: FileConfig = toml::from_str(&text)?;
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
        if let Some(v) = file.samples {
            cfg.samples_per_check = v;
        }
        if let Some(v) = file.group_samples {
            cfg.group_samples = v;
        }
        if let Some(v) = file.tol {
            cfg.tol = v;
        }
        if let Some(v) = file.radius_min {
            cfg.radius_range.0 = v;
        }
        if let Some(v) = file.radius_max {
            cfg.radius_range.1 = v;
        }
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.samples {
        cfg.samples_per_check = v;
    }
    if let Some(v) = args.group_samples {
        cfg.group_samples = v;
    }
    if let Some(v) = args.tol {
        cfg.tol = v;
    }
    if let Some(v) = args.radius_min {
        cfg.radius_range.0 = v;
    }
    if let Some(v) = args.radius_max {
        cfg.radius_range.1 = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_expand(args: &FiberArgs) -> anyhow::Result<u8> {
    let fiber = fiber(args)?;
    let exp = fiber.expansion()?;
    let coeffs: Vec<String> = exp.coefficients.iter().map(|b| b.to_string()).collect();
    let rems: Vec<String> = exp.remainders.iter().map(|x| x.to_string()).collect();
    println!("[{}] remainders {}", coeffs.join(","), rems.join(","));
    Ok(0)
}

fn run_atlas5(args: &AtlasArgs) -> anyhow::Result<u8> {
    let atlas = Atlas5::for_fiber(fiber(&args.fiber)?)?;
    emit(&to_canonical_json(&atlas)?, args.output.as_deref())?;
    Ok(0)
}

fn run_atlas4(args: &AtlasArgs) -> anyhow::Result<u8> {
    let atlas = Atlas4::for_fiber(fiber(&args.fiber)?)?;
    emit(&to_canonical_json(&atlas)?, args.output.as_deref())?;
    Ok(0)
}

fn run_verify(args: &SuiteArgs, default_format: Format) -> anyhow::Result<u8> {
    let fiber = fiber(&args.fiber)?;
    let cfg = build_config(args)?;
    let report = run_suite::<f64>(fiber, &cfg)?;
    let text = match args.format.unwrap_or(default_format) {
        Format::Json => report.to_canonical_json()?,
        Format::Markdown => report.to_markdown(),
    };
    emit(&text, args.output.as_deref())?;
    if report.passed {
        eprintln!(
            "verification passed: {} checks for 1/{} (1, {})",
            report.total_checks,
            fiber.r(),
            fiber.a()
        );
        Ok(0)
    } else {
        eprintln!(
            "verification FAILED: {} of {} checks failed for 1/{} (1, {})",
            report.failed_checks,
            report.total_checks,
            fiber.r(),
            fiber.a()
        );
        Ok(EXIT_FAILURE)
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Expand(args) => run_expand(args),
        Command::Atlas5(args) => run_atlas5(args),
        Command::Atlas4(args) => run_atlas4(args),
        Command::Verify(args) => run_verify(args, Format::Json),
        Command::Report(args) => run_verify(args, Format::Markdown),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}
