//! `neat-ann`: exact verification of annihilator identities over the
//! squarefree quotient algebra and block exterior algebras, over Q and
//! GF(p).
//!
//! Exit codes: 0 all requested equalities hold, 2 usage or configuration
//! error, 3 a computed equality failed (the report carries a re-verifiable
//! witness).

use clap::{Args, Parser, Subcommand};
use neat_ann_cli::{
    exit_code, parse_check_name, parse_convention, run_sweep, run_verify, serialize_report,
    serialize_reports, summary_table, CellConfig, CliError, Mode, ReportFormat, SweepGrid,
    VerifyConfig,
};
use neat_ann_core::engine::DEFAULT_MAX_AMBIENT_DIM;
use neat_ann_core::generators::StackConvention;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "neat-ann",
    version,
    about = "Exact verification of annihilator identities for neat even elements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a single configuration and write its report.
    Verify(VerifyArgs),
    /// Run a grid of configurations and write one report per cell.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Ambient algebra: "ring" (squarefree quotient) or "exterior".
    #[arg(long)]
    mode: Option<String>,
    /// Field characteristic: 0 for the rationals, else a prime. Repeatable
    /// or comma-separated in sweeps.
    #[arg(long = "char", value_delimiter = ',')]
    characteristics: Vec<u64>,
    /// Checks to run (frobenius, theorem6, main, minimal, lemma2);
    /// comma-separated. Defaults to every check valid for the mode.
    #[arg(long = "check", value_delimiter = ',')]
    checks: Vec<String>,
    /// Write report bytes here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: "json" (canonical, default) or "csv" (summary rows).
    #[arg(long)]
    format: Option<String>,
    /// Ambient dimension cap; configurations above it are refused.
    #[arg(long = "max-ambient-dim")]
    max_ambient_dim: Option<usize>,
    /// Stack-sortable pattern convention: "231" (default) or "312".
    #[arg(long = "stack-convention")]
    stack_convention: Option<String>,
    /// JSON config file mirroring the flag names; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Variable count (ring mode).
    #[arg(long)]
    s: Option<u32>,
    /// Block sizes, comma-separated (exterior mode), e.g. 2,2,4.
    #[arg(long, value_delimiter = ',')]
    blocks: Option<Vec<u32>>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Variable counts, comma-separated (ring mode).
    #[arg(long, value_delimiter = ',')]
    s: Vec<u32>,
    /// Block shapes (exterior mode); repeat the flag, one shape per use,
    /// e.g. --blocks 2,2 --blocks 2,4.
    #[arg(long = "blocks", action = clap::ArgAction::Append)]
    blocks: Vec<String>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Flag values merged over the config file.
#[derive(Default)]
struct Settings {
    mode: Option<String>,
    s_values: Vec<u32>,
    shapes: Vec<Vec<u32>>,
    characteristics: Vec<u64>,
    checks: Vec<String>,
    out: Option<PathBuf>,
    format: Option<String>,
    max_ambient_dim: Option<usize>,
    stack_convention: Option<String>,
}

impl Settings {
    fn merge_from_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("config file {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("config file {}: {e}", path.display())))?;
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::Config("config file: top level must be an object".into()))?;
        for (key, value) in obj {
            match key.as_str() {
                "mode" => fill_string(&mut self.mode, value, "mode")?,
                "s" => {
                    if self.s_values.is_empty() {
                        self.s_values = parse_u64_list(value, "s")?
                            .into_iter()
                            .map(|v| v as u32)
                            .collect();
                    }
                }
                "blocks" => {
                    if self.shapes.is_empty() {
                        self.shapes = parse_shapes(value)?;
                    }
                }
                "char" => {
                    if self.characteristics.is_empty() {
                        self.characteristics = parse_u64_list(value, "char")?;
                    }
                }
                "check" => {
                    if self.checks.is_empty() {
                        self.checks = parse_string_list(value, "check")?;
                    }
                }
                "out" => {
                    if self.out.is_none() {
                        self.out = Some(PathBuf::from(expect_str(value, "out")?));
                    }
                }
                "format" => fill_string(&mut self.format, value, "format")?,
                "max-ambient-dim" => {
                    if self.max_ambient_dim.is_none() {
                        self.max_ambient_dim = Some(expect_u64(value, "max-ambient-dim")? as usize);
                    }
                }
                "stack-convention" => {
                    fill_string(&mut self.stack_convention, value, "stack-convention")?
                }
                other => {
                    return Err(CliError::Config(format!(
                        "config file: unknown key {other:?}"
                    )))
                }
            }
        }
        Ok(())
    }

    fn format(&self) -> Result<ReportFormat, CliError> {
        match &self.format {
            Some(text) => ReportFormat::parse(text),
            None => Ok(ReportFormat::Json),
        }
    }

    fn convention(&self) -> Result<StackConvention, CliError> {
        match &self.stack_convention {
            Some(text) => parse_convention(text),
            None => Ok(StackConvention::Avoid231),
        }
    }

    fn mode(&self) -> Result<Mode, CliError> {
        match &self.mode {
            Some(text) => Mode::parse(text),
            None => Err(CliError::Config("missing --mode (ring or exterior)".into())),
        }
    }

    fn parsed_checks(&self) -> Result<Vec<neat_ann_core::engine::Check>, CliError> {
        self.checks.iter().map(|c| parse_check_name(c)).collect()
    }
}

fn fill_string(slot: &mut Option<String>, value: &Value, key: &str) -> Result<(), CliError> {
    if slot.is_none() {
        *slot = Some(expect_str(value, key)?.to_string());
    }
    Ok(())
}

fn expect_str<'v>(value: &'v Value, key: &str) -> Result<&'v str, CliError> {
    value
        .as_str()
        .ok_or_else(|| CliError::Config(format!("config file: {key} must be a string")))
}

fn expect_u64(value: &Value, key: &str) -> Result<u64, CliError> {
    value
        .as_u64()
        .ok_or_else(|| CliError::Config(format!("config file: {key} must be a nonnegative integer")))
}

fn parse_u64_list(value: &Value, key: &str) -> Result<Vec<u64>, CliError> {
    match value {
        Value::Number(_) => Ok(vec![expect_u64(value, key)?]),
        Value::Array(items) => items.iter().map(|v| expect_u64(v, key)).collect(),
        _ => Err(CliError::Config(format!(
            "config file: {key} must be an integer or an array of integers"
        ))),
    }
}

fn parse_string_list(value: &Value, key: &str) -> Result<Vec<String>, CliError> {
    match value {
        Value::String(s) => Ok(s.split(',').map(|p| p.trim().to_string()).collect()),
        Value::Array(items) => items
            .iter()
            .map(|v| expect_str(v, key).map(String::from))
            .collect(),
        _ => Err(CliError::Config(format!(
            "config file: {key} must be a string or an array of strings"
        ))),
    }
}

/// Accepts `[2,2]` (one shape) or `[[2,2],[2,4]]` or `["2,2","2,4"]`.
fn parse_shapes(value: &Value) -> Result<Vec<Vec<u32>>, CliError> {
    let items = value
        .as_array()
        .ok_or_else(|| CliError::Config("config file: blocks must be an array".into()))?;
    if items.iter().all(|v| v.is_u64()) {
        let shape = items
            .iter()
            .map(|v| expect_u64(v, "blocks").map(|n| n as u32))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(vec![shape]);
    }
    items
        .iter()
        .map(|item| match item {
            Value::Array(sizes) => sizes
                .iter()
                .map(|v| expect_u64(v, "blocks").map(|n| n as u32))
                .collect(),
            Value::String(text) => parse_shape_string(text),
            _ => Err(CliError::Config(
                "config file: blocks entries must be arrays or strings".into(),
            )),
        })
        .collect()
}

fn parse_shape_string(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| CliError::Config(format!("invalid block size {part:?}")))
        })
        .collect()
}

fn gather(common: &CommonArgs) -> Result<Settings, CliError> {
    let mut settings = Settings {
        mode: common.mode.clone(),
        characteristics: common.characteristics.clone(),
        checks: common.checks.clone(),
        out: common.out.clone(),
        format: common.format.clone(),
        max_ambient_dim: common.max_ambient_dim,
        stack_convention: common.stack_convention.clone(),
        ..Settings::default()
    };
    if let Some(path) = &common.config {
        settings.merge_from_file(path)?;
    }
    Ok(settings)
}

fn emit(bytes: &[u8], out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Config(format!("writing {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Config(format!("writing stdout: {e}")))
        }
    }
}

fn run_verify_command(args: &VerifyArgs) -> Result<i32, CliError> {
    let mut settings = gather(&args.common)?;
    if let Some(s) = args.s {
        settings.s_values = vec![s];
    }
    if let Some(blocks) = &args.blocks {
        settings.shapes = vec![blocks.clone()];
    }
    let mode = settings.mode()?;
    if settings.characteristics.len() != 1 {
        return Err(CliError::Config(
            "verify takes exactly one --char; use sweep for several".into(),
        ));
    }
    let cell = match mode {
        Mode::Ring => {
            if settings.s_values.len() != 1 {
                return Err(CliError::Config("ring verify takes exactly one --s".into()));
            }
            CellConfig {
                mode,
                s: Some(settings.s_values[0]),
                blocks: None,
                characteristic: settings.characteristics[0],
            }
        }
        Mode::Exterior => {
            if settings.shapes.len() != 1 {
                return Err(CliError::Config(
                    "exterior verify takes exactly one --blocks".into(),
                ));
            }
            CellConfig {
                mode,
                s: None,
                blocks: Some(settings.shapes[0].clone()),
                characteristic: settings.characteristics[0],
            }
        }
    };
    let config = VerifyConfig {
        cell,
        checks: settings.parsed_checks()?,
        convention: settings.convention()?,
        max_ambient_dim: settings.max_ambient_dim.unwrap_or(DEFAULT_MAX_AMBIENT_DIM),
    };
    let report = run_verify(&config)?;
    let bytes = serialize_report(&report, settings.format()?);
    emit(&bytes, &settings.out)?;
    eprint!("{}", summary_table(std::slice::from_ref(&report)));
    Ok(exit_code(std::slice::from_ref(&report)))
}

fn run_sweep_command(args: &SweepArgs) -> Result<i32, CliError> {
    let mut settings = gather(&args.common)?;
    if !args.s.is_empty() {
        settings.s_values = args.s.clone();
    }
    if !args.blocks.is_empty() {
        settings.shapes = args
            .blocks
            .iter()
            .map(|text| parse_shape_string(text))
            .collect::<Result<_, _>>()?;
    }
    let mode = settings.mode()?;
    let grid = SweepGrid {
        mode,
        s_values: settings.s_values.clone(),
        shapes: settings.shapes.clone(),
        characteristics: settings.characteristics.clone(),
        checks: settings.parsed_checks()?,
        convention: settings.convention()?,
        max_ambient_dim: settings.max_ambient_dim.unwrap_or(DEFAULT_MAX_AMBIENT_DIM),
    };
    let reports = run_sweep(&grid)?;
    let bytes = serialize_reports(&reports, settings.format()?);
    emit(&bytes, &settings.out)?;
    eprint!("{}", summary_table(&reports));
    Ok(exit_code(&reports))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(args) => run_verify_command(args),
        Command::Sweep(args) => run_sweep_command(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(error) => {
            eprintln!("{}", error.to_json());
            ExitCode::from(2)
        }
    }
}
