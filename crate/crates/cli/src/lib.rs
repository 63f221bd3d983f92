//! Configuration handling, sweep execution, and report serialization for
//! the `neat-ann` binary.
//!
//! A sweep is a grid of independent cells (one per `s`-or-shape times
//! characteristic). Cells run on a worker pool bounded by the
//! `NEAT_ANN_THREADS` environment variable, but the report list always comes
//! back in grid order, so output bytes never depend on scheduling.

use neat_ann_core::engine::{verify_exterior, verify_ring, Check, EngineError, VerifyOptions};
use neat_ann_core::exterior::BlockShape;
use neat_ann_core::generators::StackConvention;
use neat_ann_core::report::{ReportConfig, ReportDims, VerificationReport};
use neat_ann_core::scalar::Field;
use rayon::prelude::*;
use std::collections::BTreeMap;

pub const THREADS_ENV: &str = "NEAT_ANN_THREADS";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
}

impl CliError {
    /// Machine-readable error object, printed to stderr on exit code 2.
    pub fn to_json(&self) -> String {
        let value = serde_json::json!({
            "error": {"kind": "config", "message": self.to_string()}
        });
        serde_json::to_string(&value).expect("error serializes")
    }
}

fn config_err(message: impl Into<String>) -> CliError {
    CliError::Config(message.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ring,
    Exterior,
}

impl Mode {
    pub fn parse(text: &str) -> Result<Mode, CliError> {
        match text {
            "ring" => Ok(Mode::Ring),
            "exterior" => Ok(Mode::Exterior),
            other => Err(config_err(format!(
                "unknown mode {other:?}; expected \"ring\" or \"exterior\""
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Mode::Ring => "ring",
            Mode::Exterior => "exterior",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    pub fn parse(text: &str) -> Result<ReportFormat, CliError> {
        match text {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(config_err(format!(
                "unknown format {other:?}; expected \"json\" or \"csv\""
            ))),
        }
    }
}

/// One fully-resolved verification cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellConfig {
    pub mode: Mode,
    /// Variable count in ring mode.
    pub s: Option<u32>,
    /// Block sizes in exterior mode.
    pub blocks: Option<Vec<u32>>,
    pub characteristic: u64,
}

/// A single-configuration run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub cell: CellConfig,
    pub checks: Vec<Check>,
    pub convention: StackConvention,
    pub max_ambient_dim: usize,
}

/// A sweep: `s` values (ring) or shapes (exterior) crossed with
/// characteristics.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub mode: Mode,
    pub s_values: Vec<u32>,
    pub shapes: Vec<Vec<u32>>,
    pub characteristics: Vec<u64>,
    pub checks: Vec<Check>,
    pub convention: StackConvention,
    pub max_ambient_dim: usize,
}

/// Validates the check list against the mode, substituting the mode's full
/// check set when none were requested.
pub fn resolve_checks(mode: Mode, requested: &[Check]) -> Result<Vec<Check>, CliError> {
    let allowed = match mode {
        Mode::Ring => Check::ring_checks(),
        Mode::Exterior => Check::exterior_checks(),
    };
    if requested.is_empty() {
        return Ok(allowed);
    }
    for check in requested {
        if !allowed.contains(check) {
            return Err(config_err(format!(
                "check \"{}\" does not apply to {} mode",
                check.label(),
                mode.label()
            )));
        }
    }
    let mut checks = requested.to_vec();
    checks.sort_unstable();
    checks.dedup();
    Ok(checks)
}

pub fn parse_check_name(name: &str) -> Result<Check, CliError> {
    Check::parse(name).ok_or_else(|| {
        config_err(format!(
            "unknown check {name:?}; expected one of frobenius, theorem6, main, minimal, lemma2"
        ))
    })
}

pub fn parse_convention(text: &str) -> Result<StackConvention, CliError> {
    match text {
        "231" => Ok(StackConvention::Avoid231),
        "312" => Ok(StackConvention::Avoid312),
        other => Err(config_err(format!(
            "unknown stack convention {other:?}; expected \"231\" or \"312\""
        ))),
    }
}

fn validate_cell(cell: &CellConfig, max_ambient_dim: usize) -> Result<(), CliError> {
    Field::new(cell.characteristic)
        .map_err(|e| config_err(format!("invalid characteristic: {e}")))?;
    match cell.mode {
        Mode::Ring => {
            let s = cell
                .s
                .ok_or_else(|| config_err("ring mode needs --s"))?;
            if !(1..=31).contains(&s) {
                return Err(config_err(format!("variable count {s} outside 1..=31")));
            }
            let dim = 1usize << s;
            if dim > max_ambient_dim {
                return Err(config_err(format!(
                    "ambient dimension {dim} exceeds the cap {max_ambient_dim}; \
                     raise --max-ambient-dim to override"
                )));
            }
        }
        Mode::Exterior => {
            let blocks = cell
                .blocks
                .as_ref()
                .ok_or_else(|| config_err("exterior mode needs --blocks"))?;
            let shape = BlockShape::new(blocks)
                .map_err(|e| config_err(format!("invalid block shape: {e}")))?;
            let dim = 1usize << shape.n();
            if dim > max_ambient_dim {
                return Err(config_err(format!(
                    "ambient dimension {dim} exceeds the cap {max_ambient_dim}; \
                     raise --max-ambient-dim to override"
                )));
            }
        }
    }
    Ok(())
}

fn run_cell(
    cell: &CellConfig,
    checks: &[Check],
    convention: StackConvention,
    max_ambient_dim: usize,
) -> VerificationReport {
    let field = Field::new(cell.characteristic).expect("validated earlier");
    let options = VerifyOptions {
        checks: checks.to_vec(),
        convention,
        max_ambient_dim,
        pairing_triples: 1000,
    };
    let outcome: Result<VerificationReport, EngineError> = match cell.mode {
        Mode::Ring => verify_ring(field, cell.s.expect("validated earlier"), &options),
        Mode::Exterior => {
            let shape = BlockShape::new(cell.blocks.as_ref().expect("validated earlier"))
                .expect("validated earlier");
            verify_exterior(field, &shape, &options)
        }
    };
    outcome.unwrap_or_else(|error| error_report(cell, checks, convention, &error))
}

/// A cell that failed outright still occupies its grid slot, carrying the
/// error text instead of dims.
fn error_report(
    cell: &CellConfig,
    checks: &[Check],
    convention: StackConvention,
    error: &EngineError,
) -> VerificationReport {
    let ambient = match (cell.mode, cell.s, &cell.blocks) {
        (Mode::Ring, Some(s), _) => 1u64 << s,
        (Mode::Exterior, _, Some(blocks)) => 1u64 << blocks.iter().sum::<u32>(),
        _ => 0,
    };
    VerificationReport {
        config: ReportConfig {
            mode: cell.mode.label().into(),
            s: cell
                .s
                .unwrap_or_else(|| cell.blocks.as_ref().map_or(0, |b| b.len() as u32)),
            blocks: cell.blocks.clone(),
            characteristic: cell.characteristic,
            checks: checks.iter().map(|c| c.label().to_string()).collect(),
            stack_convention: convention.label().into(),
        },
        dims: ReportDims {
            ambient,
            ..ReportDims::default()
        },
        equalities: BTreeMap::new(),
        minimal: None,
        witnesses: Vec::new(),
        ledger: None,
        runtime_ms: 0,
        error: Some(error.to_string()),
    }
}

/// Runs one configuration.
pub fn run_verify(config: &VerifyConfig) -> Result<VerificationReport, CliError> {
    validate_cell(&config.cell, config.max_ambient_dim)?;
    let checks = resolve_checks(config.cell.mode, &config.checks)?;
    Ok(run_cell(
        &config.cell,
        &checks,
        config.convention,
        config.max_ambient_dim,
    ))
}

/// Expands the grid into cells in grid order (outer loop over `s`/shape,
/// inner over characteristic).
pub fn grid_cells(grid: &SweepGrid) -> Vec<CellConfig> {
    let mut cells = Vec::new();
    match grid.mode {
        Mode::Ring => {
            for &s in &grid.s_values {
                for &ch in &grid.characteristics {
                    cells.push(CellConfig {
                        mode: Mode::Ring,
                        s: Some(s),
                        blocks: None,
                        characteristic: ch,
                    });
                }
            }
        }
        Mode::Exterior => {
            for blocks in &grid.shapes {
                for &ch in &grid.characteristics {
                    cells.push(CellConfig {
                        mode: Mode::Exterior,
                        s: None,
                        blocks: Some(blocks.clone()),
                        characteristic: ch,
                    });
                }
            }
        }
    }
    cells
}

/// Runs every cell of the grid on the worker pool; the result vector is in
/// grid order regardless of scheduling. Per-cell failures are recorded in
/// their reports and do not abort the sweep.
pub fn run_sweep(grid: &SweepGrid) -> Result<Vec<VerificationReport>, CliError> {
    let checks = resolve_checks(grid.mode, &grid.checks)?;
    let cells = grid_cells(grid);
    for cell in &cells {
        validate_cell(cell, grid.max_ambient_dim)?;
    }
    let pool = build_pool()?;
    let reports = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| run_cell(cell, &checks, grid.convention, grid.max_ambient_dim))
            .collect()
    });
    Ok(reports)
}

fn build_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .parse()
            .map_err(|_| config_err(format!("{THREADS_ENV}={raw:?} is not a thread count")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder
        .build()
        .map_err(|e| config_err(format!("worker pool: {e}")))
}

/// Canonical bytes for one report.
pub fn serialize_report(report: &VerificationReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => report.to_canonical_json(),
        ReportFormat::Csv => format!(
            "{}\n{}\n",
            VerificationReport::csv_header(),
            report.to_csv_row()
        )
        .into_bytes(),
    }
}

/// Canonical bytes for a report list: a JSON array, or a CSV summary with
/// one row per configuration.
pub fn serialize_reports(reports: &[VerificationReport], format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let array =
                serde_json::Value::Array(reports.iter().map(|r| r.to_canonical_value()).collect());
            let mut bytes = serde_json::to_vec_pretty(&array).expect("reports serialize");
            bytes.push(b'\n');
            bytes
        }
        ReportFormat::Csv => {
            let mut out = String::from(VerificationReport::csv_header());
            out.push('\n');
            for report in reports {
                out.push_str(&report.to_csv_row());
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

/// Human-readable pass/fail summary, one line per cell, with wall times.
pub fn summary_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for report in reports {
        let config = &report.config;
        let target = match &config.blocks {
            Some(blocks) => format!(
                "blocks=({})",
                blocks
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            None => format!("s={}", config.s),
        };
        let status = if let Some(error) = &report.error {
            format!("ERROR {error}")
        } else if report.all_pass() {
            "pass".to_string()
        } else {
            let failed: Vec<&str> = report
                .equalities
                .iter()
                .filter(|(_, &ok)| !ok)
                .map(|(k, _)| k.as_str())
                .collect();
            format!("FAIL {}", failed.join(","))
        };
        let dims = format!(
            "ambient={} mu={} ann={} ideal={}",
            report.dims.ambient,
            opt_dim(report.dims.mu_ideal),
            opt_dim(report.dims.annihilator),
            opt_dim(report.dims.generated_ideal),
        );
        out.push_str(&format!(
            "{mode:<8} {target:<16} char={ch:<5} {dims:<44} {ms:>6} ms  {status}\n",
            mode = config.mode,
            ch = config.characteristic,
            ms = report.runtime_ms,
        ));
    }
    out
}

fn opt_dim(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

/// Exit code for a finished run: 0 all-pass, 3 when any computed equality
/// failed or a cell errored.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().all(|r| r.all_pass()) {
        0
    } else {
        3
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use neat_ann_core::engine::DEFAULT_MAX_AMBIENT_DIM;

    fn ring_cell(s: u32, ch: u64) -> CellConfig {
        CellConfig {
            mode: Mode::Ring,
            s: Some(s),
            blocks: None,
            characteristic: ch,
        }
    }

    #[test]
    fn verify_runs_a_ring_cell() {
        let config = VerifyConfig {
            cell: ring_cell(2, 0),
            checks: vec![Check::Theorem6],
            convention: StackConvention::Avoid231,
            max_ambient_dim: DEFAULT_MAX_AMBIENT_DIM,
        };
        let report = run_verify(&config).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.dims.annihilator, Some(2));
        assert_eq!(exit_code(&[report]), 0);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad_char = VerifyConfig {
            cell: ring_cell(2, 4),
            checks: vec![],
            convention: StackConvention::Avoid231,
            max_ambient_dim: DEFAULT_MAX_AMBIENT_DIM,
        };
        assert!(matches!(run_verify(&bad_char), Err(CliError::Config(_))));

        let wrong_check = VerifyConfig {
            cell: ring_cell(2, 0),
            checks: vec![Check::Main],
            convention: StackConvention::Avoid231,
            max_ambient_dim: DEFAULT_MAX_AMBIENT_DIM,
        };
        assert!(matches!(run_verify(&wrong_check), Err(CliError::Config(_))));

        let over_cap = VerifyConfig {
            cell: ring_cell(10, 0),
            checks: vec![],
            convention: StackConvention::Avoid231,
            max_ambient_dim: 512,
        };
        assert!(matches!(run_verify(&over_cap), Err(CliError::Config(_))));
    }

    #[test]
    fn empty_grid_produces_no_reports() {
        let grid = SweepGrid {
            mode: Mode::Ring,
            s_values: vec![],
            shapes: vec![],
            characteristics: vec![],
            checks: vec![],
            convention: StackConvention::Avoid231,
            max_ambient_dim: DEFAULT_MAX_AMBIENT_DIM,
        };
        let reports = run_sweep(&grid).unwrap();
        assert!(reports.is_empty());
        assert_eq!(exit_code(&reports), 0);
    }

    #[test]
    fn sweep_order_is_grid_order() {
        let grid = SweepGrid {
            mode: Mode::Ring,
            s_values: vec![2, 3],
            characteristics: vec![0, 5],
            shapes: vec![],
            checks: vec![Check::Theorem6],
            convention: StackConvention::Avoid231,
            max_ambient_dim: DEFAULT_MAX_AMBIENT_DIM,
        };
        let reports = run_sweep(&grid).unwrap();
        let keys: Vec<(u32, u64)> = reports
            .iter()
            .map(|r| (r.config.s, r.config.characteristic))
            .collect();
        assert_eq!(keys, vec![(2, 0), (2, 5), (3, 0), (3, 5)]);
    }

    #[test]
    fn csv_serialization_counts_rows() {
        let grid = SweepGrid {
            mode: Mode::Ring,
            s_values: vec![2, 3, 4],
            characteristics: vec![0],
            shapes: vec![],
            checks: vec![Check::Theorem6],
            convention: StackConvention::Avoid231,
            max_ambient_dim: DEFAULT_MAX_AMBIENT_DIM,
        };
        let reports = run_sweep(&grid).unwrap();
        let csv = String::from_utf8(serialize_reports(&reports, ReportFormat::Csv)).unwrap();
        let rows: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(rows.len(), 1 + reports.len());
    }
}
