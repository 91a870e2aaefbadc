//! Command-line front end: configuration ingestion, the solve/verify/sweep/
//! regions subcommands, and deterministic CSV/JSON reporting.
//!
//! Exit codes: 0 success, 1 verification discrepancy, 2 configuration error.

use crate::analysis::{
    median_voter_indifference_region, sweep, AxisParam, AxisSpec, Cell, RegionMap, WelfareTags,
};
use crate::closed_form::{solve_insider, solve_outsider, table_fixtures, EquilibriumOutcome};
use crate::model::{ModelParams, Party, DEFAULT_TIE_EPS};
use crate::oracle::{
    sample_params, verify_closed_form, verify_closed_form_corrupted, GridSpec,
    VerificationReport, DEFAULT_EPSILON,
};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::PathBuf;

/// Exact column header of the sweep CSV artifact.
pub const SWEEP_CSV_HEADER: &str = "axis1,axis2,case_insider,case_outsider,winner,policy,rent,\
u_median_i,u_median_o,u_partyR_i,u_partyR_o,voter_effect,party_effect,polarization,welfare_tag";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

/// Effective run configuration: the model parameters plus solver, grid, and
/// output settings. Serialized as a flat TOML document; all fields except
/// the ten model parameters have defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub model: ModelParams,
    #[serde(default = "defaults::tie_eps")]
    pub tie_eps: f64,
    #[serde(default = "defaults::epsilon")]
    pub epsilon: f64,
    #[serde(default = "defaults::policy_steps")]
    pub policy_steps: usize,
    #[serde(default = "defaults::rent_steps")]
    pub rent_steps: usize,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

mod defaults {
    pub fn tie_eps() -> f64 {
        super::DEFAULT_TIE_EPS
    }
    pub fn epsilon() -> f64 {
        super::DEFAULT_EPSILON
    }
    pub fn policy_steps() -> usize {
        201
    }
    pub fn rent_steps() -> usize {
        101
    }
    pub fn seed() -> u64 {
        0
    }
}

impl RunConfig {
    pub fn grid_for(&self, params: &ModelParams) -> GridSpec {
        GridSpec::with_resolution(params, self.policy_steps, self.rent_steps, self.epsilon)
    }
}

#[derive(Debug, Parser)]
#[command(name = "nomgame", version, about = "Nomination-and-election game solver")]
pub struct Cli {
    /// TOML configuration file with the model parameters
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override or supply a configuration key, e.g. --set k_l=-0.3
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output format for sweep and regions artifacts
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Write the report to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Policy grid resolution (the rent grid scales proportionally)
    #[arg(long, global = true, value_name = "N")]
    grid_steps: Option<usize>,
    /// Concrete acceptance margin replacing the limit construction
    #[arg(long, global = true, value_name = "E")]
    epsilon: Option<f64>,
    /// Absolute tolerance for tie detection
    #[arg(long, global = true, value_name = "T")]
    tie_eps: Option<f64>,
    /// Seed for randomized verification batches
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve both games and report equilibria with utilities
    Solve,
    /// Check the closed-form solvers against the grid oracle
    Verify {
        /// Randomized instances to verify in addition to the fixtures
        #[arg(long, default_value_t = 0, value_name = "N")]
        batch: usize,
        /// Corrupt the closed-form outcome first (must then exit 1)
        #[arg(long)]
        negative_control: bool,
    },
    /// Evaluate the welfare comparison over a two-parameter grid
    Sweep {
        /// First axis as NAME:LO:HI:N (outer loop), e.g. V_r:-1:1:21
        #[arg(long, value_name = "SPEC")]
        axis1: String,
        /// Second axis as NAME:LO:HI:N (inner loop)
        #[arg(long, value_name = "SPEC")]
        axis2: String,
    },
    /// Classify median-voter preference over a (V, X) window
    Regions {
        #[arg(long, default_value_t = 41, value_name = "N")]
        resolution: usize,
        /// Window as LO:HI applied to the V axis
        #[arg(long, default_value = "-1:1", value_name = "LO:HI", allow_hyphen_values = true)]
        v_range: String,
        /// Window as LO:HI applied to the X axis
        #[arg(long, default_value = "-1:1", value_name = "LO:HI", allow_hyphen_values = true)]
        x_range: String,
    },
    /// Print the effective configuration as TOML
    DumpConfig,
}

/// Real formatter used in CSV artifacts: 12 significant digits, scientific.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.11e}")
}

#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

const FLOAT_KEYS: &[&str] = &[
    "b_L", "b_R", "alpha_L", "alpha_R", "k_l", "k_r", "k_o", "nu_l", "nu_r", "nu_o", "tie_eps",
    "epsilon",
];
const INT_KEYS: &[&str] = &["policy_steps", "rent_steps", "seed"];
const STRING_KEYS: &[&str] = &["format", "out"];

fn build_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut table: toml::Table = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
            text.parse()
                .map_err(|e| ConfigError(format!("cannot parse {}: {e}", path.display())))?
        }
        None => toml::Table::new(),
    };
    for entry in &cli.set {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("--set expects KEY=VALUE, got '{entry}'")))?;
        let parsed = if FLOAT_KEYS.contains(&key) {
            toml::Value::Float(
                value
                    .parse::<f64>()
                    .map_err(|e| ConfigError(format!("--set {key}: {e}")))?,
            )
        } else if INT_KEYS.contains(&key) {
            toml::Value::Integer(
                value
                    .parse::<i64>()
                    .map_err(|e| ConfigError(format!("--set {key}: {e}")))?,
            )
        } else if STRING_KEYS.contains(&key) {
            toml::Value::String(value.to_string())
        } else {
            return Err(ConfigError(format!("unknown configuration key '{key}'")));
        };
        table.insert(key.to_string(), parsed);
    }
    let mut config: RunConfig = table
        .try_into()
        .map_err(|e| ConfigError(format!("invalid configuration: {e}")))?;
    if let Some(n) = cli.grid_steps {
        config.policy_steps = n.max(2);
        config.rent_steps = (n / 2 + 1).max(2);
    }
    if let Some(e) = cli.epsilon {
        config.epsilon = e;
    }
    if let Some(t) = cli.tie_eps {
        config.tie_eps = t;
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(f) = cli.format {
        config.format = f;
    }
    if let Some(o) = &cli.out {
        config.out = Some(o.clone());
    }
    config
        .model
        .validate()
        .map_err(|e| ConfigError(e.to_string()))?;
    Ok(config)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), ConfigError> {
    let mut text = content.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct GameReport {
    #[serde(flatten)]
    outcome: EquilibriumOutcome,
    u_median: f64,
    #[serde(rename = "u_partyR")]
    u_party_r: f64,
}

#[derive(Serialize)]
struct SolveReport {
    insider: GameReport,
    outsider: GameReport,
}

fn game_report(outcome: EquilibriumOutcome, params: &ModelParams) -> GameReport {
    GameReport {
        u_median: outcome.result.expected_median_utility(params),
        u_party_r: outcome.result.expected_party_utility(Party::R, params),
        outcome,
    }
}

fn cmd_solve(config: &RunConfig) -> Result<i32, ConfigError> {
    let insider = solve_insider(&config.model, config.tie_eps);
    let outsider = solve_outsider(&config.model, config.tie_eps)
        .map_err(|e| ConfigError(e.to_string()))?;
    let report = SolveReport {
        insider: game_report(insider, &config.model),
        outsider: game_report(outsider, &config.model),
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable report");
    emit(&config.out, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyInstance {
    label: String,
    report: VerificationReport,
}

#[derive(Serialize)]
struct VerifyRun {
    instances: Vec<VerifyInstance>,
    disagreements: usize,
}

fn cmd_verify(config: &RunConfig, batch: usize, negative_control: bool) -> Result<i32, ConfigError> {
    if negative_control {
        let grid = config.grid_for(&config.model);
        let report = verify_closed_form_corrupted(&config.model, &grid, config.tie_eps);
        let text = serde_json::to_string_pretty(&report).expect("serializable report");
        emit(&config.out, &text)?;
        for check in report.checks.iter().filter(|c| !c.agrees()) {
            eprintln!(
                "discrepancy [{:?} case {}]: winner {} vs {}, policy {} vs {} (tol {}), rent {} vs {} (tol {})",
                check.game,
                check.case.index,
                check.closed_winner,
                check.oracle_winner,
                fmt_real(check.closed_policy),
                fmt_real(check.oracle_policy),
                fmt_real(report.tolerance_policy),
                fmt_real(check.closed_rent),
                fmt_real(check.oracle_rent),
                fmt_real(report.tolerance_rent),
            );
        }
        return Ok(if report.all_agree { 0 } else { 1 });
    }

    let mut jobs: Vec<(String, ModelParams)> = table_fixtures()
        .into_iter()
        .map(|(label, p)| (label.to_string(), p))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for i in 0..batch {
        jobs.push((format!("draw-{i}"), sample_params(&mut rng)));
    }
    let instances: Vec<VerifyInstance> = jobs
        .par_iter()
        .map(|(label, params)| {
            let grid = config.grid_for(params);
            VerifyInstance {
                label: label.clone(),
                report: verify_closed_form(params, &grid, config.tie_eps),
            }
        })
        .collect();
    let disagreements = instances
        .iter()
        .flat_map(|i| i.report.checks.iter())
        .filter(|c| !c.agrees())
        .count();
    let run = VerifyRun {
        instances,
        disagreements,
    };
    let text = serde_json::to_string_pretty(&run).expect("serializable report");
    emit(&config.out, &text)?;
    if disagreements > 0 {
        for instance in &run.instances {
            for check in instance.report.checks.iter().filter(|c| !c.agrees()) {
                eprintln!(
                    "discrepancy [{} {:?} case {}]: winner {} vs {}, policy {} vs {}, rent {} vs {}",
                    instance.label,
                    check.game,
                    check.case.index,
                    check.closed_winner,
                    check.oracle_winner,
                    fmt_real(check.closed_policy),
                    fmt_real(check.oracle_policy),
                    fmt_real(check.closed_rent),
                    fmt_real(check.oracle_rent),
                );
            }
        }
        Ok(1)
    } else {
        Ok(0)
    }
}

fn parse_axis(spec: &str) -> Result<AxisSpec, ConfigError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(ConfigError(format!(
            "axis spec must be NAME:LO:HI:N, got '{spec}'"
        )));
    }
    let param = AxisParam::parse(parts[0])
        .ok_or_else(|| ConfigError(format!("unknown axis parameter '{}'", parts[0])))?;
    let lo: f64 = parts[1]
        .parse()
        .map_err(|e| ConfigError(format!("axis '{spec}': {e}")))?;
    let hi: f64 = parts[2]
        .parse()
        .map_err(|e| ConfigError(format!("axis '{spec}': {e}")))?;
    let n: usize = parts[3]
        .parse()
        .map_err(|e| ConfigError(format!("axis '{spec}': {e}")))?;
    if n == 0 {
        return Err(ConfigError(format!("axis '{spec}': need at least 1 point")));
    }
    Ok(AxisSpec { param, lo, hi, n })
}

/// Renders the sweep region map in the fixed 15-column CSV schema.
pub fn sweep_csv(map: &RegionMap) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for cell in &map.cells {
        match cell {
            Cell::Solved {
                axis1,
                axis2,
                comparison,
                winner,
                policy,
                rent,
                tags,
            } => {
                let tag = tag_column(tags);
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    fmt_real(*axis1),
                    fmt_real(*axis2),
                    comparison.cases.0.index,
                    comparison.cases.1.index,
                    winner,
                    fmt_real(*policy),
                    fmt_real(*rent),
                    fmt_real(comparison.u_median_insider),
                    fmt_real(comparison.u_median_outsider),
                    fmt_real(comparison.u_party_r_insider),
                    fmt_real(comparison.u_party_r_outsider),
                    comparison.voter_effect,
                    comparison.party_effect,
                    comparison.polarization_effect,
                    tag,
                )
                .expect("writing to string");
            }
            Cell::Infeasible { axis1, axis2, .. } => {
                writeln!(
                    out,
                    "{},{},infeasible,infeasible,,,,,,,,,,,",
                    fmt_real(*axis1),
                    fmt_real(*axis2),
                )
                .expect("writing to string");
            }
        }
    }
    out
}

fn tag_column(tags: &WelfareTags) -> String {
    match (tags.voter, tags.party) {
        (Some(v), Some(p)) => format!("{v}+{p}"),
        (Some(v), None) => v.to_string(),
        (None, Some(p)) => p.to_string(),
        (None, None) => String::new(),
    }
}

fn cmd_sweep(config: &RunConfig, axis1: &str, axis2: &str) -> Result<i32, ConfigError> {
    let axis1 = parse_axis(axis1)?;
    let axis2 = parse_axis(axis2)?;
    let map = sweep(&config.model, axis1, axis2, config.tie_eps);
    let all_infeasible = map
        .cells
        .iter()
        .all(|c| matches!(c, Cell::Infeasible { .. }));
    let text = match config.format {
        OutputFormat::Csv => sweep_csv(&map),
        OutputFormat::Json => serde_json::to_string_pretty(&map).expect("serializable map"),
    };
    emit(&config.out, &text)?;
    if all_infeasible {
        Err(ConfigError("every sweep cell is infeasible".to_string()))
    } else {
        Ok(0)
    }
}

fn parse_range(spec: &str) -> Result<(f64, f64), ConfigError> {
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| ConfigError(format!("range must be LO:HI, got '{spec}'")))?;
    let lo: f64 = lo
        .parse()
        .map_err(|e| ConfigError(format!("range '{spec}': {e}")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|e| ConfigError(format!("range '{spec}': {e}")))?;
    Ok((lo, hi))
}

fn cmd_regions(
    tie_eps: f64,
    format: OutputFormat,
    out: &Option<PathBuf>,
    resolution: usize,
    v_range: &str,
    x_range: &str,
) -> Result<i32, ConfigError> {
    let (v_lo, v_hi) = parse_range(v_range)?;
    let (x_lo, x_hi) = parse_range(x_range)?;
    let cells = median_voter_indifference_region(v_lo, v_hi, x_lo, x_hi, resolution, tie_eps);
    let text = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&cells).expect("serializable cells"),
        OutputFormat::Csv => {
            let mut s = String::from("v,x,preference\n");
            for c in &cells {
                writeln!(s, "{},{},{}", fmt_real(c.v), fmt_real(c.x), c.preference)
                    .expect("writing to string");
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(0)
}

/// Parses arguments and dispatches. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version through the same path
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };

    // `regions` needs no model parameters.
    if let Command::Regions {
        resolution,
        v_range,
        x_range,
    } = &cli.command
    {
        let tie = cli.tie_eps.unwrap_or(DEFAULT_TIE_EPS);
        let format = cli.format.unwrap_or_default();
        return match cmd_regions(tie, format, &cli.out, *resolution, v_range, x_range) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        };
    }

    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };

    let result = match &cli.command {
        Command::Solve => cmd_solve(&config),
        Command::Verify {
            batch,
            negative_control,
        } => cmd_verify(&config, *batch, *negative_control),
        Command::Sweep { axis1, axis2 } => cmd_sweep(&config, axis1, axis2),
        Command::DumpConfig => {
            let text = toml::to_string(&config).expect("serializable config");
            emit(&config.out, &text).map(|_| 0)
        }
        Command::Regions { .. } => unreachable!("handled above"),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
