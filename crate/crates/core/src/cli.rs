//! Command-line front end: flags and config files, presets, CSV output.
//!
//! A config file is flat `key = value` text with the keys written by
//! [`RunConfig::to_text`]; `#` starts a comment line. Values from the file
//! override the preset and flags override the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use crate::channel::{draw_relay_links, TrialStreams};
use crate::error::{Error, Result};
use crate::relay_multi::{max_min_sinr, MultiuserOptions};
use crate::relay_single::{single_user_optimum, solve_single_user_beamformer};
use crate::sim::{analytic_table, direct_table, relay_table, run_experiment, Experiment, Preset, Table, Value};

/// Exit code for usage and configuration errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit code when too many multiuser designs failed.
pub const EXIT_SOLVER_BUDGET: i32 = 3;
/// Allowed fraction of relay trials dropped for solver failures.
pub const SOLVER_FAILURE_BUDGET: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "relay-arq", version, about = "Outage of direct and shared-relay ARQ in a two-cell downlink")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form outage with and without interference.
    Analytic,
    /// Monte Carlo direct ARQ against the closed form.
    SimulateDirect,
    /// Monte Carlo relay ARQ (per user and pooled).
    SimulateRelay,
    /// Null-steering relay beamformer on one channel draw.
    BeamformSingle,
    /// Max-min SINR relay beamformers on one channel draw.
    BeamformMulti,
    /// Figure preset 1, 2 or 3.
    Figure { which: String },
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Flat key = value file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV destination (standard output if absent).
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// BS antennas.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Relay antennas.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Rate in bits/s/Hz.
    #[arg(long, global = true)]
    rate: Option<f64>,
    /// Comma-separated rates.
    #[arg(long, global = true)]
    rate_grid: Option<String>,
    /// Comma-separated relay antenna counts.
    #[arg(long, global = true)]
    m_grid: Option<String>,
    /// SNR in dB: a single value, a comma list or start:stop:step.
    #[arg(long, global = true, allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Attempt count(s) L for direct ARQ, comma-separated.
    #[arg(long, global = true)]
    retx: Option<String>,
    /// SDP lift of the multiuser design: span, reduced or full.
    #[arg(long, global = true)]
    formulation: Option<String>,
    /// Print the effective config and exit.
    #[arg(long, global = true)]
    dump_config: bool,
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub output: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "preset",
    "seed",
    "trials",
    "n",
    "m",
    "power",
    "relay_power_single",
    "relay_power_multi",
    "noise_var",
    "var_direct",
    "var_cross",
    "var_relay",
    "rate",
    "retx",
    "snr_grid_db",
    "rate_grid",
    "m_grid",
    "retx_grid",
    "formulation",
    "output",
];

impl RunConfig {
    pub fn preset(preset: Preset) -> Self {
        RunConfig {
            experiment: Experiment::preset(preset),
            output: None,
        }
    }

    /// Flat text form; parsing it back gives an identical config.
    pub fn to_text(&self) -> String {
        let e = &self.experiment;
        let s = &e.system;
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("preset", e.preset.name().into());
        put("seed", e.seed.to_string());
        put("trials", e.trials.to_string());
        put("n", s.n.to_string());
        put("m", s.m.to_string());
        put("power", s.power.to_string());
        put("relay_power_single", s.relay_power_single.to_string());
        put("relay_power_multi", s.relay_power_multi.to_string());
        put("noise_var", s.noise_var.to_string());
        put("var_direct", s.var_direct.to_string());
        put("var_cross", s.var_cross.to_string());
        put("var_relay", s.var_relay.to_string());
        put("rate", s.rate.to_string());
        put("retx", s.retx.to_string());
        put("snr_grid_db", join(&e.snr_grid_db));
        put("rate_grid", join(&e.rate_grid));
        put("m_grid", join(&e.m_grid));
        put("retx_grid", join(&e.retx_grid));
        put("formulation", e.formulation.name().into());
        if let Some(p) = &self.output {
            put("output", p.display().to_string());
        }
        out
    }

    /// Parses a config file. `fallback` is the preset used when the file has
    /// no `preset` key.
    pub fn from_text(text: &str, fallback: Preset) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::Config(format!("line {}: unknown key '{k}'", lineno + 1)));
            }
            if entries.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key '{k}'", lineno + 1)));
            }
        }
        let preset = match entries.remove("preset") {
            Some(p) => p.parse()?,
            None => fallback,
        };
        let mut cfg = RunConfig::preset(preset);
        for (k, v) in &entries {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let e = &mut self.experiment;
        let s = &mut e.system;
        match key {
            "preset" => e.preset = value.parse()?,
            "seed" => e.seed = num(key, value)?,
            "trials" => e.trials = num(key, value)?,
            "n" => s.n = num(key, value)?,
            "m" => s.m = num(key, value)?,
            "power" => s.power = num(key, value)?,
            "relay_power_single" => s.relay_power_single = num(key, value)?,
            "relay_power_multi" => s.relay_power_multi = num(key, value)?,
            "noise_var" => s.noise_var = num(key, value)?,
            "var_direct" => s.var_direct = num(key, value)?,
            "var_cross" => s.var_cross = num(key, value)?,
            "var_relay" => s.var_relay = num(key, value)?,
            "rate" => s.rate = num(key, value)?,
            "retx" => s.retx = num(key, value)?,
            "snr_grid_db" => e.snr_grid_db = parse_snr_grid(value)?,
            "rate_grid" => e.rate_grid = list(key, value)?,
            "m_grid" => e.m_grid = list(key, value)?,
            "retx_grid" => e.retx_grid = list(key, value)?,
            "formulation" => e.formulation = value.parse()?,
            "output" => self.output = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    fn apply_flags(&mut self, a: &CommonArgs) -> Result<()> {
        let e = &mut self.experiment;
        if let Some(v) = a.seed {
            e.seed = v;
        }
        if let Some(v) = a.trials {
            e.trials = v;
        }
        if let Some(v) = a.n {
            e.system.n = v;
        }
        if let Some(v) = a.m {
            e.system.m = v;
            e.m_grid = vec![v];
        }
        if let Some(v) = a.rate {
            e.system.rate = v;
            e.rate_grid = vec![v];
        }
        if let Some(v) = &a.rate_grid {
            e.rate_grid = list("rate-grid", v)?;
        }
        if let Some(v) = &a.m_grid {
            e.m_grid = list("m-grid", v)?;
        }
        if let Some(v) = &a.snr_db {
            e.snr_grid_db = parse_snr_grid(v)?;
        }
        if let Some(v) = &a.retx {
            e.retx_grid = list("retx", v)?;
            e.system.retx = e.retx_grid[0];
        }
        if let Some(v) = &a.formulation {
            e.formulation = v.parse()?;
        }
        if let Some(p) = &a.output {
            self.output = Some(p.clone());
        }
        Ok(())
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{value}'")))
}

fn list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    let out: Vec<T> = value.split(',').map(|v| num(key, v)).collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::Config(format!("{key}: empty list")));
    }
    Ok(out)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// `start:stop:step` (inclusive), a single value or a comma list.
pub fn parse_snr_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step): (f64, f64, f64) = (num("snr-db", a)?, num("snr-db", b)?, num("snr-db", step)?);
            if !(step > 0.0) || b < a {
                return Err(Error::Config(format!("bad SNR range '{text}'")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|k| a + k as f64 * step).collect())
        }
        [_] => list("snr-db", text),
        _ => Err(Error::Config(format!("bad SNR range '{text}'"))),
    }
}

/// Formats a table as CSV: header row, floats with 17 significant digits.
pub fn to_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|v| match v {
                Value::Int(i) => i.to_string(),
                Value::Float(f) => format!("{f:.16e}"),
                Value::Text(s) => s.clone(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn beamform_single(exp: &Experiment) -> Result<Table> {
    exp.validate()?;
    let mut table = Table::new(&["M", "N", "objective", "optimum", "null_residual", "power"]);
    for (idx, (cfg, _)) in exp.points().into_iter().enumerate() {
        let g = draw_relay_links(&cfg, &mut TrialStreams::new(exp.seed).trial(idx as u64));
        let bf = solve_single_user_beamformer(&g[0], &g[1], cfg.relay_power_single, cfg.n)?;
        table.rows.push(vec![
            Value::Int(cfg.m as u64),
            Value::Int(cfg.n as u64),
            Value::Float(bf.gain(&g[1])),
            Value::Float(single_user_optimum(&g[0], &g[1], cfg.relay_power_single)),
            Value::Float(bf.null_residual),
            Value::Float(bf.power),
        ]);
    }
    Ok(table)
}

fn beamform_multi(exp: &Experiment) -> Result<Table> {
    exp.validate()?;
    let mut table = Table::new(&[
        "M", "N", "t_star", "sinr1", "sinr2", "rank1", "rank2", "total_power", "bisection_steps",
    ]);
    let opts = MultiuserOptions {
        formulation: exp.formulation,
        ..Default::default()
    };
    for (idx, (cfg, _)) in exp.points().into_iter().enumerate() {
        let g = draw_relay_links(&cfg, &mut TrialStreams::new(exp.seed).trial(idx as u64));
        let bf = max_min_sinr(&g[0], &g[1], cfg.relay_power_multi, cfg.noise_var, cfg.n, &opts)?;
        table.rows.push(vec![
            Value::Int(cfg.m as u64),
            Value::Int(cfg.n as u64),
            Value::Float(bf.t_star),
            Value::Float(bf.achieved_sinr[0]),
            Value::Float(bf.achieved_sinr[1]),
            Value::Int(bf.ranks[0] as u64),
            Value::Int(bf.ranks[1] as u64),
            Value::Float(bf.total_power),
            Value::Int(bf.bisection_steps as u64),
        ]);
    }
    Ok(table)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_USAGE,
        _ => 1,
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let fallback = match &cli.command {
        Command::Analytic | Command::SimulateDirect => Preset::Fig1,
        Command::SimulateRelay | Command::BeamformSingle | Command::BeamformMulti => Preset::Fig2,
        Command::Figure { which } => which.parse()?,
    };
    let mut cfg = match &cli.common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_text(&text, fallback)?
        }
        None => RunConfig::preset(fallback),
    };
    if let Command::Figure { which } = &cli.command {
        let preset: Preset = which.parse()?;
        if preset != cfg.experiment.preset {
            // the figure argument wins over the file's preset
            let mut fresh = RunConfig::preset(preset);
            fresh.output = cfg.output.clone();
            cfg = fresh;
        }
    }
    cfg.apply_flags(&cli.common)?;
    if matches!(cli.command, Command::BeamformSingle | Command::BeamformMulti) && cli.common.rate_grid.is_none() {
        // the designs do not depend on the rate
        cfg.experiment.rate_grid.truncate(1);
    }
    cfg.experiment.validate()?;
    if cli.common.dump_config {
        print!("{}", cfg.to_text());
        return Ok(0);
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.common.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} threads: {e}", cli.common.threads.unwrap_or(0))))?;
    let exp = &cfg.experiment;
    info!("running {:?} with seed {} and {} trials", cli.command, exp.seed, exp.trials);
    let table = pool.install(|| match &cli.command {
        Command::Analytic => analytic_table(exp),
        Command::SimulateDirect => direct_table(exp),
        Command::SimulateRelay => relay_table(exp, false),
        Command::BeamformSingle => beamform_single(exp),
        Command::BeamformMulti => beamform_multi(exp),
        Command::Figure { .. } => run_experiment(exp),
    })?;

    let csv = to_csv(&table);
    match &cfg.output {
        Some(path) => std::fs::write(path, csv).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(csv.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Config(format!("cannot write output: {e}")))?;
        }
    }

    if table.relay_trials > 0 {
        let share = table.solver_failures as f64 / table.relay_trials as f64;
        if share > SOLVER_FAILURE_BUDGET {
            warn!(
                "{} of {} relay trials dropped after solver failures",
                table.solver_failures, table.relay_trials
            );
            return Ok(EXIT_SOLVER_BUDGET);
        }
    }
    Ok(0)
}
