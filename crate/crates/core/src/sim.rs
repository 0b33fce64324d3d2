//! Monte Carlo outage simulation of direct ARQ and relay-assisted ARQ, and the
//! three figure presets built on it.
//!
//! Trials are independent: trial `i` of a run draws everything from
//! `streams.trial(i)`, and per-trial results are reduced by integer sums, so
//! counts do not depend on the number of worker threads.

use log::{debug, info};
use rayon::prelude::*;

use crate::channel::{draw_bs_links, draw_relay_links, SystemConfig, TrialStreams};
use crate::error::{Error, Result};
use crate::linalg::norm_sqr;
use crate::outage::{arq_outage, outage_interference, outage_single_user};
use crate::relay_multi::{max_min_sinr, Formulation, MultiuserOptions};
use crate::relay_single::solve_single_user_beamformer;

/// Empirical outage probability with a 3-sigma binomial half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub trials: u64,
    pub failures: u64,
    pub p_hat: f64,
    pub ci_halfwidth: f64,
}

impl OutageEstimate {
    pub fn new(failures: u64, trials: u64) -> Self {
        assert!(failures <= trials, "more failures than trials");
        if trials == 0 {
            return OutageEstimate {
                trials,
                failures,
                p_hat: f64::NAN,
                ci_halfwidth: f64::NAN,
            };
        }
        let n = trials as f64;
        let p = failures as f64 / n;
        OutageEstimate {
            trials,
            failures,
            p_hat: p,
            ci_halfwidth: 3.0 * (p * (1.0 - p) / n).sqrt(),
        }
    }

    /// p̂ + half-width, or 3/n (rule of three) when nothing failed.
    pub fn upper(&self) -> f64 {
        if self.failures == 0 {
            3.0 / self.trials as f64
        } else {
            self.p_hat + self.ci_halfwidth
        }
    }

    pub fn lower(&self) -> f64 {
        (self.p_hat - self.ci_halfwidth).max(0.0)
    }

    /// Interval of `self` lies entirely below that of `other`.
    pub fn separated_below(&self, other: &OutageEstimate) -> bool {
        self.upper() < other.lower()
    }
}

/// Whether a link of SINR `sinr` supports rate R, i.e. log2(1 + sinr) ≥ R.
fn supports(sinr: f64, gamma: f64) -> bool {
    sinr >= gamma
}

/// SINR at user `i` when both BSs transmit with power P spread over N
/// antennas: own link over cross link plus noise.
fn bs_sinr(cfg: &SystemConfig, h: &[[Vec<num_complex::Complex64>; 2]; 2], i: usize) -> f64 {
    let per_antenna = cfg.power / cfg.n as f64;
    per_antenna * norm_sqr(&h[i][i]) / (per_antenna * norm_sqr(&h[i][1 - i]) + cfg.noise_var)
}

/// Direct ARQ for user 1: up to L attempts, fresh channels each attempt, the
/// other cell always transmitting. A message fails if every attempt fails.
pub fn simulate_direct(cfg: &SystemConfig, trials: u64, streams: TrialStreams) -> Result<OutageEstimate> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::Contract("need at least one trial".into()));
    }
    let gamma = cfg.gamma();
    let failures: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.trial(i);
            let delivered = (0..cfg.retx).any(|_| {
                let h = draw_bs_links(cfg, &mut rng);
                supports(bs_sinr(cfg, &h, 0), gamma)
            });
            u64::from(!delivered)
        })
        .sum();
    Ok(OutageEstimate::new(failures, trials))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayMode {
    /// Both users decoded in round one.
    None,
    /// Exactly one user failed; the relay serves it while the other BS sends
    /// new data.
    SingleUser,
    /// Both failed; the relay serves both with the BSs silent.
    Multiuser,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub failed_round1: [bool; 2],
    pub mode: RelayMode,
    /// Message eventually delivered, per user.
    pub delivered: [bool; 2],
}

impl TrialOutcome {
    pub fn mode_for(failed: [bool; 2]) -> RelayMode {
        match failed {
            [false, false] => RelayMode::None,
            [true, true] => RelayMode::Multiuser,
            _ => RelayMode::SingleUser,
        }
    }
}

/// Options of the relay simulation.
#[derive(Debug, Clone, Copy, Default)]
pub struct RelayOptions {
    pub multiuser: MultiuserOptions,
}

/// One relay-ARQ trial: a round with both BSs transmitting, then (if needed)
/// one relay-assisted retransmission over fresh channels.
pub fn relay_trial<R: rand::Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R, opts: &RelayOptions) -> Result<TrialOutcome> {
    let gamma = cfg.gamma();
    let h = draw_bs_links(cfg, rng);
    let failed_round1 = [!supports(bs_sinr(cfg, &h, 0), gamma), !supports(bs_sinr(cfg, &h, 1), gamma)];
    let mode = TrialOutcome::mode_for(failed_round1);
    let mut delivered = [!failed_round1[0], !failed_round1[1]];
    match mode {
        RelayMode::None => {}
        RelayMode::SingleUser => {
            let target = if failed_round1[0] { 0 } else { 1 };
            let other = 1 - target;
            let h2 = draw_bs_links(cfg, rng);
            let g = draw_relay_links(cfg, rng);
            let bf = solve_single_user_beamformer(&g[other], &g[target], cfg.relay_power_single, cfg.n)?;
            // the failed user's BS stays silent; the other BS sends new data
            let interference = cfg.power / cfg.n as f64 * norm_sqr(&h2[target][other]);
            delivered[target] = supports(bf.gain(&g[target]) / (interference + cfg.noise_var), gamma);
        }
        RelayMode::Multiuser => {
            let g = draw_relay_links(cfg, rng);
            let bf = match max_min_sinr(&g[0], &g[1], cfg.relay_power_multi, cfg.noise_var, cfg.n, &opts.multiuser) {
                Ok(bf) => bf,
                Err(first) => {
                    debug!("multiuser design failed ({first}); retrying on the M x M formulation");
                    let retry = MultiuserOptions {
                        formulation: Formulation::Reduced,
                        ..opts.multiuser
                    };
                    max_min_sinr(&g[0], &g[1], cfg.relay_power_multi, cfg.noise_var, cfg.n, &retry)?
                }
            };
            delivered = [supports(bf.achieved_sinr[0], gamma), supports(bf.achieved_sinr[1], gamma)];
        }
    }
    Ok(TrialOutcome {
        failed_round1,
        mode,
        delivered,
    })
}

/// Relay-ARQ outage per user and pooled over both users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayEstimate {
    pub user: [OutageEstimate; 2],
    pub pooled: OutageEstimate,
    /// Trials that ended in each mode: none, single-user, multiuser.
    pub mode_counts: [u64; 3],
    /// Trials dropped because the multiuser design failed twice.
    pub solver_failures: u64,
    pub attempted: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct RelayCounts {
    failures: [u64; 2],
    modes: [u64; 3],
    solver_failures: u64,
}

impl RelayCounts {
    fn merge(self, o: RelayCounts) -> RelayCounts {
        RelayCounts {
            failures: [self.failures[0] + o.failures[0], self.failures[1] + o.failures[1]],
            modes: [
                self.modes[0] + o.modes[0],
                self.modes[1] + o.modes[1],
                self.modes[2] + o.modes[2],
            ],
            solver_failures: self.solver_failures + o.solver_failures,
        }
    }
}

pub fn simulate_relay(
    cfg: &SystemConfig,
    trials: u64,
    streams: TrialStreams,
    opts: &RelayOptions,
) -> Result<RelayEstimate> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::Contract("need at least one trial".into()));
    }
    if cfg.m < 2 {
        return Err(Error::Contract("the relay needs at least two antennas".into()));
    }
    let counts = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.trial(i);
            match relay_trial(cfg, &mut rng, opts) {
                Ok(out) => {
                    let mut c = RelayCounts::default();
                    for k in 0..2 {
                        c.failures[k] = u64::from(!out.delivered[k]);
                    }
                    let slot = match out.mode {
                        RelayMode::None => 0,
                        RelayMode::SingleUser => 1,
                        RelayMode::Multiuser => 2,
                    };
                    c.modes[slot] = 1;
                    c
                }
                Err(e) => {
                    debug!("trial {i} dropped: {e}");
                    RelayCounts {
                        solver_failures: 1,
                        ..Default::default()
                    }
                }
            }
        })
        .reduce(RelayCounts::default, RelayCounts::merge);
    let valid = trials - counts.solver_failures;
    Ok(RelayEstimate {
        user: [
            OutageEstimate::new(counts.failures[0], valid),
            OutageEstimate::new(counts.failures[1], valid),
        ],
        pooled: OutageEstimate::new(counts.failures[0] + counts.failures[1], 2 * valid),
        mode_counts: counts.modes,
        solver_failures: counts.solver_failures,
        attempted: trials,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Direct ARQ with interference, outage vs SNR for several L.
    Fig1,
    /// Relay ARQ against direct ARQ vs rate.
    Fig2,
    /// Relay ARQ vs number of relay antennas.
    Fig3,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
        }
    }

    fn default_axis(self) -> Axis {
        match self {
            Preset::Fig1 => Axis::Snr,
            Preset::Fig2 => Axis::Rate,
            Preset::Fig3 => Axis::Antennas,
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "fig1" => Ok(Preset::Fig1),
            "2" | "fig2" => Ok(Preset::Fig2),
            "3" | "fig3" => Ok(Preset::Fig3),
            other => Err(Error::Config(format!("unknown figure '{other}' (1, 2 or 3)"))),
        }
    }
}

/// The swept quantity of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Snr,
    Rate,
    Antennas,
}

impl Axis {
    pub fn column(self) -> &'static str {
        match self {
            Axis::Snr => "SNR_dB",
            Axis::Rate => "R",
            Axis::Antennas => "M",
        }
    }
}

/// Fully resolved experiment: system parameters plus the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub preset: Preset,
    pub system: SystemConfig,
    pub seed: u64,
    pub trials: u64,
    pub snr_grid_db: Vec<f64>,
    pub rate_grid: Vec<f64>,
    pub m_grid: Vec<usize>,
    /// Attempt counts of the direct-ARQ tables.
    pub retx_grid: Vec<u32>,
    pub formulation: Formulation,
}

/// SNR of the rate sweep, in dB.
pub const FIG2_SNR_DB: f64 = 35.0;
/// SNR of the antenna sweep, in dB.
pub const FIG3_SNR_DB: f64 = 15.0;

impl Experiment {
    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Fig1 => Experiment {
                preset,
                system: SystemConfig::direct_example(),
                seed: 1,
                trials: 100_000,
                snr_grid_db: (0..=8).map(|k| 5.0 * k as f64).collect(),
                rate_grid: vec![2.0],
                m_grid: vec![3],
                retx_grid: vec![1, 2, 5, 10],
                formulation: Formulation::default(),
            },
            Preset::Fig2 => Experiment {
                preset,
                system: SystemConfig::relay_example().with_snr_db(FIG2_SNR_DB),
                seed: 1,
                trials: 20_000,
                snr_grid_db: vec![FIG2_SNR_DB],
                rate_grid: (2..=8).map(f64::from).collect(),
                m_grid: vec![3],
                retx_grid: vec![2],
                formulation: Formulation::default(),
            },
            Preset::Fig3 => Experiment {
                preset,
                system: SystemConfig::relay_example().with_snr_db(FIG3_SNR_DB),
                seed: 1,
                trials: 20_000,
                snr_grid_db: vec![FIG3_SNR_DB],
                rate_grid: vec![6.0],
                m_grid: (2..=6).collect(),
                retx_grid: vec![2],
                formulation: Formulation::default(),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        let axes = [self.snr_grid_db.len(), self.rate_grid.len(), self.m_grid.len()];
        if axes.contains(&0) || self.retx_grid.is_empty() {
            return Err(Error::Config("sweep grids must not be empty".into()));
        }
        if axes.iter().filter(|&&n| n > 1).count() > 1 {
            return Err(Error::Config("at most one of snr, rate and m may have several values".into()));
        }
        if self.trials < 100 {
            return Err(Error::Config(format!("need at least 100 trials, got {}", self.trials)));
        }
        if self.retx_grid.contains(&0) {
            return Err(Error::Config("attempt counts must be at least 1".into()));
        }
        if self.m_grid.contains(&0) || self.rate_grid.iter().any(|r| !(*r >= 0.0)) {
            return Err(Error::Config("grid values out of range".into()));
        }
        Ok(())
    }

    /// The axis with several values, or the preset's natural one.
    pub fn axis(&self) -> Axis {
        if self.snr_grid_db.len() > 1 {
            Axis::Snr
        } else if self.rate_grid.len() > 1 {
            Axis::Rate
        } else if self.m_grid.len() > 1 {
            Axis::Antennas
        } else {
            self.preset.default_axis()
        }
    }

    /// Sweep points as (system parameters, axis value).
    pub fn points(&self) -> Vec<(SystemConfig, Value)> {
        let axis = self.axis();
        let mut out = Vec::new();
        for &s in &self.snr_grid_db {
            for &r in &self.rate_grid {
                for &m in &self.m_grid {
                    let cfg = self.system.clone().with_snr_db(s).with_rate(r).with_relay_antennas(m);
                    let x = match axis {
                        Axis::Snr => Value::Float(s),
                        Axis::Rate => Value::Float(r),
                        Axis::Antennas => Value::Int(m as u64),
                    };
                    out.push((cfg, x));
                }
            }
        }
        out
    }
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Trials dropped because the multiuser design failed, over all points.
    pub solver_failures: u64,
    /// Trials attempted in relay simulations.
    pub relay_trials: u64,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            solver_failures: 0,
            relay_trials: 0,
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Rows whose `series` column equals `name`.
    pub fn series<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Vec<Value>> + 'a {
        let col = self.column("series");
        self.rows
            .iter()
            .filter(move |row| col.is_some_and(|c| row[c] == Value::Text(name.to_string())))
    }
}

/// Runs a figure preset (with any overrides already applied to `exp`).
pub fn run_experiment(exp: &Experiment) -> Result<Table> {
    match exp.preset {
        Preset::Fig1 => direct_table(exp),
        Preset::Fig2 => relay_table(exp, true),
        Preset::Fig3 => relay_table(exp, false),
    }
}

/// Closed-form outage of user 1 without and with interference, raised to L.
pub fn analytic_table(exp: &Experiment) -> Result<Table> {
    exp.validate()?;
    let axis = exp.axis();
    let mut table = Table::new(&[axis.column(), "L", "single_user", "interference"]);
    for (cfg, x) in exp.points() {
        let su = outage_single_user(&cfg);
        let int = outage_interference(&cfg)?;
        for &l in &exp.retx_grid {
            table.rows.push(vec![
                x.clone(),
                Value::Int(u64::from(l)),
                Value::Float(arq_outage(su, l)),
                Value::Float(arq_outage(int, l)),
            ]);
        }
    }
    Ok(table)
}

/// Direct ARQ with interference: analytic P_out^L against simulation.
pub fn direct_table(exp: &Experiment) -> Result<Table> {
    exp.validate()?;
    let root = TrialStreams::new(exp.seed);
    let axis = exp.axis();
    let mut table = Table::new(&[axis.column(), "L", "analytic", "mc", "ci"]);
    for (idx, (base, x)) in exp.points().into_iter().enumerate() {
        let p1 = outage_interference(&base)?;
        for &l in &exp.retx_grid {
            let cfg = SystemConfig { retx: l, ..base.clone() };
            let est = simulate_direct(&cfg, exp.trials, root.child(tag(idx, u64::from(l))))?;
            info!("direct: {} = {x:?}, L = {l}: mc {:.3e}", axis.column(), est.p_hat);
            table.rows.push(vec![
                x.clone(),
                Value::Int(u64::from(l)),
                Value::Float(arq_outage(p1, l)),
                Value::Float(est.p_hat),
                Value::Float(est.ci_halfwidth),
            ]);
        }
    }
    Ok(table)
}

/// Relay ARQ (pooled and per user) with the single-user reference and,
/// optionally, direct ARQ with the same number of attempts.
pub fn relay_table(exp: &Experiment, with_direct: bool) -> Result<Table> {
    exp.validate()?;
    if exp.m_grid.iter().any(|&m| m < 2) {
        return Err(Error::Config("the relay needs at least two antennas".into()));
    }
    let root = TrialStreams::new(exp.seed);
    let axis = exp.axis();
    let mut table = Table::new(&[axis.column(), "series", "p_hat", "ci", "failures", "trials"]);
    let opts = RelayOptions {
        multiuser: MultiuserOptions {
            formulation: exp.formulation,
            ..Default::default()
        },
    };
    // one retransmission round: two attempts per message
    let attempts = 2;
    for (idx, (cfg, x)) in exp.points().into_iter().enumerate() {
        let mut push = |series: &str, p: f64, ci: f64, counts: Option<(u64, u64)>| {
            let count = |v: Option<u64>| v.map_or(Value::Text(String::new()), Value::Int);
            table.rows.push(vec![
                x.clone(),
                Value::Text(series.to_string()),
                Value::Float(p),
                Value::Float(ci),
                count(counts.map(|c| c.0)),
                count(counts.map(|c| c.1)),
            ]);
        };

        push("single-user", arq_outage(outage_single_user(&cfg), attempts), 0.0, None);
        if with_direct {
            push("direct-arq-analytic", arq_outage(outage_interference(&cfg)?, attempts), 0.0, None);
            let direct_cfg = SystemConfig { retx: attempts, ..cfg.clone() };
            let d = simulate_direct(&direct_cfg, exp.trials, root.child(tag(idx, 0)))?;
            push("direct-arq", d.p_hat, d.ci_halfwidth, Some((d.failures, d.trials)));
        }
        let r = simulate_relay(&cfg, exp.trials, root.child(tag(idx, 1)), &opts)?;
        info!(
            "relay: {} = {x:?}: outage {:.3e} (modes {:?}, solver failures {})",
            axis.column(),
            r.pooled.p_hat,
            r.mode_counts,
            r.solver_failures
        );
        let p = r.pooled;
        push("relay-arq", p.p_hat, p.ci_halfwidth, Some((p.failures, p.trials)));
        for (k, est) in r.user.iter().enumerate() {
            let name = format!("relay-arq-user{}", k + 1);
            push(&name, est.p_hat, est.ci_halfwidth, Some((est.failures, est.trials)));
        }
        table.solver_failures += r.solver_failures;
        table.relay_trials += r.attempted;
    }
    Ok(table)
}

fn tag(point: usize, series: u64) -> u64 {
    ((point as u64) << 16) | series
}
