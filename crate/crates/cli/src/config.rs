//! Sweep specification, run settings, and the key=value config file.
//!
//! Precedence: command-line flag > config file > built-in default. An
//! empty config file therefore reproduces the stock setup (19 sites,
//! 570 UEs, 20 MHz at 2.45 GHz, all six antenna pairs, both schedulers).

use anyhow::{anyhow, bail, Context, Result};
use mucellsim_core::{AntennaConfig, LayoutConfig, SchedulerKind, SimConfig};
use std::path::Path;

/// The experiment grid: one simulation per element of the cartesian
/// product velocities x antennas x schedulers x seeds.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub velocities: Vec<f64>,
    pub antennas: Vec<AntennaConfig>,
    pub schedulers: Vec<SchedulerKind>,
    pub seeds: Vec<u64>,
    /// None: per-scheduler defaults (RR 20 TTIs, PF 50 TTIs).
    pub n_ttis: Option<usize>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            velocities: (0..=12).map(|v| (v * 10) as f64).collect(),
            antennas: AntennaConfig::all(),
            schedulers: vec![SchedulerKind::RoundRobin, SchedulerKind::ProportionalFair],
            seeds: vec![42],
            n_ttis: None,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.velocities.is_empty()
            || self.antennas.is_empty()
            || self.schedulers.is_empty()
            || self.seeds.is_empty()
        {
            bail!("sweep lists (velocities, antennas, schedulers, seeds) must be non-empty");
        }
        for &v in &self.velocities {
            check_velocity(v)?;
        }
        Ok(())
    }

    /// Default simulation horizon per scheduler when --ttis is absent.
    pub fn ttis_for(&self, scheduler: SchedulerKind) -> usize {
        self.n_ttis.unwrap_or(match scheduler {
            SchedulerKind::RoundRobin => 20,
            SchedulerKind::ProportionalFair => 50,
        })
    }
}

/// Scalar knobs shared by every run of a sweep.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub rings: u32,
    pub isd_m: f64,
    pub ues_per_sector: usize,
    pub feedback_delay_ttis: usize,
    pub t_c: f64,
    pub chunk_count: usize,
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    pub rb_count: usize,
    pub shadowing_sigma_db: f64,
    pub noise_figure_db: f64,
    pub cqi_backoff_db: f64,
    pub mcs_levels: usize,
    pub tx_correlation: f64,
    pub rx_correlation: f64,
    pub workers: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        let base = SimConfig::default();
        RunSettings {
            rings: base.layout.n_rings,
            isd_m: base.layout.isd_m,
            ues_per_sector: base.ues_per_sector,
            feedback_delay_ttis: base.feedback_delay_ttis,
            t_c: base.t_c,
            chunk_count: base.chunk_count,
            bandwidth_hz: base.bandwidth_hz,
            carrier_hz: base.carrier_hz,
            rb_count: base.rb_count,
            shadowing_sigma_db: base.shadowing_sigma_db,
            noise_figure_db: base.noise_figure_db,
            cqi_backoff_db: base.cqi_backoff_db,
            mcs_levels: base.mcs_levels,
            tx_correlation: base.tx_correlation,
            rx_correlation: base.rx_correlation,
            workers: 0, // 0: let the pool pick the hardware default
        }
    }
}

impl RunSettings {
    /// Materialize the full configuration of one grid point.
    pub fn sim_config(
        &self,
        velocity_kmh: f64,
        antenna: AntennaConfig,
        scheduler: SchedulerKind,
        seed: u64,
        n_ttis: usize,
        record_trace: bool,
    ) -> SimConfig {
        SimConfig {
            layout: LayoutConfig {
                n_rings: self.rings,
                isd_m: self.isd_m,
                ..LayoutConfig::default()
            },
            antenna,
            scheduler,
            velocity_kmh,
            n_ttis,
            feedback_delay_ttis: self.feedback_delay_ttis,
            t_c: self.t_c,
            chunk_count: self.chunk_count,
            master_seed: seed,
            bandwidth_hz: self.bandwidth_hz,
            carrier_hz: self.carrier_hz,
            rb_count: self.rb_count,
            ues_per_sector: self.ues_per_sector,
            shadowing_sigma_db: self.shadowing_sigma_db,
            noise_figure_db: self.noise_figure_db,
            cqi_backoff_db: self.cqi_backoff_db,
            mcs_levels: self.mcs_levels,
            tx_correlation: self.tx_correlation,
            rx_correlation: self.rx_correlation,
            record_trace,
            ..SimConfig::default()
        }
    }
}

fn check_velocity(v: f64) -> Result<()> {
    if !(0.0..=120.0).contains(&v) {
        bail!("velocity {v} km/h out of range [0, 120]");
    }
    Ok(())
}

pub fn parse_velocity_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            let v: f64 = tok
                .trim()
                .parse()
                .map_err(|_| anyhow!("invalid velocity `{}` (expected a number)", tok.trim()))?;
            check_velocity(v)?;
            Ok(v)
        })
        .collect()
}

pub fn parse_antenna_list(s: &str) -> Result<Vec<AntennaConfig>> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let (t, r) = tok
                .split_once(['x', 'X'])
                .ok_or_else(|| anyhow!("invalid antenna pair `{tok}` (expected TxR, e.g. 2x4)"))?;
            let n_tx: usize = t.parse().map_err(|_| anyhow!("invalid antenna pair `{tok}`"))?;
            let n_rx: usize = r.parse().map_err(|_| anyhow!("invalid antenna pair `{tok}`"))?;
            AntennaConfig::new(n_tx, n_rx).map_err(|e| anyhow!("{e}"))
        })
        .collect()
}

pub fn parse_scheduler_list(s: &str) -> Result<Vec<SchedulerKind>> {
    match s.trim().to_ascii_lowercase().as_str() {
        "rr" => Ok(vec![SchedulerKind::RoundRobin]),
        "pf" => Ok(vec![SchedulerKind::ProportionalFair]),
        "both" => Ok(vec![
            SchedulerKind::RoundRobin,
            SchedulerKind::ProportionalFair,
        ]),
        other => bail!("invalid scheduler `{other}` (expected rr, pf or both)"),
    }
}

pub fn parse_seed_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("invalid seed `{}` (expected an unsigned integer)", tok.trim()))
        })
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(key: &str, value: &str, expected: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| anyhow!("config key `{key}`: invalid value `{value}` (expected {expected})"))
}

/// Apply one config-file assignment. Unknown keys are rejected by name.
fn apply_key(spec: &mut SweepSpec, settings: &mut RunSettings, key: &str, value: &str) -> Result<()> {
    match key {
        "velocities" => spec.velocities = parse_velocity_list(value)?,
        "velocity" => {
            let v: f64 = parse_scalar(key, value, "a number in km/h")?;
            check_velocity(v).with_context(|| format!("config key `{key}`"))?;
            spec.velocities = vec![v];
        }
        "antenna" => spec.antennas = parse_antenna_list(value)?,
        "scheduler" => spec.schedulers = parse_scheduler_list(value)?,
        "seeds" => spec.seeds = parse_seed_list(value)?,
        "ttis" => spec.n_ttis = Some(parse_scalar(key, value, "a TTI count")?),
        "rings" => settings.rings = parse_scalar(key, value, "a ring count")?,
        "isd_m" => {
            settings.isd_m = parse_scalar(key, value, "meters")?;
            if settings.isd_m <= 0.0 {
                bail!("config key `isd_m`: {} out of range (must be positive)", settings.isd_m);
            }
        }
        "ues_per_sector" => settings.ues_per_sector = parse_scalar(key, value, "a count")?,
        "feedback_delay_ttis" => {
            settings.feedback_delay_ttis = parse_scalar(key, value, "a TTI count")?
        }
        "t_c" => settings.t_c = parse_scalar(key, value, "a window length in TTIs")?,
        "chunk_count" => settings.chunk_count = parse_scalar(key, value, "a count")?,
        "bandwidth_hz" => settings.bandwidth_hz = parse_scalar(key, value, "Hz")?,
        "carrier_hz" => settings.carrier_hz = parse_scalar(key, value, "Hz")?,
        "rb_count" => settings.rb_count = parse_scalar(key, value, "a count")?,
        "shadowing_sigma_db" => settings.shadowing_sigma_db = parse_scalar(key, value, "dB")?,
        "noise_figure_db" => settings.noise_figure_db = parse_scalar(key, value, "dB")?,
        "cqi_backoff_db" => settings.cqi_backoff_db = parse_scalar(key, value, "dB")?,
        "mcs_levels" => settings.mcs_levels = parse_scalar(key, value, "a count")?,
        "tx_correlation" => settings.tx_correlation = parse_scalar(key, value, "a coefficient")?,
        "rx_correlation" => settings.rx_correlation = parse_scalar(key, value, "a coefficient")?,
        "workers" => settings.workers = parse_scalar(key, value, "a thread count")?,
        other => bail!("unknown config key `{other}`"),
    }
    Ok(())
}

/// Parse a key=value config file onto the given spec/settings.
///
/// Lines are `key = value`; `#` starts a comment; blank lines are
/// ignored. Missing file, malformed lines, unknown keys and bad values
/// are reported distinctly.
pub fn parse_config_file(
    path: &Path,
    spec: &mut SweepSpec,
    settings: &mut RunSettings,
) -> Result<()> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("config file not found or unreadable: {}", path.display()))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            anyhow!(
                "{}:{}: expected `key = value`, got `{line}`",
                path.display(),
                lineno + 1
            )
        })?;
        apply_key(spec, settings, key.trim(), value.trim())
            .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
    }
    Ok(())
}
