//! Named scenarios that tie the models together and write CSV tables plus
//! a `report.json` for each run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::report::GainReport;

pub mod cli;
pub mod config;
pub mod output;
pub mod scenarios;

pub use config::{ConfigError, Diagnostic, ScenarioConfig};
pub use output::OutputWriter;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable that overrides the configured output directory.
pub const OUT_DIR_ENV: &str = "PREDGAIN_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    EntropySweep,
    CompressionSurface,
    RouteProbability,
    DifferentialGain,
    FlashRoute,
    UpdateBound,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::EntropySweep,
        Scenario::CompressionSurface,
        Scenario::RouteProbability,
        Scenario::DifferentialGain,
        Scenario::FlashRoute,
        Scenario::UpdateBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::EntropySweep => "entropy-sweep",
            Scenario::CompressionSurface => "compression-surface",
            Scenario::RouteProbability => "route-probability",
            Scenario::DifferentialGain => "differential-gain",
            Scenario::FlashRoute => "flash-route",
            Scenario::UpdateBound => "update-bound",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::EntropySweep => "motion entropy across random:guided population mixes",
            Scenario::CompressionSurface => {
                "inverse compression ratio by radio range and population mix"
            }
            Scenario::RouteProbability => {
                "shorter-route probability, simulated waits, formula gap, calibration grid"
            }
            Scenario::DifferentialGain => "differential predictive gain against per-hop delay",
            Scenario::FlashRoute => "flash-route probability over route length and epoch",
            Scenario::UpdateBound => "route update time bound against cluster count",
        }
    }
}

#[derive(Debug, Serialize)]
struct RunRecord<'a> {
    version: &'static str,
    scenario: &'static str,
    seed: u64,
    config: &'a ScenarioConfig,
    reports: &'a [GainReport],
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub reports: Vec<GainReport>,
}

/// Runs `config` and writes its tables into `out_dir`. Nothing is written
/// there unless the whole scenario succeeds.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunSummary> {
    log::info!(
        "running {} with seed {}",
        config.scenario.name(),
        config.seed
    );
    let mut out = OutputWriter::new(out_dir, config.seed)?;
    let reports = match config.scenario {
        Scenario::EntropySweep => scenarios::entropy_sweep(config, &mut out)?,
        Scenario::CompressionSurface => scenarios::compression_surface(config, &mut out)?,
        Scenario::RouteProbability => scenarios::route_probability(config, &mut out)?,
        Scenario::DifferentialGain => scenarios::differential_gain(config, &mut out)?,
        Scenario::FlashRoute => scenarios::flash_route(config, &mut out)?,
        Scenario::UpdateBound => scenarios::update_bound(config, &mut out)?,
    };
    out.json(
        "report.json",
        &RunRecord {
            version: VERSION,
            scenario: config.scenario.name(),
            seed: config.seed,
            config,
            reports: &reports,
        },
    )?;
    let files = out.promote(out_dir)?;
    log::info!("wrote {} files to {}", files.len(), out_dir.display());
    Ok(RunSummary {
        out_dir: out_dir.to_path_buf(),
        files,
        reports,
    })
}

/// As [`run_scenario`], on a pool of `jobs` worker threads. Output does not
/// depend on `jobs`.
pub fn run_with_jobs(config: &ScenarioConfig, out_dir: &Path, jobs: usize) -> Result<RunSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| crate::error::invalid("jobs", e.to_string()))?;
    pool.install(|| run_scenario(config, out_dir))
}

/// Output directory: explicit choice, then the environment, then the
/// config file.
pub fn resolve_out_dir(explicit: Option<&Path>, config: &ScenarioConfig) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => config.output_dir.clone(),
    }
}
