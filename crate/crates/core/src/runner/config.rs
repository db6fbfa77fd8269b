use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{build_benchmark, known_equilibrium, Benchmark};
use crate::learners::Algorithm;
use crate::metrics::DivergenceMetric;
use crate::simulator::NoiseModel;
use crate::solver::{solve_maximin, solve_minimax_column};
use crate::{Equilibrium, Payoff};

pub const DEFAULT_SEED_COUNT: usize = 50;
pub const DEFAULT_RECORD_EVERY: usize = 10;
pub const DEFAULT_OUTPUT_DIR: &str = "results";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkName {
    Rps,
    Diagonal,
    Bignum,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpec {
    pub benchmark: BenchmarkName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    pub algo: Algorithm,
    /// Mutation rate; only read for COEBL.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list: Option<Vec<u64>>,
}

/// Experiment description as read from TOML or JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub game: GameSpec,
    pub row: PlayerSpec,
    pub col: PlayerSpec,
    pub horizon: usize,
    #[serde(default)]
    pub seeds: SeedSpec,
    #[serde(default = "default_noise")]
    pub noise: NoiseModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_every: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<DivergenceMetric>,
}

fn default_noise() -> NoiseModel {
    NoiseModel::GaussianUnit
}

impl ExperimentConfig {
    /// Reads a `.toml` or `.json` config. A run manifest is accepted too: its
    /// `config` member is used. Relative custom matrix paths are resolved
    /// against the config file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_toml = path.extension().is_some_and(|e| e == "toml");
        let mut config: ExperimentConfig = if is_toml {
            toml::from_str(&text).map_err(|e| Error::format(path, e))?
        } else {
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::format(path, e))?;
            let inner = match value.get("config") {
                Some(c) => c.clone(),
                None => value,
            };
            serde_json::from_value(inner).map_err(|e| Error::format(path, e))?
        };
        if let (Some(p), Some(dir)) = (config.game.custom_path.as_mut(), path.parent()) {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(config)
    }

    pub fn resolve(&self) -> Result<ResolvedExperiment> {
        if self.horizon == 0 {
            return Err(Error::Parameter("horizon must be at least 1".into()));
        }
        let game = self.build_game()?;
        let equilibrium = equilibrium_of(&game)?;
        let is_rps = game.benchmark() == Benchmark::Rps;

        let mut warnings = Vec::new();
        let resolve_player = |p: &PlayerSpec, side: &str, warnings: &mut Vec<String>| {
            if p.algo != Algorithm::Coebl {
                return Ok(PlayerSpec { algo: p.algo, c: None });
            }
            let c = p.c.unwrap_or(if is_rps { 2.0 } else { 8.0 });
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::Parameter(format!("{side} mutation rate must be positive")));
            }
            if c < 8.0 {
                warnings.push(format!(
                    "{side}: mutation rate {c} < 8, the regret bound is not guaranteed"
                ));
            }
            Ok(PlayerSpec { algo: p.algo, c: Some(c) })
        };
        let row = resolve_player(&self.row, "row", &mut warnings)?;
        let col = resolve_player(&self.col, "col", &mut warnings)?;

        let seeds = match &self.seeds.list {
            Some(list) => {
                if self.seeds.base.is_some() || self.seeds.count.is_some() {
                    return Err(Error::Parameter(
                        "give either seeds.list or seeds.base/count, not both".into(),
                    ));
                }
                list.clone()
            }
            None => {
                let base = self.seeds.base.unwrap_or(0);
                let count = self.seeds.count.unwrap_or(DEFAULT_SEED_COUNT);
                (0..count as u64).map(|k| base.wrapping_add(k)).collect()
            }
        };
        if seeds.is_empty() {
            return Err(Error::Parameter("at least one seed is required".into()));
        }
        if seeds.iter().collect::<BTreeSet<_>>().len() != seeds.len() {
            return Err(Error::Parameter("seeds must be distinct".into()));
        }
        if seeds.len() < 2 {
            warnings.push("fewer than 2 seeds: confidence intervals reported as 0".into());
        }

        let record_every = self.record_every.unwrap_or(DEFAULT_RECORD_EVERY);
        if record_every == 0 {
            return Err(Error::Parameter("record_every must be at least 1".into()));
        }
        let metric = self
            .metric
            .unwrap_or_else(|| DivergenceMetric::natural_for(&equilibrium));
        if metric == DivergenceMetric::KlSum && !equilibrium.has_full_support() {
            return Err(Error::Parameter(
                "kl_sum needs a full-support equilibrium; use tv_sum".into(),
            ));
        }

        let config = ExperimentConfig {
            game: self.game.clone(),
            row,
            col,
            horizon: self.horizon,
            seeds: SeedSpec {
                base: None,
                count: None,
                list: Some(seeds.clone()),
            },
            noise: self.noise,
            output_dir: Some(
                self.output_dir
                    .clone()
                    .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            ),
            record_every: Some(record_every),
            metric: Some(metric),
        };
        Ok(ResolvedExperiment {
            config,
            game,
            equilibrium,
            seeds,
            record_every,
            metric,
            warnings,
        })
    }

    fn build_game(&self) -> Result<Payoff> {
        let need_n = || {
            self.game
                .n
                .ok_or_else(|| Error::Parameter("game.n is required for bitstring games".into()))
        };
        match self.game.benchmark {
            BenchmarkName::Rps => Ok(build_benchmark(Benchmark::Rps)?),
            BenchmarkName::Diagonal => build_benchmark(Benchmark::Diagonal(need_n()?)),
            BenchmarkName::Bignum => build_benchmark(Benchmark::Bignum(need_n()?)),
            BenchmarkName::Custom => {
                let path = self.game.custom_path.as_ref().ok_or_else(|| {
                    Error::Parameter("game.custom_path is required for custom games".into())
                })?;
                Payoff::load_json(path)
            }
        }
    }
}

/// Benchmarks use their known equilibrium; custom games are solved.
pub fn equilibrium_of(game: &Payoff) -> Result<Equilibrium> {
    if game.benchmark() != Benchmark::Custom {
        return known_equilibrium(game);
    }
    let row = solve_maximin(game, 1e-9)?;
    let col = solve_minimax_column(game, 1e-9)?;
    Ok(Equilibrium {
        x_star: row.strategy,
        y_star: col.strategy,
        value: row.value,
    })
}

/// A validated config with every default filled in.
#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    /// Echo of the config with all defaults explicit.
    pub config: ExperimentConfig,
    pub game: Payoff,
    pub equilibrium: Equilibrium,
    pub seeds: Vec<u64>,
    pub record_every: usize,
    pub metric: DivergenceMetric,
    pub warnings: Vec<String>,
}
