//! Batch execution over seeds, aggregation and file outputs.
//!
//! Layout of an output directory:
//!
//! ```text
//! trajectories/seed_<seed>.csv   thinned per-seed log
//! summary.csv                    final regret/divergence per seed
//! aggregate.csv                  mean and 95% CI per recorded round
//! manifest.json                  resolved config, checksums, version
//! ```

mod aggregate;
mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use aggregate::{
    aggregate, aggregate_series, fmt_float, mean_ci, recorded_rounds, AggregateRow, MeanCi,
    SeedPoint, AGGREGATE_HEADER, Z_95,
};
pub use config::{
    equilibrium_of, BenchmarkName, ExperimentConfig, GameSpec, PlayerSpec, ResolvedExperiment,
    SeedSpec, DEFAULT_OUTPUT_DIR, DEFAULT_RECORD_EVERY, DEFAULT_SEED_COUNT,
};

use crate::error::{Error, Result};
use crate::learners::{build_learner, Side};
use crate::metrics::{divergence_series, regret_series};
use crate::simulator::{run_episode, Trajectory};

pub const VERSION: &str = concat!("coebl ", env!("CARGO_PKG_VERSION"));

pub const TRAJECTORY_DIR: &str = "trajectories";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretBound {
    /// `2 sqrt(2 c T m^2 ln(2 T^2 m^2))`.
    pub theorem: f64,
    /// Plot reference curve `0.1 sqrt(m^2 T)`.
    pub reference: f64,
    /// Whether `c >= 8`, the range the bound is proven for.
    pub theorem_backed: bool,
}

pub fn theoretical_bound(c: f64, horizon: f64, m: f64) -> Result<RegretBound> {
    if !(c > 0.0 && horizon > 0.0 && m > 0.0) || ![c, horizon, m].iter().all(|v| v.is_finite()) {
        return Err(Error::Parameter(format!(
            "bound needs positive c, T and m (got {c}, {horizon}, {m})"
        )));
    }
    let log_term = (2.0 * horizon * horizon * m * m).ln();
    Ok(RegretBound {
        theorem: 2.0 * (2.0 * c * horizon * m * m * log_term).sqrt(),
        reference: 0.1 * (m * m * horizon).sqrt(),
        theorem_backed: c >= 8.0,
    })
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default.
    pub workers: Option<usize>,
    /// Overrides `output_dir` from the config.
    pub output_dir: Option<PathBuf>,
}

/// One recorded round of a seed's trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordedRound {
    pub t: usize,
    pub row_action: usize,
    pub col_action: usize,
    pub reward: f64,
    pub signed: f64,
    pub absolute: f64,
    pub divergence: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedOutcome {
    pub seed: u64,
    pub rounds: Vec<RecordedRound>,
    pub final_signed: f64,
    pub final_absolute: f64,
    pub final_divergence: f64,
}

impl SeedOutcome {
    pub fn points(&self) -> Vec<SeedPoint> {
        self.rounds
            .iter()
            .map(|r| SeedPoint {
                t: r.t,
                signed: r.signed,
                absolute: r.absolute,
                divergence: r.divergence,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub ci_estimator: String,
    pub thinning: String,
    pub warnings: Vec<String>,
    /// Relative path to lowercase hex SHA-256.
    pub files: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub output_dir: PathBuf,
    pub manifest: Manifest,
    pub aggregate: Vec<AggregateRow>,
    pub seeds: Vec<SeedOutcome>,
}

impl ExperimentReport {
    pub fn row_at(&self, t: usize) -> Option<&AggregateRow> {
        self.aggregate.iter().find(|r| r.t == t)
    }
}

/// Plays a single seed of a resolved experiment and returns its full
/// trajectory.
pub fn play_seed(exp: &ResolvedExperiment, seed: u64) -> Result<Trajectory> {
    let m = exp.game.m();
    let horizon = exp.config.horizon;
    let mut row = build_learner(exp.config.row.algo, m, horizon, Side::Row, exp.config.row.c)?;
    let mut col = build_learner(exp.config.col.algo, m, horizon, Side::Column, exp.config.col.c)?;
    run_episode(&exp.game, row.as_mut(), col.as_mut(), horizon, exp.config.noise, seed)
}

fn run_seed(exp: &ResolvedExperiment, seed: u64) -> Result<SeedOutcome> {
    let traj = play_seed(exp, seed)?;
    let regret = regret_series(&traj, exp.equilibrium.value);
    let divergence = divergence_series(&traj, &exp.equilibrium, exp.metric)?;
    let rounds = recorded_rounds(exp.config.horizon, exp.record_every)
        .into_iter()
        .map(|t| {
            let k = t - 1;
            let r = &traj.rounds[k];
            RecordedRound {
                t,
                row_action: r.row_action,
                col_action: r.col_action,
                reward: r.reward,
                signed: regret.cumulative_signed[k],
                absolute: regret.cumulative_absolute[k],
                divergence: divergence.values[k],
                x: r.x.probs().to_vec(),
                y: r.y.probs().to_vec(),
            }
        })
        .collect();
    let last = traj.len() - 1;
    Ok(SeedOutcome {
        seed,
        rounds,
        final_signed: regret.cumulative_signed[last],
        final_absolute: regret.cumulative_absolute[last],
        final_divergence: divergence.values[last],
    })
}

/// Runs every seed in parallel; results come back in seed order.
pub fn run_seeds(exp: &ResolvedExperiment, workers: Option<usize>) -> Result<Vec<SeedOutcome>> {
    let work = || {
        exp.seeds
            .par_iter()
            .map(|&seed| {
                run_seed(exp, seed).map_err(|e| Error::Episode {
                    seed,
                    source: Box::new(e),
                })
            })
            .collect::<Vec<_>>()
    };
    let results = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    results.into_iter().collect()
}

pub fn run_experiment(config: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentReport> {
    let mut config = config.clone();
    if let Some(dir) = &opts.output_dir {
        config.output_dir = Some(dir.clone());
    }
    let exp = config.resolve()?;
    let out_dir = exp
        .config
        .output_dir
        .clone()
        .expect("resolved config has an output dir");
    for w in &exp.warnings {
        log::warn!("{w}");
    }

    let seeds = run_seeds(&exp, opts.workers)?;
    let per_seed: Vec<Vec<SeedPoint>> = seeds.iter().map(SeedOutcome::points).collect();
    let rows = aggregate(&per_seed)?;

    let traj_dir = out_dir.join(TRAJECTORY_DIR);
    std::fs::create_dir_all(&traj_dir).map_err(|e| Error::io(&traj_dir, e))?;
    let mut files = BTreeMap::new();
    let m = exp.game.m();
    for s in &seeds {
        let rel = format!("{TRAJECTORY_DIR}/seed_{}.csv", s.seed);
        write_tracked(&out_dir, &rel, &trajectory_csv(s, m), &mut files)?;
    }
    write_tracked(&out_dir, SUMMARY_FILE, &summary_csv(&seeds), &mut files)?;
    write_tracked(&out_dir, AGGREGATE_FILE, &aggregate_csv(&rows), &mut files)?;

    let manifest = Manifest {
        version: VERSION.to_string(),
        config: exp.config.clone(),
        ci_estimator: format!("normal approximation, z = {Z_95}, sample sd with n - 1"),
        thinning: format!(
            "per-seed and aggregate rows at every {}-th round plus the last; regret sums use every round",
            exp.record_every
        ),
        warnings: exp.warnings.clone(),
        files,
    };
    write_manifest(&out_dir, &manifest)?;

    Ok(ExperimentReport {
        output_dir: out_dir,
        manifest,
        aggregate: rows,
        seeds,
    })
}

/// Rebuilds `aggregate.csv` from the per-seed trajectory files listed in the
/// manifest and refreshes its checksum.
pub fn reaggregate(dir: &Path) -> Result<Vec<AggregateRow>> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    let mut manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| Error::format(&manifest_path, e))?;
    let seeds = manifest
        .config
        .seeds
        .list
        .clone()
        .ok_or_else(|| Error::format(&manifest_path, "manifest lacks a resolved seed list"))?;
    let per_seed = seeds
        .iter()
        .map(|seed| read_trajectory_points(&dir.join(format!("{TRAJECTORY_DIR}/seed_{seed}.csv"))))
        .collect::<Result<Vec<_>>>()?;
    let rows = aggregate(&per_seed)?;
    write_tracked(dir, AGGREGATE_FILE, &aggregate_csv(&rows), &mut manifest.files)?;
    write_manifest(dir, &manifest)?;
    Ok(rows)
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut out = String::from(AGGREGATE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

const TRAJECTORY_FIXED_COLUMNS: [&str; 7] = [
    "t",
    "row_action",
    "col_action",
    "reward",
    "cum_signed_regret",
    "cum_abs_regret",
    "divergence",
];

fn trajectory_csv(s: &SeedOutcome, m: usize) -> String {
    let mut out = TRAJECTORY_FIXED_COLUMNS.join(",");
    for side in ["x", "y"] {
        for a in 0..m {
            write!(out, ",{side}{a}").unwrap();
        }
    }
    out.push('\n');
    for r in &s.rounds {
        write!(
            out,
            "{},{},{},{},{},{},{}",
            r.t,
            r.row_action,
            r.col_action,
            fmt_float(r.reward),
            fmt_float(r.signed),
            fmt_float(r.absolute),
            fmt_float(r.divergence)
        )
        .unwrap();
        for p in r.x.iter().chain(&r.y) {
            write!(out, ",{}", fmt_float(*p)).unwrap();
        }
        out.push('\n');
    }
    out
}

fn summary_csv(seeds: &[SeedOutcome]) -> String {
    let mut out = String::from("seed,final_signed_regret,final_abs_regret,final_divergence\n");
    for s in seeds {
        writeln!(
            out,
            "{},{},{},{}",
            s.seed,
            fmt_float(s.final_signed),
            fmt_float(s.final_absolute),
            fmt_float(s.final_divergence)
        )
        .unwrap();
    }
    out
}

fn read_trajectory_points(path: &Path) -> Result<Vec<SeedPoint>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::format(path, "empty file"))?
        .split(',')
        .collect();
    if header.len() < TRAJECTORY_FIXED_COLUMNS.len()
        || header[..TRAJECTORY_FIXED_COLUMNS.len()] != TRAJECTORY_FIXED_COLUMNS
    {
        return Err(Error::format(path, "unexpected trajectory header"));
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != header.len() {
                return Err(Error::format(path, format!("line {} has {} cells", k + 2, cells.len())));
            }
            let num = |c: usize| -> Result<f64> {
                cells[c]
                    .parse()
                    .map_err(|_| Error::format(path, format!("line {}: bad number `{}`", k + 2, cells[c])))
            };
            Ok(SeedPoint {
                t: cells[0]
                    .parse()
                    .map_err(|_| Error::format(path, format!("line {}: bad round", k + 2)))?,
                signed: num(4)?,
                absolute: num(5)?,
                divergence: num(6)?,
            })
        })
        .collect()
}

fn write_tracked(
    dir: &Path,
    rel: &str,
    contents: &str,
    files: &mut BTreeMap<String, String>,
) -> Result<()> {
    let path = dir.join(rel);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    files.insert(rel.to_string(), hex::encode(Sha256::digest(contents.as_bytes())));
    Ok(())
}

fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<()> {
    let path = dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serialises");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
}
