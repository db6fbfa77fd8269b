use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use coebl::game::{build_bignum, build_diagonal, build_rps, PayoffMatrix};
use coebl::runner::{
    reaggregate, run_experiment, theoretical_bound, ExperimentConfig, RunOptions, AGGREGATE_FILE,
};
use coebl::solver::{solve_maximin, solve_minimax_column};
use coebl::Payoff;

#[derive(Parser)]
#[command(name = "coebl", version, about = "Bandit learning in two-player zero-sum matrix games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every seed of an experiment config and write CSVs plus a manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (default: one per core).
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the COEBL regret bound and the plot reference curve.
    Bound {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        horizon: f64,
        #[arg(long)]
        actions: f64,
    },
    /// Solve a game: `rps`, `diagonal:N`, `bignum:N` or a path to a JSON matrix.
    Solve {
        #[arg(long)]
        game: String,
    },
    /// Rebuild aggregate.csv from the trajectories in a run directory.
    Aggregate {
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Run { config, workers, output } => run(&config, workers, output),
        Command::Bound { c, horizon, actions } => bound(c, horizon, actions),
        Command::Solve { game } => solve(&game),
        Command::Aggregate { input } => {
            let rows = reaggregate(&input)
                .with_context(|| format!("re-aggregating {}", input.display()))?;
            println!("wrote {} ({} rows)", input.join(AGGREGATE_FILE).display(), rows.len());
            Ok(())
        }
    }
}

fn run(config: &Path, workers: Option<usize>, output: Option<PathBuf>) -> Result<()> {
    let cfg = ExperimentConfig::load(config)
        .with_context(|| format!("loading {}", config.display()))?;
    let report = run_experiment(&cfg, &RunOptions { workers, output_dir: output })?;
    let last = report.aggregate.last().context("experiment produced no rows")?;
    println!("output: {}", report.output_dir.display());
    println!("seeds: {}", last.n_seeds);
    println!(
        "t={} signed regret {:.4} ± {:.4}, absolute regret {:.4} ± {:.4}, divergence {:.6} ± {:.6}",
        last.t,
        last.signed.mean,
        last.signed.half_width,
        last.absolute.mean,
        last.absolute.half_width,
        last.divergence.mean,
        last.divergence.half_width
    );
    for w in &report.manifest.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

fn bound(c: f64, horizon: f64, actions: f64) -> Result<()> {
    let b = theoretical_bound(c, horizon, actions)?;
    println!("theorem bound: {:.6}", b.theorem);
    println!("reference curve: {:.6}", b.reference);
    if !b.theorem_backed {
        eprintln!("warning: c = {c} < 8, the bound is only proven for c >= 8");
    }
    Ok(())
}

fn parse_game(spec: &str) -> Result<Payoff> {
    let lower = spec.to_ascii_lowercase();
    let sized = |prefix: &str| -> Option<Result<u32>> {
        lower.strip_prefix(prefix).map(|n| {
            n.parse::<u32>()
                .with_context(|| format!("bad size in `{spec}`"))
        })
    };
    if lower == "rps" {
        return Ok(build_rps());
    }
    if let Some(n) = sized("diagonal:") {
        return Ok(build_diagonal(n?)?);
    }
    if let Some(n) = sized("bignum:") {
        return Ok(build_bignum(n?)?);
    }
    let path = Path::new(spec);
    if !path.exists() {
        bail!("unknown game `{spec}`: expected rps, diagonal:N, bignum:N or a JSON file");
    }
    Ok(PayoffMatrix::load_json(path)?)
}

fn fmt_strategy(p: &[f64]) -> String {
    let cells: Vec<String> = p.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", cells.join(", "))
}

fn solve(spec: &str) -> Result<()> {
    let game = parse_game(spec)?;
    let tol = 1e-9;
    let row = solve_maximin(&game, tol)?;
    let col = solve_minimax_column(&game, tol)?;
    println!("game: {} ({}x{})", game.benchmark(), game.m(), game.m());
    println!("value: {:.12}", row.value);
    println!("row strategy: {}", fmt_strategy(row.strategy.probs()));
    println!("column strategy: {}", fmt_strategy(col.strategy.probs()));
    println!("active columns: {:?}", row.active_columns);
    Ok(())
}
