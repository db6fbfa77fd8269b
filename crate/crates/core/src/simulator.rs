//! Repeated play of a matrix game between two learners under noisy bandit
//! feedback.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::game::Benchmark;
use crate::learners::Learner;
use crate::rng::{standard_normal, Streams, COL_STREAM, NOISE_STREAM, ROW_STREAM};
use crate::{Payoff, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    /// Independent `N(0, 1)` per round.
    GaussianUnit,
    None,
}

pub fn sample_noise(model: NoiseModel, rng: &mut impl RngCore) -> f64 {
    match model {
        NoiseModel::GaussianUnit => standard_normal(rng),
        NoiseModel::None => 0.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub t: usize,
    pub row_action: usize,
    pub col_action: usize,
    /// Reward to the row player, noise included.
    pub reward: f64,
    /// Policies after the round's update.
    pub x: Strategy,
    pub y: Strategy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub game: Benchmark,
    pub seed: u64,
    pub row_learner: &'static str,
    pub col_learner: &'static str,
    pub rounds: Vec<RoundRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn rewards(&self) -> impl Iterator<Item = f64> + '_ {
        self.rounds.iter().map(|r| r.reward)
    }
}

/// Plays `horizon` rounds. Both learners commit to an action before either
/// sees feedback; the row learner observes `(i, j, r)` and the column learner
/// `(j, i, -r)`.
pub fn run_episode(
    game: &Payoff,
    row: &mut dyn Learner,
    col: &mut dyn Learner,
    horizon: usize,
    noise: NoiseModel,
    seed: u64,
) -> Result<Trajectory> {
    if horizon == 0 {
        return Err(Error::Parameter("horizon must be at least 1".into()));
    }
    let m = game.m();
    check_dim(m, row.num_actions())?;
    check_dim(m, col.num_actions())?;

    let streams = Streams::new(seed);
    let mut rounds = Vec::with_capacity(horizon);
    for t in 1..=horizon {
        let round = t as u64;
        let i = row.act(t, &mut streams.stream(round, ROW_STREAM))?;
        let j = col.act(t, &mut streams.stream(round, COL_STREAM))?;
        if i >= m || j >= m {
            return Err(Error::Invariant(format!(
                "learner emitted action ({i}, {j}) outside {m} actions"
            )));
        }
        let reward = game.get(i, j) + sample_noise(noise, &mut streams.stream(round, NOISE_STREAM));
        row.observe(t, i, j, reward)?;
        col.observe(t, j, i, -reward)?;
        rounds.push(RoundRecord {
            t,
            row_action: i,
            col_action: j,
            reward,
            x: row.current_policy().clone(),
            y: col.current_policy().clone(),
        });
    }
    Ok(Trajectory {
        game: game.benchmark(),
        seed,
        row_learner: row.name(),
        col_learner: col.name(),
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_bignum, build_rps};
    use crate::learners::{Coebl, FixedPolicy, Side};

    #[test]
    fn pure_equilibrium_without_noise_pays_value() {
        let game = build_bignum::<f64>(2).unwrap();
        let mut row = FixedPolicy::new(Strategy::pure(4, 3));
        let mut col = FixedPolicy::new(Strategy::pure(4, 3));
        let traj = run_episode(&game, &mut row, &mut col, 50, NoiseModel::None, 3).unwrap();
        assert_eq!(traj.len(), 50);
        assert!(traj.rewards().all(|r| r == 0.0));
    }

    #[test]
    fn reproducible_from_seed() {
        let game = build_rps::<f64>();
        let play = |seed| {
            let mut row = Coebl::new(3, 200, 2.0, Side::Row).unwrap();
            let mut col = Coebl::new(3, 200, 2.0, Side::Column).unwrap();
            run_episode(&game, &mut row, &mut col, 200, NoiseModel::GaussianUnit, seed).unwrap()
        };
        assert_eq!(play(7), play(7));
        assert_ne!(play(7), play(8));
    }

    #[test]
    fn dimension_mismatch() {
        let game = build_rps::<f64>();
        let mut row = FixedPolicy::new(Strategy::uniform(4));
        let mut col = FixedPolicy::new(Strategy::uniform(3));
        assert!(matches!(
            run_episode(&game, &mut row, &mut col, 5, NoiseModel::None, 0),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut row = FixedPolicy::new(Strategy::uniform(3));
        assert!(run_episode(&game, &mut row, &mut col, 0, NoiseModel::None, 0).is_err());
    }

    #[test]
    fn noise_none_is_zero() {
        let mut rng = Streams::new(0).stream(0, 0);
        assert_eq!(sample_noise(NoiseModel::None, &mut rng), 0.0);
    }
}
