//! Bandit-feedback learners for repeated matrix games.
//!
//! Every learner is written from the row (maximiser) point of view. The column
//! player runs the same code on the negated transpose: it is fed its own
//! action first, the opponent's second, and the negated reward.

mod coebl;
mod estimator;
mod exp3;
mod exp3ix;
mod ucb;

use serde::{Deserialize, Serialize};

pub use coebl::{coebl_mutate, mutation_mean, Coebl, CoeblStep};
pub use estimator::Estimator;
pub use exp3::{exp3_rates, Exp3};
pub use exp3ix::{project_kl_floor, Exp3Ix, Exp3IxSchedule};
pub use ucb::{log_confidence, ucb_bonus, Ucb};

use crate::error::{Error, Result};
use crate::rng::{uniform, StreamRng};
use crate::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Row,
    Column,
}

/// Common interface driven by the simulator.
pub trait Learner: Send {
    fn name(&self) -> &'static str;

    fn num_actions(&self) -> usize;

    /// Chooses the round-`t` action (`t` starts at 1).
    fn act(&mut self, t: usize, rng: &mut StreamRng) -> Result<usize>;

    /// Feeds back the learner's own action, the opponent's action and the
    /// reward from this learner's point of view.
    fn observe(&mut self, t: usize, own: usize, opponent: usize, reward: f64) -> Result<()>;

    /// Distribution the learner currently plays.
    fn current_policy(&self) -> &Strategy;
}

/// Affine map of `r` from `[lo, hi]` onto `[0, 1]`, clamped.
pub fn normalize_reward(r: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::Parameter(format!("reward range [{lo}, {hi}] is empty")));
    }
    Ok(((r - lo) / (hi - lo)).clamp(0.0, 1.0))
}

/// Payoff range of the ternary benchmarks.
pub const TERNARY_RANGE: (f64, f64) = (-1.0, 1.0);

pub(crate) fn sample(policy: &Strategy, rng: &mut StreamRng) -> usize {
    policy.sample_with(uniform(rng))
}

/// Plays a fixed mixed strategy and ignores feedback.
#[derive(Debug, Clone)]
pub struct FixedPolicy {
    policy: Strategy,
}

impl FixedPolicy {
    pub fn new(policy: Strategy) -> Self {
        Self { policy }
    }
}

impl Learner for FixedPolicy {
    fn name(&self) -> &'static str {
        "fixed"
    }

    fn num_actions(&self) -> usize {
        self.policy.len()
    }

    fn act(&mut self, _t: usize, rng: &mut StreamRng) -> Result<usize> {
        Ok(sample(&self.policy, rng))
    }

    fn observe(&mut self, _t: usize, _own: usize, _opponent: usize, _reward: f64) -> Result<()> {
        Ok(())
    }

    fn current_policy(&self) -> &Strategy {
        &self.policy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exp3,
    #[serde(rename = "exp3ix")]
    Exp3Ix,
    Ucb,
    Coebl,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Exp3 => "exp3",
            Algorithm::Exp3Ix => "exp3ix",
            Algorithm::Ucb => "ucb",
            Algorithm::Coebl => "coebl",
        }
    }
}

/// Builds a boxed learner. `mutation_rate` is required for COEBL and ignored
/// otherwise.
pub fn build_learner(
    algo: Algorithm,
    m: usize,
    horizon: usize,
    side: Side,
    mutation_rate: Option<f64>,
) -> Result<Box<dyn Learner>> {
    Ok(match algo {
        Algorithm::Exp3 => Box::new(Exp3::new(m)?),
        Algorithm::Exp3Ix => Box::new(Exp3Ix::new(m, Exp3IxSchedule::default())?),
        Algorithm::Ucb => Box::new(Ucb::new(m, horizon, side)?),
        Algorithm::Coebl => {
            let c = mutation_rate
                .ok_or_else(|| Error::Parameter("COEBL needs a mutation rate".into()))?;
            Box::new(Coebl::new(m, horizon, c, side)?)
        }
    })
}
