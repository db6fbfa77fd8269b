use super::{sample, Estimator, Learner, Side};
use crate::error::{Error, Result};
use crate::rng::StreamRng;
use crate::solver::solve_maximin;
use crate::{Payoff, Strategy};

/// `ln(2 T^2 m^2)`, the confidence term shared by UCB and COEBL.
pub fn log_confidence(horizon: usize, m: usize) -> f64 {
    let t = horizon as f64;
    let m = m as f64;
    (2.0 * t * t * m * m).ln()
}

/// `sqrt(2 ln(2 T^2 m^2) / (1 v n))`.
pub fn ucb_bonus(horizon: usize, m: usize, count: u64) -> f64 {
    (2.0 * log_confidence(horizon, m) / count.max(1) as f64).sqrt()
}

/// Optimistic maximin play on `mean + bonus`, recomputed every round.
#[derive(Debug, Clone)]
pub struct Ucb {
    estimator: Estimator,
    horizon: usize,
    side: Side,
    policy: Strategy,
    tol: f64,
}

impl Ucb {
    pub fn new(m: usize, horizon: usize, side: Side) -> Result<Self> {
        if m == 0 || horizon == 0 {
            return Err(Error::Parameter("UCB needs m >= 1 and T >= 1".into()));
        }
        Ok(Self {
            estimator: Estimator::new(m),
            horizon,
            side,
            policy: Strategy::uniform(m),
            tol: 1e-9,
        })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn estimator(&self) -> &Estimator {
        &self.estimator
    }

    pub fn optimistic_matrix(&self) -> Payoff {
        let m = self.estimator.m();
        Payoff::from_fn(m, |i, j| {
            self.estimator.mean(i, j) + ucb_bonus(self.horizon, m, self.estimator.count(i, j))
        })
        .expect("optimistic estimate is finite")
    }

    /// Maximin policy of the optimistic matrix; becomes the current policy.
    pub fn step(&mut self) -> Result<&Strategy> {
        let sol = solve_maximin(&self.optimistic_matrix(), self.tol)?;
        self.policy = sol.strategy;
        Ok(&self.policy)
    }
}

impl Learner for Ucb {
    fn name(&self) -> &'static str {
        "ucb"
    }

    fn num_actions(&self) -> usize {
        self.estimator.m()
    }

    fn act(&mut self, _t: usize, rng: &mut StreamRng) -> Result<usize> {
        self.step()?;
        Ok(sample(&self.policy, rng))
    }

    fn observe(&mut self, _t: usize, own: usize, opponent: usize, reward: f64) -> Result<()> {
        self.estimator.observe(own, opponent, reward)
    }

    fn current_policy(&self) -> &Strategy {
        &self.policy
    }
}
