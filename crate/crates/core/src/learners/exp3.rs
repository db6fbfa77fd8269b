use super::{normalize_reward, sample, Learner, TERNARY_RANGE};
use crate::error::{Error, Result};
use crate::rng::StreamRng;
use crate::Strategy;

/// Exploration rate `gamma_t = min(sqrt(K ln K / t), 1)` and learning rate
/// `eta_t = sqrt(2 ln K / (t K))`.
pub fn exp3_rates(k: usize, t: usize) -> (f64, f64) {
    let k = k as f64;
    let t = t as f64;
    let gamma = (k * k.ln() / t).sqrt().min(1.0);
    let eta = (2.0 * k.ln() / (t * k)).sqrt();
    (gamma, eta)
}

/// EXP3 with importance-weighted cumulative scores.
#[derive(Debug, Clone)]
pub struct Exp3 {
    scores: Vec<f64>,
    /// Distribution for the round about to be played.
    policy: Strategy,
    next_round: usize,
}

impl Exp3 {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("EXP3 needs at least one action".into()));
        }
        let scores = vec![0.0; k];
        let policy = exp3_distribution(&scores, 1);
        Ok(Self {
            scores,
            policy,
            next_round: 1,
        })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn with_scores(scores: Vec<f64>, t: usize) -> Result<Self> {
        if scores.is_empty() || t == 0 {
            return Err(Error::Parameter("EXP3 needs actions and t >= 1".into()));
        }
        let policy = exp3_distribution(&scores, t);
        Ok(Self {
            scores,
            policy,
            next_round: t,
        })
    }

    /// Sampling distribution for round `t >= 1`.
    pub fn policy(&self, t: usize) -> Strategy {
        exp3_distribution(&self.scores, t)
    }

    /// Applies the round-`t` update for played action `i` and reward
    /// `x` in `[0, 1]`.
    pub fn update(&mut self, t: usize, i: usize, x: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Contract(format!(
                "EXP3 reward {x} outside [0, 1]; normalise upstream"
            )));
        }
        if i >= self.scores.len() {
            return Err(Error::Parameter(format!("action {i} out of range")));
        }
        let p_i = self.policy(t).probs()[i];
        for s in self.scores.iter_mut() {
            *s += 1.0;
        }
        self.scores[i] -= (1.0 - x) / p_i;
        self.next_round = t + 1;
        self.policy = self.policy(self.next_round);
        Ok(())
    }
}

fn exp3_distribution(scores: &[f64], t: usize) -> Strategy {
    let k = scores.len();
    let (gamma, eta) = exp3_rates(k, t);
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|s| (eta * (s - top)).exp()).collect();
    let total: f64 = weights.iter().sum();
    let floor = gamma / k as f64;
    let probs = weights
        .into_iter()
        .map(|w| (1.0 - gamma) * w / total + floor)
        .collect();
    Strategy::from_weights(probs).expect("softmax mixture is a distribution")
}

impl Learner for Exp3 {
    fn name(&self) -> &'static str {
        "exp3"
    }

    fn num_actions(&self) -> usize {
        self.scores.len()
    }

    fn act(&mut self, t: usize, rng: &mut StreamRng) -> Result<usize> {
        if t != self.next_round {
            self.policy = self.policy(t);
            self.next_round = t;
        }
        Ok(sample(&self.policy, rng))
    }

    fn observe(&mut self, t: usize, own: usize, _opponent: usize, reward: f64) -> Result<()> {
        let (lo, hi) = TERNARY_RANGE;
        self.update(t, own, normalize_reward(reward, lo, hi)?)
    }

    fn current_policy(&self) -> &Strategy {
        &self.policy
    }
}
