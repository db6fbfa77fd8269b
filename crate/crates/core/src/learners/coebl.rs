use rand::RngCore;

use super::ucb::log_confidence;
use super::{sample, Estimator, Learner, Side};
use crate::error::{Error, Result};
use crate::rng::{normal, StreamRng};
use crate::solver::{fitness, solve_maximin};
use crate::{Payoff, Strategy};

/// Mean of the Gaussian mutation: `sqrt(c ln(2 T^2 m^2) / ((1 v n) + 1))`.
pub fn mutation_mean(c: f64, horizon: usize, m: usize, count: u64) -> f64 {
    (c * log_confidence(horizon, m) / (count.max(1) as f64 + 1.0)).sqrt()
}

/// Perturbs every empirical mean with an independent Gaussian of mean
/// [`mutation_mean`] and standard deviation `1 / (1 v n)`. Entries are drawn
/// in row-major order.
pub fn coebl_mutate(
    estimator: &Estimator,
    c: f64,
    horizon: usize,
    rng: &mut impl RngCore,
) -> Payoff {
    let m = estimator.m();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let n = estimator.count(i, j);
            let sd = 1.0 / n.max(1) as f64;
            row.push(estimator.mean(i, j) + normal(rng, mutation_mean(c, horizon, m, n), sd));
        }
        rows.push(row);
    }
    Payoff::from_rows(rows).expect("mutated estimate is finite")
}

/// What happened in one selection round.
#[derive(Debug, Clone)]
pub struct CoeblStep {
    pub mutated: Payoff,
    pub challenger: Strategy,
    pub challenger_fitness: f64,
    pub incumbent_fitness: f64,
    pub replaced: bool,
}

/// Co-evolutionary bandit learner: Gaussian mutation of the payoff estimate,
/// then elitist selection between the incumbent policy and the mutant's
/// maximin strategy.
#[derive(Debug, Clone)]
pub struct Coebl {
    estimator: Estimator,
    incumbent: Strategy,
    mutation_rate: f64,
    horizon: usize,
    side: Side,
    tol: f64,
}

impl Coebl {
    pub fn new(m: usize, horizon: usize, mutation_rate: f64, side: Side) -> Result<Self> {
        if m == 0 || horizon == 0 {
            return Err(Error::Parameter("COEBL needs m >= 1 and T >= 1".into()));
        }
        if !(mutation_rate > 0.0) || !mutation_rate.is_finite() {
            return Err(Error::Parameter(format!(
                "mutation rate must be positive, got {mutation_rate}"
            )));
        }
        Ok(Self {
            estimator: Estimator::new(m),
            incumbent: Strategy::uniform(m),
            mutation_rate,
            horizon,
            side,
            tol: 1e-9,
        })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn mutation_rate(&self) -> f64 {
        self.mutation_rate
    }

    pub fn estimator(&self) -> &Estimator {
        &self.estimator
    }

    pub fn incumbent(&self) -> &Strategy {
        &self.incumbent
    }

    pub fn mutate(&self, rng: &mut impl RngCore) -> Payoff {
        coebl_mutate(&self.estimator, self.mutation_rate, self.horizon, rng)
    }

    /// Runs one mutation + selection round and updates the incumbent.
    pub fn step(&mut self, rng: &mut impl RngCore) -> Result<CoeblStep> {
        let mutated = self.mutate(rng);
        self.select(mutated)
    }

    /// Selection against a given mutated matrix. Ties keep the incumbent.
    pub fn select(&mut self, mutated: Payoff) -> Result<CoeblStep> {
        let challenger = solve_maximin(&mutated, self.tol)?.strategy;
        let challenger_fitness = fitness(&challenger, &mutated)?;
        let incumbent_fitness = fitness(&self.incumbent, &mutated)?;
        let replaced = challenger_fitness > incumbent_fitness;
        if replaced {
            self.incumbent = challenger.clone();
        }
        Ok(CoeblStep {
            mutated,
            challenger,
            challenger_fitness,
            incumbent_fitness,
            replaced,
        })
    }
}

impl Learner for Coebl {
    fn name(&self) -> &'static str {
        "coebl"
    }

    fn num_actions(&self) -> usize {
        self.estimator.m()
    }

    fn act(&mut self, _t: usize, rng: &mut StreamRng) -> Result<usize> {
        self.step(rng)?;
        Ok(sample(&self.incumbent, rng))
    }

    fn observe(&mut self, _t: usize, own: usize, opponent: usize, reward: f64) -> Result<()> {
        self.estimator.observe(own, opponent, reward)
    }

    fn current_policy(&self) -> &Strategy {
        &self.incumbent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::build_rps;
    use crate::rng::Streams;

    #[test]
    fn mutation_parameters() {
        // frozen: sqrt(8 * 18.903106893196657 / 2)
        assert!((mutation_mean(8.0, 3000, 3, 0) - 8.69554067167687).abs() < 1e-12);
        assert_eq!(mutation_mean(8.0, 3000, 3, 0), mutation_mean(8.0, 3000, 3, 1));
        assert!(mutation_mean(8.0, 3000, 3, 10) < mutation_mean(8.0, 3000, 3, 9));
    }

    #[test]
    fn mutation_moments() {
        let mut est = Estimator::new(1);
        for _ in 0..10 {
            est.observe(0, 0, 0.25).unwrap();
        }
        let (c, horizon) = (8.0, 3000);
        let want_mean = 0.25 + mutation_mean(c, horizon, 1, 10);
        let want_sd = 0.1;
        let n = 100_000;
        let mut rng = Streams::new(11).stream(0, 0);
        let draws: Vec<f64> = (0..n)
            .map(|_| coebl_mutate(&est, c, horizon, &mut rng).get(0, 0))
            .collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let sd = (draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!((mean - want_mean).abs() < 3.0 * want_sd / (n as f64).sqrt(), "mean {mean}");
        assert!((sd / want_sd - 1.0).abs() < 0.02, "sd {sd}");
    }

    #[test]
    fn constant_mutant_keeps_incumbent() {
        let mut l = Coebl::new(3, 100, 2.0, Side::Row).unwrap();
        let flat = Payoff::from_rows(vec![vec![4.0; 3]; 3]).unwrap();
        let step = l.select(flat).unwrap();
        assert!(!step.replaced);
        assert_eq!(step.challenger_fitness, 4.0);
        assert_eq!(step.incumbent_fitness, 4.0);
        assert_eq!(l.incumbent(), &Strategy::uniform(3));
    }

    #[test]
    fn strictly_better_mutant_replaces_uniform() {
        let mut l = Coebl::new(3, 100, 2.0, Side::Row).unwrap();
        // row 0 dominates: its maximin strategy is pure 0 with fitness 1,
        // uniform only guarantees 0
        let mut rows = build_rps::<f64>().rows();
        rows[0] = vec![1.0, 1.0, 1.0];
        let step = l.select(Payoff::from_rows(rows).unwrap()).unwrap();
        assert!(step.replaced);
        assert_eq!(l.incumbent().probs(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_rate() {
        assert!(Coebl::new(3, 10, 0.0, Side::Row).is_err());
        assert!(Coebl::new(3, 10, f64::NAN, Side::Row).is_err());
    }
}
