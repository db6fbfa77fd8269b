use super::{normalize_reward, sample, Learner, TERNARY_RANGE};
use crate::error::{Error, Result};
use crate::rng::StreamRng;
use crate::Strategy;

/// Polynomial decay exponents: `eta_t = t^-k_eta`, `beta_t = t^-k_beta`,
/// `eps_t = t^-k_eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp3IxSchedule {
    pub k_eta: f64,
    pub k_beta: f64,
    pub k_eps: f64,
}

impl Default for Exp3IxSchedule {
    fn default() -> Self {
        Self {
            k_eta: 5.0 / 8.0,
            k_beta: 3.0 / 8.0,
            k_eps: 1.0 / 8.0,
        }
    }
}

impl Exp3IxSchedule {
    /// `(eta_t, beta_t, eps_t)`.
    pub fn at(&self, t: usize) -> (f64, f64, f64) {
        let t = t as f64;
        (t.powf(-self.k_eta), t.powf(-self.k_beta), t.powf(-self.k_eps))
    }
}

/// Implicit-exploration mirror descent with an entropy bonus, projected onto
/// the clipped simplex `{x : x_a >= 1/(m t^2)}`.
#[derive(Debug, Clone)]
pub struct Exp3Ix {
    iterate: Strategy,
    schedule: Exp3IxSchedule,
}

impl Exp3Ix {
    pub fn new(m: usize, schedule: Exp3IxSchedule) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("EXP3-IX needs at least one action".into()));
        }
        Ok(Self {
            iterate: Strategy::uniform(m),
            schedule,
        })
    }

    pub fn with_iterate(iterate: Strategy, schedule: Exp3IxSchedule) -> Self {
        Self { iterate, schedule }
    }

    pub fn iterate(&self) -> &Strategy {
        &self.iterate
    }

    pub fn floor(&self, t: usize) -> f64 {
        1.0 / (self.iterate.len() as f64 * (t as f64).powi(2))
    }

    /// `g_a = 1[a_t = a] sigma / (x_a + beta_t) + eps_t ln x_a`.
    pub fn gradient(&self, t: usize, played: usize, sigma: f64) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&sigma) {
            return Err(Error::Contract(format!("loss {sigma} outside [0, 1]")));
        }
        if played >= self.iterate.len() {
            return Err(Error::Parameter(format!("action {played} out of range")));
        }
        let (_, beta, eps) = self.schedule.at(t);
        self.iterate
            .probs()
            .iter()
            .enumerate()
            .map(|(a, &x)| {
                if x <= 0.0 {
                    return Err(Error::Invariant(format!(
                        "EXP3-IX iterate has non-positive coordinate {a}"
                    )));
                }
                let hit = if a == played { sigma / (x + beta) } else { 0.0 };
                Ok(hit + eps * x.ln())
            })
            .collect()
    }

    /// `x_{t+1} = argmin_{x in Omega_t} <x, g> + KL(x, x_t) / eta_t`.
    pub fn update(&mut self, t: usize, gradient: &[f64]) -> Result<()> {
        let m = self.iterate.len();
        if gradient.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: gradient.len(),
            });
        }
        if gradient.iter().any(|g| !g.is_finite()) {
            return Err(Error::Parameter("non-finite gradient".into()));
        }
        let (eta, _, _) = self.schedule.at(t);
        // mirror step in log space
        let logs: Vec<f64> = self
            .iterate
            .probs()
            .iter()
            .zip(gradient)
            .map(|(x, g)| x.ln() - eta * g)
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let projected = project_kl_floor(&weights, self.floor(t))?;
        self.iterate = Strategy::from_weights(projected)?;
        Ok(())
    }
}

/// KL projection of the normalised weights onto `{x : x_a >= floor, sum x = 1}`.
///
/// The minimiser has the form `x_a = max(floor, lambda * w_a)`; `lambda` is
/// found by repeatedly clamping the coordinates that fall under the floor and
/// rescaling the rest, which stops after at most `m` passes.
pub fn project_kl_floor(weights: &[f64], floor: f64) -> Result<Vec<f64>> {
    let m = weights.len();
    if m == 0 {
        return Err(Error::Parameter("empty weight vector".into()));
    }
    if floor < 0.0 || floor * m as f64 > 1.0 + 1e-15 {
        return Err(Error::Parameter(format!(
            "floor {floor} infeasible for {m} actions"
        )));
    }
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::Parameter("weights must be finite and non-negative".into()));
    }
    let mut clamped = vec![false; m];
    for _ in 0..=m {
        let free_mass: f64 = weights
            .iter()
            .zip(&clamped)
            .filter(|(_, c)| !**c)
            .map(|(w, _)| *w)
            .sum();
        let n_clamped = clamped.iter().filter(|c| **c).count();
        let budget = 1.0 - floor * n_clamped as f64;
        if free_mass <= 0.0 {
            // everything remaining is pinned to the floor
            return Ok((0..m)
                .map(|a| if clamped[a] { floor } else { budget / (m - n_clamped) as f64 })
                .collect());
        }
        let lambda = budget / free_mass;
        let mut changed = false;
        for a in 0..m {
            if !clamped[a] && lambda * weights[a] < floor {
                clamped[a] = true;
                changed = true;
            }
        }
        if !changed {
            return Ok((0..m)
                .map(|a| if clamped[a] { floor } else { lambda * weights[a] })
                .collect());
        }
    }
    Err(Error::Invariant("KL projection did not settle".into()))
}

impl Learner for Exp3Ix {
    fn name(&self) -> &'static str {
        "exp3ix"
    }

    fn num_actions(&self) -> usize {
        self.iterate.len()
    }

    fn act(&mut self, _t: usize, rng: &mut StreamRng) -> Result<usize> {
        Ok(sample(&self.iterate, rng))
    }

    fn observe(&mut self, t: usize, own: usize, _opponent: usize, reward: f64) -> Result<()> {
        let (lo, hi) = TERNARY_RANGE;
        let loss = 1.0 - normalize_reward(reward, lo, hi)?;
        let g = self.gradient(t, own, loss)?;
        self.update(t, &g)
    }

    fn current_policy(&self) -> &Strategy {
        &self.iterate
    }
}
