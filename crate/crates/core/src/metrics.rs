//! Nash regret and distance-to-equilibrium series.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::game::{EquilibriumInfo, MixedStrategy};
use crate::scalar::Scalar;
use crate::simulator::Trajectory;

/// Running sums of `V* - r_t` and `|V* - r_t|`, from the row player's side.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretSeries {
    pub cumulative_signed: Vec<f64>,
    pub cumulative_absolute: Vec<f64>,
}

pub fn regret_series(traj: &Trajectory, v_star: f64) -> RegretSeries {
    regret_from_rewards(traj.rewards(), v_star)
}

pub fn regret_from_rewards(rewards: impl IntoIterator<Item = f64>, v_star: f64) -> RegretSeries {
    let mut signed = 0.0;
    let mut absolute = 0.0;
    let mut out = RegretSeries {
        cumulative_signed: Vec::new(),
        cumulative_absolute: Vec::new(),
    };
    for r in rewards {
        let gap = v_star - r;
        signed += gap;
        absolute += gap.abs();
        out.cumulative_signed.push(signed);
        out.cumulative_absolute.push(absolute);
    }
    out
}

/// `sum_i a_i ln(a_i / b_i)` with `0 ln 0 = 0`; `None` when `a` puts mass
/// where `b` has none.
pub fn kl<S: Scalar>(a: &MixedStrategy<S>, b: &MixedStrategy<S>) -> Result<Option<S>> {
    check_dim(a.len(), b.len())?;
    let mut total = S::zero();
    for (p, q) in a.probs().iter().zip(b.probs()) {
        if *p <= S::zero() {
            continue;
        }
        if *q <= S::zero() {
            return Ok(None);
        }
        total += *p * (*p / *q).ln();
    }
    Ok(Some(total.max(S::zero())))
}

/// Half the L1 distance.
pub fn tv<S: Scalar>(a: &MixedStrategy<S>, b: &MixedStrategy<S>) -> Result<S> {
    check_dim(a.len(), b.len())?;
    let half = S::lit(0.5);
    Ok(a
        .probs()
        .iter()
        .zip(b.probs())
        .map(|(p, q)| (*p - *q).abs())
        .sum::<S>()
        * half)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceMetric {
    KlSum,
    TvSum,
}

impl DivergenceMetric {
    /// KL when the equilibrium has full support, TV otherwise.
    pub fn natural_for<S: Scalar>(eq: &EquilibriumInfo<S>) -> Self {
        if eq.has_full_support() {
            DivergenceMetric::KlSum
        } else {
            DivergenceMetric::TvSum
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceSeries {
    pub metric: DivergenceMetric,
    pub values: Vec<f64>,
}

/// `D(x_t, x*) + D(y_t, y*)` on the post-update snapshots.
pub fn divergence_series(
    traj: &Trajectory,
    eq: &EquilibriumInfo<f64>,
    metric: DivergenceMetric,
) -> Result<DivergenceSeries> {
    if metric == DivergenceMetric::KlSum && !eq.has_full_support() {
        return Err(Error::Parameter(
            "KL to an equilibrium without full support is undefined; use tv_sum".into(),
        ));
    }
    let values = traj
        .rounds
        .iter()
        .map(|r| pair_divergence(&r.x, &r.y, eq, metric))
        .collect::<Result<_>>()?;
    Ok(DivergenceSeries { metric, values })
}

pub fn pair_divergence(
    x: &MixedStrategy<f64>,
    y: &MixedStrategy<f64>,
    eq: &EquilibriumInfo<f64>,
    metric: DivergenceMetric,
) -> Result<f64> {
    match metric {
        DivergenceMetric::TvSum => Ok(tv(x, &eq.x_star)? + tv(y, &eq.y_star)?),
        DivergenceMetric::KlSum => {
            let dx = kl(x, &eq.x_star)?;
            let dy = kl(y, &eq.y_star)?;
            match (dx, dy) {
                (Some(a), Some(b)) => Ok(a + b),
                _ => Err(Error::Invariant("KL undefined on a full-support equilibrium".into())),
            }
        }
    }
}
