use crate::error::{Error, Result};

/// Per-entry empirical means and visit counts of observed rewards.
///
/// Entries never observed keep the mean 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimator {
    m: usize,
    means: Vec<f64>,
    counts: Vec<u64>,
}

impl Estimator {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            means: vec![0.0; m * m],
            counts: vec![0; m * m],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn observe(&mut self, i: usize, j: usize, reward: f64) -> Result<()> {
        if i >= self.m || j >= self.m {
            return Err(Error::Parameter(format!(
                "entry ({i}, {j}) outside a {0}x{0} game",
                self.m
            )));
        }
        if !reward.is_finite() {
            return Err(Error::Parameter(format!("non-finite reward {reward}")));
        }
        let k = i * self.m + j;
        self.counts[k] += 1;
        self.means[k] += (reward - self.means[k]) / self.counts[k] as f64;
        Ok(())
    }

    #[inline]
    pub fn mean(&self, i: usize, j: usize) -> f64 {
        self.means[i * self.m + j]
    }

    #[inline]
    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.m + j]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracks_mean_and_count() {
        let mut e = Estimator::new(2);
        e.observe(0, 1, 1.0).unwrap();
        e.observe(0, 1, 0.0).unwrap();
        e.observe(0, 1, 2.0).unwrap();
        assert_eq!(e.count(0, 1), 3);
        assert!((e.mean(0, 1) - 1.0).abs() < 1e-15);
        assert_eq!(e.mean(1, 0), 0.0);
        assert_eq!(e.total(), 3);
        assert!(e.observe(2, 0, 0.0).is_err());
        assert!(e.observe(0, 0, f64::NAN).is_err());
    }
}
