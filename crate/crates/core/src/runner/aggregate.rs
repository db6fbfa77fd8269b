use crate::error::{Error, Result};

/// Normal-approximation 95% interval multiplier.
pub const Z_95: f64 = 1.96;

/// Exact header of the aggregate CSV.
pub const AGGREGATE_HEADER: &str =
    "t,mean_signed_regret,ci_signed,mean_abs_regret,ci_abs,mean_divergence,ci_divergence,n_seeds";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCi {
    pub mean: f64,
    /// `1.96 * sd / sqrt(n)` with the `n - 1` sample deviation; 0 for `n < 2`.
    pub half_width: f64,
}

pub fn mean_ci(values: &[f64]) -> MeanCi {
    let n = values.len();
    if n == 0 {
        return MeanCi {
            mean: f64::NAN,
            half_width: 0.0,
        };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return MeanCi {
            mean,
            half_width: 0.0,
        };
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    MeanCi {
        mean,
        half_width: Z_95 * var.sqrt() / (n as f64).sqrt(),
    }
}

/// Index-wise mean and interval over equally long series.
pub fn aggregate_series(series: &[&[f64]]) -> Result<Vec<MeanCi>> {
    let Some(first) = series.first() else {
        return Ok(Vec::new());
    };
    let len = first.len();
    if let Some(bad) = series.iter().find(|s| s.len() != len) {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: bad.len(),
        });
    }
    let mut column = vec![0.0; series.len()];
    Ok((0..len)
        .map(|k| {
            for (slot, s) in column.iter_mut().zip(series) {
                *slot = s[k];
            }
            mean_ci(&column)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateRow {
    pub t: usize,
    pub signed: MeanCi,
    pub absolute: MeanCi,
    pub divergence: MeanCi,
    pub n_seeds: usize,
}

impl AggregateRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.t,
            fmt_float(self.signed.mean),
            fmt_float(self.signed.half_width),
            fmt_float(self.absolute.mean),
            fmt_float(self.absolute.half_width),
            fmt_float(self.divergence.mean),
            fmt_float(self.divergence.half_width),
            self.n_seeds
        )
    }
}

/// Per-seed values at one recorded round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedPoint {
    pub t: usize,
    pub signed: f64,
    pub absolute: f64,
    pub divergence: f64,
}

/// Aggregates per-seed point series recorded at the same rounds.
pub fn aggregate(per_seed: &[Vec<SeedPoint>]) -> Result<Vec<AggregateRow>> {
    let Some(first) = per_seed.first() else {
        return Ok(Vec::new());
    };
    for s in per_seed {
        if s.len() != first.len() || s.iter().zip(first).any(|(a, b)| a.t != b.t) {
            return Err(Error::Parameter(
                "per-seed series are recorded at different rounds".into(),
            ));
        }
    }
    let pick = |f: fn(&SeedPoint) -> f64| -> Vec<Vec<f64>> {
        per_seed.iter().map(|s| s.iter().map(f).collect()).collect()
    };
    let signed = pick(|p| p.signed);
    let absolute = pick(|p| p.absolute);
    let divergence = pick(|p| p.divergence);
    let signed = aggregate_series(&as_slices(&signed))?;
    let absolute = aggregate_series(&as_slices(&absolute))?;
    let divergence = aggregate_series(&as_slices(&divergence))?;
    Ok(first
        .iter()
        .enumerate()
        .map(|(k, p)| AggregateRow {
            t: p.t,
            signed: signed[k],
            absolute: absolute[k],
            divergence: divergence[k],
            n_seeds: per_seed.len(),
        })
        .collect())
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rounds written to thinned outputs: every `stride`-th round plus the last.
pub fn recorded_rounds(horizon: usize, stride: usize) -> Vec<usize> {
    let mut ts: Vec<usize> = (1..=horizon / stride).map(|k| k * stride).collect();
    if horizon % stride != 0 {
        ts.push(horizon);
    }
    ts
}

fn as_slices(v: &[Vec<f64>]) -> Vec<&[f64]> {
    v.iter().map(|s| s.as_slice()).collect()
}
