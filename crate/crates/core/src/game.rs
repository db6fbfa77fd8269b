//! Payoff matrices, mixed strategies and the benchmark games.
//!
//! Index convention: `entries[i][j]` is the payoff to the row player when the
//! row player picks `i` and the column player picks `j`. The value of a
//! strategy pair `(x, y)` is `sum_{i,j} x_i * y_j * entries[i][j]`; the row
//! player maximises it and the column player minimises it.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;

/// Largest `n` accepted by the bitstring benchmarks (`m = 2^n`).
pub const MAX_BITS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "benchmark", content = "n")]
pub enum Benchmark {
    Rps,
    Diagonal(u32),
    Bignum(u32),
    Custom,
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Benchmark::Rps => write!(f, "rps"),
            Benchmark::Diagonal(n) => write!(f, "diagonal({n})"),
            Benchmark::Bignum(n) => write!(f, "bignum({n})"),
            Benchmark::Custom => write!(f, "custom"),
        }
    }
}

/// A point on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy<S> {
    probs: Vec<S>,
}

impl<S: Scalar> MixedStrategy<S> {
    /// Accepts a probability vector whose coordinates are non-negative up to
    /// round-off and which sums to one within the scalar's simplex slack.
    pub fn new(probs: Vec<S>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Parameter("empty probability vector".into()));
        }
        let slack = S::simplex_slack();
        if probs.iter().any(|p| !p.is_finite() || *p < -slack) {
            return Err(Error::Parameter(format!(
                "probabilities must be finite and non-negative: {probs:?}"
            )));
        }
        let total: S = probs.iter().copied().sum();
        if (total - S::one()).abs() > slack * S::lit(probs.len() as f64) {
            return Err(Error::Parameter(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Self::from_weights(probs)
    }

    /// Normalises non-negative weights. Negative round-off is clamped to zero
    /// before rescaling.
    pub fn from_weights(mut weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Parameter("empty weight vector".into()));
        }
        for w in weights.iter_mut() {
            if !w.is_finite() {
                return Err(Error::Parameter(format!("non-finite weight {w}")));
            }
            if *w < S::zero() {
                *w = S::zero();
            }
        }
        let total: S = weights.iter().copied().sum();
        if total <= S::zero() {
            return Err(Error::Parameter("weights sum to zero".into()));
        }
        for w in weights.iter_mut() {
            *w /= total;
        }
        Ok(Self { probs: weights })
    }

    pub fn uniform(m: usize) -> Self {
        assert!(m > 0, "uniform strategy over zero actions");
        let p = S::one() / S::lit(m as f64);
        Self { probs: vec![p; m] }
    }

    pub fn pure(m: usize, action: usize) -> Self {
        assert!(action < m, "action {action} out of range for {m} actions");
        let mut probs = vec![S::zero(); m];
        probs[action] = S::one();
        Self { probs }
    }

    pub fn probs(&self) -> &[S] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn min_prob(&self) -> S {
        self.probs.iter().copied().fold(S::infinity(), S::min)
    }

    /// Inverse-CDF draw for `u` in `[0, 1)`. Zero-probability actions are
    /// never returned.
    pub fn sample_with(&self, u: S) -> usize {
        let mut acc = S::zero();
        let mut last = 0;
        for (k, p) in self.probs.iter().enumerate() {
            if *p <= S::zero() {
                continue;
            }
            acc += *p;
            last = k;
            if u < acc {
                return k;
            }
        }
        last
    }

    pub fn max_norm_distance(&self, other: &Self) -> S {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (*a - *b).abs())
            .fold(S::zero(), S::max)
    }

    pub fn cast<T: Scalar>(&self) -> MixedStrategy<T> {
        MixedStrategy {
            probs: self
                .probs
                .iter()
                .map(|p| T::lit(p.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }
}

/// Square payoff table for the row player.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix<S> {
    m: usize,
    entries: Vec<S>,
    benchmark: Benchmark,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    m: usize,
    entries: Vec<Vec<f64>>,
}

impl<S: Scalar> PayoffMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        Self::tagged(rows, Benchmark::Custom)
    }

    fn tagged(rows: Vec<Vec<S>>, benchmark: Benchmark) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::Parameter("payoff matrix has no rows".into()));
        }
        let mut entries = Vec::with_capacity(m * m);
        for row in rows {
            check_dim(m, row.len())?;
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parameter("payoff entries must be finite".into()));
            }
            entries.extend(row);
        }
        Ok(Self {
            m,
            entries,
            benchmark,
        })
    }

    /// Builds an `m x m` matrix from a row-major entry function.
    pub fn from_fn(m: usize, f: impl Fn(usize, usize) -> S) -> Result<Self> {
        let rows = (0..m).map(|i| (0..m).map(|j| f(i, j)).collect()).collect();
        Self::from_rows(rows)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn benchmark(&self) -> Benchmark {
        self.benchmark
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.entries[i * self.m + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.entries.chunks(self.m).map(|r| r.to_vec()).collect()
    }

    pub fn max_abs(&self) -> S {
        self.entries
            .iter()
            .fold(S::zero(), |acc, v| acc.max(v.abs()))
    }

    /// `-A^T`: the payoff matrix seen by the column player acting as a
    /// maximiser over its own actions.
    pub fn negated_transpose(&self) -> Self {
        let m = self.m;
        let mut entries = vec![S::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                entries[j * m + i] = -self.get(i, j);
            }
        }
        Self {
            m,
            entries,
            benchmark: Benchmark::Custom,
        }
    }

    /// Entry-wise affine map `scale * a + shift`; the result is a custom game.
    pub fn affine(&self, scale: S, shift: S) -> Self {
        Self {
            m: self.m,
            entries: self.entries.iter().map(|v| scale * *v + shift).collect(),
            benchmark: Benchmark::Custom,
        }
    }

    /// `sum_{i,j} x_i y_j A[i][j]`.
    pub fn value_of(&self, x: &MixedStrategy<S>, y: &MixedStrategy<S>) -> Result<S> {
        check_dim(self.m, x.len())?;
        check_dim(self.m, y.len())?;
        let mut total = S::zero();
        for (i, xi) in x.probs().iter().enumerate() {
            for (j, yj) in y.probs().iter().enumerate() {
                total += *xi * *yj * self.get(i, j);
            }
        }
        Ok(total)
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.m).all(|i| (0..self.m).all(|j| self.get(i, j) + self.get(j, i) == S::zero()))
    }

    pub fn cast<T: Scalar>(&self) -> PayoffMatrix<T> {
        PayoffMatrix {
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|v| T::lit(v.to_f64().unwrap_or(f64::NAN)))
                .collect(),
            benchmark: self.benchmark,
        }
    }

    /// Parses `{"m": int, "entries": [[...], ...]}`.
    pub fn from_json_str(text: &str) -> std::result::Result<Self, String> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if file.entries.len() != file.m {
            return Err(format!(
                "declared m = {} but found {} rows",
                file.m,
                file.entries.len()
            ));
        }
        let rows = file
            .entries
            .into_iter()
            .map(|r| r.into_iter().map(S::lit).collect())
            .collect();
        Self::from_rows(rows).map_err(|e| e.to_string())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text).map_err(|e| Error::format(path, e))
    }

    pub fn to_json_string(&self) -> String {
        let file = MatrixFile {
            m: self.m,
            entries: self
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
                .collect(),
        };
        serde_json::to_string(&file).expect("matrix serialises")
    }
}

/// Equilibrium pair and game value.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumInfo<S> {
    pub x_star: MixedStrategy<S>,
    pub y_star: MixedStrategy<S>,
    pub value: S,
}

impl<S: Scalar> EquilibriumInfo<S> {
    pub fn has_full_support(&self) -> bool {
        self.x_star
            .probs()
            .iter()
            .chain(self.y_star.probs())
            .all(|p| *p > S::zero())
    }
}

fn sign<S: Scalar>(ord: std::cmp::Ordering) -> S {
    match ord {
        std::cmp::Ordering::Greater => S::one(),
        std::cmp::Ordering::Equal => S::zero(),
        std::cmp::Ordering::Less => -S::one(),
    }
}

fn check_bits(n: u32) -> Result<usize> {
    if (1..=MAX_BITS).contains(&n) {
        Ok(1usize << n)
    } else {
        Err(Error::Parameter(format!(
            "bitstring length n = {n} outside 1..={MAX_BITS}"
        )))
    }
}

/// Rock-paper-scissors with actions ordered (R, P, S).
pub fn build_rps<S: Scalar>() -> PayoffMatrix<S> {
    let rows = [[0.0, 1.0, -1.0], [-1.0, 0.0, 1.0], [1.0, -1.0, 0.0]]
        .iter()
        .map(|r| r.iter().map(|v| S::lit(*v)).collect())
        .collect();
    PayoffMatrix::tagged(rows, Benchmark::Rps).expect("rps is well formed")
}

/// Action `k` is the n-bit string with binary value `k`. The row player wins
/// when its string has strictly more one-bits.
pub fn build_diagonal<S: Scalar>(n: u32) -> Result<PayoffMatrix<S>> {
    let m = check_bits(n)?;
    let rows = (0..m)
        .map(|u| {
            (0..m)
                .map(|v| sign((u.count_ones()).cmp(&v.count_ones())))
                .collect()
        })
        .collect();
    PayoffMatrix::tagged(rows, Benchmark::Diagonal(n))
}

/// Action `k` is the integer `k`; the larger number wins.
pub fn build_bignum<S: Scalar>(n: u32) -> Result<PayoffMatrix<S>> {
    let m = check_bits(n)?;
    let rows = (0..m)
        .map(|x| (0..m).map(|y| sign(x.cmp(&y))).collect())
        .collect();
    PayoffMatrix::tagged(rows, Benchmark::Bignum(n))
}

pub fn build_benchmark<S: Scalar>(benchmark: Benchmark) -> Result<PayoffMatrix<S>> {
    match benchmark {
        Benchmark::Rps => Ok(build_rps()),
        Benchmark::Diagonal(n) => build_diagonal(n),
        Benchmark::Bignum(n) => build_bignum(n),
        Benchmark::Custom => Err(Error::UnsupportedBenchmark("custom".into())),
    }
}

pub fn known_equilibrium<S: Scalar>(game: &PayoffMatrix<S>) -> Result<EquilibriumInfo<S>> {
    match game.benchmark() {
        Benchmark::Rps => Ok(EquilibriumInfo {
            x_star: MixedStrategy::uniform(3),
            y_star: MixedStrategy::uniform(3),
            value: S::zero(),
        }),
        Benchmark::Diagonal(_) | Benchmark::Bignum(_) => {
            let m = game.m();
            Ok(EquilibriumInfo {
                x_star: MixedStrategy::pure(m, m - 1),
                y_star: MixedStrategy::pure(m, m - 1),
                value: S::zero(),
            })
        }
        Benchmark::Custom => Err(Error::UnsupportedBenchmark(game.benchmark().to_string())),
    }
}
