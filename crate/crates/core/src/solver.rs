//! Exact maximin solution of a zero-sum matrix game.
//!
//! The row player's problem `max_x min_j sum_i x_i A[i][j]` is solved through
//! its LP dual. After shifting every payoff to at least 1 the dual reads
//!
//! ```text
//! maximise   sum_j w_j
//! subject to sum_j A'[i][j] w_j <= 1   for every row i
//!            w >= 0
//! ```
//!
//! which is in standard form with a feasible slack basis, so a single-phase
//! primal simplex suffices. The row strategy is read off the shadow prices of
//! the slack rows at optimality.

use crate::error::{check_dim, Error, Result};
use crate::game::{MixedStrategy, PayoffMatrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct MaximinSolution<S> {
    pub value: S,
    pub strategy: MixedStrategy<S>,
    /// Columns attaining the inner minimum at `strategy`, ascending.
    pub active_columns: Vec<usize>,
}

/// Guaranteed payoff of `x` against a best-responding column player.
pub fn fitness<S: Scalar>(x: &MixedStrategy<S>, a: &PayoffMatrix<S>) -> Result<S> {
    best_response_column(a, x).map(|(_, v)| v)
}

/// Column minimising `sum_i x_i A[i][j]`; ties go to the lowest index.
pub fn best_response_column<S: Scalar>(
    a: &PayoffMatrix<S>,
    x: &MixedStrategy<S>,
) -> Result<(usize, S)> {
    let payoffs = column_payoffs(a, x)?;
    let mut best = (0, payoffs[0]);
    for (j, v) in payoffs.into_iter().enumerate().skip(1) {
        if v < best.1 {
            best = (j, v);
        }
    }
    Ok(best)
}

/// `sum_i x_i A[i][j]` for every column `j`.
pub fn column_payoffs<S: Scalar>(a: &PayoffMatrix<S>, x: &MixedStrategy<S>) -> Result<Vec<S>> {
    check_dim(a.m(), x.len())?;
    let m = a.m();
    let mut out = vec![S::zero(); m];
    for (i, xi) in x.probs().iter().enumerate() {
        if *xi == S::zero() {
            continue;
        }
        for (o, aij) in out.iter_mut().zip(a.row(i)) {
            *o += *xi * *aij;
        }
    }
    Ok(out)
}

pub fn solve_maximin<S: Scalar>(a: &PayoffMatrix<S>, tol: S) -> Result<MaximinSolution<S>> {
    if !(tol > S::zero()) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let m = a.m();
    let max_abs = a.max_abs();
    let shift = S::one() + max_abs;

    let mut tableau = Tableau::new(m, |i, j| a.get(i, j) + shift);
    tableau.optimise(tol)?;
    let duals = tableau.slack_duals();

    let strategy = MixedStrategy::from_weights(duals).map_err(|e| {
        Error::Invariant(format!("simplex produced an invalid dual vector: {e}"))
    })?;
    let payoffs = column_payoffs(a, &strategy)?;
    let value = payoffs.iter().copied().fold(S::infinity(), S::min);
    let band = tol * (S::one() + max_abs);
    let active_columns = payoffs
        .iter()
        .enumerate()
        .filter(|(_, v)| **v <= value + band)
        .map(|(j, _)| j)
        .collect();
    Ok(MaximinSolution {
        value,
        strategy,
        active_columns,
    })
}

/// Column player's optimal strategy and `min_y max_x`, reported in the row
/// player's sign convention. Solved independently as `solve_maximin(-A^T)`.
pub fn solve_minimax_column<S: Scalar>(
    a: &PayoffMatrix<S>,
    tol: S,
) -> Result<MaximinSolution<S>> {
    let sol = solve_maximin(&a.negated_transpose(), tol)?;
    Ok(MaximinSolution {
        value: -sol.value,
        ..sol
    })
}

/// Dense simplex tableau for `max 1^T w s.t. M w <= 1, w >= 0`.
///
/// Layout: `rows` constraint rows followed by the objective row; columns are
/// the `n` structural variables, then one slack per row, then the right-hand
/// side. The objective row holds reduced costs `z_j - c_j`.
struct Tableau<S> {
    rows: usize,
    n: usize,
    width: usize,
    cells: Vec<S>,
    basis: Vec<usize>,
}

impl<S: Scalar> Tableau<S> {
    fn new(m: usize, coeff: impl Fn(usize, usize) -> S) -> Self {
        let n = m;
        let width = n + m + 1;
        let mut cells = vec![S::zero(); (m + 1) * width];
        for i in 0..m {
            for j in 0..n {
                cells[i * width + j] = coeff(i, j);
            }
            cells[i * width + n + i] = S::one();
            cells[i * width + width - 1] = S::one();
        }
        for j in 0..n {
            cells[m * width + j] = -S::one();
        }
        Self {
            rows: m,
            n,
            width,
            cells,
            basis: (n..n + m).collect(),
        }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> S {
        self.cells[r * self.width + c]
    }

    fn optimise(&mut self, tol: S) -> Result<()> {
        let vars = self.width - 1;
        let cap = 50 * (self.rows + vars) + 100;
        for _ in 0..cap {
            // Bland: lowest-index improving column.
            let Some(enter) = (0..vars).find(|&c| self.at(self.rows, c) < -tol) else {
                return Ok(());
            };
            let mut leave: Option<(usize, S)> = None;
            for r in 0..self.rows {
                let coef = self.at(r, enter);
                if coef <= tol {
                    continue;
                }
                let ratio = self.at(r, vars) / coef;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        let closer = ratio < best_ratio - tol;
                        let tie = (ratio - best_ratio).abs() <= tol;
                        if closer || (tie && self.basis[r] < self.basis[best]) {
                            Some((r, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            // Every coefficient of M is positive, so the LP is bounded.
            let (pivot_row, _) = leave.ok_or_else(|| {
                Error::Invariant(format!("unbounded entering column {enter}"))
            })?;
            self.pivot(pivot_row, enter);
        }
        Err(Error::SolverFailure {
            iterations: cap,
            rows: self.rows,
            cols: vars,
        })
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = S::one() / self.at(pr, pc);
        for c in 0..w {
            self.cells[pr * w + c] *= inv;
        }
        self.cells[pr * w + pc] = S::one();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let factor = self.at(r, pc);
            if factor == S::zero() {
                continue;
            }
            for c in 0..w {
                let delta = factor * self.cells[pr * w + c];
                self.cells[r * w + c] -= delta;
            }
            self.cells[r * w + pc] = S::zero();
        }
        self.basis[pr] = pc;
    }

    /// Shadow prices of the `<= 1` rows, i.e. the scaled row strategy.
    fn slack_duals(&self) -> Vec<S> {
        (0..self.rows)
            .map(|i| self.at(self.rows, self.n + i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_bignum, build_diagonal, build_rps};

    fn strat(p: &[f64]) -> MixedStrategy<f64> {
        MixedStrategy::new(p.to_vec()).unwrap()
    }

    #[test]
    fn fitness_examples() {
        let rps = build_rps::<f64>();
        let third = 1.0 / 3.0;
        assert!(fitness(&strat(&[third, third, third]), &rps).unwrap().abs() < 1e-15);
        assert_eq!(fitness(&strat(&[1.0, 0.0, 0.0]), &rps).unwrap(), -1.0);
        let zero = PayoffMatrix::from_rows(vec![vec![0.0; 2]; 2]).unwrap();
        assert_eq!(fitness(&strat(&[0.3, 0.7]), &zero).unwrap(), 0.0);
        assert!(matches!(
            fitness(&strat(&[0.5, 0.5]), &rps),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn best_response_examples() {
        let rps = build_rps::<f64>();
        assert_eq!(best_response_column(&rps, &strat(&[1.0, 0.0, 0.0])).unwrap(), (2, -1.0));
        let (j, v) = best_response_column(&rps, &MixedStrategy::uniform(3)).unwrap();
        assert_eq!(j, 0);
        assert!(v.abs() < 1e-15);
        let big = build_bignum::<f64>(2).unwrap();
        assert_eq!(
            best_response_column(&big, &MixedStrategy::pure(4, 3)).unwrap(),
            (3, 0.0)
        );
    }

    #[test]
    fn solves_benchmarks() {
        let sol = solve_maximin(&build_rps::<f64>(), 1e-9).unwrap();
        assert!(sol.value.abs() < 1e-12);
        assert!(sol.strategy.max_norm_distance(&MixedStrategy::uniform(3)) < 1e-12);
        assert_eq!(sol.active_columns, vec![0, 1, 2]);

        let sol = solve_maximin(&build_diagonal::<f64>(2).unwrap(), 1e-9).unwrap();
        assert!(sol.value.abs() < 1e-12);
        assert!(sol.strategy.max_norm_distance(&MixedStrategy::pure(4, 3)) < 1e-12);

        let col = solve_minimax_column(&build_diagonal::<f64>(2).unwrap(), 1e-9).unwrap();
        assert!(col.value.abs() < 1e-12);
        assert!(col.strategy.max_norm_distance(&MixedStrategy::pure(4, 3)) < 1e-12);

        let col = solve_minimax_column(&build_rps::<f64>(), 1e-9).unwrap();
        assert!(col.strategy.max_norm_distance(&MixedStrategy::uniform(3)) < 1e-12);
    }

    #[test]
    fn matching_pennies() {
        let a = PayoffMatrix::<f64>::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let sol = solve_maximin(&a, 1e-9).unwrap();
        assert!(sol.value.abs() < 1e-12);
        assert!((sol.strategy.probs()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_matrix_is_solved() {
        let a = PayoffMatrix::from_rows(vec![vec![2.5; 3]; 3]).unwrap();
        let sol = solve_maximin(&a, 1e-9).unwrap();
        assert_eq!(sol.value, 2.5);
        assert_eq!(sol.active_columns, vec![0, 1, 2]);
    }

    #[test]
    fn works_in_single_precision() {
        let sol = solve_maximin(&build_rps::<f32>(), 1e-5).unwrap();
        assert!(sol.value.abs() < 1e-5);
        assert!(sol.strategy.max_norm_distance(&MixedStrategy::uniform(3)) < 1e-5);
        let sol = solve_maximin(&build_bignum::<f32>(3).unwrap(), 1e-5).unwrap();
        assert!(sol.strategy.max_norm_distance(&MixedStrategy::pure(8, 7)) < 1e-5);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(matches!(
            solve_maximin(&build_rps::<f64>(), 0.0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn larger_benchmarks() {
        for n in 1..=6 {
            for g in [build_diagonal::<f64>(n).unwrap(), build_bignum(n).unwrap()] {
                let sol = solve_maximin(&g, 1e-9).unwrap();
                assert!(sol.value.abs() < 1e-9, "{} value {}", g.benchmark(), sol.value);
                assert!(sol.strategy.max_norm_distance(&MixedStrategy::pure(g.m(), g.m() - 1)) < 1e-9);
            }
        }
    }
}
