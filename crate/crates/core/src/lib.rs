//! Bandit learning in two-player zero-sum matrix games.
//!
//! The crate provides the benchmark games (rock-paper-scissors, DIAGONAL,
//! BIGNUM), an exact simplex-based maximin solver, four learners (a
//! co-evolutionary learner with Gaussian mutation and elitist selection,
//! EXP3, an EXP3-IX variant and UCB for matrix games), a seeded simulator for
//! repeated play under noisy bandit feedback, Nash-regret and divergence
//! metrics, and a batch runner writing CSV/JSON artifacts.
//!
//! Game, solver and divergence code is generic over [`Scalar`] (`f64` and
//! `f32`). Learners and the simulator work in `f64`; the aliases below name
//! the concrete types they use.

pub mod error;
pub mod game;
pub mod learners;
pub mod metrics;
pub mod rng;
pub mod runner;
pub mod scalar;
pub mod simulator;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Payoff = game::PayoffMatrix<f64>;
pub type Strategy = game::MixedStrategy<f64>;
pub type Equilibrium = game::EquilibriumInfo<f64>;
pub type Solution = solver::MaximinSolution<f64>;

pub type Payoff32 = game::PayoffMatrix<f32>;
pub type Strategy32 = game::MixedStrategy<f32>;
pub type Equilibrium32 = game::EquilibriumInfo<f32>;
pub type Solution32 = solver::MaximinSolution<f32>;
