use std::sync::{Arc, Mutex};

use coebl::game::{build_diagonal, build_rps};
use coebl::learners::{build_learner, Algorithm, Coebl, Learner, Side, Ucb};
use coebl::rng::{StreamRng, Streams};
use coebl::simulator::{run_episode, NoiseModel};
use coebl::solver::solve_maximin;
use coebl::{Result, Strategy};

#[derive(Debug, Clone, PartialEq)]
enum Event {
    Act(usize),
    Observe { t: usize, own: usize, opponent: usize, reward: f64 },
}

/// Uniform player that logs every call the simulator makes into it.
struct Probe {
    policy: Strategy,
    log: Arc<Mutex<Vec<Event>>>,
}

impl Learner for Probe {
    fn name(&self) -> &'static str {
        "probe"
    }
    fn num_actions(&self) -> usize {
        self.policy.len()
    }
    fn act(&mut self, t: usize, rng: &mut StreamRng) -> Result<usize> {
        self.log.lock().unwrap().push(Event::Act(t));
        Ok(self.policy.sample_with(coebl::rng::uniform(rng)))
    }
    fn observe(&mut self, t: usize, own: usize, opponent: usize, reward: f64) -> Result<()> {
        self.log.lock().unwrap().push(Event::Observe { t, own, opponent, reward });
        Ok(())
    }
    fn current_policy(&self) -> &Strategy {
        &self.policy
    }
}

#[test]
fn players_only_see_their_own_bandit_feedback() {
    let game = build_diagonal::<f64>(2).unwrap();
    let row_log = Arc::new(Mutex::new(Vec::new()));
    let col_log = Arc::new(Mutex::new(Vec::new()));
    let mut row = Probe { policy: Strategy::uniform(4), log: row_log.clone() };
    let mut col = Probe { policy: Strategy::uniform(4), log: col_log.clone() };
    let traj = run_episode(&game, &mut row, &mut col, 200, NoiseModel::GaussianUnit, 4).unwrap();

    let row_log = row_log.lock().unwrap();
    let col_log = col_log.lock().unwrap();
    assert_eq!(row_log.len(), 400);
    assert_eq!(col_log.len(), 400);
    for (k, rec) in traj.rounds.iter().enumerate() {
        let t = k + 1;
        assert_eq!(rec.t, t);
        // one act strictly before one observe, per round
        assert_eq!(row_log[2 * k], Event::Act(t));
        assert_eq!(col_log[2 * k], Event::Act(t));
        assert_eq!(
            row_log[2 * k + 1],
            Event::Observe { t, own: rec.row_action, opponent: rec.col_action, reward: rec.reward }
        );
        assert_eq!(
            col_log[2 * k + 1],
            Event::Observe { t, own: rec.col_action, opponent: rec.row_action, reward: -rec.reward }
        );
    }
}

#[test]
fn noise_is_centred_on_the_payoff_entry() {
    let game = build_rps::<f64>();
    let mut row = build_learner(Algorithm::Exp3, 3, 20_000, Side::Row, None).unwrap();
    let mut col = build_learner(Algorithm::Exp3, 3, 20_000, Side::Column, None).unwrap();
    let traj = run_episode(&game, row.as_mut(), col.as_mut(), 20_000, NoiseModel::GaussianUnit, 9).unwrap();
    let resid: Vec<f64> = traj
        .rounds
        .iter()
        .map(|r| r.reward - game.get(r.row_action, r.col_action))
        .collect();
    let n = resid.len() as f64;
    let mean = resid.iter().sum::<f64>() / n;
    let var = resid.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() < 0.03, "{mean}");
    assert!((var - 1.0).abs() < 0.05, "{var}");
}

#[test]
fn column_coebl_runs_row_code_on_the_transposed_view() {
    // Same observation stream and RNG stream: the side tag must not matter.
    let mut as_col = Coebl::new(3, 500, 2.0, Side::Column).unwrap();
    let mut as_row = Coebl::new(3, 500, 2.0, Side::Row).unwrap();
    let game = build_rps::<f64>();
    let streams = Streams::new(11);
    for t in 1..=500usize {
        let j = as_col.act(t, &mut streams.stream(t as u64, 1)).unwrap();
        let j2 = as_row.act(t, &mut streams.stream(t as u64, 1)).unwrap();
        assert_eq!(j, j2);
        let i = (t * 7) % 3;
        let r = game.get(i, j);
        as_col.observe(t, j, i, -r).unwrap();
        as_row.observe(t, j, i, -r).unwrap();
        assert_eq!(as_col.incumbent(), as_row.incumbent());
    }
}

#[test]
fn column_ucb_plays_the_maximin_of_its_optimistic_view() {
    let game = build_diagonal::<f64>(2).unwrap();
    let mut ucb = Ucb::new(4, 300, Side::Column).unwrap();
    let streams = Streams::new(2);
    for t in 1..=300usize {
        let j = ucb.act(t, &mut streams.stream(t as u64, 1)).unwrap();
        let i = t % 4;
        ucb.observe(t, j, i, -game.get(i, j)).unwrap();
    }
    let view = ucb.optimistic_matrix();
    let expected = solve_maximin(&view, 1e-9).unwrap().strategy;
    let played = ucb.step().unwrap().clone();
    assert!(played.max_norm_distance(&expected) < 1e-12);
    // entries the column saw were stored as (own, opponent) of -A
    for j in 0..4 {
        for i in 0..4 {
            if ucb.estimator().count(j, i) > 0 {
                assert_eq!(ucb.estimator().mean(j, i), -game.get(i, j));
            }
        }
    }
}

#[test]
fn every_algorithm_completes_an_episode() {
    let game = build_diagonal::<f64>(3).unwrap();
    for algo in [Algorithm::Exp3, Algorithm::Exp3Ix, Algorithm::Ucb, Algorithm::Coebl] {
        let mut row = build_learner(algo, 8, 200, Side::Row, Some(8.0)).unwrap();
        let mut col = build_learner(algo, 8, 200, Side::Column, Some(8.0)).unwrap();
        let traj = run_episode(&game, row.as_mut(), col.as_mut(), 200, NoiseModel::GaussianUnit, 1).unwrap();
        assert_eq!(traj.len(), 200);
        for r in &traj.rounds {
            assert!((r.x.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9, "{}", algo.as_str());
            assert!((r.y.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9, "{}", algo.as_str());
        }
    }
}
