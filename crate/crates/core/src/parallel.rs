//! Multi-worker rollouts and the throughput benchmark.
//!
//! Game `i` of a rollout is always played by a fresh environment seeded
//! with `split(master_seed, i)`. Workers take games `w, w + n, w + 2n, ...`
//! and the collector merges results by game index, so aggregates do not
//! depend on the worker count or on completion order.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use crate::agents::RandomAgent;
use crate::env::{make, Agent, EnvConfig, GameId, Trajectory};
use crate::error::{Error, Result};
use crate::rng::split_seed;

/// Runs `f(i)` for every `i < n_games` on `n_workers` scoped threads and
/// returns the results in index order. A panic or error in game `i` is
/// reported as `WorkerFailure { game: i, .. }`; the lowest failing index
/// wins.
pub fn map_games<T, F>(n_games: usize, n_workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    if n_workers == 0 {
        return Err(Error::InvalidParam("n_workers must be at least 1".into()));
    }
    if n_games == 0 {
        return Ok(Vec::new());
    }
    let run_one = |i: usize| -> Result<T> {
        match catch_unwind(AssertUnwindSafe(|| f(i))) {
            Ok(Ok(v)) => Ok(v),
            Ok(Err(e)) => Err(Error::WorkerFailure {
                game: i,
                message: e.to_string(),
            }),
            Err(panic) => Err(Error::WorkerFailure {
                game: i,
                message: panic_message(panic.as_ref()),
            }),
        }
    };
    let workers = n_workers.min(n_games);
    let mut slots: Vec<Option<Result<T>>> = (0..n_games).map(|_| None).collect();
    if workers == 1 {
        for (i, slot) in slots.iter_mut().enumerate() {
            *slot = Some(run_one(i));
        }
    } else {
        let parts: Vec<Vec<(usize, Result<T>)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let run_one = &run_one;
                    scope.spawn(move || {
                        (w..n_games)
                            .step_by(workers)
                            .map(|i| (i, run_one(i)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panics are caught per game"))
                .collect()
        });
        for (i, r) in parts.into_iter().flatten() {
            slots[i] = Some(r);
        }
    }
    slots
        .into_iter()
        .map(|s| s.expect("every game index is assigned"))
        .collect()
}

fn panic_message(panic: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = panic.downcast_ref::<&str>() {
        (*s).to_owned()
    } else if let Some(s) = panic.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_owned()
    }
}

#[derive(Clone)]
pub struct RolloutSpec {
    /// Game and parameters; the seed field is replaced per game.
    pub env_config: EnvConfig,
    /// Frozen agents shared read-only by every worker.
    pub agents: Vec<Arc<dyn Agent>>,
    pub n_games: usize,
    pub n_workers: usize,
    pub master_seed: u64,
    /// Use `sample_step` instead of `eval_step`.
    pub training: bool,
    /// Keep per-game trajectories.
    pub collect_trajectories: bool,
}

impl RolloutSpec {
    pub fn new(env_config: EnvConfig, agents: Vec<Arc<dyn Agent>>, n_games: usize) -> RolloutSpec {
        RolloutSpec {
            master_seed: env_config.seed,
            env_config,
            agents,
            n_games,
            n_workers: 1,
            training: false,
            collect_trajectories: false,
        }
    }

    pub fn with_workers(mut self, n_workers: usize) -> RolloutSpec {
        self.n_workers = n_workers;
        self
    }

    /// Config of game `i`.
    pub fn game_config(&self, i: usize) -> EnvConfig {
        self.env_config.clone().with_seed(split_seed(self.master_seed, i as u64))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub seed: u64,
    pub payoffs: Vec<f64>,
    pub steps: usize,
    pub trajectories: Option<Vec<Trajectory>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RolloutResult {
    /// Sum of each seat's payoff, added in game-index order.
    pub payoff_sums: Vec<f64>,
    pub games: usize,
    /// Decisions taken across all games.
    pub steps: usize,
    /// One record per game, in game-index order.
    pub records: Vec<GameRecord>,
}

impl RolloutResult {
    pub fn mean_payoffs(&self) -> Vec<f64> {
        self.payoff_sums
            .iter()
            .map(|s| if self.games == 0 { 0.0 } else { s / self.games as f64 })
            .collect()
    }
}

pub fn rollout_parallel(spec: &RolloutSpec) -> Result<RolloutResult> {
    let records = map_games(spec.n_games, spec.n_workers, |i| {
        let config = spec.game_config(i);
        let seed = config.seed;
        let mut env = make(&config)?;
        env.set_agents(spec.agents.clone())?;
        if spec.collect_trajectories {
            let (trajectories, payoffs) = env.run(spec.training)?;
            let steps = trajectories.iter().map(|t| t.transitions.len()).sum();
            Ok(GameRecord {
                seed,
                payoffs,
                steps,
                trajectories: Some(trajectories),
            })
        } else {
            let (payoffs, steps) = env.play(spec.training)?;
            Ok(GameRecord {
                seed,
                payoffs,
                steps,
                trajectories: None,
            })
        }
    })?;
    let mut result = RolloutResult {
        payoff_sums: vec![0.0; spec.agents.len()],
        games: records.len(),
        ..RolloutResult::default()
    };
    for r in &records {
        for (acc, p) in result.payoff_sums.iter_mut().zip(&r.payoffs) {
            *acc += p;
        }
        result.steps += r.steps;
    }
    result.records = records;
    Ok(result)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub game: GameId,
    pub n_workers: usize,
    /// Games over all repeats.
    pub games: usize,
    /// Decisions over all repeats.
    pub steps: usize,
    /// Wall-clock seconds over all repeats.
    pub total_s: f64,
    pub per_step_s: f64,
    pub repeats: usize,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "game,n_workers,games,steps,total_s,per_step_s";

    pub fn mean_total_s(&self) -> f64 {
        self.total_s / self.repeats as f64
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.3e}",
            self.game, self.n_workers, self.games, self.steps, self.total_s, self.per_step_s
        )
    }
}

/// Times `repeats` rollouts of `n_games` random-agent games; repeat `r`
/// uses master seed `split(seed, r)`. Step-back snapshots are disabled.
pub fn bench(game: GameId, n_games: usize, n_workers: usize, repeats: usize, seed: u64) -> Result<BenchReport> {
    let mut config = EnvConfig::new(game, seed);
    config.allow_step_back = false;
    let seats = make(&config)?.num_players();
    let agents: Vec<Arc<dyn Agent>> = (0..seats).map(|_| Arc::new(RandomAgent) as Arc<dyn Agent>).collect();
    let mut total_s = 0.0;
    let mut steps = 0;
    let mut games = 0;
    for r in 0..repeats {
        let mut spec = RolloutSpec::new(config.clone(), agents.clone(), n_games).with_workers(n_workers);
        spec.master_seed = split_seed(seed, r as u64);
        let start = Instant::now();
        let result = rollout_parallel(&spec)?;
        total_s += start.elapsed().as_secs_f64();
        steps += result.steps;
        games += result.games;
    }
    Ok(BenchReport {
        game,
        n_workers,
        games,
        steps,
        total_s,
        per_step_s: if steps == 0 { 0.0 } else { total_s / steps as f64 },
        repeats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(game: GameId, n: usize) -> RolloutSpec {
        let config = EnvConfig::new(game, 9);
        let seats = make(&config).unwrap().num_players();
        let agents = (0..seats).map(|_| Arc::new(RandomAgent) as Arc<dyn Agent>).collect();
        RolloutSpec::new(config, agents, n)
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let one = rollout_parallel(&spec(GameId::Leduc, 200)).unwrap();
        for w in [2, 4, 8] {
            let many = rollout_parallel(&spec(GameId::Leduc, 200).with_workers(w)).unwrap();
            assert_eq!(one, many);
        }
    }

    #[test]
    fn empty_rollout() {
        let r = rollout_parallel(&spec(GameId::Uno, 0).with_workers(4)).unwrap();
        assert_eq!(r.games, 0);
        assert!(r.records.is_empty());
    }

    #[test]
    fn steps_match_trajectory_lengths() {
        let mut s = spec(GameId::MiniDoudizhu, 30);
        s.collect_trajectories = true;
        let r = rollout_parallel(&s).unwrap();
        let total: usize = r
            .records
            .iter()
            .flat_map(|g| g.trajectories.as_ref().unwrap())
            .map(|t| t.transitions.len())
            .sum();
        assert_eq!(total, r.steps);
        let plain = rollout_parallel(&spec(GameId::MiniDoudizhu, 30)).unwrap();
        assert_eq!(plain.steps, r.steps);
        assert_eq!(plain.payoff_sums, r.payoff_sums);
    }

    #[test]
    fn failures_carry_the_game_index() {
        let err = map_games(10, 3, |i| if i == 7 { panic!("boom") } else { Ok(i) }).unwrap_err();
        assert_eq!(err, Error::WorkerFailure { game: 7, message: "boom".into() });
        let err = map_games(10, 1, |i| if i >= 4 { Err(Error::GameOver) } else { Ok(i) }).unwrap_err();
        assert!(matches!(err, Error::WorkerFailure { game: 4, .. }));
    }

    #[test]
    fn bench_accounting() {
        let r = bench(GameId::Blackjack, 50, 2, 3, 1).unwrap();
        assert_eq!(r.games, 150);
        assert!(r.steps > 0);
        assert!((r.per_step_s - r.total_s / r.steps as f64).abs() < 1e-15);
        assert!(r.csv_row().starts_with("blackjack,2,150,"));
    }
}
