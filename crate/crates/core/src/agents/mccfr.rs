//! External-sampling Monte Carlo CFR driven through `step`/`step_back`.
//!
//! Each iteration deals one game per traverser. Chance is sampled by the
//! environment's deal; opponent actions are sampled from the current
//! regret-matching strategy, while every traverser action is expanded and
//! undone with `step_back`. The average strategy accumulates the current
//! strategy at opponent nodes.

use std::collections::HashMap;

use super::{regret_matching_into, PolicyTable};
use crate::env::{Env, EnvConfig, InfoSetKey};
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, Seat};
use crate::num::Scalar;
use crate::rng::Rng;

#[derive(Debug, Clone)]
struct Entry<F> {
    actions: Vec<ActionId>,
    regrets: Vec<F>,
    strategy_sum: Vec<F>,
}

#[derive(Debug, Clone, Default)]
pub struct ExternalSamplingMccfr<F> {
    table: HashMap<InfoSetKey, Entry<F>>,
    iterations: usize,
}

impl<F: Scalar> ExternalSamplingMccfr<F> {
    pub fn new() -> Self {
        ExternalSamplingMccfr {
            table: HashMap::new(),
            iterations: 0,
        }
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Runs `iterations` rounds on `env`, which must keep step-back
    /// snapshots.
    pub fn run<G: Game>(&mut self, env: &mut Env<G>, iterations: usize, rng: &mut Rng) -> Result<()> {
        if !env.config().allow_step_back {
            return Err(Error::InvalidParam("external sampling needs allow_step_back".into()));
        }
        for _ in 0..iterations {
            for traverser in 0..env.num_players() {
                env.init_game();
                self.traverse(env, traverser, rng)?;
            }
            self.iterations += 1;
        }
        Ok(())
    }

    fn traverse<G: Game>(&mut self, env: &mut Env<G>, traverser: Seat, rng: &mut Rng) -> Result<F> {
        let seat = match env.current_player() {
            None => return Ok(F::lit(env.get_payoffs()?[traverser])),
            Some(s) => s,
        };
        let obs = env.extract_state(seat);
        let key = obs.info_key();
        let entry = self.table.entry(key.clone()).or_insert_with(|| Entry {
            actions: obs.legal_actions.clone(),
            regrets: vec![F::zero(); obs.legal_actions.len()],
            strategy_sum: vec![F::zero(); obs.legal_actions.len()],
        });
        let mut sigma = vec![F::zero(); entry.actions.len()];
        regret_matching_into(&entry.regrets, &mut sigma);
        let actions = entry.actions.clone();

        if seat == traverser {
            let mut values = Vec::with_capacity(actions.len());
            for &a in &actions {
                env.step(a)?;
                values.push(self.traverse(env, traverser, rng)?);
                env.step_back();
            }
            let value: F = sigma.iter().zip(&values).map(|(&p, &v)| p * v).sum();
            let entry = self.table.get_mut(&key).expect("entry inserted above");
            for (r, &v) in entry.regrets.iter_mut().zip(&values) {
                *r += v - value;
            }
            Ok(value)
        } else {
            for (s, &p) in entry.strategy_sum.iter_mut().zip(&sigma) {
                *s += p;
            }
            let weights: Vec<f64> = sigma.iter().map(|p| p.as_f64()).collect();
            let a = actions[rng.weighted(&weights)];
            env.step(a)?;
            let value = self.traverse(env, traverser, rng)?;
            env.step_back();
            Ok(value)
        }
    }

    /// Normalized average strategy over every info set seen.
    pub fn average_policy(&self) -> PolicyTable<F> {
        let mut table = PolicyTable::new();
        for (key, e) in &self.table {
            let total: F = e.strategy_sum.iter().copied().sum();
            let probs = if total > F::zero() {
                e.strategy_sum.iter().map(|&s| s / total).collect()
            } else {
                vec![F::one() / F::count(e.actions.len()); e.actions.len()]
            };
            table
                .insert(key.clone(), e.actions.clone(), probs)
                .expect("average strategy is a distribution");
        }
        table
    }
}

/// Trains external-sampling MCCFR on the game of `config` and returns the
/// average policy. Deals follow `config.seed`; opponent sampling uses `rng`.
pub fn mccfr_external_train<G: Game, F: Scalar>(
    config: &EnvConfig,
    iterations: usize,
    rng: &mut Rng,
) -> Result<PolicyTable<F>> {
    let mut config = config.clone();
    config.allow_step_back = true;
    let mut env = Env::<G>::new(config)?;
    let mut solver = ExternalSamplingMccfr::<F>::new();
    solver.run(&mut env, iterations, rng)?;
    Ok(solver.average_policy())
}
