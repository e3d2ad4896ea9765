//! Tabular epsilon-greedy Q-learning in single-agent mode.

use std::collections::HashMap;
use std::sync::Arc;

use super::{argmax, random_step, PolicyTable};
use crate::env::{Agent, Environment, InfoSetKey, Observation};
use crate::error::Result;
use crate::game::ActionId;
use crate::num::Scalar;
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct QParams {
    pub learning_rate: f64,
    pub discount: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    /// Fraction of the episodes over which epsilon decays linearly.
    pub decay_fraction: f64,
    /// Move the learner to seat `episode % num_players` every episode.
    pub rotate_seats: bool,
}

impl Default for QParams {
    fn default() -> Self {
        QParams {
            learning_rate: 0.05,
            discount: 0.99,
            epsilon_start: 1.0,
            epsilon_end: 0.05,
            decay_fraction: 0.5,
            rotate_seats: false,
        }
    }
}

impl QParams {
    pub fn epsilon(&self, episode: usize, episodes: usize) -> f64 {
        let horizon = self.decay_fraction * episodes as f64;
        if horizon <= 0.0 || episode as f64 >= horizon {
            return self.epsilon_end;
        }
        let t = episode as f64 / horizon;
        self.epsilon_start + (self.epsilon_end - self.epsilon_start) * t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QEntry<F> {
    pub actions: Vec<ActionId>,
    pub values: Vec<F>,
}

/// Action values keyed by info set, zero-initialized on first visit.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable<F> {
    entries: HashMap<InfoSetKey, QEntry<F>>,
    params: QParams,
}

impl<F: Scalar> QTable<F> {
    pub fn new(params: QParams) -> Self {
        QTable {
            entries: HashMap::new(),
            params,
        }
    }

    pub fn params(&self) -> &QParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &InfoSetKey) -> Option<&QEntry<F>> {
        self.entries.get(key)
    }

    fn entry(&mut self, obs: &Observation) -> &mut QEntry<F> {
        self.entries.entry(obs.info_key()).or_insert_with(|| QEntry {
            actions: obs.legal_actions.clone(),
            values: vec![F::zero(); obs.legal_actions.len()],
        })
    }

    /// Highest-valued legal action, or `None` for an unseen info set.
    pub fn greedy(&self, obs: &Observation) -> Option<ActionId> {
        let e = self.entries.get(&obs.info_key())?;
        Some(e.actions[argmax(&e.values)])
    }

    fn max_value(&self, obs: &Observation) -> F {
        match self.entries.get(&obs.info_key()) {
            Some(e) => e.values.iter().copied().fold(F::neg_infinity(), F::max),
            None => F::zero(),
        }
    }

    /// One-hot greedy policy over every visited info set.
    pub fn to_policy(&self) -> PolicyTable<F> {
        let mut table = PolicyTable::new();
        for (key, e) in &self.entries {
            let mut probs = vec![F::zero(); e.actions.len()];
            probs[argmax(&e.values)] = F::one();
            table
                .insert(key.clone(), e.actions.clone(), probs)
                .expect("one-hot is a distribution");
        }
        table
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .values()
            .all(|e| e.values.iter().all(|v| v.is_finite()))
    }
}

/// Trains on an environment already in single-agent mode.
pub fn qlearn_train<F: Scalar>(
    env: &mut dyn Environment,
    episodes: usize,
    params: &QParams,
    rng: &mut Rng,
) -> Result<QTable<F>> {
    let mut q = QTable::new(params.clone());
    let lr = F::lit(params.learning_rate);
    let gamma = F::lit(params.discount);
    let n = env.num_players();
    for episode in 0..episodes {
        if params.rotate_seats {
            env.set_learner(episode % n)?;
        }
        let eps = params.epsilon(episode, episodes);
        let mut obs = env.reset()?;
        while !obs.legal_actions.is_empty() {
            let action = if rng.uniform() < eps {
                random_step(&obs, rng)
            } else {
                let e = q.entry(&obs);
                e.actions[argmax(&e.values)]
            };
            let (next, reward, done) = env.sa_step(action)?;
            let target = if done {
                F::lit(reward)
            } else {
                F::lit(reward) + gamma * q.max_value(&next)
            };
            let e = q.entry(&obs);
            let i = e.actions.binary_search(&action).expect("action is legal");
            let old = e.values[i];
            e.values[i] = old + lr * (target - old);
            if done {
                break;
            }
            obs = next;
        }
    }
    Ok(q)
}

/// Plays a frozen Q-table greedily; unseen info sets are played uniformly.
#[derive(Debug, Clone)]
pub struct QAgent<F> {
    table: Arc<QTable<F>>,
}

impl<F: Scalar> QAgent<F> {
    pub fn new(table: QTable<F>) -> Self {
        QAgent { table: Arc::new(table) }
    }
}

impl<F: Scalar> Agent for QAgent<F> {
    fn eval_step(&self, obs: &Observation, rng: &mut Rng) -> ActionId {
        self.table.greedy(obs).unwrap_or_else(|| random_step(obs, rng))
    }
    fn sample_step(&self, obs: &Observation, rng: &mut Rng) -> ActionId {
        self.eval_step(obs, rng)
    }
}
