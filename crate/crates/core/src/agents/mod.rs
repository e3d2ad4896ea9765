//! Baseline and tabular solver agents.

mod cfr;
mod mccfr;
mod policy;
mod qlearn;

pub use cfr::{cfr_train, CfrSolver};
pub use mccfr::{mccfr_external_train, ExternalSamplingMccfr};
pub use policy::{PolicyAgent, PolicyTable, POLICY_HEADER};
pub use qlearn::{qlearn_train, QAgent, QParams, QTable};

use crate::env::{Agent, Observation};
use crate::game::ActionId;
use crate::num::Scalar;
use crate::rng::Rng;

/// Uniform choice among the legal actions.
pub fn random_step(obs: &Observation, rng: &mut Rng) -> ActionId {
    assert!(!obs.legal_actions.is_empty(), "no legal action");
    obs.legal_actions[rng.below(obs.legal_actions.len())]
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RandomAgent;

impl Agent for RandomAgent {
    fn eval_step(&self, obs: &Observation, rng: &mut Rng) -> ActionId {
        random_step(obs, rng)
    }
    fn sample_step(&self, obs: &Observation, rng: &mut Rng) -> ActionId {
        random_step(obs, rng)
    }
}

/// Strategy proportional to the positive regrets, uniform when none is
/// positive.
pub fn regret_matching<F: Scalar>(regrets: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); regrets.len()];
    regret_matching_into(regrets, &mut out);
    out
}

pub(crate) fn regret_matching_into<F: Scalar>(regrets: &[F], out: &mut [F]) {
    let positive: F = regrets.iter().map(|&r| r.max(F::zero())).sum();
    if positive > F::zero() {
        for (o, &r) in out.iter_mut().zip(regrets) {
            *o = r.max(F::zero()) / positive;
        }
    } else {
        let u = F::one() / F::count(regrets.len());
        out.iter_mut().for_each(|o| *o = u);
    }
}

/// Index of the largest entry; ties go to the lowest index.
pub(crate) fn argmax<F: Scalar>(values: &[F]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regret_matching_examples() {
        assert_eq!(regret_matching(&[-1.0f64, -2.0]), vec![0.5, 0.5]);
        assert_eq!(regret_matching(&[3.0f64, 1.0]), vec![0.75, 0.25]);
        assert_eq!(regret_matching(&[0.0f64, 5.0, 0.0]), vec![0.0, 1.0, 0.0]);
        assert_eq!(regret_matching(&[3.0f32, 1.0]), vec![0.75f32, 0.25]);
    }

    #[test]
    fn argmax_prefers_lowest_on_ties() {
        assert_eq!(argmax(&[1.0f64, 3.0, 3.0]), 1);
        assert_eq!(argmax(&[0.0f64]), 0);
    }
}
