//! Vanilla counterfactual regret minimization over a compiled tree.
//!
//! Every iteration walks the whole tree once, weights chance outcomes by
//! their exact probability and updates all players simultaneously. The
//! average strategy uses uniform weights over iterations.

use super::{regret_matching_into, PolicyTable};
use crate::error::Result;
use crate::eval::{GameTree, TreeNode, DEFAULT_NODE_LIMIT};
use crate::game::Game;
use crate::num::Scalar;

#[derive(Debug, Clone)]
pub struct CfrSolver<F> {
    tree: GameTree<F>,
    regrets: Vec<Vec<F>>,
    strategy_sum: Vec<Vec<F>>,
    current: Vec<Vec<F>>,
    iterations: usize,
}

impl<F: Scalar> CfrSolver<F> {
    pub fn new<G: Game>(params: &G::Params) -> Result<Self> {
        Ok(Self::from_tree(GameTree::compile::<G>(params, DEFAULT_NODE_LIMIT)?))
    }

    pub fn from_tree(tree: GameTree<F>) -> Self {
        let zeros: Vec<Vec<F>> = tree
            .infosets()
            .iter()
            .map(|i| vec![F::zero(); i.actions.len()])
            .collect();
        CfrSolver {
            tree,
            regrets: zeros.clone(),
            strategy_sum: zeros.clone(),
            current: zeros,
            iterations: 0,
        }
    }

    pub fn tree(&self) -> &GameTree<F> {
        &self.tree
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn run(&mut self, iterations: usize) {
        for _ in 0..iterations {
            self.iterate();
        }
    }

    pub fn iterate(&mut self) {
        for (r, s) in self.regrets.iter().zip(self.current.iter_mut()) {
            regret_matching_into(r, s);
        }
        let mut reach = vec![F::one(); self.tree.num_players()];
        let mut walk = Walk {
            tree: &self.tree,
            current: &self.current,
            regrets: &mut self.regrets,
            strategy_sum: &mut self.strategy_sum,
        };
        walk.value(self.tree.root(), &mut reach, F::one());
        self.iterations += 1;
    }

    /// Normalized average strategy; info sets never reached are uniform.
    pub fn average_policy(&self) -> PolicyTable<F> {
        let mut table = PolicyTable::new();
        for (info, sum) in self.tree.infosets().iter().zip(&self.strategy_sum) {
            let total: F = sum.iter().copied().sum();
            let probs = if total > F::zero() {
                sum.iter().map(|&s| s / total).collect()
            } else {
                vec![F::one() / F::count(sum.len()); sum.len()]
            };
            table
                .insert(info.key.clone(), info.actions.clone(), probs)
                .expect("average strategy is a distribution");
        }
        table
    }

    /// Mean over info sets of the largest positive cumulative regret,
    /// divided by the iteration count.
    pub fn average_positive_regret(&self) -> F {
        if self.iterations == 0 || self.regrets.is_empty() {
            return F::zero();
        }
        let total: F = self
            .regrets
            .iter()
            .map(|r| r.iter().fold(F::zero(), |m, &x| m.max(x)))
            .sum();
        total / F::count(self.regrets.len()) / F::count(self.iterations)
    }
}

struct Walk<'a, F> {
    tree: &'a GameTree<F>,
    current: &'a [Vec<F>],
    regrets: &'a mut [Vec<F>],
    strategy_sum: &'a mut [Vec<F>],
}

impl<F: Scalar> Walk<'_, F> {
    /// Value of `node` for every player. `reach` holds each player's own
    /// reach probability, `chance` the chance reach.
    fn value(&mut self, node: usize, reach: &mut [F], chance: F) -> Vec<F> {
        match self.tree.node(node) {
            TreeNode::Terminal { payoffs } => payoffs.clone(),
            TreeNode::Chance { outcomes } => {
                let mut value = vec![F::zero(); reach.len()];
                for &(child, p) in outcomes {
                    let v = self.value(child, reach, chance * p);
                    for (acc, x) in value.iter_mut().zip(v) {
                        *acc += p * x;
                    }
                }
                value
            }
            &TreeNode::Decision { player, infoset, ref children } => {
                let sigma = &self.current[infoset];
                let own = reach[player];
                let mut value = vec![F::zero(); reach.len()];
                let mut action_values = Vec::with_capacity(children.len());
                for (&child, &p) in children.iter().zip(sigma) {
                    reach[player] = own * p;
                    let v = self.value(child, reach, chance);
                    for (acc, &x) in value.iter_mut().zip(&v) {
                        *acc += p * x;
                    }
                    action_values.push(v[player]);
                }
                reach[player] = own;
                let others = reach
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != player)
                    .fold(chance, |acc, (_, &r)| acc * r);
                for (r, &v) in self.regrets[infoset].iter_mut().zip(&action_values) {
                    *r += others * (v - value[player]);
                }
                for (s, &p) in self.strategy_sum[infoset].iter_mut().zip(sigma) {
                    *s += own * p;
                }
                value
            }
        }
    }
}

/// Trains vanilla CFR for `iterations` and returns the average policy.
pub fn cfr_train<G: Game, F: Scalar>(params: &G::Params, iterations: usize) -> Result<PolicyTable<F>> {
    let mut solver = CfrSolver::<F>::new::<G>(params)?;
    solver.run(iterations);
    Ok(solver.average_policy())
}
