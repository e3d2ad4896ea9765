//! Exact best responses and exploitability for enumerable games.
//!
//! Two implementations are kept side by side. [`best_response`] runs on a
//! compiled tree: opponent-and-chance reach is pushed down once, then a
//! memoized bottom-up pass picks, for each of the responder's info sets,
//! the action maximizing the reach-weighted sum of child values.
//! [`best_response_by_posteriors`] works directly on game clones: it first
//! collects every hidden state of each info set with its reach, normalizes
//! those into a posterior, and decides info sets deepest first by
//! expectation under the posterior.

use std::collections::HashMap;

use super::tree::{GameTree, TreeNode};
use crate::agents::{argmax, PolicyTable};
use crate::env::InfoSetKey;
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, Node, Seat};
use crate::num::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub player: Seat,
    /// Expected payoff of the responder against the fixed policy.
    pub value: f64,
    /// Pure response as a one-hot table over the responder's info sets.
    pub policy: PolicyTable<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    BigBlindsPerHand,
    WinRate,
}

impl Units {
    pub fn as_str(self) -> &'static str {
        match self {
            Units::BigBlindsPerHand => "bb/hand",
            Units::WinRate => "win-rate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExploitabilityReport {
    /// Best-response value against the policy, per responding seat.
    pub br_values: Vec<f64>,
    /// Mean of `br_values`; zero exactly at an equilibrium.
    pub exploitability: f64,
    pub units: Units,
}

fn one_hot(len: usize, best: usize) -> Vec<f64> {
    let mut p = vec![0.0; len];
    p[best] = 1.0;
    p
}

struct TreeBr<'a, F> {
    tree: &'a GameTree<F>,
    player: Seat,
    probs: Vec<Vec<F>>,
    reach: Vec<F>,
    members: Vec<Vec<usize>>,
    value: Vec<Option<F>>,
    choice: Vec<Option<usize>>,
}

impl<F: Scalar> TreeBr<'_, F> {
    fn node_value(&mut self, node: usize) -> F {
        if let Some(v) = self.value[node] {
            return v;
        }
        let tree = self.tree;
        let v = match tree.node(node) {
            TreeNode::Terminal { payoffs } => payoffs[self.player],
            TreeNode::Chance { outcomes } => {
                let mut acc = F::zero();
                for &(c, p) in outcomes {
                    acc += p * self.node_value(c);
                }
                acc
            }
            TreeNode::Decision { player, infoset, children } if *player == self.player => {
                let a = self.decide(*infoset);
                self.node_value(children[a])
            }
            TreeNode::Decision { infoset, children, .. } => {
                let mut acc = F::zero();
                for (a, &c) in children.iter().enumerate() {
                    let p = self.probs[*infoset][a];
                    acc += p * self.node_value(c);
                }
                acc
            }
        };
        self.value[node] = Some(v);
        v
    }

    fn decide(&mut self, infoset: usize) -> usize {
        if let Some(a) = self.choice[infoset] {
            return a;
        }
        let tree = self.tree;
        let mut q = vec![F::zero(); tree.infosets()[infoset].actions.len()];
        for i in 0..self.members[infoset].len() {
            let m = self.members[infoset][i];
            let r = self.reach[m];
            if let TreeNode::Decision { children, .. } = tree.node(m) {
                for (a, &c) in children.iter().enumerate() {
                    q[a] += r * self.node_value(c);
                }
            }
        }
        let best = argmax(&q);
        self.choice[infoset] = Some(best);
        best
    }
}

/// Best response of `player` against `policy` on a compiled tree.
/// Info sets missing from `policy` are played uniformly.
pub fn best_response<F: Scalar>(tree: &GameTree<F>, policy: &PolicyTable<F>, player: Seat) -> Result<BestResponse> {
    if player >= tree.num_players() {
        return Err(Error::InvalidSeat(player));
    }
    let infosets = tree.infosets();
    let probs: Vec<Vec<F>> = infosets.iter().map(|i| policy.probs(&i.key, &i.actions)).collect();
    let mut reach = vec![F::zero(); tree.len()];
    let mut members = vec![Vec::new(); infosets.len()];
    reach[tree.root()] = F::one();
    // Pre-order numbering: a parent always precedes its children.
    for id in 0..tree.len() {
        let r = reach[id];
        match tree.node(id) {
            TreeNode::Terminal { .. } => {}
            TreeNode::Chance { outcomes } => {
                for &(c, p) in outcomes {
                    reach[c] = r * p;
                }
            }
            TreeNode::Decision { player: who, infoset, children } => {
                if *who == player {
                    members[*infoset].push(id);
                }
                for (a, &c) in children.iter().enumerate() {
                    reach[c] = if *who == player { r } else { r * probs[*infoset][a] };
                }
            }
        }
    }
    let mut br = TreeBr {
        tree,
        player,
        probs,
        reach,
        members,
        value: vec![None; tree.len()],
        choice: vec![None; infosets.len()],
    };
    let value = br.node_value(tree.root());
    let mut table = PolicyTable::new();
    for (i, info) in infosets.iter().enumerate() {
        if info.player == player {
            let best = br.decide(i);
            table.insert(info.key.clone(), info.actions.clone(), one_hot(info.actions.len(), best))?;
        }
    }
    Ok(BestResponse {
        player,
        value: value.as_f64(),
        policy: table,
    })
}

/// Mean best-response value over both seats of a two-player zero-sum tree.
pub fn exploitability<F: Scalar>(tree: &GameTree<F>, policy: &PolicyTable<F>, units: Units) -> Result<ExploitabilityReport> {
    if tree.num_players() != 2 || !tree.is_zero_sum() {
        return Err(Error::NotZeroSum);
    }
    let br_values = (0..2)
        .map(|p| best_response(tree, policy, p).map(|b| b.value))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ExploitabilityReport {
        exploitability: (br_values[0] + br_values[1]) / 2.0,
        br_values,
        units,
    })
}

struct Posteriors<'a, G: Game> {
    player: Seat,
    policy: &'a PolicyTable<f64>,
    /// Per info set: the responder's depth, legal ids and (state, reach).
    sets: HashMap<InfoSetKey, (usize, Vec<ActionId>, Vec<(G, f64)>)>,
    choice: HashMap<InfoSetKey, usize>,
}

impl<G: Game> Posteriors<'_, G> {
    fn key(&self, game: &G, seat: Seat) -> InfoSetKey {
        InfoSetKey::new(seat, &game.raw_view(seat))
    }

    fn child(game: &G, action: ActionId) -> Result<G> {
        let mut next = game.clone();
        let mv = next.decode_action(action)?;
        next.apply(&mv)?;
        Ok(next)
    }

    fn collect(&mut self, game: &G, reach: f64, depth: usize) -> Result<()> {
        match game.node() {
            Node::Terminal => Ok(()),
            Node::Chance => {
                for (next, p) in game.chance_outcomes() {
                    self.collect(&next, reach * p, depth)?;
                }
                Ok(())
            }
            Node::Decision(seat) => {
                let key = self.key(game, seat);
                let legal = game.legal_actions();
                if seat == self.player {
                    self.sets
                        .entry(key)
                        .or_insert_with(|| (depth, legal.clone(), Vec::new()))
                        .2
                        .push((game.clone(), reach));
                    for &a in &legal {
                        self.collect(&Self::child(game, a)?, reach, depth + 1)?;
                    }
                } else {
                    let probs = self.policy.probs(&key, &legal);
                    for (&a, p) in legal.iter().zip(probs) {
                        self.collect(&Self::child(game, a)?, reach * p, depth)?;
                    }
                }
                Ok(())
            }
        }
    }

    /// Expected responder payoff below `game`, given decisions so far.
    fn expected(&self, game: &G) -> Result<f64> {
        match game.node() {
            Node::Terminal => Ok(game.payoffs()?[self.player]),
            Node::Chance => {
                let mut acc = 0.0;
                for (next, p) in game.chance_outcomes() {
                    acc += p * self.expected(&next)?;
                }
                Ok(acc)
            }
            Node::Decision(seat) => {
                let key = self.key(game, seat);
                let legal = game.legal_actions();
                if seat == self.player {
                    let a = *self.choice.get(&key).expect("deeper info sets are decided first");
                    self.expected(&Self::child(game, legal[a])?)
                } else {
                    let probs = self.policy.probs(&key, &legal);
                    let mut acc = 0.0;
                    for (&a, p) in legal.iter().zip(probs) {
                        if p > 0.0 {
                            acc += p * self.expected(&Self::child(game, a)?)?;
                        }
                    }
                    Ok(acc)
                }
            }
        }
    }
}

/// Best-response value of `player` computed from explicit hidden-state
/// posteriors over game clones, without a compiled tree.
pub fn best_response_by_posteriors<G: Game>(
    params: &G::Params,
    policy: &PolicyTable<f64>,
    player: Seat,
) -> Result<BestResponse> {
    let root = G::enumeration_root(params).ok_or(Error::GameTooLarge {
        limit: super::tree::DEFAULT_NODE_LIMIT,
    })?;
    if player >= root.num_players() {
        return Err(Error::InvalidSeat(player));
    }
    let mut post = Posteriors {
        player,
        policy,
        sets: HashMap::new(),
        choice: HashMap::new(),
    };
    post.collect(&root, 1.0, 0)?;
    let mut order: Vec<InfoSetKey> = post.sets.keys().cloned().collect();
    order.sort_by(|a, b| post.sets[b].0.cmp(&post.sets[a].0).then_with(|| a.cmp(b)));
    let mut table = PolicyTable::new();
    for key in order {
        let (_, legal, states) = &post.sets[&key];
        let total: f64 = states.iter().map(|s| s.1).sum();
        let mut q = vec![0.0; legal.len()];
        for (state, reach) in states {
            let weight = if total > 0.0 { reach / total } else { 1.0 / states.len() as f64 };
            for (a, &id) in legal.iter().enumerate() {
                q[a] += weight * post.expected(&Posteriors::<G>::child(state, id)?)?;
            }
        }
        let best = argmax(&q);
        table.insert(key.clone(), legal.clone(), one_hot(legal.len(), best))?;
        post.choice.insert(key, best);
    }
    let value = post.expected(&root)?;
    Ok(BestResponse { player, value, policy: table })
}
