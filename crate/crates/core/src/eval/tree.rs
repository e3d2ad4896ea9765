//! Fully expanded game trees for exhaustive solvers.

use std::collections::HashMap;

use crate::env::InfoSetKey;
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, Node, Seat};
use crate::num::Scalar;

/// Node budget shared by every exhaustive walk.
pub const DEFAULT_NODE_LIMIT: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode<F> {
    Chance { outcomes: Vec<(usize, F)> },
    Decision { player: Seat, infoset: usize, children: Vec<usize> },
    Terminal { payoffs: Vec<F> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoSet {
    pub key: InfoSetKey,
    pub player: Seat,
    pub actions: Vec<ActionId>,
    /// Decisions this player took before reaching the set.
    pub depth: usize,
}

/// Arena of nodes in pre-order; the root is node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GameTree<F> {
    nodes: Vec<TreeNode<F>>,
    infosets: Vec<InfoSet>,
    index: HashMap<InfoSetKey, usize>,
    num_players: usize,
    zero_sum: bool,
}

impl<F: Scalar> GameTree<F> {
    /// Expands every chance outcome and action from the game's enumeration
    /// root. Fails with `GameTooLarge` past `node_limit` nodes or when the
    /// game offers no enumeration root.
    pub fn compile<G: Game>(params: &G::Params, node_limit: usize) -> Result<Self> {
        let root = G::enumeration_root(params).ok_or(Error::GameTooLarge { limit: node_limit })?;
        let mut tree = GameTree {
            nodes: Vec::new(),
            infosets: Vec::new(),
            index: HashMap::new(),
            num_players: root.num_players(),
            zero_sum: true,
        };
        let mut depth = vec![0; tree.num_players];
        tree.build(root, &mut depth, node_limit)?;
        Ok(tree)
    }

    fn build<G: Game>(&mut self, game: G, depth: &mut [usize], limit: usize) -> Result<usize> {
        if self.nodes.len() >= limit {
            return Err(Error::GameTooLarge { limit });
        }
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Terminal { payoffs: Vec::new() });
        let node = match game.node() {
            Node::Terminal => {
                let payoffs = game.payoffs()?;
                if payoffs.iter().sum::<f64>().abs() > 1e-12 {
                    self.zero_sum = false;
                }
                TreeNode::Terminal {
                    payoffs: payoffs.into_iter().map(F::lit).collect(),
                }
            }
            Node::Chance => {
                let outcomes = game.chance_outcomes();
                if outcomes.is_empty() {
                    return Err(Error::GameTooLarge { limit });
                }
                let mut out = Vec::with_capacity(outcomes.len());
                for (child, p) in outcomes {
                    out.push((self.build(child, depth, limit)?, F::lit(p)));
                }
                TreeNode::Chance { outcomes: out }
            }
            Node::Decision(player) => {
                let key = InfoSetKey::new(player, &game.raw_view(player));
                let actions = game.legal_actions();
                let infoset = match self.index.get(&key) {
                    Some(&i) => {
                        debug_assert_eq!(self.infosets[i].actions, actions, "legal set differs inside {key}");
                        i
                    }
                    None => {
                        self.infosets.push(InfoSet {
                            key: key.clone(),
                            player,
                            actions: actions.clone(),
                            depth: depth[player],
                        });
                        self.index.insert(key, self.infosets.len() - 1);
                        self.infosets.len() - 1
                    }
                };
                let mut children = Vec::with_capacity(actions.len());
                depth[player] += 1;
                for &a in &actions {
                    let mut child = game.clone();
                    let mv = child.decode_action(a)?;
                    child.apply(&mv)?;
                    children.push(self.build(child, depth, limit)?);
                }
                depth[player] -= 1;
                TreeNode::Decision { player, infoset, children }
            }
        };
        self.nodes[id] = node;
        Ok(id)
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, id: usize) -> &TreeNode<F> {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[TreeNode<F>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn infosets(&self) -> &[InfoSet] {
        &self.infosets
    }

    pub fn infoset_index(&self, key: &InfoSetKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    /// True when every terminal's payoffs sum to zero.
    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::LeducGame;

    #[test]
    fn leduc_tree_shape() {
        let tree = GameTree::<f64>::compile::<LeducGame>(&Default::default(), DEFAULT_NODE_LIMIT).unwrap();
        assert!(tree.is_zero_sum());
        assert_eq!(tree.num_players(), 2);
        assert!(matches!(tree.node(0), TreeNode::Chance { .. }));
        for node in tree.nodes() {
            if let TreeNode::Chance { outcomes } = node {
                let total: f64 = outcomes.iter().map(|o| o.1).sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn node_limit_is_enforced() {
        let r = GameTree::<f64>::compile::<LeducGame>(&Default::default(), 100);
        assert_eq!(r.unwrap_err(), Error::GameTooLarge { limit: 100 });
    }
}
