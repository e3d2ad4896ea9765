//! Exhaustive info-set census.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::env::InfoSetKey;
use crate::error::{Error, Result};
use crate::game::{Game, Node};

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    /// Distinct info sets per seat.
    pub per_player: Vec<usize>,
    pub info_sets: usize,
    /// Distinct decision states reached.
    pub decision_states: usize,
    /// Decision states per info set.
    pub avg_states_per_info_set: f64,
    pub num_actions: usize,
}

/// Walks every reachable state from the enumeration root, visiting each
/// distinct state once, and counts the info sets met at decision nodes.
/// Branches with no decision left (e.g. a dealer play-out) are not expanded.
pub fn count_info_sets<G: Game + Eq + Hash>(params: &G::Params, limit: usize) -> Result<Census> {
    let root = G::enumeration_root(params).ok_or(Error::GameTooLarge { limit })?;
    let n = root.num_players();
    let mut seen: HashSet<G> = HashSet::new();
    let mut keys: HashMap<InfoSetKey, usize> = HashMap::new();
    let mut decision_states = 0usize;
    let mut stack = vec![root];
    while let Some(game) = stack.pop() {
        if seen.contains(&game) {
            continue;
        }
        if seen.len() >= limit {
            return Err(Error::GameTooLarge { limit });
        }
        match game.node() {
            Node::Terminal => {}
            _ if !game.decisions_remaining() => {}
            Node::Chance => {
                stack.extend(game.chance_outcomes().into_iter().map(|(g, _)| g));
            }
            Node::Decision(seat) => {
                decision_states += 1;
                *keys.entry(InfoSetKey::new(seat, &game.raw_view(seat))).or_default() += 1;
                for a in game.legal_actions() {
                    let mut child = game.clone();
                    let mv = child.decode_action(a)?;
                    child.apply(&mv)?;
                    stack.push(child);
                }
            }
        }
        seen.insert(game);
    }
    let mut per_player = vec![0; n];
    for key in keys.keys() {
        let seat: usize = key
            .as_str()
            .split('|')
            .next()
            .and_then(|s| s.parse().ok())
            .expect("info-set keys start with the seat");
        per_player[seat] += 1;
    }
    let info_sets = keys.len();
    Ok(Census {
        per_player,
        info_sets,
        decision_states,
        avg_states_per_info_set: if info_sets == 0 { 0.0 } else { decision_states as f64 / info_sets as f64 },
        num_actions: G::num_actions(params),
    })
}
