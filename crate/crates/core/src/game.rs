//! Engine contracts shared by every concrete game.
//!
//! A game is assembled from five roles: [`Player`] (a seat and its hand),
//! [`Dealer`] (deck management), [`Round`] (progression inside one betting
//! round, trick or turn cycle), [`Judger`] (legal moves and payoffs) and the
//! [`Game`] state machine tying them together. Engines are plain values:
//! cloning a game snapshots everything, including the undealt deck.
//!
//! Chance events (card deals) are explicit nodes. An environment resolves
//! them by dealing from the engine's own shuffled deck; exhaustive solvers
//! enumerate them through [`Game::chance_outcomes`] on a root built by
//! [`Game::enumeration_root`].

use std::collections::BTreeMap;
use std::fmt;

use crate::card::Card;
use crate::env::{Planes, RawView};
use crate::error::{Error, Result};
use crate::rng::Rng;

pub type Seat = usize;
pub type ActionId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Chance,
    Decision(Seat),
    Terminal,
}

pub trait Player {
    fn seat(&self) -> Seat;
    fn hand_len(&self) -> usize;
}

pub trait Dealer {
    fn remaining(&self) -> usize;
    fn deal_card(&mut self) -> Option<Card>;
}

pub trait Round {
    /// True once no further action is owed in this round.
    fn is_closed(&self) -> bool;
}

pub trait Judger {
    type State;
    type Move;

    fn legal_moves(state: &Self::State) -> Vec<Self::Move>;
    /// Payoffs per seat, or `None` while the game is still running.
    fn payoffs(state: &Self::State) -> Option<Vec<f64>>;
}

pub trait Game: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Move: Clone + fmt::Debug + PartialEq + fmt::Display + Send;
    type Params: Clone + fmt::Debug + PartialEq + Default + Send + Sync;
    type Judger: Judger<State = Self, Move = Self::Move>;

    /// Validates the player count and `key=value` game parameters.
    fn parse_params(
        num_players: Option<usize>,
        params: &BTreeMap<String, String>,
    ) -> Result<Self::Params>;

    fn num_actions(params: &Self::Params) -> usize;
    fn plane_shape(params: &Self::Params) -> Vec<usize>;

    /// Fresh game with a deck shuffled by `rng`. May start at a chance node.
    fn new_game(params: &Self::Params, rng: &mut Rng) -> Self;

    /// Root with an unshuffled deck for exhaustive walks, when supported.
    fn enumeration_root(_params: &Self::Params) -> Option<Self> {
        None
    }

    fn num_players(&self) -> usize;
    fn node(&self) -> Node;

    /// Resolves a pending chance event from the top of the engine's deck.
    fn resolve_chance(&mut self);

    /// Every outcome of the pending chance event with its probability.
    /// Outcomes that are strategically identical may be merged.
    fn chance_outcomes(&self) -> Vec<(Self, f64)> {
        Vec::new()
    }

    fn legal_moves(&self) -> Vec<Self::Move> {
        <Self::Judger as Judger>::legal_moves(self)
    }

    /// Sorted, deduplicated action ids legal at the current decision node.
    fn legal_actions(&self) -> Vec<ActionId>;

    fn decode_action(&self, action: ActionId) -> Result<Self::Move>;
    fn encode_move(&self, mv: &Self::Move) -> ActionId;

    fn apply(&mut self, mv: &Self::Move) -> Result<()>;

    fn payoffs(&self) -> Result<Vec<f64>> {
        <Self::Judger as Judger>::payoffs(self).ok_or(Error::GameNotOver)
    }

    fn raw_view(&self, seat: Seat) -> RawView;
    fn planes(&self, seat: Seat) -> Planes;

    fn is_over(&self) -> bool {
        self.node() == Node::Terminal
    }

    fn current_player(&self) -> Option<Seat> {
        match self.node() {
            Node::Decision(s) => Some(s),
            _ => None,
        }
    }

    /// False once no decision node can follow (e.g. the dealer is drawing).
    fn decisions_remaining(&self) -> bool {
        !self.is_over()
    }

    /// Deals until the next decision or terminal node.
    fn settle_chance(&mut self) {
        while self.node() == Node::Chance {
            self.resolve_chance();
        }
    }
}

/// Reads an optional numeric parameter.
pub(crate) fn param<T: std::str::FromStr>(
    params: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    match params.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::InvalidParam(format!("{key}={v}"))),
    }
}

/// Rejects parameters outside `allowed`.
pub(crate) fn check_param_keys(params: &BTreeMap<String, String>, allowed: &[&str]) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::InvalidParam(format!("unknown parameter `{k}`"))),
        None => Ok(()),
    }
}

pub(crate) fn fixed_players(num_players: Option<usize>, n: usize) -> Result<()> {
    match num_players {
        Some(p) if p != n => Err(Error::InvalidParam(format!(
            "num_players={p}, this game seats exactly {n}"
        ))),
        _ => Ok(()),
    }
}
