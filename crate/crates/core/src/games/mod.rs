//! Concrete game engines.

pub mod blackjack;
pub mod doudizhu;
pub mod hand_eval;
pub mod leduc;
pub mod limit;
pub mod uno;

pub use blackjack::{blackjack_score, BlackjackGame, BlackjackMove};
pub use doudizhu::{DoudizhuGame, DoudizhuVariant};
pub use hand_eval::{evaluate_seven, HandCategory, HandRank};
pub use leduc::{LeducGame, LeducMove};
pub use limit::{LimitGame, LimitParams};
pub use uno::{uno_playable, UnoGame, UnoMove};

/// Betting action ids shared by Leduc and Limit Hold'em.
pub mod bet {
    use crate::game::ActionId;

    pub const CALL: ActionId = 0;
    pub const RAISE: ActionId = 1;
    pub const FOLD: ActionId = 2;
    pub const CHECK: ActionId = 3;
    pub const NUM_ACTIONS: usize = 4;
}

/// A betting move in Leduc or Limit Hold'em.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BetMove {
    Call,
    Raise,
    Fold,
    Check,
}

impl BetMove {
    pub fn id(self) -> crate::game::ActionId {
        match self {
            BetMove::Call => bet::CALL,
            BetMove::Raise => bet::RAISE,
            BetMove::Fold => bet::FOLD,
            BetMove::Check => bet::CHECK,
        }
    }

    pub fn from_id(id: crate::game::ActionId) -> Option<BetMove> {
        match id {
            bet::CALL => Some(BetMove::Call),
            bet::RAISE => Some(BetMove::Raise),
            bet::FOLD => Some(BetMove::Fold),
            bet::CHECK => Some(BetMove::Check),
            _ => None,
        }
    }

    /// One-letter code used in history strings.
    pub fn code(self) -> char {
        match self {
            BetMove::Call => 'c',
            BetMove::Raise => 'r',
            BetMove::Fold => 'f',
            BetMove::Check => 'k',
        }
    }
}

impl std::fmt::Display for BetMove {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BetMove::Call => "call",
            BetMove::Raise => "raise",
            BetMove::Fold => "fold",
            BetMove::Check => "check",
        })
    }
}
