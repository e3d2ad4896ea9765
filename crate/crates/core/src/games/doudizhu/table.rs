//! The 309-entry abstract action table.
//!
//! An abstract action keeps only the major part of a move (category,
//! lowest primal rank, chain length); kickers are dropped. Ids run family
//! by family in [`Category::ALL`] order, chains by length then start rank,
//! and pass is the last id:
//!
//! | family        | lengths | entries |
//! |---------------|---------|---------|
//! | solo          |         | 15      |
//! | pair, trio, trio_solo, trio_pair | | 13 each |
//! | solo_chain    | 5..=12  | 36      |
//! | pair_chain    | 3..=10  | 52      |
//! | plane         | 2..=6   | 45      |
//! | plane_solo    | 2..=5   | 38      |
//! | plane_pair    | 2..=4   | 30      |
//! | quad_two_solo, quad_two_pair, bomb | | 13 each |
//! | rocket        |         | 1       |
//! | pass          |         | 1       |

use std::sync::OnceLock;

use super::pattern::{Category, DdMove, BLACK_JOKER, NUM_RANKS};
use crate::game::ActionId;

pub const NUM_ACTIONS: usize = 309;
pub const PASS_ID: ActionId = NUM_ACTIONS - 1;

const MAX_LEN: usize = 13;
const NONE: u16 = u16::MAX;

pub struct ActionTable {
    entries: Vec<DdMove>,
    /// Dense index over (category, primal, length).
    index: Vec<u16>,
}

fn slot(category: Category, primal: u8, length: u8) -> usize {
    (category as usize * NUM_RANKS + primal as usize) * MAX_LEN + length as usize
}

impl ActionTable {
    fn build() -> ActionTable {
        let mut entries = Vec::with_capacity(NUM_ACTIONS);
        for cat in Category::ALL {
            match cat {
                Category::Pass => entries.push(DdMove::PASS),
                Category::Rocket => entries.push(DdMove::plain(Category::Rocket, BLACK_JOKER, 1)),
                _ => {
                    for length in cat.lengths() {
                        for primal in 0..=(cat.max_rank() + 1 - length) {
                            entries.push(DdMove::plain(cat, primal, length));
                        }
                    }
                }
            }
        }
        assert_eq!(entries.len(), NUM_ACTIONS, "abstract action table size");
        let mut index = vec![NONE; Category::ALL.len() * NUM_RANKS * MAX_LEN];
        for (id, e) in entries.iter().enumerate() {
            let s = slot(e.category, e.primal, e.length);
            assert_eq!(index[s], NONE, "duplicate table entry");
            index[s] = id as u16;
        }
        ActionTable { entries, index }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The kicker-free major part behind `id`.
    pub fn entry(&self, id: ActionId) -> Option<DdMove> {
        self.entries.get(id).copied()
    }

    pub fn entries(&self) -> &[DdMove] {
        &self.entries
    }

    /// Id of the abstract action covering `mv`.
    pub fn id_of(&self, mv: &DdMove) -> ActionId {
        let id = self.index[slot(mv.category, mv.primal, mv.length)];
        assert_ne!(id, NONE, "move outside the table: {mv:?}");
        id as ActionId
    }
}

pub fn table() -> &'static ActionTable {
    static TABLE: OnceLock<ActionTable> = OnceLock::new();
    TABLE.get_or_init(ActionTable::build)
}

/// Abstract action id of a concrete move: kickers are dropped.
pub fn dd_abstract(mv: &DdMove) -> ActionId {
    if mv.is_pass() {
        PASS_ID
    } else {
        table().id_of(mv)
    }
}
