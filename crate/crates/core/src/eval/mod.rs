//! Evaluation: tournaments, exact best responses and info-set census.

mod best_response;
mod census;
mod tournament;
mod tree;

pub use best_response::{
    best_response, best_response_by_posteriors, exploitability, BestResponse, ExploitabilityReport, Units,
};
pub use census::{count_info_sets, Census};
pub use tournament::{
    tournament, tournament_with_workers, winrate_vs_random, SeatBlock, TournamentResult, VsRandom, SEAT_SCHEME,
};
pub use tree::{GameTree, InfoSet, TreeNode, DEFAULT_NODE_LIMIT};
