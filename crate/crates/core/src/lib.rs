//! Deterministic card-game environments for imperfect-information research.
//!
//! The crate bundles five game engines (Blackjack, Leduc Hold'em, Limit Texas
//! Hold'em, UNO and Dou Dizhu with its 28-card mini variant) behind a uniform
//! [`env::Env`] wrapper, plus tabular solvers, an evaluation harness and a
//! multi-worker rollout driver.
//!
//! Numeric solver code is generic over a [`Scalar`]; the aliases at the crate
//! root pin the common `f64` instantiations.
//!
//! ```
//! use cardtable::env::{make, EnvConfig, GameId};
//! use cardtable::agents::RandomAgent;
//! use std::sync::Arc;
//!
//! let mut env = make(&EnvConfig::new(GameId::Leduc, 7)).unwrap();
//! env.set_agents(vec![Arc::new(RandomAgent), Arc::new(RandomAgent)]).unwrap();
//! let (trajectories, payoffs) = env.run(false).unwrap();
//! assert_eq!(trajectories.len(), 2);
//! assert_eq!(payoffs[0] + payoffs[1], 0.0);
//! ```

pub mod agents;
pub mod card;
pub mod cli;
pub mod env;
pub mod error;
pub mod eval;
pub mod game;
pub mod games;
pub mod num;
pub mod parallel;
pub mod rng;

pub use card::{Card, CardFamily, Deck, DeckKind};
pub use error::{Error, Result};
pub use game::{ActionId, Game, Node, Seat};
pub use num::Scalar;
pub use rng::Rng;

/// Average-strategy table over `f64` probabilities.
pub type Policy = agents::PolicyTable<f64>;
/// Single-precision policy table.
pub type PolicyF32 = agents::PolicyTable<f32>;
/// Vanilla CFR solver over `f64`.
pub type Cfr = agents::CfrSolver<f64>;
/// External-sampling MCCFR solver over `f64`.
pub type Mccfr = agents::ExternalSamplingMccfr<f64>;
/// Tabular action values over `f64`.
pub type QTable = agents::QTable<f64>;
/// Compiled extensive-form tree over `f64`.
pub type Tree = eval::GameTree<f64>;

/// Toolkit version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
