use thiserror::Error;

use crate::game::{ActionId, Seat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("insufficient cards: requested {requested}, {available} remaining")]
    InsufficientCards { requested: usize, available: usize },
    #[error("unknown game `{0}`")]
    UnknownGame(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("illegal action {0}")]
    IllegalAction(ActionId),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("the game is over")]
    GameOver,
    #[error("the game is not over")]
    GameNotOver,
    #[error("agents have not been set for every seat")]
    AgentsNotSet,
    #[error("environment is not in single-agent mode")]
    NotSingleAgentMode,
    #[error("duplicate card {0}")]
    DuplicateCard(String),
    #[error("no concrete move for action {0}")]
    NoConcreteMove(ActionId),
    #[error("game too large: more than {limit} nodes")]
    GameTooLarge { limit: usize },
    #[error("game is not two-player zero-sum")]
    NotZeroSum,
    #[error("expected {expected} agents, got {got}")]
    SeatMismatch { expected: usize, got: usize },
    #[error("worker failed on game {game}: {message}")]
    WorkerFailure { game: usize, message: String },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("seat {0} out of range")]
    InvalidSeat(Seat),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
