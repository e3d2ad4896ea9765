use std::fmt::{self, Write as _};
use std::io::{self, Write};

use crate::game::{ActionId, Seat};
use crate::games::blackjack::BlackjackView;
use crate::games::doudizhu::DoudizhuView;
use crate::games::leduc::LeducView;
use crate::games::limit::LimitView;
use crate::games::uno::UnoView;

/// Dense feature tensor in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Planes {
    pub shape: Vec<usize>,
    pub data: Vec<f32>,
}

impl Planes {
    pub fn zeros(shape: &[usize]) -> Planes {
        Planes {
            shape: shape.to_vec(),
            data: vec![0.0; shape.iter().product()],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<f32>) -> Planes {
        assert_eq!(shape.iter().product::<usize>(), data.len(), "plane shape mismatch");
        Planes {
            shape: shape.to_vec(),
            data,
        }
    }

    /// Flat offset of a multi-index.
    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.shape.len());
        index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &dim)| acc * dim + i)
    }

    pub fn get(&self, index: &[usize]) -> f32 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], v: f32) {
        let o = self.offset(index);
        self.data[o] = v;
    }

    pub fn sum(&self) -> f32 {
        self.data.iter().sum()
    }
}

/// Structured, game-specific view of what one seat observes.
#[derive(Debug, Clone, PartialEq)]
pub enum RawView {
    Blackjack(BlackjackView),
    Leduc(LeducView),
    Limit(LimitView),
    Uno(UnoView),
    Doudizhu(DoudizhuView),
}

impl RawView {
    /// Canonical text of the view; equal views give equal strings.
    pub fn canonical(&self) -> String {
        match self {
            RawView::Blackjack(v) => v.canonical(),
            RawView::Leduc(v) => v.canonical(),
            RawView::Limit(v) => v.canonical(),
            RawView::Uno(v) => v.canonical(),
            RawView::Doudizhu(v) => v.canonical(),
        }
    }
}

impl fmt::Display for RawView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Identifier of an information set: the seat plus the canonical raw view.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoSetKey(String);

impl InfoSetKey {
    pub fn new(player: Seat, raw: &RawView) -> InfoSetKey {
        InfoSetKey(format!("{player}|{}", raw.canonical()))
    }

    /// Wraps an existing canonical string (e.g. read from a policy file).
    pub fn from_string(s: String) -> InfoSetKey {
        InfoSetKey(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for InfoSetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub player: Seat,
    pub legal_actions: Vec<ActionId>,
    pub planes: Planes,
    pub raw: RawView,
}

impl Observation {
    pub fn info_key(&self) -> InfoSetKey {
        InfoSetKey::new(self.player, &self.raw)
    }

    /// FNV-1a (64-bit) over the seat, legal ids, raw view and plane bits.
    pub fn state_hash(&self) -> u64 {
        let mut text = String::with_capacity(64);
        let _ = write!(text, "{};", self.player);
        for a in &self.legal_actions {
            let _ = write!(text, "{a},");
        }
        text.push(';');
        text.push_str(&self.raw.canonical());
        text.push(';');
        let mut h = fnv1a(FNV_OFFSET, text.as_bytes());
        for d in &self.planes.shape {
            h = fnv1a(h, &(*d as u64).to_le_bytes());
        }
        for x in &self.planes.data {
            h = fnv1a(h, &x.to_bits().to_le_bytes());
        }
        h
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// What follows a transition: the player's next observation, or the end.
#[derive(Debug, Clone, PartialEq)]
pub enum NextState {
    State(Observation),
    /// Terminal marker with the final view of the acting seat.
    Terminal(RawView),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: Observation,
    pub action: ActionId,
    pub reward: f64,
    pub next_state: NextState,
    pub done: bool,
    /// Index of the decision (over all seats) at which `state` was observed.
    pub step_index: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub player: Seat,
    pub transitions: Vec<Transition>,
}

impl Trajectory {
    pub fn new(player: Seat) -> Trajectory {
        Trajectory {
            player,
            transitions: Vec::new(),
        }
    }

    pub fn total_reward(&self) -> f64 {
        self.transitions.iter().map(|t| t.reward).sum()
    }
}

/// Writes one game's trajectories as line records:
///
/// `game_id,seed,player,step_index,state_hash,action,reward,done`
///
/// Players appear in seat order and transitions in play order. `state_hash`
/// is [`Observation::state_hash`] as 16 lowercase hex digits, `reward` uses
/// Rust's shortest round-trip float formatting and `done` is `0` or `1`.
pub fn write_trajectories<W: Write>(
    out: &mut W,
    game_id: &str,
    seed: u64,
    trajectories: &[Trajectory],
) -> io::Result<()> {
    for traj in trajectories {
        for t in &traj.transitions {
            writeln!(
                out,
                "{},{},{},{},{:016x},{},{},{}",
                game_id,
                seed,
                traj.player,
                t.step_index,
                t.state.state_hash(),
                t.action,
                t.reward,
                t.done as u8
            )?;
        }
    }
    Ok(())
}
