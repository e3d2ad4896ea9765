//! Dou Dizhu for three players, with a 28-card mini variant.
//!
//! The full game deals 17 cards to each seat and gives the 3 reserved cards
//! to the landlord (20/17/17). The mini variant keeps ranks 8 through A,
//! deals 9 each and gives the single reserved card to the landlord
//! (10/9/9). There is no bidding: the landlord is seat 0 unless the
//! `landlord` parameter picks another seat or `random`.
//!
//! The landlord leads. A trick ends after two consecutive passes, and its
//! last non-pass player leads the next one. The side of whoever empties a
//! hand first scores 1 per member, the other side 0.
//!
//! Actions use the 309-entry abstraction of [`table`]; kickers are filled
//! in by [`dd_decode`].

pub mod moves;
pub mod pattern;
pub mod table;

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use moves::{dd_decode, dd_legal_actions, dd_legal_moves};
pub use pattern::{counts_literal, parse_all, parse_counts, Category, Counts, DdMove, NUM_RANKS};
pub use table::{dd_abstract, table, NUM_ACTIONS, PASS_ID};

use crate::card::{Card, Deck, DeckKind};
use crate::env::{Planes, RawView};
use crate::error::{Error, Result};
use crate::game::{check_param_keys, ActionId, Game, Judger, Node, Player, Round, Seat};
use crate::rng::Rng;

/// Planes of the observation: own hand, the other two hands combined, the
/// three most recent moves (newest first) and all played cards.
pub const NUM_PLANES: usize = 6;
/// One-hot rows for counts 0 through 4.
pub const COUNT_ROWS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DoudizhuVariant {
    #[default]
    Full,
    Mini,
}

impl DoudizhuVariant {
    pub fn deck_kind(self) -> DeckKind {
        match self {
            DoudizhuVariant::Full => DeckKind::Doudizhu54,
            DoudizhuVariant::Mini => DeckKind::MiniDoudizhu,
        }
    }

    pub fn hand_size(self) -> usize {
        match self {
            DoudizhuVariant::Full => 17,
            DoudizhuVariant::Mini => 9,
        }
    }

    /// Rank counts of the whole deck.
    pub fn deck_counts(self) -> Counts {
        counts_of(Deck::new(self.deck_kind()).cards())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LandlordRule {
    #[default]
    Seat0,
    Fixed(Seat),
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DoudizhuParams {
    pub variant: DoudizhuVariant,
    pub landlord: LandlordRule,
}

/// Rank index of a card in `3456789TJQKA2BR` order.
pub fn dd_rank(card: Card) -> u8 {
    if card.is_joker() {
        pattern::BLACK_JOKER + card.rank()
    } else {
        (card.rank() + 12) % 13
    }
}

pub fn counts_of(cards: &[Card]) -> Counts {
    let mut c = [0u8; NUM_RANKS];
    for &card in cards {
        c[dd_rank(card) as usize] += 1;
    }
    c
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoudizhuPlayer {
    pub seat: Seat,
    pub hand: Counts,
}

impl Player for DoudizhuPlayer {
    fn seat(&self) -> Seat {
        self.seat
    }
    fn hand_len(&self) -> usize {
        pattern::total(&self.hand)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoudizhuGame {
    variant: DoudizhuVariant,
    players: [DoudizhuPlayer; 3],
    landlord: Seat,
    reserved: Counts,
    current: Seat,
    /// Last non-pass move of the running trick.
    last: Option<(Seat, DdMove)>,
    passes: u8,
    played: Counts,
    history: Vec<(Seat, DdMove)>,
    winner: Option<Seat>,
}

/// One seat's view. Other hands are summarised by their sizes; the full
/// move history keeps recall perfect.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoudizhuView {
    pub seat: Seat,
    pub landlord: Seat,
    pub hand: Counts,
    pub reserved: Counts,
    pub hand_sizes: [usize; 3],
    pub played: Counts,
    pub history: Vec<(Seat, DdMove)>,
    pub to_beat: Option<(Seat, DdMove)>,
    pub winner: Option<Seat>,
}

impl DoudizhuView {
    pub fn canonical(&self) -> String {
        let mut s = String::with_capacity(96);
        let _ = write!(
            s,
            "s={};l={};h={};r={};n={},{},{};m=",
            self.seat,
            self.landlord,
            counts_literal(&self.hand),
            counts_literal(&self.reserved),
            self.hand_sizes[0],
            self.hand_sizes[1],
            self.hand_sizes[2]
        );
        for (i, (seat, mv)) in self.history.iter().enumerate() {
            if i > 0 {
                s.push('/');
            }
            let _ = write!(s, "{seat}:{mv}");
        }
        if let Some(w) = self.winner {
            let _ = write!(s, ";w={w}");
        }
        s
    }
}

impl DoudizhuGame {
    pub fn variant(&self) -> DoudizhuVariant {
        self.variant
    }
    pub fn landlord(&self) -> Seat {
        self.landlord
    }
    pub fn players(&self) -> &[DoudizhuPlayer; 3] {
        &self.players
    }
    pub fn hand(&self, seat: Seat) -> &Counts {
        &self.players[seat].hand
    }
    pub fn played(&self) -> &Counts {
        &self.played
    }
    pub fn history(&self) -> &[(Seat, DdMove)] {
        &self.history
    }
    pub fn winner(&self) -> Option<Seat> {
        self.winner
    }
    pub fn consecutive_passes(&self) -> u8 {
        self.passes
    }

    /// The move the current player must beat, if any.
    pub fn to_beat(&self) -> Option<&DdMove> {
        self.last.as_ref().map(|(_, m)| m)
    }

    /// Seat that played the move to beat.
    pub fn trick_leader(&self) -> Option<Seat> {
        self.last.map(|(s, _)| s)
    }

    /// Builds a game from explicit hands; `hands[landlord]` already holds
    /// the reserved cards.
    pub fn from_hands(variant: DoudizhuVariant, hands: [Counts; 3], landlord: Seat, reserved: Counts) -> Self {
        DoudizhuGame {
            variant,
            players: [0, 1, 2].map(|seat| DoudizhuPlayer { seat, hand: hands[seat] }),
            landlord,
            reserved,
            current: landlord,
            last: None,
            passes: 0,
            played: [0; NUM_RANKS],
            history: Vec::new(),
            winner: None,
        }
    }

    /// Cards held by the other two seats, combined.
    pub fn others(&self, seat: Seat) -> Counts {
        let mut c = [0u8; NUM_RANKS];
        for p in self.players.iter().filter(|p| p.seat != seat) {
            for (r, n) in p.hand.iter().enumerate() {
                c[r] += n;
            }
        }
        c
    }
}

impl Round for DoudizhuGame {
    /// True right after two consecutive passes (and at the opening lead).
    fn is_closed(&self) -> bool {
        self.last.is_none()
    }
}

pub struct DoudizhuJudger;

impl Judger for DoudizhuJudger {
    type State = DoudizhuGame;
    type Move = DdMove;

    fn legal_moves(state: &DoudizhuGame) -> Vec<DdMove> {
        if state.winner.is_some() {
            return Vec::new();
        }
        dd_legal_moves(&state.players[state.current].hand, state.to_beat())
    }

    fn payoffs(state: &DoudizhuGame) -> Option<Vec<f64>> {
        let w = state.winner?;
        let landlord_won = w == state.landlord;
        Some(
            (0..3)
                .map(|s| {
                    let on_winning_side = (s == state.landlord) == landlord_won;
                    if on_winning_side {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect(),
        )
    }
}

fn count_planes(planes: &mut Planes, plane: usize, counts: &Counts) {
    for (r, &n) in counts.iter().enumerate() {
        planes.set(&[plane, n as usize, r], 1.0);
    }
}

impl Game for DoudizhuGame {
    type Move = DdMove;
    type Params = DoudizhuParams;
    type Judger = DoudizhuJudger;

    fn parse_params(num_players: Option<usize>, params: &BTreeMap<String, String>) -> Result<DoudizhuParams> {
        crate::game::fixed_players(num_players, 3)?;
        check_param_keys(params, &["variant", "landlord"])?;
        let variant = match params.get("variant").map(String::as_str) {
            None | Some("full") => DoudizhuVariant::Full,
            Some("mini") => DoudizhuVariant::Mini,
            Some(v) => return Err(Error::InvalidParam(format!("variant={v}"))),
        };
        let landlord = match params.get("landlord").map(String::as_str) {
            None => LandlordRule::Seat0,
            Some("random") => LandlordRule::Random,
            Some(v) => match v.parse::<Seat>() {
                Ok(s) if s < 3 => LandlordRule::Fixed(s),
                _ => return Err(Error::InvalidParam(format!("landlord={v}"))),
            },
        };
        Ok(DoudizhuParams { variant, landlord })
    }

    fn num_actions(_: &DoudizhuParams) -> usize {
        NUM_ACTIONS
    }

    fn plane_shape(_: &DoudizhuParams) -> Vec<usize> {
        vec![NUM_PLANES, COUNT_ROWS, NUM_RANKS]
    }

    fn new_game(params: &DoudizhuParams, rng: &mut Rng) -> Self {
        let mut deck = Deck::new(params.variant.deck_kind());
        deck.shuffle(rng);
        let landlord = match params.landlord {
            LandlordRule::Seat0 => 0,
            LandlordRule::Fixed(s) => s,
            LandlordRule::Random => rng.below(3),
        };
        let n = params.variant.hand_size();
        let mut hands = [[0u8; NUM_RANKS]; 3];
        for h in &mut hands {
            *h = counts_of(&deck.deal(n).expect("enough cards"));
        }
        let reserved = counts_of(&deck.deal(deck.len()).expect("reserved cards"));
        for (r, c) in reserved.iter().enumerate() {
            hands[landlord][r] += c;
        }
        Self::from_hands(params.variant, hands, landlord, reserved)
    }

    fn num_players(&self) -> usize {
        3
    }

    fn node(&self) -> Node {
        if self.winner.is_some() {
            Node::Terminal
        } else {
            Node::Decision(self.current)
        }
    }

    fn resolve_chance(&mut self) {}

    fn legal_actions(&self) -> Vec<ActionId> {
        if self.winner.is_some() {
            return Vec::new();
        }
        dd_legal_actions(&self.players[self.current].hand, self.to_beat())
    }

    fn decode_action(&self, action: ActionId) -> Result<DdMove> {
        dd_decode(action, &self.players[self.current].hand, self.to_beat())
    }

    fn encode_move(&self, mv: &DdMove) -> ActionId {
        dd_abstract(mv)
    }

    fn apply(&mut self, mv: &DdMove) -> Result<()> {
        if self.winner.is_some() {
            return Err(Error::GameOver);
        }
        let me = self.current;
        if mv.is_pass() {
            if self.last.is_none() {
                return Err(Error::IllegalMove("cannot pass when leading".into()));
            }
            self.passes += 1;
            if self.passes == 2 {
                self.last = None;
                self.passes = 0;
            }
        } else {
            let cards = mv.cards();
            if !pattern::contains(&self.players[me].hand, &cards) {
                return Err(Error::IllegalMove(format!("{mv} is not in hand")));
            }
            if !parse_all(&cards).contains(mv) {
                return Err(Error::IllegalMove(format!("{mv} is not a valid combination")));
            }
            if let Some(t) = self.to_beat() {
                if !mv.beats(t) {
                    return Err(Error::IllegalMove(format!("{mv} does not beat {t}")));
                }
            }
            for (r, &n) in cards.iter().enumerate() {
                self.players[me].hand[r] -= n;
                self.played[r] += n;
            }
            self.last = Some((me, *mv));
            self.passes = 0;
            if pattern::total(&self.players[me].hand) == 0 {
                self.winner = Some(me);
            }
        }
        self.history.push((me, *mv));
        if self.winner.is_none() {
            self.current = (me + 1) % 3;
        }
        Ok(())
    }

    fn raw_view(&self, seat: Seat) -> RawView {
        RawView::Doudizhu(DoudizhuView {
            seat,
            landlord: self.landlord,
            hand: self.players[seat].hand,
            reserved: self.reserved,
            hand_sizes: [0, 1, 2].map(|s| pattern::total(&self.players[s].hand)),
            played: self.played,
            history: self.history.clone(),
            to_beat: self.last,
            winner: self.winner,
        })
    }

    /// `[6, 5, 15]`: for each plane, column `r` has a single 1 in the row
    /// equal to the count of rank `r`.
    fn planes(&self, seat: Seat) -> Planes {
        let mut planes = Planes::zeros(&[NUM_PLANES, COUNT_ROWS, NUM_RANKS]);
        count_planes(&mut planes, 0, &self.players[seat].hand);
        count_planes(&mut planes, 1, &self.others(seat));
        for k in 0..3 {
            let counts = self
                .history
                .iter()
                .rev()
                .nth(k)
                .map_or([0u8; NUM_RANKS], |(_, m)| if m.is_pass() { [0; NUM_RANKS] } else { m.cards() });
            count_planes(&mut planes, 2 + k, &counts);
        }
        count_planes(&mut planes, 5, &self.played);
        planes
    }
}
