//! UNO for 2 to 10 players.
//!
//! Seven cards each; the first discard is flipped from the pile (wilds go
//! to the bottom and the flip repeats) and has no effect. A card is playable
//! on a matching color or symbol, and wilds always are. A player holding no
//! playable card must draw one; if the drawn card is playable they may play
//! it at once or pass. Skip skips the next player, reverse flips direction
//! (and acts as a skip with two players), draw-two and wild-draw-four make
//! the next player draw and lose their turn. When the draw pile runs out
//! the discards under the top card are reshuffled with the game's own Rng.
//!
//! The first player to empty their hand scores 1, everyone else 0.
//!
//! Action ids: `color * 15 + symbol` for colored cards, `color * 15 + 13`
//! and `color * 15 + 14` for a wild and a wild-draw-four declaring `color`,
//! 60 for draw and 61 for pass.

use std::collections::BTreeMap;
use std::fmt;

use crate::card::{uno_symbol_literal, Card, Deck, DeckKind, UNO_COLORS, UNO_DRAW_TWO, UNO_REVERSE, UNO_SKIP, UNO_WILD, UNO_WILD_COLOR, UNO_WILD_DRAW_FOUR};
use crate::env::{Planes, RawView};
use crate::error::{Error, Result};
use crate::game::{check_param_keys, ActionId, Dealer, Game, Judger, Node, Player, Round, Seat};
use crate::rng::Rng;

pub const DRAW: ActionId = 60;
pub const PASS: ActionId = 61;
pub const NUM_ACTIONS: usize = 62;
pub const HAND_SIZE: usize = 7;
pub const MAX_PLAYERS: usize = 10;

/// The card to match: its symbol and the color in force (declared for wilds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnoTarget {
    pub color: u8,
    pub symbol: u8,
}

/// True when `card` may be played on `top`.
pub fn uno_playable(card: Card, top: UnoTarget) -> bool {
    card.suit() == UNO_WILD_COLOR || card.suit() == top.color || card.rank() == top.symbol
}

fn is_wild(card: Card) -> bool {
    card.suit() == UNO_WILD_COLOR
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnoMove {
    /// Play `card`; `declared` is the chosen color for wilds.
    Play { card: Card, declared: Option<u8> },
    Draw,
    Pass,
}

impl fmt::Display for UnoMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnoMove::Play { card, declared } => {
                write!(f, "{card}")?;
                if let Some(c) = declared {
                    write!(f, "+{}", UNO_COLORS[*c as usize] as char)?;
                }
                Ok(())
            }
            UnoMove::Draw => f.write_str("draw"),
            UnoMove::Pass => f.write_str("pass"),
        }
    }
}

fn play_id(card: Card, declared: Option<u8>) -> ActionId {
    let color = if is_wild(card) {
        declared.expect("wild needs a color")
    } else {
        card.suit()
    };
    color as ActionId * 15 + card.rank() as ActionId
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnoPlayer {
    pub seat: Seat,
    /// Sorted by card id.
    pub hand: Vec<Card>,
}

impl Player for UnoPlayer {
    fn seat(&self) -> Seat {
        self.seat
    }
    fn hand_len(&self) -> usize {
        self.hand.len()
    }
}

impl UnoPlayer {
    fn add(&mut self, card: Card) {
        let at = self.hand.partition_point(|c| c.id() < card.id());
        self.hand.insert(at, card);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnoGame {
    players: Vec<UnoPlayer>,
    pile: Deck,
    discard: Vec<Card>,
    target: UnoTarget,
    direction: i8,
    current: Seat,
    /// A playable card just drawn by the current player.
    drawn: Option<Card>,
    winner: Option<Seat>,
    rng: Rng,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnoParams {
    pub num_players: usize,
}

impl Default for UnoParams {
    fn default() -> Self {
        UnoParams { num_players: 2 }
    }
}

/// One seat's view: own hand, the target, hand sizes and turn state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnoView {
    pub seat: Seat,
    pub hand: Vec<Card>,
    pub target: UnoTarget,
    pub hand_sizes: Vec<usize>,
    pub direction: i8,
    pub current: Seat,
    pub drawn: Option<Card>,
    pub pile_len: usize,
    pub discard_len: usize,
    pub winner: Option<Seat>,
}

impl UnoView {
    pub fn canonical(&self) -> String {
        let hand: Vec<String> = self.hand.iter().map(|c| c.to_string()).collect();
        let sizes: Vec<String> = self.hand_sizes.iter().map(|n| n.to_string()).collect();
        let mut s = format!(
            "h={};t={}@{};n={};d={};c={};p={};x={}",
            hand.join(" "),
            uno_symbol_literal(if self.target.symbol >= UNO_WILD { UNO_WILD_COLOR } else { self.target.color }, self.target.symbol),
            UNO_COLORS[self.target.color as usize] as char,
            sizes.join(","),
            self.direction,
            self.current,
            self.pile_len,
            self.discard_len
        );
        if let Some(c) = self.drawn {
            s.push_str(&format!(";drawn={c}"));
        }
        if let Some(w) = self.winner {
            s.push_str(&format!(";w={w}"));
        }
        s
    }
}

impl UnoGame {
    pub fn players(&self) -> &[UnoPlayer] {
        &self.players
    }
    pub fn target(&self) -> UnoTarget {
        self.target
    }
    pub fn direction(&self) -> i8 {
        self.direction
    }
    pub fn pile(&self) -> &Deck {
        &self.pile
    }
    pub fn discard(&self) -> &[Card] {
        &self.discard
    }
    pub fn drawn(&self) -> Option<Card> {
        self.drawn
    }
    pub fn winner(&self) -> Option<Seat> {
        self.winner
    }

    /// Cards in hands, draw pile and discard pile.
    pub fn total_cards(&self) -> usize {
        self.players.iter().map(|p| p.hand.len()).sum::<usize>() + self.pile.len() + self.discard.len()
    }

    fn step_seat(&self, from: Seat, k: usize) -> Seat {
        let n = self.players.len() as i64;
        (from as i64 + self.direction as i64 * k as i64).rem_euclid(n) as Seat
    }

    /// Draws one card, reshuffling the discards under the top card when the
    /// pile is empty. `None` when no card is left anywhere.
    fn draw_card(&mut self) -> Option<Card> {
        if self.pile.is_empty() && self.discard.len() > 1 {
            let top = self.discard.pop().expect("top card");
            let mut rest = std::mem::replace(&mut self.discard, vec![top]);
            self.rng.shuffle(&mut rest);
            self.pile = Deck::from_cards(DeckKind::Uno108, rest);
        }
        self.pile.deal_card()
    }

    fn give(&mut self, seat: Seat, n: usize) {
        for _ in 0..n {
            match self.draw_card() {
                Some(c) => self.players[seat].add(c),
                None => break,
            }
        }
    }

    fn playable_moves(&self, cards: &[Card]) -> Vec<UnoMove> {
        let mut moves = Vec::new();
        for &card in cards.iter().filter(|&&c| uno_playable(c, self.target)) {
            if is_wild(card) {
                for color in 0..4 {
                    moves.push(UnoMove::Play {
                        card,
                        declared: Some(color),
                    });
                }
            } else {
                moves.push(UnoMove::Play { card, declared: None });
            }
        }
        moves
    }
}

impl Round for UnoGame {
    /// A turn stays open while a drawn card may still be played.
    fn is_closed(&self) -> bool {
        self.drawn.is_none()
    }
}

pub struct UnoJudger;

impl Judger for UnoJudger {
    type State = UnoGame;
    type Move = UnoMove;

    /// Every concrete legal move; copies of the same card all appear.
    fn legal_moves(state: &UnoGame) -> Vec<UnoMove> {
        if state.winner.is_some() {
            return Vec::new();
        }
        if let Some(card) = state.drawn {
            let mut moves = state.playable_moves(&[card]);
            moves.push(UnoMove::Pass);
            return moves;
        }
        let moves = state.playable_moves(&state.players[state.current].hand);
        if moves.is_empty() {
            vec![UnoMove::Draw]
        } else {
            moves
        }
    }

    fn payoffs(state: &UnoGame) -> Option<Vec<f64>> {
        let w = state.winner?;
        let mut p = vec![0.0; state.players.len()];
        p[w] = 1.0;
        Some(p)
    }
}

impl Game for UnoGame {
    type Move = UnoMove;
    type Params = UnoParams;
    type Judger = UnoJudger;

    fn parse_params(num_players: Option<usize>, params: &BTreeMap<String, String>) -> Result<UnoParams> {
        check_param_keys(params, &[])?;
        let n = num_players.unwrap_or(2);
        if !(2..=MAX_PLAYERS).contains(&n) {
            return Err(Error::InvalidParam(format!("num_players={n}, uno seats 2 to {MAX_PLAYERS}")));
        }
        Ok(UnoParams { num_players: n })
    }

    fn num_actions(_: &UnoParams) -> usize {
        NUM_ACTIONS
    }

    fn plane_shape(_: &UnoParams) -> Vec<usize> {
        vec![4, 5, 15]
    }

    fn new_game(params: &UnoParams, rng: &mut Rng) -> Self {
        let mut pile = Deck::new(DeckKind::Uno108);
        pile.shuffle(rng);
        let own_rng = Rng::new(rng.next_u64());
        let mut players: Vec<UnoPlayer> = (0..params.num_players)
            .map(|seat| UnoPlayer { seat, hand: Vec::new() })
            .collect();
        for p in &mut players {
            let mut hand = pile.deal(HAND_SIZE).expect("enough cards");
            hand.sort_unstable_by_key(|c| c.id());
            p.hand = hand;
        }
        let mut cards = pile.into_cards();
        let top = loop {
            let c = cards.pop().expect("a colored card remains");
            if is_wild(c) {
                cards.insert(0, c);
            } else {
                break c;
            }
        };
        UnoGame {
            players,
            pile: Deck::from_cards(DeckKind::Uno108, cards),
            discard: vec![top],
            target: UnoTarget {
                color: top.suit(),
                symbol: top.rank(),
            },
            direction: 1,
            current: 0,
            drawn: None,
            winner: None,
            rng: own_rng,
        }
    }

    fn num_players(&self) -> usize {
        self.players.len()
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
        let mut ids: Vec<ActionId> = self.legal_moves().iter().map(|m| self.encode_move(m)).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Plays the lowest-id copy in hand matching the action.
    fn decode_action(&self, action: ActionId) -> Result<UnoMove> {
        match action {
            DRAW => return Ok(UnoMove::Draw),
            PASS => return Ok(UnoMove::Pass),
            a if a >= NUM_ACTIONS => return Err(Error::IllegalAction(a)),
            _ => {}
        }
        let color = (action / 15) as u8;
        let symbol = (action % 15) as u8;
        let wild = symbol >= UNO_WILD;
        let candidates: &[Card] = match self.drawn {
            Some(ref c) => std::slice::from_ref(c),
            None => &self.players[self.current].hand,
        };
        candidates
            .iter()
            .find(|c| {
                if wild {
                    is_wild(**c) && c.rank() == symbol
                } else {
                    c.suit() == color && c.rank() == symbol
                }
            })
            .map(|&card| UnoMove::Play {
                card,
                declared: wild.then_some(color),
            })
            .ok_or(Error::IllegalAction(action))
    }

    fn encode_move(&self, mv: &UnoMove) -> ActionId {
        match *mv {
            UnoMove::Play { card, declared } => play_id(card, declared),
            UnoMove::Draw => DRAW,
            UnoMove::Pass => PASS,
        }
    }

    fn apply(&mut self, mv: &UnoMove) -> Result<()> {
        if !self.legal_moves().contains(mv) {
            return Err(Error::IllegalMove(format!("{mv} is not legal here")));
        }
        let me = self.current;
        match *mv {
            UnoMove::Draw => {
                match self.draw_card() {
                    Some(c) if uno_playable(c, self.target) => {
                        self.players[me].add(c);
                        self.drawn = Some(c);
                    }
                    Some(c) => {
                        self.players[me].add(c);
                        self.current = self.step_seat(me, 1);
                    }
                    None => self.current = self.step_seat(me, 1),
                }
            }
            UnoMove::Pass => {
                self.drawn = None;
                self.current = self.step_seat(me, 1);
            }
            UnoMove::Play { card, declared } => {
                self.drawn = None;
                let hand = &mut self.players[me].hand;
                let at = hand.iter().position(|&c| c == card).expect("card in hand");
                hand.remove(at);
                self.discard.push(card);
                self.target = UnoTarget {
                    color: declared.unwrap_or(card.suit()),
                    symbol: card.rank(),
                };
                if self.players[me].hand.is_empty() {
                    self.winner = Some(me);
                    return Ok(());
                }
                let two_players = self.players.len() == 2;
                self.current = match card.rank() {
                    UNO_SKIP => self.step_seat(me, 2),
                    UNO_REVERSE if two_players => me,
                    UNO_REVERSE => {
                        self.direction = -self.direction;
                        self.step_seat(me, 1)
                    }
                    UNO_DRAW_TWO | UNO_WILD_DRAW_FOUR => {
                        let victim = self.step_seat(me, 1);
                        self.give(victim, if card.rank() == UNO_DRAW_TWO { 2 } else { 4 });
                        self.step_seat(me, 2)
                    }
                    _ => self.step_seat(me, 1),
                };
            }
        }
        Ok(())
    }

    fn raw_view(&self, seat: Seat) -> RawView {
        RawView::Uno(UnoView {
            seat,
            hand: self.players[seat].hand.clone(),
            target: self.target,
            hand_sizes: self.players.iter().map(|p| p.hand.len()).collect(),
            direction: self.direction,
            current: self.current,
            drawn: if seat == self.current { self.drawn } else { None },
            pile_len: self.pile.len(),
            discard_len: self.discard.len(),
            winner: self.winner,
        })
    }

    /// `[4, 5, 15]` over (color row incl. wild, symbol column): own cards
    /// held at least once, own cards held twice or more, the target
    /// (declared color row for wilds), and cards in the discard pile.
    fn planes(&self, seat: Seat) -> Planes {
        let mut planes = Planes::zeros(&[4, 5, 15]);
        let mut counts = [[0u8; 15]; 5];
        for c in &self.players[seat].hand {
            counts[c.suit() as usize][c.rank() as usize] += 1;
        }
        for (row, cols) in counts.iter().enumerate() {
            for (col, &n) in cols.iter().enumerate() {
                if n >= 1 {
                    planes.set(&[0, row, col], 1.0);
                }
                if n >= 2 {
                    planes.set(&[1, row, col], 1.0);
                }
            }
        }
        planes.set(&[2, self.target.color as usize, self.target.symbol as usize], 1.0);
        for c in &self.discard {
            planes.set(&[3, c.suit() as usize, c.rank() as usize], 1.0);
        }
        planes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::CardFamily;

    fn card(s: &str) -> Card {
        Card::parse(CardFamily::Uno, s).unwrap()
    }

    /// Two-player game with fixed hands; pile cards are drawn from the end.
    fn rigged(hands: [&[&str]; 2], top: &str, pile: &[&str]) -> UnoGame {
        let mut g = UnoGame::new_game(&UnoParams::default(), &mut Rng::new(0));
        let mut all = Deck::new(DeckKind::Uno108).into_cards();
        let mut take = |lit: &str| {
            let want = card(lit);
            let at = all
                .iter()
                .position(|c| c.suit() == want.suit() && c.rank() == want.rank())
                .expect("card left");
            all.remove(at)
        };
        for (seat, h) in hands.iter().enumerate() {
            let mut cards: Vec<Card> = h.iter().map(|s| take(s)).collect();
            cards.sort_unstable_by_key(|c| c.id());
            g.players[seat].hand = cards;
        }
        let top = take(top);
        let mut pile_cards: Vec<Card> = pile.iter().map(|s| take(s)).collect();
        pile_cards.reverse();
        all.extend(pile_cards);
        g.pile = Deck::from_cards(DeckKind::Uno108, all);
        g.discard = vec![top];
        g.target = UnoTarget {
            color: top.suit(),
            symbol: top.rank(),
        };
        g
    }

    #[test]
    fn playability() {
        let red_skip = UnoTarget { color: 0, symbol: UNO_SKIP };
        let red_5 = UnoTarget { color: 0, symbol: 5 };
        assert!(uno_playable(card("r-5"), red_skip));
        assert!(!uno_playable(card("b-7"), red_5));
        assert!(uno_playable(card("b-5"), red_5));
        assert!(uno_playable(card("wild"), red_5));
        assert!(uno_playable(card("wild-d4"), red_skip));
    }

    #[test]
    fn reverse_with_two_players_repeats_the_turn() {
        let mut g = rigged([&["r-reverse", "g-3"], &["b-4", "b-5"]], "r-1", &[]);
        let a = g.encode_move(&UnoMove::Play {
            card: g.players[0].hand[0],
            declared: None,
        });
        g.apply(&g.decode_action(a).unwrap()).unwrap();
        assert_eq!(g.current_player(), Some(0));
        assert_eq!(g.total_cards(), 108);
    }

    #[test]
    fn wild_draw_four_feeds_the_next_player() {
        let mut g = rigged([&["wild-d4", "g-3"], &["b-4", "b-5"]], "r-1", &[]);
        let before = g.players[1].hand.len();
        let a = 2 * 15 + UNO_WILD_DRAW_FOUR as usize;
        assert!(g.legal_actions().contains(&a));
        g.apply(&g.decode_action(a).unwrap()).unwrap();
        assert_eq!(g.players[1].hand.len(), before + 4);
        assert_eq!(g.current_player(), Some(0));
        assert_eq!(g.target(), UnoTarget { color: 2, symbol: UNO_WILD_DRAW_FOUR });
        assert_eq!(g.total_cards(), 108);
    }

    #[test]
    fn drawn_playable_card_may_be_played_or_passed() {
        let g0 = rigged([&["g-3", "g-4"], &["b-4", "b-5"]], "r-1", &["r-9"]);
        assert_eq!(g0.legal_actions(), vec![DRAW]);
        let mut g = g0.clone();
        g.apply(&UnoMove::Draw).unwrap();
        assert_eq!(g.current_player(), Some(0));
        assert_eq!(g.legal_actions(), vec![9, PASS]);
        let mut played = g.clone();
        played.apply(&played.decode_action(9).unwrap()).unwrap();
        assert_eq!(played.current_player(), Some(1));
        assert_eq!(played.target().symbol, 9);
        g.apply(&UnoMove::Pass).unwrap();
        assert_eq!(g.current_player(), Some(1));
        assert_eq!(g.players[0].hand.len(), 3);
    }

    #[test]
    fn unplayable_draw_ends_the_turn() {
        let mut g = rigged([&["g-3", "g-4"], &["b-4", "b-5"]], "r-1", &["y-7"]);
        g.apply(&UnoMove::Draw).unwrap();
        assert_eq!(g.current_player(), Some(1));
        assert_eq!(g.players[0].hand.len(), 3);
    }

    #[test]
    fn emptying_the_hand_wins() {
        let mut g = rigged([&["r-3"], &["b-4", "b-5"]], "r-1", &[]);
        g.apply(&g.decode_action(3).unwrap()).unwrap();
        assert_eq!(g.payoffs().unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn reshuffle_keeps_cards() {
        let mut g = UnoGame::new_game(&UnoParams::default(), &mut Rng::new(11));
        let mut rng = Rng::new(3);
        let mut steps = 0;
        while !g.is_over() {
            assert_eq!(g.total_cards(), 108);
            let legal = g.legal_actions();
            let a = legal[rng.below(legal.len())];
            g.apply(&g.decode_action(a).unwrap()).unwrap();
            steps += 1;
            assert!(steps < 10_000);
        }
        assert_eq!(g.total_cards(), 108);
    }

    #[test]
    fn initial_top_is_not_wild() {
        for seed in 0..200 {
            let g = UnoGame::new_game(&UnoParams { num_players: 4 }, &mut Rng::new(seed));
            assert!(g.target().color < 4);
            assert_eq!(g.total_cards(), 108);
        }
    }
}
