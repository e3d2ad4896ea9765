//! Single-player Blackjack against a fixed dealer.
//!
//! The player may only hit or stand. The dealer stands on every 17 (soft
//! included) and a natural pays +1, so payoffs are always -1, 0 or +1.
//! A natural beats any other 21; two naturals push.
//!
//! Deal order is player, player, dealer upcard, dealer hole card. For
//! exhaustive walks each draw is grouped by card value and the lowest-id
//! card of that value is removed, which makes the player's hand (kept
//! sorted) independent of draw order.

use std::collections::BTreeMap;
use std::fmt;

use crate::card::{Card, Deck, DeckKind};
use crate::env::{Planes, RawView};
use crate::error::{Error, Result};
use crate::game::{check_param_keys, fixed_players, ActionId, Game, Judger, Node, Player, Round, Seat};
use crate::rng::Rng;

pub const HIT: ActionId = 0;
pub const STAND: ActionId = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlackjackMove {
    Hit,
    Stand,
}

impl fmt::Display for BlackjackMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlackjackMove::Hit => "hit",
            BlackjackMove::Stand => "stand",
        })
    }
}

/// Blackjack value of a French card: 2..9 face value, ten-cards 10, ace 1.
pub fn card_value(card: Card) -> u32 {
    match card.rank() {
        r @ 0..=7 => r as u32 + 2,
        8..=11 => 10,
        _ => 1,
    }
}

/// Best total of `hand` with aces counted as 1 or 11.
///
/// Returns the highest total not above 21 when one exists, otherwise the
/// minimal (bust) total; `soft` is set when an ace is counted as 11.
pub fn blackjack_score(hand: &[Card]) -> (u32, bool) {
    let hard: u32 = hand.iter().map(|&c| card_value(c)).sum();
    let has_ace = hand.iter().any(|&c| card_value(c) == 1);
    if has_ace && hard + 10 <= 21 {
        (hard + 10, true)
    } else {
        (hard, false)
    }
}

fn is_natural(hand: &[Card]) -> bool {
    hand.len() == 2 && blackjack_score(hand).0 == 21
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Initial deal; the number of cards dealt so far.
    Deal(u8),
    Player,
    /// The player hit and a card is owed.
    PlayerDraw,
    /// The dealer is drawing to 17.
    Dealer,
    Settled,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlackjackGame {
    deck: Deck,
    player: Vec<Card>,
    dealer: Vec<Card>,
    phase: Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlackjackParams;

/// What the player sees: own total, softness and card count, the dealer's
/// upcard value, and the dealer's final total once the hand is settled.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlackjackView {
    pub score: u32,
    pub soft: bool,
    pub num_cards: usize,
    /// Upcard value with aces as 1.
    pub dealer_up: Option<u32>,
    pub dealer_final: Option<u32>,
}

impl BlackjackView {
    pub fn canonical(&self) -> String {
        let mut s = format!(
            "p={}{};n={};d={}",
            self.score,
            if self.soft { "s" } else { "h" },
            self.num_cards,
            self.dealer_up.map_or("-".to_owned(), |v| v.to_string())
        );
        if let Some(f) = self.dealer_final {
            s.push_str(&format!(";df={f}"));
        }
        s
    }
}

impl BlackjackGame {
    fn with_deck(deck: Deck) -> Self {
        BlackjackGame {
            deck,
            player: Vec::with_capacity(8),
            dealer: Vec::with_capacity(8),
            phase: Phase::Deal(0),
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }
    pub fn player_hand(&self) -> &[Card] {
        &self.player
    }
    pub fn dealer_hand(&self) -> &[Card] {
        &self.dealer
    }
    pub fn deck(&self) -> &Deck {
        &self.deck
    }

    fn place(&mut self, card: Card) {
        match self.phase {
            Phase::Deal(k) => {
                if k < 2 {
                    self.player.push(card);
                    self.player.sort_unstable();
                } else {
                    self.dealer.push(card);
                }
                self.phase = if k == 3 { Phase::Player } else { Phase::Deal(k + 1) };
            }
            Phase::PlayerDraw => {
                self.player.push(card);
                self.player.sort_unstable();
                self.phase = if blackjack_score(&self.player).0 > 21 {
                    Phase::Settled
                } else {
                    Phase::Player
                };
            }
            Phase::Dealer => {
                self.dealer.push(card);
                if blackjack_score(&self.dealer).0 >= 17 {
                    self.phase = Phase::Settled;
                }
            }
            Phase::Player | Phase::Settled => unreachable!("no card owed"),
        }
    }

    fn settle_payoff(&self) -> f64 {
        let (p, _) = blackjack_score(&self.player);
        if p > 21 {
            return -1.0;
        }
        let (d, _) = blackjack_score(&self.dealer);
        match (is_natural(&self.player), is_natural(&self.dealer)) {
            (true, true) => return 0.0,
            (true, false) => return 1.0,
            (false, true) => return -1.0,
            _ => {}
        }
        if d > 21 || p > d {
            1.0
        } else if p == d {
            0.0
        } else {
            -1.0
        }
    }
}

impl Player for BlackjackGame {
    fn seat(&self) -> Seat {
        0
    }
    fn hand_len(&self) -> usize {
        self.player.len()
    }
}

impl Round for BlackjackGame {
    fn is_closed(&self) -> bool {
        !matches!(self.phase, Phase::Player | Phase::PlayerDraw | Phase::Deal(_))
    }
}

pub struct BlackjackJudger;

impl Judger for BlackjackJudger {
    type State = BlackjackGame;
    type Move = BlackjackMove;

    fn legal_moves(state: &BlackjackGame) -> Vec<BlackjackMove> {
        if state.phase == Phase::Player {
            vec![BlackjackMove::Hit, BlackjackMove::Stand]
        } else {
            Vec::new()
        }
    }

    fn payoffs(state: &BlackjackGame) -> Option<Vec<f64>> {
        (state.phase == Phase::Settled).then(|| vec![state.settle_payoff()])
    }
}

impl Game for BlackjackGame {
    type Move = BlackjackMove;
    type Params = BlackjackParams;
    type Judger = BlackjackJudger;

    fn parse_params(
        num_players: Option<usize>,
        params: &BTreeMap<String, String>,
    ) -> Result<BlackjackParams> {
        fixed_players(num_players, 1)?;
        check_param_keys(params, &[])?;
        Ok(BlackjackParams)
    }

    fn num_actions(_: &BlackjackParams) -> usize {
        2
    }

    fn plane_shape(_: &BlackjackParams) -> Vec<usize> {
        vec![2]
    }

    fn new_game(_: &BlackjackParams, rng: &mut Rng) -> Self {
        let mut deck = Deck::new(DeckKind::Standard52);
        deck.shuffle(rng);
        Self::with_deck(deck)
    }

    fn enumeration_root(_: &BlackjackParams) -> Option<Self> {
        Some(Self::with_deck(Deck::new(DeckKind::Standard52)))
    }

    fn num_players(&self) -> usize {
        1
    }

    fn node(&self) -> Node {
        match self.phase {
            Phase::Player => Node::Decision(0),
            Phase::Settled => Node::Terminal,
            _ => Node::Chance,
        }
    }

    fn resolve_chance(&mut self) {
        let card = self.deck.deal_one().expect("blackjack deck exhausted");
        self.place(card);
    }

    fn chance_outcomes(&self) -> Vec<(Self, f64)> {
        if self.node() != Node::Chance {
            return Vec::new();
        }
        let total = self.deck.len() as f64;
        let mut lowest: [Option<Card>; 11] = [None; 11];
        let mut counts = [0usize; 11];
        for &c in self.deck.cards() {
            let v = card_value(c) as usize;
            counts[v] += 1;
            if lowest[v].map_or(true, |l| c.id() < l.id()) {
                lowest[v] = Some(c);
            }
        }
        (1..=10)
            .filter_map(|v| {
                let card = lowest[v]?;
                let mut next = self.clone();
                next.deck.take(card);
                next.place(card);
                Some((next, counts[v] as f64 / total))
            })
            .collect()
    }

    fn legal_actions(&self) -> Vec<ActionId> {
        if self.phase == Phase::Player {
            vec![HIT, STAND]
        } else {
            Vec::new()
        }
    }

    fn decode_action(&self, action: ActionId) -> Result<BlackjackMove> {
        match action {
            HIT => Ok(BlackjackMove::Hit),
            STAND => Ok(BlackjackMove::Stand),
            a => Err(Error::IllegalAction(a)),
        }
    }

    fn encode_move(&self, mv: &BlackjackMove) -> ActionId {
        match mv {
            BlackjackMove::Hit => HIT,
            BlackjackMove::Stand => STAND,
        }
    }

    fn apply(&mut self, mv: &BlackjackMove) -> Result<()> {
        if self.phase != Phase::Player {
            return Err(Error::IllegalMove(format!("{mv} outside the player's turn")));
        }
        self.phase = match mv {
            BlackjackMove::Hit => Phase::PlayerDraw,
            BlackjackMove::Stand if blackjack_score(&self.dealer).0 >= 17 => Phase::Settled,
            BlackjackMove::Stand => Phase::Dealer,
        };
        Ok(())
    }

    fn raw_view(&self, _seat: Seat) -> RawView {
        let (score, soft) = blackjack_score(&self.player);
        RawView::Blackjack(BlackjackView {
            score,
            soft,
            num_cards: self.player.len(),
            dealer_up: self.dealer.first().map(|&c| card_value(c)),
            dealer_final: (self.phase == Phase::Settled).then(|| blackjack_score(&self.dealer).0),
        })
    }

    /// `[player total, dealer visible total]`; the dealer's visible total is
    /// the upcard's until the hand settles, then the final total.
    fn planes(&self, _seat: Seat) -> Planes {
        let player = blackjack_score(&self.player).0 as f32;
        let dealer = if self.phase == Phase::Settled {
            blackjack_score(&self.dealer).0
        } else {
            blackjack_score(&self.dealer[..self.dealer.len().min(1)]).0
        };
        Planes::from_vec(&[2], vec![player, dealer as f32])
    }

    fn decisions_remaining(&self) -> bool {
        matches!(self.phase, Phase::Deal(_) | Phase::Player | Phase::PlayerDraw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::CardFamily;

    fn hand(s: &str) -> Vec<Card> {
        s.split_whitespace()
            .map(|c| Card::parse(CardFamily::French, c).unwrap())
            .collect()
    }

    fn rigged(player: &str, dealer: &str, draws: &str) -> BlackjackGame {
        let mut order = hand(player);
        order.extend(hand(dealer));
        order.extend(hand(draws));
        order.reverse();
        let mut g = BlackjackGame::with_deck(Deck::from_cards(DeckKind::Standard52, order));
        g.settle_chance();
        g
    }

    #[test]
    fn scores() {
        assert_eq!(blackjack_score(&hand("AS KH")), (21, true));
        assert_eq!(blackjack_score(&hand("AS AH 9C")), (21, true));
        assert_eq!(blackjack_score(&hand("KS QH 5C")), (25, false));
        assert_eq!(blackjack_score(&hand("AS AH AD AC")), (14, true));
        assert_eq!(blackjack_score(&hand("AS 6H 9C")), (16, false));
    }

    #[test]
    fn ace_assignment_oracle() {
        // Best total from trying every ace as 1 or 11.
        let mut rng = Rng::new(5);
        let deck = Deck::new(DeckKind::Standard52);
        for _ in 0..2000 {
            let n = 1 + rng.below(6);
            let cards: Vec<Card> = (0..n).map(|_| deck.cards()[rng.below(52)]).collect();
            let aces = cards.iter().filter(|&&c| c.rank() == 12).count();
            let base: u32 = cards.iter().filter(|&&c| c.rank() != 12).map(|&c| card_value(c)).sum();
            let totals: Vec<u32> = (0..=aces).map(|k| base + (aces as u32) + 10 * k as u32).collect();
            let best = totals.iter().copied().filter(|&t| t <= 21).max();
            let (score, soft) = blackjack_score(&cards);
            match best {
                Some(b) => {
                    assert_eq!(score, b);
                    assert_eq!(soft, b != base + aces as u32);
                }
                None => assert_eq!((score, soft), (totals[0], false)),
            }
        }
    }

    #[test]
    fn planes_show_player_and_upcard() {
        let g = rigged("KS 6H", "TD 7C", "");
        assert_eq!(g.planes(0).data, vec![16.0, 10.0]);
        assert_eq!(g.legal_actions(), vec![HIT, STAND]);
    }

    #[test]
    fn stand_on_twenty_against_dealer_bust() {
        let mut g = rigged("KS QH", "6D TC", "9S");
        g.apply(&BlackjackMove::Stand).unwrap();
        g.settle_chance();
        assert!(g.is_over());
        assert_eq!(blackjack_score(&g.dealer).0, 25);
        assert_eq!(g.payoffs().unwrap(), vec![1.0]);
    }

    #[test]
    fn bust_settles_immediately() {
        let mut g = rigged("KS QH", "6D TC", "5S");
        g.apply(&BlackjackMove::Hit).unwrap();
        g.settle_chance();
        assert!(g.is_over());
        assert_eq!(g.payoffs().unwrap(), vec![-1.0]);
    }

    #[test]
    fn dealer_stands_on_soft_seventeen() {
        let mut g = rigged("KS 8H", "AD 6C", "");
        g.apply(&BlackjackMove::Stand).unwrap();
        assert!(g.is_over());
        assert_eq!(g.dealer.len(), 2);
        assert_eq!(g.payoffs().unwrap(), vec![1.0]);
    }

    #[test]
    fn tie_pushes_and_natural_beats_three_card_21() {
        let mut g = rigged("KS 8H", "TD 8C", "");
        g.apply(&BlackjackMove::Stand).unwrap();
        assert_eq!(g.payoffs().unwrap(), vec![0.0]);

        let mut g = rigged("AS KH", "TD 6C", "5S");
        g.apply(&BlackjackMove::Stand).unwrap();
        g.settle_chance();
        assert_eq!(blackjack_score(&g.dealer).0, 21);
        assert_eq!(g.payoffs().unwrap(), vec![1.0]);
    }

    #[test]
    fn dealer_always_reaches_seventeen() {
        for seed in 0..500 {
            let mut g = BlackjackGame::new_game(&BlackjackParams, &mut Rng::new(seed));
            g.settle_chance();
            g.apply(&BlackjackMove::Stand).unwrap();
            g.settle_chance();
            assert!(blackjack_score(&g.dealer).0 >= 17);
        }
    }

    #[test]
    fn chance_outcomes_sum_to_one() {
        let root = BlackjackGame::enumeration_root(&BlackjackParams).unwrap();
        let outs = root.chance_outcomes();
        assert_eq!(outs.len(), 10);
        let total: f64 = outs.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((outs[9].1 - 16.0 / 52.0).abs() < 1e-12);
    }
}
