//! Two-player Leduc Hold'em.
//!
//! Six cards (J, Q, K in two suits), an ante of 1 from each player, one
//! private card each, two betting rounds with a public card dealt between
//! them. Raises are 2 in the first round and 4 in the second, at most two
//! per round. Player 0 opens both rounds. Folding is always allowed.
//!
//! At showdown a player whose card pairs the public card wins, otherwise
//! the higher rank wins and equal ranks split. Payoffs are in antes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::card::{Card, Deck, DeckKind, LEDUC_RANKS};
use crate::env::{Planes, RawView};
use crate::error::{Error, Result};
use crate::game::{check_param_keys, fixed_players, ActionId, Game, Judger, Node, Player, Round, Seat};
use crate::games::{bet, BetMove};
use crate::rng::Rng;

pub type LeducMove = BetMove;

pub const ANTE: u32 = 1;
pub const RAISE_SIZES: [u32; 2] = [2, 4];
pub const MAX_RAISES: u8 = 2;
const CHIP_SLOTS: usize = 15;
pub const PLANE_LEN: usize = 6 + 6 + 2 * CHIP_SLOTS;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeducPlayer {
    pub seat: Seat,
    pub card: Option<Card>,
    /// Chips put in the pot, ante included.
    pub chips: u32,
}

impl Player for LeducPlayer {
    fn seat(&self) -> Seat {
        self.seat
    }
    fn hand_len(&self) -> usize {
        self.card.is_some() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LeducRound {
    pub index: u8,
    pub raises: u8,
    pub to_act: Seat,
    pub moves: Vec<BetMove>,
}

impl Round for LeducRound {
    fn is_closed(&self) -> bool {
        match self.moves.last() {
            Some(BetMove::Call) | Some(BetMove::Fold) => true,
            Some(BetMove::Check) => self.moves.len() >= 2,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Phase {
    DealPrivate,
    Bet,
    DealPublic,
    Over,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeducGame {
    deck: Deck,
    players: [LeducPlayer; 2],
    public: Option<Card>,
    round: LeducRound,
    /// Moves of the finished first round.
    first_round: Vec<BetMove>,
    folded: Option<Seat>,
    phase: Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LeducParams;

/// One seat's view: own rank, public rank, betting so far and chip counts.
/// The opponent's rank is revealed only after a showdown.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeducView {
    pub seat: Seat,
    pub hand: Option<u8>,
    pub public: Option<u8>,
    pub rounds: [Vec<BetMove>; 2],
    pub chips: [u32; 2],
    pub opponent: Option<u8>,
}

fn rank_char(r: Option<u8>) -> char {
    r.map_or('-', |r| LEDUC_RANKS[r as usize] as char)
}

impl LeducView {
    pub fn canonical(&self) -> String {
        let mut s = String::with_capacity(24);
        let _ = write!(s, "h={};p={};b=", rank_char(self.hand), rank_char(self.public));
        for (i, r) in self.rounds.iter().enumerate() {
            if i > 0 {
                s.push('/');
            }
            s.extend(r.iter().map(|m| m.code()));
        }
        let _ = write!(s, ";c={},{}", self.chips[0], self.chips[1]);
        if let Some(o) = self.opponent {
            let _ = write!(s, ";o={}", rank_char(Some(o)));
        }
        s
    }
}

impl LeducGame {
    fn with_deck(deck: Deck) -> Self {
        LeducGame {
            deck,
            players: [0, 1].map(|seat| LeducPlayer {
                seat,
                card: None,
                chips: ANTE,
            }),
            public: None,
            round: LeducRound::default(),
            first_round: Vec::new(),
            folded: None,
            phase: Phase::DealPrivate,
        }
    }

    pub fn players(&self) -> &[LeducPlayer; 2] {
        &self.players
    }
    pub fn public_card(&self) -> Option<Card> {
        self.public
    }
    pub fn round(&self) -> &LeducRound {
        &self.round
    }
    pub fn pot(&self) -> u32 {
        self.players.iter().map(|p| p.chips).sum()
    }
    pub fn deck(&self) -> &Deck {
        &self.deck
    }

    fn place(&mut self, card: Card) {
        match self.phase {
            Phase::DealPrivate => {
                let slot = self.players.iter_mut().find(|p| p.card.is_none()).expect("private slot");
                slot.card = Some(card);
                if self.players[1].card.is_some() {
                    self.phase = Phase::Bet;
                }
            }
            Phase::DealPublic => {
                self.public = Some(card);
                self.phase = Phase::Bet;
            }
            _ => unreachable!("no card owed"),
        }
    }

    /// Rigged game for tests and examples: `cards` are (p0, p1, public).
    pub fn with_cards(p0: Card, p1: Card, public: Card) -> Self {
        let mut deck = Deck::new(DeckKind::Leduc6);
        for c in [p0, p1, public] {
            deck.take(c);
        }
        let mut order = deck.into_cards();
        order.extend([public, p1, p0]);
        let mut g = Self::with_deck(Deck::from_cards(DeckKind::Leduc6, order));
        g.settle_chance();
        g
    }

    fn showdown(&self) -> [f64; 2] {
        let rank = |s: usize| self.players[s].card.expect("dealt").rank();
        let public = self.public.expect("public dealt").rank();
        let (r0, r1) = (rank(0), rank(1));
        let winner = if r0 == public {
            Some(0)
        } else if r1 == public {
            Some(1)
        } else if r0 != r1 {
            Some(if r0 > r1 { 0 } else { 1 })
        } else {
            None
        };
        match winner {
            None => [0.0, 0.0],
            Some(w) => {
                let won = self.players[1 - w].chips as f64;
                let mut p = [0.0; 2];
                p[w] = won;
                p[1 - w] = -won;
                p
            }
        }
    }
}

pub struct LeducJudger;

impl Judger for LeducJudger {
    type State = LeducGame;
    type Move = BetMove;

    fn legal_moves(state: &LeducGame) -> Vec<BetMove> {
        if state.phase != Phase::Bet {
            return Vec::new();
        }
        let me = state.round.to_act;
        let mut moves = Vec::with_capacity(3);
        if state.players[me].chips == state.players[1 - me].chips {
            moves.push(BetMove::Check);
        } else {
            moves.push(BetMove::Call);
        }
        if state.round.raises < MAX_RAISES {
            moves.push(BetMove::Raise);
        }
        moves.push(BetMove::Fold);
        moves
    }

    fn payoffs(state: &LeducGame) -> Option<Vec<f64>> {
        if state.phase != Phase::Over {
            return None;
        }
        Some(match state.folded {
            Some(f) => {
                let lost = state.players[f].chips as f64;
                let mut p = vec![lost; 2];
                p[f] = -lost;
                p
            }
            None => state.showdown().to_vec(),
        })
    }
}

impl Game for LeducGame {
    type Move = BetMove;
    type Params = LeducParams;
    type Judger = LeducJudger;

    fn parse_params(num_players: Option<usize>, params: &BTreeMap<String, String>) -> Result<LeducParams> {
        fixed_players(num_players, 2)?;
        check_param_keys(params, &[])?;
        Ok(LeducParams)
    }

    fn num_actions(_: &LeducParams) -> usize {
        bet::NUM_ACTIONS
    }

    fn plane_shape(_: &LeducParams) -> Vec<usize> {
        vec![PLANE_LEN]
    }

    fn new_game(_: &LeducParams, rng: &mut Rng) -> Self {
        let mut deck = Deck::new(DeckKind::Leduc6);
        deck.shuffle(rng);
        Self::with_deck(deck)
    }

    fn enumeration_root(_: &LeducParams) -> Option<Self> {
        Some(Self::with_deck(Deck::new(DeckKind::Leduc6)))
    }

    fn num_players(&self) -> usize {
        2
    }

    fn node(&self) -> Node {
        match self.phase {
            Phase::DealPrivate | Phase::DealPublic => Node::Chance,
            Phase::Bet => Node::Decision(self.round.to_act),
            Phase::Over => Node::Terminal,
        }
    }

    fn resolve_chance(&mut self) {
        let card = self.deck.deal_one().expect("leduc deck exhausted");
        self.place(card);
    }

    fn chance_outcomes(&self) -> Vec<(Self, f64)> {
        if self.node() != Node::Chance {
            return Vec::new();
        }
        let total = self.deck.len() as f64;
        (0..3u8)
            .filter_map(|rank| {
                let mut of_rank = self.deck.cards().iter().filter(|c| c.rank() == rank);
                let first = *of_rank.clone().min_by_key(|c| c.id())?;
                let n = of_rank.by_ref().count();
                let mut next = self.clone();
                next.deck.take(first);
                next.place(first);
                Some((next, n as f64 / total))
            })
            .collect()
    }

    fn legal_actions(&self) -> Vec<ActionId> {
        let mut ids: Vec<ActionId> = self.legal_moves().iter().map(|m| m.id()).collect();
        ids.sort_unstable();
        ids
    }

    fn decode_action(&self, action: ActionId) -> Result<BetMove> {
        BetMove::from_id(action).ok_or(Error::IllegalAction(action))
    }

    fn encode_move(&self, mv: &BetMove) -> ActionId {
        mv.id()
    }

    fn apply(&mut self, mv: &BetMove) -> Result<()> {
        if !self.legal_moves().contains(mv) {
            return Err(Error::IllegalMove(format!("{mv} is not legal here")));
        }
        let me = self.round.to_act;
        let other = 1 - me;
        match mv {
            BetMove::Fold => self.folded = Some(me),
            BetMove::Check => {}
            BetMove::Call => self.players[me].chips = self.players[other].chips,
            BetMove::Raise => {
                self.players[me].chips =
                    self.players[other].chips + RAISE_SIZES[self.round.index as usize];
                self.round.raises += 1;
            }
        }
        self.round.moves.push(*mv);
        self.round.to_act = other;
        if self.folded.is_some() {
            self.phase = Phase::Over;
        } else if self.round.is_closed() {
            if self.round.index == 0 {
                self.first_round = std::mem::take(&mut self.round.moves);
                self.round = LeducRound {
                    index: 1,
                    ..LeducRound::default()
                };
                self.phase = Phase::DealPublic;
            } else {
                self.phase = Phase::Over;
            }
        }
        Ok(())
    }

    fn raw_view(&self, seat: Seat) -> RawView {
        let rounds = if self.round.index == 0 {
            [self.round.moves.clone(), Vec::new()]
        } else {
            [self.first_round.clone(), self.round.moves.clone()]
        };
        let showdown = self.phase == Phase::Over && self.folded.is_none();
        RawView::Leduc(LeducView {
            seat,
            hand: self.players[seat].card.map(|c| c.rank()),
            public: self.public.map(|c| c.rank()),
            rounds,
            chips: [self.players[0].chips, self.players[1].chips],
            opponent: if showdown {
                self.players[1 - seat].card.map(|c| c.rank())
            } else {
                None
            },
        })
    }

    /// Flat vector of 42: own card one-hot by id (6), public card one-hot by
    /// id (6), own chips one-hot (15), opponent chips one-hot (15).
    fn planes(&self, seat: Seat) -> Planes {
        let mut data = vec![0.0f32; PLANE_LEN];
        if let Some(c) = self.players[seat].card {
            data[c.id() as usize] = 1.0;
        }
        if let Some(c) = self.public {
            data[6 + c.id() as usize] = 1.0;
        }
        data[12 + self.players[seat].chips as usize] = 1.0;
        data[12 + CHIP_SLOTS + self.players[1 - seat].chips as usize] = 1.0;
        Planes::from_vec(&[PLANE_LEN], data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::CardFamily;

    fn card(s: &str) -> Card {
        Card::parse(CardFamily::Leduc, s).unwrap()
    }

    fn play(g: &mut LeducGame, moves: &[BetMove]) {
        for m in moves {
            g.apply(m).unwrap();
            g.settle_chance();
        }
    }

    use BetMove::*;

    #[test]
    fn check_check_deals_public_card() {
        let mut g = LeducGame::with_cards(card("QS"), card("KH"), card("JH"));
        assert_eq!(g.public_card(), None);
        play(&mut g, &[Check, Check]);
        assert_eq!(g.round().index, 1);
        assert_eq!(g.public_card(), Some(card("JH")));
        assert_eq!(g.current_player(), Some(0));
    }

    #[test]
    fn fold_first_loses_ante() {
        let mut g = LeducGame::with_cards(card("QS"), card("KH"), card("JH"));
        play(&mut g, &[Fold]);
        assert_eq!(g.payoffs().unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn raise_cap_is_two() {
        let mut g = LeducGame::with_cards(card("QS"), card("KH"), card("JH"));
        play(&mut g, &[Raise, Raise]);
        assert_eq!(g.legal_moves(), vec![Call, Fold]);
        assert!(g.apply(&Raise).is_err());
        assert_eq!(g.players()[0].chips, 3);
        assert_eq!(g.players()[1].chips, 5);
    }

    #[test]
    fn pair_wins_showdown() {
        let mut g = LeducGame::with_cards(card("QS"), card("KH"), card("QH"));
        play(&mut g, &[Check, Check, Check, Check]);
        assert_eq!(g.payoffs().unwrap(), vec![1.0, -1.0]);

        let mut g = LeducGame::with_cards(card("QS"), card("KH"), card("QH"));
        play(&mut g, &[Raise, Call, Raise, Raise, Call]);
        // 1 ante + 2 + 4 + 4
        assert_eq!(g.payoffs().unwrap(), vec![11.0, -11.0]);
    }

    #[test]
    fn equal_ranks_split() {
        let mut g = LeducGame::with_cards(card("JS"), card("JH"), card("KS"));
        play(&mut g, &[Check, Raise, Call, Check, Check]);
        assert_eq!(g.payoffs().unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn check_line_payoff_table_is_antisymmetric() {
        // Every ordered private deal with each remaining public card.
        let deck = Deck::new(DeckKind::Leduc6);
        let cards = deck.cards();
        let mut n = 0;
        for &a in cards {
            for &b in cards.iter().filter(|&&b| b != a) {
                for &p in cards.iter().filter(|&&p| p != a && p != b) {
                    let mut g = LeducGame::with_cards(a, b, p);
                    play(&mut g, &[Check, Check, Check, Check]);
                    let pay = g.payoffs().unwrap();
                    let mut swapped = LeducGame::with_cards(b, a, p);
                    play(&mut swapped, &[Check, Check, Check, Check]);
                    let pay_swapped = swapped.payoffs().unwrap();
                    assert_eq!(pay[0] + pay[1], 0.0);
                    assert_eq!(pay[0], pay_swapped[1]);
                    n += 1;
                }
            }
        }
        assert_eq!(n, 6 * 5 * 4);
    }

    #[test]
    fn planes_are_disjoint() {
        let mut g = LeducGame::with_cards(card("QS"), card("KH"), card("QH"));
        play(&mut g, &[Check, Check]);
        let p = g.planes(0);
        assert_eq!(p.data[..6].iter().sum::<f32>(), 1.0);
        assert_eq!(p.data[6..12].iter().sum::<f32>(), 1.0);
        let own = p.data[..6].iter().position(|&x| x == 1.0).unwrap();
        let public = p.data[6..12].iter().position(|&x| x == 1.0).unwrap();
        assert_eq!(own, card("QS").id() as usize);
        assert_eq!(public, card("QH").id() as usize);
    }

    #[test]
    fn chance_outcomes_group_by_rank() {
        let root = LeducGame::enumeration_root(&LeducParams).unwrap();
        let outs = root.chance_outcomes();
        assert_eq!(outs.len(), 3);
        for (_, p) in &outs {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
        let second = outs[0].0.chance_outcomes();
        let probs: Vec<f64> = second.iter().map(|(_, p)| *p).collect();
        assert_eq!(probs, vec![0.2, 0.4, 0.4]);
    }
}
