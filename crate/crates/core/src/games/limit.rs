//! Limit Texas Hold'em.
//!
//! Chips are counted in half big blinds: seat 0 posts the small blind (1)
//! and seat 1 the big blind (2). The fixed raise, given in big blinds
//! (default 1), applies to pre-flop and flop betting and doubles on the turn
//! and river, with at most four raises per round. Pre-flop the seat after
//! the big blind opens; later rounds open with the first live seat from 0.
//! Stacks are unlimited, so every live player either matches the bet or
//! folds and there are no side pots.
//!
//! Payoffs are in big blinds; tied showdowns split the pot exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::card::{Card, Deck, DeckKind};
use crate::env::{Planes, RawView};
use crate::error::{Error, Result};
use crate::game::{check_param_keys, param, ActionId, Game, Judger, Node, Player, Round, Seat};
use crate::games::hand_eval::{evaluate, HandRank};
use crate::games::{bet, BetMove};
use crate::rng::Rng;

pub const SMALL_BLIND: u32 = 1;
pub const BIG_BLIND: u32 = 2;
pub const MAX_RAISES: u8 = 4;
pub const MAX_PLAYERS: usize = 10;
const RAISE_SLOTS: usize = MAX_RAISES as usize + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LimitParams {
    pub num_players: usize,
    /// Raise size of the first two rounds, in big blinds.
    pub fixed_raise: u32,
}

impl Default for LimitParams {
    fn default() -> Self {
        LimitParams {
            num_players: 2,
            fixed_raise: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LimitPlayer {
    pub seat: Seat,
    pub hole: Vec<Card>,
    /// Chips put in the pot over the whole hand.
    pub chips: u32,
    /// Chips put in during the current round.
    pub bet: u32,
    pub folded: bool,
    pub acted: bool,
}

impl Player for LimitPlayer {
    fn seat(&self) -> Seat {
        self.seat
    }
    fn hand_len(&self) -> usize {
        self.hole.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LimitGame {
    params: LimitParams,
    deck: Deck,
    players: Vec<LimitPlayer>,
    community: Vec<Card>,
    round: u8,
    raises: [u8; 4],
    to_act: Seat,
    moves: Vec<Vec<(Seat, BetMove)>>,
    over: bool,
}

/// One seat's view: own hole cards, the board, chips, folds and the betting
/// sequence. Other hole cards are shown only after a showdown.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LimitView {
    pub seat: Seat,
    pub hand: Vec<Card>,
    pub public: Vec<Card>,
    pub chips: Vec<u32>,
    pub folded: Vec<bool>,
    pub moves: Vec<Vec<(Seat, BetMove)>>,
    pub revealed: Option<Vec<Vec<Card>>>,
}

fn join_cards(s: &mut String, cards: &[Card]) {
    for (i, c) in cards.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{c}");
    }
}

impl LimitView {
    pub fn canonical(&self) -> String {
        let mut s = String::with_capacity(64);
        s.push_str("h=");
        join_cards(&mut s, &self.hand);
        s.push_str(";b=");
        join_cards(&mut s, &self.public);
        s.push_str(";c=");
        for (i, c) in self.chips.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{c}{}", if self.folded[i] { "f" } else { "" });
        }
        s.push_str(";m=");
        for (i, round) in self.moves.iter().enumerate() {
            if i > 0 {
                s.push('/');
            }
            for (seat, m) in round {
                let _ = write!(s, "{seat}{}", m.code());
            }
        }
        if let Some(rev) = &self.revealed {
            s.push_str(";sd=");
            for (i, h) in rev.iter().enumerate() {
                if i > 0 {
                    s.push('|');
                }
                join_cards(&mut s, h);
            }
        }
        s
    }
}

impl LimitGame {
    pub fn params(&self) -> &LimitParams {
        &self.params
    }
    pub fn players(&self) -> &[LimitPlayer] {
        &self.players
    }
    pub fn community(&self) -> &[Card] {
        &self.community
    }
    pub fn round_index(&self) -> u8 {
        self.round
    }
    pub fn deck(&self) -> &Deck {
        &self.deck
    }
    pub fn pot(&self) -> u32 {
        self.players.iter().map(|p| p.chips).sum()
    }

    fn raise_size(&self) -> u32 {
        let unit = self.params.fixed_raise * BIG_BLIND;
        if self.round < 2 {
            unit
        } else {
            2 * unit
        }
    }

    fn max_bet(&self) -> u32 {
        self.players.iter().map(|p| p.bet).max().unwrap_or(0)
    }

    fn live(&self) -> impl Iterator<Item = &LimitPlayer> {
        self.players.iter().filter(|p| !p.folded)
    }

    fn next_live(&self, from: Seat) -> Seat {
        let n = self.players.len();
        (1..=n)
            .map(|k| (from + k) % n)
            .find(|&s| !self.players[s].folded)
            .expect("a live seat")
    }

    fn deal_board(&mut self, n: usize) {
        let cards = self.deck.deal(n).expect("limit deck exhausted");
        self.community.extend(cards);
    }

    fn start_round(&mut self) {
        self.round += 1;
        self.deal_board(if self.round == 1 { 3 } else { 1 });
        for p in &mut self.players {
            p.bet = 0;
            p.acted = false;
        }
        self.moves.push(Vec::new());
        self.to_act = self.next_live(self.players.len() - 1);
    }

    /// Chips each seat takes from the pot at settlement.
    pub fn payouts(&self) -> Option<Vec<f64>> {
        if !self.over {
            return None;
        }
        let pot = self.pot() as f64;
        let live: Vec<Seat> = self.live().map(|p| p.seat).collect();
        let winners: Vec<Seat> = if live.len() == 1 {
            live
        } else {
            let ranks: Vec<(Seat, HandRank)> = live
                .iter()
                .map(|&s| {
                    let mut seven = self.players[s].hole.clone();
                    seven.extend_from_slice(&self.community);
                    (s, evaluate(&seven).expect("distinct cards"))
                })
                .collect();
            let best = ranks.iter().map(|(_, r)| *r).max().expect("live seat");
            ranks.into_iter().filter(|(_, r)| *r == best).map(|(s, _)| s).collect()
        };
        let share = pot / winners.len() as f64;
        let mut out = vec![0.0; self.players.len()];
        for w in winners {
            out[w] = share;
        }
        Some(out)
    }
}

impl Round for LimitGame {
    fn is_closed(&self) -> bool {
        let max = self.max_bet();
        self.live().all(|p| p.acted && p.bet == max)
    }
}

pub struct LimitJudger;

impl Judger for LimitJudger {
    type State = LimitGame;
    type Move = BetMove;

    fn legal_moves(state: &LimitGame) -> Vec<BetMove> {
        if state.over {
            return Vec::new();
        }
        let me = &state.players[state.to_act];
        let mut moves = Vec::with_capacity(3);
        moves.push(if me.bet == state.max_bet() {
            BetMove::Check
        } else {
            BetMove::Call
        });
        if state.raises[state.round as usize] < MAX_RAISES {
            moves.push(BetMove::Raise);
        }
        moves.push(BetMove::Fold);
        moves
    }

    fn payoffs(state: &LimitGame) -> Option<Vec<f64>> {
        let payouts = state.payouts()?;
        Some(
            payouts
                .iter()
                .zip(&state.players)
                .map(|(won, p)| (won - p.chips as f64) / BIG_BLIND as f64)
                .collect(),
        )
    }
}

impl Game for LimitGame {
    type Move = BetMove;
    type Params = LimitParams;
    type Judger = LimitJudger;

    fn parse_params(num_players: Option<usize>, params: &BTreeMap<String, String>) -> Result<LimitParams> {
        check_param_keys(params, &["fixed_raise"])?;
        let n = num_players.unwrap_or(2);
        if !(2..=MAX_PLAYERS).contains(&n) {
            return Err(Error::InvalidParam(format!(
                "num_players={n}, limit hold'em seats 2 to {MAX_PLAYERS}"
            )));
        }
        let fixed_raise = param::<u32>(params, "fixed_raise")?.unwrap_or(1);
        if fixed_raise == 0 {
            return Err(Error::InvalidParam("fixed_raise must be positive".into()));
        }
        Ok(LimitParams {
            num_players: n,
            fixed_raise,
        })
    }

    fn num_actions(_: &LimitParams) -> usize {
        bet::NUM_ACTIONS
    }

    fn plane_shape(_: &LimitParams) -> Vec<usize> {
        vec![3, 52]
    }

    fn new_game(params: &LimitParams, rng: &mut Rng) -> Self {
        let mut deck = Deck::new(DeckKind::Standard52);
        deck.shuffle(rng);
        let n = params.num_players;
        let mut players: Vec<LimitPlayer> = (0..n)
            .map(|seat| LimitPlayer {
                seat,
                hole: Vec::with_capacity(2),
                chips: 0,
                bet: 0,
                folded: false,
                acted: false,
            })
            .collect();
        for p in &mut players {
            p.hole = deck.deal(2).expect("enough cards");
        }
        for (seat, blind) in [(0, SMALL_BLIND), (1, BIG_BLIND)] {
            players[seat].chips = blind;
            players[seat].bet = blind;
        }
        LimitGame {
            params: *params,
            deck,
            players,
            community: Vec::with_capacity(5),
            round: 0,
            raises: [0; 4],
            to_act: 2 % n,
            moves: vec![Vec::new()],
            over: false,
        }
    }

    fn num_players(&self) -> usize {
        self.players.len()
    }

    fn node(&self) -> Node {
        if self.over {
            Node::Terminal
        } else {
            Node::Decision(self.to_act)
        }
    }

    fn resolve_chance(&mut self) {}

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
        let me = self.to_act;
        let max = self.max_bet();
        match mv {
            BetMove::Fold => self.players[me].folded = true,
            BetMove::Check => {}
            BetMove::Call => {
                let p = &mut self.players[me];
                p.chips += max - p.bet;
                p.bet = max;
            }
            BetMove::Raise => {
                let target = max + self.raise_size();
                for p in &mut self.players {
                    p.acted = false;
                }
                let p = &mut self.players[me];
                p.chips += target - p.bet;
                p.bet = target;
                self.raises[self.round as usize] += 1;
            }
        }
        self.players[me].acted = true;
        self.moves[self.round as usize].push((me, *mv));

        if self.live().count() == 1 {
            self.over = true;
        } else if self.is_closed() {
            if self.round == 3 {
                self.over = true;
            } else {
                self.start_round();
            }
        } else {
            self.to_act = self.next_live(me);
        }
        Ok(())
    }

    fn raw_view(&self, seat: Seat) -> RawView {
        let showdown = self.over && self.live().count() > 1;
        RawView::Limit(LimitView {
            seat,
            hand: self.players[seat].hole.clone(),
            public: self.community.clone(),
            chips: self.players.iter().map(|p| p.chips).collect(),
            folded: self.players.iter().map(|p| p.folded).collect(),
            moves: self.moves.clone(),
            revealed: showdown.then(|| {
                self.players
                    .iter()
                    .map(|p| if p.folded { Vec::new() } else { p.hole.clone() })
                    .collect()
            }),
        })
    }

    /// `[3, 52]`: own hole cards by card id, board cards by card id, and
    /// the raise count of each round reached so far (row 2, column
    /// `round * 5 + raises`).
    fn planes(&self, seat: Seat) -> Planes {
        let mut planes = Planes::zeros(&[3, 52]);
        for c in &self.players[seat].hole {
            planes.set(&[0, c.id() as usize], 1.0);
        }
        for c in &self.community {
            planes.set(&[1, c.id() as usize], 1.0);
        }
        for r in 0..=self.round as usize {
            planes.set(&[2, r * RAISE_SLOTS + self.raises[r] as usize], 1.0);
        }
        planes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BetMove::*;

    fn game(seed: u64, n: usize) -> LimitGame {
        LimitGame::new_game(
            &LimitParams {
                num_players: n,
                fixed_raise: 1,
            },
            &mut Rng::new(seed),
        )
    }

    #[test]
    fn blinds_and_first_actor() {
        let g = game(1, 2);
        assert_eq!(g.players()[0].chips, 1);
        assert_eq!(g.players()[1].chips, 2);
        assert_eq!(g.current_player(), Some(0));
        assert_eq!(g.legal_moves(), vec![Call, Raise, Fold]);
        let g3 = game(1, 3);
        assert_eq!(g3.current_player(), Some(2));
    }

    #[test]
    fn big_blind_gets_the_option() {
        let mut g = game(2, 2);
        g.apply(&Call).unwrap();
        assert_eq!(g.round_index(), 0);
        assert_eq!(g.current_player(), Some(1));
        assert_eq!(g.legal_moves(), vec![Check, Raise, Fold]);
        g.apply(&Check).unwrap();
        assert_eq!(g.round_index(), 1);
        assert_eq!(g.community().len(), 3);
        assert_eq!(g.current_player(), Some(0));
    }

    #[test]
    fn fold_settles_immediately() {
        let mut g = game(3, 2);
        g.apply(&Fold).unwrap();
        assert!(g.is_over());
        assert_eq!(g.payoffs().unwrap(), vec![-0.5, 0.5]);
    }

    #[test]
    fn raise_sizes_double_after_the_flop() {
        let mut g = game(4, 2);
        g.apply(&Raise).unwrap();
        assert_eq!(g.players()[0].chips, 4);
        g.apply(&Call).unwrap();
        g.apply(&Check).unwrap();
        g.apply(&Check).unwrap();
        assert_eq!(g.round_index(), 2);
        g.apply(&Raise).unwrap();
        assert_eq!(g.players()[0].chips, 8);
    }

    #[test]
    fn fixed_raise_parameter() {
        let mut params = BTreeMap::new();
        params.insert("fixed_raise".to_owned(), "2".to_owned());
        let p = LimitGame::parse_params(None, &params).unwrap();
        assert_eq!(p.fixed_raise, 2);
        let mut g = LimitGame::new_game(&p, &mut Rng::new(0));
        g.apply(&Raise).unwrap();
        assert_eq!(g.players()[0].chips, 2 + 4);
    }

    #[test]
    fn raise_cap_is_four() {
        let mut g = game(5, 2);
        for _ in 0..4 {
            g.apply(&Raise).unwrap();
        }
        assert_eq!(g.legal_moves(), vec![Call, Fold]);
        assert!(g.apply(&Raise).is_err());
    }

    #[test]
    fn visible_cards_match_card_planes() {
        let mut g = game(6, 2);
        let mut rng = Rng::new(9);
        while !g.is_over() {
            let p = g.planes(g.current_player().unwrap());
            let cards: f32 = p.data[..104].iter().sum();
            assert_eq!(cards as usize, 2 + g.community().len());
            let legal = g.legal_moves();
            let mut mv = legal[rng.below(legal.len())];
            if mv == Fold {
                mv = legal[0];
            }
            g.apply(&mv).unwrap();
        }
        assert_eq!(g.community().len(), 5);
    }

    #[test]
    fn invalid_player_counts() {
        assert!(LimitGame::parse_params(Some(1), &BTreeMap::new()).is_err());
        assert!(LimitGame::parse_params(Some(11), &BTreeMap::new()).is_err());
        assert_eq!(LimitGame::parse_params(Some(3), &BTreeMap::new()).unwrap().num_players, 3);
    }
}
