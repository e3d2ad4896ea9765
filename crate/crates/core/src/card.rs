//! Card atoms and canonical decks.
//!
//! Card ids per family:
//!
//! | family              | ranks                     | suits / colors        | id                      |
//! |---------------------|---------------------------|-----------------------|-------------------------|
//! | `French`            | 0..13 = `23456789TJQKA`   | 0..4 = `SHDC`         | `suit * 13 + rank`      |
//! | `FrenchWithJokers`  | as French, jokers rank 0 (black), 1 (red) in suit 4 | | `suit * 13 + rank` (52, 53) |
//! | `Leduc`             | 0..3 = `JQK`              | 0..2 = `SH`           | `suit * 3 + rank`       |
//! | `Uno`               | symbol 0..15              | color 0..4 = `rgby`, 4 = wild | see [`Card::uno`] |
//!
//! UNO decks hold duplicate (color, symbol) pairs, so UNO ids carry a copy
//! index: colored cards use `color * 25 + slot` where slot 0 is the zero,
//! slots 1..19 are the two copies of 1-9, then two each of skip, reverse and
//! draw-two; wilds take ids 100..104 and wild-draw-fours 104..108.
//!
//! A [`Deck`]'s top card is the last element of `cards`.

use std::fmt;

use crate::error::{Error, Result};
use crate::game::Dealer;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CardFamily {
    French,
    FrenchWithJokers,
    Leduc,
    Uno,
}

impl CardFamily {
    pub fn ranks_per_suit(self) -> u8 {
        match self {
            CardFamily::French | CardFamily::FrenchWithJokers => 13,
            CardFamily::Leduc => 3,
            CardFamily::Uno => 15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Card {
    id: u8,
    family: CardFamily,
    rank: u8,
    suit: u8,
}

pub const FRENCH_RANKS: &[u8; 13] = b"23456789TJQKA";
pub const FRENCH_SUITS: &[u8; 4] = b"SHDC";
pub const LEDUC_RANKS: &[u8; 3] = b"JQK";
pub const UNO_COLORS: &[u8; 4] = b"rgby";

pub const UNO_SKIP: u8 = 10;
pub const UNO_REVERSE: u8 = 11;
pub const UNO_DRAW_TWO: u8 = 12;
pub const UNO_WILD: u8 = 13;
pub const UNO_WILD_DRAW_FOUR: u8 = 14;
pub const UNO_WILD_COLOR: u8 = 4;

impl Card {
    pub fn french(rank: u8, suit: u8) -> Card {
        assert!(rank < 13 && suit < 4, "bad french card {rank}/{suit}");
        Card {
            id: suit * 13 + rank,
            family: CardFamily::French,
            rank,
            suit,
        }
    }

    /// A French card from a deck that also holds jokers.
    pub fn french_in_joker_deck(rank: u8, suit: u8) -> Card {
        Card {
            family: CardFamily::FrenchWithJokers,
            ..Card::french(rank, suit)
        }
    }

    pub fn joker(red: bool) -> Card {
        let rank = red as u8;
        Card {
            id: 52 + rank,
            family: CardFamily::FrenchWithJokers,
            rank,
            suit: 4,
        }
    }

    pub fn leduc(rank: u8, suit: u8) -> Card {
        assert!(rank < 3 && suit < 2, "bad leduc card {rank}/{suit}");
        Card {
            id: suit * 3 + rank,
            family: CardFamily::Leduc,
            rank,
            suit,
        }
    }

    /// UNO card with the given color, symbol and copy index.
    pub fn uno(color: u8, symbol: u8, copy: u8) -> Card {
        let id = match (color, symbol) {
            (UNO_WILD_COLOR, UNO_WILD) => 100 + copy,
            (UNO_WILD_COLOR, UNO_WILD_DRAW_FOUR) => 104 + copy,
            (c, 0) if c < 4 => c * 25,
            (c, s @ 1..=9) if c < 4 => c * 25 + 1 + (s - 1) * 2 + copy,
            (c, s @ UNO_SKIP..=UNO_DRAW_TWO) if c < 4 => c * 25 + 19 + (s - UNO_SKIP) * 2 + copy,
            _ => panic!("bad uno card {color}/{symbol}"),
        };
        Card {
            id,
            family: CardFamily::Uno,
            rank: symbol,
            suit: color,
        }
    }

    #[inline]
    pub fn id(self) -> u8 {
        self.id
    }
    #[inline]
    pub fn family(self) -> CardFamily {
        self.family
    }
    #[inline]
    pub fn rank(self) -> u8 {
        self.rank
    }
    /// Suit for French/Leduc cards, color for UNO cards.
    #[inline]
    pub fn suit(self) -> u8 {
        self.suit
    }
    pub fn is_joker(self) -> bool {
        self.family == CardFamily::FrenchWithJokers && self.suit == 4
    }

    /// Parses a literal such as `TH`, `AS`, `BJ`, `QH` (Leduc) or `r-7` (UNO).
    pub fn parse(family: CardFamily, s: &str) -> Result<Card> {
        let bad = || Error::InvalidParam(format!("bad card literal `{s}`"));
        match family {
            CardFamily::French | CardFamily::FrenchWithJokers => {
                if family == CardFamily::FrenchWithJokers {
                    match s {
                        "BJ" => return Ok(Card::joker(false)),
                        "RJ" => return Ok(Card::joker(true)),
                        _ => {}
                    }
                }
                let b = s.as_bytes();
                if b.len() != 2 {
                    return Err(bad());
                }
                let rank = FRENCH_RANKS.iter().position(|&c| c == b[0]).ok_or_else(bad)? as u8;
                let suit = FRENCH_SUITS.iter().position(|&c| c == b[1]).ok_or_else(bad)? as u8;
                Ok(if family == CardFamily::French {
                    Card::french(rank, suit)
                } else {
                    Card::french_in_joker_deck(rank, suit)
                })
            }
            CardFamily::Leduc => {
                let b = s.as_bytes();
                if b.len() != 2 {
                    return Err(bad());
                }
                let rank = LEDUC_RANKS.iter().position(|&c| c == b[0]).ok_or_else(bad)? as u8;
                let suit = FRENCH_SUITS[..2].iter().position(|&c| c == b[1]).ok_or_else(bad)? as u8;
                Ok(Card::leduc(rank, suit))
            }
            CardFamily::Uno => {
                let (color, symbol) = match s {
                    "wild" => (UNO_WILD_COLOR, UNO_WILD),
                    "wild-d4" => (UNO_WILD_COLOR, UNO_WILD_DRAW_FOUR),
                    _ => {
                        let (c, sym) = s.split_once('-').ok_or_else(bad)?;
                        let color = UNO_COLORS
                            .iter()
                            .position(|&x| c.as_bytes() == [x])
                            .ok_or_else(bad)? as u8;
                        let symbol = match sym {
                            "skip" => UNO_SKIP,
                            "reverse" => UNO_REVERSE,
                            "d2" => UNO_DRAW_TWO,
                            d => d.parse::<u8>().ok().filter(|&d| d <= 9).ok_or_else(bad)?,
                        };
                        (color, symbol)
                    }
                };
                Ok(Card::uno(color, symbol, 0))
            }
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            CardFamily::French | CardFamily::FrenchWithJokers => {
                if self.is_joker() {
                    f.write_str(if self.rank == 1 { "RJ" } else { "BJ" })
                } else {
                    write!(
                        f,
                        "{}{}",
                        FRENCH_RANKS[self.rank as usize] as char,
                        FRENCH_SUITS[self.suit as usize] as char
                    )
                }
            }
            CardFamily::Leduc => write!(
                f,
                "{}{}",
                LEDUC_RANKS[self.rank as usize] as char,
                FRENCH_SUITS[self.suit as usize] as char
            ),
            CardFamily::Uno => f.write_str(&uno_symbol_literal(self.suit, self.rank)),
        }
    }
}

/// Literal for a UNO (color, symbol) pair, e.g. `r-7`, `g-d2`, `wild-d4`.
pub fn uno_symbol_literal(color: u8, symbol: u8) -> String {
    let sym = match symbol {
        UNO_WILD => return "wild".to_owned(),
        UNO_WILD_DRAW_FOUR => return "wild-d4".to_owned(),
        UNO_SKIP => "skip".to_owned(),
        UNO_REVERSE => "reverse".to_owned(),
        UNO_DRAW_TWO => "d2".to_owned(),
        d => d.to_string(),
    };
    format!("{}-{}", UNO_COLORS[color as usize] as char, sym)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeckKind {
    Standard52,
    Standard54,
    Leduc6,
    Uno108,
    Doudizhu54,
    MiniDoudizhu,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Deck {
    kind: DeckKind,
    cards: Vec<Card>,
}

impl Deck {
    /// The canonical unshuffled deck, ordered by ascending card id.
    pub fn new(kind: DeckKind) -> Deck {
        let mut cards = Vec::new();
        match kind {
            DeckKind::Standard52 => {
                for suit in 0..4 {
                    for rank in 0..13 {
                        cards.push(Card::french(rank, suit));
                    }
                }
            }
            DeckKind::Standard54 | DeckKind::Doudizhu54 => {
                for suit in 0..4 {
                    for rank in 0..13 {
                        cards.push(Card::french_in_joker_deck(rank, suit));
                    }
                }
                cards.push(Card::joker(false));
                cards.push(Card::joker(true));
            }
            DeckKind::Leduc6 => {
                for suit in 0..2 {
                    for rank in 0..3 {
                        cards.push(Card::leduc(rank, suit));
                    }
                }
            }
            DeckKind::Uno108 => {
                for color in 0..4 {
                    cards.push(Card::uno(color, 0, 0));
                    for symbol in 1..=UNO_DRAW_TWO {
                        for copy in 0..2 {
                            cards.push(Card::uno(color, symbol, copy));
                        }
                    }
                }
                for copy in 0..4 {
                    cards.push(Card::uno(UNO_WILD_COLOR, UNO_WILD, copy));
                }
                for copy in 0..4 {
                    cards.push(Card::uno(UNO_WILD_COLOR, UNO_WILD_DRAW_FOUR, copy));
                }
                cards.sort_by_key(|c| c.id());
            }
            DeckKind::MiniDoudizhu => {
                // 8 9 T J Q K A
                for suit in 0..4 {
                    for rank in 6..13 {
                        cards.push(Card::french(rank, suit));
                    }
                }
            }
        }
        Deck { kind, cards }
    }

    pub fn from_cards(kind: DeckKind, cards: Vec<Card>) -> Deck {
        Deck { kind, cards }
    }

    pub fn kind(&self) -> DeckKind {
        self.kind
    }
    pub fn cards(&self) -> &[Card] {
        &self.cards
    }
    pub fn into_cards(self) -> Vec<Card> {
        self.cards
    }
    pub fn len(&self) -> usize {
        self.cards.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    pub fn shuffle(&mut self, rng: &mut Rng) {
        rng.shuffle(&mut self.cards);
    }

    /// Removes the top `n` cards, returned in the order they were dealt.
    pub fn deal(&mut self, n: usize) -> Result<Vec<Card>> {
        if n > self.cards.len() {
            return Err(Error::InsufficientCards {
                requested: n,
                available: self.cards.len(),
            });
        }
        let at = self.cards.len() - n;
        let mut dealt = self.cards.split_off(at);
        dealt.reverse();
        Ok(dealt)
    }

    pub fn deal_one(&mut self) -> Option<Card> {
        self.cards.pop()
    }

    /// Removes a specific card; used when enumerating chance outcomes.
    pub fn take(&mut self, card: Card) -> Option<Card> {
        let pos = self.cards.iter().position(|&c| c == card)?;
        Some(self.cards.remove(pos))
    }
}

impl Dealer for Deck {
    fn remaining(&self) -> usize {
        self.len()
    }
    fn deal_card(&mut self) -> Option<Card> {
        self.deal_one()
    }
}

pub fn new_deck(kind: DeckKind) -> Deck {
    Deck::new(kind)
}

pub fn shuffle(mut deck: Deck, rng: &mut Rng) -> Deck {
    deck.shuffle(rng);
    deck
}

pub fn deal(mut deck: Deck, n: usize) -> Result<(Vec<Card>, Deck)> {
    let cards = deck.deal(n)?;
    Ok((cards, deck))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn counts<K: Ord>(cards: &[Card], key: impl Fn(&Card) -> K) -> BTreeMap<K, usize> {
        let mut m = BTreeMap::new();
        for c in cards {
            *m.entry(key(c)).or_default() += 1;
        }
        m
    }

    #[test]
    fn standard52_composition() {
        let d = new_deck(DeckKind::Standard52);
        assert_eq!(d.len(), 52);
        assert!(counts(d.cards(), |c| c.rank()).values().all(|&n| n == 4));
        assert_eq!(counts(d.cards(), |c| c.rank()).len(), 13);
        assert!(counts(d.cards(), |c| c.suit()).values().all(|&n| n == 13));
    }

    #[test]
    fn standard54_has_two_jokers() {
        for kind in [DeckKind::Standard54, DeckKind::Doudizhu54] {
            let d = new_deck(kind);
            assert_eq!(d.len(), 54);
            assert_eq!(d.cards().iter().filter(|c| c.is_joker()).count(), 2);
            let black = Card::joker(false);
            let red = Card::joker(true);
            assert!(black.rank() < red.rank());
        }
    }

    #[test]
    fn mini_doudizhu_keeps_eight_to_ace() {
        let d = new_deck(DeckKind::MiniDoudizhu);
        assert_eq!(d.len(), 28);
        let ranks = counts(d.cards(), |c| FRENCH_RANKS[c.rank() as usize] as char);
        assert_eq!(ranks.keys().collect::<String>(), "89AJKQT");
        assert!(ranks.values().all(|&n| n == 4));
        assert!(d.cards().iter().all(|c| !c.is_joker()));
    }

    #[test]
    fn leduc6_composition() {
        let d = new_deck(DeckKind::Leduc6);
        assert_eq!(d.len(), 6);
        assert!(counts(d.cards(), |c| c.rank()).values().all(|&n| n == 2));
    }

    #[test]
    fn uno108_composition() {
        let d = new_deck(DeckKind::Uno108);
        assert_eq!(d.len(), 108);
        let by_color = counts(d.cards(), |c| c.suit());
        assert_eq!(by_color.values().copied().collect::<Vec<_>>(), vec![25, 25, 25, 25, 8]);
        for color in 0..4u8 {
            let sym = counts(
                &d.cards().iter().copied().filter(|c| c.suit() == color).collect::<Vec<_>>(),
                |c| c.rank(),
            );
            assert_eq!(sym[&0], 1);
            for s in 1..=12u8 {
                assert_eq!(sym[&s], 2, "color {color} symbol {s}");
            }
        }
        let wild = counts(d.cards(), |c| (c.suit(), c.rank()));
        assert_eq!(wild[&(4, UNO_WILD)], 4);
        assert_eq!(wild[&(4, UNO_WILD_DRAW_FOUR)], 4);
    }

    #[test]
    fn ids_are_a_bijection() {
        for kind in [
            DeckKind::Standard52,
            DeckKind::Standard54,
            DeckKind::Leduc6,
            DeckKind::Uno108,
            DeckKind::Doudizhu54,
        ] {
            let d = new_deck(kind);
            let ids: Vec<usize> = d.cards().iter().map(|c| c.id() as usize).collect();
            assert_eq!(ids, (0..d.len()).collect::<Vec<_>>(), "{kind:?}");
        }
    }

    #[test]
    fn deal_zero_and_exhaustion() {
        let d = new_deck(DeckKind::Standard52);
        let (cards, rest) = deal(d.clone(), 0).unwrap();
        assert!(cards.is_empty());
        assert_eq!(rest, d);

        let (cards, rest) = deal(new_deck(DeckKind::Leduc6), 6).unwrap();
        assert_eq!(cards.len(), 6);
        assert!(rest.is_empty());
    }

    #[test]
    fn deal_too_many_errors() {
        let err = deal(new_deck(DeckKind::Leduc6), 7).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientCards {
                requested: 7,
                available: 6
            }
        );
    }

    #[test]
    fn doudizhu_deal_arithmetic() {
        let mut deck = shuffle(new_deck(DeckKind::Doudizhu54), &mut Rng::new(3));
        let hands: Vec<Vec<Card>> = (0..3).map(|_| deck.deal(17).unwrap()).collect();
        let reserved = deck.deal(3).unwrap();
        assert!(deck.is_empty());
        let total: usize = hands.iter().map(Vec::len).sum::<usize>() + reserved.len();
        assert_eq!(total, 54);
    }

    #[test]
    fn literals_round_trip() {
        for kind in [DeckKind::Standard52, DeckKind::Standard54, DeckKind::Leduc6] {
            for c in new_deck(kind).cards() {
                assert_eq!(Card::parse(c.family(), &c.to_string()).unwrap(), *c);
            }
        }
        assert_eq!(Card::parse(CardFamily::French, "TH").unwrap(), Card::french(8, 1));
        assert_eq!(Card::parse(CardFamily::French, "AS").unwrap(), Card::french(12, 0));
        let r7 = Card::parse(CardFamily::Uno, "r-7").unwrap();
        assert_eq!((r7.suit(), r7.rank()), (0, 7));
        assert!(Card::parse(CardFamily::French, "1H").is_err());
    }
}
