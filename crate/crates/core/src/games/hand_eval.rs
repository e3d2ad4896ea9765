//! Poker hand ranking for five to seven cards.
//!
//! Ranks are compared by category first, then by a tiebreak vector of card
//! ranks (highest first). The A-2-3-4-5 wheel is the lowest straight and
//! suits never break ties.

use crate::card::Card;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HandCategory {
    HighCard,
    Pair,
    TwoPair,
    Trips,
    Straight,
    Flush,
    FullHouse,
    Quads,
    StraightFlush,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HandRank {
    pub category: HandCategory,
    /// Ranks 0..13 (`2`..`A`) in significance order, zero-padded.
    pub tiebreak: [u8; 5],
}

/// Highest rank of a five-long run in `mask` (bit r = rank r present).
fn straight_high(mask: u16) -> Option<u8> {
    for high in (4..13u8).rev() {
        let run = 0b1_1111u16 << (high - 4);
        if mask & run == run {
            return Some(high);
        }
    }
    // Wheel: A-2-3-4-5 plays as a five-high straight.
    let wheel = (1u16 << 12) | 0b1111;
    (mask & wheel == wheel).then_some(3)
}

fn top_ranks(mask: u16, n: usize) -> impl Iterator<Item = u8> {
    (0..13u8).rev().filter(move |&r| mask & (1 << r) != 0).take(n)
}

fn pack(category: HandCategory, ranks: impl IntoIterator<Item = u8>) -> HandRank {
    let mut tiebreak = [0u8; 5];
    for (slot, r) in tiebreak.iter_mut().zip(ranks) {
        *slot = r;
    }
    HandRank { category, tiebreak }
}

/// Best five-card rank among `cards` (five to seven distinct French cards).
pub fn evaluate(cards: &[Card]) -> Result<HandRank> {
    if !(5..=7).contains(&cards.len()) {
        return Err(Error::InvalidParam(format!(
            "hand evaluation needs 5 to 7 cards, got {}",
            cards.len()
        )));
    }
    let mut seen = 0u64;
    let mut counts = [0u8; 13];
    let mut suits = [0u16; 4];
    for &c in cards {
        let bit = 1u64 << (c.suit() as u64 * 13 + c.rank() as u64);
        if seen & bit != 0 {
            return Err(Error::DuplicateCard(c.to_string()));
        }
        seen |= bit;
        counts[c.rank() as usize] += 1;
        suits[c.suit() as usize] |= 1 << c.rank();
    }

    let flush = suits.iter().copied().find(|m| m.count_ones() >= 5);
    if let Some(fm) = flush {
        if let Some(high) = straight_high(fm) {
            return Ok(pack(HandCategory::StraightFlush, [high]));
        }
    }

    let with_count = |n: u8| (0..13u8).rev().filter(move |&r| counts[r as usize] == n);
    let mask_excluding = |skip: &[u8]| {
        (0..13u8)
            .filter(|&r| counts[r as usize] > 0 && !skip.contains(&r))
            .fold(0u16, |m, r| m | (1 << r))
    };

    if let Some(q) = with_count(4).next() {
        return Ok(pack(HandCategory::Quads, [q].into_iter().chain(top_ranks(mask_excluding(&[q]), 1))));
    }

    let trips: Vec<u8> = with_count(3).collect();
    let pairs: Vec<u8> = with_count(2).collect();
    if let Some(&t) = trips.first() {
        let best_pair = trips.iter().skip(1).chain(pairs.iter()).copied().max();
        if let Some(p) = best_pair {
            return Ok(pack(HandCategory::FullHouse, [t, p]));
        }
    }

    if let Some(fm) = flush {
        return Ok(pack(HandCategory::Flush, top_ranks(fm, 5)));
    }

    let all = mask_excluding(&[]);
    if let Some(high) = straight_high(all) {
        return Ok(pack(HandCategory::Straight, [high]));
    }

    if let Some(&t) = trips.first() {
        return Ok(pack(HandCategory::Trips, [t].into_iter().chain(top_ranks(mask_excluding(&[t]), 2))));
    }
    if pairs.len() >= 2 {
        let (a, b) = (pairs[0], pairs[1]);
        return Ok(pack(
            HandCategory::TwoPair,
            [a, b].into_iter().chain(top_ranks(mask_excluding(&[a, b]), 1)),
        ));
    }
    if let Some(&p) = pairs.first() {
        return Ok(pack(HandCategory::Pair, [p].into_iter().chain(top_ranks(mask_excluding(&[p]), 3))));
    }
    Ok(pack(HandCategory::HighCard, top_ranks(all, 5)))
}

/// Rank of the best five-card hand within seven distinct cards.
pub fn evaluate_seven(cards: &[Card]) -> Result<HandRank> {
    if cards.len() != 7 {
        return Err(Error::InvalidParam(format!("expected 7 cards, got {}", cards.len())));
    }
    evaluate(cards)
}
