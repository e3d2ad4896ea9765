//! Helpers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cardtable::games::doudizhu::{Category, Counts, DdMove, NUM_RANKS};
use cardtable::Rng;

const TWO: usize = 12;
const BLACK: usize = 13;
const RED: usize = 14;
const ACE: usize = 11;

/// A move reading as plain data: (category name, primal, length, kickers).
pub type Reading = (&'static str, u8, u8, Vec<u8>);

pub fn reading_of(mv: &DdMove) -> Reading {
    (mv.category.name(), mv.primal, mv.length, mv.kickers().to_vec())
}

/// Every way `cards` can be read as one combination, by brute force over
/// all (family, primal, length) triples and a direct kicker check.
fn readings(cards: &[u8; NUM_RANKS]) -> Vec<Reading> {
    let mut out = Vec::new();
    let n: usize = cards.iter().map(|&c| c as usize).sum();
    // (name, width, min len, max len, highest allowed rank, kicker width, kickers per unit)
    let families: [(&str, u8, usize, usize, usize, u8, usize); 13] = [
        ("solo", 1, 1, 1, RED, 0, 0),
        ("pair", 2, 1, 1, TWO, 0, 0),
        ("trio", 3, 1, 1, TWO, 0, 0),
        ("trio_solo", 3, 1, 1, TWO, 1, 1),
        ("trio_pair", 3, 1, 1, TWO, 2, 1),
        ("solo_chain", 1, 5, 12, ACE, 0, 0),
        ("pair_chain", 2, 3, 10, ACE, 0, 0),
        ("plane", 3, 2, 6, ACE, 0, 0),
        ("plane_solo", 3, 2, 5, ACE, 1, 1),
        ("plane_pair", 3, 2, 4, ACE, 2, 1),
        ("quad_two_solo", 4, 1, 1, TWO, 1, 2),
        ("quad_two_pair", 4, 1, 1, TWO, 2, 2),
        ("bomb", 4, 1, 1, TWO, 0, 0),
    ];
    for (name, width, lo, hi, top, kw, per) in families {
        for len in lo..=hi {
            let want = per * len;
            if width as usize * len + want * kw as usize != n {
                continue;
            }
            for primal in 0..=top {
                if primal + len - 1 > top {
                    break;
                }
                let span = primal..primal + len;
                if span.clone().any(|r| cards[r] < width) {
                    continue;
                }
                let mut rest = *cards;
                for r in span.clone() {
                    rest[r] -= width;
                }
                if kw == 0 {
                    out.push((name, primal as u8, len as u8, vec![]));
                    continue;
                }
                let kick: Vec<usize> = (0..NUM_RANKS).filter(|&r| rest[r] > 0).collect();
                let ok = kick.len() == want
                    && kick.iter().all(|&r| rest[r] == kw && !span.contains(&r))
                    && !(kw == 2 && kick.iter().any(|&r| r >= BLACK))
                    && !(kw == 1 && kick.contains(&BLACK) && kick.contains(&RED));
                if ok {
                    out.push((name, primal as u8, len as u8, kick.iter().map(|&r| r as u8).collect()));
                }
            }
        }
    }
    if n == 2 && cards[BLACK] == 1 && cards[RED] == 1 {
        out.push(("rocket", BLACK as u8, 1, vec![]));
    }
    out
}

fn beats(a: &Reading, b: &Reading) -> bool {
    match (a.0, b.0) {
        ("rocket", _) => true,
        (_, "rocket") => false,
        ("bomb", "bomb") => a.1 > b.1,
        ("bomb", _) => true,
        (_, "bomb") => false,
        (x, y) => x == y && a.2 == b.2 && a.1 > b.1,
    }
}

/// Legal readings from `hand` by enumerating every sub-multiset.
pub fn brute_force_legal(hand: &Counts, to_beat: Option<&Reading>) -> BTreeSet<Reading> {
    let mut out = BTreeSet::new();
    let mut pick = [0u8; NUM_RANKS];
    fn rec(
        r: usize,
        hand: &Counts,
        pick: &mut [u8; NUM_RANKS],
        to_beat: Option<&Reading>,
        out: &mut BTreeSet<Reading>,
    ) {
        if r == NUM_RANKS {
            if pick.iter().all(|&c| c == 0) {
                return;
            }
            for rd in readings(pick) {
                if to_beat.is_none_or(|t| beats(&rd, t)) {
                    out.insert(rd);
                }
            }
            return;
        }
        for c in 0..=hand[r] {
            pick[r] = c;
            rec(r + 1, hand, pick, to_beat, out);
        }
        pick[r] = 0;
    }
    rec(0, hand, &mut pick, to_beat, &mut out);
    if to_beat.is_some() {
        out.insert(("pass", 0, 0, vec![]));
    }
    out
}

/// Random hand of `size` cards from the 54-card deck.
pub fn random_hand(rng: &mut Rng, size: usize) -> Counts {
    let mut deck: Vec<u8> = (0..NUM_RANKS as u8)
        .flat_map(|r| std::iter::repeat_n(r, if r as usize >= BLACK { 1 } else { 4 }))
        .collect();
    rng.shuffle(&mut deck);
    let mut hand = [0u8; NUM_RANKS];
    for &r in &deck[..size] {
        hand[r as usize] += 1;
    }
    hand
}

/// A random combination playable from some other random hand.
pub fn random_to_beat(rng: &mut Rng) -> Option<Reading> {
    if rng.below(4) == 0 {
        return None;
    }
    let other = random_hand(rng, 17);
    let all: Vec<Reading> = brute_force_legal(&other, None).into_iter().collect();
    Some(all[rng.below(all.len())].clone())
}

pub fn to_move(r: &Reading) -> DdMove {
    if r.0 == "pass" {
        return DdMove::PASS;
    }
    let cat = Category::ALL.into_iter().find(|c| c.name() == r.0).expect("known family");
    DdMove::new(cat, r.1, r.2, &r.3)
}
