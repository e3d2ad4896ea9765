//! Dou Dizhu card combinations.
//!
//! Hands and moves are rank-count vectors over the 15 ranks
//! `3456789TJQKA2BR` (B and R are the black and red jokers). Chains use
//! ranks 3 through A only. Kicker units never share a rank with the primal
//! part and never share a rank with each other; a pair of solo kickers may
//! not be both jokers.

use std::fmt;

use crate::error::{Error, Result};

pub const NUM_RANKS: usize = 15;
pub const RANK_CHARS: &[u8; NUM_RANKS] = b"3456789TJQKA2BR";
pub const ACE: u8 = 11;
pub const TWO: u8 = 12;
pub const BLACK_JOKER: u8 = 13;
pub const RED_JOKER: u8 = 14;
pub const MAX_KICKERS: usize = 5;

/// Card count per rank.
pub type Counts = [u8; NUM_RANKS];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Solo,
    Pair,
    Trio,
    TrioSolo,
    TrioPair,
    SoloChain,
    PairChain,
    Plane,
    PlaneSolo,
    PlanePair,
    QuadTwoSolo,
    QuadTwoPair,
    Bomb,
    Rocket,
    Pass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KickerKind {
    None,
    Solo,
    Pair,
}

impl Category {
    pub const ALL: [Category; 15] = [
        Category::Solo,
        Category::Pair,
        Category::Trio,
        Category::TrioSolo,
        Category::TrioPair,
        Category::SoloChain,
        Category::PairChain,
        Category::Plane,
        Category::PlaneSolo,
        Category::PlanePair,
        Category::QuadTwoSolo,
        Category::QuadTwoPair,
        Category::Bomb,
        Category::Rocket,
        Category::Pass,
    ];

    /// Cards per rank in the primal part.
    pub fn width(self) -> u8 {
        match self {
            Category::Solo | Category::SoloChain => 1,
            Category::Pair | Category::PairChain => 2,
            Category::Trio | Category::TrioSolo | Category::TrioPair => 3,
            Category::Plane | Category::PlaneSolo | Category::PlanePair => 3,
            Category::QuadTwoSolo | Category::QuadTwoPair | Category::Bomb => 4,
            Category::Rocket => 1,
            Category::Pass => 0,
        }
    }

    pub fn kicker_kind(self) -> KickerKind {
        match self {
            Category::TrioSolo | Category::PlaneSolo | Category::QuadTwoSolo => KickerKind::Solo,
            Category::TrioPair | Category::PlanePair | Category::QuadTwoPair => KickerKind::Pair,
            _ => KickerKind::None,
        }
    }

    /// Number of kicker units for a primal part of `length` ranks.
    pub fn num_kickers(self, length: u8) -> u8 {
        match self {
            Category::TrioSolo | Category::TrioPair => 1,
            Category::PlaneSolo | Category::PlanePair => length,
            Category::QuadTwoSolo | Category::QuadTwoPair => 2,
            _ => 0,
        }
    }

    /// Allowed primal lengths.
    pub fn lengths(self) -> std::ops::RangeInclusive<u8> {
        match self {
            Category::SoloChain => 5..=12,
            Category::PairChain => 3..=10,
            Category::Plane => 2..=6,
            Category::PlaneSolo => 2..=5,
            Category::PlanePair => 2..=4,
            _ => 1..=1,
        }
    }

    pub fn is_chain(self) -> bool {
        matches!(
            self,
            Category::SoloChain
                | Category::PairChain
                | Category::Plane
                | Category::PlaneSolo
                | Category::PlanePair
        )
    }

    /// Highest rank the primal part may use.
    pub fn max_rank(self) -> u8 {
        match self {
            _ if self.is_chain() => ACE,
            Category::Solo => RED_JOKER,
            Category::Rocket => RED_JOKER,
            _ => TWO,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Solo => "solo",
            Category::Pair => "pair",
            Category::Trio => "trio",
            Category::TrioSolo => "trio_solo",
            Category::TrioPair => "trio_pair",
            Category::SoloChain => "solo_chain",
            Category::PairChain => "pair_chain",
            Category::Plane => "plane",
            Category::PlaneSolo => "plane_solo",
            Category::PlanePair => "plane_pair",
            Category::QuadTwoSolo => "quad_two_solo",
            Category::QuadTwoPair => "quad_two_pair",
            Category::Bomb => "bomb",
            Category::Rocket => "rocket",
            Category::Pass => "pass",
        }
    }
}

/// A concrete move: category, lowest primal rank, primal length in ranks,
/// and kicker ranks in ascending order (one entry per solo or pair).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DdMove {
    pub category: Category,
    pub primal: u8,
    pub length: u8,
    kickers: [u8; MAX_KICKERS],
    num_kickers: u8,
}

impl DdMove {
    pub const PASS: DdMove = DdMove {
        category: Category::Pass,
        primal: 0,
        length: 0,
        kickers: [0; MAX_KICKERS],
        num_kickers: 0,
    };

    pub fn new(category: Category, primal: u8, length: u8, kickers: &[u8]) -> DdMove {
        let mut k = [0u8; MAX_KICKERS];
        k[..kickers.len()].copy_from_slice(kickers);
        k[..kickers.len()].sort_unstable();
        DdMove {
            category,
            primal,
            length,
            kickers: k,
            num_kickers: kickers.len() as u8,
        }
    }

    /// A move without kickers.
    pub fn plain(category: Category, primal: u8, length: u8) -> DdMove {
        DdMove::new(category, primal, length, &[])
    }

    pub fn kickers(&self) -> &[u8] {
        &self.kickers[..self.num_kickers as usize]
    }

    pub fn is_pass(&self) -> bool {
        self.category == Category::Pass
    }

    /// Ranks covered by the primal part.
    pub fn primal_ranks(&self) -> std::ops::Range<u8> {
        match self.category {
            Category::Pass => 0..0,
            Category::Rocket => BLACK_JOKER..RED_JOKER + 1,
            _ => self.primal..self.primal + self.length,
        }
    }

    /// The card multiset of the move.
    pub fn cards(&self) -> Counts {
        let mut c = [0u8; NUM_RANKS];
        let w = self.category.width();
        for r in self.primal_ranks() {
            c[r as usize] += w;
        }
        let kw = match self.category.kicker_kind() {
            KickerKind::Pair => 2,
            _ => 1,
        };
        for &k in self.kickers() {
            c[k as usize] += kw;
        }
        c
    }

    pub fn num_cards(&self) -> usize {
        self.cards().iter().map(|&n| n as usize).sum()
    }

    /// True when `self` may be played on top of `other`.
    pub fn beats(&self, other: &DdMove) -> bool {
        use Category::*;
        match (self.category, other.category) {
            (Pass, _) | (_, Pass) => false,
            (Rocket, _) => true,
            (_, Rocket) => false,
            (Bomb, Bomb) => self.primal > other.primal,
            (Bomb, _) => true,
            (a, b) => a == b && self.length == other.length && self.primal > other.primal,
        }
    }
}

impl fmt::Display for DdMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return f.write_str("pass");
        }
        f.write_str(&counts_literal(&self.cards()))
    }
}

/// Rank characters in ascending rank order, e.g. `333A`, `BR`.
pub fn counts_literal(c: &Counts) -> String {
    let mut s = String::new();
    for (r, &n) in c.iter().enumerate() {
        for _ in 0..n {
            s.push(RANK_CHARS[r] as char);
        }
    }
    s
}

/// Parses a rank-character literal into counts.
pub fn parse_counts(s: &str) -> Result<Counts> {
    let mut c = [0u8; NUM_RANKS];
    for ch in s.bytes() {
        let r = RANK_CHARS
            .iter()
            .position(|&x| x == ch)
            .ok_or_else(|| Error::InvalidParam(format!("bad rank `{}` in `{s}`", ch as char)))?;
        c[r] += 1;
        let limit = if r >= BLACK_JOKER as usize { 1 } else { 4 };
        if c[r] > limit {
            return Err(Error::InvalidParam(format!("too many `{}` in `{s}`", ch as char)));
        }
    }
    Ok(c)
}

pub fn total(c: &Counts) -> usize {
    c.iter().map(|&n| n as usize).sum()
}

pub fn contains(hand: &Counts, cards: &Counts) -> bool {
    hand.iter().zip(cards).all(|(h, c)| h >= c)
}

/// Checks that `rest` is exactly `n` kicker units of `kind` outside
/// `primal`, returning their ranks in ascending order.
fn kickers_of(rest: &Counts, kind: KickerKind, n: u8, primal: std::ops::Range<u8>) -> Option<Vec<u8>> {
    let unit = match kind {
        KickerKind::Solo => 1,
        KickerKind::Pair => 2,
        KickerKind::None => return (total(rest) == 0).then(Vec::new),
    };
    let mut ranks = Vec::new();
    for (r, &c) in rest.iter().enumerate() {
        match c {
            0 => {}
            c if c == unit => ranks.push(r as u8),
            _ => return None,
        }
    }
    let ok = ranks.len() == n as usize
        && ranks.iter().all(|r| !primal.contains(r))
        && !(kind == KickerKind::Pair && ranks.iter().any(|&r| r >= BLACK_JOKER))
        && !(kind == KickerKind::Solo && ranks.contains(&BLACK_JOKER) && ranks.contains(&RED_JOKER));
    ok.then_some(ranks)
}

/// Every way to read the multiset `cards` as a single move.
pub fn parse_all(cards: &Counts) -> Vec<DdMove> {
    let n = total(cards);
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for cat in Category::ALL {
        if cat == Category::Pass {
            continue;
        }
        if cat == Category::Rocket {
            if n == 2 && cards[BLACK_JOKER as usize] == 1 && cards[RED_JOKER as usize] == 1 {
                out.push(DdMove::plain(Category::Rocket, BLACK_JOKER, 1));
            }
            continue;
        }
        let w = cat.width();
        for length in cat.lengths() {
            let unit = match cat.kicker_kind() {
                KickerKind::Pair => 2,
                _ => 1,
            };
            let expected = (w * length + unit * cat.num_kickers(length)) as usize;
            if expected != n {
                continue;
            }
            for primal in 0..=(cat.max_rank() + 1 - length) {
                let ranks = primal..primal + length;
                if ranks.clone().any(|r| cards[r as usize] < w) {
                    continue;
                }
                if w >= 2 && ranks.clone().any(|r| r >= BLACK_JOKER) {
                    continue;
                }
                let mut rest = *cards;
                for r in ranks.clone() {
                    rest[r as usize] -= w;
                }
                if let Some(k) = kickers_of(&rest, cat.kicker_kind(), cat.num_kickers(length), ranks) {
                    out.push(DdMove::new(cat, primal, length, &k));
                }
            }
        }
    }
    out
}
