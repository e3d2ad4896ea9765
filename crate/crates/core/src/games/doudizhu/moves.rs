//! Legal-move generation and kicker completion.

use super::pattern::{Category, Counts, DdMove, KickerKind, BLACK_JOKER, NUM_RANKS, RED_JOKER};
use super::table::{dd_abstract, table, PASS_ID};
use crate::error::{Error, Result};
use crate::game::ActionId;

/// Visits kicker sets for the primal part `primal`, each as ascending
/// ranks, in lexicographic order. Stops when `visit` returns false and
/// reports whether the walk ran to completion.
fn for_each_kickers(
    rest: &Counts,
    kind: KickerKind,
    n: u8,
    primal: std::ops::Range<u8>,
    visit: &mut dyn FnMut(&[u8]) -> bool,
) -> bool {
    let unit = match kind {
        KickerKind::None => return visit(&[]),
        KickerKind::Solo => 1,
        KickerKind::Pair => 2,
    };
    let top = if kind == KickerKind::Pair { BLACK_JOKER } else { NUM_RANKS as u8 };
    let candidates: Vec<u8> = (0..top)
        .filter(|r| !primal.contains(r) && rest[*r as usize] >= unit)
        .collect();
    let mut chosen = Vec::with_capacity(n as usize);
    fn rec(
        candidates: &[u8],
        start: usize,
        n: usize,
        kind: KickerKind,
        chosen: &mut Vec<u8>,
        visit: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        if chosen.len() == n {
            if kind == KickerKind::Solo && chosen.contains(&BLACK_JOKER) && chosen.contains(&RED_JOKER) {
                return true;
            }
            return visit(chosen);
        }
        let need = n - chosen.len();
        for i in start..candidates.len() {
            if candidates.len() - i < need {
                break;
            }
            chosen.push(candidates[i]);
            let go_on = rec(candidates, i + 1, n, kind, chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(&candidates, 0, n as usize, kind, &mut chosen, visit)
}

fn primal_fits(hand: &Counts, cat: Category, primal: u8, length: u8) -> bool {
    if cat == Category::Rocket {
        return hand[BLACK_JOKER as usize] >= 1 && hand[RED_JOKER as usize] >= 1;
    }
    let w = cat.width();
    (primal..primal + length).all(|r| hand[r as usize] >= w)
}

fn without_primal(hand: &Counts, mv: &DdMove) -> Counts {
    let mut rest = *hand;
    let w = mv.category.width();
    for r in mv.primal_ranks() {
        rest[r as usize] -= w;
    }
    rest
}

/// Emits moves of `cat` with the given length and primal above `min_primal`
/// (exclusive when `Some`). With `first_only`, one kicker set per primal.
fn gen_family(
    hand: &Counts,
    cat: Category,
    length: u8,
    above: Option<u8>,
    first_only: bool,
    out: &mut Vec<DdMove>,
) {
    if cat == Category::Rocket {
        if primal_fits(hand, cat, BLACK_JOKER, 1) {
            out.push(DdMove::plain(Category::Rocket, BLACK_JOKER, 1));
        }
        return;
    }
    let lo = above.map_or(0, |p| p + 1);
    if cat.max_rank() + 1 < length {
        return;
    }
    for primal in lo..=(cat.max_rank() + 1 - length) {
        if !primal_fits(hand, cat, primal, length) {
            continue;
        }
        let major = DdMove::plain(cat, primal, length);
        let rest = without_primal(hand, &major);
        for_each_kickers(&rest, cat.kicker_kind(), cat.num_kickers(length), major.primal_ranks(), &mut |k| {
            out.push(DdMove::new(cat, primal, length, k));
            !first_only
        });
    }
}

fn gen_all(hand: &Counts, to_beat: Option<&DdMove>, first_only: bool) -> Vec<DdMove> {
    let mut out = Vec::new();
    match to_beat.filter(|t| !t.is_pass()) {
        None => {
            for cat in Category::ALL {
                if cat == Category::Pass {
                    continue;
                }
                for length in cat.lengths() {
                    gen_family(hand, cat, length, None, first_only, &mut out);
                }
            }
        }
        Some(t) => {
            match t.category {
                Category::Rocket => {}
                Category::Bomb => {
                    gen_family(hand, Category::Bomb, 1, Some(t.primal), first_only, &mut out);
                    gen_family(hand, Category::Rocket, 1, None, first_only, &mut out);
                }
                cat => {
                    gen_family(hand, cat, t.length, Some(t.primal), first_only, &mut out);
                    gen_family(hand, Category::Bomb, 1, None, first_only, &mut out);
                    gen_family(hand, Category::Rocket, 1, None, first_only, &mut out);
                }
            }
            out.push(DdMove::PASS);
        }
    }
    out
}

/// Every concrete move playable from `hand`.
///
/// With nothing to beat (a new trick) the mover must play; otherwise the
/// moves are those beating `to_beat` plus pass.
pub fn dd_legal_moves(hand: &Counts, to_beat: Option<&DdMove>) -> Vec<DdMove> {
    gen_all(hand, to_beat, false)
}

/// Sorted abstract ids of [`dd_legal_moves`].
pub fn dd_legal_actions(hand: &Counts, to_beat: Option<&DdMove>) -> Vec<ActionId> {
    let mut ids: Vec<ActionId> = gen_all(hand, to_beat, true).iter().map(dd_abstract).collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

/// True when using `kickers` would split a bomb or the rocket in `hand`.
fn breaks_combo(hand: &Counts, kickers: &[u8]) -> bool {
    let rocket = hand[BLACK_JOKER as usize] == 1 && hand[RED_JOKER as usize] == 1;
    kickers
        .iter()
        .any(|&r| hand[r as usize] == 4 || (rocket && r >= BLACK_JOKER))
}

/// Concrete move for abstract `action`.
///
/// Kickers are the lexicographically lowest eligible set that keeps every
/// bomb and the rocket intact; if every set splits one, the lowest set.
pub fn dd_decode(action: ActionId, hand: &Counts, to_beat: Option<&DdMove>) -> Result<DdMove> {
    let major = table().entry(action).ok_or(Error::NoConcreteMove(action))?;
    let to_beat = to_beat.filter(|t| !t.is_pass());
    if action == PASS_ID {
        return match to_beat {
            Some(_) => Ok(DdMove::PASS),
            None => Err(Error::NoConcreteMove(action)),
        };
    }
    if !primal_fits(hand, major.category, major.primal, major.length) {
        return Err(Error::NoConcreteMove(action));
    }
    if let Some(t) = to_beat {
        if !major.beats(t) {
            return Err(Error::NoConcreteMove(action));
        }
    }
    let rest = without_primal(hand, &major);
    let mut first: Option<DdMove> = None;
    let mut safe: Option<DdMove> = None;
    for_each_kickers(
        &rest,
        major.category.kicker_kind(),
        major.category.num_kickers(major.length),
        major.primal_ranks(),
        &mut |k| {
            let mv = DdMove::new(major.category, major.primal, major.length, k);
            first.get_or_insert(mv);
            if breaks_combo(hand, k) {
                true
            } else {
                safe = Some(mv);
                false
            }
        },
    );
    safe.or(first).ok_or(Error::NoConcreteMove(action))
}
