mod common;

use std::collections::BTreeSet;

use cardtable::games::doudizhu::{
    dd_abstract, dd_decode, dd_legal_actions, dd_legal_moves, parse_counts, table, NUM_ACTIONS, PASS_ID,
};
use cardtable::Rng;
use common::{brute_force_legal, random_hand, random_to_beat, reading_of, to_move, Reading};

fn engine(hand: &cardtable::games::doudizhu::Counts, to_beat: Option<&Reading>) -> BTreeSet<Reading> {
    let tb = to_beat.map(to_move);
    dd_legal_moves(hand, tb.as_ref()).iter().map(reading_of).collect()
}

#[test]
fn engine_matches_brute_force_on_random_hands() {
    let mut rng = Rng::new(2024);
    for i in 0..150 {
        let size = [5, 10, 17, 20][i % 4];
        let hand = random_hand(&mut rng, size);
        let to_beat = random_to_beat(&mut rng);
        let want = brute_force_legal(&hand, to_beat.as_ref());
        let got = engine(&hand, to_beat.as_ref());
        assert_eq!(got, want, "hand {hand:?} against {to_beat:?}");
    }
}

#[test]
fn kicker_edge_cases() {
    let hand = parse_counts("333444BR").unwrap();
    let got = engine(&hand, None);
    assert!(!got.iter().any(|r| r.0 == "plane_solo" && r.3 == vec![13, 14]));
    assert!(got.contains(&("rocket", 13, 1, vec![])));
    let hand = parse_counts("33334455").unwrap();
    let got = engine(&hand, None);
    assert!(got.contains(&("quad_two_pair", 0, 1, vec![1, 2])));
    assert_eq!(got, brute_force_legal(&hand, None));
}

#[test]
fn table_shape_and_pass() {
    assert_eq!(table().len(), NUM_ACTIONS);
    assert_eq!(PASS_ID, 308);
}

#[test]
fn abstract_ids_decode_back_to_the_same_major_part() {
    let mut rng = Rng::new(5);
    for _ in 0..300 {
        let hand = random_hand(&mut rng, 17);
        let to_beat = random_to_beat(&mut rng).map(|r| to_move(&r));
        for id in dd_legal_actions(&hand, to_beat.as_ref()) {
            let mv = dd_decode(id, &hand, to_beat.as_ref()).unwrap();
            assert_eq!(dd_abstract(&mv), id);
        }
    }
}
