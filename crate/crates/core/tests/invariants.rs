//! Property suites for the measure layer and the node taxonomy: everything
//! here is checked in exact arithmetic.

use std::collections::HashMap;

use proptest::prelude::*;

use carpetq_core::measure::{
    cell_distortion, centroid, conditional_centroid, digit_weight, moments, union_distortion,
    word_params,
};
use carpetq_core::nodes::{
    comparison_equivalences, node_centroid, node_error, square_error, Node, NodeKind,
};
use carpetq_core::rational::{int, ratio, Rational};
use carpetq_core::word::{words_of_length, Word};
use carpetq_core::ExactPoint;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1u8..=4, 0..=max_len)
        .prop_map(|digits| Word::from_digits(&digits).unwrap())
}

fn kind_strategy() -> impl Strategy<Value = NodeKind> {
    prop_oneof![
        Just(NodeKind::Singleton),
        Just(NodeKind::Pair12),
        Just(NodeKind::Pair13),
        Just(NodeKind::Pair24),
    ]
}

/// Rational in the closed unit interval with a small denominator.
fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=36, 1i64..=36).prop_map(|(n, d)| ratio(n.min(d), d))
}

proptest! {
    #[test]
    fn word_params_is_multiplicative(w in word_strategy(7), d in 1u8..=4) {
        let (p, s) = word_params(&w);
        let child = w.child(d).unwrap();
        let (pc, sc) = word_params(&child);
        prop_assert_eq!(pc, p * digit_weight(d));
        prop_assert_eq!(sc, s * ratio(1, 3));
    }

    #[test]
    fn centroid_decomposes_over_children(w in word_strategy(6)) {
        let children: Vec<Word> = (1..=4).map(|d| w.child(d).unwrap()).collect();
        prop_assert_eq!(centroid(&w), conditional_centroid(&children).unwrap());
    }

    #[test]
    fn cell_distortion_is_minimized_at_the_centroid(
        w in word_strategy(5),
        x in unit_rational(),
        y in unit_rational(),
    ) {
        let (p, s) = word_params(&w);
        let floor = p * s.clone() * s * moments().variance.clone();
        let pt = ExactPoint::new(x, y);
        let d = cell_distortion(&w, &pt);
        prop_assert!(d >= floor);
        prop_assert_eq!(d == floor, pt == centroid(&w));
    }

    #[test]
    fn sibling_errors_are_strictly_ordered(w in word_strategy(8)) {
        let vp = node_error(&Node::new(NodeKind::Pair13, w.clone()).unwrap());
        let vp2 = node_error(&Node::new(NodeKind::Pair24, w.clone()).unwrap());
        let bp = node_error(&Node::new(NodeKind::Pair12, w.clone()).unwrap());
        let top3 = node_error(&Node::singleton(w.child(3).unwrap()).unwrap());
        let top4 = node_error(&Node::singleton(w.child(4).unwrap()).unwrap());
        let bot1 = node_error(&Node::singleton(w.child(1).unwrap()).unwrap());
        let bot2 = node_error(&Node::singleton(w.child(2).unwrap()).unwrap());
        prop_assert_eq!(&vp, &vp2);
        prop_assert_eq!(&top3, &top4);
        prop_assert_eq!(&bot1, &bot2);
        prop_assert!(vp > bp);
        prop_assert!(bp > top3);
        prop_assert!(top3 > bot1);
    }

    #[test]
    fn split_children_have_strictly_smaller_error(w in word_strategy(8), kind in kind_strategy()) {
        let node = Node::new(kind, w.clone()).unwrap();
        let parent_error = node_error(&node);
        let children: Vec<Node> = match kind {
            NodeKind::Singleton => vec![
                Node::new(NodeKind::Pair13, w.clone()).unwrap(),
                Node::new(NodeKind::Pair24, w.clone()).unwrap(),
            ],
            NodeKind::Pair13 | NodeKind::Pair24 => vec![
                Node::new(NodeKind::Pair12, w.clone()).unwrap(),
                Node::singleton(w.child(3).unwrap()).unwrap(),
                Node::singleton(w.child(4).unwrap()).unwrap(),
            ],
            NodeKind::Pair12 => vec![
                Node::singleton(w.child(1).unwrap()).unwrap(),
                Node::singleton(w.child(2).unwrap()).unwrap(),
            ],
        };
        for child in children {
            prop_assert!(node_error(&child) < parent_error, "{} !< {}", child, node);
        }
    }

    #[test]
    fn node_error_equals_direct_union_distortion(w in word_strategy(6), kind in kind_strategy()) {
        let node = Node::new(kind, w).unwrap();
        let direct = union_distortion(&node.region_words(), &node_centroid(&node)).unwrap();
        prop_assert_eq!(node_error(&node), direct);
    }

    #[test]
    fn node_centroid_equals_conditional_centroid(w in word_strategy(6), kind in kind_strategy()) {
        let node = Node::new(kind, w).unwrap();
        prop_assert_eq!(node_centroid(&node), conditional_centroid(&node.region_words()).unwrap());
    }

    #[test]
    fn comparison_equivalences_hold(a in word_strategy(8), b in word_strategy(8)) {
        prop_assert!(comparison_equivalences(&a, &b));
    }

    #[test]
    fn produced_points_stay_in_the_unit_square(w in word_strategy(8), kind in kind_strategy()) {
        use carpetq_core::rational::in_unit_interval;
        let c = centroid(&w);
        prop_assert!(in_unit_interval(&c.x) && in_unit_interval(&c.y));
        let nc = node_centroid(&Node::new(kind, w).unwrap());
        prop_assert!(in_unit_interval(&nc.x) && in_unit_interval(&nc.y));
    }
}

#[test]
fn level_probabilities_sum_to_one_up_to_depth_six() {
    for k in 0..=6 {
        let total: Rational = words_of_length(k).iter().map(|w| word_params(w).0).sum();
        assert_eq!(total, int(1), "level {k}");
    }
}

#[test]
fn error_classes_separate_kind_and_word_shape() {
    // group every node of word length <= 5 by exact error value: equal errors
    // must share the kind family and the (length, heavy-digit-count) shape
    let kinds = [
        NodeKind::Singleton,
        NodeKind::Pair12,
        NodeKind::Pair13,
        NodeKind::Pair24,
    ];
    let family = |k: NodeKind| match k {
        NodeKind::Singleton => 0,
        NodeKind::Pair12 => 1,
        NodeKind::Pair13 | NodeKind::Pair24 => 2,
    };
    let mut groups: HashMap<Rational, Vec<(u8, usize, usize)>> = HashMap::new();
    for len in 0..=5 {
        for w in words_of_length(len) {
            for kind in kinds {
                let node = Node::new(kind, w.clone()).unwrap();
                groups.entry(node_error(&node)).or_default().push((
                    family(kind),
                    w.len(),
                    w.heavy_count(),
                ));
            }
        }
    }
    // 3 kind families times 21 (length, heavy-count) shapes for length <= 5
    assert_eq!(groups.len(), 63);
    for (error, members) in groups {
        let first = members[0];
        assert!(
            members.iter().all(|m| *m == first),
            "error {error} groups distinct classes: {members:?}"
        );
    }
}

#[test]
fn square_error_ratios_match_the_digit_weights() {
    for w in ["", "2", "31", "144"] {
        let w = Word::parse(w).unwrap();
        let base = square_error(&w);
        for d in 1..=4u8 {
            let expected = if d <= 2 { ratio(1, 72) } else { ratio(1, 24) };
            assert_eq!(square_error(&w.child(d).unwrap()), base.clone() * expected);
        }
    }
}
