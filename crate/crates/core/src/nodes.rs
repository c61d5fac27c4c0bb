//! The four shapes an element of an optimal set can take, their exact
//! centroids and errors, and the transitions that refine them.
//!
//! Every element of an optimal set is the centroid of either a single square
//! (`Singleton`) or of a union of two sibling squares: the left and right
//! vertical pairs (`Pair13`, `Pair24`, children 1&3 resp. 2&4 of a common
//! parent word) or the bottom horizontal pair (`Pair12`). A `Pair13` and the
//! matching `Pair24` always occur together; the transition that removes them
//! removes both at once.

use std::fmt;

use crate::engine::OptimalSet;
use crate::error::Error;
use crate::measure::{centroid, digit_map, moments, word_params};
use crate::rational::{ratio, Rational};
use crate::word::Word;
use crate::ExactPoint;

/// Shape of an optimal-set element. The declaration order is the canonical
/// kind rank used when ordering nodes over a common word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Singleton,
    Pair12,
    Pair13,
    Pair24,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Singleton => "singleton",
            NodeKind::Pair12 => "pair12",
            NodeKind::Pair13 => "pair13",
            NodeKind::Pair24 => "pair24",
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "singleton" => Ok(NodeKind::Singleton),
            "pair12" => Ok(NodeKind::Pair12),
            "pair13" => Ok(NodeKind::Pair13),
            "pair24" => Ok(NodeKind::Pair24),
            _ => Err(Error::InvalidArgument(format!("unknown node kind {s:?}"))),
        }
    }
}

/// One element of an optimal set: a kind together with the word it refines.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    word: Word,
    kind: NodeKind,
}

impl Node {
    /// Builds a node, checking that its region words stay within the depth
    /// cap (pair kinds extend the word by one digit).
    pub fn new(kind: NodeKind, word: Word) -> Result<Self, Error> {
        if kind != NodeKind::Singleton {
            // probe one extension; all region digits have the same length
            word.child(1)?;
        }
        Ok(Node { word, kind })
    }

    pub fn singleton(word: Word) -> Result<Self, Error> {
        Node::new(NodeKind::Singleton, word)
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// The words of the squares forming this node's region.
    pub fn region_words(&self) -> Vec<Word> {
        let child = |d| self.word.child(d).expect("checked on construction");
        match self.kind {
            NodeKind::Singleton => vec![self.word.clone()],
            NodeKind::Pair12 => vec![child(1), child(2)],
            NodeKind::Pair13 => vec![child(1), child(3)],
            NodeKind::Pair24 => vec![child(2), child(4)],
        }
    }

    /// Length of the longest region word.
    pub fn region_depth(&self) -> usize {
        match self.kind {
            NodeKind::Singleton => self.word.len(),
            _ => self.word.len() + 1,
        }
    }

    /// The sibling that must accompany this node, if any: `Pair13` and
    /// `Pair24` over the same word form an inseparable pair.
    pub fn sibling(&self) -> Option<Node> {
        let kind = match self.kind {
            NodeKind::Pair13 => NodeKind::Pair24,
            NodeKind::Pair24 => NodeKind::Pair13,
            _ => return None,
        };
        Some(Node {
            word: self.word.clone(),
            kind,
        })
    }

    /// Canonical ordering key: word length, then word, then kind rank.
    fn order_key(&self) -> (usize, &Word, NodeKind) {
        (self.word.len(), &self.word, self.kind)
    }

    /// Fixed-width code for deduplication: kind, length, then the digits
    /// packed two bits each.
    pub fn pack(&self) -> (u8, u8, u128) {
        let mut bits: u128 = 0;
        for &d in self.word.digits() {
            bits = (bits << 2) | u128::from(d - 1);
        }
        (self.kind as u8, self.word.len() as u8, bits)
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind.as_str(), self.word)
    }
}

/// Error of a vertical sibling pair relative to the parent square's error.
pub fn vertical_pair_ratio() -> Rational {
    ratio(31, 126)
}

/// Error of the bottom horizontal pair relative to the parent square's error.
pub fn bottom_pair_ratio() -> Rational {
    ratio(13, 84)
}

/// Error of the square addressed by `word` when quantized to its own
/// centroid: `p * s^2 * V`.
pub fn square_error(word: &Word) -> Rational {
    let (p, s) = word_params(word);
    p * s.clone() * s * moments().variance.clone()
}

/// Exact centroid of the node's region.
pub fn node_centroid(node: &Node) -> ExactPoint {
    let mean = &moments().mean;
    let map = |d| digit_map(d, mean);
    let combine = |light: ExactPoint, heavy: ExactPoint| {
        // weights 1/8 and 3/8 normalize to 1/4 and 3/4
        let quarter = ratio(1, 4);
        let three_quarters = ratio(3, 4);
        ExactPoint::new(
            quarter.clone() * light.x + three_quarters.clone() * heavy.x,
            quarter * light.y + three_quarters * heavy.y,
        )
    };
    let inner = match node.kind() {
        NodeKind::Singleton => return centroid(node.word()),
        NodeKind::Pair13 => combine(map(1), map(3)),
        NodeKind::Pair24 => combine(map(2), map(4)),
        NodeKind::Pair12 => {
            // equal weights: midpoint
            let half = ratio(1, 2);
            let (a, b) = (map(1), map(2));
            ExactPoint::new(half.clone() * (a.x + b.x), half * (a.y + b.y))
        }
    };
    crate::measure::apply_map(node.word(), &inner)
}

/// Exact distortion contribution of the node: the error of quantizing its
/// region to its centroid.
pub fn node_error(node: &Node) -> Rational {
    let base = square_error(node.word());
    match node.kind() {
        NodeKind::Singleton => base,
        NodeKind::Pair13 | NodeKind::Pair24 => vertical_pair_ratio() * base,
        NodeKind::Pair12 => bottom_pair_ratio() * base,
    }
}

/// Applies the refinement transition at `node`, producing a set with one more
/// element:
///
/// * a singleton is replaced by the two vertical pairs of its word;
/// * a vertical pair is removed together with its sibling and replaced by the
///   bottom pair and the two top singletons;
/// * a bottom pair is replaced by the two bottom singletons.
pub fn split(set: &OptimalSet, node: &Node) -> Result<OptimalSet, Error> {
    if !set.contains(node) {
        return Err(Error::NodeNotInSet {
            node: node.to_string(),
        });
    }
    let w = node.word();
    let mut nodes: Vec<Node> = set.nodes().to_vec();
    match node.kind() {
        NodeKind::Singleton => {
            nodes.retain(|n| n != node);
            nodes.push(Node::new(NodeKind::Pair13, w.clone())?);
            nodes.push(Node::new(NodeKind::Pair24, w.clone())?);
        }
        NodeKind::Pair13 | NodeKind::Pair24 => {
            let sibling = node.sibling().expect("vertical pairs have siblings");
            if !set.contains(&sibling) {
                return Err(Error::MissingSibling {
                    node: node.to_string(),
                });
            }
            nodes.retain(|n| n != node && n != &sibling);
            nodes.push(Node::new(NodeKind::Pair12, w.clone())?);
            nodes.push(Node::singleton(w.child(3)?)?);
            nodes.push(Node::singleton(w.child(4)?)?);
        }
        NodeKind::Pair12 => {
            nodes.retain(|n| n != node);
            nodes.push(Node::singleton(w.child(1)?)?);
            nodes.push(Node::singleton(w.child(2)?)?);
        }
    }
    OptimalSet::from_nodes(nodes)
}

/// Evaluates the eight exact comparison identities relating the errors of two
/// words' refinements, and returns true iff every one holds.
///
/// Each identity asserts that one error comparison is equivalent to a
/// comparison of the totals left after refining one side or the other. Where
/// a vertical sibling pair appears as the subject of the comparison, its
/// error is the combined error of both siblings, matching how the pair enters
/// a transition (both siblings are replaced together).
pub fn comparison_equivalences(omega: &Word, tau: &Word) -> bool {
    let e = square_error;
    // per-word refinement errors
    let vp = |w: &Word| vertical_pair_ratio() * e(w); // one vertical pair
    let bp = |w: &Word| bottom_pair_ratio() * e(w); // bottom pair
    let top = |w: &Word| ratio(1, 24) * e(w); // one top singleton
    let bot = |w: &Word| ratio(1, 72) * e(w); // one bottom singleton
    let two = ratio(2, 1);

    let (o, t) = (omega, tau);
    let checks: [(bool, bool); 8] = [
        // singleton vs singleton
        (
            e(o) > e(t),
            two.clone() * vp(o) + e(t) < e(o) + two.clone() * vp(t),
        ),
        // singleton vs vertical pair (combined)
        (
            e(o) > two.clone() * vp(t),
            two.clone() * vp(o) + two.clone() * vp(t) < e(o) + bp(t) + two.clone() * top(t),
        ),
        // vertical pair vs vertical pair
        (
            vp(o) > vp(t),
            bp(o) + two.clone() * top(o) + two.clone() * vp(t)
                < two.clone() * vp(o) + bp(t) + two.clone() * top(t),
        ),
        // vertical pair (combined) vs singleton
        (
            two.clone() * vp(o) > e(t),
            bp(o) + two.clone() * top(o) + e(t) < two.clone() * vp(o) + two.clone() * vp(t),
        ),
        // bottom pair vs singleton
        (
            bp(o) > e(t),
            two.clone() * bot(o) + e(t) < bp(o) + two.clone() * vp(t),
        ),
        // bottom pair vs vertical pair
        (
            bp(o) > vp(t),
            two.clone() * bot(o) + two.clone() * vp(t) < bp(o) + bp(t) + two.clone() * top(t),
        ),
        // bottom pair vs bottom pair
        (
            bp(o) > bp(t),
            two.clone() * bot(o) + bp(t) < bp(o) + two.clone() * bot(t),
        ),
        // singleton vs bottom pair
        (
            e(o) > bp(t),
            two.clone() * vp(o) + bp(t) < e(o) + two * bot(t),
        ),
    ];
    checks.iter().all(|(a, b)| a == b)
}
