//! Generation, enumeration, counting and tree export of the optimal sets.
//!
//! The induction starts from the one-point set at the measure's mean and
//! refines: at each stage the elements of maximal error are the ones whose
//! transition produces a set of the next size. Splitting each maximal unit
//! gives all sets of the next size; counting exploits the plateau structure
//! this induces.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::Error;
use crate::measure::word_params;
use crate::nodes::{node_error, split, Node, NodeKind};
use crate::rational::{int, Rational};
use crate::word::{check_prefix_free, Word};

/// Default bound on the number of sets held per enumeration layer.
pub const DEFAULT_ENUM_CAP: usize = 10_000_000;

/// A canonically ordered, duplicate-free set of nodes whose regions tile the
/// carpet. Construction validates the tiling and the sibling-pair invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OptimalSet {
    nodes: Vec<Node>,
}

impl OptimalSet {
    /// The root of the induction: the single node covering the whole carpet.
    pub fn one_mean() -> Self {
        let node = Node::singleton(Word::empty()).expect("empty word is valid");
        OptimalSet { nodes: vec![node] }
    }

    /// Builds a set from nodes, sorting canonically and validating that
    /// vertical pairs come in sibling pairs and that the region words form a
    /// prefix-free cover of total probability one.
    pub fn from_nodes(mut nodes: Vec<Node>) -> Result<Self, Error> {
        nodes.sort();
        for pair in nodes.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::InvalidSet(format!("duplicate node {}", pair[0])));
            }
        }
        for node in &nodes {
            if let Some(sibling) = node.sibling() {
                if nodes.binary_search(&sibling).is_err() {
                    return Err(Error::MissingSibling {
                        node: node.to_string(),
                    });
                }
            }
        }
        let regions: Vec<Word> = nodes.iter().flat_map(|n| n.region_words()).collect();
        check_prefix_free(&regions).map_err(|e| Error::InvalidSet(e.to_string()))?;
        let total: Rational = regions.iter().map(|w| word_params(w).0).sum();
        if total != int(1) {
            return Err(Error::InvalidSet(format!(
                "regions cover probability {total}, expected 1"
            )));
        }
        Ok(OptimalSet { nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: &Node) -> bool {
        self.nodes.binary_search(node).is_ok()
    }

    /// Length of the longest region word over all nodes.
    pub fn max_region_depth(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.region_depth())
            .max()
            .unwrap_or(0)
    }

    /// Compact deduplication key: each node packed into a fixed-width code.
    pub fn pack_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(self.nodes.len() * 18);
        for node in &self.nodes {
            let (kind, len, bits) = node.pack();
            key.push(kind);
            key.push(len);
            key.extend_from_slice(&bits.to_be_bytes());
        }
        key
    }
}

impl PartialOrd for OptimalSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OptimalSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.nodes.cmp(&other.nodes)
    }
}

impl fmt::Display for OptimalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, n) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "}}")
    }
}

/// One splittable unit of a set: a singleton, a bottom pair, or a vertical
/// sibling pair represented by its `Pair13` member. Splitting a unit yields
/// exactly one set of the next size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitUnit {
    pub representative: Node,
    pub unit_error: Rational,
}

/// Exact distortion of the set: the sum of its node errors.
pub fn set_distortion(set: &OptimalSet) -> Rational {
    set.nodes().iter().map(node_error).sum()
}

/// All split units of the set in canonical order; each vertical sibling pair
/// appears once, represented by its `Pair13` member.
fn split_units(set: &OptimalSet) -> Vec<SplitUnit> {
    set.nodes()
        .iter()
        .filter(|n| n.kind() != NodeKind::Pair24)
        .map(|n| SplitUnit {
            representative: n.clone(),
            unit_error: node_error(n),
        })
        .collect()
}

/// The units of maximal error, in canonical order.
pub fn max_error_units(set: &OptimalSet) -> Vec<SplitUnit> {
    let units = split_units(set);
    let max = units
        .iter()
        .map(|u| u.unit_error.clone())
        .max()
        .expect("a set has at least one unit");
    units.into_iter().filter(|u| u.unit_error == max).collect()
}

/// All sets of the next size obtainable from `set`: one per maximal unit,
/// deduplicated and in canonical order.
pub fn next_sets(set: &OptimalSet) -> Result<Vec<OptimalSet>, Error> {
    let mut out = Vec::new();
    for unit in max_error_units(set) {
        out.push(split(set, &unit.representative)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Tie policy for the deterministic walk: split the canonical-least maximal
/// unit at every stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiePolicy {
    CanonicalLeast,
}

/// Deterministic sequence of one set per size, from 1 to `n_max`.
pub fn greedy_sequence(n_max: u32, _tie: TiePolicy) -> Result<Vec<OptimalSet>, Error> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let mut out = vec![OptimalSet::one_mean()];
    while (out.len() as u32) < n_max {
        let current = out.last().expect("non-empty");
        let unit = max_error_units(current)
            .into_iter()
            .next()
            .expect("a set has at least one unit");
        out.push(split(current, &unit.representative)?);
    }
    Ok(out)
}

/// Breadth-first enumeration of every layer of sizes `1..=n_max`, with
/// canonical deduplication per layer. Layer `i` of the result holds all sets
/// of size `i + 1` in canonical order.
pub fn enumerate_layers(n_max: u32, cap: usize) -> Result<Vec<Vec<OptimalSet>>, Error> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be positive".into()));
    }
    let mut layers = vec![vec![OptimalSet::one_mean()]];
    for level in 1..n_max {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut next = Vec::new();
        for set in layers.last().expect("non-empty") {
            for successor in next_sets(set)? {
                if seen.insert(successor.pack_key()) {
                    if next.len() >= cap {
                        return Err(Error::LayerCapacity {
                            level: level + 1,
                            size: next.len() + 1,
                            cap,
                        });
                    }
                    next.push(successor);
                }
            }
        }
        next.sort();
        layers.push(next);
    }
    Ok(layers)
}

/// Every set of size `n`, in canonical order.
pub fn enumerate_level(n: u32, cap: usize) -> Result<Vec<OptimalSet>, Error> {
    Ok(enumerate_layers(n, cap)?.pop().expect("layer for n exists"))
}

/// Table of the number of distinct sets per size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub entries: BTreeMap<u32, u128>,
    /// True if plateau validation failed somewhere and the affected sizes
    /// were counted by exhaustive enumeration instead.
    pub used_fallback: bool,
}

fn binomial(m: u32, k: u32) -> u128 {
    let k = k.min(m - k.min(m));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(m - i) / u128::from(i + 1);
    }
    acc
}

/// The nodes a unit's split introduces, without constructing the set.
fn unit_children(representative: &Node) -> Result<Vec<Node>, Error> {
    let w = representative.word();
    Ok(match representative.kind() {
        NodeKind::Singleton => vec![
            Node::new(NodeKind::Pair13, w.clone())?,
            Node::new(NodeKind::Pair24, w.clone())?,
        ],
        NodeKind::Pair13 | NodeKind::Pair24 => vec![
            Node::new(NodeKind::Pair12, w.clone())?,
            Node::singleton(w.child(3)?)?,
            Node::singleton(w.child(4)?)?,
        ],
        NodeKind::Pair12 => vec![Node::singleton(w.child(1)?)?, Node::singleton(w.child(2)?)?],
    })
}

/// Checks the plateau preconditions at a unique base set: all maximal units
/// share one error value and every child a split introduces stays strictly
/// below it. Under these conditions the sets of size `base + k` are exactly
/// the choices of `k` of the `m` maximal units.
fn plateau_valid(units: &[SplitUnit]) -> Result<bool, Error> {
    let max = &units[0].unit_error;
    if units.iter().any(|u| &u.unit_error != max) {
        return Ok(false);
    }
    for unit in units {
        for child in unit_children(&unit.representative)? {
            if node_error(&child) >= *max {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Counts the sets of every size in `n_from..=n_to`.
///
/// Walks plateau by plateau from the unique root: a unique base with `m`
/// equal-error units contributes binomial counts for the next `m` sizes and a
/// unique next base. Each plateau is validated exactly before the shortcut is
/// applied; on validation failure the remaining sizes fall back to exhaustive
/// enumeration under [`DEFAULT_ENUM_CAP`].
pub fn count_table(n_from: u32, n_to: u32) -> Result<CountTable, Error> {
    if n_from < 2 || n_from > n_to {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= n_from <= n_to, got {n_from}..{n_to}"
        )));
    }
    let mut entries = BTreeMap::new();
    let mut base = OptimalSet::one_mean();
    let mut base_n: u32 = 1;
    loop {
        let units = max_error_units(&base);
        let m = units.len() as u32;
        if !plateau_valid(&units)? {
            for n in base_n.max(n_from)..=n_to {
                entries.insert(n, enumerate_level(n, DEFAULT_ENUM_CAP)?.len() as u128);
            }
            return Ok(CountTable {
                entries,
                used_fallback: true,
            });
        }
        for k in 0..=m {
            let n = base_n + k;
            if n >= n_from && n <= n_to {
                entries.insert(n, binomial(m, k));
            }
        }
        if base_n + m > n_to {
            return Ok(CountTable {
                entries,
                used_fallback: false,
            });
        }
        for unit in &units {
            base = split(&base, &unit.representative)?;
        }
        base_n += m;
    }
}

/// One edge of the transition tree between consecutive sizes. Indices are
/// 1-based positions in the canonical order of each layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeEdge {
    /// Size of the parent layer.
    pub level: u32,
    pub parent: usize,
    pub child: usize,
}

/// Every edge between the canonical layers of sizes `n_from..=n_to`.
pub fn tree_edges(n_from: u32, n_to: u32, cap: usize) -> Result<Vec<TreeEdge>, Error> {
    if n_from < 1 || n_from >= n_to {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n_from < n_to, got {n_from}..{n_to}"
        )));
    }
    let mut edges = Vec::new();
    let layers = enumerate_layers(n_to, cap)?;
    for level in n_from..n_to {
        let layer = &layers[(level - 1) as usize];
        let next = &layers[level as usize];
        let index: std::collections::HashMap<Vec<u8>, usize> = next
            .iter()
            .enumerate()
            .map(|(i, s)| (s.pack_key(), i + 1))
            .collect();
        for (i, parent) in layer.iter().enumerate() {
            for successor in next_sets(parent)? {
                let j = index[&successor.pack_key()];
                edges.push(TreeEdge {
                    level,
                    parent: i + 1,
                    child: j,
                });
            }
        }
    }
    edges.sort();
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn node(kind: NodeKind, w: &str) -> Node {
        Node::new(kind, Word::parse(w).unwrap()).unwrap()
    }

    fn greedy(n: u32) -> OptimalSet {
        greedy_sequence(n, TiePolicy::CanonicalLeast)
            .unwrap()
            .pop()
            .unwrap()
    }

    #[test]
    fn distortion_of_small_sets() {
        assert_eq!(set_distortion(&OptimalSet::one_mean()), ratio(7, 32));
        assert_eq!(set_distortion(&greedy(2)), ratio(31, 288));
        assert_eq!(set_distortion(&greedy(3)), ratio(5, 96));
        assert_eq!(set_distortion(&greedy(4)), ratio(7, 288));
    }

    #[test]
    fn max_error_units_examples() {
        let two = greedy(2);
        let units = max_error_units(&two);
        assert_eq!(units.len(), 1);
        assert_eq!(units[0].representative, node(NodeKind::Pair13, ""));
        assert_eq!(units[0].unit_error, ratio(31, 576));

        let four = greedy(4);
        let units = max_error_units(&four);
        let reps: Vec<&Node> = units.iter().map(|u| &u.representative).collect();
        assert_eq!(
            reps,
            vec![
                &node(NodeKind::Singleton, "3"),
                &node(NodeKind::Singleton, "4")
            ]
        );
        assert!(units.iter().all(|u| u.unit_error == ratio(7, 768)));
    }

    #[test]
    fn next_sets_counts() {
        assert_eq!(next_sets(&OptimalSet::one_mean()).unwrap().len(), 1);
        assert_eq!(next_sets(&greedy(4)).unwrap().len(), 2);
        assert_eq!(next_sets(&greedy(16)).unwrap().len(), 4);
    }

    #[test]
    fn greedy_examples() {
        let one = greedy_sequence(1, TiePolicy::CanonicalLeast).unwrap();
        assert_eq!(one, vec![OptimalSet::one_mean()]);

        let four = greedy(4);
        let words: Vec<String> = four.nodes().iter().map(|n| n.to_string()).collect();
        assert_eq!(
            words,
            vec![
                "singleton(1)",
                "singleton(2)",
                "singleton(3)",
                "singleton(4)"
            ]
        );

        // the tie at size 4 is broken toward word 3
        let five = greedy(5);
        assert_eq!(
            five.nodes().to_vec(),
            vec![
                node(NodeKind::Singleton, "1"),
                node(NodeKind::Singleton, "2"),
                node(NodeKind::Pair13, "3"),
                node(NodeKind::Pair24, "3"),
                node(NodeKind::Singleton, "4"),
            ]
        );
    }

    #[test]
    fn from_nodes_validates() {
        // missing sibling
        let err = OptimalSet::from_nodes(vec![node(NodeKind::Pair13, "")]);
        assert!(matches!(err, Err(Error::MissingSibling { .. })));

        // incomplete cover
        let err = OptimalSet::from_nodes(vec![
            node(NodeKind::Singleton, "1"),
            node(NodeKind::Singleton, "2"),
        ]);
        assert!(matches!(err, Err(Error::InvalidSet(_))));

        // duplicate node
        let err = OptimalSet::from_nodes(vec![
            node(NodeKind::Singleton, ""),
            node(NodeKind::Singleton, ""),
        ]);
        assert!(matches!(err, Err(Error::InvalidSet(_))));
    }

    #[test]
    fn enumerate_level_small() {
        assert_eq!(enumerate_level(1, 10).unwrap().len(), 1);
        assert_eq!(enumerate_level(5, 10).unwrap().len(), 2);
        assert_eq!(enumerate_level(9, 10).unwrap().len(), 2);
        assert_eq!(enumerate_level(10, 10).unwrap().len(), 1);
    }

    #[test]
    fn enumerate_respects_cap() {
        assert!(matches!(
            enumerate_level(24, 10),
            Err(Error::LayerCapacity {
                size: 11,
                cap: 10,
                ..
            })
        ));
    }

    #[test]
    fn count_table_examples() {
        let table = count_table(73, 82).unwrap().entries;
        assert_eq!(table[&73], 24);
        assert_eq!(table[&76], 10626);
        assert_eq!(table[&82], 1961256);
    }

    #[test]
    fn count_table_rejects_bad_range() {
        assert!(count_table(1, 5).is_err());
        assert!(count_table(6, 5).is_err());
    }

    #[test]
    fn tree_edges_examples() {
        let edges = tree_edges(1, 2, 100).unwrap();
        assert_eq!(
            edges,
            vec![TreeEdge {
                level: 1,
                parent: 1,
                child: 1
            }]
        );

        let edges = tree_edges(16, 17, 100).unwrap();
        assert_eq!(edges.len(), 4);
        assert!(edges.iter().all(|e| e.parent == 1));
    }

    #[test]
    fn binomial_matches_pascal() {
        assert_eq!(binomial(24, 4), 10626);
        assert_eq!(binomial(24, 10), 1961256);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(2, 0), 1);
    }
}
