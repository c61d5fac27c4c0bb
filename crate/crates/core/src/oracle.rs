//! Independent verification of the engine's claims.
//!
//! The measure is replaced by a level-`k` discretization: one point mass per
//! level-`k` square, sitting at the square's centroid and carrying the
//! square's probability. Against that atom cloud this module checks, in exact
//! arithmetic, that every claimed set satisfies the centroid condition under
//! nearest-point assignment and that its discretized distortion matches the
//! closed-form value. A seeded floating-point Lloyd search tries to beat the
//! claimed optima from random starts.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{set_distortion, OptimalSet};
use crate::error::Error;
use crate::measure::{digit_offset, digit_weight, moments};
use crate::nodes::node_centroid;
use crate::rational::{int, pow, ratio, to_f64, Rational};
use crate::{ExactPoint, FloatPoint};

/// Largest supported discretization level (`4^k` atoms).
pub const MAX_LEVEL: u32 = 10;

/// One point mass of the discretized measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub position: ExactPoint,
    pub mass: Rational,
}

/// The level-`k` discretization: one atom per level-`k` word, in
/// lexicographic word order.
pub fn discretize(k: u32) -> Result<Vec<Atom>, Error> {
    if k > MAX_LEVEL {
        return Err(Error::LevelTooDeep {
            level: k,
            max: MAX_LEVEL,
        });
    }
    let mut atoms = Vec::with_capacity(4usize.pow(k));
    let third = ratio(1, 3);
    // accumulate the composed map (scale, translation) digit by digit
    fn descend(
        depth_left: u32,
        scale: &Rational,
        trans: &ExactPoint,
        mass: &Rational,
        third: &Rational,
        atoms: &mut Vec<Atom>,
    ) {
        if depth_left == 0 {
            let mean = &moments().mean;
            atoms.push(Atom {
                position: mean.scale_add(scale, trans),
                mass: mass.clone(),
            });
            return;
        }
        for d in 1..=4u8 {
            let offset = digit_offset(d);
            let trans = offset.scale_add(scale, trans);
            let scale = scale.clone() * third;
            let mass = mass.clone() * digit_weight(d);
            descend(depth_left - 1, &scale, &trans, &mass, third, atoms);
        }
    }
    descend(
        k,
        &int(1),
        &ExactPoint::new(int(0), int(0)),
        &int(1),
        &third,
        &mut atoms,
    );
    Ok(atoms)
}

/// Exact nearest-point assignment of atoms to a list of points, with the
/// per-point accumulated mass, weighted position sum and weighted squared
/// distance sum. An exact distance tie is an error: the atom sits on a
/// boundary and would contaminate the centroid check.
#[derive(Debug, Clone)]
pub struct Assignment {
    pub atom_to_point: Vec<usize>,
    pub mass: Vec<Rational>,
    pub weighted_sum: Vec<ExactPoint>,
    pub weighted_dist2: Vec<Rational>,
}

/// Assigns every atom to the nearest of `points` by exact squared distance.
pub fn assign_to_points(points: &[ExactPoint], atoms: &[Atom]) -> Result<Assignment, Error> {
    if points.is_empty() || atoms.is_empty() {
        return Err(Error::InvalidArgument(
            "points and atoms must be non-empty".into(),
        ));
    }
    let mut assignment = Assignment {
        atom_to_point: Vec::with_capacity(atoms.len()),
        mass: vec![int(0); points.len()],
        weighted_sum: vec![ExactPoint::new(int(0), int(0)); points.len()],
        weighted_dist2: vec![int(0); points.len()],
    };
    for (i, atom) in atoms.iter().enumerate() {
        let mut best = 0usize;
        let mut best_d2 = atom.position.dist2(&points[0]);
        // a tie only matters at the minimum: that is a Voronoi boundary
        let mut tied_with = None;
        for (j, p) in points.iter().enumerate().skip(1) {
            let d2 = atom.position.dist2(p);
            if d2 < best_d2 {
                best = j;
                best_d2 = d2;
                tied_with = None;
            } else if d2 == best_d2 {
                tied_with = Some(j);
            }
        }
        if let Some(second) = tied_with {
            return Err(Error::VoronoiTie {
                atom: i,
                first: best,
                second,
            });
        }
        assignment.atom_to_point.push(best);
        assignment.mass[best] += atom.mass.clone();
        assignment.weighted_sum[best].x += atom.mass.clone() * atom.position.x.clone();
        assignment.weighted_sum[best].y += atom.mass.clone() * atom.position.y.clone();
        assignment.weighted_dist2[best] += atom.mass.clone() * best_d2;
    }
    Ok(assignment)
}

/// Assigns every atom to the node with the nearest centroid.
pub fn voronoi_assign_exact(set: &OptimalSet, atoms: &[Atom]) -> Result<Assignment, Error> {
    let points: Vec<ExactPoint> = set.nodes().iter().map(node_centroid).collect();
    assign_to_points(&points, atoms)
}

// Region alignment needs every node region to be a union of level-k squares.
fn check_level(set: &OptimalSet, k: u32) -> Result<(), Error> {
    let depth = set.max_region_depth();
    if (k as usize) < depth {
        return Err(Error::LevelTooSmall { level: k, depth });
    }
    Ok(())
}

/// True iff every point is exactly the mass centroid of the atoms assigned
/// to it.
pub fn centroid_condition_for_points(points: &[ExactPoint], atoms: &[Atom]) -> Result<bool, Error> {
    let assignment = assign_to_points(points, atoms)?;
    for (j, point) in points.iter().enumerate() {
        if assignment.mass[j] == int(0) {
            return Ok(false);
        }
        let cx = assignment.weighted_sum[j].x.clone() / assignment.mass[j].clone();
        let cy = assignment.weighted_sum[j].y.clone() / assignment.mass[j].clone();
        if cx != point.x || cy != point.y {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the centroid condition for a set against the level-`k` atoms:
/// under exact nearest-centroid assignment, every node centroid must equal
/// the mass centroid of its assigned atoms.
pub fn verify_centroid_condition(set: &OptimalSet, k: u32) -> Result<bool, Error> {
    check_level(set, k)?;
    let points: Vec<ExactPoint> = set.nodes().iter().map(node_centroid).collect();
    centroid_condition_for_points(&points, &discretize(k)?)
}

/// Distortion of the set measured on the level-`k` atoms under exact
/// nearest-centroid assignment.
pub fn discretized_distortion(set: &OptimalSet, k: u32) -> Result<Rational, Error> {
    let assignment = voronoi_assign_exact(set, &discretize(k)?)?;
    Ok(assignment.weighted_dist2.into_iter().sum())
}

/// The exact distortion the set attains on the level-`k` discretization when
/// its regions align with the nearest-centroid assignment: the closed-form
/// distortion minus the within-square variance `V / 9^k`.
pub fn discretized_optimum(set: &OptimalSet, k: u32) -> Rational {
    let within = moments().variance.clone() * pow(&ratio(1, 9), k);
    set_distortion(set) - within
}

/// Checks that the discretized distortion equals the closed-form distortion
/// minus `V / 9^k` exactly.
pub fn verify_distortion_identity(set: &OptimalSet, k: u32) -> Result<bool, Error> {
    check_level(set, k)?;
    Ok(discretized_distortion(set, k)? == discretized_optimum(set, k))
}

/// Default number of level-deepening retries after a tie.
pub const TIE_RETRIES: u32 = 2;

/// Runs both exact checks at level `k`, deepening the level by one after a
/// tie, up to `max_retries` times. A tie means an atom sat on a boundary;
/// deepening replaces it by four atoms off the boundary. Returns both check
/// results and the level actually used.
pub fn verify_with_retries(
    set: &OptimalSet,
    k: u32,
    max_retries: u32,
) -> Result<(bool, bool, u32), Error> {
    let mut level = k;
    loop {
        let outcome = verify_centroid_condition(set, level)
            .and_then(|c| verify_distortion_identity(set, level).map(|d| (c, d)));
        match outcome {
            Ok((c, d)) => return Ok((c, d, level)),
            Err(Error::VoronoiTie { .. }) if level < k + max_retries => level += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Axis selector for the marginal checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

fn project(p: &ExactPoint, axis: Axis) -> Rational {
    match axis {
        Axis::Horizontal => p.x.clone(),
        Axis::Vertical => p.y.clone(),
    }
}

/// Exact marginal of the level-`k` discretization along one axis: projected
/// coordinates with merged masses.
fn level_marginal(
    k: u32,
    axis: Axis,
) -> Result<std::collections::BTreeMap<Rational, Rational>, Error> {
    let mut out = std::collections::BTreeMap::new();
    for atom in discretize(k)? {
        *out.entry(project(&atom.position, axis))
            .or_insert_with(|| int(0)) += atom.mass;
    }
    Ok(out)
}

/// Checks that each marginal of the level-`k` discretization equals the
/// weighted mixture of the four one-dimensional component maps applied to the
/// level-`k-1` marginal, exactly.
pub fn marginal_mixture_check(k: u32) -> Result<bool, Error> {
    if !(1..=8).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "marginal level {k} outside 1..=8"
        )));
    }
    let third = ratio(1, 3);
    for axis in [Axis::Horizontal, Axis::Vertical] {
        let coarse = level_marginal(k - 1, axis)?;
        let fine = level_marginal(k, axis)?;
        let mut mixture = std::collections::BTreeMap::new();
        for (coord, weight) in &coarse {
            for d in 1..=4u8 {
                let mapped = coord.clone() * third.clone() + project(&digit_offset(d), axis);
                *mixture.entry(mapped).or_insert_with(|| int(0)) +=
                    weight.clone() * digit_weight(d);
            }
        }
        if mixture != fine {
            return Ok(false);
        }
    }
    Ok(true)
}

fn f64_atoms(k: u32) -> Result<Vec<(FloatPoint, f64)>, Error> {
    Ok(discretize(k)?
        .into_iter()
        .map(|a| {
            (
                FloatPoint::new(to_f64(&a.position.x), to_f64(&a.position.y)),
                to_f64(&a.mass),
            )
        })
        .collect())
}

/// Floating-point Lloyd search for `n` codepoints on the level-`k` atoms.
///
/// Runs `restarts` independent seeded starts with codepoints drawn from the
/// atom cloud, alternating nearest-point assignment and centroid updates
/// until the relative distortion change drops below `1e-14` or 1000
/// iterations pass. A codepoint whose cluster empties is moved to the atom
/// farthest from its current codepoint. Returns the best distortion found;
/// deterministic for a given seed.
pub fn lloyd_search(n: usize, k: u32, restarts: u32, seed: u64) -> Result<f64, Error> {
    if n < 1 || restarts < 1 {
        return Err(Error::InvalidArgument(
            "need n >= 1 and restarts >= 1".into(),
        ));
    }
    let atoms = f64_atoms(k)?;
    if atoms.len() < 4 * n {
        return Err(Error::InvalidArgument(format!(
            "level {k} gives {} atoms; need at least 4n = {}",
            atoms.len(),
            4 * n
        )));
    }
    let mut best = f64::INFINITY;
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(restart));
        let mut chosen = HashSet::new();
        while chosen.len() < n {
            chosen.insert(rng.random_range(0..atoms.len()));
        }
        let mut code: Vec<FloatPoint> = chosen.into_iter().map(|i| atoms[i].0.clone()).collect();
        code.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));

        let mut assign = vec![0usize; atoms.len()];
        let mut dist2 = vec![0f64; atoms.len()];
        let mut prev = f64::INFINITY;
        for _ in 0..1000 {
            for (i, (pos, _)) in atoms.iter().enumerate() {
                let mut best_j = 0usize;
                let mut best_d = pos.dist2(&code[0]);
                for (j, c) in code.iter().enumerate().skip(1) {
                    let d = pos.dist2(c);
                    if d < best_d {
                        best_j = j;
                        best_d = d;
                    }
                }
                assign[i] = best_j;
                dist2[i] = best_d;
            }

            let mut counts = vec![0usize; n];
            for &j in &assign {
                counts[j] += 1;
            }
            if counts.contains(&0) {
                // move each empty codepoint to the farthest unclaimed atom
                let mut claimed = HashSet::new();
                for j in 0..n {
                    if counts[j] == 0 {
                        let far = (0..atoms.len())
                            .filter(|i| !claimed.contains(i))
                            .max_by(|&a, &b| dist2[a].partial_cmp(&dist2[b]).expect("finite"))
                            .expect("atoms remain");
                        claimed.insert(far);
                        code[j] = atoms[far].0.clone();
                    }
                }
                continue;
            }

            let distortion: f64 = atoms.iter().zip(&dist2).map(|((_, w), d)| w * d).sum();
            if (prev - distortion).abs() <= 1e-14 * distortion {
                prev = distortion;
                break;
            }
            prev = distortion;

            let mut sums = vec![(0f64, 0f64, 0f64); n];
            for ((pos, w), &j) in atoms.iter().zip(&assign) {
                sums[j].0 += w * pos.x;
                sums[j].1 += w * pos.y;
                sums[j].2 += w;
            }
            for (c, (sx, sy, m)) in code.iter_mut().zip(&sums) {
                *c = FloatPoint::new(sx / m, sy / m);
            }
        }
        if prev < best {
            best = prev;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{greedy_sequence, TiePolicy};
    use crate::measure::{centroid, word_params};
    use crate::nodes::NodeKind;

    fn greedy(n: u32) -> OptimalSet {
        greedy_sequence(n, TiePolicy::CanonicalLeast)
            .unwrap()
            .pop()
            .unwrap()
    }

    fn point(x: (i64, i64), y: (i64, i64)) -> ExactPoint {
        ExactPoint::new(ratio(x.0, x.1), ratio(y.0, y.1))
    }

    #[test]
    fn discretize_examples() {
        let level0 = discretize(0).unwrap();
        assert_eq!(level0.len(), 1);
        assert_eq!(level0[0].position, point((1, 2), (3, 4)));
        assert_eq!(level0[0].mass, int(1));

        let level1 = discretize(1).unwrap();
        assert_eq!(level1.len(), 4);
        let masses: Vec<Rational> = level1.iter().map(|a| a.mass.clone()).collect();
        assert_eq!(
            masses,
            vec![ratio(1, 8), ratio(1, 8), ratio(3, 8), ratio(3, 8)]
        );
        assert_eq!(level1[2].position, point((1, 6), (11, 12)));

        let level2 = discretize(2).unwrap();
        assert_eq!(level2.len(), 16);
        let total: Rational = level2.iter().map(|a| a.mass.clone()).sum();
        assert_eq!(total, int(1));
        assert!(discretize(MAX_LEVEL + 1).is_err());
    }

    #[test]
    fn discretize_matches_word_centroids() {
        let atoms = discretize(2).unwrap();
        let words = crate::word::words_of_length(2);
        for (atom, w) in atoms.iter().zip(&words) {
            assert_eq!(atom.position, centroid(w));
            assert_eq!(atom.mass, word_params(w).0);
        }
    }

    #[test]
    fn voronoi_assignment_of_two_means() {
        let two = greedy(2);
        let atoms = discretize(1).unwrap();
        let assignment = voronoi_assign_exact(&two, &atoms).unwrap();
        // the vertical boundary puts squares 1 and 3 left, 2 and 4 right
        assert_eq!(assignment.atom_to_point, vec![0, 1, 0, 1]);
    }

    #[test]
    fn voronoi_assignment_of_one_mean_and_four_means() {
        let one = OptimalSet::one_mean();
        let atoms = discretize(2).unwrap();
        let assignment = voronoi_assign_exact(&one, &atoms).unwrap();
        assert!(assignment.atom_to_point.iter().all(|&j| j == 0));

        let four = greedy(4);
        let assignment = voronoi_assign_exact(&four, &atoms).unwrap();
        // each atom lands in the singleton owning its top-level square
        for (i, &j) in assignment.atom_to_point.iter().enumerate() {
            assert_eq!(j, i / 4);
        }
    }

    #[test]
    fn centroid_condition_holds_for_small_sets() {
        assert!(verify_centroid_condition(&greedy(2), 3).unwrap());
        assert!(verify_centroid_condition(&greedy(3), 3).unwrap());
    }

    #[test]
    fn centroid_condition_rejects_perturbed_points() {
        let two = greedy(2);
        let mut points: Vec<ExactPoint> = two
            .nodes()
            .iter()
            .map(crate::nodes::node_centroid)
            .collect();
        points[0].x += ratio(1, 100);
        assert!(!centroid_condition_for_points(&points, &discretize(3).unwrap()).unwrap());
    }

    #[test]
    fn level_guard_rejects_shallow_discretizations() {
        let five = greedy(5);
        // region depth 2 cannot be resolved by level-1 atoms
        assert!(matches!(
            verify_centroid_condition(&five, 1),
            Err(Error::LevelTooSmall { .. })
        ));
    }

    #[test]
    fn distortion_identity_examples() {
        let one = OptimalSet::one_mean();
        assert!(verify_distortion_identity(&one, 0).unwrap());
        assert_eq!(discretized_distortion(&one, 0).unwrap(), int(0));

        let two = greedy(2);
        assert!(verify_distortion_identity(&two, 3).unwrap());
        let expected = ratio(31, 288) - ratio(7, 32) / int(729);
        assert_eq!(discretized_distortion(&two, 3).unwrap(), expected);

        let four = greedy(4);
        assert!(verify_distortion_identity(&four, 4).unwrap());
        let expected = ratio(7, 288) - ratio(7, 32) / int(6561);
        assert_eq!(discretized_distortion(&four, 4).unwrap(), expected);
    }

    #[test]
    fn discretized_distortion_level_difference() {
        // deepening the discretization recovers within-square variance
        let two = greedy(2);
        let d3 = discretized_distortion(&two, 3).unwrap();
        let d4 = discretized_distortion(&two, 4).unwrap();
        let v = moments().variance.clone();
        assert_eq!(d4 - d3, v * (ratio(1, 729) - ratio(1, 6561)));
    }

    #[test]
    fn atoms_are_pairwise_distinct() {
        let atoms = discretize(3).unwrap();
        let mut positions: Vec<&ExactPoint> = atoms.iter().map(|a| &a.position).collect();
        positions.sort();
        positions.dedup();
        assert_eq!(positions.len(), atoms.len());
    }

    #[test]
    fn retries_resolve_a_boundary_tie() {
        // two points straddling the level-1 atom of square 1 tie at level 1
        let p = vec![point((1, 6), (0, 1)), point((1, 6), (1, 2))];
        assert!(matches!(
            assign_to_points(&p, &discretize(1).unwrap()),
            Err(Error::VoronoiTie { atom: 0, .. })
        ));
        // the level-2 atoms sit off that bisector
        assert!(assign_to_points(&p, &discretize(2).unwrap()).is_ok());
    }

    #[test]
    fn verify_with_retries_reports_the_level_used() {
        let four = greedy(4);
        let (c, d, level) = verify_with_retries(&four, 3, TIE_RETRIES).unwrap();
        assert!(c && d);
        assert_eq!(level, 3);
    }

    #[test]
    fn marginal_mixture_small_levels() {
        assert!(marginal_mixture_check(1).unwrap());
        assert!(marginal_mixture_check(2).unwrap());
        assert!(marginal_mixture_check(0).is_err());
        assert!(marginal_mixture_check(9).is_err());
    }

    #[test]
    fn lloyd_one_mean_finds_the_mean() {
        let best = lloyd_search(1, 3, 1, 0).unwrap();
        let exact = to_f64(&discretized_optimum(&OptimalSet::one_mean(), 3));
        assert!((best - exact).abs() < 1e-12, "{best} vs {exact}");
    }

    #[test]
    fn lloyd_rejects_bad_arguments() {
        assert!(lloyd_search(0, 3, 1, 0).is_err());
        assert!(lloyd_search(1, 3, 0, 0).is_err());
        // 4^1 = 4 atoms cannot host 4 codepoints (needs 16)
        assert!(lloyd_search(4, 1, 1, 0).is_err());
    }

    #[test]
    fn lloyd_is_deterministic() {
        let a = lloyd_search(2, 4, 5, 42).unwrap();
        let b = lloyd_search(2, 4, 5, 42).unwrap();
        assert_eq!(a, b);
        let kind_check = greedy(2).nodes()[0].kind();
        assert_eq!(kind_check, NodeKind::Pair13);
    }
}
