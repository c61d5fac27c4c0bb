//! The carpet measure: four affine corner maps with contraction ratio 1/3 and
//! probability weights (1/8, 1/8, 3/8, 3/8), together with exact cylinder
//! probabilities, centroids, moments, and closed-form distortion integrals.
//!
//! Digits address the corners of the unit square: 1 bottom-left, 2
//! bottom-right, 3 top-left, 4 top-right. The heavier weight 3/8 sits on the
//! two top corners, which is what makes the measure nonhomogeneous.

use std::sync::OnceLock;

use crate::error::Error;
use crate::rational::{int, pow, ratio, Rational};
use crate::word::{check_prefix_free, Word};
use crate::ExactPoint;

/// Probability weight of each digit's map.
pub fn digit_weight(digit: u8) -> Rational {
    match digit {
        1 | 2 => ratio(1, 8),
        3 | 4 => ratio(3, 8),
        _ => unreachable!("digits are 1..=4"),
    }
}

/// Contraction ratio shared by all four maps.
pub fn contraction_ratio() -> Rational {
    ratio(1, 3)
}

/// Translation part of each digit's map.
pub fn digit_offset(digit: u8) -> ExactPoint {
    let zero = int(0);
    let two_thirds = ratio(2, 3);
    match digit {
        1 => ExactPoint::new(zero.clone(), zero),
        2 => ExactPoint::new(two_thirds, zero),
        3 => ExactPoint::new(zero, two_thirds),
        4 => ExactPoint::new(two_thirds.clone(), two_thirds),
        _ => unreachable!("digits are 1..=4"),
    }
}

/// One corner map applied to a point: `x/3 + offset`.
pub fn digit_map(digit: u8, pt: &ExactPoint) -> ExactPoint {
    pt.scale_add(&contraction_ratio(), &digit_offset(digit))
}

/// Exact moments of the measure. All fields are derived by solving the
/// self-similarity fixed-point equations, not stored as literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureParams {
    pub probabilities: [Rational; 4],
    pub ratios: [Rational; 4],
    /// Expected value of the measure.
    pub mean: ExactPoint,
    /// Total variance: expected squared distance from the mean.
    pub variance: Rational,
    /// Second moment of the horizontal coordinate.
    pub second_moment_x: Rational,
    /// Second moment of the vertical coordinate.
    pub second_moment_y: Rational,
    pub variance_x: Rational,
    pub variance_y: Rational,
}

/// Solves `m = sum_i w_i (a m + b_i)` for the first moment of a
/// one-dimensional self-similar mixture with common scale `a`.
fn solve_first_moment(scale: &Rational, offsets: &[Rational; 4]) -> Rational {
    let mut weight_scale = int(0);
    let mut weight_offset = int(0);
    for (d, b) in (1u8..=4).zip(offsets) {
        weight_scale += digit_weight(d) * scale;
        weight_offset += digit_weight(d) * b;
    }
    weight_offset / (int(1) - weight_scale)
}

/// Solves `q = sum_i w_i (a^2 q + 2 a b_i m + b_i^2)` for the second moment,
/// given the already-solved first moment `m`.
fn solve_second_moment(scale: &Rational, offsets: &[Rational; 4], mean: &Rational) -> Rational {
    let mut quad = int(0);
    let mut affine = int(0);
    for (d, b) in (1u8..=4).zip(offsets) {
        let w = digit_weight(d);
        quad += w.clone() * scale * scale;
        affine += w * (int(2) * scale * b * mean + b * b);
    }
    affine / (int(1) - quad)
}

fn compute_moments() -> MeasureParams {
    let s = contraction_ratio();
    let x_offsets: [Rational; 4] = [1u8, 2, 3, 4].map(|d| digit_offset(d).x);
    let y_offsets: [Rational; 4] = [1u8, 2, 3, 4].map(|d| digit_offset(d).y);

    let mean_x = solve_first_moment(&s, &x_offsets);
    let mean_y = solve_first_moment(&s, &y_offsets);
    let second_moment_x = solve_second_moment(&s, &x_offsets, &mean_x);
    let second_moment_y = solve_second_moment(&s, &y_offsets, &mean_y);
    let variance_x = second_moment_x.clone() - mean_x.clone() * mean_x.clone();
    let variance_y = second_moment_y.clone() - mean_y.clone() * mean_y.clone();

    MeasureParams {
        probabilities: [1u8, 2, 3, 4].map(digit_weight),
        ratios: [s.clone(), s.clone(), s.clone(), s],
        mean: ExactPoint::new(mean_x, mean_y),
        variance: variance_x.clone() + variance_y.clone(),
        second_moment_x,
        second_moment_y,
        variance_x,
        variance_y,
    }
}

/// Exact mean, variance and second moments, solved once and cached.
pub fn moments() -> &'static MeasureParams {
    static PARAMS: OnceLock<MeasureParams> = OnceLock::new();
    PARAMS.get_or_init(compute_moments)
}

/// Probability and contraction ratio of the square addressed by `word`:
/// the product of the digit weights and `(1/3)^k`.
pub fn word_params(word: &Word) -> (Rational, Rational) {
    let mut p = int(1);
    for &d in word.digits() {
        p *= digit_weight(d);
    }
    let s = pow(&contraction_ratio(), word.len() as u32);
    (p, s)
}

/// The composed map of `word` applied to `pt`. Maps compose left digit
/// outermost, so the last digit is applied first; the empty word is the
/// identity.
pub fn apply_map(word: &Word, pt: &ExactPoint) -> ExactPoint {
    let mut out = pt.clone();
    for &d in word.digits().iter().rev() {
        out = digit_map(d, &out);
    }
    out
}

/// Centroid of the measure restricted to the square of `word`: the composed
/// map applied to the global mean.
pub fn centroid(word: &Word) -> ExactPoint {
    apply_map(word, &moments().mean)
}

/// Centroid of the measure restricted to a union of non-overlapping squares:
/// the probability-weighted average of the squares' centroids.
pub fn conditional_centroid(words: &[Word]) -> Result<ExactPoint, Error> {
    if words.is_empty() {
        return Err(Error::EmptyWordList);
    }
    check_prefix_free(words)?;
    let mut mass = int(0);
    let mut sum_x = int(0);
    let mut sum_y = int(0);
    for w in words {
        let (p, _) = word_params(w);
        let c = centroid(w);
        sum_x += p.clone() * c.x;
        sum_y += p.clone() * c.y;
        mass += p;
    }
    Ok(ExactPoint::new(sum_x / mass.clone(), sum_y / mass))
}

/// Exact distortion of quantizing the square of `word` to the single point
/// `pt`: `p * (s^2 V + |a(word) - pt|^2)`.
pub fn cell_distortion(word: &Word, pt: &ExactPoint) -> Rational {
    let (p, s) = word_params(word);
    let within = s.clone() * s * moments().variance.clone();
    p * (within + centroid(word).dist2(pt))
}

/// Sum of [`cell_distortion`] over a union of non-overlapping squares.
/// The empty union has distortion zero.
pub fn union_distortion(words: &[Word], pt: &ExactPoint) -> Result<Rational, Error> {
    check_prefix_free(words)?;
    let mut total = int(0);
    for w in words {
        total += cell_distortion(w, pt);
    }
    Ok(total)
}
