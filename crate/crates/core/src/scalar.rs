//! Scalar-generic planar points.
//!
//! The exact code paths instantiate [`Point`] with [`crate::Rational`]; the
//! Lloyd search instantiates it with `f64`. Both share the same distance
//! arithmetic.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

/// Minimal scalar interface needed by the planar geometry in this crate.
///
/// Blanket-implemented for every type with the listed bounds, in particular
/// for `f64` and for arbitrary-precision rationals.
pub trait Scalar:
    Clone + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + PartialOrd
{
}

impl<T> Scalar for T where
    T: Clone + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + PartialOrd
{
}

/// A point of the plane with coordinates of scalar type `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    /// Squared Euclidean distance to `other`.
    pub fn dist2(&self, other: &Self) -> S {
        let dx = self.x.clone() - other.x.clone();
        let dy = self.y.clone() - other.y.clone();
        dx.clone() * dx + dy.clone() * dy
    }

    /// Componentwise `self * scale + offset`, the form every carpet map takes.
    pub fn scale_add(&self, scale: &S, offset: &Self) -> Self {
        Point {
            x: self.x.clone() * scale.clone() + offset.x.clone(),
            y: self.y.clone() * scale.clone() + offset.y.clone(),
        }
    }
}
