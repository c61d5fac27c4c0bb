//! Exact computation of optimal quantizers for the weighted measure on the
//! Sierpinski carpet whose four corner maps carry probabilities
//! (1/8, 1/8, 3/8, 3/8).
//!
//! Everything in this crate except [`oracle::lloyd_search`] is carried out in
//! arbitrary-precision rational arithmetic: probabilities, centroids,
//! distortion errors, and all comparisons are exact. The crate is organised
//! around four layers:
//!
//! * [`measure`] — word algebra over the alphabet `{1,2,3,4}`, the four
//!   affine maps, cylinder probabilities, centroids and closed-form
//!   distortion integrals;
//! * [`nodes`] — the four shapes an element of an optimal set can take
//!   (a cylinder centroid or one of three two-cylinder centroids), their
//!   exact errors, and the split transitions between them;
//! * [`engine`] — the induction that generates one optimal set per size,
//!   enumerates all of them, counts them, and exports the transition tree;
//! * [`oracle`] — independent verification against a level-`k`
//!   discretization of the measure, plus a floating-point Lloyd search.

pub mod engine;
pub mod error;
pub mod measure;
pub mod nodes;
pub mod oracle;
pub mod rational;
pub mod scalar;
pub mod word;

pub use error::Error;
pub use rational::Rational;
pub use scalar::Point;
pub use word::Word;

/// Point with exact rational coordinates; the coordinate type used by every
/// exact code path.
pub type ExactPoint = Point<Rational>;

/// Point with floating-point coordinates; used only by the Lloyd search.
pub type FloatPoint = Point<f64>;

/// Convenience result alias for fallible operations in this crate.
pub type Result<T> = std::result::Result<T, Error>;
