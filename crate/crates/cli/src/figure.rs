//! SVG rendering of the carpet skeleton with a set of optimal points.
//!
//! The unit square is mapped to a square pixel viewport; the vertical axis is
//! flipped so that the mathematical y-up convention renders upright. Each
//! point circle carries its exact pre-scaling coordinates in `data-x` and
//! `data-y` attributes, so emitted figures stay exactly checkable.

use std::fmt::Write as _;

use carpetq_core::measure::apply_map;
use carpetq_core::rational::{format_exact, to_f64};
use carpetq_core::word::words_of_length;
use carpetq_core::{Error, ExactPoint};

#[derive(Debug, Clone, Copy)]
pub struct RenderConfig {
    /// Number of square levels drawn (0 draws only the unit square).
    pub depth: u32,
    /// Side of the square viewport in pixels.
    pub viewport: u32,
    /// Radius of the point markers in pixels.
    pub radius: f64,
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.depth > 6 {
            return Err(Error::InvalidArgument(format!(
                "figure depth {} outside 0..=6",
                self.depth
            )));
        }
        if self.viewport < 64 {
            return Err(Error::InvalidArgument(format!(
                "viewport {} below the minimum of 64",
                self.viewport
            )));
        }
        if self.radius <= 0.0 || !self.radius.is_finite() {
            return Err(Error::InvalidArgument(
                "point radius must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Renders the carpet squares down to `cfg.depth` with the given points.
pub fn render_svg(points: &[ExactPoint], cfg: &RenderConfig) -> Result<String, Error> {
    cfg.validate()?;
    let side = f64::from(cfg.viewport);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{v}\" height=\"{v}\" viewBox=\"0 0 {v} {v}\">",
        v = cfg.viewport
    );

    let origin = ExactPoint::new(
        carpetq_core::rational::int(0),
        carpetq_core::rational::int(0),
    );
    for level in 0..=cfg.depth {
        let square_side = side / 3f64.powi(level as i32);
        for word in words_of_length(level as usize) {
            let corner = apply_map(&word, &origin);
            let x = to_f64(&corner.x) * side;
            // flip: the square's top edge in math coordinates becomes its
            // SVG y origin
            let y = side - (to_f64(&corner.y) * side + square_side);
            let _ = writeln!(
                svg,
                "  <rect x=\"{x:.4}\" y=\"{y:.4}\" width=\"{s:.4}\" height=\"{s:.4}\" \
                 fill=\"none\" stroke=\"black\" stroke-width=\"0.5\"/>",
                s = square_side
            );
        }
    }

    for p in points {
        let cx = to_f64(&p.x) * side;
        let cy = side - to_f64(&p.y) * side;
        let _ = writeln!(
            svg,
            "  <circle cx=\"{cx:.4}\" cy=\"{cy:.4}\" r=\"{r}\" fill=\"red\" \
             data-x=\"{dx}\" data-y=\"{dy}\"/>",
            r = cfg.radius,
            dx = format_exact(&p.x),
            dy = format_exact(&p.y),
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
