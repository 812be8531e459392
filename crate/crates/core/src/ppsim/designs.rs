//! Two demonstration intensity maps on a 112 x 112 half-court grid.
//!
//! Coordinates are in feet with the rim at the origin and the baseline at
//! `y = -4.75`. Each map is a mixture of simple components whose masses are
//! fixed exactly, normalized to an expected 400 shots.
//!
//! - Design 1 concentrates on the rim and the painted area.
//! - Design 2 splits between a tight rim cluster and a ridge just outside
//!   the three-point line.

use crate::error::Result;
use crate::geometry::{CartesianPoint, Rect};
use crate::math;

use super::IntensityGrid;

pub const DEMO_WIDTH: usize = 112;
pub const DEMO_HEIGHT: usize = 112;
pub const DEMO_TOTAL: f64 = 400.0;

const BASELINE: f64 = -4.75;
const THREE_RADIUS: f64 = 23.75;
const CORNER_X: f64 = 22.0;

pub fn demo_extent() -> Rect {
    Rect { x_min: -25.0, x_max: 25.0, y_min: -5.0, y_max: 42.0 }
}

fn component(mass: f64, density: impl Fn(CartesianPoint) -> f64) -> Result<IntensityGrid> {
    IntensityGrid::from_density(DEMO_WIDTH, DEMO_HEIGHT, demo_extent(), density)?.scaled_to(mass)
}

fn sum(parts: &[IntensityGrid]) -> Result<IntensityGrid> {
    let first = &parts[0];
    let cells = (0..first.cells().len()).map(|i| parts.iter().map(|g| g.cells()[i]).sum()).collect();
    IntensityGrid::new(first.width(), first.height(), cells, first.extent())
}

fn gaussian(center: CartesianPoint, sd: f64) -> impl Fn(CartesianPoint) -> f64 {
    move |p| {
        let (dx, dy) = (p.x - center.x, p.y - center.y);
        math::exp(-(dx * dx + dy * dy) / (2.0 * sd * sd))
    }
}

fn uniform_box(x0: f64, x1: f64, y0: f64, y1: f64) -> impl Fn(CartesianPoint) -> f64 {
    move |p| if p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1 { 1.0 } else { 0.0 }
}

/// Signed distance from `p` to the three-point line, positive outside.
pub fn three_point_distance(p: CartesianPoint) -> f64 {
    let corner_y = math::sqrt(THREE_RADIUS * THREE_RADIUS - CORNER_X * CORNER_X);
    if p.y <= corner_y {
        math::abs(p.x) - CORNER_X
    } else {
        math::hypot(p.x, p.y) - THREE_RADIUS
    }
}

/// Rim plus paint.
pub fn design1() -> Result<IntensityGrid> {
    sum(&[
        component(0.70 * DEMO_TOTAL, gaussian(CartesianPoint::new(0.0, 0.5), 1.0))?,
        component(0.20 * DEMO_TOTAL, uniform_box(-8.0, 8.0, BASELINE, 14.25))?,
        component(0.10 * DEMO_TOTAL, uniform_box(-22.0, 22.0, BASELINE, 28.0))?,
    ])
}

/// Rim plus three-point ridge.
pub fn design2() -> Result<IntensityGrid> {
    sum(&[
        component(0.40 * DEMO_TOTAL, gaussian(CartesianPoint::new(0.0, 0.5), 1.0))?,
        component(0.45 * DEMO_TOTAL, |p| {
            let d = three_point_distance(p) - 1.0;
            if p.y < BASELINE || p.y > 30.0 {
                0.0
            } else {
                math::exp(-d * d / 2.0)
            }
        })?,
        component(0.15 * DEMO_TOTAL, uniform_box(-25.0, 25.0, BASELINE, 30.0))?,
    ])
}

/// Looks a bundled design up by name (`design1`, `design2`, or `1`, `2`).
pub fn by_name(name: &str) -> Option<Result<IntensityGrid>> {
    match name.trim().to_ascii_lowercase().as_str() {
        "design1" | "1" | "paint" => Some(design1()),
        "design2" | "2" | "three" => Some(design2()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_and_shape() {
        for g in [design1().unwrap(), design2().unwrap()] {
            assert_eq!(g.width(), 112);
            assert_eq!(g.height(), 112);
            assert!((g.total() - DEMO_TOTAL).abs() < 1e-9);
        }
    }

    #[test]
    fn three_point_geometry() {
        assert!((three_point_distance(CartesianPoint::new(0.0, 23.75))).abs() < 1e-12);
        assert!((three_point_distance(CartesianPoint::new(-22.0, 0.0))).abs() < 1e-12);
        assert!(three_point_distance(CartesianPoint::new(0.0, 0.0)) < 0.0);
    }

    #[test]
    fn design_mass_locations() {
        let d1 = design1().unwrap();
        let d2 = design2().unwrap();
        let paint = |g: &IntensityGrid| -> f64 {
            let mut m = 0.0;
            for row in 0..g.height() {
                for col in 0..g.width() {
                    let c = g.cell_center(col, row);
                    if c.x.abs() <= 8.0 && c.y <= 14.25 {
                        m += g.get(col, row);
                    }
                }
            }
            m / g.total()
        };
        assert!(paint(&d1) > 0.7);
        assert!(paint(&d2) < 0.5);
    }
}
