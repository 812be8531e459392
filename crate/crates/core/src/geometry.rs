//! Planar coordinates, the half-court region and the polar transform.
//!
//! Shot data uses court units of 0.1 ft with the rim at the origin. The
//! simulation grids may use any unit; the polar transform only needs an
//! origin expressed in the same unit as the points.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

/// Bounds of the offensive half court in court units.
pub const HALF_COURT: Rect = Rect { x_min: -250.0, x_max: 250.0, y_min: -50.0, y_max: 420.0 };

/// A location in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
}

impl CartesianPoint {
    pub const ORIGIN: CartesianPoint = CartesianPoint { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Whether the point lies on the half court (boundaries included).
    pub fn is_on_court(&self) -> bool {
        HALF_COURT.contains(*self)
    }
}

/// Distance/angle representation relative to an origin.
///
/// `theta` lies in `(-pi, pi]`. A point sitting exactly at the origin maps
/// to `r = 0, theta = 0`; see [`PolarPoint::is_degenerate`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    /// True for points that coincided with the origin, where the angle is
    /// set to zero by convention.
    pub fn is_degenerate(&self) -> bool {
        self.r == 0.0
    }

    pub fn to_cartesian(&self, origin: CartesianPoint) -> CartesianPoint {
        CartesianPoint { x: origin.x + self.r * math::cos(self.theta), y: origin.y + self.r * math::sin(self.theta) }
    }
}

/// Axis-aligned rectangle, closed on all sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let all_finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::NonFinite);
        }
        if x_min > x_max || y_min > y_max {
            return Err(Error::InvalidParameter("rectangle bounds are inverted"));
        }
        Ok(Self { x_min, x_max, y_min, y_max })
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn contains(&self, p: CartesianPoint) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// Smallest rectangle covering all points, or `None` when empty.
    pub fn bounding(points: &[CartesianPoint]) -> Option<Self> {
        let first = points.first()?;
        let mut r = Rect { x_min: first.x, x_max: first.x, y_min: first.y, y_max: first.y };
        for p in &points[1..] {
            r.x_min = r.x_min.min(p.x);
            r.x_max = r.x_max.max(p.x);
            r.y_min = r.y_min.min(p.y);
            r.y_max = r.y_max.max(p.y);
        }
        Some(r)
    }
}

/// One realization of a planar point process: an ordered multiset of
/// finite points inside a bounding region.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    points: Vec<CartesianPoint>,
    region: Rect,
}

impl PointPattern {
    /// Builds a pattern, rejecting non-finite coordinates.
    pub fn new(points: Vec<CartesianPoint>, region: Rect) -> Result<Self> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { points, region })
    }

    /// Builds a pattern whose region is the bounding box of the points
    /// (the half court when empty).
    pub fn from_points(points: Vec<CartesianPoint>) -> Result<Self> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let region = Rect::bounding(&points).unwrap_or(HALF_COURT);
        Ok(Self { points, region })
    }

    pub fn points(&self) -> &[CartesianPoint] {
        &self.points
    }

    pub fn region(&self) -> Rect {
        self.region
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<CartesianPoint> {
        self.points
    }
}

/// Converts `p` to polar coordinates around `origin` using the
/// full-quadrant arctangent, so `theta` is defined everywhere in `(-pi, pi]`.
pub fn to_polar(p: CartesianPoint, origin: CartesianPoint) -> PolarPoint {
    let dx = p.x - origin.x;
    let dy = p.y - origin.y;
    if dx == 0.0 && dy == 0.0 {
        return PolarPoint { r: 0.0, theta: 0.0 };
    }
    let mut theta = math::atan2(dy, dx);
    // atan2 returns -pi for (-x, -0.0); fold onto the closed end.
    if theta <= -PI {
        theta = PI;
    }
    // normalise -0.0
    theta += 0.0;
    PolarPoint { r: math::hypot(dx, dy), theta }
}

pub fn to_polar_pattern(s: &PointPattern, origin: CartesianPoint) -> Vec<PolarPoint> {
    s.points().iter().map(|&p| to_polar(p, origin)).collect()
}

/// Maps an angle onto `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta - two_pi * math::floor((theta + PI) / two_pi);
    // t is now in [-pi, pi)
    if t <= -PI {
        t += two_pi;
    }
    t
}

/// Treats a set of (r, theta) values as planar points, the representation
/// the polar-coordinate test variants work on.
pub fn polar_as_plane(points: &[PolarPoint]) -> Vec<CartesianPoint> {
    points.iter().map(|p| CartesianPoint::new(p.r, p.theta)).collect()
}
