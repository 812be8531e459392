//! Inhomogeneous Poisson simulation on intensity grids.
//!
//! A grid stores the expected number of points per cell, so the total mass
//! is the expected size of a realization. Perturbations follow the three
//! noise families used in the power study plus a location jitter on the
//! points themselves.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{CartesianPoint, PointPattern, Rect};
use crate::math;

pub mod designs;
mod experiment;

pub use experiment::{
    run_power_experiment, run_type1_experiment, Executor, ExperimentConfig, PowerRow, PowerTable, Sequential, Type1Row,
    Type1Table,
};

/// Intensity on a regular grid. Cells are stored row-major with row 0 at
/// `extent.y_min` and column 0 at `extent.x_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityGrid {
    width: usize,
    height: usize,
    cells: Vec<f64>,
    extent: Rect,
}

impl IntensityGrid {
    pub fn new(width: usize, height: usize, cells: Vec<f64>, extent: Rect) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidGrid("grid needs at least one row and column"));
        }
        if cells.len() != width * height {
            return Err(Error::InvalidGrid("cell count does not match width x height"));
        }
        if cells.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidGrid("cells must be finite and non-negative"));
        }
        Ok(Self { width, height, cells, extent })
    }

    pub fn zeros(width: usize, height: usize, extent: Rect) -> Result<Self> {
        Self::new(width, height, alloc::vec![0.0; width * height], extent)
    }

    /// Fills every cell with `density(center) * cell area`.
    pub fn from_density(
        width: usize,
        height: usize,
        extent: Rect,
        density: impl Fn(CartesianPoint) -> f64,
    ) -> Result<Self> {
        let mut g = Self::zeros(width, height, extent)?;
        let area = g.cell_width() * g.cell_height();
        for row in 0..height {
            for col in 0..width {
                let c = g.cell_center(col, row);
                g.cells[row * width + col] = density(c) * area;
            }
        }
        Self::new(width, height, g.cells, extent)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn extent(&self) -> Rect {
        self.extent
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.cells[row * self.width + col]
    }

    pub fn set(&mut self, col: usize, row: usize, value: f64) -> Result<()> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidGrid("cells must be finite and non-negative"));
        }
        self.cells[row * self.width + col] = value;
        Ok(())
    }

    pub fn cell_width(&self) -> f64 {
        self.extent.width() / self.width as f64
    }

    pub fn cell_height(&self) -> f64 {
        self.extent.height() / self.height as f64
    }

    pub fn cell_rect(&self, col: usize, row: usize) -> Rect {
        let (w, h) = (self.cell_width(), self.cell_height());
        let x0 = self.extent.x_min + col as f64 * w;
        let y0 = self.extent.y_min + row as f64 * h;
        Rect { x_min: x0, x_max: x0 + w, y_min: y0, y_max: y0 + h }
    }

    pub fn cell_center(&self, col: usize, row: usize) -> CartesianPoint {
        let r = self.cell_rect(col, row);
        CartesianPoint::new(0.5 * (r.x_min + r.x_max), 0.5 * (r.y_min + r.y_max))
    }

    /// Cell index `(col, row)` containing `p`, if inside the extent.
    pub fn locate(&self, p: CartesianPoint) -> Option<(usize, usize)> {
        if !self.extent.contains(p) {
            return None;
        }
        let col = ((p.x - self.extent.x_min) / self.cell_width()) as usize;
        let row = ((p.y - self.extent.y_min) / self.cell_height()) as usize;
        Some((col.min(self.width - 1), row.min(self.height - 1)))
    }

    /// Total intensity `Lambda`.
    pub fn total(&self) -> f64 {
        self.cells.iter().sum()
    }

    /// Rescales the grid so its total intensity equals `total`.
    pub fn scaled_to(&self, total: f64) -> Result<Self> {
        let t = self.total();
        if t <= 0.0 {
            return Err(Error::EmptyIntensity);
        }
        let k = total / t;
        Self::new(self.width, self.height, self.cells.iter().map(|c| c * k).collect(), self.extent)
    }
}

/// One realization of the Poisson process with intensity `grid`.
pub fn sample_nhpp<R: Rng + ?Sized>(grid: &IntensityGrid, rng: &mut R) -> Result<PointPattern> {
    let total = grid.total();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::EmptyIntensity);
    }
    let n = Poisson::new(total)
        .map_err(|_| Error::InvalidParameter("intensity too large for Poisson sampling"))?
        .sample(rng) as usize;
    let cells = WeightedIndex::new(grid.cells()).map_err(|_| Error::EmptyIntensity)?;
    let (w, h) = (grid.cell_width(), grid.cell_height());
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let k = cells.sample(rng);
        let (col, row) = (k % grid.width, k / grid.width);
        let x0 = grid.extent.x_min + col as f64 * w;
        let y0 = grid.extent.y_min + row as f64 * h;
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        points.push(CartesianPoint::new(x0 + u * w, y0 + v * h));
    }
    PointPattern::new(points, grid.extent)
}

/// Adds an independent `N(0, 0.25 r I)` displacement to every point.
pub fn jitter_pattern<R: Rng + ?Sized>(s: &PointPattern, r: f64, rng: &mut R) -> Result<PointPattern> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::NegativeArgument(r));
    }
    if r == 0.0 {
        return Ok(s.clone());
    }
    let sd = math::sqrt(0.25 * r);
    let points = s
        .points()
        .iter()
        .map(|p| {
            let dx: f64 = rng.sample(StandardNormal);
            let dy: f64 = rng.sample(StandardNormal);
            CartesianPoint::new(p.x + sd * dx, p.y + sd * dy)
        })
        .collect();
    PointPattern::new(points, s.region())
}

fn check_magnitude(r: f64) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::NegativeArgument(r));
    }
    Ok(())
}

/// Adds `|Z| r`, `Z ~ N(0, 1)`, to every cell (`r` is the standard
/// deviation of the underlying normal).
pub fn perturb_grid_half_gaussian<R: Rng + ?Sized>(grid: &IntensityGrid, r: f64, rng: &mut R) -> Result<IntensityGrid> {
    check_magnitude(r)?;
    let cells = grid
        .cells()
        .iter()
        .map(|&c| {
            let z: f64 = rng.sample(StandardNormal);
            c + math::abs(z) * r
        })
        .collect();
    IntensityGrid::new(grid.width, grid.height, cells, grid.extent)
}

/// Adds `exp(sqrt(r) Z)`, `Z ~ N(0, 1)`, to every cell (`r` is the variance
/// of the log noise).
pub fn perturb_grid_lognormal<R: Rng + ?Sized>(grid: &IntensityGrid, r: f64, rng: &mut R) -> Result<IntensityGrid> {
    check_magnitude(r)?;
    let s = math::sqrt(r);
    let cells = grid
        .cells()
        .iter()
        .map(|&c| {
            let z: f64 = rng.sample(StandardNormal);
            c + math::exp(s * z)
        })
        .collect();
    IntensityGrid::new(grid.width, grid.height, cells, grid.extent)
}

/// Translates the grid by `c` columns (positive moves mass towards larger
/// x); vacated columns are zero and mass pushed off the edge is dropped.
pub fn shift_grid(grid: &IntensityGrid, c: i64) -> Result<IntensityGrid> {
    let w = grid.width as i64;
    if c.unsigned_abs() >= grid.width as u64 {
        return Err(Error::ShiftOutOfRange { shift: c, width: grid.width });
    }
    let mut cells = alloc::vec![0.0; grid.cells.len()];
    for row in 0..grid.height {
        for col in 0..w {
            let src = col - c;
            if (0..w).contains(&src) {
                cells[row * grid.width + col as usize] = grid.cells[row * grid.width + src as usize];
            }
        }
    }
    IntensityGrid::new(grid.width, grid.height, cells, grid.extent)
}

/// Perturbation family for the power study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// Per-point Gaussian displacement with covariance `0.25 r I`.
    LocationJitter,
    /// Additive `|N(0, r^2)|` per cell.
    HalfGaussian,
    /// Additive lognormal with `log eps ~ N(0, r)` per cell.
    Lognormal,
    /// Horizontal translation of the grid by `c` columns.
    PixelShift,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::LocationJitter => "jitter",
            NoiseKind::HalfGaussian => "half_gaussian",
            NoiseKind::Lognormal => "lognormal",
            NoiseKind::PixelShift => "pixel_shift",
        }
    }

    pub(crate) fn stream_id(self) -> u64 {
        match self {
            NoiseKind::LocationJitter => 1,
            NoiseKind::HalfGaussian => 2,
            NoiseKind::Lognormal => 3,
            NoiseKind::PixelShift => 4,
        }
    }

    /// True when the noise acts on the intensity grid rather than on points.
    pub fn acts_on_grid(self) -> bool {
        !matches!(self, NoiseKind::LocationJitter)
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jitter" | "location_jitter" | "location" => Ok(NoiseKind::LocationJitter),
            "half_gaussian" | "halfgaussian" | "half-gaussian" => Ok(NoiseKind::HalfGaussian),
            "lognormal" | "log_normal" => Ok(NoiseKind::Lognormal),
            "pixel_shift" | "shift" | "pixel-shift" => Ok(NoiseKind::PixelShift),
            _ => Err("noise must be jitter, half_gaussian, lognormal or pixel_shift"),
        }
    }
}

/// A perturbation family with its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub magnitude: f64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, magnitude: f64) -> Result<Self> {
        check_magnitude(magnitude).or_else(|e| {
            // pixel shifts may go either way
            if kind == NoiseKind::PixelShift && magnitude.is_finite() {
                Ok(())
            } else {
                Err(e)
            }
        })?;
        if kind == NoiseKind::PixelShift && math::floor(magnitude) != magnitude {
            return Err(Error::InvalidParameter("pixel shift must be a whole number of columns"));
        }
        Ok(Self { kind, magnitude })
    }

    /// Applies the noise to a grid. Location jitter leaves the grid as is.
    pub fn apply_to_grid<R: Rng + ?Sized>(&self, grid: &IntensityGrid, rng: &mut R) -> Result<IntensityGrid> {
        match self.kind {
            NoiseKind::LocationJitter => Ok(grid.clone()),
            NoiseKind::HalfGaussian => perturb_grid_half_gaussian(grid, self.magnitude, rng),
            NoiseKind::Lognormal => perturb_grid_lognormal(grid, self.magnitude, rng),
            NoiseKind::PixelShift => shift_grid(grid, self.magnitude as i64),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn unit_extent() -> Rect {
        Rect::new(0.0, 10.0, 0.0, 10.0).unwrap()
    }

    #[test]
    fn single_cell_grid_keeps_points_inside() {
        let mut g = IntensityGrid::zeros(5, 5, unit_extent()).unwrap();
        g.set(3, 1, 50.0).unwrap();
        let cell = g.cell_rect(3, 1);
        let mut rng = seed::rng_for(1, &[]);
        for _ in 0..20 {
            let s = sample_nhpp(&g, &mut rng).unwrap();
            assert!(s.points().iter().all(|&p| cell.contains(p)));
        }
    }

    #[test]
    fn empty_intensity_errors() {
        let g = IntensityGrid::zeros(4, 4, unit_extent()).unwrap();
        let mut rng = seed::rng_for(1, &[]);
        assert!(matches!(sample_nhpp(&g, &mut rng), Err(Error::EmptyIntensity)));
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(IntensityGrid::new(2, 2, alloc::vec![1.0; 3], unit_extent()).is_err());
        assert!(IntensityGrid::new(2, 1, alloc::vec![1.0, -1.0], unit_extent()).is_err());
        assert!(IntensityGrid::new(0, 1, alloc::vec![], unit_extent()).is_err());
    }

    #[test]
    fn layout_is_row_major_from_bottom() {
        let g = IntensityGrid::new(2, 2, alloc::vec![1.0, 2.0, 3.0, 4.0], unit_extent()).unwrap();
        assert_eq!(g.get(1, 0), 2.0);
        assert_eq!(g.get(0, 1), 3.0);
        assert_eq!(g.locate(CartesianPoint::new(7.0, 2.0)), Some((1, 0)));
        assert_eq!(g.cell_center(0, 1), CartesianPoint::new(2.5, 7.5));
    }

    #[test]
    fn jitter_zero_is_identity() {
        let s = PointPattern::from_points(alloc::vec![CartesianPoint::new(1.0, -0.0), CartesianPoint::new(3.5, 2.0)])
            .unwrap();
        let mut rng = seed::rng_for(2, &[]);
        let j = jitter_pattern(&s, 0.0, &mut rng).unwrap();
        for (a, b) in s.points().iter().zip(j.points()) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
        assert!(jitter_pattern(&s, -1.0, &mut rng).is_err());
    }

    #[test]
    fn jitter_moments() {
        let pts: Vec<CartesianPoint> = (0..10_000).map(|_| CartesianPoint::new(0.0, 0.0)).collect();
        let s = PointPattern::from_points(pts).unwrap();
        let mut rng = seed::rng_for(3, &[]);
        let j = jitter_pattern(&s, 4.0, &mut rng).unwrap();
        assert_eq!(j.len(), s.len());
        let n = j.len() as f64;
        for coord in [0, 1] {
            let v: Vec<f64> = j.points().iter().map(|p| if coord == 0 { p.x } else { p.y }).collect();
            let mean = v.iter().sum::<f64>() / n;
            let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            assert!((var.sqrt() - 1.0).abs() < 0.03);
        }
    }

    #[test]
    fn half_gaussian_mean() {
        let g = IntensityGrid::zeros(100, 100, unit_extent()).unwrap();
        let mut rng = seed::rng_for(4, &[]);
        let p = perturb_grid_half_gaussian(&g, 1.0, &mut rng).unwrap();
        let mean = p.total() / 1e4;
        // half-normal sd = sqrt(1 - 2/pi)
        let se = (1.0 - 2.0 / core::f64::consts::PI).sqrt() / 100.0;
        assert!((mean - (2.0 / core::f64::consts::PI).sqrt()).abs() < 3.0 * se);
        assert_eq!(perturb_grid_half_gaussian(&g, 0.0, &mut rng).unwrap(), g);
        let base = IntensityGrid::new(2, 1, alloc::vec![1.0, 2.0], unit_extent()).unwrap();
        let q = perturb_grid_half_gaussian(&base, 0.5, &mut rng).unwrap();
        assert!(q.total() > base.total());
        assert!(q.cells().iter().zip(base.cells()).all(|(a, b)| a >= b));
    }

    #[test]
    fn lognormal_median_and_limit() {
        let g = IntensityGrid::zeros(100, 100, unit_extent()).unwrap();
        let mut rng = seed::rng_for(5, &[]);
        let p = perturb_grid_lognormal(&g, 1.0, &mut rng).unwrap();
        let mut v = p.cells().to_vec();
        v.sort_unstable_by(f64::total_cmp);
        let median = 0.5 * (v[4999] + v[5000]);
        assert!((median - 1.0).abs() < 0.05);
        assert!(v[0] > 0.0);
        let z = perturb_grid_lognormal(&g, 0.0, &mut rng).unwrap();
        assert!(z.cells().iter().all(|&c| c == 1.0));
    }

    #[test]
    fn shift_examples() {
        let mut g = IntensityGrid::zeros(6, 3, unit_extent()).unwrap();
        g.set(2, 1, 5.0).unwrap();
        assert_eq!(shift_grid(&g, 0).unwrap(), g);
        let s = shift_grid(&g, 3).unwrap();
        assert_eq!(s.get(5, 1), 5.0);
        assert_eq!(s.total(), 5.0);
        let back = shift_grid(&s, -3).unwrap();
        assert_eq!(back, g);
        // mass pushed past the edge is dropped
        assert_eq!(shift_grid(&g, -3).unwrap().total(), 0.0);
        assert!(matches!(shift_grid(&g, 6), Err(Error::ShiftOutOfRange { shift: 6, width: 6 })));
        assert!(shift_grid(&g, -6).is_err());
    }

    #[test]
    fn noise_spec_validation() {
        assert!(NoiseSpec::new(NoiseKind::PixelShift, 2.5).is_err());
        assert!(NoiseSpec::new(NoiseKind::PixelShift, -2.0).is_ok());
        assert!(NoiseSpec::new(NoiseKind::HalfGaussian, -0.1).is_err());
        assert_eq!("shift".parse::<NoiseKind>(), Ok(NoiseKind::PixelShift));
    }
}
