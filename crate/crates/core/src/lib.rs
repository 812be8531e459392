//! Depth-based two-sample testing for planar point patterns.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`geometry`]: court coordinates, point patterns and the polar transform,
//! - [`depth`]: one-dimensional halfspace depth, pooled depth pairs, Tukey and
//!   Mahalanobis depth in the plane, and the Liu-Singh outlyingness,
//! - [`hyptest`]: the two-dimensional KS family (raw, polar and pooled-depth
//!   variants), the Liu-Singh rank-sum test and the one-sample depth tests,
//! - [`ppsim`]: inhomogeneous Poisson simulation from intensity grids, the
//!   perturbation families and the type-I / power experiment runners.
//!
//! Everything is a pure function of its inputs plus an explicit seed, so
//! results are reproducible bit-for-bit on a given build.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod depth;
pub mod geometry;
pub mod hyptest;
pub mod ppsim;
pub mod seed;
pub mod special;

mod error;
mod math;

pub use depth::{DepthKind, DepthPair, DepthReference};
pub use error::{Error, Result};
pub use geometry::{CartesianPoint, PointPattern, PolarPoint, Rect};
pub use hyptest::{run_method, Coords, TestMethod, TestResult, Warnings};
pub use ppsim::{IntensityGrid, NoiseKind, NoiseSpec};
