//! Zonotope and matrix-zonotope arithmetic.

mod containment;
mod interval;
pub mod json;
mod matrix_zonotope;
mod polygon;
mod zonotope;

pub use containment::{contains_point, min_factor_norm, DEFAULT_TOL};
pub use interval::IntervalMatrix;
pub use matrix_zonotope::{entrywise_box, MatrixZonotope};
pub use polygon::{convex_polygon_contains, polygon_area, vertices_2d, zonotope_area_2d};
pub use zonotope::{Reduction, Zonotope};
