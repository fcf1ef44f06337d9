//! Exact vertex enumeration of 2-D zonotope projections.

use super::zonotope::Zonotope;
use crate::error::{Error, Result};

/// Angular tolerance for merging parallel projected generators.
const PARALLEL_EPS: f64 = 1e-12;

/// Counter-clockwise vertices of the projection of `z` onto `dims`.
///
/// Degenerate projections come back as a single point or a two-vertex segment.
pub fn vertices_2d(z: &Zonotope, dims: (usize, usize)) -> Result<Vec<[f64; 2]>> {
    let (a, b) = dims;
    if a >= z.dim() || b >= z.dim() || a == b {
        return Err(Error::InvalidArgument(format!(
            "projection dims ({a}, {b}) invalid for a {}-dimensional set",
            z.dim()
        )));
    }
    let c = [z.center()[a], z.center()[b]];
    let g = z.generators();
    let mut gens: Vec<[f64; 2]> = (0..g.ncols())
        .map(|j| [g[(a, j)], g[(b, j)]])
        .filter(|v| v[0] != 0.0 || v[1] != 0.0)
        .map(|v| {
            if v[1] < 0.0 || (v[1] == 0.0 && v[0] < 0.0) {
                [-v[0], -v[1]]
            } else {
                v
            }
        })
        .collect();
    if gens.is_empty() {
        return Ok(vec![c]);
    }
    gens.sort_by(|u, v| angle(u).total_cmp(&angle(v)));

    let mut merged: Vec<[f64; 2]> = Vec::with_capacity(gens.len());
    for v in gens {
        match merged.last_mut() {
            Some(last) if cross(last, &v).abs() <= PARALLEL_EPS * norm(last) * norm(&v) => {
                last[0] += v[0];
                last[1] += v[1];
            }
            _ => merged.push(v),
        }
    }

    let sum = merged
        .iter()
        .fold([0.0, 0.0], |acc, v| [acc[0] + v[0], acc[1] + v[1]]);
    let mut p = [c[0] - sum[0], c[1] - sum[1]];
    let mut out = Vec::with_capacity(2 * merged.len());
    out.push(p);
    for v in &merged {
        p = [p[0] + 2.0 * v[0], p[1] + 2.0 * v[1]];
        out.push(p);
    }
    if merged.len() == 1 {
        return Ok(out);
    }
    // the last step lands on the top vertex; walk back down with reversed signs
    for v in &merged[..merged.len() - 1] {
        p = [p[0] - 2.0 * v[0], p[1] - 2.0 * v[1]];
        out.push(p);
    }
    Ok(out)
}

/// Shoelace area of a simple polygon.
pub fn polygon_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n)
        .map(|i| cross(&vertices[i], &vertices[(i + 1) % n]))
        .sum();
    0.5 * twice.abs()
}

/// Area of a 2-D zonotope from its generators: `Σ_{i<j} 4 |g_i × g_j|`.
pub fn zonotope_area_2d(z: &Zonotope, dims: (usize, usize)) -> f64 {
    let g = z.generators();
    let cols: Vec<[f64; 2]> = (0..g.ncols())
        .map(|j| [g[(dims.0, j)], g[(dims.1, j)]])
        .collect();
    let mut area = 0.0;
    for i in 0..cols.len() {
        for j in (i + 1)..cols.len() {
            area += 4.0 * cross(&cols[i], &cols[j]).abs();
        }
    }
    area
}

/// Point-in-convex-polygon test for counter-clockwise vertices, with slack `tol`.
pub fn convex_polygon_contains(vertices: &[[f64; 2]], p: [f64; 2], tol: f64) -> bool {
    match vertices.len() {
        0 => false,
        1 => dist(&vertices[0], &p) <= tol,
        2 => segment_distance(&vertices[0], &vertices[1], &p) <= tol,
        n => (0..n).all(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let edge = [b[0] - a[0], b[1] - a[1]];
            let rel = [p[0] - a[0], p[1] - a[1]];
            cross(&edge, &rel) >= -tol * norm(&edge)
        }),
    }
}

fn angle(v: &[f64; 2]) -> f64 {
    v[1].atan2(v[0])
}

fn cross(u: &[f64; 2], v: &[f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

fn norm(v: &[f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn dist(u: &[f64; 2], v: &[f64; 2]) -> f64 {
    (u[0] - v[0]).hypot(u[1] - v[1])
}

fn segment_distance(a: &[f64; 2], b: &[f64; 2], p: &[f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(a, p);
    }
    let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    dist(&[a[0] + t * ab[0], a[1] + t * ab[1]], p)
}
