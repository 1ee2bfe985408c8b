//! Star-shaped obstacles, surface and volume quadrature, smooth cutoffs.

mod cutoff;
mod grid;
mod shape;
mod shell;

pub use cutoff::CutoffFunction;
pub use grid::{build_surface_grid, SurfaceGrid};
pub use shape::{HarmonicTerm, RadialFunction, StarShape, SurfaceSample};
pub use shell::{shell_quadrature, ShellRegion, VolumeRule};

/// A point or vector in ℝ³.
pub type Point = [f64; 3];

#[inline]
pub fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: &Point) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add(a: &Point, b: &Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale(k: f64, a: &Point) -> Point {
    [k * a[0], k * a[1], k * a[2]]
}

#[inline]
pub fn cross(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn distance(a: &Point, b: &Point) -> f64 {
    norm(&sub(a, b))
}

/// Unit direction on S² from polar angle cosine and azimuth.
#[inline]
pub fn direction(cos_theta: f64, phi: f64) -> Point {
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    [sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta]
}

/// An orthonormal pair spanning the tangent plane of S² at `s`.
pub fn tangent_frame(s: &Point) -> (Point, Point) {
    // Pick the coordinate axis least aligned with s.
    let axis = if s[0].abs() <= s[1].abs() && s[0].abs() <= s[2].abs() {
        [1.0, 0.0, 0.0]
    } else if s[1].abs() <= s[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let e1 = cross(s, &axis);
    let e1 = scale(1.0 / norm(&e1), &e1);
    let e2 = cross(s, &e1);
    (e1, e2)
}
