use std::f64::consts::PI;

use super::{direction, scale, Point};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, gauss_legendre_on};

/// Spherical shell `{ inner < |x| < outer }` about the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellRegion {
    pub inner: f64,
    pub outer: f64,
}

impl ShellRegion {
    /// `outer == inner` is accepted and yields an empty rule.
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 1.0) || !(outer >= inner) || !outer.is_finite() {
            return Err(Error::Config(format!(
                "shell radii must satisfy outer >= inner > 1, got [{inner}, {outer}]"
            )));
        }
        Ok(Self { inner, outer })
    }

    pub fn volume(&self) -> f64 {
        4.0 * PI / 3.0 * (self.outer.powi(3) - self.inner.powi(3))
    }
}

/// Points and weights of a volume quadrature rule.
#[derive(Debug, Clone, Default)]
pub struct VolumeRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl VolumeRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

/// Radial Gauss–Legendre (`n_r` points) times the product rule on S²
/// (`n_ang` Gauss–Legendre values of `cos θ`, `2 n_ang` azimuths).
pub fn shell_quadrature(region: &ShellRegion, n_r: usize, n_ang: usize) -> VolumeRule {
    if region.outer <= region.inner || n_r == 0 || n_ang == 0 {
        return VolumeRule::default();
    }
    let radial = gauss_legendre_on(n_r, region.inner, region.outer);
    let polar = gauss_legendre(n_ang);
    let n_phi = 2 * n_ang;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut rule = VolumeRule::default();
    for (&rho, &wr) in radial.nodes.iter().zip(&radial.weights) {
        for (&x, &wx) in polar.nodes.iter().zip(&polar.weights) {
            for k in 0..n_phi {
                let s = direction(x, dphi * (k as f64 + 0.5));
                rule.points.push(scale(rho, &s));
                rule.weights.push(wr * rho * rho * wx * dphi);
            }
        }
    }
    rule
}
