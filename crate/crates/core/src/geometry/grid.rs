use std::f64::consts::PI;

use super::{direction, scale, Point, StarShape};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Quadrature grid on the contracted surface `Γ^ε = ε·Γ`.
///
/// Nodes are ordered ring by ring: node `p * n_phi + k` sits at the `p`-th
/// Gauss–Legendre value of `cos θ` and azimuth `2πk / n_phi`.
#[derive(Debug, Clone)]
pub struct SurfaceGrid {
    pub(crate) shape: StarShape,
    pub(crate) epsilon: f64,
    pub(crate) n_theta: usize,
    pub(crate) n_phi: usize,
    pub(crate) nodes: Vec<Point>,
    pub(crate) weights: Vec<f64>,
    pub(crate) normals: Vec<Point>,
    /// Parameter directions ŝ on the unit sphere.
    pub(crate) directions: Vec<Point>,
    /// Unit-scale radial values `r(ŝ)`.
    pub(crate) radii: Vec<f64>,
    /// Unit-scale area elements relative to solid angle.
    pub(crate) jacobians: Vec<f64>,
    /// Solid-angle weights of the product rule on S².
    pub(crate) angular_weights: Vec<f64>,
    pub(crate) cos_theta: Vec<f64>,
}

pub fn build_surface_grid(shape: &StarShape, epsilon: f64, n_theta: usize, n_phi: usize) -> Result<SurfaceGrid> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidGrid(format!("scale {epsilon} outside (0, 1]")));
    }
    if n_theta < 4 || n_phi < 4 {
        return Err(Error::InvalidGrid(format!(
            "resolution {n_theta}x{n_phi} below the 4x4 minimum"
        )));
    }
    let rule = gauss_legendre(n_theta);
    let n = n_theta * n_phi;
    let mut grid = SurfaceGrid {
        shape: shape.clone(),
        epsilon,
        n_theta,
        n_phi,
        nodes: Vec::with_capacity(n),
        weights: Vec::with_capacity(n),
        normals: Vec::with_capacity(n),
        directions: Vec::with_capacity(n),
        radii: Vec::with_capacity(n),
        jacobians: Vec::with_capacity(n),
        angular_weights: Vec::with_capacity(n),
        cos_theta: rule.nodes.clone(),
    };
    let dphi = 2.0 * PI / n_phi as f64;
    for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
        for k in 0..n_phi {
            let s = direction(x, dphi * k as f64);
            let smp = shape.sample(&s);
            if !(smp.radius > 0.0) {
                return Err(Error::InvalidShape(format!(
                    "radial function {} at grid direction {s:?}",
                    smp.radius
                )));
            }
            let a = wx * dphi;
            grid.directions.push(s);
            grid.radii.push(smp.radius);
            grid.jacobians.push(smp.jacobian);
            grid.angular_weights.push(a);
            grid.nodes.push(scale(epsilon, &smp.point));
            grid.weights.push(epsilon * epsilon * (a * smp.jacobian));
            grid.normals.push(smp.normal);
        }
    }
    Ok(grid)
}

impl SurfaceGrid {
    pub fn shape(&self) -> &StarShape {
        &self.shape
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn resolution(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn directions(&self) -> &[Point] {
        &self.directions
    }

    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest node spacing, measured along the surface at this scale.
    pub fn mesh_width(&self) -> f64 {
        let rmax = self.radii.iter().cloned().fold(0.0, f64::max);
        let jmax = self
            .jacobians
            .iter()
            .zip(&self.radii)
            .map(|(j, r)| j / r)
            .fold(0.0, f64::max);
        self.epsilon * rmax.max(jmax) * PI / self.n_theta.min(self.n_phi / 2).max(1) as f64
    }

    /// The same angular grid on the contracted surface at another scale.
    pub fn rescaled(&self, epsilon: f64) -> Result<SurfaceGrid> {
        build_surface_grid(&self.shape, epsilon, self.n_theta, self.n_phi)
    }
}
