//! Point-scatterer model at the origin and the approximate single layer.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bem::BoundaryDensity;
use crate::error::{Error, Result};
use crate::geometry::{norm, Point, SurfaceGrid};
use crate::incident::{incident_laplace, incident_time, ShellPulse};

/// `u_app(t, x) = −c^ε u^inc(t − |x|, 0) / (4π|x|)` with `c^ε = ε c¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointScattererModel {
    c1: f64,
    epsilon: f64,
    pulse: ShellPulse,
}

impl PointScattererModel {
    pub fn new(c1: f64, epsilon: f64, pulse: ShellPulse) -> Result<Self> {
        if !(c1 > 0.0) || !(epsilon > 0.0) {
            return Err(Error::Config(format!(
                "capacitance {c1} and scale {epsilon} must both be positive"
            )));
        }
        Ok(Self { c1, epsilon, pulse })
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `c^ε = ε c¹`.
    pub fn c_eps(&self) -> f64 {
        self.epsilon * self.c1
    }

    pub fn pulse(&self) -> &ShellPulse {
        &self.pulse
    }

    fn origin_distance(&self) -> f64 {
        norm(&self.pulse.center())
    }
}

fn radius(x: &Point) -> Result<f64> {
    let r = norm(x);
    if r == 0.0 {
        Err(Error::SingularPoint("the point scatterer sits at the origin".into()))
    } else {
        Ok(r)
    }
}

pub fn point_scatterer_time(model: &PointScattererModel, t: f64, x: &Point) -> Result<f64> {
    let r = radius(x)?;
    let u0 = incident_time(&model.pulse, t - r, model.origin_distance());
    Ok(-model.c_eps() * u0 / (4.0 * PI * r))
}

pub fn point_scatterer_frequency(model: &PointScattererModel, s: Complex64, x: &Point) -> Result<Complex64> {
    let r = radius(x)?;
    let u0 = incident_laplace(&model.pulse, s, model.origin_distance());
    Ok(-model.c_eps() * (-s * r).exp() / (4.0 * PI * r) * u0)
}

/// `(S_app(s) φ)(x) = e^{−s|x|} / (4π|x|) ∫_Γ φ dΓ`.
pub fn apply_s_app(grid: &SurfaceGrid, density: &BoundaryDensity, s: Complex64, x: &Point) -> Result<Complex64> {
    let r = radius(x)?;
    Ok((-s * r).exp() / (4.0 * PI * r) * density.integral(grid))
}

/// `σ^ε(x) = ε⁻¹ σ¹(x/ε)` on the grid at scale ε, from the unit-scale density
/// on the same angular grid.
pub fn scaled_equilibrium_density(grid: &SurfaceGrid, sigma1: &BoundaryDensity) -> Result<BoundaryDensity> {
    if sigma1.len() != grid.len() {
        return Err(Error::Dimension {
            expected: grid.len(),
            found: sigma1.len(),
        });
    }
    Ok(sigma1.scaled(Complex64::new(1.0 / grid.epsilon(), 0.0)))
}

/// `λ_app = −σ^ε · û^inc(s, 0)`.
pub fn density_app(
    grid: &SurfaceGrid,
    sigma1: &BoundaryDensity,
    pulse: &ShellPulse,
    s: Complex64,
) -> Result<BoundaryDensity> {
    let u0 = incident_laplace(pulse, s, norm(&pulse.center()));
    Ok(scaled_equilibrium_density(grid, sigma1)?.scaled(-u0))
}
