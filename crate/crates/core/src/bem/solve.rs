use num_complex::Complex64;
use rayon::prelude::*;

use super::dense::LuFactors;
use super::operator::{helmholtz_kernel, SingleLayerMatrix, SingleLayerOperator};
use super::BoundaryDensity;
use crate::error::{Error, Result};
use crate::geometry::{build_surface_grid, distance, Point, StarShape, SurfaceGrid};
use crate::incident::{incident_trace, ShellPulse};

const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// A solved boundary density with its conditioning diagnostics.
#[derive(Debug, Clone)]
pub struct DensitySolution {
    pub density: BoundaryDensity,
    pub relative_residual: f64,
    /// 1-norm condition estimate of the system matrix.
    pub condition: f64,
}

/// Solve `mat · λ = rhs` by dense LU and verify the residual.
pub fn solve_density(mat: &SingleLayerMatrix, rhs: &BoundaryDensity) -> Result<DensitySolution> {
    if rhs.len() != mat.dim() {
        return Err(Error::Dimension {
            expected: mat.dim(),
            found: rhs.len(),
        });
    }
    let lu = LuFactors::new(mat.dense()).map_err(|_| Error::NearResonance {
        s: mat.frequency(),
        residual: f64::INFINITY,
        condition: f64::INFINITY,
    })?;
    solve_with(mat, &lu, rhs)
}

fn solve_with(mat: &SingleLayerMatrix, lu: &LuFactors, rhs: &BoundaryDensity) -> Result<DensitySolution> {
    if rhs.is_zero() {
        return Ok(DensitySolution {
            density: BoundaryDensity::zeros(rhs.len()),
            relative_residual: 0.0,
            condition: lu.condition(),
        });
    }
    let x = lu.solve(rhs.values());
    let ax = mat.apply(&x);
    let num: f64 = ax.iter().zip(rhs.values()).map(|(a, b)| (a - b).norm_sqr()).sum();
    let den: f64 = rhs.values().iter().map(|b| b.norm_sqr()).sum();
    let relative_residual = (num / den).sqrt();
    log::debug!(
        "single-layer solve at s = {:.4}: residual {relative_residual:.2e}, condition {:.2e}",
        mat.frequency(),
        lu.condition()
    );
    if !(relative_residual <= RESIDUAL_TOLERANCE) {
        return Err(Error::NearResonance {
            s: mat.frequency(),
            residual: relative_residual,
            condition: lu.condition(),
        });
    }
    Ok(DensitySolution {
        density: BoundaryDensity::new(x),
        relative_residual,
        condition: lu.condition(),
    })
}

/// Single-layer potential of a density at points off the surface.
pub fn evaluate_potential(
    grid: &SurfaceGrid,
    density: &BoundaryDensity,
    s: Complex64,
    points: &[Point],
) -> Result<Vec<Complex64>> {
    if density.len() != grid.len() {
        return Err(Error::Dimension {
            expected: grid.len(),
            found: density.len(),
        });
    }
    let required = 2.0 * grid.mesh_width();
    points
        .par_iter()
        .enumerate()
        .map(|(k, x)| {
            let mut nearest = f64::INFINITY;
            let mut sum = Complex64::new(0.0, 0.0);
            for ((y, w), phi) in grid.nodes().iter().zip(grid.weights()).zip(density.values()) {
                let r = distance(x, y);
                nearest = nearest.min(r);
                sum += helmholtz_kernel(s, r) * (w * phi);
            }
            if nearest < required {
                Err(Error::NearField {
                    index: k,
                    distance: nearest,
                    required,
                })
            } else {
                Ok(sum)
            }
        })
        .collect()
}

/// Equilibrium density and capacitance of the unit-scale surface.
#[derive(Debug, Clone)]
pub struct CapacitanceResult {
    pub c1: f64,
    pub sigma1: BoundaryDensity,
    pub grid: SurfaceGrid,
    pub resolution: (usize, usize),
}

/// Solve `𝕊₀ σ¹ = 1` on the unit-scale surface; `c¹ = ∫ σ¹`.
pub fn capacitance(shape: &StarShape, n_theta: usize, n_phi: usize) -> Result<CapacitanceResult> {
    let grid = build_surface_grid(shape, 1.0, n_theta, n_phi)?;
    let (c1, sigma1) = capacitance_on(&grid)?;
    Ok(CapacitanceResult {
        c1,
        sigma1,
        resolution: (n_theta, n_phi),
        grid,
    })
}

/// Capacitance and equilibrium density on a grid at its own scale.
pub fn capacitance_on(grid: &SurfaceGrid) -> Result<(f64, BoundaryDensity)> {
    let mat = SingleLayerOperator::new(grid)?.assemble(Complex64::new(0.0, 0.0));
    let sol = solve_density(&mat, &BoundaryDensity::constant(grid.len(), Complex64::new(1.0, 0.0)))
        .map_err(|e| e.context("static equilibrium problem"))?;
    let sigma = BoundaryDensity::new(sol.density.values().iter().map(|v| Complex64::new(v.re, 0.0)).collect());
    Ok((sigma.integral(grid).re, sigma))
}

/// Exterior Dirichlet solution represented as a single-layer potential.
#[derive(Debug, Clone)]
pub struct ExteriorField {
    grid: SurfaceGrid,
    s: Complex64,
    solution: DensitySolution,
}

impl ExteriorField {
    pub fn evaluate(&self, points: &[Point]) -> Result<Vec<Complex64>> {
        evaluate_potential(&self.grid, &self.solution.density, self.s, points)
    }

    pub fn density(&self) -> &BoundaryDensity {
        &self.solution.density
    }

    pub fn condition(&self) -> f64 {
        self.solution.condition
    }

    pub fn frequency(&self) -> Complex64 {
        self.s
    }
}

/// The precomputed single-layer operator on one obstacle grid, reused across
/// frequencies.
#[derive(Debug, Clone)]
pub struct ScatteringSolver {
    operator: SingleLayerOperator,
}

impl ScatteringSolver {
    pub fn new(shape: &StarShape, epsilon: f64, n_theta: usize, n_phi: usize) -> Result<Self> {
        Self::from_grid(&build_surface_grid(shape, epsilon, n_theta, n_phi)?)
    }

    pub fn from_grid(grid: &SurfaceGrid) -> Result<Self> {
        Ok(Self {
            operator: SingleLayerOperator::new(grid)?,
        })
    }

    pub fn grid(&self) -> &SurfaceGrid {
        self.operator.grid()
    }

    pub fn operator(&self) -> &SingleLayerOperator {
        &self.operator
    }

    pub fn assemble(&self, s: Complex64) -> SingleLayerMatrix {
        self.operator.assemble(s)
    }

    /// Solve with user-supplied Dirichlet data at the grid nodes.
    pub fn exterior_dirichlet(&self, s: Complex64, data: &BoundaryDensity) -> Result<ExteriorField> {
        let solution = solve_density(&self.assemble(s), data)?;
        Ok(ExteriorField {
            grid: self.grid().clone(),
            s,
            solution,
        })
    }

    /// The density `λ̂ = 𝕊(s)⁻¹(−γ₀ û^inc)` of the scattered field.
    pub fn scattered_density(&self, pulse: &ShellPulse, s: Complex64) -> Result<DensitySolution> {
        let g = incident_trace(pulse, s, self.grid())?;
        solve_density(&self.assemble(s), &g.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// `û_sc(s, x)` at each point, with the condition estimate of the solve.
    pub fn scattered_frequency(
        &self,
        pulse: &ShellPulse,
        s: Complex64,
        points: &[Point],
    ) -> Result<(Vec<Complex64>, f64)> {
        let sol = self.scattered_density(pulse, s)?;
        let values = evaluate_potential(self.grid(), &sol.density, s, points)?;
        Ok((values, sol.condition))
    }
}

/// `û_sc(s, x)` for one obstacle, pulse and frequency.
pub fn scattered_frequency(
    shape: &StarShape,
    epsilon: f64,
    pulse: &ShellPulse,
    s: Complex64,
    points: &[Point],
    resolution: (usize, usize),
) -> Result<Vec<Complex64>> {
    let solver = ScatteringSolver::new(shape, epsilon, resolution.0, resolution.1)?;
    Ok(solver.scattered_frequency(pulse, s, points)?.0)
}

/// Exterior Dirichlet solution for boundary data given as a function of position.
pub fn exterior_dirichlet(
    shape: &StarShape,
    epsilon: f64,
    s: Complex64,
    data: impl Fn(&Point) -> Complex64,
    resolution: (usize, usize),
) -> Result<ExteriorField> {
    let solver = ScatteringSolver::new(shape, epsilon, resolution.0, resolution.1)?;
    let g = BoundaryDensity::new(solver.grid().nodes().iter().map(data).collect());
    solver.exterior_dirichlet(s, &g)
}
