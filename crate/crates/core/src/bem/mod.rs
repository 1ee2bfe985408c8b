//! Single-layer boundary integral solver for the exterior Dirichlet problem.

mod dense;
mod operator;
mod solve;

pub use dense::{DenseMatrix, LuFactors, SingularFactor};
pub use operator::{
    assemble_single_layer, funk_hecke_eigenvalues, helmholtz_kernel, SingleLayerMatrix, SingleLayerOperator,
};
pub use solve::{
    capacitance, capacitance_on, evaluate_potential, exterior_dirichlet, scattered_frequency, solve_density,
    CapacitanceResult, DensitySolution, ExteriorField, ScatteringSolver,
};

use num_complex::Complex64;

use crate::geometry::SurfaceGrid;

/// Complex values at the nodes of a surface grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundaryDensity {
    values: Vec<Complex64>,
}

impl BoundaryDensity {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, Complex64::new(0.0, 0.0))
    }

    pub fn constant(n: usize, value: Complex64) -> Self {
        Self { values: vec![value; n] }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self::new(self.values.iter().map(|v| v * k).collect())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    /// `∫_Γ φ dΓ` by the grid rule.
    pub fn integral(&self, grid: &SurfaceGrid) -> Complex64 {
        self.check_len(grid);
        self.values.iter().zip(grid.weights()).map(|(v, w)| v * w).sum()
    }

    /// Discrete `L²(Γ)` norm.
    pub fn l2_norm(&self, grid: &SurfaceGrid) -> f64 {
        self.check_len(grid);
        self.values
            .iter()
            .zip(grid.weights())
            .map(|(v, w)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_len(&self, grid: &SurfaceGrid) {
        assert_eq!(self.len(), grid.len(), "density length does not match the grid");
    }
}

impl std::ops::Sub for &BoundaryDensity {
    type Output = BoundaryDensity;

    fn sub(self, rhs: Self) -> BoundaryDensity {
        assert_eq!(self.len(), rhs.len(), "density lengths differ");
        BoundaryDensity::new(self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect())
    }
}

/// Split `φ` into its weighted mean and the `L²(Γ)`-orthogonal remainder.
pub fn boundary_projections(grid: &SurfaceGrid, density: &BoundaryDensity) -> (Complex64, BoundaryDensity) {
    let mean = density.integral(grid) / grid.area();
    let fluctuation = BoundaryDensity::new(density.values().iter().map(|v| v - mean).collect());
    (mean, fluctuation)
}
