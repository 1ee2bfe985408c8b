//! Shell norms, local energy, power-law fits and the scaling checks.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::asymptotic::{apply_s_app, density_app, scaled_equilibrium_density};
use crate::bem::{boundary_projections, capacitance, evaluate_potential, BoundaryDensity, ScatteringSolver};
use crate::error::{Error, Result};
use crate::geometry::{build_surface_grid, norm, scale, Point, StarShape, SurfaceGrid, VolumeRule};
use crate::incident::{incident_trace, ShellPulse};

/// `√(Σ wᵢ u(xᵢ)²)` over a shell rule.
pub fn shell_l2_norm(rule: &VolumeRule, field: impl Fn(&Point) -> f64) -> f64 {
    rule.integrate(|x| {
        let v = field(x);
        v * v
    })
    .sqrt()
}

/// [`shell_l2_norm`] for values already sampled at the rule's points.
pub fn shell_l2_norm_of_samples(rule: &VolumeRule, values: &[f64]) -> f64 {
    assert_eq!(values.len(), rule.len(), "one sample per quadrature point");
    values
        .iter()
        .zip(&rule.weights)
        .map(|(v, w)| w * v * v)
        .sum::<f64>()
        .sqrt()
}

/// `½ (‖∇u‖² + ‖v‖²)` over a shell rule.
pub fn local_energy(rule: &VolumeRule, grad_u: impl Fn(&Point) -> Point, v: impl Fn(&Point) -> f64) -> f64 {
    0.5 * rule.integrate(|x| {
        let g = grad_u(x);
        let vt = v(x);
        g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + vt * vt
    })
}

/// Central-difference gradient with step `h`.
pub fn finite_difference_gradient(u: impl Fn(&Point) -> f64, x: &Point, h: f64) -> Point {
    let mut g = [0.0; 3];
    for (d, gd) in g.iter_mut().enumerate() {
        let mut p = *x;
        let mut m = *x;
        p[d] += h;
        m[d] -= h;
        *gd = (u(&p) - u(&m)) / (2.0 * h);
    }
    g
}

/// Least-squares line through `(log x, log y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub abscissae: Vec<f64>,
    pub ordinates: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|log y − (intercept + slope·log x)|`.
    pub max_residual: f64,
}

impl ScalingFit {
    pub fn passes(&self, slope: f64, tolerance: f64, max_residual: f64) -> bool {
        (self.slope - slope).abs() <= tolerance && self.max_residual < max_residual
    }
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(&(x, y)) = points
        .iter()
        .find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(Error::Fit(format!("non-positive or non-finite point ({x:e}, {y:e})")));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("abscissae are all equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(ScalingFit {
        abscissae: points.iter().map(|p| p.0).collect(),
        ordinates: points.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        max_residual,
    })
}

pub const FIT_CSV_HEADER: &str = "check_name,slope,intercept,max_residual,pass";

pub fn write_fit_row(mut w: impl Write, check_name: &str, fit: &ScalingFit, pass: bool) -> Result<()> {
    writeln!(
        w,
        "{check_name},{:?},{:?},{:?},{pass}",
        fit.slope, fit.intercept, fit.max_residual
    )?;
    Ok(())
}

/// Per-ε norms of the mean part and of the fluctuation of the incident trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionNorms {
    pub epsilon: f64,
    pub mean: f64,
    pub fluctuation: f64,
}

pub fn projection_norms(
    shape: &StarShape,
    pulse: &ShellPulse,
    s: Complex64,
    epsilon: f64,
    resolution: (usize, usize),
) -> Result<ProjectionNorms> {
    let grid = build_surface_grid(shape, epsilon, resolution.0, resolution.1)?;
    let trace = incident_trace(pulse, s, &grid)?;
    let (mean, fluctuation) = boundary_projections(&grid, &trace);
    Ok(ProjectionNorms {
        epsilon,
        mean: mean.norm() * grid.area().sqrt(),
        fluctuation: fluctuation.l2_norm(&grid),
    })
}

/// Fits of the `L²(Γ^ε)` norms of the mean part (slope 1) and of the
/// fluctuation (slope 2) of the incident trace.
pub fn check_projection_scaling(
    shape: &StarShape,
    pulse: &ShellPulse,
    s: Complex64,
    epsilons: &[f64],
    resolution: (usize, usize),
) -> Result<(ScalingFit, ScalingFit)> {
    let norms = epsilons
        .par_iter()
        .map(|&e| projection_norms(shape, pulse, s, e, resolution))
        .collect::<Result<Vec<_>>>()?;
    let mean: Vec<_> = norms.iter().map(|n| (n.epsilon, n.mean)).collect();
    let fluct: Vec<_> = norms.iter().map(|n| (n.epsilon, n.fluctuation)).collect();
    Ok((fit_power_law(&mean)?, fit_power_law(&fluct)?))
}

/// `‖λ̂^ε − λ̂^ε_app‖ / ‖λ̂^ε‖` in `L²(Γ^ε)`.
pub fn density_error(
    shape: &StarShape,
    sigma1: &BoundaryDensity,
    pulse: &ShellPulse,
    s: Complex64,
    epsilon: f64,
    resolution: (usize, usize),
) -> Result<f64> {
    let solver = ScatteringSolver::new(shape, epsilon, resolution.0, resolution.1)?;
    let grid = solver.grid();
    let exact = solver
        .scattered_density(pulse, s)
        .map_err(|e| e.context(format!("density at eps = {epsilon}")))?
        .density;
    let approx = density_app(grid, sigma1, pulse, s)?;
    let scale = exact.l2_norm(grid);
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((&exact - &approx).l2_norm(grid) / scale)
}

pub fn check_density_expansion(
    shape: &StarShape,
    pulse: &ShellPulse,
    s: Complex64,
    epsilons: &[f64],
    resolution: (usize, usize),
) -> Result<ScalingFit> {
    let sigma1 = capacitance(shape, resolution.0, resolution.1)?.sigma1;
    let errors = epsilons
        .iter()
        .map(|&e| Ok((e, density_error(shape, &sigma1, pulse, s, e, resolution)?)))
        .collect::<Result<Vec<_>>>()?;
    fit_power_law(&errors)
}

/// Unit-scale observation points used by the dilation check.
pub const DILATION_PROBES: [Point; 4] = [[2.0, 0.0, 0.0], [0.0, -2.5, 1.0], [1.5, 1.5, 1.5], [0.0, 0.0, -3.0]];

/// Largest relative mismatch between the exterior solution at scale ε and
/// frequency `s`, and the unit-scale solution at `εs` with dilated data,
/// over [`DILATION_PROBES`] scaled by ε.
pub fn check_dilation_identity(
    shape: &StarShape,
    epsilon: f64,
    s: Complex64,
    data: impl Fn(&Point) -> Complex64,
    resolution: (usize, usize),
) -> Result<f64> {
    let small = ScatteringSolver::new(shape, epsilon, resolution.0, resolution.1)?;
    let unit = ScatteringSolver::new(shape, 1.0, resolution.0, resolution.1)?;
    let g_small = BoundaryDensity::new(small.grid().nodes().iter().map(&data).collect());
    let g_unit = BoundaryDensity::new(unit.grid().nodes().iter().map(|y| data(&scale(epsilon, y))).collect());
    let x: Vec<Point> = DILATION_PROBES.iter().map(|y| scale(epsilon, y)).collect();
    let a = small.exterior_dirichlet(s, &g_small)?.evaluate(&x)?;
    let b = unit
        .exterior_dirichlet(s * epsilon, &g_unit)?
        .evaluate(&DILATION_PROBES)?;
    let size = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if size == 0.0 {
        return Ok(b.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    Ok(a.iter().zip(&b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max) / size)
}

/// `‖(S^ε − S^ε_app)φ‖_{L²(K_ff)}` by the shell rule.
pub fn kernel_difference_norm(
    grid: &SurfaceGrid,
    density: &BoundaryDensity,
    s: Complex64,
    rule: &VolumeRule,
) -> Result<f64> {
    let exact = evaluate_potential(grid, density, s, &rule.points)?;
    let diff = rule
        .points
        .iter()
        .zip(&exact)
        .map(|(x, v)| Ok((v - apply_s_app(grid, density, s, x)?).norm()))
        .collect::<Result<Vec<_>>>()?;
    Ok(shell_l2_norm_of_samples(rule, &diff))
}

/// Fit of `‖(S^ε − S^ε_app)σ^ε‖_{L²(K_ff)}` against ε.
pub fn check_kernel_difference(
    shape: &StarShape,
    epsilons: &[f64],
    s: Complex64,
    resolution: (usize, usize),
    rule: &VolumeRule,
) -> Result<ScalingFit> {
    let sigma1 = capacitance(shape, resolution.0, resolution.1)?.sigma1;
    let norms = epsilons
        .par_iter()
        .map(|&e| {
            let grid = build_surface_grid(shape, e, resolution.0, resolution.1)?;
            let sigma = scaled_equilibrium_density(&grid, &sigma1)?;
            Ok((e, kernel_difference_norm(&grid, &sigma, s, rule)?))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_power_law(&norms)
}

/// Radial distance of each rule point, for radial fields.
pub fn radii(rule: &VolumeRule) -> Vec<f64> {
    rule.points.iter().map(norm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{shell_quadrature, RadialFunction, ShellRegion};
    use crate::incident::incident_time;
    use crate::quadrature::gauss_legendre_on;
    use std::f64::consts::PI;

    fn shell() -> VolumeRule {
        shell_quadrature(&ShellRegion::new(2.0, 3.0).unwrap(), 12, 8)
    }

    #[test]
    fn constant_field_norm_is_root_volume() {
        let rule = shell();
        let vol = ShellRegion::new(2.0, 3.0).unwrap().volume();
        assert!((shell_l2_norm(&rule, |_| 2.0) - 2.0 * vol.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn inverse_distance_norm() {
        let got = shell_l2_norm(&shell(), |x| 1.0 / norm(x));
        assert!((got - (4.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn monopole_norm_matches_radial_oracle() {
        let got = shell_l2_norm(&shell(), |x| (-norm(x)).exp() / norm(x));
        let radial = gauss_legendre_on(40, 2.0, 3.0).integrate(|r| (-2.0 * r).exp() * 4.0 * PI);
        assert!((got - radial.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn shell_norm_is_homogeneous() {
        let rule = shell();
        let f = |x: &Point| x[0] * x[1] - x[2];
        let a = shell_l2_norm(&rule, |x| -3.0 * f(x));
        let b = 3.0 * shell_l2_norm(&rule, f);
        assert!((a - b).abs() <= 1e-14 * b);
    }

    #[test]
    fn static_monopole_energy() {
        let rule = shell();
        let e = local_energy(
            &rule,
            |x| {
                let r = norm(x);
                scale(-1.0 / (r * r * r), x)
            },
            |_| 0.0,
        );
        assert!((e - 0.5 * 4.0 * PI / 6.0).abs() < 1e-10);
        assert_eq!(local_energy(&rule, |_| [0.0; 3], |_| 0.0), 0.0);
    }

    #[test]
    fn incident_energy_vanishes_after_passage() {
        let rule = shell();
        let pulse = ShellPulse::default();
        let t = 6.5;
        let u = |x: &Point| incident_time(&pulse, t, norm(x));
        let e = local_energy(&rule, |x| finite_difference_gradient(u, x, 1e-4), |_| 0.0);
        assert_eq!(e, 0.0);
        let during = local_energy(
            &rule,
            |x| finite_difference_gradient(|y| incident_time(&pulse, 1.0, norm(y)), x, 1e-4),
            |_| 0.0,
        );
        assert!(during > 0.0);
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = [0.02, 0.04, 0.08, 0.16].iter().map(|&e| (e, 3.0 * e * e)).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-12);
        assert!(fit.max_residual < 1e-12);
    }

    #[test]
    fn perturbed_power_law() {
        let pts: Vec<_> = [0.02, 0.04, 0.08, 0.16]
            .iter()
            .map(|&e| (e, e * (1.0 + 0.1 * e)))
            .collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!(fit.slope >= 1.0 && fit.slope <= 1.02, "{}", fit.slope);
    }

    #[test]
    fn fit_preconditions() {
        assert!(fit_power_law(&[(0.1, 1.0)]).is_err());
        assert!(fit_power_law(&[(0.1, 1.0), (0.2, 0.0), (0.4, 1.0)]).is_err());
        assert!(fit_power_law(&[(0.1, 1.0), (0.1, 2.0), (0.1, 3.0)]).is_err());
    }

    #[test]
    fn fit_row_format() {
        let fit = fit_power_law(&[(1.0, 1.0), (2.0, 2.0), (4.0, 4.0)]).unwrap();
        let mut buf = Vec::new();
        write_fit_row(&mut buf, "demo", &fit, true).unwrap();
        let row = String::from_utf8(buf).unwrap();
        assert!(row.starts_with("demo,1.0,"));
        assert!(row.ends_with(",true\n"));
        assert_eq!(FIT_CSV_HEADER.split(',').count(), row.trim().split(',').count());
    }

    #[test]
    fn sphere_radial_trace_has_no_fluctuation() {
        let n = projection_norms(
            &StarShape::unit_sphere(),
            &ShellPulse::default(),
            Complex64::new(0.0, 1.0),
            0.1,
            (8, 16),
        )
        .unwrap();
        assert!(n.fluctuation < 1e-13 * n.mean);
    }

    #[test]
    fn sphere_static_density_error_is_at_solver_noise() {
        let shape = StarShape::unit_sphere();
        let pulse = ShellPulse::default();
        let sigma1 = capacitance(&shape, 8, 16).unwrap().sigma1;
        let s = Complex64::new(0.0, 0.0);
        let err = density_error(&shape, &sigma1, &pulse, s, 0.1, (8, 16)).unwrap();
        assert!(err < 1e-6, "{err:e}");
    }

    #[test]
    fn density_error_is_amplitude_invariant() {
        let shape = StarShape::bumpy();
        let sigma1 = capacitance(&shape, 8, 16).unwrap().sigma1;
        let s = Complex64::new(0.0, 1.0);
        let a = density_error(&shape, &sigma1, &ShellPulse::default(), s, 0.08, (8, 16)).unwrap();
        let b = density_error(
            &shape,
            &sigma1,
            &ShellPulse::new(2.0, 3.0, 7, 5.0).unwrap(),
            s,
            0.08,
            (8, 16),
        )
        .unwrap();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn dilation_is_trivial_at_unit_scale() {
        let d = |x: &Point| Complex64::new(x[0] + 1.0, x[2]);
        let m = check_dilation_identity(&StarShape::bumpy(), 1.0, Complex64::new(0.0, 2.0), d, (8, 16)).unwrap();
        assert_eq!(m, 0.0);
    }

    #[test]
    fn dilation_identity_holds_to_rounding() {
        let d = |x: &Point| Complex64::new((3.0 * x[0]).cos() + x[1], x[2]);
        for shape in [StarShape::unit_sphere(), StarShape::bumpy()] {
            for s in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)] {
                let m = check_dilation_identity(&shape, 0.1, s, d, (8, 16)).unwrap();
                assert!(m < 1e-10, "{m:e}");
            }
        }
    }

    #[test]
    fn kernel_difference_for_offset_sphere() {
        let centre = [0.3, -0.2, 0.1];
        let shape = StarShape::new(centre, RadialFunction::Constant(0.5)).unwrap();
        let rule = shell_quadrature(&ShellRegion::new(2.0, 3.0).unwrap(), 6, 6);
        let sigma1 = capacitance(&shape, 10, 20).unwrap().sigma1;
        for eps in [0.05, 0.1, 0.2] {
            let grid = build_surface_grid(&shape, eps, 10, 20).unwrap();
            let sigma = scaled_equilibrium_density(&grid, &sigma1).unwrap();
            let got = kernel_difference_norm(&grid, &sigma, Complex64::new(0.0, 0.0), &rule).unwrap();
            let c = scale(eps, &centre);
            let q = 0.5 * eps;
            let exact = shell_l2_norm(&rule, |x| {
                let d = crate::geometry::distance(x, &c);
                q * (1.0 / d - 1.0 / norm(x))
            });
            assert!((got - exact).abs() < 1e-10 * exact, "{got} vs {exact}");
        }
    }

    #[test]
    fn kernel_difference_of_zero_density() {
        let grid = build_surface_grid(&StarShape::bumpy(), 0.1, 6, 12).unwrap();
        let rule = shell_quadrature(&ShellRegion::new(2.0, 3.0).unwrap(), 3, 3);
        let z = BoundaryDensity::zeros(grid.len());
        assert_eq!(
            kernel_difference_norm(&grid, &z, Complex64::new(0.0, 1.0), &rule).unwrap(),
            0.0
        );
    }
}
