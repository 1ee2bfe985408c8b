//! Trace projections, density expansion, kernel difference and dilation for a
//! bumpy obstacle.

use num_complex::Complex64;
use smallscat::geometry::{shell_quadrature, ShellRegion, StarShape};
use smallscat::incident::{incident_laplace, ShellPulse};
use smallscat::metrics::{
    check_density_expansion, check_dilation_identity, check_kernel_difference, check_projection_scaling, ScalingFit,
};

fn show(name: &str, fit: &ScalingFit) {
    println!(
        "{name:<24} slope {:>7.4}  max log-residual {:.4}",
        fit.slope, fit.max_residual
    );
}

fn main() -> smallscat::Result<()> {
    let shape = StarShape::bumpy();
    let pulse = ShellPulse::default().with_center([0.3, 0.0, 0.0]);
    let eps = [0.02, 0.04, 0.08, 0.16];
    let s = Complex64::new(0.0, 1.0);
    let res = (12, 24);
    let (mean, fluct) = check_projection_scaling(&shape, &pulse, s, &eps, res)?;
    show("trace mean part", &mean);
    show("trace fluctuation", &fluct);
    show(
        "density expansion",
        &check_density_expansion(&shape, &pulse, s, &eps, res)?,
    );
    let rule = shell_quadrature(&ShellRegion::new(2.0, 3.0)?, 6, 4);
    show(
        "kernel difference",
        &check_kernel_difference(&shape, &eps, s, res, &rule)?,
    );
    let s2 = Complex64::new(0.0, 2.0);
    let data = |x: &[f64; 3]| incident_laplace(&pulse, s2, smallscat::geometry::distance(x, &pulse.center()));
    let m = check_dilation_identity(&shape, 0.1, s2, data, res)?;
    println!("dilation mismatch        {m:.2e}");
    Ok(())
}
