//! Point-scatterer model against the exact sphere field: the far-field error
//! shrinks like ε².

use std::f64::consts::PI;

use smallscat::asymptotic::{point_scatterer_time, PointScattererModel};
use smallscat::geometry::{norm, shell_quadrature, ShellRegion};
use smallscat::incident::ShellPulse;
use smallscat::metrics::{fit_power_law, shell_l2_norm};
use smallscat::sphere_oracle::{sphere_scattered_time, SphereScenario};

fn main() -> smallscat::Result<()> {
    let pulse = ShellPulse::default();
    let rule = shell_quadrature(&ShellRegion::new(2.0, 3.0)?, 24, 2);
    let t = 5.0;
    let mut points = Vec::new();
    for eps in [0.02, 0.04, 0.08, 0.16] {
        let model = PointScattererModel::new(4.0 * PI, eps, pulse.clone())?;
        let exact = SphereScenario::new(eps, pulse.clone())?;
        let err = shell_l2_norm(&rule, |x| {
            point_scatterer_time(&model, t, x).expect("x is away from the origin")
                - sphere_scattered_time(&exact, t, norm(x))
        });
        println!("eps = {eps:<5} |u_app - u_sc|(t = {t}) = {err:.4e}");
        points.push((eps, err));
    }
    let fit = fit_power_law(&points)?;
    println!("slope {:.3}, max log-residual {:.3}", fit.slope, fit.max_residual);
    Ok(())
}
