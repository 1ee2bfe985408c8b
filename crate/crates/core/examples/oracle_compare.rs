//! Boundary-element scattered field against the closed-form sphere solution.

use num_complex::Complex64;
use smallscat::bem::ScatteringSolver;
use smallscat::geometry::StarShape;
use smallscat::incident::ShellPulse;
use smallscat::sphere_oracle::{sphere_scattered_frequency, SphereScenario};

fn main() -> smallscat::Result<()> {
    let eps = 0.1;
    let pulse = ShellPulse::default();
    let oracle = SphereScenario::new(eps, pulse.clone())?;
    let solver = ScatteringSolver::new(&StarShape::unit_sphere(), eps, 20, 40)?;
    let x = [0.0, 2.5, 0.0];
    for w in [0.0, 1.0, 4.0, 10.0, 20.0, 40.0] {
        let s = Complex64::new(0.0, w);
        let (v, cond) = solver.scattered_frequency(&pulse, s, &[x])?;
        let exact = sphere_scattered_frequency(&oracle, s, 2.5);
        println!(
            "omega = {w:>5}: |u| = {:.4e}  relative error {:.2e}  condition {cond:.1}",
            exact.norm(),
            (v[0] - exact).norm() / exact.norm()
        );
    }
    Ok(())
}
