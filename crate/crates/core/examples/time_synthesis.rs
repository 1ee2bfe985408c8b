//! Time-domain scattered field by inverting an imaginary-axis sweep, compared
//! with the exact sphere solution.

use smallscat::geometry::StarShape;
use smallscat::incident::ShellPulse;
use smallscat::sphere_oracle::{sphere_scattered_time, SphereScenario};
use smallscat::synthesis::{frequency_sweep, inverse_transform, time_grid, Scenario, SweepOptions};

fn main() -> smallscat::Result<()> {
    let eps = 0.1;
    let pulse = ShellPulse::default();
    let scenario = Scenario::new(StarShape::unit_sphere(), eps, pulse.clone(), (10, 20));
    let table = frequency_sweep(&scenario, &[[2.5, 0.0, 0.0]], &SweepOptions::default())?;
    let times = time_grid(10.0, 41);
    let series = inverse_transform(&table, &times);
    let oracle = SphereScenario::new(eps, pulse)?;
    println!("{:>6} {:>14} {:>14}", "t", "synthesised", "exact");
    for (i, &t) in times.iter().enumerate() {
        println!(
            "{t:>6.2} {:>14.6e} {:>14.6e}",
            series.value(i, 0),
            sphere_scattered_time(&oracle, t, 2.5)
        );
    }
    Ok(())
}
