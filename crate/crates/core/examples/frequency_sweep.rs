//! Parallel frequency sweep for a bumpy obstacle, written as CSV.
//!
//! Usage: `frequency_sweep [OUT.csv] [WORKERS]`.

use smallscat::geometry::StarShape;
use smallscat::incident::ShellPulse;
use smallscat::synthesis::{frequency_sweep, Scenario, SweepOptions};

fn main() -> smallscat::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "sweep_bumpy.csv".into());
    let workers = args.next().and_then(|w| w.parse().ok()).unwrap_or(2);
    let scenario = Scenario::new(StarShape::bumpy(), 0.1, ShellPulse::default(), (12, 24));
    let points = [[2.5, 0.0, 0.0], [0.0, 2.5, 0.0], [0.0, 0.0, 2.5], [-2.5, 0.0, 0.0]];
    let options = SweepOptions {
        n_omega: 160,
        workers,
        ..SweepOptions::default()
    };
    let table = frequency_sweep(&scenario, &points, &options)?;
    let worst = table.conditions().iter().cloned().fold(0.0, f64::max);
    println!("scenario {}", table.scenario_hash());
    println!(
        "{} frequencies, largest condition estimate {worst:.2e}",
        table.omegas().len()
    );
    for (k, p) in points.iter().enumerate() {
        println!("u(0, {p:?}) = {:.6e}", table.value(0, k).re);
    }
    table.write_csv(std::fs::File::create(&out)?)?;
    println!("wrote {out}");
    Ok(())
}
