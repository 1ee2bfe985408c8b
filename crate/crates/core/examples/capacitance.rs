//! Capacitance of the unit sphere and of a bumpy body under grid refinement.

use std::f64::consts::PI;

use smallscat::bem::capacitance;
use smallscat::geometry::StarShape;

fn main() -> smallscat::Result<()> {
    println!(
        "{:>8} {:>18} {:>12} {:>18}",
        "grid", "sphere c1", "rel. error", "bumpy c1"
    );
    for n in [8, 12, 16, 20, 24] {
        let sphere = capacitance(&StarShape::unit_sphere(), n, 2 * n)?;
        let bumpy = capacitance(&StarShape::bumpy(), n, 2 * n)?;
        let err = (sphere.c1 - 4.0 * PI).abs() / (4.0 * PI);
        println!(
            "{:>8} {:>18.12} {:>12.2e} {:>18.12}",
            format!("{n}x{}", 2 * n),
            sphere.c1,
            err,
            bumpy.c1
        );
    }
    Ok(())
}
