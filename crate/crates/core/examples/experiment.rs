//! Drive the experiment runner from a configuration string.
//!
//! Usage: `experiment [COMMAND] [OUT_DIR]`, default `capacitance` into `./out`.

use smallscat::cli::{run, Command, ExperimentConfig};

const CONFIG: &str = "
# bumpy obstacle, coarse grids
shape = harmonics
shape.base = 0.75
shape.coeffs = (1,0,0.15), (2,0,0.1), (2,1,0.06), (3,-2,0.05)
bem.n_theta = 12
bem.n_phi = 24
capacitance.levels = 6, 8, 10, 12
";

fn main() -> smallscat::Result<()> {
    let mut args = std::env::args().skip(1);
    let command: Command = args.next().as_deref().unwrap_or("capacitance").parse()?;
    let mut config = ExperimentConfig::parse(CONFIG)?;
    if let Some(dir) = args.next() {
        config.output_dir = dir.into();
    }
    let manifest = run(command, config)?;
    println!("files: {}", manifest.files.join(", "));
    println!("passed: {}", manifest.all_passed());
    Ok(())
}
