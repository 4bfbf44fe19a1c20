//! Drive a command from a TOML configuration without the binary.

use ballfield::cli::{run_command, Command};
use ballfield::config::ExperimentConfig;
use std::path::Path;

const CONFIG: &str = r#"
seed = 7

[kernel]
kind = "free_field"
mass = 1.0

[balls]
source = "random"
dim = 2
count = 6
lo = [0.5, -1.0]
hi = [2.0, 1.0]
radius_min = 0.1
radius_max = 0.4
seed = 3
"#;

fn main() -> ballfield::Result<()> {
    let mut cfg = ExperimentConfig::from_toml(CONFIG)?;
    let out = std::env::temp_dir().join("ballfield-config-run");
    cfg.output_dir = Some(out.clone());
    for cmd in [Command::Kernel, Command::Rp, Command::Invariance] {
        cfg.command = Some(cmd.name().to_string());
        let outcome = run_command(cmd, &cfg, Path::new("."))?;
        println!("{}: pass={} {}", cmd.name(), outcome.pass, outcome.summary);
    }
    println!("outputs in {} (config hash {})", out.display(), cfg.hash());
    Ok(())
}
