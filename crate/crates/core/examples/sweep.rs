//! Enumerate a sweep grid and run every point through the command-line
//! front end into a temporary directory.

use forchlab::cli::{main_with_args, sweep_points};

fn main() {
    let specs = vec!["initial.seed=1,2,3".to_string(), "solver.dt=2e-3,1e-3".to_string()];
    for p in sweep_points(&specs).expect("valid sweep specs") {
        println!("{}", p.name);
    }
    let out = std::env::temp_dir().join("forchlab-sweep-example");
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/minimal.toml");
    let code = main_with_args([
        "forchlab",
        "--output",
        out.to_str().unwrap(),
        "sweep",
        config,
        "--set",
        "initial.seed=1,2,3",
    ]);
    println!("sweep exit code {code}; runs in {}", out.join("minimal").display());
}
