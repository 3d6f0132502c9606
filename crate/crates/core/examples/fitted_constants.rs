//! Fit the constants of a-priori inequality shapes on a family of runs with
//! time-periodic boundary data and check the transfer to held-out runs.

use forchlab::config::{apply_override, RunConfig};
use forchlab::estimates::{fit_theorem_constant, render_text, DEFAULT_SHAPES};

const CONFIG: &str = include_str!("../configs/periodic_1d.toml");

fn main() -> forchlab::Result<()> {
    let base: toml::Table = CONFIG.parse().expect("valid TOML");
    let mut configs = Vec::new();
    let mut records = Vec::new();
    for seed in 1..=9 {
        let mut t = base.clone();
        apply_override(&mut t, "initial.seed", &seed.to_string())?;
        apply_override(&mut t, "grid.cells", "[32]")?;
        let config = RunConfig::from_table(t)?;
        records.push(config.execute()?);
        configs.push(config);
    }
    let bundle = configs[0].bundle()?;
    let settings = configs[0].verify.probe_settings();
    let series: Vec<_> = records.iter().map(|r| &r.series).collect();
    let (train, holdout) = series.split_at(6);
    let checks = DEFAULT_SHAPES
        .iter()
        .map(|id| fit_theorem_constant(id, train, holdout, &bundle, &settings))
        .collect::<forchlab::Result<Vec<_>>>()?;
    print!("{}", render_text(&checks));
    Ok(())
}
