//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration or I/O error, 3 numerical failure,
//! 4 verification precondition failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{apply_override, RunConfig};
use crate::error::{Error, Result};
use crate::estimates::{
    fit_theorem_constant, render_text, verify_contraction, verify_run_properties, write_report, InequalityCheck,
};
use crate::solver::{run_manufactured, RunRecord};

/// Environment variable overriding the default output root.
pub const OUTPUT_ENV: &str = "FORCHLAB_OUTPUT";
pub const DEFAULT_OUTPUT: &str = "forchlab-out";

#[derive(Debug, Parser)]
#[command(name = "forchlab", version, about = "Generalized Forchheimer flow simulator and estimate-verification lab")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Output root directory.
    #[arg(long, global = true, env = OUTPUT_ENV, default_value = DEFAULT_OUTPUT)]
    pub output: PathBuf,
    /// Worker threads for `sweep`.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Seed overriding `[initial].seed` and `[verify].seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation into `<output>/<config stem>`.
    Run { config: PathBuf },
    /// Manufactured-solution convergence study from the `[mms]` section.
    Mms { config: PathBuf },
    /// Run every point of a parameter grid into `<output>/<config stem>/`.
    Sweep {
        config: PathBuf,
        /// `dotted.key=v1,v2,...`; repeat for a product grid.
        #[arg(long = "set", required = true)]
        set: Vec<String>,
    },
    /// Fit the configured inequality shapes on run directories and write the report.
    Verify {
        config: PathBuf,
        #[arg(required = true)]
        runs: Vec<PathBuf>,
    },
    /// Plot-ready CSV of the functional series and pairwise gap curves.
    Report {
        #[arg(required = true)]
        runs: Vec<PathBuf>,
    },
}

/// Parse `args`, run the command and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Run { config } => cmd_run(config, g),
        Command::Mms { config } => cmd_mms(config),
        Command::Sweep { config, set } => cmd_sweep(config, set, g),
        Command::Verify { config, runs } => cmd_verify(config, runs, g),
        Command::Report { runs } => cmd_report(runs, g),
    }
}

fn load_table(path: &Path) -> Result<toml::Table> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.parse().map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn seeded(mut table: toml::Table, seed: Option<u64>) -> Result<toml::Table> {
    if let Some(seed) = seed {
        let has = |section: &str, key: &str| {
            table
                .get(section)
                .and_then(|s| s.as_table())
                .is_some_and(|s| s.contains_key(key))
        };
        if has("initial", "random") {
            apply_override(&mut table, "initial.seed", &seed.to_string())?;
        }
        if table.contains_key("verify") {
            apply_override(&mut table, "verify.seed", &seed.to_string())?;
        }
    }
    Ok(table)
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned())
}

/// Execute a configuration and persist the record; an incomplete record is
/// written before the numerical failure is returned.
fn run_into(config: &RunConfig, dir: &Path) -> Result<RunRecord> {
    let record = config.execute()?;
    record.write(dir)?;
    if let Some(msg) = &record.failure {
        return Err(Error::Numerical(format!(
            "run stopped after {} steps at t = {}: {msg}",
            record.steps,
            record.t_end()
        )));
    }
    Ok(record)
}

pub fn cmd_run(path: &Path, g: &GlobalArgs) -> Result<()> {
    let config = RunConfig::from_table(seeded(load_table(path)?, g.seed)?)?;
    let dir = g.output.join(stem(path));
    let record = run_into(&config, &dir)?;
    println!("{}: {} steps to t = {}", dir.display(), record.steps, record.t_end());
    Ok(())
}

pub fn cmd_mms(path: &Path) -> Result<()> {
    let config = RunConfig::load(path)?;
    let (study, exact) = config.mms_study()?;
    let report = run_manufactured(&study, &config.law()?, &exact)?;
    print!("{}", report.table());
    Ok(())
}

/// One sweep point: its directory name and overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub name: String,
    pub overrides: Vec<(String, String)>,
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._-=".contains(c) { c } else { '_' })
        .collect()
}

/// Enumerate the product grid of `--set` specs, last key varying fastest.
pub fn sweep_points(specs: &[String]) -> Result<Vec<SweepPoint>> {
    let mut axes = Vec::new();
    for spec in specs {
        let (key, values) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("sweep spec `{spec}` is not key=v1,v2,...")))?;
        let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
        if key.is_empty() || values.iter().any(|v| v.is_empty()) {
            return Err(Error::Config(format!("sweep spec `{spec}` has an empty key or value")));
        }
        axes.push((key.trim().to_string(), values));
    }
    let mut points: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for (key, values) in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push((key.clone(), v.clone()));
                    q
                })
            })
            .collect();
    }
    Ok(points
        .into_iter()
        .enumerate()
        .map(|(i, overrides)| {
            let label: Vec<String> = overrides.iter().map(|(k, v)| sanitize(&format!("{k}={v}"))).collect();
            SweepPoint {
                name: format!("{i:03}-{}", label.join("+")),
                overrides,
            }
        })
        .collect())
}

pub fn cmd_sweep(path: &Path, specs: &[String], g: &GlobalArgs) -> Result<()> {
    let base = seeded(load_table(path)?, g.seed)?;
    let points = sweep_points(specs)?;
    let configs = points
        .iter()
        .map(|p| {
            let mut t = base.clone();
            for (k, v) in &p.overrides {
                apply_override(&mut t, k, v)?;
            }
            RunConfig::from_table(t)
        })
        .collect::<Result<Vec<_>>>()?;
    let root = g.output.join(stem(path));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let results: Vec<Result<RunRecord>> = pool.install(|| {
        points
            .par_iter()
            .zip(&configs)
            .map(|(p, c)| run_into(c, &root.join(&p.name)))
            .collect()
    });
    let mut first_err = None;
    for (p, r) in points.iter().zip(results) {
        match r {
            Ok(rec) => println!("{}: {} steps to t = {}", p.name, rec.steps, rec.t_end()),
            Err(e) => {
                eprintln!("{}: {e}", p.name);
                first_err.get_or_insert(e);
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}

fn run_name(dir: &Path) -> String {
    dir.file_name().map_or_else(|| dir.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn read_complete(dirs: &[PathBuf]) -> Result<Vec<RunRecord>> {
    dirs.iter()
        .map(|d| {
            let r = RunRecord::read(d)?;
            if !r.complete {
                return Err(Error::Precondition(format!("run {} is incomplete", d.display())));
            }
            Ok(r)
        })
        .collect()
}

/// Split run indices into training and holdout families.
pub fn split_runs(n: usize, train: Option<usize>, seed: Option<u64>) -> Result<(Vec<usize>, Vec<usize>)> {
    let train = train.unwrap_or(2 * n / 3);
    if train == 0 || train >= n {
        return Err(Error::Precondition(format!(
            "need at least one training and one holdout run ({n} runs, {train} for training)"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    if let Some(seed) = seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let holdout = order.split_off(train);
    Ok((order, holdout))
}

pub fn cmd_verify(path: &Path, dirs: &[PathBuf], g: &GlobalArgs) -> Result<()> {
    let config = RunConfig::from_table(seeded(load_table(path)?, g.seed)?)?;
    let bundle = config.bundle()?;
    let records = read_complete(dirs)?;
    let v = &config.verify;
    let (train, holdout) = split_runs(records.len(), v.train, v.seed)?;
    let family = |idx: &[usize]| idx.iter().map(|&i| &records[i].series).collect::<Vec<_>>();
    let settings = v.probe_settings();
    let checks = v
        .theorems
        .iter()
        .map(|id| fit_theorem_constant(id, &family(&train), &family(&holdout), &bundle, &settings))
        .collect::<Result<Vec<InequalityCheck>>>()?;
    write_report(&g.output, &checks)?;

    let props = g.output.join("properties.csv");
    let mut w = csv::Writer::from_path(&props).map_err(|e| Error::Csv {
        path: props.clone(),
        message: e.to_string(),
    })?;
    let mut rows = vec![vec![
        "run".to_string(),
        "min_margin".into(),
        "margin_ok".into(),
        "energy_monotone".into(),
        "h_integral_c".into(),
        "energy_c".into(),
        "partial".into(),
    ]];
    for (d, r) in dirs.iter().zip(&records) {
        let p = verify_run_properties(r, &bundle, 10.0 * config.solver.picard_tolerance)?;
        let c = |f: &Option<crate::estimates::IdentityFit>| f.as_ref().map_or(String::new(), |f| format!("{:.16e}", f.fitted.c));
        rows.push(vec![
            run_name(d),
            format!("{:.16e}", p.min_margin),
            p.margin_ok.to_string(),
            p.energy_monotone.map_or(String::new(), |b| b.to_string()),
            c(&p.h_integral),
            c(&p.energy),
            p.partial.to_string(),
        ]);
    }
    for row in rows {
        w.write_record(&row).map_err(|e| Error::Csv {
            path: props.clone(),
            message: e.to_string(),
        })?;
    }
    w.flush().map_err(|e| Error::io(&props, e))?;
    print!("{}", render_text(&checks));
    Ok(())
}

pub fn cmd_report(dirs: &[PathBuf], g: &GlobalArgs) -> Result<()> {
    let records = dirs.iter().map(|d| RunRecord::read(d)).collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(&g.output).map_err(|e| Error::io(&g.output, e))?;
    let csv_err = |p: &Path, e: csv::Error| Error::Csv {
        path: p.to_path_buf(),
        message: e.to_string(),
    };

    let path = g.output.join("functionals.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
    w.write_record(["run", "t", "functional", "value"]).map_err(|e| csv_err(&path, e))?;
    for (d, r) in dirs.iter().zip(&records) {
        let name = run_name(d);
        for (k, t) in r.series.times().iter().enumerate() {
            for (id, v) in r.series.columns().iter().zip(r.series.row(k)) {
                w.write_record([name.as_str(), &format!("{t:.16e}"), id, &format!("{v:.16e}")])
                    .map_err(|e| csv_err(&path, e))?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = g.output.join("gaps.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
    w.write_record(["run_a", "run_b", "t", "gap"]).map_err(|e| csv_err(&path, e))?;
    let mut pairs = 0;
    for i in 0..records.len() {
        for j in i + 1..records.len() {
            let Ok(c) = verify_contraction(&records[i], &records[j], 0.0) else {
                continue;
            };
            pairs += 1;
            let (a, b) = (run_name(&dirs[i]), run_name(&dirs[j]));
            for (t, gap) in c.times.iter().zip(&c.gap) {
                w.write_record([a.as_str(), &b, &format!("{t:.16e}"), &format!("{gap:.16e}")])
                    .map_err(|e| csv_err(&path, e))?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    println!(
        "wrote {} and {} ({pairs} comparable pairs)",
        g.output.join("functionals.csv").display(),
        path.display()
    );
    Ok(())
}
