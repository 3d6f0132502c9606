use std::fs;
use std::path::Path;

use crate::discretization::{Grid, ScalarField};
use crate::error::{Error, Result};
use crate::functionals::FunctionalSeries;

/// Result of one integration: the functional series, field snapshots and
/// a configuration echo.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// Echo of the configuration that produced the run.
    pub config: toml::Table,
    pub grid: Grid,
    pub series: FunctionalSeries,
    pub snapshots: Vec<ScalarField>,
    /// Steps completed.
    pub steps: usize,
    pub complete: bool,
    /// Error message of the failing step for incomplete records.
    pub failure: Option<String>,
}

const META: &str = "meta";
const SERIES: &str = "series.csv";
const SNAPSHOTS: &str = "snapshots";
const SNAPSHOT_TIMES: &str = "snapshot_times.csv";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn parse(path: &Path, s: &str) -> Result<f64> {
    s.trim().parse().map_err(|e| csv_err(path, format!("bad number `{s}`: {e}")))
}

impl RunRecord {
    pub fn final_state(&self) -> Option<&ScalarField> {
        self.snapshots.last()
    }

    pub fn t_end(&self) -> f64 {
        self.series.times().last().copied().unwrap_or(0.0)
    }

    fn meta_table(&self) -> toml::Table {
        let mut grid = toml::Table::new();
        grid.insert("dim".into(), (self.grid.dim() as i64).into());
        grid.insert(
            "cells".into(),
            toml::Value::Array(self.grid.cells().iter().map(|&c| (c as i64).into()).collect()),
        );
        grid.insert(
            "extent".into(),
            toml::Value::Array(self.grid.extent().iter().map(|&e| e.into()).collect()),
        );
        let mut record = toml::Table::new();
        record.insert("steps".into(), (self.steps as i64).into());
        record.insert("complete".into(), self.complete.into());
        if let Some(f) = &self.failure {
            record.insert("failure".into(), f.clone().into());
        }
        let mut meta = toml::Table::new();
        meta.insert("record".into(), record.into());
        meta.insert("grid".into(), grid.into());
        meta.insert("config".into(), self.config.clone().into());
        meta
    }

    /// Persist as `meta`, `series.csv`, `snapshot_times.csv` and
    /// `snapshots/NNNN.csv` under `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let snap_dir = dir.join(SNAPSHOTS);
        fs::create_dir_all(&snap_dir).map_err(|e| Error::io(&snap_dir, e))?;
        let meta_path = dir.join(META);
        let text = toml::to_string(&self.meta_table()).map_err(|e| Error::Config(format!("meta encoding: {e}")))?;
        fs::write(&meta_path, text).map_err(|e| Error::io(&meta_path, e))?;

        let path = dir.join(SERIES);
        let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
        let header: Vec<&str> = std::iter::once("t").chain(self.series.columns().iter().map(String::as_str)).collect();
        w.write_record(&header).map_err(|e| csv_err(&path, e))?;
        for (k, t) in self.series.times().iter().enumerate() {
            let row: Vec<String> = std::iter::once(*t).chain(self.series.row(k)).map(fmt).collect();
            w.write_record(&row).map_err(|e| csv_err(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;

        let path = dir.join(SNAPSHOT_TIMES);
        let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
        w.write_record(["index", "t"]).map_err(|e| csv_err(&path, e))?;
        for (k, s) in self.snapshots.iter().enumerate() {
            w.write_record([k.to_string(), fmt(s.t())]).map_err(|e| csv_err(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;

        let nx = self.grid.nx();
        for (k, s) in self.snapshots.iter().enumerate() {
            let path = snap_dir.join(format!("{k:04}.csv"));
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_path(&path)
                .map_err(|e| csv_err(&path, e))?;
            for line in s.values().chunks(nx) {
                w.write_record(line.iter().map(|v| fmt(*v))).map_err(|e| csv_err(&path, e))?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let meta_path = dir.join(META);
        let text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
        let meta: toml::Table = text
            .parse()
            .map_err(|e| Error::Config(format!("{}: {e}", meta_path.display())))?;
        let bad = |what: &str| Error::Config(format!("{}: missing or malformed `{what}`", meta_path.display()));
        let grid_t = meta.get("grid").and_then(|v| v.as_table()).ok_or_else(|| bad("grid"))?;
        let dim = grid_t.get("dim").and_then(|v| v.as_integer()).ok_or_else(|| bad("grid.dim"))? as usize;
        let cells: Vec<usize> = grid_t
            .get("cells")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("grid.cells"))?
            .iter()
            .map(|v| v.as_integer().map(|c| c as usize).ok_or_else(|| bad("grid.cells")))
            .collect::<Result<_>>()?;
        let extent: Vec<f64> = grid_t
            .get("extent")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("grid.extent"))?
            .iter()
            .map(|v| v.as_float().ok_or_else(|| bad("grid.extent")))
            .collect::<Result<_>>()?;
        let grid = Grid::new(dim, &cells, &extent)?;
        let record_t = meta.get("record").and_then(|v| v.as_table()).ok_or_else(|| bad("record"))?;
        let steps = record_t.get("steps").and_then(|v| v.as_integer()).ok_or_else(|| bad("record.steps"))? as usize;
        let complete = record_t
            .get("complete")
            .and_then(|v| v.as_bool())
            .ok_or_else(|| bad("record.complete"))?;
        let failure = record_t.get("failure").and_then(|v| v.as_str()).map(str::to_string);
        let config = meta.get("config").and_then(|v| v.as_table()).cloned().unwrap_or_default();

        let series = read_series(&dir.join(SERIES))?;

        let path = dir.join(SNAPSHOT_TIMES);
        let mut r = csv::Reader::from_path(&path).map_err(|e| csv_err(&path, e))?;
        let mut times = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| csv_err(&path, e))?;
            times.push(parse(&path, rec.get(1).ok_or_else(|| csv_err(&path, "missing time"))?)?);
        }
        let mut snapshots = Vec::with_capacity(times.len());
        for (k, t) in times.into_iter().enumerate() {
            let path = dir.join(SNAPSHOTS).join(format!("{k:04}.csv"));
            let mut r = csv::ReaderBuilder::new()
                .has_headers(false)
                .from_path(&path)
                .map_err(|e| csv_err(&path, e))?;
            let mut values = Vec::with_capacity(grid.len());
            for rec in r.records() {
                for v in rec.map_err(|e| csv_err(&path, e))?.iter() {
                    values.push(parse(&path, v)?);
                }
            }
            snapshots.push(ScalarField::new(grid, values, t)?);
        }
        Ok(Self {
            config,
            grid,
            series,
            snapshots,
            steps,
            complete,
            failure,
        })
    }
}

/// Read a `series.csv` file: header `t` followed by functional ids.
pub fn read_series(path: &Path) -> Result<FunctionalSeries> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.get(0) != Some("t") {
        return Err(csv_err(path, "first column must be `t`"));
    }
    let mut series = FunctionalSeries::new(header.iter().skip(1).map(str::to_string).collect());
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let values: Vec<f64> = rec.iter().map(|v| parse(path, v)).collect::<Result<_>>()?;
        series.push(values[0], &values[1..])?;
    }
    Ok(series)
}
