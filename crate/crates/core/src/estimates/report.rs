use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::registry::{shape, InequalityCheck};

pub const REPORT_CSV: &str = "report.csv";
pub const REPORT_TXT: &str = "report.txt";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| format!("{v:.16e}"))
}

/// Write `report.csv` and `report.txt` into `dir`.
pub fn write_report(dir: &Path, checks: &[InequalityCheck]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let csv_path = dir.join(REPORT_CSV);
    let csv_err = |e: csv::Error| Error::Csv {
        path: csv_path.clone(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(&csv_path).map_err(csv_err)?;
    w.write_record([
        "theorem_id",
        "fitted_c",
        "fitted_c_prime",
        "train_max_ratio",
        "holdout_max_ratio",
        "pass",
    ])
    .map_err(csv_err)?;
    for c in checks {
        w.write_record([
            c.id.clone(),
            format!("{:.16e}", c.fitted.c),
            opt(c.fitted.c_prime),
            format!("{:.16e}", c.train_max_ratio),
            format!("{:.16e}", c.holdout_max_ratio),
            c.passed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    let txt_path = dir.join(REPORT_TXT);
    fs::write(&txt_path, render_text(checks)).map_err(|e| Error::io(&txt_path, e))
}

/// Human-readable summary of the checks.
pub fn render_text(checks: &[InequalityCheck]) -> String {
    let mut s = String::new();
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(s, "fitted-constant checks: {passed}/{} passed\n", checks.len());
    for c in checks {
        let summary = shape(&c.id).map(|s| s.summary).unwrap_or("");
        let _ = writeln!(s, "[{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.id);
        let _ = writeln!(s, "  {summary}");
        let _ = write!(s, "  C = {:.6e}", c.fitted.c);
        if let Some(cp) = c.fitted.c_prime {
            let _ = write!(s, ", C' = {cp:.6e}");
        }
        let _ = writeln!(s);
        if let Some(terms) = &c.term_constants {
            let list: Vec<String> = terms.iter().map(|v| format!("{v:.6e}")).collect();
            let _ = writeln!(s, "  per-term constants: [{}]", list.join(", "));
        }
        let _ = writeln!(
            s,
            "  train: {} samples, max ratio {:.6}; holdout: {} samples, max ratio {:.6} (limit {})",
            c.train_samples, c.train_max_ratio, c.holdout_samples, c.holdout_max_ratio, c.holdout_factor
        );
        let _ = writeln!(s, "  probes: {}", c.probes.join("; "));
        if !c.passed {
            let _ = writeln!(s, "  holdout exceeded the limit: harness or model mismatch, not a statement about the inequality");
        }
        let _ = writeln!(s);
    }
    s
}
