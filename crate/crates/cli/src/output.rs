//! Deterministic CSV emission and JSON manifests.

use serde_json::{json, Value};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::scenario::Scenario;
use crate::CliError;

/// Schema version written into every manifest.
pub const MANIFEST_VERSION: u32 = 1;

/// Fixed scientific formatting with 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// One CSV table built in memory and written in row order.
#[derive(Clone, Debug)]
pub struct Csv {
    columns: usize,
    text: String,
}

impl Csv {
    /// Table with the given header.
    pub fn new(header: &[&str]) -> Self {
        Csv { columns: header.len(), text: format!("{}\n", header.join(",")) }
    }

    /// Append a row of preformatted fields.
    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "CSV row width must match the header");
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    /// Full CSV text.
    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Collected outputs of one subcommand run.
#[derive(Debug)]
pub struct RunOutput {
    /// Subcommand name; also the file stem of the first table.
    pub subcommand: String,
    /// (file stem, table) pairs.
    pub tables: Vec<(String, Csv)>,
    /// Photon cutoff reached and worst tail mass.
    pub truncation: Option<(usize, f64)>,
    /// Named residuals of normalization and consistency checks.
    pub residuals: Value,
    /// Subcommand-specific results.
    pub results: Value,
}

impl RunOutput {
    /// Empty output for `subcommand`.
    pub fn new(subcommand: &str) -> Self {
        RunOutput { subcommand: subcommand.to_string(), tables: Vec::new(), truncation: None, residuals: json!({}), results: json!({}) }
    }
}

/// Write every table as `<stem>.csv` with a `<stem>.manifest.json` beside
/// it; returns the CSV paths.
pub fn write_run(dir: &Path, sc: &Scenario, out: &RunOutput, wall_time_s: f64) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    let files: Vec<String> = out.tables.iter().map(|(stem, _)| format!("{stem}.csv")).collect();
    let manifest = json!({
        "manifest_version": MANIFEST_VERSION,
        "tool": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "subcommand": out.subcommand,
        "scenario": sc,
        "truncation": out.truncation.map(|(n, tail)| json!({
            "requested_n_max": sc.truncation.n_max,
            "tail_tol": sc.truncation.tail_tol,
            "adaptive": sc.truncation.adaptive,
            "achieved_n_max": n,
            "tail_mass": tail,
        })),
        "residuals": out.residuals,
        "results": out.results,
        "files": files,
        "wall_time_s": wall_time_s,
    });
    let manifest_text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    let mut paths = Vec::new();
    for (stem, table) in &out.tables {
        let csv = dir.join(format!("{stem}.csv"));
        let man = dir.join(format!("{stem}.manifest.json"));
        fs::write(&csv, table.text()).map_err(|e| CliError::Config(format!("cannot write {}: {e}", csv.display())))?;
        fs::write(&man, &manifest_text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", man.display())))?;
        paths.push(csv);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_is_fixed_width_and_round_trips() {
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(-0.1), "-1.0000000000000001e-1");
        for x in [0.1, 1.0 / 3.0, 6.284030e6, -2.5e-300, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["a", "b"]);
        c.row(&["1".into(), num(0.5)]);
        assert_eq!(c.text(), "a,b\n1,5.0000000000000000e-1\n");
    }
}
