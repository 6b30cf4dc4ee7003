use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tensor_spectra::SpectralSummary;

use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;

/// One CSV row: a moment order at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub p: usize,
    pub mean: f64,
    pub var: Option<f64>,
    pub stderr: Option<f64>,
    pub theory: Option<f64>,
    pub gap: Option<f64>,
}

pub fn rows_from_summary(s: &SpectralSummary) -> Vec<SummaryRow> {
    s.moments
        .iter()
        .map(|st| SummaryRow {
            n: s.sizes.n,
            k: s.sizes.k,
            m: s.sizes.m,
            p: st.p,
            mean: st.mean,
            var: st.variance,
            stderr: st.stderr,
            theory: st.theory,
            gap: st.gap,
        })
        .collect()
}

pub fn write_csv(path: &Path, manifest: &RunManifest, rows: &[SummaryRow]) -> CliResult<()> {
    let mut file = File::create(path).map_err(|e| CliError::io(path, e))?;
    for line in manifest.comment_lines() {
        writeln!(file, "{line}").map_err(|e| CliError::io(path, e))?;
    }
    let mut w = csv::Writer::from_writer(file);
    for r in rows {
        w.serialize(r).map_err(|e| CliError::parse(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_csv(path: &Path) -> CliResult<Vec<SummaryRow>> {
    let mut rdr =
        csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path).map_err(|e| CliError::parse(path, e))?;
    rdr.deserialize().map(|r| r.map_err(|e| CliError::parse(path, e))).collect()
}

/// CSV files directly inside `input`, or `input` itself if it is a file.
pub fn csv_inputs(input: &Path) -> CliResult<Vec<PathBuf>> {
    if input.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    let entries = std::fs::read_dir(input).map_err(|e| CliError::io(input, e))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(input, e))?.path();
        if path.extension().is_some_and(|x| x == "csv") && path.is_file() {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into())
}

pub fn render(rows: &[SummaryRow]) -> String {
    let mut out = format!(
        "{:>4} {:>3} {:>8} {:>3} {:>14} {:>12} {:>12} {:>12} {:>12}\n",
        "n", "k", "m", "p", "mean", "var", "stderr", "theory", "gap"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>4} {:>3} {:>8} {:>3} {:>14.6} {:>12} {:>12} {:>12} {:>12}\n",
            r.n,
            r.k,
            r.m,
            r.p,
            r.mean,
            cell(r.var),
            cell(r.stderr),
            cell(r.theory),
            cell(r.gap)
        ));
    }
    out
}
