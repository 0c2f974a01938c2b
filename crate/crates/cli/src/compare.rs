//! Error reports between two runs written by the experiment runner.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qwhydro_core::{error_metrics, ErrorReport, GridSpec, Spinor, SpinorField};

use crate::error::{CliError, Result};

/// Load the spinor columns of a fields CSV back into a field (physical
/// units, `scale = 1`).
pub fn read_fields_csv(path: &Path) -> Result<SpinorField> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Config(format!("{}: missing column `{name}`", path.display())))
    };
    let idx = [col("x")?, col("re_l")?, col("im_l")?, col("re_r")?, col("im_r")?];
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let mut vals = [0.0; 5];
        for (v, &i) in vals.iter_mut().zip(&idx) {
            *v = rec[i].parse().map_err(|e| {
                CliError::Config(format!("{}: line {}: {e}", path.display(), rec.position().map_or(0, |p| p.line())))
            })?;
        }
        rows.push(vals);
    }
    let grid = GridSpec::with_len(rows.len())?;
    let mut values = vec![Spinor::ZERO; grid.len()];
    for r in rows {
        let p = (r[0] / grid.eps()).round() as i64;
        values[grid.slot(p)?] = Spinor::new(Complex64::new(r[1], r[2]), Complex64::new(r[3], r[4]));
    }
    Ok(SpinorField::new(grid, values)?)
}

/// `q` against reference `c`, both fields CSV files.
pub fn compare_files(q: &Path, c: &Path) -> Result<ErrorReport> {
    let report = error_metrics(&read_fields_csv(q)?, &read_fields_csv(c)?)?;
    Ok(report
        .with_metadata("quantum", q.display().to_string())
        .with_metadata("classical", c.display().to_string()))
}

fn field_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| CliError::io(dir, e))? {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("fields_") && name.ends_with(".csv") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Compare two runs. Files are compared directly; for directories every
/// fields file present under the same name in both is compared.
pub fn compare_runs(a: &Path, b: &Path) -> Result<Vec<(String, ErrorReport)>> {
    if a.is_file() && b.is_file() {
        return Ok(vec![(a.display().to_string(), compare_files(a, b)?)]);
    }
    if !(a.is_dir() && b.is_dir()) {
        return Err(CliError::Config(format!(
            "compare needs two fields CSV files or two run directories: {} {}",
            a.display(),
            b.display()
        )));
    }
    let mut out = Vec::new();
    for fa in field_files(a)? {
        let name = fa.file_name().expect("file name").to_owned();
        let fb = b.join(&name);
        if fb.is_file() {
            out.push((name.to_string_lossy().into_owned(), compare_files(&fa, &fb)?));
        }
    }
    if out.is_empty() {
        return Err(CliError::Config(format!(
            "no fields files with matching names in {} and {}",
            a.display(),
            b.display()
        )));
    }
    Ok(out)
}
