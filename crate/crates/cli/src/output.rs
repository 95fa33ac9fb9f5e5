//! Deterministic CSV/JSON emission. Floats are serialized with 17
//! significant digits so identical runs produce byte-identical files.

use std::io::Write;
use std::path::Path;

use wfp_core::dynamics::DecayCurve;

use crate::CliError;

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<std::path::PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let mut file = std::fs::File::create(&path)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// Decay-curve CSV with the fixed schema
/// `t,metric,distance,mean_norm,cxx,cxp,cpp`.
pub fn curve_to_csv(curve: &DecayCurve) -> String {
    let mut out = String::from("t,metric,distance,mean_norm,cxx,cxp,cpp\n");
    for s in &curve.samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_f64(s.t),
            curve.metric.label(),
            fmt_f64(s.distance),
            fmt_f64(s.mean_norm),
            fmt_f64(s.cxx),
            fmt_f64(s.cxp),
            fmt_f64(s.cpp),
        ));
    }
    out
}

/// A simple table with a header row, rendered as CSV or as a JSON array of
/// objects depending on the configured format.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let typed = |cell: &str| -> serde_json::Value {
            if cell.is_empty() {
                return serde_json::Value::Null;
            }
            match cell {
                "true" => return serde_json::Value::Bool(true),
                "false" => return serde_json::Value::Bool(false),
                _ => {}
            }
            // numeric cells were written via fmt_f64 and round-trip exactly
            if cell.contains('e') && !cell.contains(' ') {
                if let Ok(x) = cell.parse::<f64>() {
                    if let Some(n) = serde_json::Number::from_f64(x) {
                        return serde_json::Value::Number(n);
                    }
                }
            }
            serde_json::Value::String(cell.to_string())
        };
        let objects: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(col, cell)| (col.to_string(), typed(cell)))
                    .collect();
                serde_json::Value::Object(map)
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&objects).expect("table serialises");
        text.push('\n');
        text
    }
}

pub fn matrix_to_json(m: &nalgebra::DMatrix<f64>) -> serde_json::Value {
    let rows: Vec<Vec<f64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect();
    serde_json::json!(rows)
}
