//! CSV and JSON emission.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::HarnessError;

/// A CSV record type with a fixed column order.
pub trait CsvRow: Serialize {
    const HEADER: &'static [&'static str];
}

/// One `(p, Γ, ε, χ)` instance of a character-sum sweep.
///
/// `pv_bound = constant_C·√p·(ln p)^d`; the Burgess bounds use the first
/// entry of `k_values`; each `ratio_*` is `s_abs` over the matching bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub experiment_id: String,
    pub p: u32,
    pub d: usize,
    pub gamma: String,
    pub epsilon: String,
    pub bohr_size: usize,
    pub regular: bool,
    pub chi_index: u32,
    pub s_abs: f64,
    pub pv_bound: f64,
    pub burgess_bound_large: f64,
    pub burgess_bound_small: f64,
    pub ratio_pv: f64,
    pub ratio_burgess_large: f64,
    pub ratio_burgess_small: f64,
    pub runtime_ms: u64,
}

impl CsvRow for ReportRow {
    const HEADER: &'static [&'static str] = &[
        "experiment_id",
        "p",
        "d",
        "gamma",
        "epsilon",
        "bohr_size",
        "regular",
        "chi_index",
        "s_abs",
        "pv_bound",
        "burgess_bound_large",
        "burgess_bound_small",
        "ratio_pv",
        "ratio_burgess_large",
        "ratio_burgess_small",
        "runtime_ms",
    ];
}

/// Header plus rows as RFC 4180 CSV bytes.
pub fn csv_bytes<R: CsvRow>(rows: &[R]) -> Result<Vec<u8>, HarnessError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let io = |e: csv::Error| HarnessError::Io(e.to_string());
    w.write_record(R::HEADER).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))
}

/// Writes `bytes` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io(e.to_string());
    match path {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).map_err(io)?;
            out.flush().map_err(io)
        }
    }
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, HarnessError> {
    let mut bytes =
        serde_json::to_vec_pretty(value).map_err(|e| HarnessError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// `run.csv` → `run.summary.json`, next to the CSV.
pub fn summary_path(csv_path: &Path) -> std::path::PathBuf {
    csv_path.with_extension("summary.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_output_keeps_header() {
        let bytes = csv_bytes::<ReportRow>(&[]).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text, ReportRow::HEADER.join(",") + "\r\n");
    }

    #[test]
    fn row_columns_follow_header() {
        let row = ReportRow {
            experiment_id: "t".into(),
            p: 7,
            d: 1,
            gamma: "1".into(),
            epsilon: "1/7".into(),
            bohr_size: 3,
            regular: true,
            chi_index: 1,
            s_abs: 1.5,
            pv_bound: 2.0,
            burgess_bound_large: 3.0,
            burgess_bound_small: 4.0,
            ratio_pv: 0.75,
            ratio_burgess_large: 0.5,
            ratio_burgess_small: 0.375,
            runtime_ms: 0,
        };
        let text = String::from_utf8(csv_bytes(&[row]).unwrap()).unwrap();
        let line = text.lines().nth(1).unwrap();
        assert_eq!(
            line,
            "t,7,1,1,1/7,3,true,1,1.5,2.0,3.0,4.0,0.75,0.5,0.375,0"
        );
        assert_eq!(
            summary_path(Path::new("out/run.csv")),
            Path::new("out/run.summary.json")
        );
    }
}
