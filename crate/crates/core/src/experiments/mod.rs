//! Reproducible experiments and the verification suite.
//!
//! Every experiment is a pure function of its [`ExperimentConfig`]: rows are
//! computed in parallel but assembled in `(n, seed)` order, and the only
//! run-dependent fields (`timestamp`, `wall_time_ms`) are excluded from
//! [`canonical_hash`](crate::io::canonical_hash).

mod config;
mod dichotomic;
mod ppt;
mod scaling;
pub mod verify;

pub use config::*;
pub use dichotomic::*;
pub use ppt::*;
pub use scaling::*;

use serde::Serialize;

use crate::error::{Error, Result};

/// Median; the mean of the two central values for even length.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[k] } else { 0.5 * (v[k - 1] + v[k]) })
}

/// Seconds since the Unix epoch, for the `timestamp` field.
pub fn timestamp() -> String {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("{}", now.as_secs())
}

/// CSV with a mandatory header row.
pub fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Validation(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Validation(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Row that could not be computed, e.g. because of the search guard.
#[derive(Debug, Clone, Serialize)]
pub struct SkippedRow {
    pub n: usize,
    pub seed: u64,
    pub reason: String,
}
