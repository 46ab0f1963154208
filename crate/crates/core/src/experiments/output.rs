//! CSV rendering and the per-run manifest.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::fnv1a;

/// Header line plus one line per row, columns in field order. Floats use the
/// shortest round-trip representation, so equal values always print identically.
pub fn to_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Provenance of one CLI run. Timestamps live here and nowhere in the data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: serde_json::Value,
    /// FNV-1a of the canonical JSON of `parameters`, as 16 hex digits.
    pub config_digest: String,
    pub master_seed: Option<u64>,
    pub tool_version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub wall_time_secs: f64,
    pub outputs: Vec<String>,
}

pub(crate) fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

impl RunManifest {
    pub fn begin(subcommand: &str, parameters: serde_json::Value, master_seed: Option<u64>) -> Self {
        let digest = fnv1a(parameters.to_string().as_bytes());
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters,
            config_digest: format!("{digest:016x}"),
            master_seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: unix_now(),
            finished_unix: 0.0,
            wall_time_secs: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn finish(&mut self) {
        self.finished_unix = unix_now();
        self.wall_time_secs = (self.finished_unix - self.started_unix).max(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Pair {
        a: u32,
        b: f64,
    }

    #[test]
    fn csv_layout() {
        let rows = [Pair { a: 1, b: 0.5 }, Pair { a: 2, b: 0.1 }];
        assert_eq!(to_csv(&rows).unwrap(), "a,b\n1,0.5\n2,0.1\n");
    }

    #[test]
    fn manifest_digest_is_stable() {
        let params = serde_json::json!({"n": [4, 6], "seed": 1});
        let mut a = RunManifest::begin("experiment collapse", params.clone(), Some(1));
        let b = RunManifest::begin("experiment collapse", params, Some(1));
        assert_eq!(a.config_digest, b.config_digest);
        assert_eq!(a.config_digest.len(), 16);
        a.finish();
        assert!(a.wall_time_secs >= 0.0);
    }
}
