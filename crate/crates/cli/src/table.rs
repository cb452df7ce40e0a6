//! CSV tables with a provenance comment line.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

/// Rows of numbers under named columns, plus `key=value` summary lines.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub summary: Vec<(String, f64)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// Comment line, header row, data rows, then summary comment lines.
    /// Numbers use the shortest representation that round-trips.
    pub fn render(&self, seed: Option<u64>, config: &impl Serialize) -> CliResult<String> {
        let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        let mut out = format!(
            "# witent {} seed={} config={}\n",
            env!("CARGO_PKG_VERSION"),
            seed,
            config_hash(config)?
        );
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k}={v:?}\n"));
        }
        Ok(out)
    }
}

/// SHA-256 of the config's JSON form, hex encoded.
pub fn config_hash(config: &impl Serialize) -> CliResult<String> {
    let bytes = serde_json::to_vec(config)?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}
