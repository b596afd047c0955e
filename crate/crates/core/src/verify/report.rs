//! Deficit reports and their JSON-lines and CSV serializations.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::params::ParamSet;

/// Both sides of one inequality on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeficitReport {
    pub id: String,
    pub seed: u64,
    pub generator: String,
    pub params: ParamSet,
    pub instance: Value,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`.
    pub deficit: f64,
    pub slack: f64,
    /// `deficit >= 1 - slack`.
    pub pass: bool,
    /// Two-sided band expected at an equality case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<(f64, f64)>,
    pub band_ok: bool,
    pub details: BTreeMap<String, Value>,
    pub resolutions: BTreeMap<String, usize>,
    pub time_ms: u64,
}

impl DeficitReport {
    pub fn ok(&self) -> bool {
        self.pass && self.band_ok
    }

    pub fn detail_f64(&self, key: &str) -> Option<f64> {
        self.details.get(key).and_then(Value::as_f64)
    }
}

pub const CSV_HEADER: &str = "id,seed,n,p,r,lambda,lhs,rhs,deficit,pass,time_ms";

pub fn csv_row(r: &DeficitReport) -> String {
    format!(
        "{},{},{},{},{},{},{:.12e},{:.12e},{:.12e},{},{}",
        r.id, r.seed, r.params.n, r.params.p, r.params.r, r.params.lambda, r.lhs, r.rhs, r.deficit, r.pass, r.time_ms
    )
}

pub fn write_csv(out: &mut impl Write, reports: &[DeficitReport]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in reports {
        writeln!(out, "{}", csv_row(r))?;
    }
    Ok(())
}

pub fn write_jsonl(out: &mut impl Write, reports: &[DeficitReport]) -> Result<()> {
    for r in reports {
        serde_json::to_writer(&mut *out, r)?;
        writeln!(out)?;
    }
    Ok(())
}
