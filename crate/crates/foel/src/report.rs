//! Report payloads and their JSON and CSV renderings.

use foel_core::spectra::FoelViolation;
use foel_core::{ComparisonVerdict, EnergyEntry, EnergyTable, FoelReport, SpinChainSpec};
use serde::{Deserialize, Serialize};

use crate::chain_file::ChainSpecFile;

/// Envelope of every command's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// Hex fingerprint of the chain the command ran on, when there is one.
    pub chain_fingerprint: Option<String>,
    pub timings: Timings,
    pub tool_version: String,
    pub results: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, chain: Option<&SpinChainSpec>, results: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            chain_fingerprint: chain.map(fingerprint_hex),
            timings: Timings::default(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            results,
        }
    }
}

pub fn fingerprint_hex(chain: &SpinChainSpec) -> String {
    format!("{:016x}", chain.fingerprint())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct TableRow {
    pub S_doubled: i64,
    pub dim: usize,
    pub energy: f64,
    pub method: String,
}

impl From<&EnergyEntry> for TableRow {
    fn from(e: &EnergyEntry) -> Self {
        Self { S_doubled: e.spin.doubled(), dim: e.dimension, energy: e.energy, method: e.method.as_str().to_string() }
    }
}

pub fn table_rows(table: &EnergyTable) -> Vec<TableRow> {
    table.entries.iter().map(TableRow::from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub lower_doubled: i64,
    pub higher_doubled: i64,
    pub e_lower: f64,
    pub e_higher: f64,
}

impl From<&FoelViolation> for ViolationJson {
    fn from(v: &FoelViolation) -> Self {
        Self {
            lower_doubled: v.lower.doubled(),
            higher_doubled: v.higher.doubled(),
            e_lower: v.e_lower,
            e_higher: v.e_higher,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoelJson {
    pub chain: ChainSpecFile,
    pub table: Vec<TableRow>,
    pub status: String,
    pub violations: Vec<ViolationJson>,
}

impl FoelJson {
    pub fn new(chain: &SpinChainSpec, report: &FoelReport) -> Self {
        Self {
            chain: ChainSpecFile::from_chain(chain),
            table: table_rows(&report.table),
            status: report.status.as_str().to_string(),
            violations: report.first_violation.iter().map(ViolationJson::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub location: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: String,
    pub e_small: Option<f64>,
    pub e_large: Option<f64>,
    pub witnesses: Vec<WitnessJson>,
}

impl From<&ComparisonVerdict> for VerdictJson {
    fn from(v: &ComparisonVerdict) -> Self {
        Self {
            status: v.status.as_str().to_string(),
            e_small: v.e_small,
            e_large: v.e_large,
            witnesses: v
                .witnesses
                .iter()
                .map(|w| WitnessJson { location: w.location.to_string(), value: w.value })
                .collect(),
        }
    }
}

/// Energy rounded to 12 significant digits for CSV, with round-off around
/// zero printed as `0`.
pub fn csv_energy(e: f64) -> String {
    if e.abs() < 1e-12 {
        return "0".into();
    }
    let rounded: f64 = format!("{e:.11e}").parse().unwrap_or(e);
    format!("{rounded}")
}

/// CSV with columns `S_doubled,dimension,energy,method`.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["S_doubled", "dimension", "energy", "method"]);
    for r in rows {
        let _ = w.write_record([r.S_doubled.to_string(), r.dim.to_string(), csv_energy(r.energy), r.method.clone()]);
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}
