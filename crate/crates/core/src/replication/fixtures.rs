//! Verbatim transcription of the published validation tables, guarded by a
//! SHA-256 checksum so an edited fixture is refused rather than silently used.

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const EMBEDDED_FIXTURES: &str = include_str!("../../fixtures/published_tables.json");

pub const FIXTURE_SHA256: &str = "3ebd8a7383cf5ba9610047b231276763a92af916180501ca707a8751e2a6314e";

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture file is corrupted: checksum {actual} does not match expected {expected}")]
    Corrupted { expected: String, actual: String },
    #[error("fixture file does not parse: {0}")]
    Parse(String),
    #[error("cannot read fixture file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Table1Row {
    pub name: String,
    pub b: f64,
    pub std_error: f64,
    pub beta: Option<f64>,
    pub t: f64,
    pub sig: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Table1 {
    pub n: usize,
    pub rows: Vec<Table1Row>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Table2 {
    pub r: f64,
    pub r_square: f64,
    pub adjusted_r_square: f64,
    pub std_error_of_estimate: f64,
    pub n: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct MinMaxMean {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// One system of the grouped validation data. The correlation matrix is
/// ordered Testability, Modifiability, Flexibility.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SystemGroup {
    pub system: String,
    pub projects: usize,
    pub modifiability: MinMaxMean,
    pub flexibility: MinMaxMean,
    pub testability: MinMaxMean,
    pub correlations: [[f64; 3]; 3],
}

impl SystemGroup {
    pub fn r_testability_modifiability(&self) -> f64 {
        self.correlations[0][1]
    }

    pub fn r_testability_flexibility(&self) -> f64 {
        self.correlations[0][2]
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CorrelationSummaryRow {
    pub system: String,
    pub testability_modifiability: f64,
    pub testability_flexibility: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Table3 {
    pub groups: Vec<SystemGroup>,
    pub summary: Vec<CorrelationSummaryRow>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Table4Row {
    pub project: String,
    pub computed_value: f64,
    pub known_value: f64,
    pub computed_rank: u32,
    pub known_rank: u32,
    pub sum_d_squared: f64,
    pub r_s: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Table4 {
    /// Sample size stated in the accompanying prose (differs from the row count).
    pub stated_n: usize,
    pub threshold: f64,
    pub rows: Vec<Table4Row>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Decision {
    Reject,
    Accept,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Table5Cell {
    pub factor: String,
    pub system: String,
    pub r: f64,
    pub t_r: f64,
    pub critical_value: f64,
    pub exceeds: bool,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Table5 {
    pub alpha: f64,
    pub cells: Vec<Table5Cell>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PaperFixtures {
    pub table1: Table1,
    pub table2: Table2,
    pub table3: Table3,
    pub table4: Table4,
    pub table5: Table5,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl PaperFixtures {
    pub fn embedded() -> Result<Self, FixtureError> {
        Self::from_bytes(EMBEDDED_FIXTURES.as_bytes())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FixtureError> {
        let actual = sha256_hex(bytes);
        if actual != FIXTURE_SHA256 {
            return Err(FixtureError::Corrupted {
                expected: FIXTURE_SHA256.to_string(),
                actual,
            });
        }
        serde_json::from_slice(bytes).map_err(|e| FixtureError::Parse(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self, FixtureError> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| FixtureError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_bytes(&bytes)
    }

    pub fn group(&self, system: &str) -> Option<&SystemGroup> {
        self.table3.groups.iter().find(|g| g.system == system)
    }
}
