//! The run manifest: every file the runner writes, with its checksum,
//! plus wall-clock timings and the numeric residuals that let a reader
//! judge how faithful the outputs are.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    /// Path relative to the output directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct TimingRecord {
    pub label: String,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct ResidualRecord {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub version: &'static str,
    pub experiment: String,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputRecord>,
    /// Quadrature deviations, whitening residuals, and root backward
    /// errors observed during the run.
    pub residuals: Vec<ResidualRecord>,
    pub timings: Vec<TimingRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write;
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}
