use std::path::Path;

use serde::Serialize;
use thiserror::Error;

/// Why a subcommand stopped; maps onto the process exit code.
#[derive(Debug, Error)]
pub enum Failure {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("run failed: {0}")]
    Run(String),
}

impl Failure {
    /// 1 for failed checks and runs, 2 for usage and configuration problems.
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) | Failure::Run(_) => 1,
            Failure::Config(_) | Failure::Output(_) => 2,
        }
    }
}

pub fn output_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Output(format!("{}: {e}", path.display()))
}

pub fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, Failure> {
    std::fs::File::create(path).map(std::io::BufWriter::new).map_err(|e| output_err(path, e))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| output_err(path, e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| output_err(path, e))
}
