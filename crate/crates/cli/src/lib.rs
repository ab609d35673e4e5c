//! State files and the commands behind the `hs2` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod format;

use std::path::PathBuf;

use thiserror::Error;

pub use format::{parse, print, FormatError, StateFile};

/// Validation tolerance unless `HS2_TOL` overrides it.
pub const DEFAULT_TOL: f64 = hs2_core::DEFAULT_TOL;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: cannot read: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{}: cannot write: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{}: {}", path.display(), error)]
    Format { path: PathBuf, error: FormatError },
    /// Each entry names the violated invariant and where it fails.
    #[error("{}: invalid {kind} state", path.display())]
    Invalid { path: PathBuf, kind: &'static str, violations: Vec<String> },
    #[error(transparent)]
    Core(#[from] hs2_core::Error),
    /// A computed check came out false.
    #[error("{0}")]
    Check(String),
}

impl CliError {
    /// 1 for validation failures, 2 for malformed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Read { .. } => 2,
            Self::Format { error: FormatError::Syntax { .. }, .. } => 2,
            Self::Format { .. }
            | Self::Write { .. }
            | Self::Invalid { .. }
            | Self::Core(_)
            | Self::Check(_) => 1,
        }
    }

    /// Lines for standard error: the message followed by one line per violation.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = vec![format!("error: {self}")];
        if let Self::Invalid { violations, .. } = self {
            out.extend(violations.iter().map(|v| format!("  violation: {v}")));
        }
        out
    }
}

/// `HS2_TOL` if set, otherwise [`DEFAULT_TOL`].
pub fn tolerance(var: Option<&str>) -> Result<f64, CliError> {
    match var {
        None => Ok(DEFAULT_TOL),
        Some(s) => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            _ => Err(CliError::Usage(format!("HS2_TOL must be a positive number, got `{s}`"))),
        },
    }
}
