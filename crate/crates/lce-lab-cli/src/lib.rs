//! File formats and subcommand logic behind the `lce-lab` binary.
//!
//! Everything observable about the CLI lives here so that tests can compare
//! the binary's output byte-for-byte against a direct library invocation:
//! the JSON document schema (tag `lce-lab/1`), the CSV table layout
//! (`v1..v{d},u1..u{d}[,w]` with shortest round-trip decimals), and the
//! subcommand implementations themselves.

pub mod docs;
pub mod io;
pub mod run;

/// Schema tag stamped into every JSON document this tool writes.
pub const SCHEMA: &str = "lce-lab/1";

/// Seed used when neither `--seed` nor `LCE_LAB_SEED` is given.
pub const DEFAULT_SEED: u64 = 0x1CE1AB;

/// Exit-code-carrying error for the binary.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input file; exit code 2.
    Parse {
        line: Option<usize>,
        message: String,
    },
    /// Compatible regime requested on incompatible moments; exit code 3.
    Incompatible { residual: f64 },
    /// Anything else; exit code 1.
    Other(String),
}

impl CliError {
    pub fn parse(line: Option<usize>, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::Incompatible { .. } => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse {
                line: Some(l),
                message,
            } => write!(f, "input error (line {l}): {message}"),
            CliError::Parse {
                line: None,
                message,
            } => write!(f, "input error: {message}"),
            CliError::Incompatible { residual } => write!(
                f,
                "moments are incompatible (residual {residual:.3e}); rerun with --regime truncated or --regime regularized"
            ),
            CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<lce_lab::Error> for CliError {
    fn from(e: lce_lab::Error) -> Self {
        use lce_lab::Error as E;
        match e {
            E::IncompatibleCase { residual } => CliError::Incompatible { residual },
            E::InvalidInput(_)
            | E::ShapeMismatch(_)
            | E::EmptyInput
            | E::NegativeWeight(..)
            | E::OutOfRange(_)
            | E::NotPsd(_) => CliError::parse(None, e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

/// Resolve the RNG seed: flag, then `LCE_LAB_SEED`, then the fixed default.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("LCE_LAB_SEED") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| CliError::parse(None, format!("LCE_LAB_SEED is not a u64: {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
