use std::fmt;
use std::path::Path;

use elastica::ElasticError;

/// Failure of a command, carrying enough to pick the exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, bad flags, dataset layout violations.
    Input(String),
    /// Library failure, optionally tagged with the file it concerns.
    Elastic(ElasticError, Option<String>),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        CliError::Input(format!("{}: {err}", path.display()))
    }

    /// 2 for input and usage problems, 3 for geometry, 4 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Elastic(e, _) => match e {
                ElasticError::ZeroEdge { .. }
                | ElasticError::SegmentMismatch { .. }
                | ElasticError::PartitionMismatch
                | ElasticError::OffSphere { .. }
                | ElasticError::InvalidReparameterization(_) => 3,
                ElasticError::NoConvergence { .. }
                | ElasticError::SingularJacobian { .. }
                | ElasticError::Antipodal { .. }
                | ElasticError::PathProjection { .. }
                | ElasticError::StraighteningFailed { .. } => 4,
                ElasticError::TooFewVertices(_)
                | ElasticError::InvalidParams(_)
                | ElasticError::NotClosed { .. }
                | ElasticError::InvalidElastic { .. }
                | ElasticError::ParamRegime { .. }
                | ElasticError::InvalidArgument(_) => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
            CliError::Elastic(e, None) => write!(f, "{e}"),
            CliError::Elastic(e, Some(context)) => write!(f, "{context}: {e}"),
        }
    }
}

impl From<ElasticError> for CliError {
    fn from(e: ElasticError) -> Self {
        CliError::Elastic(e, None)
    }
}

/// Attaches the offending file to a library error while keeping its exit code.
pub fn in_file<T>(path: &Path, r: elastica::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Elastic(e, Some(path.display().to_string())))
}
