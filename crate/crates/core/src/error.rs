use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration too large: {requested} items requested, cap is {cap}")]
    EnumerationTooLarge { requested: u128, cap: u128 },

    #[error("total masses differ: {left} vs {right}")]
    MassMismatch { left: String, right: String },

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("matrices are not similar; no witness exists")]
    NoWitness,

    #[error("invariant factors do not pair up: {0}")]
    NotADouble(String),

    #[error("spectra are not disjoint: {0}")]
    SpectraNotDisjoint(String),

    #[error("no invertible recovery found after {trials} trials")]
    RecoveryInconclusive { trials: usize },

    #[error("orbit comparison undecided within cap {cap}")]
    Undecided { cap: usize },

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("failed to emit {path}: {source}")]
    Emit {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}
