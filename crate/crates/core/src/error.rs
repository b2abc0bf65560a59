use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage that produced an error inside `estimate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Profile,
    Algorithm,
    Transform,
    Gsc,
    Qec,
    Hardware,
    Engine,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Layer::Profile => "profile",
            Layer::Algorithm => "algorithm",
            Layer::Transform => "transform",
            Layer::Gsc => "gsc",
            Layer::Qec => "qec",
            Layer::Hardware => "hardware",
            Layer::Engine => "engine",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("unsupported gate `{name}` at line {line}")]
    UnsupportedGate { line: usize, name: String },

    #[error("operand out of range at line {line}: {message}")]
    OperandOutOfRange { line: usize, message: String },

    #[error("invalid gate list: {0}")]
    InvalidGateList(String),

    #[error("missing mandatory key `{0}`")]
    MissingKey(String),

    #[error("negative count for `{0}`")]
    NegativeCount(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("no odd code distance up to {max} meets the failure budget (best error at d={max}: {best_error:e})")]
    DistanceSaturated { max: u32, best_error: f64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("{layer} layer: {source}")]
    Layer {
        layer: Layer,
        #[source]
        source: Box<Error>,
    },

    #[error("key mismatch: {0}")]
    KeyMismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn in_layer(self, layer: Layer) -> Self {
        match self {
            e @ Error::Layer { .. } => e,
            e => Error::Layer {
                layer,
                source: Box::new(e),
            },
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by unreadable or malformed inputs rather than
    /// by a failing computation.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Io { .. } | Error::Json(_) | Error::Csv(_)
        )
    }
}
