use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown spatial mode `{0}`")]
    UnknownMode(String),

    #[error("duplicate spatial mode `{0}`")]
    DuplicateMode(String),

    #[error("invalid spatial label `{0}`: labels must be non-empty and free of whitespace, `_`, `=` and `,`")]
    InvalidLabel(String),

    #[error("operands are defined over different mode registries")]
    RegistryMismatch,

    #[error("element ports collide: {0}")]
    PortCollision(String),

    #[error("photon number mismatch: input carries {input}, output carries {output}")]
    PhotonNumberMismatch { input: usize, output: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("permanent of dimension {0} exceeds the supported maximum of {max}", max = crate::simulator::MAX_PERMANENT_DIM)]
    DimensionTooLarge(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("state is not a valid dual-rail encoding: {0}")]
    NotDualRail(String),

    #[error("relative phase is undefined: both anchor amplitudes vanish")]
    UndefinedPhase,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
