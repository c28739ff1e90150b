use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a numerical routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// The ball reached the coil pole face, where the force law diverges.
    #[error("plant singularity: Y_inf + y = {gap:e} m is below the guard")]
    Singularity { gap: f64 },

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error("empty log")]
    EmptyLog,
}
