use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },

    #[error("no value supplied for site {0}")]
    MissingSiteValue(i64),

    #[error("vector field must have at least one nonzero coefficient")]
    EmptyField,

    #[error("support escapes window [-{window}, {window}] at site {site}")]
    WindowOverflow { window: i64, site: i64 },

    #[error("region is not closed under the requested group (point {0} maps outside)")]
    RegionNotClosed(String),

    #[error("key {0} is not a cone point (need 0 ≤ z_1 ≤ … ≤ z_N)")]
    NotConePoint(String),

    #[error(
        "support diameter {diameter} too large for grid size {grid} (need diameter <= grid/4)"
    )]
    SupportTooLarge { diameter: i64, grid: usize },

    #[error(
        "symbol magnitude {magnitude:.3e} below 1e-12 at unmasked node {node}; \
         increase the mask parameter or change the grid size"
    )]
    SingularSymbol { node: String, magnitude: f64 },

    #[error(
        "inverse transform left imaginary residue {residue:.3e} (limit {limit:.3e}); \
         the spectral data was not conjugate-symmetric"
    )]
    ImaginaryResidue { residue: f64, limit: f64 },

    #[error("graph edges carry no weights; assign weights before the cycle check")]
    WeightsMissing,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit status class used by the command-line interface: parse errors
    /// exit 2, precondition failures exit 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}
