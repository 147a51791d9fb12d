//! Monte Carlo harness: asymptotically free matrix models against the subordination solvers.

mod sample;
mod validate;

pub use sample::{sample_gue, sample_haar_unitary, sample_law, stream_rng, Law};
pub use validate::{
    disk_grid, upper_grid, validate_additive, validate_matrix_resolvent, validate_multiplicative, EnsembleConfig,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RmtError {
    #[error("invalid ensemble: {0}")]
    InvalidConfig(String),
    #[error("law has no {0} realization")]
    WrongLaw(&'static str),
    #[error("eigenvalue computation failed")]
    Eigen,
    #[error(transparent)]
    Subord(#[from] crate::subord::SubordError),
    #[error(transparent)]
    Transform(#[from] crate::transforms::TransformError),
}
