//! Cauchy and ψ transforms, Stieltjes inversion, and half-plane and disk membership.

mod cauchy;
mod invert;
mod measure;
mod membership;
#[cfg(test)]
mod proptests;

pub use cauchy::{cauchy_F, cauchy_G, cauchy_h, matrix_cauchy_G, matrix_cauchy_h, psi_scalar, psi_transform, MatrixCauchy, PsiValue};
pub use invert::{stieltjes_invert, stieltjes_ladder, DensityEstimate, LadderEstimate, ATOM_MASS, DEFAULT_ETA_LADDER};
pub use measure::{
    Density, DensityJson, DensityKindJson, MeasureR, MeasureRJson, MeasureT, MeasureTJson, DEFAULT_CIRCLE_ORDER, DEFAULT_QUAD_NODES,
};
pub use membership::{
    disk_criterion, half_plane_bounds, half_plane_membership, im_part, max_hermitian_eigenvalue, min_hermitian_eigenvalue, re_part,
    DiskCriteria, DiskElement, HalfPlaneBounds, HalfPlaneMatrix, Membership,
};

use num::complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("point {0} is not in the open upper half-plane")]
    NotUpperHalfPlane(Complex64),
    #[error("matrix is not in the open upper half-plane")]
    NotInHalfPlane,
    #[error("norm {0} is not below 1")]
    NotInDisk(f64),
    #[error("matrix is not square")]
    NotSquare,
    #[error("expected a 1×1 argument")]
    NotScalar,
    #[error("singular matrix")]
    Singular,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
}
