//! Traces and conditional expectations on free products of singly generated algebras.

mod checks;
#[cfg(test)]
mod proptests;
mod qmatrix;
mod spec;
mod state;

pub use checks::{
    check_coalgebra_d, check_coalgebra_delta, check_d_equals_minus_delta, check_freeconj_pairing, conjugate_pairing, graddist_bound,
    liberation_pairing, PairingValue,
};
pub use qmatrix::QMatrix;
pub use spec::{circle_point, is_psd_exact, AlgebraSpec, AlgebraSpecJson, ExactJson, MomentData, DEFAULT_MOMENT_ORDER};
pub use state::{Backend, FreeState};

use crate::ncalg::{NcError, Tag};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FpError {
    #[error("insufficient moment order for tag {tag}: needed {needed}, available {available}")]
    InsufficientMoments { tag: Tag, needed: usize, available: usize },
    #[error("no algebra with tag {0}")]
    UnknownTag(Tag),
    #[error("letter kind does not match the algebra with tag {0}")]
    KindMismatch(Tag),
    #[error("moment data for tag {0} is not positive semidefinite")]
    NotPositive(Tag),
    #[error("invalid algebra spec for tag {tag}: {reason}")]
    InvalidSpec { tag: Tag, reason: String },
    #[error("duplicate tag")]
    DuplicateTag,
    #[error("operation requires the symbolic backend")]
    SymbolicOnly,
    #[error("word outside the stated domain: {0}")]
    OutsideDomain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Nc(#[from] NcError),
}
