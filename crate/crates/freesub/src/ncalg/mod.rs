//! Exact noncommutative polynomials, tensor powers, and the derivations `δ`, `d`, `∂`.

mod derive;
mod eval;
mod json;
mod norm;
mod poly;
#[cfg(test)]
mod proptests;
mod resolvent;
mod tensor;
mod word;

pub use derive::{
    conjugated_blocks, derive_conjugated_delta, derive_d, derive_d_product, derive_delta, derive_fdq, iterate_derivation, leibniz,
    leibniz_word, product_unitary_blocks, Derivation,
};
pub use eval::{eval_poly, eval_tensor, op_norm, rho_direct, rho_series_eval, theta_contract, Assignment, CMatrix, RhoSeries};
pub use json::{PolyJson, TensorJson};
pub use norm::{smooth_norm_bound, smooth_norm_bound_f64, GenNorms, NormBound};
pub use poly::NCPoly;
pub use resolvent::{verify_resolvent_series_d, verify_resolvent_series_delta};
pub use tensor::TensorPoly;
pub use word::{GenKind, GenSymbol, NCWord, Tag};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NcError {
    #[error("tag {0} is not a unitary generator")]
    NotUnitary(Tag),
    #[error("word {0} is not in the algebra the derivation is defined on")]
    NotInAlgebra(String),
    #[error("no norm given for tag {0}")]
    MissingNorm(Tag),
    #[error("no matrix assigned to tag {0}")]
    MissingAssignment(Tag),
    #[error("assignment is empty")]
    EmptyAssignment,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("tensor order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("matrix for unitary tag {tag} is not unitary (defect {defect:e})")]
    NotUnitaryMatrix { tag: Tag, defect: f64 },
    #[error("operator norm {0} is not below 1")]
    NormTooLarge(f64),
}
