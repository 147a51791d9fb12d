use super::TransformError;
use crate::ncalg::{op_norm, CMatrix};
use num::complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Membership {
    /// Largest `ε` with `Im T ≥ ε·1`.
    Member(f64),
    NotMember,
}

/// `(T − T*)/(2i)`.
pub fn im_part(t: &CMatrix) -> CMatrix {
    (t - t.adjoint()) * Complex64::new(0.0, -0.5)
}

/// `(T + T*)/2`.
pub fn re_part(t: &CMatrix) -> CMatrix {
    (t + t.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn min_hermitian_eigenvalue(h: &CMatrix) -> f64 {
    h.clone().symmetric_eigenvalues().min()
}

pub fn max_hermitian_eigenvalue(h: &CMatrix) -> f64 {
    h.clone().symmetric_eigenvalues().max()
}

pub fn half_plane_membership(t: &CMatrix) -> Membership {
    let eps = min_hermitian_eigenvalue(&im_part(t));
    if eps > 0.0 {
        Membership::Member(eps)
    } else {
        Membership::NotMember
    }
}

/// Element of the matrix upper half-plane with its lower bound `ε`.
#[derive(Clone, Debug)]
pub struct HalfPlaneMatrix {
    pub value: CMatrix,
    pub eps: f64,
}

impl HalfPlaneMatrix {
    pub fn new(value: CMatrix) -> Result<Self, TransformError> {
        if !value.is_square() {
            return Err(TransformError::NotSquare);
        }
        match half_plane_membership(&value) {
            Membership::Member(eps) => Ok(HalfPlaneMatrix { value, eps }),
            Membership::NotMember => Err(TransformError::NotInHalfPlane),
        }
    }

    pub fn scalar(z: Complex64) -> Result<Self, TransformError> {
        Self::new(CMatrix::from_element(1, 1, z))
    }
}

/// Element of the open unit ball.
#[derive(Clone, Debug)]
pub struct DiskElement {
    pub value: CMatrix,
}

impl DiskElement {
    pub fn new(value: CMatrix) -> Result<Self, TransformError> {
        if !value.is_square() {
            return Err(TransformError::NotSquare);
        }
        let n = op_norm(&value);
        if !(n < 1.0) {
            return Err(TransformError::NotInDisk(n));
        }
        Ok(DiskElement { value })
    }

    pub fn scalar(z: Complex64) -> Result<Self, TransformError> {
        Self::new(CMatrix::from_element(1, 1, z))
    }
}

/// Both sides of the inverse bounds for `T` in the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlaneBounds {
    pub eps: f64,
    /// `‖T⁻¹‖` and its bound `1/ε`.
    pub inv_norm: f64,
    pub inv_norm_bound: f64,
    /// Largest eigenvalue of `Im T⁻¹` and its bound `−(ε + ε⁻¹‖T‖²)⁻¹`.
    pub im_inv_max: f64,
    pub im_inv_bound: f64,
}

impl HalfPlaneBounds {
    pub fn holds(&self, tol: f64) -> bool {
        self.inv_norm <= self.inv_norm_bound + tol && self.im_inv_max <= self.im_inv_bound + tol
    }
}

pub fn half_plane_bounds(t: &HalfPlaneMatrix) -> Result<HalfPlaneBounds, TransformError> {
    let inv = t.value.clone().try_inverse().ok_or(TransformError::Singular)?;
    let eps = t.eps;
    let norm = op_norm(&t.value);
    Ok(HalfPlaneBounds {
        eps,
        inv_norm: op_norm(&inv),
        inv_norm_bound: 1.0 / eps,
        im_inv_max: max_hermitian_eigenvalue(&im_part(&inv)),
        im_inv_bound: -1.0 / (eps + norm * norm / eps),
    })
}

/// The two disk criteria: `‖x‖ < 1`, and `2 Re(1 − x)⁻¹ ≥ (1 + ε)·1` for some `ε > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskCriteria {
    pub norm: f64,
    pub in_disk: bool,
    /// Smallest eigenvalue of `2 Re(1 − x)⁻¹ − 1`, absent when `1 − x` is singular.
    pub margin: Option<f64>,
    pub resolvent_criterion: bool,
}

impl DiskCriteria {
    pub fn agree(&self) -> bool {
        self.in_disk == self.resolvent_criterion
    }
}

/// Returns `‖x‖ < 1` together with the resolvent form it is cross-checked against.
pub fn disk_criterion(x: &CMatrix) -> DiskCriteria {
    let k = x.nrows();
    let norm = op_norm(x);
    let one_minus = CMatrix::identity(k, k) - x;
    let margin = if op_norm(&one_minus) == 0.0 || min_singular_value(&one_minus) < 1e-14 * (1.0 + norm) {
        None
    } else {
        one_minus.try_inverse().map(|inv| min_hermitian_eigenvalue(&(re_part(&inv) * Complex64::new(2.0, 0.0))) - 1.0)
    };
    DiskCriteria { norm, in_disk: norm < 1.0, margin, resolvent_criterion: margin.is_some_and(|m| m > 0.0) }
}

fn min_singular_value(m: &CMatrix) -> f64 {
    m.singular_values().min()
}
