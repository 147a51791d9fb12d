use super::{MatrixSubordResult, SolverConfig, SubordError, SubordResult};
use crate::ncalg::{op_norm, CMatrix};
use crate::transforms::{cauchy_G, matrix_cauchy_G, HalfPlaneMatrix, MeasureR, TransformError};
use num::complex::Complex64;

const MIN_DAMPING: f64 = 1.0 / 1024.0;

/// Fixed point of `w ↦ h_ν(h_μ(w) + z) + z` with `h = 1/G − id`, started at `w₀ = z`.
pub fn additive_subord(mu: &MeasureR, nu: &MeasureR, z: Complex64, cfg: &SolverConfig) -> Result<SubordResult, SubordError> {
    cfg.validate()?;
    if !(z.im > 0.0) {
        return Err(TransformError::NotUpperHalfPlane(z).into());
    }
    let mut w = z;
    let mut damping = cfg.damping;
    let mut prev = f64::INFINITY;
    let mut last = None;
    for it in 0..=cfg.max_iter {
        let gm = cauchy_G(mu, w)?;
        let w2 = 1.0 / gm - w + z;
        let gn = cauchy_G(nu, w2)?;
        let residual = (gm - gn).norm();
        let current = SubordResult { point: z, omega1: w, omega2: w2, value: gm, residual, iterations: it };
        if residual <= cfg.tol {
            return Ok(current);
        }
        last = Some(current);
        if residual > prev {
            damping = (damping * 0.5).max(MIN_DAMPING);
        } else {
            damping = (damping * 1.25).min(cfg.damping);
        }
        prev = residual;
        let next = 1.0 / gn - w2 + z;
        w = w + (next - w) * damping;
    }
    let last = last.expect("at least one iteration");
    Err(SubordError::NonConvergence { iterations: cfg.max_iter, residual: last.residual, last: Box::new(last) })
}

/// Matrix-argument version with `h(w) = G(w)⁻¹ − w`; stops on the operator-norm residual.
pub fn additive_subord_matrix(
    mu: &MeasureR,
    nu: &MeasureR,
    b: &HalfPlaneMatrix,
    cfg: &SolverConfig,
) -> Result<MatrixSubordResult, SubordError> {
    cfg.validate()?;
    let mut w = b.value.clone();
    let mut damping = cfg.damping;
    let mut prev = f64::INFINITY;
    let mut residual = f64::INFINITY;
    for it in 0..=cfg.max_iter {
        let gm = matrix_cauchy_G(mu, &HalfPlaneMatrix::new(w.clone())?)?.value;
        let w2 = gm.clone().try_inverse().ok_or(TransformError::Singular)? - &w + &b.value;
        let gn = matrix_cauchy_G(nu, &HalfPlaneMatrix::new(w2.clone())?)?.value;
        residual = op_norm(&(&gm - &gn));
        if residual <= cfg.tol {
            return Ok(MatrixSubordResult { point: b.value.clone(), omega1: w, omega2: w2, value: gm, residual, iterations: it });
        }
        if residual > prev {
            damping = (damping * 0.5).max(MIN_DAMPING);
        } else {
            damping = (damping * 1.25).min(cfg.damping);
        }
        prev = residual;
        let next = gn.try_inverse().ok_or(TransformError::Singular)? - &w2 + &b.value;
        w = &w + (next - &w) * Complex64::new(damping, 0.0);
    }
    Err(SubordError::MatrixNonConvergence { iterations: cfg.max_iter, residual })
}

#[derive(Clone, Debug)]
pub struct ResolventCheck {
    pub result: MatrixSubordResult,
    /// `‖G_μ(ω₁(b)) − G_ν(ω₂(b))‖`, recomputed at the returned point.
    pub fixed_point_residual: f64,
    /// `‖G(b) − S·diag(G(λᵢ))·S⁻¹‖` when `b = S·diag(λᵢ)·S⁻¹` is well conditioned.
    pub functional_calculus_residual: Option<f64>,
    /// `ω₁(b) − b`, the element `n` with `E(b − X − Y)⁻¹ = (b + n − X)⁻¹`.
    pub shift: CMatrix,
    pub residual: f64,
}

/// Cross-checks the matrix fixed point against the scalar solver through the holomorphic
/// functional calculus of `b`.
pub fn resolvent_identity_check(
    mu: &MeasureR,
    nu: &MeasureR,
    b: &HalfPlaneMatrix,
    cfg: &SolverConfig,
) -> Result<ResolventCheck, SubordError> {
    let result = additive_subord_matrix(mu, nu, b, cfg)?;
    let gm = matrix_cauchy_G(mu, &HalfPlaneMatrix::new(result.omega1.clone())?)?.value;
    let gn = matrix_cauchy_G(nu, &HalfPlaneMatrix::new(result.omega2.clone())?)?.value;
    let fixed_point_residual = op_norm(&(&gm - &gn));
    let functional_calculus_residual = match eigen_decomposition(&b.value) {
        Some((s, s_inv, lambdas)) => {
            let mut d = CMatrix::zeros(lambdas.len(), lambdas.len());
            for (i, &l) in lambdas.iter().enumerate() {
                d[(i, i)] = additive_subord(mu, nu, l, cfg)?.value;
            }
            Some(op_norm(&(&result.value - s * d * s_inv)))
        }
        None => None,
    };
    let shift = &result.omega1 - &b.value;
    let residual = fixed_point_residual.max(functional_calculus_residual.unwrap_or(0.0));
    Ok(ResolventCheck { result, fixed_point_residual, functional_calculus_residual, shift, residual })
}

/// `(S, S⁻¹, λ)` with `b = S·diag(λ)·S⁻¹`, or `None` if `S` is ill conditioned.
fn eigen_decomposition(b: &CMatrix) -> Option<(CMatrix, CMatrix, Vec<Complex64>)> {
    let k = b.nrows();
    let m = faer::Mat::<faer::c64>::from_fn(k, k, |i, j| faer::c64::new(b[(i, j)].re, b[(i, j)].im));
    let evd = m.eigen().ok()?;
    let u = evd.U();
    let s = CMatrix::from_fn(k, k, |i, j| {
        let x = u[(i, j)];
        Complex64::new(x.re, x.im)
    });
    let lambdas: Vec<Complex64> = (0..k)
        .map(|i| {
            let x = evd.S().column_vector()[i];
            Complex64::new(x.re, x.im)
        })
        .collect();
    let sv = s.singular_values();
    if !(sv.min() > 0.0) || sv.max() / sv.min() > 1e8 {
        return None;
    }
    let s_inv = s.clone().try_inverse()?;
    Some((s, s_inv, lambdas))
}
