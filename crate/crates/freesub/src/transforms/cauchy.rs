use super::measure::{grid_angle, MeasureR, MeasureT};
use super::membership::{DiskElement, HalfPlaneMatrix};
use super::TransformError;
use crate::ncalg::{op_norm, CMatrix};
use num::complex::Complex64;

/// `G_μ(z) = ∫ dμ(t)/(z − t)`.
#[allow(non_snake_case)]
pub fn cauchy_G(mu: &MeasureR, z: Complex64) -> Result<Complex64, TransformError> {
    if !(z.im > 0.0) {
        return Err(TransformError::NotUpperHalfPlane(z));
    }
    if let Some(g) = mu.grid_cauchy(z) {
        return Ok(g);
    }
    Ok(mu.nodes_for(z.im).iter().map(|&(t, w)| w / (z - t)).sum())
}

/// `F_μ(z) = 1/G_μ(z)`.
#[allow(non_snake_case)]
pub fn cauchy_F(mu: &MeasureR, z: Complex64) -> Result<Complex64, TransformError> {
    Ok(1.0 / cauchy_G(mu, z)?)
}

/// `h_μ(z) = F_μ(z) − z`.
pub fn cauchy_h(mu: &MeasureR, z: Complex64) -> Result<Complex64, TransformError> {
    Ok(cauchy_F(mu, z)? - z)
}

/// Matrix-argument value with the a priori bounds it must obey.
#[derive(Clone, Debug)]
pub struct MatrixCauchy {
    pub value: CMatrix,
    /// `1/ε`.
    pub norm_bound: f64,
    /// `−(ε + ε⁻¹(‖b‖ + r)²)⁻¹` with `r` the support radius.
    pub im_bound: f64,
}

/// `∫ (b − t)⁻¹ dμ(t)` for `b` in the matrix upper half-plane.
#[allow(non_snake_case)]
pub fn matrix_cauchy_G(mu: &MeasureR, b: &HalfPlaneMatrix) -> Result<MatrixCauchy, TransformError> {
    let k = b.value.nrows();
    let eps = b.eps;
    let mut g = CMatrix::zeros(k, k);
    for &(t, w) in mu.nodes_for(eps).iter() {
        let mut shifted = b.value.clone();
        for i in 0..k {
            shifted[(i, i)] -= t;
        }
        let inv = shifted.try_inverse().ok_or(TransformError::Singular)?;
        g += inv * Complex64::new(w, 0.0);
    }
    let spread = op_norm(&b.value) + mu.support_radius();
    Ok(MatrixCauchy { value: g, norm_bound: 1.0 / eps, im_bound: -1.0 / (eps + spread * spread / eps) })
}

/// `G_μ(b)⁻¹ − b`.
pub fn matrix_cauchy_h(mu: &MeasureR, b: &HalfPlaneMatrix) -> Result<CMatrix, TransformError> {
    let g = matrix_cauchy_G(mu, b)?.value;
    Ok(g.try_inverse().ok_or(TransformError::Singular)? - &b.value)
}

/// `ψ(z)` with a certified bound on the truncation or quadrature error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// `ψ_μ(z) = Σ_{n≥1} c_n zⁿ = ∫ zζ/(1 − zζ) dμ(ζ)`.
pub fn psi_transform(mu: &MeasureT, z: &DiskElement) -> Result<PsiValue, TransformError> {
    if z.value.nrows() != 1 {
        return Err(TransformError::NotScalar);
    }
    psi_scalar(mu, z.value[(0, 0)])
}

pub fn psi_scalar(mu: &MeasureT, z: Complex64) -> Result<PsiValue, TransformError> {
    let r = z.norm();
    if !(r < 1.0) {
        return Err(TransformError::NotInDisk(r));
    }
    let one = Complex64::new(1.0, 0.0);
    if mu.is_haar() {
        return Ok(PsiValue { value: Complex64::new(0.0, 0.0), tail_bound: 0.0 });
    }
    if let Some(atoms) = mu.atom_list() {
        let value = atoms.iter().map(|&(zeta, w)| w * z * zeta / (one - z * zeta)).sum();
        return Ok(PsiValue { value, tail_bound: 0.0 });
    }
    if let Some(p) = mu.density_values() {
        // periodic trapezoid rule on the trigonometric interpolant of the grid; only
        // moments of order ≥ M/2 alias, and each is bounded by 1
        let m = p.len();
        let value = p
            .iter()
            .enumerate()
            .map(|(j, &pj)| {
                let zz = z * Complex64::from_polar(1.0, grid_angle(j, m));
                pj / m as f64 * zz / (one - zz)
            })
            .sum();
        return Ok(PsiValue { value, tail_bound: 2.0 * r.powi((m / 2) as i32) / (1.0 - r) });
    }
    let c = mu.moments();
    let mut value = Complex64::new(0.0, 0.0);
    let mut zn = one;
    for cn in c {
        zn *= z;
        value += cn * zn;
    }
    Ok(PsiValue { value, tail_bound: r.powi(c.len() as i32 + 1) / (1.0 - r) })
}
