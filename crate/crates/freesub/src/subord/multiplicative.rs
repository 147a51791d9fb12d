use super::{SolverConfig, SubordError, SubordResult};
use crate::freeprob::{AlgebraSpec, FreeState};
use crate::ncalg::{GenKind, GenSymbol, NCWord};
use crate::scalar::Scalar;
use crate::transforms::{psi_scalar, MeasureT, TransformError};
use num::complex::Complex64;
use std::f64::consts::PI;

const MIN_DAMPING: f64 = 1.0 / 1024.0;
const SMALL: f64 = 1e-8;

/// `η(w)/w` with `η = ψ/(1 + ψ)`, continued to `w = 0` by its Taylor polynomial.
fn eta_quotient(mu: &MeasureT, w: Complex64) -> Result<Complex64, TransformError> {
    if w.norm() < SMALL {
        let c1 = mu.moment(1).unwrap_or_default();
        let c2 = mu.moment(2).unwrap_or_default();
        return Ok(c1 + (c2 - c1 * c1) * w);
    }
    let psi = psi_scalar(mu, w)?.value;
    Ok(psi / (1.0 + psi) / w)
}

/// `ω₁` with `ψ_{UV}(z) = ψ_U(ω₁(z)) = ψ_V(ω₂(z))`, from `ω₁ = z·h_V(z·h_U(ω₁))`, `h = η/w`.
/// Damping follows the fixed-point step length.
pub fn mult_unitary_subord(mu_u: &MeasureT, mu_v: &MeasureT, z: Complex64, cfg: &SolverConfig) -> Result<SubordResult, SubordError> {
    cfg.validate()?;
    if !(z.norm() < 1.0) {
        return Err(TransformError::NotInDisk(z.norm()).into());
    }
    if mu_u.is_haar() || (mu_u.first_moment().norm() < 1e-14 && mu_v.first_moment().norm() < 1e-14) {
        return Err(SubordError::Degenerate { psi: Complex64::new(0.0, 0.0) });
    }
    let mut w = z * mu_v.first_moment();
    let mut damping = cfg.damping;
    let mut prev = f64::INFINITY;
    let mut last = None;
    for it in 0..=cfg.max_iter {
        let w2 = z * eta_quotient(mu_u, w)?;
        let pu = psi_scalar(mu_u, w)?.value;
        let pv = psi_scalar(mu_v, w2)?.value;
        let residual = (pu - pv).norm();
        let current = SubordResult { point: z, omega1: w, omega2: w2, value: pu, residual, iterations: it };
        if residual <= cfg.tol {
            return Ok(current);
        }
        last = Some(current);
        let next = z * eta_quotient(mu_v, w2)?;
        let step = (next - w).norm();
        if step > prev {
            damping = (damping * 0.5).max(MIN_DAMPING);
        } else {
            damping = (damping * 1.25).min(cfg.damping);
        }
        prev = step;
        w = w + (next - w) * damping;
    }
    let last = last.expect("at least one iteration");
    Err(SubordError::NonConvergence { iterations: cfg.max_iter, residual: last.residual, last: Box::new(last) })
}

/// Exact coefficients `a_1, …, a_N` of `ω(z) = Σ a_n zⁿ` solving `ψ_U ∘ ω = ψ_{UV}` as power series,
/// with `τ((UV)ⁿ)` from the free product state.
pub fn mult_series_subord(spec_u: &AlgebraSpec, spec_v: &AlgebraSpec, order: usize) -> Result<Vec<Scalar>, SubordError> {
    let (mut su, mut sv) = (spec_u.clone(), spec_v.clone());
    su.tag = 0;
    sv.tag = 1;
    let c: Vec<Scalar> = (1..=order as i64).map(|n| su.moment(n)).collect::<Result<_, _>>()?;
    for n in 1..=order as i64 {
        sv.moment(n)?;
    }
    let Some(c1) = c.first().cloned() else { return Ok(Vec::new()) };
    if c1.is_zero() {
        return Err(SubordError::Degenerate { psi: Complex64::new(0.0, 0.0) });
    }
    let state = FreeState::symbolic([su, sv])?;
    let uv = NCWord::from_letters([GenSymbol::new(0, 0, GenKind::Unitary), GenSymbol::new(1, 0, GenKind::Unitary)]);
    let c1_inv = c1.inv().expect("nonzero first moment");
    // a[0] is the constant term, always 0
    let mut a = vec![Scalar::zero(); order + 1];
    for n in 1..=order {
        let m_n = state.tau_word(&uv.pow(n))?;
        let mut rest = Scalar::zero();
        let mut power = a.clone();
        for ck in c.iter().take(n).skip(1) {
            power = truncated_mul(&power, &a, n);
            rest += &(ck * &power[n]);
        }
        a[n] = &(&m_n - &rest) * &c1_inv;
    }
    a.remove(0);
    Ok(a)
}

fn truncated_mul(p: &[Scalar], q: &[Scalar], n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); p.len()];
    for (i, pi) in p.iter().enumerate().take(n + 1) {
        if pi.is_zero() {
            continue;
        }
        for (j, qj) in q.iter().enumerate().take(n + 1 - i) {
            out[i + j] += &(pi * qj);
        }
    }
    out
}

/// `f^{(n)}(0)/n!` for `n = 0, …, order` by the `m`-point trapezoid rule on `|z| = radius`.
pub fn taylor_coefficients<E>(
    radius: f64,
    m: usize,
    order: usize,
    mut f: impl FnMut(Complex64) -> Result<Complex64, E>,
) -> Result<Vec<Complex64>, E> {
    assert!(radius > 0.0 && m > order, "need radius > 0 and more nodes than coefficients");
    let values: Vec<(f64, Complex64)> = (0..m)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / m as f64;
            f(Complex64::from_polar(radius, th)).map(|v| (th, v))
        })
        .collect::<Result<_, E>>()?;
    Ok((0..=order)
        .map(|n| {
            let s: Complex64 = values.iter().map(|&(th, v)| v * Complex64::from_polar(1.0, -(n as f64) * th)).sum();
            s / (m as f64 * radius.powi(n as i32))
        })
        .collect())
}
