//! Arc density of `exp(iπεS)`, its circular Hilbert transform and the cotangent estimates around it.

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HilbregError {
    #[error("ε must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("principal value unstable: ladder spread {spread:e} exceeds {threshold:e}")]
    Unstable { spread: f64, threshold: f64 },
    #[error("|x| = {x} is not inside the support radius {r}")]
    OutsideSupport { x: f64, r: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcDensityParams {
    pub epsilon: f64,
    /// Gauss–Legendre nodes per panel.
    pub quad_points: usize,
    /// Decreasing cutoffs; each one is a split point of the paired integral.
    pub delta_ladder: Vec<f64>,
    /// Target tolerance; the ladder is unstable once its spread exceeds `10·tol`.
    pub tol: f64,
}

impl ArcDensityParams {
    pub fn new(epsilon: f64) -> Self {
        ArcDensityParams { epsilon, quad_points: 128, delta_ladder: vec![1e-2, 1e-3, 1e-4], tol: 1e-7 }
    }

    pub fn validate(&self) -> Result<(), HilbregError> {
        check_eps(self.epsilon)?;
        if self.quad_points < 2 {
            return Err(HilbregError::InvalidParams("quad_points must be at least 2".into()));
        }
        if self.delta_ladder.is_empty()
            || self.delta_ladder.iter().any(|&d| !(d > 0.0 && d < PI))
            || self.delta_ladder.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(HilbregError::InvalidParams("delta_ladder must be decreasing in (0, π)".into()));
        }
        if !(self.tol > 0.0) {
            return Err(HilbregError::InvalidParams("tol must be positive".into()));
        }
        Ok(())
    }
}

fn check_eps(eps: f64) -> Result<(), HilbregError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(HilbregError::InvalidEpsilon(eps))
    }
}

/// Representative of `θ` in `[−π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    theta - 2.0 * PI * ((theta + PI) / (2.0 * PI)).floor()
}

/// `4/(πε²)·√(ε² − θ²/π²)` on `[−πε, πε]`, relative to normalized arc length.
pub fn arc_density(eps: f64, theta: f64) -> f64 {
    let t = wrap_angle(theta) / PI;
    let r = eps * eps - t * t;
    if r <= 0.0 {
        0.0
    } else {
        4.0 / (PI * eps * eps) * r.sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HilbertValue {
    /// Value at the smallest cutoff.
    pub value: f64,
    /// `(δ, value)` for each level of the ladder.
    pub levels: Vec<(f64, f64)>,
    /// Largest difference between consecutive levels.
    pub spread: f64,
}

/// `−(1/2π)·PV∫ p(θ₁ − θ)·cot(θ/2) dθ`, folded to `∫₀^π [p(θ₁ − s) − p(θ₁ + s)]·cot(s/2) ds`
/// so the `1/s` singularity cancels before quadrature.
pub fn circular_hilbert(theta1: f64, params: &ArcDensityParams) -> Result<HilbertValue, HilbregError> {
    params.validate()?;
    let eps = params.epsilon;
    let gl = GaussLegendre::new(NonZeroUsize::new(params.quad_points).unwrap());
    let edge = PI * eps;
    let mut breaks: Vec<f64> = Vec::new();
    for t in [edge, -edge] {
        for k in [-1.0, 0.0, 1.0] {
            breaks.push(theta1 - t - 2.0 * PI * k);
            breaks.push(t + 2.0 * PI * k - theta1);
        }
    }
    let integrand = |s: f64| {
        let d = arc_density(eps, theta1 - s) - arc_density(eps, theta1 + s);
        if d == 0.0 {
            0.0
        } else {
            d / (0.5 * s).tan()
        }
    };
    let mut levels = Vec::with_capacity(params.delta_ladder.len());
    for &delta in &params.delta_ladder {
        let mut pts: Vec<f64> = breaks.iter().copied().chain([delta]).filter(|&s| s > 0.0 && s < PI).collect();
        pts.push(0.0);
        pts.push(PI);
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let total: f64 = pts.windows(2).map(|w| panel(&gl, w[0], w[1], &integrand)).sum();
        levels.push((delta, -total / (2.0 * PI)));
    }
    let spread = levels.windows(2).map(|w| (w[1].1 - w[0].1).abs()).fold(0.0, f64::max);
    let threshold = 10.0 * params.tol;
    if spread > threshold {
        return Err(HilbregError::Unstable { spread, threshold });
    }
    Ok(HilbertValue { value: levels.last().unwrap().1, levels, spread })
}

/// `∫_a^b f` with `s = m − h·cos φ`, which absorbs square-root behavior at both ends.
fn panel(gl: &GaussLegendre, a: f64, b: f64, f: &impl Fn(f64) -> f64) -> f64 {
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    gl.integrate(0.0, PI, |phi| f(m - h * phi.cos()) * h * phi.sin())
}

/// `|½cot(x/2) − (1/x + Σ_{1≤n≤N}[1/(x + 2πn) + 1/(x − 2πn)])|`.
pub fn cot_partial_fraction_residual(x: f64, n: usize) -> f64 {
    let tail: f64 = (1..=n).rev().map(|k| 2.0 * x / (x * x - (2.0 * PI * k as f64).powi(2))).sum();
    (0.5 / (0.5 * x).tan() - (1.0 / x + tail)).abs()
}

/// The one-sided truncation `1/x + Σ_{1≤n≤N}[1/(x + 2πn) − 1/(2πn)]`.
pub fn cot_one_sided_truncation(x: f64, n: usize) -> f64 {
    1.0 / x + (1..=n).rev().map(|k| 1.0 / (x + 2.0 * PI * k as f64) - 1.0 / (2.0 * PI * k as f64)).sum::<f64>()
}

/// `ε(2 − ε)/(2π(1 − ε))`.
pub fn conj_bound(eps: f64) -> f64 {
    eps * (2.0 - eps) / (2.0 * PI * (1.0 - eps))
}

/// `sup_{0<|θ|≤2πε} |2/θ − cot(θ/2)|`, attained at the end of the range (capped at `|θ| = π`).
pub fn kernel_bound(eps: f64) -> f64 {
    let t = (2.0 * PI * eps).min(PI);
    2.0 / t - 1.0 / (0.5 * t).tan()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointwiseCheck {
    pub epsilon: f64,
    pub max_deviation: f64,
    pub argmax: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Grid check of `|½cot(θ/2) − 1/θ| ≤ ε(2 − ε)/(2π(1 − ε))` on `0 < |θ| ≤ 2πε`.
pub fn cot_pointwise_check(eps: f64, grid_size: usize) -> Result<PointwiseCheck, HilbregError> {
    check_eps(eps)?;
    let top = (2.0 * PI * eps).min(PI * (1.0 - 1e-9));
    let (mut max_deviation, mut argmax) = (0.0f64, 0.0);
    for i in 1..=grid_size.max(1) {
        let th = top * i as f64 / grid_size.max(1) as f64;
        let d = (0.5 / (0.5 * th).tan() - 1.0 / th).abs();
        if d > max_deviation {
            max_deviation = d;
            argmax = th;
        }
    }
    let bound = conj_bound(eps);
    Ok(PointwiseCheck { epsilon: eps, max_deviation, argmax, bound, pass: max_deviation <= bound })
}

/// Hilbert transform `(1/π)·PV∫ ρ(t)/(x − t) dt` of the radius-`r` semicircle law, `2x/(πr²)`.
pub fn semicircle_hilbert(r: f64, x: f64) -> Result<f64, HilbregError> {
    if !(x.abs() < r) {
        return Err(HilbregError::OutsideSupport { x, r });
    }
    Ok(2.0 * x / (PI * r * r))
}

/// Comparison curve for `Hp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// `θ₁/(2π³ε²)` against `ε(2 − ε)/(2π(1 − ε))`.
    Stated,
    /// `−(1/π)·PV∫ p(θ₁ − θ)/θ dθ = −4θ₁/(π²ε²)` against [`kernel_bound`].
    SemicircleLimit,
}

impl Reference {
    pub fn value(self, eps: f64, theta1: f64) -> f64 {
        match self {
            Reference::Stated => theta1 / (2.0 * PI.powi(3) * eps * eps),
            Reference::SemicircleLimit => -4.0 * theta1 / (PI * PI * eps * eps),
        }
    }

    pub fn bound(self, eps: f64) -> f64 {
        match self {
            Reference::Stated => conj_bound(eps),
            Reference::SemicircleLimit => kernel_bound(eps),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HilbertRow {
    pub theta1: f64,
    #[serde(rename = "Hp")]
    pub hp: f64,
    pub reference: f64,
    pub deviation: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjBoundReport {
    pub epsilon: f64,
    pub reference: Reference,
    pub max_deviation: f64,
    pub bound: f64,
    /// Largest ladder spread over the grid.
    pub quad_error: f64,
    pub pass: bool,
    pub rows: Vec<HilbertRow>,
}

/// `max |Hp(e^{iθ₁}) − reference(θ₁)|` over `grid_size` equispaced `θ₁ ∈ [−πε, πε]`.
pub fn verify_conj_bound(params: &ArcDensityParams, grid_size: usize, reference: Reference) -> Result<ConjBoundReport, HilbregError> {
    params.validate()?;
    if grid_size < 2 {
        return Err(HilbregError::InvalidParams("grid_size must be at least 2".into()));
    }
    let eps = params.epsilon;
    let bound = reference.bound(eps);
    let values: Vec<(f64, HilbertValue)> = (0..grid_size)
        .into_par_iter()
        .map(|i| {
            let th = PI * eps * (-1.0 + 2.0 * i as f64 / (grid_size - 1) as f64);
            circular_hilbert(th, params).map(|v| (th, v))
        })
        .collect::<Result<_, _>>()?;
    let quad_error = values.iter().map(|(_, v)| v.spread).fold(0.0, f64::max);
    let rows: Vec<HilbertRow> = values
        .into_iter()
        .map(|(th, v)| {
            let r = reference.value(eps, th);
            HilbertRow { theta1: th, hp: v.value, reference: r, deviation: (v.value - r).abs(), bound }
        })
        .collect();
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(ConjBoundReport { epsilon: eps, reference, max_deviation, bound, quad_error, pass: max_deviation <= bound + quad_error, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
        let h = (b - a) / n as f64;
        (0..=n).map(|i| f(a + h * i as f64) * if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 }).sum::<f64>() * h / 3.0
    }

    #[test]
    fn density_values() {
        assert!((arc_density(0.5, 0.0) - 8.0 / PI).abs() < 1e-15);
        assert!((arc_density(0.5, 0.0) - 2.5465).abs() < 1e-4);
        assert_eq!(arc_density(0.25, 0.3 * PI), 0.0);
        assert_eq!(arc_density(0.25, -PI), 0.0);
    }

    #[test]
    fn density_mass_and_variance() {
        // θ = πε·cos φ turns both integrals into smooth trigonometric ones
        let gl = GaussLegendre::new(NonZeroUsize::new(64).unwrap());
        for eps in [0.05, 0.25, 0.5, 0.9] {
            let r = PI * eps;
            let moment = |k: i32| gl.integrate(0.0, PI, |phi| arc_density(eps, r * phi.cos()) * (r * phi.cos()).powi(k) * r * phi.sin()) / (2.0 * PI);
            assert!((moment(0) - 1.0).abs() < 1e-10);
            assert!((moment(2) - r * r / 4.0).abs() < 1e-8);
        }
    }

    #[test]
    fn hilbert_odd_and_zero_at_origin() {
        let p = ArcDensityParams::new(0.25);
        assert!(circular_hilbert(0.0, &p).unwrap().value.abs() <= 1e-8);
        for th in [0.1, 0.5, 0.7, 1.5] {
            let a = circular_hilbert(th, &p).unwrap();
            let b = circular_hilbert(-th, &p).unwrap();
            assert!((a.value + b.value).abs() <= 1e-10);
        }
    }

    #[test]
    fn ladder_self_consistent() {
        for eps in [0.05, 0.25, 0.75] {
            let p = ArcDensityParams::new(eps);
            for frac in [-0.8, -0.3, 0.1, 0.55, 0.9] {
                let v = circular_hilbert(frac * PI * eps, &p).unwrap();
                assert!(v.spread < 1e-9, "{eps} {frac} {}", v.spread);
            }
        }
        let mut p = ArcDensityParams::new(0.25);
        p.delta_ladder = vec![1e-3, 1e-2];
        assert!(p.validate().is_err());
    }

    #[test]
    fn hilbert_matches_direct_cot_oracle() {
        // independent oracle: truncate |θ| > δ, integrate p(θ₁ − θ)cot(θ/2) directly with composite
        // Simpson, and add back the analytic first-order contribution of (−δ, δ)
        let eps = 0.25;
        let th1 = 0.3 * PI * eps;
        let p = ArcDensityParams::new(eps);
        let delta = 1e-3;
        let g = |t: f64| arc_density(eps, th1 - t) / (0.5 * t).tan();
        let lo = th1 - PI * eps;
        let hi = th1 + PI * eps;
        // the support of θ ↦ p(θ₁ − θ) is [lo, hi]; use θ = c − R·cos φ on each side of the cutoff
        let sub = |a: f64, b: f64| {
            let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
            simpson(0.0, PI, 20000, |phi| g(m - h * phi.cos()) * h * phi.sin())
        };
        let trunc = sub(lo, -delta) + sub(delta, hi);
        let h = 1e-6;
        let dp = (arc_density(eps, th1 + h) - arc_density(eps, th1 - h)) / (2.0 * h);
        // ∫_{−δ}^{δ} p(θ₁ − θ)·2/θ dθ ≈ −4δ·p'(θ₁)
        let inner = -4.0 * delta * dp;
        let oracle = -(trunc + inner) / (2.0 * PI);
        let v = circular_hilbert(th1, &p).unwrap().value;
        assert!((v - oracle).abs() < 1e-5, "{v} vs {oracle}");
    }

    #[test]
    fn semicircle_limit_reference_is_close() {
        let p = ArcDensityParams::new(0.25);
        let th = 0.3 * PI * 0.25;
        let v = circular_hilbert(th, &p).unwrap().value;
        let r = Reference::SemicircleLimit;
        assert!((v - r.value(0.25, th)).abs() <= r.bound(0.25));
    }

    #[test]
    fn cot_residual_examples() {
        assert!(cot_partial_fraction_residual(PI, 10_000) <= 1e-4);
        assert!(cot_partial_fraction_residual(1e-3, 1000) <= 1e-3);
        let x = [0.3, 1.0, 2.5, 6.0];
        for &xi in &x {
            let mut prev = f64::INFINITY;
            for n in [1, 10, 100, 1000] {
                let r = cot_partial_fraction_residual(xi, n);
                assert!(r < prev);
                prev = r;
            }
        }
    }

    #[test]
    fn one_sided_expansion_is_not_odd() {
        let a = cot_one_sided_truncation(1.0, 100_000);
        let b = cot_one_sided_truncation(-1.0, 100_000);
        assert!(((a + b) - 0.009_909_17).abs() < 1e-6, "{}", a + b);
        assert!(((a - 0.5 / 0.5f64.tan()) - 0.047_332_91).abs() < 1e-6);
    }

    #[test]
    fn bound_arithmetic() {
        assert!((conj_bound(0.5) - 0.75 / PI).abs() < 1e-15);
        assert!((conj_bound(0.5) - 0.23873).abs() < 1e-5);
        assert!((conj_bound(0.25) - 0.4375 / (1.5 * PI)).abs() < 1e-15);
        assert!((conj_bound(0.25) - 0.09284).abs() < 1e-5);
    }

    #[test]
    fn pointwise_cot_bound_measured() {
        // the displayed inequality fails at the end of the range; frozen measurement
        let c = cot_pointwise_check(0.1, 2000).unwrap();
        assert!((c.max_deviation - 0.052_708).abs() < 1e-5, "{}", c.max_deviation);
        assert!((c.bound - 0.033_603).abs() < 1e-5);
        assert!(!c.pass);
        // the kernel bound used by the semicircle-limit reference does hold
        for eps in [0.05, 0.1, 0.25, 0.4] {
            let c = cot_pointwise_check(eps, 2000).unwrap();
            assert!(2.0 * c.max_deviation <= kernel_bound(eps) + 1e-12);
        }
    }

    #[test]
    fn semicircle_hilbert_against_pv_quadrature() {
        assert_eq!(semicircle_hilbert(1.0, 0.0).unwrap(), 0.0);
        assert!(semicircle_hilbert(1.0, 1.0).is_err());
        let gl = GaussLegendre::new(NonZeroUsize::new(200).unwrap());
        for (r, x) in [(1.0, 0.3), (PI * 0.25, 0.2), (2.0, -1.1)] {
            let rho = |t: f64| if t.abs() < r { 2.0 / (PI * r * r) * (r * r - t * t).sqrt() } else { 0.0 };
            // fold around x, then θ = cos substitution between breakpoints
            let mut pts = vec![0.0, r - x, r + x, 2.0 * r];
            pts.retain(|&s| (0.0..=2.0 * r).contains(&s));
            pts.sort_by(f64::total_cmp);
            let f = |s: f64| if s == 0.0 { 0.0 } else { (rho(x - s) - rho(x + s)) / s };
            let pv: f64 = pts.windows(2).map(|w| panel(&gl, w[0], w[1], &f)).sum::<f64>() / PI;
            assert!((pv - semicircle_hilbert(r, x).unwrap()).abs() < 1e-8, "{pv}");
        }
        // four times the instance value θ₁/(2π³ε²)
        let eps = 0.25;
        let th = 0.1;
        let stated = Reference::Stated.value(eps, th);
        assert!((semicircle_hilbert(PI * eps, th).unwrap() - 4.0 * stated).abs() < 1e-15);
    }

    #[test]
    fn diagnostic_deviation_shrinks_with_eps() {
        let mut prev = f64::INFINITY;
        for eps in [0.2, 0.1, 0.05] {
            let r = verify_conj_bound(&ArcDensityParams::new(eps), 21, Reference::SemicircleLimit).unwrap();
            assert!(r.pass && r.max_deviation < prev);
            prev = r.max_deviation;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn hilbert_is_odd(eps in 0.05f64..0.9, frac in -1.0f64..1.0) {
            let p = ArcDensityParams::new(eps);
            let th = frac * PI * eps;
            let a = circular_hilbert(th, &p).unwrap();
            let b = circular_hilbert(-th, &p).unwrap();
            prop_assert!((a.value + b.value).abs() <= 1e-9 + a.spread + b.spread);
        }

        #[test]
        fn density_even_and_bounded(eps in 0.01f64..0.99, th in -PI..PI) {
            prop_assert_eq!(arc_density(eps, th), arc_density(eps, -th));
            prop_assert!(arc_density(eps, th) <= 4.0 / (PI * eps) + 1e-12);
        }
    }
}
