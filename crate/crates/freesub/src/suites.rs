//! Deterministic check suites behind `verify`, shared with the acceptance harness.

use crate::freeprob::{
    check_coalgebra_d, check_coalgebra_delta, check_d_equals_minus_delta, check_freeconj_pairing, liberation_pairing,
    AlgebraSpec, FreeState,
};
use crate::hilbreg::{cot_partial_fraction_residual, cot_pointwise_check, verify_conj_bound, ArcDensityParams, Reference};
use crate::ncalg::{
    iterate_derivation, op_norm, rho_direct, rho_series_eval, smooth_norm_bound_f64, verify_resolvent_series_d,
    verify_resolvent_series_delta, Assignment, CMatrix, Derivation, GenSymbol, NCPoly, NCWord, Tag, TensorPoly,
};
use crate::report::{Metric, Table, ValidationReport};
use crate::scalar::{rat_to_string, Rational, Scalar};
use crate::transforms::{disk_criterion, half_plane_bounds, im_part, min_hermitian_eigenvalue, HalfPlaneMatrix};
use num::complex::Complex64;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("invalid suite configuration: {0}")]
    Config(String),
    #[error("algebra: {0}")]
    Algebra(String),
    #[error(transparent)]
    Hilbert(#[from] crate::hilbreg::HilbregError),
    #[error(transparent)]
    Transform(#[from] crate::transforms::TransformError),
}

fn alg<E: std::fmt::Display>(e: E) -> SuiteError {
    SuiteError::Algebra(e.to_string())
}

const A: Tag = 0;
const B: Tag = 1;
const C: Tag = 1;
const U: Tag = 2;
const V: Tag = 3;
const X: Tag = 3;

fn d_default<const N: usize>() -> usize {
    N
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSuiteConfig {
    /// Randomized moment specifications and polynomial pairs.
    #[serde(default = "d_default::<100>")]
    pub specs: usize,
    /// Longest word checked exhaustively.
    #[serde(default = "d_default::<6>")]
    pub word_length: usize,
    /// Largest truncation order of the resolvent series.
    #[serde(default = "d_default::<8>")]
    pub resolvent_order: usize,
    /// Largest order of the higher Leibniz rule.
    #[serde(default = "d_default::<4>")]
    pub leibniz_order: usize,
    /// Specs on which the liberation pairing is checked exhaustively.
    #[serde(default = "d_default::<100>")]
    pub liberation_specs: usize,
    /// Random matrix assignments for the conjugation series.
    #[serde(default = "d_default::<100>")]
    pub series_cases: usize,
    #[serde(default = "d_default::<8>")]
    pub matrix_dim: usize,
    #[serde(default = "default_m_norm")]
    pub m_norm: f64,
}

fn default_m_norm() -> f64 {
    0.3
}

impl Default for AlgebraSuiteConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

impl AlgebraSuiteConfig {
    pub fn validate(&self) -> Result<(), SuiteError> {
        if self.specs == 0 || self.word_length == 0 || self.resolvent_order == 0 || self.leibniz_order == 0 {
            return Err(SuiteError::Config("specs, word_length, resolvent_order and leibniz_order must be positive".into()));
        }
        if self.matrix_dim == 0 || !(self.m_norm > 0.0 && self.m_norm < 1.0) {
            return Err(SuiteError::Config("matrix_dim must be positive and m_norm in (0, 1)".into()));
        }
        Ok(())
    }
}

/// `Σ |Re c| + |Im c|` over the coefficients, exactly.
pub fn exact_l1(t: &TensorPoly) -> Rational {
    t.terms().fold(Rational::zero(), |acc, (_, c)| acc + c.re.abs() + c.im.abs())
}

fn scalar_l1(s: &Scalar) -> Rational {
    s.re.abs() + s.im.abs()
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::complex((rng.random_range(-4..=4), rng.random_range(1..=3)), (rng.random_range(-2..=2), rng.random_range(1..=3)))
}

fn poly_alphabet() -> Vec<GenSymbol> {
    let b = GenSymbol::general(B);
    let u = GenSymbol::unitary(U);
    vec![GenSymbol::selfadjoint(A), b, b.star(), u, u.star(), GenSymbol::selfadjoint(X)]
}

fn random_poly(rng: &mut ChaCha8Rng, alphabet: &[GenSymbol], max_len: usize, max_terms: usize) -> NCPoly {
    let terms = rng.random_range(1..=max_terms);
    NCPoly::from_terms((0..terms).map(|_| {
        let len = rng.random_range(0..=max_len);
        let w = NCWord::from_letters((0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]));
        (w, random_scalar(rng))
    }))
}

/// Every word of length at most `max_len` over `alphabet`, shortest first.
pub fn all_words(alphabet: &[GenSymbol], max_len: usize) -> Vec<NCWord> {
    let mut out = vec![NCWord::empty()];
    let mut frontier: Vec<Vec<GenSymbol>> = vec![vec![]];
    for _ in 0..max_len {
        frontier = frontier.iter().flat_map(|w| alphabet.iter().map(move |&l| [w.clone(), vec![l]].concat())).collect();
        out.extend(frontier.iter().cloned().map(NCWord::from_letters));
    }
    out
}

/// Products of at most `max_len` pieces drawn from `a`, `c`, `u·a·u*`, `u·c·u*`.
fn conjugated_words(max_len: usize) -> Vec<NCWord> {
    let u = GenSymbol::unitary(U);
    let wrap = |core: GenSymbol| NCWord::from_letters([u, core, u.star()]);
    let (a, c) = (GenSymbol::selfadjoint(A), GenSymbol::selfadjoint(C));
    let pieces = [NCWord::letter(a), NCWord::letter(c), wrap(a), wrap(c)];
    let mut out = vec![NCWord::empty()];
    let mut frontier = vec![NCWord::empty()];
    for _ in 0..max_len {
        frontier = frontier.iter().flat_map(|w| pieces.iter().map(move |p| w.concat(p))).collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn derivations() -> [Derivation; 3] {
    [Derivation::delta([A]), Derivation::Unitary { u: U }, Derivation::DiffQuotient { x: X }]
}

fn leibniz_defect(d: &Derivation, f: &NCPoly, g: &NCPoly) -> Result<Rational, SuiteError> {
    let one = NCPoly::one();
    let lhs = d.apply(&(f * g)).map_err(alg)?;
    let left = &TensorPoly::simple(&[f, &one]) * &d.apply(g).map_err(alg)?;
    let right = &d.apply(f).map_err(alg)? * &TensorPoly::simple(&[&one, g]);
    Ok(exact_l1(&(&lhs - &(&left + &right))))
}

fn higher_leibniz_defect(d: &Derivation, p: usize, f: &NCPoly, g: &NCPoly) -> Result<Rational, SuiteError> {
    let lhs = iterate_derivation(d, p, &(f * g)).map_err(alg)?;
    let mut rhs = TensorPoly::zero(p + 1);
    for k in 0..=p {
        let df = iterate_derivation(d, k, f).map_err(alg)?.pad_right(p - k);
        let dg = iterate_derivation(d, p - k, g).map_err(alg)?.pad_left(k);
        rhs = &rhs + &(&df * &dg);
    }
    Ok(exact_l1(&(&lhs - &rhs)))
}

/// Selfadjoint `A`, `C` and unitary `U`, `V` with random atomic laws.
fn random_state(rng: &mut ChaCha8Rng) -> Result<FreeState, SuiteError> {
    FreeState::symbolic([
        AlgebraSpec::random_real(A, rng),
        AlgebraSpec::random_real(C, rng),
        AlgebraSpec::random_circle(U, rng),
        AlgebraSpec::random_circle(V, rng),
    ])
    .map_err(alg)
}

#[derive(Default)]
struct ExactTally {
    leibniz: Rational,
    higher_leibniz: Rational,
    unit: Rational,
    coalgebra_delta: Rational,
    coalgebra_d: Rational,
    freeconj: Rational,
    liberation: Rational,
    words: usize,
}

impl ExactTally {
    fn merge(mut self, o: ExactTally) -> Self {
        self.leibniz += o.leibniz;
        self.higher_leibniz += o.higher_leibniz;
        self.unit += o.unit;
        self.coalgebra_delta += o.coalgebra_delta;
        self.coalgebra_d += o.coalgebra_d;
        self.freeconj += o.freeconj;
        self.liberation += o.liberation;
        self.words += o.words;
        self
    }
}

fn spec_checks(cfg: &AlgebraSuiteConfig, seed: u64, index: usize) -> Result<ExactTally, SuiteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let alphabet = poly_alphabet();
    let mut t = ExactTally::default();
    let (f, g) = (random_poly(&mut rng, &alphabet, 5, 3), random_poly(&mut rng, &alphabet, 5, 3));
    let (fs, gs) = (random_poly(&mut rng, &alphabet, 3, 2), random_poly(&mut rng, &alphabet, 3, 2));
    for d in derivations() {
        t.leibniz += leibniz_defect(&d, &f, &g)?;
        for p in 1..=cfg.leibniz_order {
            t.higher_leibniz += higher_leibniz_defect(&d, p, &fs, &gs)?;
        }
        t.unit += exact_l1(&d.apply(&NCPoly::one()).map_err(alg)?);
    }

    let state = random_state(&mut rng)?;
    let (a, c) = (GenSymbol::selfadjoint(A), GenSymbol::selfadjoint(C));
    let (a_set, c_set) = (BTreeSet::from([A]), BTreeSet::from([C]));
    for w in all_words(&[a, c], cfg.word_length) {
        t.coalgebra_delta += exact_l1(&check_coalgebra_delta(&state, &a_set, &c_set, &w).map_err(alg)?);
        t.words += 1;
    }
    let uv = NCWord::from_letters([GenSymbol::unitary(U), GenSymbol::unitary(V)]);
    for w in std::iter::once(NCWord::empty()).chain(uv_words(&uv, cfg.word_length)) {
        t.coalgebra_d += exact_l1(&check_coalgebra_d(&state, U, V, &w).map_err(alg)?);
        t.words += 1;
    }
    let u = GenSymbol::unitary(U);
    let au = all_words(&[a, u, u.star()], cfg.word_length);
    for w in &au {
        t.freeconj += scalar_l1(&check_freeconj_pairing(&state, U, &a_set, w).map_err(alg)?);
        t.words += 1;
    }
    if index < cfg.liberation_specs {
        for w in &au {
            t.liberation += scalar_l1(&liberation_pairing(&state, &a_set, w).map_err(alg)?.value);
            t.words += 1;
        }
    }
    Ok(t)
}

/// Nonempty words in `uv` and `(uv)*` with at most `max_len` letters `u`, `v`.
fn uv_words(uv: &NCWord, max_len: usize) -> Vec<NCWord> {
    let pieces = [uv.clone(), uv.adjoint()];
    let mut out = Vec::new();
    let mut frontier = vec![NCWord::empty()];
    for _ in 0..max_len / 2 {
        frontier = frontier.iter().flat_map(|w| pieces.iter().map(move |p| w.concat(p))).collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    let s = scale / (2.0 * n as f64).sqrt();
    CMatrix::from_fn(n, n, |_, _| {
        let (re, im): (f64, f64) = (StandardNormal.sample(rng), StandardNormal.sample(rng));
        Complex64::new(s * re, s * im)
    })
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    let g = random_matrix(rng, n, scale);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

struct SeriesTally {
    max_excess: f64,
    max_error: f64,
    certified: usize,
    max_ratio: f64,
}

/// Conjugation series against direct evaluation, and submultiplicativity of the smooth-norm bound.
fn series_checks(cfg: &AlgebraSuiteConfig, seed: u64) -> Result<SeriesTally, SuiteError> {
    let n = cfg.matrix_dim;
    let split = BTreeSet::from([A]);
    let alphabet = poly_alphabet();
    let rows: Vec<(f64, f64, bool, f64)> = (0..cfg.series_cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((1 << 32) | i as u64);
            let mut asg = Assignment::new();
            asg.insert(A, random_hermitian(&mut rng, n, 1.0)).map_err(alg)?;
            asg.insert(B, random_matrix(&mut rng, n, 1.0)).map_err(alg)?;
            asg.insert(U, random_matrix(&mut rng, n, 1.0).qr().q()).map_err(alg)?;
            asg.insert(X, random_hermitian(&mut rng, n, 1.0)).map_err(alg)?;
            let raw = random_matrix(&mut rng, n, 1.0);
            let radius = cfg.m_norm * rng.random_range(0.1..=1.0);
            let m = &raw * Complex64::new(radius / op_norm(&raw), 0.0);
            let f = random_poly(&mut rng, &alphabet, 3, 3);
            let series = rho_series_eval(&f, &split, &m, &asg, 80).map_err(alg)?;
            let direct = rho_direct(&f, &split, &m, &asg).map_err(alg)?;
            let err = op_norm(&(&series.value - &direct));
            let allowed = series.tail_bound.unwrap_or(0.0).max(1e-10);

            let r = 0.05;
            let norms = asg.norms();
            let (g, h) = (random_poly(&mut rng, &alphabet, 3, 3), random_poly(&mut rng, &alphabet, 3, 3));
            let bound = |p: &NCPoly| -> Result<f64, SuiteError> {
                smooth_norm_bound_f64(p, r, &split, &norms).map_err(alg)?.value().ok_or_else(|| SuiteError::Algebra("smooth-norm series diverges".into()))
            };
            let (bg, bh) = (bound(&g)?, bound(&h)?);
            let ratio = if bg * bh == 0.0 { 0.0 } else { bound(&(&g * &h))? / (bg * bh) };
            Ok((err - allowed, err, series.tail_bound.is_some(), ratio))
        })
        .collect::<Result<_, SuiteError>>()?;
    Ok(SeriesTally {
        max_excess: rows.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max),
        max_error: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        certified: rows.iter().filter(|r| r.2).count(),
        max_ratio: rows.iter().map(|r| r.3).fold(0.0, f64::max),
    })
}

fn zero_metric(name: &str, r: &Rational) -> Metric {
    Metric::exact(name, rat_to_string(r), r.is_zero())
}

/// Exact derivation identities, coalgebra morphisms, free pairings and the conjugation series.
pub fn algebra_suite(cfg: &AlgebraSuiteConfig, seed: u64) -> Result<ValidationReport, SuiteError> {
    cfg.validate()?;
    let tallies: Vec<ExactTally> = (0..cfg.specs).into_par_iter().map(|i| spec_checks(cfg, seed, i)).collect::<Result<_, _>>()?;
    let t = tallies.into_iter().fold(ExactTally::default(), ExactTally::merge);

    let mut resolvent_d = Rational::zero();
    let mut resolvent_delta = Rational::zero();
    for k in 1..=cfg.resolvent_order {
        resolvent_d += exact_l1(&verify_resolvent_series_d(U, B, k).map_err(alg)?);
        resolvent_delta += exact_l1(&verify_resolvent_series_delta(&BTreeSet::from([A]), A, k));
    }
    let mut d_minus_delta = Rational::zero();
    let conj = conjugated_words(cfg.word_length);
    for w in &conj {
        d_minus_delta += exact_l1(&check_d_equals_minus_delta(U, &BTreeSet::from([A, C]), w).map_err(alg)?);
    }
    let s = series_checks(cfg, seed)?;

    let metrics = vec![
        zero_metric("leibniz_residual", &t.leibniz),
        zero_metric("higher_leibniz_residual", &t.higher_leibniz),
        zero_metric("derivation_of_one", &t.unit),
        zero_metric("resolvent_series_d_residual", &resolvent_d),
        zero_metric("resolvent_series_delta_residual", &resolvent_delta),
        zero_metric("d_plus_delta_conjugated_residual", &d_minus_delta),
        zero_metric("coalgebra_delta_residual", &t.coalgebra_delta),
        zero_metric("coalgebra_d_residual", &t.coalgebra_d),
        zero_metric("freeconj_pairing_residual", &t.freeconj),
        zero_metric("liberation_pairing_residual", &t.liberation),
        Metric::at_most("series_excess_over_tolerance", s.max_excess, 0.0),
        Metric::info("series_max_error", serde_json::json!(s.max_error)),
        Metric::info("series_certified_tails", serde_json::json!(s.certified)),
        Metric::at_most("smooth_norm_submultiplicativity_ratio", s.max_ratio, 1.0 + 1e-12),
        Metric::info("specs", serde_json::json!(cfg.specs)),
        Metric::info("words_checked", serde_json::json!(t.words + conj.len())),
    ];
    Ok(ValidationReport::new(
        "algebra",
        "Leibniz rules for the liberation, unitary and difference-quotient derivations; resolvent expansions; \
         d = -delta on conjugated algebras; conditional expectations as coalgebra morphisms; vanishing liberation \
         and conjugate pairings on free families; conjugation series and smooth-norm submultiplicativity",
        Some(seed),
        metrics,
        None,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HilbertSuiteConfig {
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    #[serde(default = "d_default::<41>")]
    pub grid_size: usize,
    #[serde(default = "d_default::<128>")]
    pub quad_points: usize,
    #[serde(default = "default_ladder")]
    pub delta_ladder: Vec<f64>,
    /// Largest acceptable spread across the ladder.
    #[serde(default = "default_ladder_tol")]
    pub ladder_tol: f64,
}

fn default_epsilons() -> Vec<f64> {
    vec![0.05, 0.1, 0.25, 0.5, 0.75]
}

fn default_ladder() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4]
}

fn default_ladder_tol() -> f64 {
    1e-6
}

impl Default for HilbertSuiteConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

impl HilbertSuiteConfig {
    fn params(&self, eps: f64) -> ArcDensityParams {
        // the ladder threshold inside `circular_hilbert` is 10·tol
        ArcDensityParams { epsilon: eps, quad_points: self.quad_points, delta_ladder: self.delta_ladder.clone(), tol: self.ladder_tol / 10.0 }
    }
}

/// Circular Hilbert transform of the arc density against the stated linear profile, with diagnostics.
pub fn hilbert_suite(cfg: &HilbertSuiteConfig) -> Result<ValidationReport, SuiteError> {
    if cfg.epsilons.is_empty() {
        return Err(SuiteError::Config("epsilons must be nonempty".into()));
    }
    let mut metrics = Vec::new();
    let mut table = Table::new(&["epsilon", "theta1", "Hp", "reference", "deviation", "bound"]);
    let mut spread = 0.0f64;
    for &eps in &cfg.epsilons {
        let p = cfg.params(eps);
        let stated = verify_conj_bound(&p, cfg.grid_size, Reference::Stated)?;
        spread = spread.max(stated.quad_error);
        metrics.push(Metric::at_most(format!("max_deviation[eps={eps}]"), stated.max_deviation, stated.bound + stated.quad_error));
        for r in &stated.rows {
            table.push(vec![eps, r.theta1, r.hp, r.reference, r.deviation, r.bound]);
        }
    }
    metrics.push(Metric::at_most("ladder_spread", spread, cfg.ladder_tol));
    for &eps in &cfg.epsilons {
        let c = cot_pointwise_check(eps, 2000)?;
        metrics.push(Metric::at_most(format!("pointwise_cot_deviation[eps={eps}]"), c.max_deviation, c.bound));
    }
    for &eps in &cfg.epsilons {
        let diag = verify_conj_bound(&cfg.params(eps), cfg.grid_size, Reference::SemicircleLimit)?;
        metrics.push(Metric::at_most(format!("semicircle_limit_deviation[eps={eps}]"), diag.max_deviation, diag.bound + diag.quad_error));
    }
    let xs = [0.3, 1.0, 2.5, 6.0];
    let monotone = xs.iter().all(|&x| {
        let r: Vec<f64> = [1, 10, 100, 1000].iter().map(|&n| cot_partial_fraction_residual(x, n)).collect();
        r.windows(2).all(|w| w[1] < w[0])
    });
    metrics.push(Metric::flag("cot_partial_fraction_residual_decreasing", monotone));
    metrics.push(Metric::at_most("cot_partial_fraction_residual[x=pi,N=10000]", cot_partial_fraction_residual(PI, 10_000), 1e-4));
    Ok(ValidationReport::new(
        "hilbert",
        "circular Hilbert transform of the arc law of exp(i pi eps S) against theta/(2 pi^3 eps^2) within \
         eps(2-eps)/(2 pi (1-eps)), with the cotangent estimates it rests on",
        None,
        metrics,
        Some(table),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSuiteConfig {
    #[serde(default = "d_default::<200>")]
    pub count: usize,
    #[serde(default = "d_default::<4>")]
    pub max_dim: usize,
    #[serde(default = "default_bounds_tol")]
    pub tol: f64,
}

fn default_bounds_tol() -> f64 {
    1e-10
}

impl Default for BoundsSuiteConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

/// Inverse bounds on the matrix upper half-plane and the two characterizations of the unit ball.
pub fn bounds_suite(cfg: &BoundsSuiteConfig, seed: u64) -> Result<ValidationReport, SuiteError> {
    if cfg.count == 0 || cfg.max_dim == 0 || !(cfg.tol >= 0.0) {
        return Err(SuiteError::Config("count and max_dim must be positive, tol nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(&["dim", "eps", "inv_norm", "inv_norm_bound", "im_inv_max", "im_inv_bound", "disk_norm", "disk_margin"]);
    let (mut inv_excess, mut im_excess) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let (mut held, mut agreed) = (0usize, 0usize);
    for _ in 0..cfg.count {
        let k = rng.random_range(1..=cfg.max_dim);
        let scale = rng.random_range(0.2..=4.0);
        let y = random_matrix(&mut rng, k, scale);
        let lift = rng.random_range(0.05..=2.0) - min_hermitian_eigenvalue(&im_part(&y));
        let t = HalfPlaneMatrix::new(&y + CMatrix::identity(k, k) * Complex64::new(0.0, lift))?;
        let hb = half_plane_bounds(&t)?;
        inv_excess = inv_excess.max(hb.inv_norm - hb.inv_norm_bound);
        im_excess = im_excess.max(hb.im_inv_max - hb.im_inv_bound);
        held += hb.holds(cfg.tol) as usize;

        let raw = random_matrix(&mut rng, k, 1.0);
        let target = rng.random_range(0.3..=1.7);
        let x = &raw * Complex64::new(target / op_norm(&raw), 0.0);
        let d = disk_criterion(&x);
        agreed += d.agree() as usize;
        table.push(vec![k as f64, hb.eps, hb.inv_norm, hb.inv_norm_bound, hb.im_inv_max, hb.im_inv_bound, d.norm, d.margin.unwrap_or(f64::NAN)]);
    }
    let metrics = vec![
        Metric::at_most("inverse_norm_excess", inv_excess, cfg.tol),
        Metric::at_most("im_inverse_excess", im_excess, cfg.tol),
        Metric::exact("half_plane_bounds_held", format!("{held}/{}", cfg.count), held == cfg.count),
        Metric::exact("disk_criteria_agreed", format!("{agreed}/{}", cfg.count), agreed == cfg.count),
    ];
    Ok(ValidationReport::new(
        "bounds",
        "for Im T >= eps: ||T^-1|| <= 1/eps and Im T^-1 <= -(eps + ||T||^2/eps)^-1; ||x|| < 1 iff \
         2 Re(1-x)^-1 >= (1+eps) for some eps > 0",
        Some(seed),
        metrics,
        Some(table),
    ))
}
