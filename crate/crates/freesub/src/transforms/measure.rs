use super::TransformError;
use crate::freeprob::{AlgebraSpec, MomentData};
use crate::scalar::rat_to_f64;
use num::complex::Complex64;
use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_QUAD_NODES: usize = 2048;
pub const DEFAULT_CIRCLE_ORDER: usize = 64;
const MAX_QUAD_NODES: usize = 1 << 22;

/// Absolutely continuous part of a [`MeasureR`].
#[derive(Clone, Debug, PartialEq)]
pub enum Density {
    /// `2/(πr²)·√(r² − (t − c)²)`.
    Semicircle { center: f64, radius: f64 },
    /// `1/(π√((b − t)(t − a)))`.
    Arcsine { a: f64, b: f64 },
    /// Piecewise linear through `(x_i, v_i)`, normalized to mass 1.
    Grid { x: Vec<f64>, values: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
enum ReprR {
    Atoms(Vec<(f64, f64)>),
    Density { density: Density, nodes: usize, cached: Vec<(f64, f64)> },
}

/// Probability measure on the real line.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureR {
    repr: ReprR,
}

impl MeasureR {
    pub fn atoms(atoms: Vec<(f64, f64)>) -> Result<Self, TransformError> {
        if atoms.is_empty() || atoms.iter().any(|&(t, w)| !(w > 0.0) || !t.is_finite()) {
            return Err(TransformError::InvalidMeasure("atom weights must be positive and points finite".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(TransformError::InvalidMeasure(format!("atom weights sum to {total}")));
        }
        Ok(MeasureR { repr: ReprR::Atoms(atoms) })
    }

    pub fn dirac(t: f64) -> Self {
        MeasureR { repr: ReprR::Atoms(vec![(t, 1.0)]) }
    }

    /// `½(δ_{−a} + δ_a)`.
    pub fn bernoulli(a: f64) -> Self {
        MeasureR { repr: ReprR::Atoms(vec![(-a, 0.5), (a, 0.5)]) }
    }

    pub fn density(density: Density, nodes: usize) -> Result<Self, TransformError> {
        let density = match density {
            Density::Semicircle { radius, .. } if !(radius > 0.0) => {
                return Err(TransformError::InvalidMeasure("semicircle radius must be positive".into()))
            }
            Density::Arcsine { a, b } if !(b > a) => return Err(TransformError::InvalidMeasure("arcsine needs a < b".into())),
            Density::Grid { x, values } => normalize_grid(x, values)?,
            d => d,
        };
        if nodes < 2 {
            return Err(TransformError::InvalidMeasure("at least two quadrature nodes".into()));
        }
        let cached = quadrature(&density, nodes);
        Ok(MeasureR { repr: ReprR::Density { density, nodes, cached } })
    }

    /// Semicircle with the given center and variance.
    pub fn semicircle(center: f64, variance: f64) -> Self {
        Self::density(Density::Semicircle { center, radius: 2.0 * variance.sqrt() }, DEFAULT_QUAD_NODES).expect("positive variance")
    }

    pub fn arcsine(a: f64, b: f64) -> Self {
        Self::density(Density::Arcsine { a, b }, DEFAULT_QUAD_NODES).expect("a < b")
    }

    pub fn atom_list(&self) -> Option<&[(f64, f64)]> {
        match &self.repr {
            ReprR::Atoms(a) => Some(a),
            _ => None,
        }
    }

    pub fn density_kind(&self) -> Option<&Density> {
        match &self.repr {
            ReprR::Density { density, .. } => Some(density),
            _ => None,
        }
    }

    /// `(lo, hi)` containing the support.
    pub fn support(&self) -> (f64, f64) {
        match &self.repr {
            ReprR::Atoms(a) => a.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(t, _)| (lo.min(t), hi.max(t))),
            ReprR::Density { density, .. } => density_support(density),
        }
    }

    /// `max |t|` over the support.
    pub fn support_radius(&self) -> f64 {
        let (lo, hi) = self.support();
        lo.abs().max(hi.abs())
    }

    /// Weighted points `(t, w)` integrating `1/(z − t)` accurately for `Im z ≥ im`.
    pub fn nodes_for(&self, im: f64) -> std::borrow::Cow<'_, [(f64, f64)]> {
        match &self.repr {
            ReprR::Atoms(a) => std::borrow::Cow::Borrowed(a),
            ReprR::Density { density, nodes, cached } => {
                let (lo, hi) = density_support(density);
                let needed = (16.0 * (hi - lo) / im.max(1e-300)).ceil();
                if needed <= *nodes as f64 {
                    std::borrow::Cow::Borrowed(cached)
                } else {
                    std::borrow::Cow::Owned(quadrature(density, (needed as usize).min(MAX_QUAD_NODES)))
                }
            }
        }
    }

    /// Exact `G(z)` for piecewise-linear grid densities.
    pub(crate) fn grid_cauchy(&self, z: Complex64) -> Option<Complex64> {
        let ReprR::Density { density: Density::Grid { x, values }, .. } = &self.repr else {
            return None;
        };
        let mut g = Complex64::new(0.0, 0.0);
        for i in 0..x.len() - 1 {
            let (x0, x1) = (x[i], x[i + 1]);
            let beta = (values[i + 1] - values[i]) / (x1 - x0);
            let fz = Complex64::new(values[i], 0.0) + (z - x0) * beta;
            g += fz * ((z - x0).ln() - (z - x1).ln()) - beta * (x1 - x0);
        }
        Some(g)
    }

    /// One draw from the measure.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match &self.repr {
            ReprR::Atoms(a) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(t, w) in a {
                    acc += w;
                    if u < acc {
                        return t;
                    }
                }
                a.last().unwrap().0
            }
            ReprR::Density { density, .. } => match density {
                Density::Semicircle { center, radius } => {
                    let b: f64 = Beta::new(1.5, 1.5).unwrap().sample(rng);
                    center + radius * (2.0 * b - 1.0)
                }
                Density::Arcsine { a, b } => {
                    let u: f64 = rng.random();
                    a + (b - a) * (0.5 * PI * u).sin().powi(2)
                }
                Density::Grid { x, values } => {
                    let vmax = values.iter().cloned().fold(0.0, f64::max);
                    let (lo, hi) = (x[0], x[x.len() - 1]);
                    loop {
                        let t = lo + (hi - lo) * rng.random::<f64>();
                        if rng.random::<f64>() * vmax <= interp(x, values, t) {
                            return t;
                        }
                    }
                }
            },
        }
    }
}

fn density_support(d: &Density) -> (f64, f64) {
    match d {
        Density::Semicircle { center, radius } => (center - radius, center + radius),
        Density::Arcsine { a, b } => (*a, *b),
        Density::Grid { x, .. } => (x[0], x[x.len() - 1]),
    }
}

fn interp(x: &[f64], v: &[f64], t: f64) -> f64 {
    let i = x.partition_point(|&xi| xi <= t).clamp(1, x.len() - 1);
    let s = (t - x[i - 1]) / (x[i] - x[i - 1]);
    v[i - 1] + s * (v[i] - v[i - 1])
}

fn normalize_grid(x: Vec<f64>, values: Vec<f64>) -> Result<Density, TransformError> {
    if x.len() < 2 || x.len() != values.len() {
        return Err(TransformError::InvalidMeasure("grid needs at least two points and matching lengths".into()));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) || values.iter().any(|&v| !(v >= 0.0)) {
        return Err(TransformError::InvalidMeasure("grid must be increasing with nonnegative values".into()));
    }
    let mass: f64 = x.windows(2).zip(values.windows(2)).map(|(xs, vs)| 0.5 * (xs[1] - xs[0]) * (vs[0] + vs[1])).sum();
    if !(mass > 0.0) {
        return Err(TransformError::InvalidMeasure("grid density has zero mass".into()));
    }
    Ok(Density::Grid { x, values: values.into_iter().map(|v| v / mass).collect() })
}

/// Gauss–Chebyshev nodes matched to the endpoint behavior of each density.
fn quadrature(d: &Density, n: usize) -> Vec<(f64, f64)> {
    match d {
        Density::Semicircle { center, radius } => (1..=n)
            .map(|k| {
                let th = k as f64 * PI / (n + 1) as f64;
                (center + radius * th.cos(), 2.0 / (n + 1) as f64 * th.sin().powi(2))
            })
            .collect(),
        Density::Arcsine { a, b } => (1..=n)
            .map(|k| {
                let th = (2 * k - 1) as f64 * PI / (2 * n) as f64;
                (0.5 * (a + b) + 0.5 * (b - a) * th.cos(), 1.0 / n as f64)
            })
            .collect(),
        Density::Grid { x, values } => {
            // four-point Gauss–Legendre per linear piece
            let gl = [(-0.861_136_311_594_052_6, 0.347_854_845_137_453_9), (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1)];
            let pts: Vec<(f64, f64)> = gl.iter().flat_map(|&(s, w)| [(s, w), (-s, w)]).collect();
            let mut out = Vec::with_capacity(4 * (x.len() - 1));
            for i in 0..x.len() - 1 {
                let (x0, x1) = (x[i], x[i + 1]);
                for &(s, w) in &pts {
                    let t = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * s;
                    out.push((t, 0.5 * (x1 - x0) * w * interp(x, values, t)));
                }
            }
            out
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum ReprT {
    Atoms(Vec<(Complex64, f64)>),
    Haar,
    Moments,
    Density { values: Vec<f64> },
}

/// Probability measure on the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureT {
    /// `c_n = ∫ζ^n dμ` for `n = 1, …, N`.
    moments: Vec<Complex64>,
    repr: ReprT,
}

impl MeasureT {
    /// Atoms `(ζ, w)` with `|ζ| = 1`.
    pub fn atoms(atoms: Vec<(Complex64, f64)>) -> Result<Self, TransformError> {
        if atoms.is_empty() || atoms.iter().any(|&(z, w)| !(w > 0.0) || (z.norm() - 1.0).abs() > 1e-12) {
            return Err(TransformError::InvalidMeasure("circle atoms need positive weights and |ζ| = 1".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(TransformError::InvalidMeasure(format!("atom weights sum to {total}")));
        }
        let moments = (1..=DEFAULT_CIRCLE_ORDER as i32).map(|n| atoms.iter().map(|&(z, w)| z.powi(n) * w).sum()).collect();
        Ok(MeasureT { moments, repr: ReprT::Atoms(atoms) })
    }

    /// Atoms given by angle.
    pub fn angles(atoms: Vec<(f64, f64)>) -> Result<Self, TransformError> {
        Self::atoms(atoms.into_iter().map(|(th, w)| (Complex64::from_polar(1.0, th), w)).collect())
    }

    pub fn dirac_one() -> Self {
        Self::atoms(vec![(Complex64::new(1.0, 0.0), 1.0)]).unwrap()
    }

    pub fn haar() -> Self {
        MeasureT { moments: vec![Complex64::new(0.0, 0.0); DEFAULT_CIRCLE_ORDER], repr: ReprT::Haar }
    }

    /// Moment sequence `c_1, …, c_N`, checked by Toeplitz positivity.
    pub fn from_moments(moments: Vec<Complex64>) -> Result<Self, TransformError> {
        let n = moments.len() + 1;
        let c = |k: i64| -> Complex64 {
            match k {
                0 => Complex64::new(1.0, 0.0),
                k if k > 0 => moments[k as usize - 1],
                k => moments[(-k) as usize - 1].conj(),
            }
        };
        let t = crate::ncalg::CMatrix::from_fn(n, n, |i, j| c(j as i64 - i as i64));
        let min_eig = t.symmetric_eigenvalues().min();
        if min_eig < -1e-10 {
            return Err(TransformError::InvalidMeasure(format!("Toeplitz matrix not positive (eigenvalue {min_eig:e})")));
        }
        Ok(MeasureT { moments, repr: ReprT::Moments })
    }

    /// Density `p(θ)` on an equispaced grid `θ_j = −π + 2πj/M`, normalized so `(1/M)Σ p = 1`.
    pub fn from_density(values: Vec<f64>) -> Result<Self, TransformError> {
        let m = values.len();
        if m < 2 || values.iter().any(|&v| !(v >= 0.0)) {
            return Err(TransformError::InvalidMeasure("density grid needs nonnegative values".into()));
        }
        let mean = values.iter().sum::<f64>() / m as f64;
        if !(mean > 0.0) {
            return Err(TransformError::InvalidMeasure("density has zero mass".into()));
        }
        let values: Vec<f64> = values.into_iter().map(|v| v / mean).collect();
        let order = DEFAULT_CIRCLE_ORDER.min(m / 2);
        let moments = (1..=order as i32)
            .map(|n| {
                values.iter().enumerate().map(|(j, &p)| Complex64::from_polar(p / m as f64, n as f64 * grid_angle(j, m))).sum()
            })
            .collect();
        Ok(MeasureT { moments, repr: ReprT::Density { values } })
    }

    /// Exact circle-atom or moment data from an algebra spec.
    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self, TransformError> {
        match &spec.data {
            MomentData::CircleAtoms(a) => Self::atoms(a.iter().map(|(z, w)| (z.to_c64(), rat_to_f64(w))).collect()),
            MomentData::Circle(c) if c.iter().all(|x| x.is_zero()) => Ok(Self::haar()),
            MomentData::Circle(c) => Self::from_moments(c.iter().map(|x| x.to_c64()).collect()),
            _ => Err(TransformError::InvalidMeasure("spec is not a unitary law".into())),
        }
    }

    pub fn moments(&self) -> &[Complex64] {
        &self.moments
    }

    /// `c_n` for any integer `n` within the stored order.
    pub fn moment(&self, n: i64) -> Option<Complex64> {
        match n {
            0 => Some(Complex64::new(1.0, 0.0)),
            n if n > 0 => self.moments.get(n as usize - 1).copied(),
            n => self.moments.get((-n) as usize - 1).map(|c| c.conj()),
        }
    }

    pub fn first_moment(&self) -> Complex64 {
        self.moment(1).unwrap_or_default()
    }

    pub fn is_haar(&self) -> bool {
        matches!(self.repr, ReprT::Haar)
    }

    pub fn atom_list(&self) -> Option<&[(Complex64, f64)]> {
        match &self.repr {
            ReprT::Atoms(a) => Some(a),
            _ => None,
        }
    }

    pub(crate) fn density_values(&self) -> Option<&[f64]> {
        match &self.repr {
            ReprT::Density { values } => Some(values),
            _ => None,
        }
    }

    /// One draw; `None` when only moments are known.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Option<Complex64> {
        match &self.repr {
            ReprT::Atoms(a) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(z, w) in a {
                    acc += w;
                    if u < acc {
                        return Some(z);
                    }
                }
                Some(a.last().unwrap().0)
            }
            ReprT::Haar => Some(Complex64::from_polar(1.0, 2.0 * PI * rng.random::<f64>())),
            ReprT::Density { values } => {
                let m = values.len();
                let vmax = values.iter().cloned().fold(0.0, f64::max);
                loop {
                    let j = rng.random_range(0..m);
                    if rng.random::<f64>() * vmax <= values[j] {
                        let jitter = (rng.random::<f64>() - 0.5) * 2.0 * PI / m as f64;
                        return Some(Complex64::from_polar(1.0, grid_angle(j, m) + jitter));
                    }
                }
            }
            ReprT::Moments => None,
        }
    }
}

pub(crate) fn grid_angle(j: usize, m: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / m as f64
}

/// `{type: "atoms"|"density", …}` for measures on the line.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureRJson {
    Atoms {
        atoms: Vec<(f64, f64)>,
    },
    Density {
        density: DensityJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nodes: Option<usize>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DensityJson {
    pub support: (f64, f64),
    pub kind: DensityKindJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum DensityKindJson {
    Semicircle,
    Arcsine,
    Grid,
}

impl TryFrom<&MeasureRJson> for MeasureR {
    type Error = TransformError;
    fn try_from(j: &MeasureRJson) -> Result<Self, TransformError> {
        match j {
            MeasureRJson::Atoms { atoms } => MeasureR::atoms(atoms.clone()),
            MeasureRJson::Density { density, nodes } => {
                let (a, b) = density.support;
                let d = match density.kind {
                    DensityKindJson::Semicircle => Density::Semicircle { center: 0.5 * (a + b), radius: 0.5 * (b - a) },
                    DensityKindJson::Arcsine => Density::Arcsine { a, b },
                    DensityKindJson::Grid => match (&density.x, &density.values) {
                        (Some(x), Some(v)) => Density::Grid { x: x.clone(), values: v.clone() },
                        _ => return Err(TransformError::InvalidMeasure("grid density needs x and values".into())),
                    },
                };
                MeasureR::density(d, nodes.unwrap_or(DEFAULT_QUAD_NODES))
            }
        }
    }
}

/// Circle measure: angle atoms, explicit moments, Haar, or a density grid.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureTJson {
    Atoms { angles: Vec<(f64, f64)> },
    Moments { moments: Vec<(f64, f64)> },
    Haar {},
    Density { values: Vec<f64> },
}

impl TryFrom<&MeasureTJson> for MeasureT {
    type Error = TransformError;
    fn try_from(j: &MeasureTJson) -> Result<Self, TransformError> {
        match j {
            MeasureTJson::Atoms { angles } => MeasureT::angles(angles.clone()),
            MeasureTJson::Moments { moments } => MeasureT::from_moments(moments.iter().map(|&(re, im)| Complex64::new(re, im)).collect()),
            MeasureTJson::Haar {} => Ok(MeasureT::haar()),
            MeasureTJson::Density { values } => MeasureT::from_density(values.clone()),
        }
    }
}
