//! JSON run configurations, one document per command.

use crate::freeprob::{AlgebraSpec, AlgebraSpecJson};
use crate::ncalg::CMatrix;
use crate::rmt::{disk_grid, upper_grid, Law};
use crate::subord::SolverConfig;
use crate::suites::{AlgebraSuiteConfig, BoundsSuiteConfig, HilbertSuiteConfig};
use crate::transforms::{MeasureR, MeasureRJson, MeasureT, MeasureTJson};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverJson {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_damping")]
    pub damping: f64,
}

fn default_tol() -> f64 {
    1e-12
}

fn default_max_iter() -> usize {
    10_000
}

fn default_damping() -> f64 {
    1.0
}

impl Default for SolverJson {
    fn default() -> Self {
        SolverJson { tol: default_tol(), max_iter: default_max_iter(), damping: default_damping() }
    }
}

impl SolverJson {
    pub fn resolve(&self, tol: Option<f64>) -> Result<SolverConfig, String> {
        let cfg = SolverConfig { tol: tol.unwrap_or(self.tol), max_iter: self.max_iter, damping: self.damping };
        cfg.validate().map_err(|_| "solver needs tol > 0, max_iter ≥ 1 and damping in (0, 1]".to_string())?;
        Ok(cfg)
    }
}

/// `count` equispaced points on `[x_min, x_max] + i·im`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpperGridJson {
    pub x_min: f64,
    pub x_max: f64,
    pub count: usize,
    pub im: f64,
}

impl UpperGridJson {
    pub fn points(&self) -> Result<Vec<Complex64>, String> {
        if self.count < 2 || !(self.x_max > self.x_min) || !(self.im > 0.0) {
            return Err("grid needs count ≥ 2, x_max > x_min and im > 0".into());
        }
        Ok(upper_grid(self.x_min, self.x_max, self.count, self.im))
    }
}

/// `angles` equispaced points on each circle of radius in `radii`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskGridJson {
    pub radii: Vec<f64>,
    pub angles: usize,
}

impl DiskGridJson {
    pub fn points(&self) -> Result<Vec<Complex64>, String> {
        if self.radii.is_empty() || self.angles == 0 || self.radii.iter().any(|r| !(*r >= 0.0 && *r < 1.0)) {
            return Err("disk grid needs radii in [0, 1) and angles ≥ 1".into());
        }
        Ok(disk_grid(&self.radii, self.angles))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineGridJson {
    pub x_min: f64,
    pub x_max: f64,
    pub count: usize,
}

impl LineGridJson {
    pub fn points(&self) -> Result<Vec<f64>, String> {
        if self.count < 2 || !(self.x_max > self.x_min) {
            return Err("line grid needs count ≥ 2 and x_max > x_min".into());
        }
        Ok((0..self.count).map(|i| self.x_min + (self.x_max - self.x_min) * i as f64 / (self.count - 1) as f64).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvolveAddConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    pub mu: MeasureRJson,
    pub nu: MeasureRJson,
    pub grid: UpperGridJson,
    #[serde(default)]
    pub solver: SolverJson,
}

/// A law on the circle, either exact (enables the series solver) or floating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CircleLawJson {
    Exact(AlgebraSpecJson),
    Numeric(MeasureTJson),
}

impl CircleLawJson {
    pub fn measure(&self) -> Result<MeasureT, String> {
        match self {
            CircleLawJson::Exact(j) => MeasureT::from_spec(&self.spec(j)?).map_err(|e| e.to_string()),
            CircleLawJson::Numeric(j) => MeasureT::try_from(j).map_err(|e| e.to_string()),
        }
    }

    fn spec(&self, j: &AlgebraSpecJson) -> Result<AlgebraSpec, String> {
        AlgebraSpec::try_from(j).map_err(|e| e.to_string())
    }

    pub fn exact(&self) -> Result<Option<AlgebraSpec>, String> {
        match self {
            CircleLawJson::Exact(j) => self.spec(j).map(Some),
            CircleLawJson::Numeric(_) => Ok(None),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvolveMultConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    pub u: CircleLawJson,
    pub v: CircleLawJson,
    pub grid: DiskGridJson,
    #[serde(default)]
    pub solver: SolverJson,
    /// Order of the exact series cross-check when both laws are exact.
    #[serde(default = "default_series_order")]
    pub series_order: usize,
    #[serde(default = "default_series_tol")]
    pub series_tol: f64,
}

fn default_series_order() -> usize {
    8
}

fn default_series_tol() -> f64 {
    1e-6
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Cauchy,
    Psi,
    Inversion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    pub transform: TransformKind,
    /// Measure on the line, for `cauchy` and `inversion`.
    #[serde(default)]
    pub line: Option<MeasureRJson>,
    /// Measure on the circle, for `psi`.
    #[serde(default)]
    pub circle: Option<MeasureTJson>,
    #[serde(default)]
    pub grid: Option<UpperGridJson>,
    #[serde(default)]
    pub disk: Option<DiskGridJson>,
    /// Abscissae for `inversion`.
    #[serde(default)]
    pub x: Option<LineGridJson>,
    #[serde(default)]
    pub eta_ladder: Option<Vec<f64>>,
    /// Ladder stability tolerance for `inversion`.
    #[serde(default)]
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyAlgebraConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub suite: AlgebraSuiteConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyHilbertConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub suite: HilbertSuiteConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBoundsConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub suite: BoundsSuiteConfig,
}

/// Matrix model of one summand or factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum LawJson {
    Gue { variance: f64 },
    Haar {},
    Diagonal { measure: MeasureRJson },
    DiagonalUnitary { measure: MeasureTJson },
    Conjugated { inner: Box<LawJson> },
}

impl LawJson {
    pub fn law(&self) -> Result<Law, String> {
        Ok(match self {
            LawJson::Gue { variance } if *variance > 0.0 => Law::Gue { variance: *variance },
            LawJson::Gue { .. } => return Err("GUE variance must be positive".into()),
            LawJson::Haar {} => Law::HaarUnitary,
            LawJson::Diagonal { measure } => Law::Diagonal(MeasureR::try_from(measure).map_err(|e| e.to_string())?),
            LawJson::DiagonalUnitary { measure } => Law::DiagonalUnitary(MeasureT::try_from(measure).map_err(|e| e.to_string())?),
            LawJson::Conjugated { inner } => Law::HaarConjugated(Box::new(inner.law()?)),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RmtModel {
    Additive,
    Multiplicative,
    Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RmtValidateConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    pub model: RmtModel,
    pub n: usize,
    pub trials: usize,
    #[serde(default)]
    pub threads: Option<usize>,
    pub x: LawJson,
    pub y: LawJson,
    /// Evaluation points for `additive`.
    #[serde(default)]
    pub grid: Option<UpperGridJson>,
    /// Evaluation points for `multiplicative`.
    #[serde(default)]
    pub disk: Option<DiskGridJson>,
    /// `k×k` points `b` for `matrix`, as rows of `[re, im]` pairs.
    #[serde(default)]
    pub points: Option<Vec<Vec<Vec<(f64, f64)>>>>,
    #[serde(default)]
    pub solver: SolverJson,
    /// Acceptance bound on the sup error.
    pub tol: f64,
}

/// Square complex matrices from nested `[re, im]` rows.
pub fn matrices(points: &[Vec<Vec<(f64, f64)>>]) -> Result<Vec<CMatrix>, String> {
    points
        .iter()
        .map(|rows| {
            let k = rows.len();
            if k == 0 || rows.iter().any(|r| r.len() != k) {
                return Err("matrix points must be square and nonempty".to_string());
            }
            Ok(CMatrix::from_fn(k, k, |i, j| Complex64::new(rows[i][j].0, rows[i][j].1)))
        })
        .collect()
}
