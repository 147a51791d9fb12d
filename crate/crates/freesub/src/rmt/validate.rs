use super::sample::{conjugate, sample_haar_unitary, sample_law, stream_rng, Law};
use super::RmtError;
use crate::ncalg::{op_norm, CMatrix};
use crate::report::{Metric, Table, ValidationReport};
use crate::subord::{additive_subord, additive_subord_matrix, mult_unitary_subord, SolverConfig, SubordError};
use crate::transforms::HalfPlaneMatrix;
use faer::c64;
use num::complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; the global pool when absent.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<(), RmtError> {
        if self.n < 2 || self.trials < 1 || self.threads == Some(0) {
            return Err(RmtError::InvalidConfig(format!("need n ≥ 2, trials ≥ 1, threads ≥ 1 (got n = {}, trials = {})", self.n, self.trials)));
        }
        Ok(())
    }

    /// Runs `f` on every trial and returns the results in trial order.
    fn run_trials<T: Send>(&self, f: impl Fn(u64) -> Result<T, RmtError> + Sync + Send) -> Result<Vec<T>, RmtError> {
        self.validate()?;
        let work = || (0..self.trials as u64).into_par_iter().map(&f).collect::<Result<Vec<T>, RmtError>>();
        match self.threads {
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| RmtError::InvalidConfig(e.to_string()))?
                .install(work),
            None => work(),
        }
    }
}

/// `count` equispaced points on `[x_min, x_max] + i·im`.
pub fn upper_grid(x_min: f64, x_max: f64, count: usize, im: f64) -> Vec<Complex64> {
    (0..count).map(|i| Complex64::new(x_min + (x_max - x_min) * i as f64 / (count.max(2) - 1) as f64, im)).collect()
}

/// Polar grid `r·e^{2πij/angles}`.
pub fn disk_grid(radii: &[f64], angles: usize) -> Vec<Complex64> {
    radii
        .iter()
        .flat_map(|&r| (0..angles).map(move |j| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / angles as f64)))
        .collect()
}

/// Spectrum of `X + W·Y·W*` for one trial.
fn additive_spectrum(x: &Law, y: &Law, n: usize, seed: u64, trial: u64) -> Result<Vec<f64>, RmtError> {
    let a = sample_law(x, n, seed, trial, 0)?;
    let w = sample_haar_unitary(n, &mut stream_rng(seed, trial, 2));
    let b = conjugate(&w, y, n, seed, trial, 1)?;
    let h = &a + &b;
    h.self_adjoint_eigenvalues(faer::Side::Lower).map_err(|_| RmtError::Eigen)
}

fn mean_over_trials(per_trial: &[Vec<Complex64>]) -> Vec<Complex64> {
    let m = per_trial[0].len();
    let mut acc = vec![Complex64::new(0.0, 0.0); m];
    for row in per_trial {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    acc.into_iter().map(|a| a / per_trial.len() as f64).collect()
}

fn point_table(grid: &[Complex64], emp: &[Complex64], pred: &[Complex64]) -> (Table, f64) {
    let mut t = Table::new(&["re_z", "im_z", "re_empirical", "im_empirical", "re_predicted", "im_predicted", "error"]);
    let mut sup = 0.0f64;
    for ((z, e), p) in grid.iter().zip(emp).zip(pred) {
        let err = (e - p).norm();
        sup = sup.max(err);
        t.push(vec![z.re, z.im, e.re, e.im, p.re, p.im, err]);
    }
    (t, sup)
}

/// Averaged `tr_n (z − X − W·Y·W*)⁻¹` against `G_μ(ω₁(z))`.
pub fn validate_additive(
    x: &Law,
    y: &Law,
    ens: &EnsembleConfig,
    grid: &[Complex64],
    solver: &SolverConfig,
    tol: f64,
) -> Result<ValidationReport, RmtError> {
    let (mu, nu) = (x.measure_r()?, y.measure_r()?);
    if grid.is_empty() || grid.iter().any(|z| !(z.im > 0.0)) {
        return Err(RmtError::InvalidConfig("additive grid must be nonempty and in the upper half-plane".into()));
    }
    let per_trial = ens.run_trials(|t| {
        let spec = additive_spectrum(x, y, ens.n, ens.seed, t)?;
        Ok(grid.iter().map(|&z| spec.iter().map(|&l| 1.0 / (z - l)).sum::<Complex64>() / ens.n as f64).collect::<Vec<_>>())
    })?;
    let gate = per_trial.iter().flatten().all(|g| g.im <= 0.0);
    let emp = mean_over_trials(&per_trial);
    let mut residual = 0.0f64;
    let mut pred = Vec::with_capacity(grid.len());
    for &z in grid {
        let r = additive_subord(&mu, &nu, z, solver)?;
        residual = residual.max(r.residual);
        pred.push(r.value);
    }
    let (table, sup) = point_table(grid, &emp, &pred);
    let metrics = vec![
        Metric::at_most("sup_error", sup, tol),
        Metric::flag("empirical_in_lower_half_plane", gate),
        Metric::at_most("solver_residual", residual, solver.tol),
        Metric::info("n", ens.n.into()),
        Metric::info("trials", ens.trials.into()),
    ];
    Ok(ValidationReport::new(
        "rmt_additive",
        "free additive convolution: E(a + c)^{-1} = (a + F(a, c))^{-1}, trace shadow G_{X+Y}(z) = G_X(ω₁(z))",
        Some(ens.seed),
        metrics,
        Some(table),
    ))
}

/// Averaged `ψ` of the spectrum of `U·W·V·W*` against `ψ_U(ω(z))`, or against `0` in the degenerate case.
pub fn validate_multiplicative(
    u: &Law,
    v: &Law,
    ens: &EnsembleConfig,
    grid: &[Complex64],
    solver: &SolverConfig,
    tol: f64,
) -> Result<ValidationReport, RmtError> {
    let (mu_u, mu_v) = (u.measure_t()?, v.measure_t()?);
    if grid.is_empty() || grid.iter().any(|z| !(z.norm() < 1.0)) {
        return Err(RmtError::InvalidConfig("multiplicative grid must be nonempty and inside the unit disk".into()));
    }
    let per_trial = ens.run_trials(|t| {
        let a = sample_law(u, ens.n, ens.seed, t, 0)?;
        let w = sample_haar_unitary(ens.n, &mut stream_rng(ens.seed, t, 2));
        let b = conjugate(&w, v, ens.n, ens.seed, t, 1)?;
        let spec = (&a * &b).eigenvalues().map_err(|_| RmtError::Eigen)?;
        Ok(grid.iter().map(|&z| spec.iter().map(|&l| z * l / (1.0 - z * l)).sum::<c64>() / ens.n as f64).collect::<Vec<_>>())
    })?;
    let emp = mean_over_trials(&per_trial);
    let mut degenerate = false;
    let mut residual = 0.0f64;
    let mut bound_ok = true;
    let mut pred = Vec::with_capacity(grid.len());
    for &z in grid {
        match mult_unitary_subord(&mu_u, &mu_v, z, solver) {
            Ok(r) => {
                residual = residual.max(r.residual);
                bound_ok &= r.omega1.norm() <= z.norm() + 1e-12;
                pred.push(r.value);
            }
            Err(SubordError::Degenerate { psi }) => {
                degenerate = true;
                pred.push(psi);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let (table, sup) = point_table(grid, &emp, &pred);
    let metrics = vec![
        Metric::at_most(if degenerate { "sup_abs_psi" } else { "sup_error" }, sup, tol),
        Metric::flag("omega_in_disk", bound_ok),
        Metric::at_most("solver_residual", residual, solver.tol),
        Metric::info("degenerate", degenerate.into()),
        Metric::info("n", ens.n.into()),
        Metric::info("trials", ens.trials.into()),
    ];
    Ok(ValidationReport::new(
        "rmt_multiplicative",
        "free unitary product: E UVb(1 - UVb)^{-1} = UF(b)(1 - UF(b))^{-1} with ‖F(b)‖ ≤ ‖b‖, trace shadow ψ_{UV}(z) = ψ_U(ω(z))",
        Some(ens.seed),
        metrics,
        Some(table),
    ))
}

/// Averaged `(id ⊗ tr_n)(b ⊗ 1 − 1 ⊗ H)⁻¹` with `H = X + W·Y·W*` against the matrix fixed point.
pub fn validate_matrix_resolvent(
    x: &Law,
    y: &Law,
    ens: &EnsembleConfig,
    points: &[CMatrix],
    solver: &SolverConfig,
    tol: f64,
) -> Result<ValidationReport, RmtError> {
    let (mu, nu) = (x.measure_r()?, y.measure_r()?);
    let bs: Vec<HalfPlaneMatrix> = points.iter().cloned().map(HalfPlaneMatrix::new).collect::<Result<_, _>>()?;
    // conjugating the n-factor by the eigenvectors of H leaves the partial trace unchanged,
    // so the partial trace only needs the spectrum
    let per_trial = ens.run_trials(|t| {
        let spec = additive_spectrum(x, y, ens.n, ens.seed, t)?;
        let mut out = Vec::with_capacity(bs.len());
        for b in &bs {
            let k = b.value.nrows();
            let mut acc = CMatrix::zeros(k, k);
            for &l in &spec {
                let mut m = b.value.clone();
                for i in 0..k {
                    m[(i, i)] -= l;
                }
                acc += m.try_inverse().ok_or(RmtError::Eigen)?;
            }
            out.push(acc / Complex64::new(ens.n as f64, 0.0));
        }
        Ok(out)
    })?;
    let mut gate = true;
    let mut mean: Vec<CMatrix> = bs.iter().map(|b| CMatrix::zeros(b.value.nrows(), b.value.nrows())).collect();
    for row in &per_trial {
        for ((m, g), b) in mean.iter_mut().zip(row).zip(&bs) {
            gate &= op_norm(g) <= 1.0 / b.eps + 1e-12;
            *m += g;
        }
    }
    let mut table = Table::new(&["index", "eps", "error", "empirical_norm", "norm_bound"]);
    let mut sup = 0.0f64;
    let mut residual = 0.0f64;
    for (i, (m, b)) in mean.iter().zip(&bs).enumerate() {
        let emp = m / Complex64::new(ens.trials as f64, 0.0);
        let r = additive_subord_matrix(&mu, &nu, b, solver)?;
        residual = residual.max(r.residual);
        let err = op_norm(&(&emp - &r.value));
        sup = sup.max(err);
        table.push(vec![i as f64, b.eps, err, op_norm(&emp), 1.0 / b.eps]);
    }
    let metrics = vec![
        Metric::at_most("sup_error", sup, tol),
        Metric::flag("resolvent_norm_gate", gate),
        Metric::at_most("solver_residual", residual, solver.tol),
        Metric::info("n", ens.n.into()),
        Metric::info("trials", ens.trials.into()),
    ];
    Ok(ValidationReport::new(
        "rmt_matrix_resolvent",
        "matrix-argument subordination: E(b - X - Y)^{-1} = (b + n - X)^{-1}, with ‖T^{-1}‖ ≤ ε^{-1} for Im T ≥ ε",
        Some(ens.seed),
        metrics,
        Some(table),
    ))
}
