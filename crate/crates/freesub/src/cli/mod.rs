//! Command-line front end: config parsing, command dispatch and report emission.

pub mod config;

use crate::freeprob::{AlgebraSpec, FreeState};
use crate::ncalg::{CMatrix, GenSymbol, NCWord};
use crate::report::{Metric, Table, ValidationReport};
use crate::rmt::{validate_additive, validate_matrix_resolvent, validate_multiplicative, EnsembleConfig, RmtError};
use crate::subord::{additive_subord, mult_series_subord, mult_unitary_subord, taylor_coefficients, SubordError, SubordResult};
use crate::suites::{algebra_suite, bounds_suite, hilbert_suite, SuiteError};
use crate::transforms::{cauchy_G, psi_scalar, stieltjes_ladder, MeasureR, MeasureT, DEFAULT_ETA_LADDER};
use clap::{Parser, Subcommand, ValueEnum};
use config::*;
use num::complex::Complex64;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_FAILED: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "freesub", version, about = "Subordination solvers, exact algebra checks and random-matrix validation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// RNG seed; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Solver tolerance; overrides the config.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Additive subordination over a grid in the upper half-plane.
    ConvolveAdd,
    /// Multiplicative subordination over a grid in the unit disk.
    ConvolveMult,
    /// Cauchy transform, ψ-transform or Stieltjes inversion of one measure.
    Transform,
    /// Deterministic check suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Monte Carlo comparison of matrix models with the solvers.
    RmtValidate,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Hilbert,
    Bounds,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Command {
    /// Stem of the output file.
    pub fn name(&self) -> &'static str {
        match self {
            Command::ConvolveAdd => "convolve-add",
            Command::ConvolveMult => "convolve-mult",
            Command::Transform => "transform",
            Command::Verify { suite: Suite::Algebra } => "verify-algebra",
            Command::Verify { suite: Suite::Hilbert } => "verify-hilbert",
            Command::Verify { suite: Suite::Bounds } => "verify-bounds",
            Command::RmtValidate => "rmt-validate",
        }
    }

    pub const ALL: [Command; 7] = [
        Command::ConvolveAdd,
        Command::ConvolveMult,
        Command::Transform,
        Command::Verify { suite: Suite::Algebra },
        Command::Verify { suite: Suite::Hilbert },
        Command::Verify { suite: Suite::Bounds },
        Command::RmtValidate,
    ];

    /// Inverse of [`Command::name`].
    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("internal: {0}")]
    Internal(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Internal(_) => EXIT_FAILED,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn cfg_err(e: impl ToString) -> CliError {
    CliError::Config(e.to_string())
}

fn internal(e: impl ToString) -> CliError {
    CliError::Internal(e.to_string())
}

/// A finished command: its report and whether any solve stopped short.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: ValidationReport,
    pub nonconverged: bool,
}

impl Outcome {
    fn done(report: ValidationReport) -> Self {
        Outcome { report, nonconverged: false }
    }

    pub fn exit_code(&self) -> i32 {
        if self.nonconverged {
            EXIT_NONCONVERGENCE
        } else if self.report.pass {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

fn load<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(cfg_err)
}

fn seed_of(flag: Option<u64>, config: Option<u64>) -> Result<u64, CliError> {
    flag.or(config).ok_or_else(|| CliError::Config("seed is required in the config or via --seed".into()))
}

/// Reads the config file and runs `command`.
pub fn execute(command: Command, config: &Path, seed: Option<u64>, tol: Option<f64>) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(config).map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
    execute_json(command, &text, seed, tol).map_err(|e| match e {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", config.display())),
        other => other,
    })
}

/// Runs `command` on a config given as JSON text.
pub fn execute_json(command: Command, config: &str, seed: Option<u64>, tol: Option<f64>) -> Result<Outcome, CliError> {
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(CliError::Config("--tol must be positive".into()));
        }
    }
    match command {
        Command::ConvolveAdd => {
            let c: ConvolveAddConfig = load(config)?;
            convolve_add(&c, seed_of(seed, c.seed)?, tol)
        }
        Command::ConvolveMult => {
            let c: ConvolveMultConfig = load(config)?;
            convolve_mult(&c, seed_of(seed, c.seed)?, tol)
        }
        Command::Transform => {
            let c: TransformConfig = load(config)?;
            transform(&c, seed_of(seed, c.seed)?, tol)
        }
        Command::Verify { suite: Suite::Algebra } => {
            let c: VerifyAlgebraConfig = load(config)?;
            let s = seed_of(seed, c.seed)?;
            c.suite.validate().map_err(cfg_err)?;
            algebra_suite(&c.suite, s).map(Outcome::done).map_err(suite_err)
        }
        Command::Verify { suite: Suite::Hilbert } => {
            let c: VerifyHilbertConfig = load(config)?;
            seed_of(seed, c.seed)?;
            hilbert_suite(&c.suite).map(Outcome::done).map_err(suite_err)
        }
        Command::Verify { suite: Suite::Bounds } => {
            let c: VerifyBoundsConfig = load(config)?;
            bounds_suite(&c.suite, seed_of(seed, c.seed)?).map(Outcome::done).map_err(suite_err)
        }
        Command::RmtValidate => {
            let c: RmtValidateConfig = load(config)?;
            rmt_validate(&c, seed_of(seed, c.seed)?, tol)
        }
    }
}

fn suite_err(e: SuiteError) -> CliError {
    match e {
        SuiteError::Config(_) | SuiteError::Hilbert(crate::hilbreg::HilbregError::InvalidEpsilon(_) | crate::hilbreg::HilbregError::InvalidParams(_)) => {
            cfg_err(e)
        }
        _ => internal(e),
    }
}

fn measure_r(j: &crate::transforms::MeasureRJson) -> Result<MeasureR, CliError> {
    MeasureR::try_from(j).map_err(cfg_err)
}

/// Per-point solve that keeps the last iterate on non-convergence.
fn solve_grid(
    grid: &[Complex64],
    f: impl Fn(Complex64) -> Result<SubordResult, SubordError> + Sync,
) -> Result<Vec<(SubordResult, bool)>, CliError> {
    grid.par_iter()
        .map(|&z| match f(z) {
            Ok(r) => Ok((r, true)),
            Err(SubordError::NonConvergence { last, .. }) => Ok((*last, false)),
            Err(e) => Err(internal(e)),
        })
        .collect()
}

pub fn convolve_add(c: &ConvolveAddConfig, seed: u64, tol: Option<f64>) -> Result<Outcome, CliError> {
    let (mu, nu) = (measure_r(&c.mu)?, measure_r(&c.nu)?);
    let solver = c.solver.resolve(tol).map_err(CliError::Config)?;
    let grid = c.grid.points().map_err(CliError::Config)?;
    let rows = solve_grid(&grid, |z| additive_subord(&mu, &nu, z, &solver))?;
    let mut table = Table::new(&["re_z", "im_z", "re_omega1", "im_omega1", "re_omega2", "im_omega2", "re_G", "im_G", "residual", "iterations"]);
    let mut im_ok = true;
    for (r, _) in &rows {
        im_ok &= r.omega1.im >= r.point.im - 1e-12 && r.omega2.im >= r.point.im - 1e-12;
        table.push(vec![r.point.re, r.point.im, r.omega1.re, r.omega1.im, r.omega2.re, r.omega2.im, r.value.re, r.value.im, r.residual, r.iterations as f64]);
    }
    let converged = rows.iter().all(|r| r.1);
    let max_residual = rows.iter().map(|r| r.0.residual).fold(0.0, f64::max);
    let report = ValidationReport::new(
        "convolve_add",
        "G of the free additive convolution equals G_mu(omega1) = G_nu(omega2) with omega1 + omega2 = z + 1/G and Im omega >= Im z",
        Some(seed),
        vec![
            Metric::flag("converged", converged),
            Metric::flag("im_omega_at_least_im_z", im_ok),
            Metric::info("max_residual", serde_json::json!(max_residual)),
            Metric::info("points", serde_json::json!(grid.len())),
        ],
        Some(table),
    );
    Ok(Outcome { report, nonconverged: !converged })
}

pub fn convolve_mult(c: &ConvolveMultConfig, seed: u64, tol: Option<f64>) -> Result<Outcome, CliError> {
    let (mu_u, mu_v) = (c.u.measure().map_err(CliError::Config)?, c.v.measure().map_err(CliError::Config)?);
    let solver = c.solver.resolve(tol).map_err(CliError::Config)?;
    let grid = c.grid.points().map_err(CliError::Config)?;
    let degenerate = matches!(mult_unitary_subord(&mu_u, &mu_v, Complex64::new(0.0, 0.0), &solver), Err(SubordError::Degenerate { .. }));
    let mut table = Table::new(&["re_z", "im_z", "re_omega", "im_omega", "re_psi", "im_psi", "residual", "iterations"]);
    let mut metrics = Vec::new();
    let mut converged = true;
    if degenerate {
        // ψ of the product vanishes identically; ω is not determined by traces
        for &z in &grid {
            table.push(vec![z.re, z.im, f64::NAN, f64::NAN, 0.0, 0.0, 0.0, 0.0]);
        }
        metrics.push(Metric::info("degenerate", serde_json::Value::Bool(true)));
        let exact = (c.u.exact().map_err(CliError::Config)?, c.v.exact().map_err(CliError::Config)?);
        if let (Some(su), Some(sv)) = exact {
            let l1 = product_moments_l1(su, sv, c.series_order.max(1)).map_err(internal)?;
            metrics.push(Metric::exact("product_moments_l1", crate::scalar::rat_to_string(&l1), l1 == crate::scalar::Rational::default()));
        }
    } else {
        let rows = solve_grid(&grid, |z| mult_unitary_subord(&mu_u, &mu_v, z, &solver))?;
        let mut in_disk = true;
        for (r, _) in &rows {
            in_disk &= r.omega1.norm() <= r.point.norm() + 1e-12;
            table.push(vec![r.point.re, r.point.im, r.omega1.re, r.omega1.im, r.value.re, r.value.im, r.residual, r.iterations as f64]);
        }
        converged = rows.iter().all(|r| r.1);
        metrics.push(Metric::info("degenerate", serde_json::Value::Bool(false)));
        metrics.push(Metric::flag("converged", converged));
        metrics.push(Metric::flag("omega_norm_at_most_z_norm", in_disk));
        metrics.push(Metric::info("max_residual", serde_json::json!(rows.iter().map(|r| r.0.residual).fold(0.0, f64::max))));
        let exact = (c.u.exact().map_err(CliError::Config)?, c.v.exact().map_err(CliError::Config)?);
        if let (Some(su), Some(sv)) = exact {
            if c.series_order > 0 {
                let series = mult_series_subord(&su, &sv, c.series_order).map_err(internal)?;
                let numeric = taylor_coefficients(0.5, 64.max(4 * c.series_order), c.series_order, |z| {
                    mult_unitary_subord(&mu_u, &mu_v, z, &solver).map(|r| r.omega1)
                })
                .map_err(internal)?;
                let gap = series.iter().zip(&numeric[1..]).map(|(a, t)| (a.to_c64() - t).norm()).fold(0.0, f64::max);
                metrics.push(Metric::at_most("series_vs_fixed_point_taylor", gap, c.series_tol));
                metrics.push(Metric::info("series_coefficients", serde_json::json!(series.iter().map(|a| a.to_pair()).collect::<Vec<_>>())));
            }
        }
    }
    metrics.push(Metric::info("points", serde_json::json!(grid.len())));
    let report = ValidationReport::new(
        "convolve_mult",
        "psi of the free multiplicative convolution of unitaries equals psi_U(omega(z)) with |omega(z)| <= |z|",
        Some(seed),
        metrics,
        Some(table),
    );
    Ok(Outcome { report, nonconverged: !converged })
}

/// `Σ_{1≤n≤N} |τ((UV)ⁿ)|₁` in the free product of the two exact laws.
fn product_moments_l1(mut su: AlgebraSpec, mut sv: AlgebraSpec, order: usize) -> Result<crate::scalar::Rational, crate::freeprob::FpError> {
    su.tag = 0;
    sv.tag = 1;
    let state = FreeState::symbolic([su, sv])?;
    let uv = NCWord::from_letters([GenSymbol::unitary(0), GenSymbol::unitary(1)]);
    let mut total = crate::scalar::Rational::default();
    for n in 1..=order {
        let m = state.tau_word(&uv.pow(n))?;
        total += num::Signed::abs(&m.re) + num::Signed::abs(&m.im);
    }
    Ok(total)
}

pub fn transform(c: &TransformConfig, seed: u64, tol: Option<f64>) -> Result<Outcome, CliError> {
    let missing = |what: &str| CliError::Config(format!("transform {:?} requires `{what}`", c.transform));
    match c.transform {
        TransformKind::Cauchy => {
            let mu = measure_r(c.line.as_ref().ok_or_else(|| missing("line"))?)?;
            let grid = c.grid.as_ref().ok_or_else(|| missing("grid"))?.points().map_err(CliError::Config)?;
            let mut table = Table::new(&["re_z", "im_z", "re_G", "im_G"]);
            let mut lower = true;
            for z in grid {
                let g = cauchy_G(&mu, z).map_err(internal)?;
                lower &= g.im <= 0.0;
                table.push(vec![z.re, z.im, g.re, g.im]);
            }
            let report = ValidationReport::new(
                "transform_cauchy",
                "Cauchy transform G(z) = integral of 1/(z - t), mapping the upper half-plane to the lower",
                Some(seed),
                vec![Metric::flag("maps_to_lower_half_plane", lower)],
                Some(table),
            );
            Ok(Outcome::done(report))
        }
        TransformKind::Psi => {
            let mu = MeasureT::try_from(c.circle.as_ref().ok_or_else(|| missing("circle"))?).map_err(cfg_err)?;
            let grid = c.disk.as_ref().ok_or_else(|| missing("disk"))?.points().map_err(CliError::Config)?;
            let mut table = Table::new(&["re_z", "im_z", "re_psi", "im_psi", "tail_bound"]);
            let mut half_plane = true;
            for z in grid {
                let p = psi_scalar(&mu, z).map_err(internal)?;
                half_plane &= 1.0 + 2.0 * p.value.re >= -1e-12;
                table.push(vec![z.re, z.im, p.value.re, p.value.im, p.tail_bound]);
            }
            let report = ValidationReport::new(
                "transform_psi",
                "psi(z) = sum over n >= 1 of m_n z^n for a law on the circle, with Re(1 + 2 psi) >= 0 in the disk",
                Some(seed),
                vec![Metric::flag("re_one_plus_two_psi_nonnegative", half_plane)],
                Some(table),
            );
            Ok(Outcome::done(report))
        }
        TransformKind::Inversion => {
            let mu = measure_r(c.line.as_ref().ok_or_else(|| missing("line"))?)?;
            let x = c.x.as_ref().ok_or_else(|| missing("x"))?.points().map_err(CliError::Config)?;
            let ladder = c.eta_ladder.clone().unwrap_or_else(|| DEFAULT_ETA_LADDER.to_vec());
            if ladder.len() < 2 || ladder.iter().any(|e| !(*e > 0.0)) || ladder.windows(2).any(|w| w[1] >= w[0]) {
                return Err(CliError::Config("eta_ladder must be positive, decreasing, with at least two levels".into()));
            }
            let tol = tol.or(c.tol).unwrap_or(1e-3);
            let est = stieltjes_ladder(&x, &ladder, tol, |z| cauchy_G(&mu, z)).map_err(internal)?;
            let mut cols: Vec<String> = vec!["x".into(), "density".into()];
            cols.extend(ladder.iter().map(|e| format!("density_eta_{e}")));
            let col_refs: Vec<&str> = cols.iter().map(|s| s.as_str()).collect();
            let mut table = Table::new(&col_refs);
            for (i, &xi) in x.iter().enumerate() {
                let mut row = vec![xi, est.extrapolated[i]];
                row.extend(est.levels.iter().map(|l| l.density[i]));
                table.push(row);
            }
            let report = ValidationReport::new(
                "transform_inversion",
                "Stieltjes inversion -Im G(x + i eta)/pi, extrapolated in eta, with atoms flagged",
                Some(seed),
                vec![
                    Metric::at_most("ladder_spread", est.spread, 10.0 * est.tol),
                    Metric::info("atoms_at", serde_json::json!(est.atomic)),
                ],
                Some(table),
            );
            Ok(Outcome::done(report))
        }
    }
}

fn rmt_err(e: RmtError) -> CliError {
    match e {
        RmtError::InvalidConfig(_) | RmtError::WrongLaw(_) => cfg_err(e),
        RmtError::Transform(crate::transforms::TransformError::NotInHalfPlane) => cfg_err(e),
        _ => internal(e),
    }
}

pub fn rmt_validate(c: &RmtValidateConfig, seed: u64, tol: Option<f64>) -> Result<Outcome, CliError> {
    let (x, y) = (c.x.law().map_err(CliError::Config)?, c.y.law().map_err(CliError::Config)?);
    let solver = c.solver.resolve(tol).map_err(CliError::Config)?;
    let ens = EnsembleConfig { n: c.n, trials: c.trials, seed, threads: c.threads };
    ens.validate().map_err(rmt_err)?;
    if !(c.tol > 0.0) {
        return Err(CliError::Config("tol must be positive".into()));
    }
    let need = |what: &str| CliError::Config(format!("model {:?} requires `{what}`", c.model));
    let report = match c.model {
        RmtModel::Additive => {
            let grid = c.grid.as_ref().ok_or_else(|| need("grid"))?.points().map_err(CliError::Config)?;
            validate_additive(&x, &y, &ens, &grid, &solver, c.tol)
        }
        RmtModel::Multiplicative => {
            let grid = c.disk.as_ref().ok_or_else(|| need("disk"))?.points().map_err(CliError::Config)?;
            validate_multiplicative(&x, &y, &ens, &grid, &solver, c.tol)
        }
        RmtModel::Matrix => {
            let pts: Vec<CMatrix> = matrices(c.points.as_ref().ok_or_else(|| need("points"))?).map_err(CliError::Config)?;
            validate_matrix_resolvent(&x, &y, &ens, &pts, &solver, c.tol)
        }
    };
    match report {
        Ok(r) => Ok(Outcome::done(r)),
        Err(RmtError::Subord(SubordError::NonConvergence { .. } | SubordError::MatrixNonConvergence { .. })) => {
            let r = ValidationReport::new(
                format!("rmt_{:?}", c.model).to_lowercase(),
                "empirical resolvents of asymptotically free matrix models against the subordination solution",
                Some(seed),
                vec![Metric::flag("converged", false)],
                None,
            );
            Ok(Outcome { report: r, nonconverged: true })
        }
        Err(e) => Err(rmt_err(e)),
    }
}

/// Serialized report: pretty JSON, or the table as CSV (the metrics when there is no table).
pub fn render(report: &ValidationReport, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => Ok(report.to_json().into_bytes()),
        Format::Csv => {
            let mut buf = Vec::new();
            match &report.table {
                Some(t) => t.write_csv(&mut buf).map_err(|e| CliError::Io(e.to_string()))?,
                None => {
                    let mut w = csv::Writer::from_writer(&mut buf);
                    w.write_record(["name", "value", "bound", "pass"]).map_err(|e| CliError::Io(e.to_string()))?;
                    for m in &report.metrics {
                        let value = match &m.value {
                            serde_json::Value::String(s) => s.clone(),
                            v => v.to_string(),
                        };
                        let bound = m.bound.map(|b| ryu::Buffer::new().format(b).to_string()).unwrap_or_default();
                        w.write_record([m.name.as_str(), &value, &bound, if m.pass { "true" } else { "false" }])
                            .map_err(|e| CliError::Io(e.to_string()))?;
                    }
                    w.flush().map_err(|e| CliError::Io(e.to_string()))?;
                }
            }
            Ok(buf)
        }
    }
}

/// Writes `<command>.<ext>` under `out`, or to stdout.
pub fn emit(bytes: &[u8], command: Command, format: Format, out: Option<&Path>) -> Result<Option<PathBuf>, CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            let ext = match format {
                Format::Json => "json",
                Format::Csv => "csv",
            };
            let path = dir.join(format!("{}.{ext}", command.name()));
            std::fs::write(&path, bytes).map_err(io)?;
            Ok(Some(path))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(io)?;
            stdout.flush().map_err(io)?;
            Ok(None)
        }
    }
}

/// Entry point returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let Some(config) = cli.config.as_deref() else {
        eprintln!("error: --config is required");
        return EXIT_CONFIG;
    };
    let outcome = match execute(cli.command, config, cli.seed, cli.tol) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = render(&outcome.report, cli.format).and_then(|b| emit(&b, cli.command, cli.format, cli.out.as_deref()));
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    let code = outcome.exit_code();
    match code {
        EXIT_NONCONVERGENCE => eprintln!("{}: solver did not converge at every point", outcome.report.check_name),
        EXIT_FAILED => {
            let failed: Vec<&str> = outcome.report.metrics.iter().filter(|m| !m.pass).map(|m| m.name.as_str()).collect();
            eprintln!("{}: failed checks: {}", outcome.report.check_name, failed.join(", "));
        }
        _ => {}
    }
    code
}
