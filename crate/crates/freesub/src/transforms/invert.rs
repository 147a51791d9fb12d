use num::complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

pub const DEFAULT_ETA_LADDER: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// Smallest mass a Poisson-kernel spike must carry to be flagged as an atom.
pub const ATOM_MASS: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub eta: f64,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
    /// Grid points whose spike `πη·density` implies a point mass of at least [`ATOM_MASS`].
    pub atomic: Vec<f64>,
}

/// `density(x) ≈ −Im G(x + iη)/π`.
pub fn stieltjes_invert(x: &[f64], g: &[Complex64], eta: f64) -> DensityEstimate {
    assert!(eta > 0.0, "η must be positive");
    assert_eq!(x.len(), g.len());
    let density: Vec<f64> = g.iter().map(|v| -v.im / PI).collect();
    let atomic = x.iter().zip(&density).filter(|(_, &d)| PI * eta * d >= ATOM_MASS).map(|(&xi, _)| xi).collect();
    DensityEstimate { eta, x: x.to_vec(), density, atomic }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderEstimate {
    pub levels: Vec<DensityEstimate>,
    /// Richardson combination of the two finest levels, exact for errors linear in `η`.
    pub extrapolated: Vec<f64>,
    /// `max |ρ_finest − ρ_next|`.
    pub spread: f64,
    pub tol: f64,
    pub stable: bool,
    /// Points where the estimate grows like `1/η` down the ladder.
    pub atomic: Vec<f64>,
}

/// Inversion over a decreasing `η` ladder; unstable when consecutive levels differ by more than `10·tol`.
pub fn stieltjes_ladder<E>(
    x: &[f64],
    ladder: &[f64],
    tol: f64,
    mut g: impl FnMut(Complex64) -> Result<Complex64, E>,
) -> Result<LadderEstimate, E> {
    assert!(ladder.len() >= 2 && ladder.windows(2).all(|w| w[1] < w[0]), "ladder must decrease");
    let mut levels = Vec::with_capacity(ladder.len());
    for &eta in ladder {
        let gv = x.iter().map(|&xi| g(Complex64::new(xi, eta))).collect::<Result<Vec<_>, E>>()?;
        levels.push(stieltjes_invert(x, &gv, eta));
    }
    let (fine, coarse) = (&levels[levels.len() - 1], &levels[levels.len() - 2]);
    let ratio = fine.eta / (coarse.eta - fine.eta);
    let extrapolated = fine.density.iter().zip(&coarse.density).map(|(f, c)| f + (f - c) * ratio).collect();
    let spread = fine.density.iter().zip(&coarse.density).map(|(f, c)| (f - c).abs()).fold(0.0, f64::max);
    let growth = coarse.eta / fine.eta;
    let atomic = x
        .iter()
        .enumerate()
        .filter(|&(i, _)| fine.density[i] > 0.5 * growth * coarse.density[i] && PI * fine.eta * fine.density[i] >= 1e-3)
        .map(|(_, &xi)| xi)
        .collect();
    Ok(LadderEstimate { levels, extrapolated, spread, tol, stable: spread <= 10.0 * tol, atomic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{cauchy_G, MeasureR};
    use std::convert::Infallible;

    fn semicircle_g(z: Complex64) -> Complex64 {
        (z - (z - 2.0).sqrt() * (z + 2.0).sqrt()) / 2.0
    }

    #[test]
    fn semicircle_recovered() {
        let x: Vec<f64> = (0..=380).map(|i| -1.9 + 0.01 * i as f64).collect();
        let g: Vec<Complex64> = x.iter().map(|&t| semicircle_g(Complex64::new(t, 1e-3))).collect();
        let est = stieltjes_invert(&x, &g, 1e-3);
        let err = x.iter().zip(&est.density).map(|(t, d)| (d - (4.0 - t * t).sqrt() / (2.0 * PI)).abs()).fold(0.0, f64::max);
        assert!(err <= 5e-3, "{err}");
        assert!(est.atomic.is_empty());
    }

    #[test]
    fn point_mass_is_flagged() {
        let x = [-0.5, 0.0, 0.5];
        let mu = MeasureR::dirac(0.0);
        let lad = stieltjes_ladder(&x, &DEFAULT_ETA_LADDER, 1e-3, |z| cauchy_G(&mu, z)).unwrap();
        assert_eq!(lad.atomic, vec![0.0]);
        assert_eq!(lad.levels[2].atomic, vec![0.0]);
        assert!(!lad.stable);
    }

    #[test]
    fn ladder_round_trip() {
        let mu = MeasureR::semicircle(0.0, 1.0);
        let x: Vec<f64> = (0..=36).map(|i| -1.8 + 0.1 * i as f64).collect();
        let lad = stieltjes_ladder(&x, &DEFAULT_ETA_LADDER, 5e-3, |z| cauchy_G(&mu, z)).unwrap();
        assert!(lad.stable && lad.atomic.is_empty());
        let err = x.iter().zip(&lad.extrapolated).map(|(t, d)| (d - (4.0 - t * t).sqrt() / (2.0 * PI)).abs()).fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
        let ok: Result<_, Infallible> = stieltjes_ladder(&[0.0], &[0.1, 0.01], 1.0, |z| Ok(semicircle_g(z)));
        assert!(ok.unwrap().stable);
    }
}
