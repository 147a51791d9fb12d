use super::RmtError;
use crate::transforms::{MeasureR, MeasureT};
use faer::{c64, Mat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Independent stream for draw `draw` of trial `trial`.
pub fn stream_rng(seed: u64, trial: u64, draw: u8) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((trial << 8) | draw as u64);
    rng
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// GUE with `E|H_ij|² = 1/n`, so the spectrum tends to the standard semicircle.
pub fn sample_gue(n: usize, rng: &mut ChaCha8Rng) -> Mat<c64> {
    let s = (1.0 / n as f64).sqrt();
    let off = (0.5 / n as f64).sqrt();
    let mut h = Mat::<c64>::zeros(n, n);
    for j in 0..n {
        h[(j, j)] = c64::new(s * normal(rng), 0.0);
        for i in j + 1..n {
            let z = c64::new(off * normal(rng), off * normal(rng));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// QR of a complex Ginibre matrix with the phases of `diag R` moved into `Q`.
pub fn sample_haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> Mat<c64> {
    let s = 0.5f64.sqrt();
    let mut z = Mat::<c64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            z[(i, j)] = c64::new(s * normal(rng), s * normal(rng));
        }
    }
    let qr = z.qr();
    let r = qr.R();
    let mut q = qr.compute_Q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Matrix realization of a law.
#[derive(Clone, Debug)]
pub enum Law {
    Gue { variance: f64 },
    HaarUnitary,
    /// I.i.d. diagonal entries drawn from a real law.
    Diagonal(MeasureR),
    /// I.i.d. diagonal entries drawn from a law on the circle.
    DiagonalUnitary(MeasureT),
    HaarConjugated(Box<Law>),
}

impl Law {
    pub fn is_hermitian(&self) -> bool {
        match self {
            Law::Gue { .. } | Law::Diagonal(_) => true,
            Law::HaarUnitary | Law::DiagonalUnitary(_) => false,
            Law::HaarConjugated(inner) => inner.is_hermitian(),
        }
    }

    /// Limiting spectral law of a selfadjoint model.
    pub fn measure_r(&self) -> Result<MeasureR, RmtError> {
        match self {
            Law::Gue { variance } => Ok(MeasureR::semicircle(0.0, *variance)),
            Law::Diagonal(m) => Ok(m.clone()),
            Law::HaarConjugated(inner) => inner.measure_r(),
            _ => Err(RmtError::WrongLaw("selfadjoint")),
        }
    }

    /// Limiting spectral law of a unitary model.
    pub fn measure_t(&self) -> Result<MeasureT, RmtError> {
        match self {
            Law::HaarUnitary => Ok(MeasureT::haar()),
            Law::DiagonalUnitary(m) => Ok(m.clone()),
            Law::HaarConjugated(inner) => inner.measure_t(),
            _ => Err(RmtError::WrongLaw("unitary")),
        }
    }

    /// Diagonal entries when the model is diagonal before any conjugation.
    fn diagonal(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Option<Vec<c64>>, RmtError> {
        match self {
            Law::Diagonal(m) => Ok(Some((0..n).map(|_| c64::new(m.sample(rng), 0.0)).collect())),
            Law::DiagonalUnitary(m) => {
                let d: Option<Vec<c64>> = (0..n).map(|_| m.sample(rng)).collect();
                d.map(Some).ok_or(RmtError::WrongLaw("sampleable"))
            }
            _ => Ok(None),
        }
    }
}

/// One draw of `law`; a conjugation consumes a second stream `draw + 128`.
pub fn sample_law(law: &Law, n: usize, seed: u64, trial: u64, draw: u8) -> Result<Mat<c64>, RmtError> {
    let mut rng = stream_rng(seed, trial, draw);
    Ok(match law {
        Law::Gue { variance } => sample_gue(n, &mut rng) * faer::Scale(c64::new(variance.sqrt(), 0.0)),
        Law::HaarUnitary => sample_haar_unitary(n, &mut rng),
        Law::Diagonal(_) | Law::DiagonalUnitary(_) => {
            let d = law.diagonal(n, &mut rng)?.expect("diagonal law");
            Mat::from_fn(n, n, |i, j| if i == j { d[i] } else { c64::new(0.0, 0.0) })
        }
        Law::HaarConjugated(inner) => {
            let w = sample_haar_unitary(n, &mut stream_rng(seed, trial, draw.wrapping_add(128)));
            conjugate(&w, inner, n, seed, trial, draw)?
        }
    })
}

/// `W·Y·W*`, using a column scaling when `Y` is diagonal.
pub(super) fn conjugate(w: &Mat<c64>, inner: &Law, n: usize, seed: u64, trial: u64, draw: u8) -> Result<Mat<c64>, RmtError> {
    let mut rng = stream_rng(seed, trial, draw);
    if let Some(d) = inner.diagonal(n, &mut rng)? {
        let scaled = Mat::from_fn(n, n, |i, j| w[(i, j)] * d[j]);
        return Ok(&scaled * w.adjoint());
    }
    let y = sample_law(inner, n, seed, trial, draw)?;
    Ok(w * &y * w.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_power(m: &Mat<c64>, k: usize) -> c64 {
        let n = m.nrows();
        let mut p = m.clone();
        for _ in 1..k {
            p = &p * m;
        }
        (0..n).map(|i| p[(i, i)]).sum::<c64>() / n as f64
    }

    #[test]
    fn gue_moments() {
        let h = sample_gue(512, &mut stream_rng(1, 0, 0));
        for i in 0..512 {
            for j in 0..512 {
                assert!((h[(i, j)] - h[(j, i)].conj()).norm() <= 1e-14);
            }
        }
        assert!((trace_power(&h, 2).re - 1.0).abs() <= 0.1);
        assert!((trace_power(&h, 4).re - 2.0).abs() <= 0.3);
    }

    #[test]
    fn haar_unitary_properties() {
        let n = 512;
        let u = sample_haar_unitary(n, &mut stream_rng(2, 0, 0));
        let e = u.adjoint() * &u - Mat::<c64>::identity(n, n);
        assert!(e.norm_max() <= 1e-12 * n as f64 / 8.0);
        for k in 1..=4 {
            assert!(trace_power(&u, k).norm() <= 5.0 / (n as f64).sqrt());
        }
        let small = sample_haar_unitary(64, &mut stream_rng(2, 1, 0));
        for l in small.eigenvalues().unwrap() {
            assert!((l.norm() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = sample_gue(8, &mut stream_rng(5, 3, 1));
        let b = sample_gue(8, &mut stream_rng(5, 3, 1));
        let c = sample_gue(8, &mut stream_rng(5, 3, 2));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn conjugated_diagonal_keeps_spectrum() {
        let law = Law::HaarConjugated(Box::new(Law::Diagonal(MeasureR::bernoulli(1.0))));
        let m = sample_law(&law, 32, 9, 0, 1).unwrap();
        let mut ev = m.self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
        ev.sort_by(f64::total_cmp);
        assert!(ev.iter().all(|l| (l.abs() - 1.0).abs() < 1e-12));
    }
}
