use crate::scalar::Scalar;
use std::ops::Mul;

/// Dense square matrix with Gaussian-rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        QMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(QMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn diagonal(d: Vec<Scalar>) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { Scalar::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    /// Normalized trace `tr(M)/n`.
    pub fn normalized_trace(&self) -> Scalar {
        let s: Scalar = (0..self.n).map(|i| self.get(i, i).clone()).sum();
        &s / &Scalar::from_int(self.n as i64)
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn is_unitary(&self) -> bool {
        &self.adjoint() * self == Self::identity(self.n)
    }
}

impl Mul<&QMatrix> for &QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.n, o.n, "dimension mismatch");
        QMatrix::from_fn(self.n, |i, j| (0..self.n).map(|k| self.get(i, k) * o.get(k, j)).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_is_unitary() {
        let p = QMatrix::from_fn(3, |i, j| if (i + 1) % 3 == j { Scalar::one() } else { Scalar::zero() });
        assert!(p.is_unitary());
        assert!(!p.is_hermitian());
        assert_eq!(p.normalized_trace(), Scalar::zero());
        assert_eq!((&(&p * &p) * &p), QMatrix::identity(3));
    }
}
