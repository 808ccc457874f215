use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-9;

/// A validated density matrix (Hermitian, unit trace, positive semidefinite).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {dim}x{dim} entries, got {}",
                entries.len()
            )));
        }
        let m = Self { dim, entries };
        for r in 0..dim {
            for c in r..dim {
                if (m.get(r, c) - m.get(c, r).conj()).norm() > T::tol(HERMITIAN_TOL) {
                    return Err(Error::Domain(format!("not Hermitian at ({r}, {c})")));
                }
            }
        }
        let trace = (0..dim).fold(T::zero(), |acc, i| acc + m.get(i, i).re);
        if (trace - T::one()).abs() > T::tol(TRACE_TOL) {
            return Err(Error::Domain(format!("trace {trace} is not 1")));
        }
        let smallest = m
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if smallest < -PSD_TOL.max(T::tol(PSD_TOL).to_f64().unwrap_or(PSD_TOL)) {
            return Err(Error::Domain(format!(
                "not positive semidefinite (eigenvalue {smallest:e})"
            )));
        }
        Ok(m)
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(amplitudes: &[Complex<T>]) -> Result<Self> {
        let d = amplitudes.len();
        let mut entries = Vec::with_capacity(d * d);
        for a in amplitudes {
            for b in amplitudes {
                entries.push(*a * b.conj());
            }
        }
        Self::new(d, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i).re)
    }

    /// Eigenvalues, computed in double precision.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.dim, |r, c| self.get(r, c))
    }
}

fn hermitian_eigenvalues<T: Real>(dim: usize, entry: impl Fn(usize, usize) -> Complex<T>) -> Vec<f64> {
    let m = DMatrix::from_fn(dim, dim, |r, c| {
        let z = entry(r, c);
        Complex::new(
            z.re.to_f64().unwrap_or(f64::NAN),
            z.im.to_f64().unwrap_or(f64::NAN),
        )
    });
    m.symmetric_eigenvalues().iter().copied().collect()
}

/// `½‖a − b‖₁`, from the eigenvalues of `a − b`.
pub fn trace_distance<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    if a.dim != b.dim {
        return Err(Error::Dimension(format!(
            "trace distance between dimensions {} and {}",
            a.dim, b.dim
        )));
    }
    let eig = hermitian_eigenvalues(a.dim, |r, c| a.get(r, c) - b.get(r, c));
    let d = 0.5 * eig.iter().map(|x| x.abs()).sum::<f64>();
    Ok(T::lit(d.min(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn identical_states_are_at_distance_zero() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&[c(h), Complex::new(0.0, h)]).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-15);
    }

    #[test]
    fn orthogonal_states_are_at_distance_one() {
        let a = DensityMatrix::pure(&[c(1.0), c(0.0)]).unwrap();
        let b = DensityMatrix::pure(&[c(0.0), c(1.0)]).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_versus_plus() {
        // a − b = [[1/2, −1/2], [−1/2, −1/2]] has eigenvalues ±1/√2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = DensityMatrix::pure(&[c(1.0), c(0.0)]).unwrap();
        let b = DensityMatrix::pure(&[c(h), c(h)]).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - h).abs() < 1e-9);
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert!(DensityMatrix::new(2, vec![c(0.5), c(0.1), c(0.2), c(0.5)]).is_err());
        assert!(DensityMatrix::new(2, vec![c(0.7), c(0.0), c(0.0), c(0.7)]).is_err());
        assert!(DensityMatrix::new(2, vec![c(1.5), c(0.0), c(0.0), c(-0.5)]).is_err());
        let a = DensityMatrix::pure(&[c(1.0)]).unwrap();
        let b = DensityMatrix::pure(&[c(1.0), c(0.0)]).unwrap();
        assert!(trace_distance(&a, &b).is_err());
    }
}
