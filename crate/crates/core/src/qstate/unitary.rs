use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Entrywise tolerance for the unitarity check on construction.
pub const UNITARITY_TOL: f64 = 1e-10;

/// A square matrix verified to satisfy `U†U = I`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix<T: Real> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> UnitaryMatrix<T> {
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {dim}x{dim} entries, got {}",
                entries.len()
            )));
        }
        let m = Self { dim, entries };
        let deviation = m.unitarity_deviation();
        if !(deviation <= T::tol(UNITARITY_TOL)) {
            return Err(Error::NotUnitary {
                deviation: deviation.to_f64().unwrap_or(f64::INFINITY),
            });
        }
        Ok(m)
    }

    /// Builds the permutation matrix sending basis state `j` to `perm(j)`.
    pub fn from_permutation(dim: usize, perm: impl Fn(usize) -> usize) -> Result<Self> {
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for col in 0..dim {
            let row = perm(col);
            if row >= dim {
                return Err(Error::NotBijective { dim });
            }
            entries[row * dim + col] = Complex::new(T::one(), T::zero());
        }
        Self::new(dim, entries).map_err(|_| Error::NotBijective { dim })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        Self { dim, entries }
    }

    pub fn hadamard() -> Self {
        let s = T::FRAC_1_SQRT_2();
        let c = |x: T| Complex::new(x, T::zero());
        Self {
            dim: 2,
            entries: vec![c(s), c(s), c(s), c(-s)],
        }
    }

    pub fn pauli_x() -> Self {
        Self::from_permutation(2, |j| 1 - j).expect("pauli x")
    }

    /// Controlled-X on (control ⊗ target), control as the slower index.
    pub fn cnot() -> Self {
        Self::from_permutation(4, |j| if j >= 2 { j ^ 1 } else { j }).expect("cnot")
    }

    /// `[[cos θ, −sin θ], [sin θ, cos θ]]`.
    pub fn rotation(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let r = |x: T| Complex::new(x, T::zero());
        Self {
            dim: 2,
            entries: vec![r(c), r(-s), r(s), r(c)],
        }
    }

    /// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ R(θ)` with `R(θ) = [[cos θ, −sin θ], [sin θ, cos θ]]`.
    ///
    /// θ = 0 is the identity and θ = π/2 acts as a controlled-X on a target in `|0⟩`.
    pub fn controlled_rotation(theta: T) -> Self {
        let z = T::zero();
        let o = T::one();
        let (s, c) = theta.sin_cos();
        let r = |x: T| Complex::new(x, z);
        #[rustfmt::skip]
        let entries = vec![
            r(o), r(z), r(z), r(z),
            r(z), r(o), r(z), r(z),
            r(z), r(z), r(c), r(-s),
            r(z), r(z), r(s), r(c),
        ];
        Self { dim: 4, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                entries.push(self.get(c, r).conj());
            }
        }
        Self { dim: d, entries }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} with {}x{}",
                self.dim, self.dim, other.dim, other.dim
            )));
        }
        let d = self.dim;
        let mut entries = vec![Complex::new(T::zero(), T::zero()); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] = entries[r * d + c] + a * other.get(k, c);
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Kronecker product `self ⊗ other` (`self` on the slower index).
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut entries = vec![Complex::new(T::zero(), T::zero()); d * d];
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.get(r1, c1);
                for r2 in 0..b {
                    for c2 in 0..b {
                        entries[(r1 * b + r2) * d + (c1 * b + c2)] = x * other.get(r2, c2);
                    }
                }
            }
        }
        Self { dim: d, entries }
    }

    fn unitarity_deviation(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..d {
                    acc = acc + self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    acc.re = acc.re - T::one();
                }
                let dev = acc.norm();
                if !(dev <= worst) {
                    worst = dev;
                }
            }
        }
        worst
    }
}

/// On-disk matrix format: `{"dim": d, "entries": [[re, im], ...]}` in row-major order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn into_unitary(self) -> Result<UnitaryMatrix<f64>> {
        let entries = self
            .entries
            .into_iter()
            .map(|[re, im]| Complex::new(re, im))
            .collect();
        UnitaryMatrix::new(self.dim, entries)
    }

    pub fn from_unitary(u: &UnitaryMatrix<f64>) -> Self {
        Self {
            dim: u.dim(),
            entries: u.entries().iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}
