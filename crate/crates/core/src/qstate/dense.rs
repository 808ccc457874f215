use num_complex::Complex;

use super::{
    check_probability, check_x_basis, permutation::is_bijection, prepared_product, Basis,
    BasisPermutation, BasisState, QuantumState, Subsystem, SubsystemLayout, UnitaryMatrix,
    DEFAULT_MAX_DIM,
};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense statevector: one amplitude per basis index of the layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    layout: SubsystemLayout,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Like [`QuantumState::prepare`] with an explicit dimension cap.
    pub fn prepare_with_cap(
        layout: SubsystemLayout,
        probe_init: usize,
        qubits: &[BasisState],
        max_dim: usize,
    ) -> Result<Self> {
        let dim = checked_dim(&layout, max_dim)?;
        let terms = prepared_product::<T>(&layout, probe_init, qubits)?;
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        for (i, a) in terms {
            amplitudes[i] = a;
        }
        Ok(Self { layout, amplitudes })
    }

    /// Wraps raw amplitudes, which must have unit norm within 1e-9.
    pub fn from_amplitudes(layout: SubsystemLayout, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if layout.total_dim() != amplitudes.len() as u128 {
            return Err(Error::Dimension(format!(
                "{} amplitudes for a layout of dimension {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        let s = Self { layout, amplitudes };
        if (s.norm() - T::one()).abs() > T::tol(1e-9) {
            return Err(Error::Domain(format!("state norm {} is not 1", s.norm())));
        }
        Ok(s)
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

fn checked_dim(layout: &SubsystemLayout, max_dim: usize) -> Result<usize> {
    let dim = layout.total_dim();
    if dim > max_dim as u128 {
        return Err(Error::CapExceeded {
            requested: dim,
            cap: max_dim,
        });
    }
    Ok(dim as usize)
}

impl<T: Real> QuantumState<T> for StateVector<T> {
    fn prepare(layout: SubsystemLayout, probe_init: usize, qubits: &[BasisState]) -> Result<Self> {
        Self::prepare_with_cap(layout, probe_init, qubits, DEFAULT_MAX_DIM)
    }

    fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    fn entries(&self) -> Vec<(usize, Complex<T>)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != T::zero() || a.im != T::zero())
            .map(|(i, &a)| (i, a))
            .collect()
    }

    fn amplitude(&self, index: usize) -> Complex<T> {
        self.amplitudes
            .get(index)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    fn norm(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt()
    }

    fn apply_unitary(&mut self, u: &UnitaryMatrix<T>, targets: &[Subsystem]) -> Result<()> {
        let t = self.layout.resolve(targets)?;
        let d = t.local_dim();
        if u.dim() != d {
            return Err(Error::Dimension(format!(
                "{}-dimensional unitary on targets of dimension {d}",
                u.dim()
            )));
        }
        let offsets: Vec<usize> = (0..d).map(|l| t.scatter(l)).collect();
        let zero = Complex::new(T::zero(), T::zero());
        let mut local_in = vec![zero; d];
        for base in 0..self.amplitudes.len() {
            if t.gather(base) != 0 {
                continue;
            }
            for (l, &off) in offsets.iter().enumerate() {
                local_in[l] = self.amplitudes[base + off];
            }
            for (r, &off) in offsets.iter().enumerate() {
                let mut acc = zero;
                for (c, &x) in local_in.iter().enumerate() {
                    acc = acc + u.get(r, c) * x;
                }
                self.amplitudes[base + off] = acc;
            }
        }
        Ok(())
    }

    fn apply_basis_permutation(&mut self, perm: &dyn Fn(usize) -> usize) -> Result<()> {
        let dim = self.amplitudes.len();
        if !is_bijection(dim, perm) {
            return Err(Error::NotBijective { dim });
        }
        let mut out = vec![Complex::new(T::zero(), T::zero()); dim];
        for (b, &a) in self.amplitudes.iter().enumerate() {
            out[perm(b)] = a;
        }
        self.amplitudes = out;
        Ok(())
    }

    fn permute_targets(&mut self, targets: &[Subsystem], perm: &BasisPermutation) -> Result<()> {
        let t = self.layout.resolve(targets)?;
        if perm.dim() != t.local_dim() {
            return Err(Error::Dimension(format!(
                "permutation of dimension {} on targets of dimension {}",
                perm.dim(),
                t.local_dim()
            )));
        }
        perm.verify()?;
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.amplitudes.len()];
        for (b, &a) in self.amplitudes.iter().enumerate() {
            let local = t.gather(b);
            out[t.clear(b) + t.scatter(perm.apply(local))] = a;
        }
        self.amplitudes = out;
        Ok(())
    }

    fn probabilities(&self, target: Subsystem, basis: Basis) -> Result<Vec<T>> {
        let (stride, dim) = self.layout.place(target)?;
        check_x_basis(basis, dim, target)?;
        let mut probs = vec![T::zero(); dim];
        match basis {
            Basis::Z => {
                for (b, a) in self.amplitudes.iter().enumerate() {
                    let digit = (b / stride) % dim;
                    probs[digit] = probs[digit] + a.norm_sqr();
                }
            }
            Basis::X => {
                let half = T::lit(0.5);
                for b in 0..self.amplitudes.len() {
                    if (b / stride) % 2 == 1 {
                        continue;
                    }
                    let (a0, a1) = (self.amplitudes[b], self.amplitudes[b + stride]);
                    probs[0] = probs[0] + (a0 + a1).norm_sqr() * half;
                    probs[1] = probs[1] + (a0 - a1).norm_sqr() * half;
                }
            }
        }
        Ok(probs)
    }

    fn collapse(
        &mut self,
        target: Subsystem,
        basis: Basis,
        outcome: usize,
        probability: T,
    ) -> Result<()> {
        let (stride, dim) = self.layout.place(target)?;
        check_x_basis(basis, dim, target)?;
        check_probability(outcome, dim, probability)?;
        let scale = T::one() / probability.sqrt();
        let zero = Complex::new(T::zero(), T::zero());
        match basis {
            Basis::Z => {
                for (b, a) in self.amplitudes.iter_mut().enumerate() {
                    *a = if (b / stride) % dim == outcome {
                        *a * scale
                    } else {
                        zero
                    };
                }
            }
            Basis::X => {
                let sign = if outcome == 0 { T::one() } else { -T::one() };
                let half = T::lit(0.5);
                for b in 0..self.amplitudes.len() {
                    if (b / stride) % 2 == 1 {
                        continue;
                    }
                    let (a0, a1) = (self.amplitudes[b], self.amplitudes[b + stride]);
                    // ⟨±|a⟩ |±⟩ = (a0 ± a1)/2 · (|0⟩ ± |1⟩)
                    let c = (a0 + a1 * sign) * half * scale;
                    self.amplitudes[b] = c;
                    self.amplitudes[b + stride] = c * sign;
                }
            }
        }
        Ok(())
    }
}
