use std::collections::BTreeMap;

use num_complex::Complex;

use super::{
    check_probability, check_x_basis, prepared_product, Basis, BasisPermutation, BasisState,
    QuantumState, Subsystem, SubsystemLayout, UnitaryMatrix, DEFAULT_MAX_SUPPORT,
};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Squared magnitudes at or below this are dropped from the support.
const PRUNE_NORM_SQR: f64 = 1e-30;

/// Statevector that stores only nonzero amplitudes, keyed by basis index.
///
/// Semantically identical to [`StateVector`](super::StateVector); the cap applies to the
/// number of stored amplitudes instead of the layout dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState<T: Real> {
    layout: SubsystemLayout,
    amplitudes: BTreeMap<usize, Complex<T>>,
    max_support: usize,
}

impl<T: Real> SparseState<T> {
    pub fn prepare_with_cap(
        layout: SubsystemLayout,
        probe_init: usize,
        qubits: &[BasisState],
        max_support: usize,
    ) -> Result<Self> {
        let superposed = qubits
            .iter()
            .filter(|q| matches!(q, BasisState::XPlus | BasisState::XMinus))
            .count();
        let support = 1u128.checked_shl(superposed as u32).unwrap_or(u128::MAX);
        if support > max_support as u128 {
            return Err(Error::CapExceeded {
                requested: support,
                cap: max_support,
            });
        }
        let amplitudes = prepared_product::<T>(&layout, probe_init, qubits)?
            .into_iter()
            .collect();
        Ok(Self {
            layout,
            amplitudes,
            max_support,
        })
    }

    pub fn support(&self) -> usize {
        self.amplitudes.len()
    }

    fn replace(&mut self, next: BTreeMap<usize, Complex<T>>) -> Result<()> {
        let cut = T::lit(PRUNE_NORM_SQR);
        let next: BTreeMap<_, _> = next.into_iter().filter(|(_, a)| a.norm_sqr() > cut).collect();
        if next.len() > self.max_support {
            return Err(Error::CapExceeded {
                requested: next.len() as u128,
                cap: self.max_support,
            });
        }
        self.amplitudes = next;
        Ok(())
    }
}

impl<T: Real> QuantumState<T> for SparseState<T> {
    fn prepare(layout: SubsystemLayout, probe_init: usize, qubits: &[BasisState]) -> Result<Self> {
        Self::prepare_with_cap(layout, probe_init, qubits, DEFAULT_MAX_SUPPORT)
    }

    fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    fn entries(&self) -> Vec<(usize, Complex<T>)> {
        self.amplitudes.iter().map(|(&i, &a)| (i, a)).collect()
    }

    fn amplitude(&self, index: usize) -> Complex<T> {
        self.amplitudes
            .get(&index)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    fn norm(&self) -> T {
        self.amplitudes
            .values()
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
        // column j of u, restricted to its nonzero rows
        let columns: Vec<Vec<(usize, Complex<T>)>> = (0..d)
            .map(|col| {
                (0..d)
                    .map(|row| (t.scatter(row), u.get(row, col)))
                    .filter(|(_, x)| x.re != T::zero() || x.im != T::zero())
                    .collect()
            })
            .collect();
        let mut next: BTreeMap<usize, Complex<T>> = BTreeMap::new();
        for (&index, &amp) in &self.amplitudes {
            let base = t.clear(index);
            for &(offset, x) in &columns[t.gather(index)] {
                let slot = next
                    .entry(base + offset)
                    .or_insert_with(|| Complex::new(T::zero(), T::zero()));
                *slot = *slot + x * amp;
            }
        }
        self.replace(next)
    }

    /// Only injectivity on the current support can be checked here; the layout is
    /// usually far too large to verify a global bijection.
    fn apply_basis_permutation(&mut self, perm: &dyn Fn(usize) -> usize) -> Result<()> {
        let total = self.layout.total_dim();
        let mut next = BTreeMap::new();
        for (&index, &amp) in &self.amplitudes {
            let image = perm(index);
            if image as u128 >= total || next.insert(image, amp).is_some() {
                return Err(Error::NotBijective {
                    dim: usize::try_from(total).unwrap_or(usize::MAX),
                });
            }
        }
        self.amplitudes = next;
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
        self.amplitudes = self
            .amplitudes
            .iter()
            .map(|(&b, &a)| (t.clear(b) + t.scatter(perm.apply(t.gather(b))), a))
            .collect();
        Ok(())
    }

    fn probabilities(&self, target: Subsystem, basis: Basis) -> Result<Vec<T>> {
        let (stride, dim) = self.layout.place(target)?;
        check_x_basis(basis, dim, target)?;
        let mut probs = vec![T::zero(); dim];
        let zero = Complex::new(T::zero(), T::zero());
        match basis {
            Basis::Z => {
                for (&b, a) in &self.amplitudes {
                    let digit = (b / stride) % dim;
                    probs[digit] = probs[digit] + a.norm_sqr();
                }
            }
            Basis::X => {
                let half = T::lit(0.5);
                for (&b, &a) in &self.amplitudes {
                    let (a0, a1) = if (b / stride) % 2 == 0 {
                        (a, self.amplitudes.get(&(b + stride)).copied().unwrap_or(zero))
                    } else if self.amplitudes.contains_key(&(b - stride)) {
                        continue;
                    } else {
                        (zero, a)
                    };
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
        match basis {
            Basis::Z => {
                self.amplitudes.retain(|&b, _| (b / stride) % dim == outcome);
                for a in self.amplitudes.values_mut() {
                    *a = *a * scale;
                }
                Ok(())
            }
            Basis::X => {
                let sign = if outcome == 0 { T::one() } else { -T::one() };
                let half = T::lit(0.5);
                let zero = Complex::new(T::zero(), T::zero());
                let mut pairs: BTreeMap<usize, Complex<T>> = BTreeMap::new();
                for (&b, &a) in &self.amplitudes {
                    let (base, contribution) = if (b / stride) % 2 == 0 {
                        (b, a)
                    } else {
                        (b - stride, a * sign)
                    };
                    let slot = pairs.entry(base).or_insert(zero);
                    *slot = *slot + contribution;
                }
                let mut next = BTreeMap::new();
                for (base, sum) in pairs {
                    let c = sum * half * scale;
                    next.insert(base, c);
                    next.insert(base + stride, c * sign);
                }
                self.replace(next)
            }
        }
    }
}
