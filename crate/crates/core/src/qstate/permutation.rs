use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

type Map = dyn Fn(usize) -> usize + Send + Sync;

/// A bijection on `0..dim`, typically over the local index space of a target list.
///
/// The bijection check runs once, on first use, and its result is cached.
#[derive(Clone)]
pub struct BasisPermutation {
    dim: usize,
    map: Arc<Map>,
    checked: Arc<OnceLock<bool>>,
}

impl BasisPermutation {
    pub fn new(dim: usize, map: impl Fn(usize) -> usize + Send + Sync + 'static) -> Self {
        Self {
            dim,
            map: Arc::new(map),
            checked: Arc::new(OnceLock::new()),
        }
    }

    /// Like [`new`](Self::new) but verifies bijectivity immediately.
    pub fn checked(dim: usize, map: impl Fn(usize) -> usize + Send + Sync + 'static) -> Result<Self> {
        let p = Self::new(dim, map);
        p.verify()?;
        Ok(p)
    }

    /// `(probe, bits) ↦ ((probe + shift(bits)) mod probe_dim, bits)` over
    /// `probe ⊗ qubits` with `qubits` two-level factors.
    ///
    /// Bijective for every `shift`, so no table check is needed even when the local
    /// space is far too large to enumerate.
    pub fn probe_shift(
        probe_dim: usize,
        qubits: usize,
        shift: impl Fn(usize) -> i64 + Send + Sync + 'static,
    ) -> Self {
        let block = 1usize << qubits;
        let p = Self::new(probe_dim * block, move |j| {
            let (probe, bits) = (j / block, j % block);
            let moved = (probe as i64 + shift(bits)).rem_euclid(probe_dim as i64) as usize;
            moved * block + bits
        });
        let _ = p.checked.set(true);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn apply(&self, j: usize) -> usize {
        (self.map)(j)
    }

    pub fn verify(&self) -> Result<()> {
        let ok = *self.checked.get_or_init(|| is_bijection(self.dim, &*self.map));
        if ok {
            Ok(())
        } else {
            Err(Error::NotBijective { dim: self.dim })
        }
    }

    /// The inverse map, tabulated.
    pub fn inverse(&self) -> Result<Self> {
        self.verify()?;
        let mut table = vec![0usize; self.dim];
        for j in 0..self.dim {
            table[self.apply(j)] = j;
        }
        Ok(Self::checked_table(table))
    }

    fn checked_table(table: Vec<usize>) -> Self {
        let dim = table.len();
        let p = Self::new(dim, move |j| table[j]);
        let _ = p.checked.set(true);
        p
    }
}

impl fmt::Debug for BasisPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasisPermutation")
            .field("dim", &self.dim)
            .field("checked", &self.checked.get())
            .finish()
    }
}

pub(crate) fn is_bijection(dim: usize, map: &dyn Fn(usize) -> usize) -> bool {
    let mut seen = vec![false; dim];
    for j in 0..dim {
        let k = map(j);
        if k >= dim || seen[k] {
            return false;
        }
        seen[k] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_non_bijection() {
        assert!(BasisPermutation::checked(4, |j| (j + 1) % 4).is_ok());
        assert!(BasisPermutation::checked(4, |j| j / 2).is_err());
        let lazy = BasisPermutation::new(4, |j| j + 1);
        assert!(lazy.verify().is_err());
    }

    #[test]
    fn probe_shift_is_a_bijection() {
        let p = BasisPermutation::probe_shift(5, 3, |bits| bits.count_ones() as i64 * 3 - 7);
        assert!(is_bijection(p.dim(), &|j| p.apply(j)));
        assert!(p.verify().is_ok());
    }

    #[test]
    fn inverse_undoes_map() {
        let p = BasisPermutation::checked(10, |j| (3 * j + 1) % 10).unwrap();
        let q = p.inverse().unwrap();
        for j in 0..10 {
            assert_eq!(q.apply(p.apply(j)), j);
        }
    }
}
