use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One addressable factor of the composite system.
///
/// Qubit and register indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subsystem {
    /// The whole probe, of dimension [`SubsystemLayout::probe_dim`].
    Probe,
    /// One tensor factor of a probe built from several slots.
    ProbeFactor(usize),
    /// Protocol qubit `k`.
    Qubit(usize),
    /// Qubit `j` of Bob's register.
    Bob(usize),
}

/// Shape of the composite system `probe ⊗ qubit₁ ⊗ … ⊗ qubit_N ⊗ bob₁ ⊗ … ⊗ bob_r`.
///
/// Basis index convention: the probe digit varies slowest, then qubits in increasing
/// order, then Bob's register. When the probe is built from several factors, factor 0
/// is the slowest among them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemLayout {
    probe_dims: Vec<usize>,
    num_qubits: usize,
    bob_register_len: usize,
}

impl SubsystemLayout {
    pub fn new(probe_dim: usize, num_qubits: usize, bob_register_len: usize) -> Result<Self> {
        Self::with_probe_factors(vec![probe_dim], num_qubits, bob_register_len)
    }

    pub fn with_probe_factors(
        probe_dims: Vec<usize>,
        num_qubits: usize,
        bob_register_len: usize,
    ) -> Result<Self> {
        if probe_dims.is_empty() || probe_dims.contains(&0) {
            return Err(Error::Config(format!(
                "probe factor dimensions must be positive, got {probe_dims:?}"
            )));
        }
        let layout = Self {
            probe_dims,
            num_qubits,
            bob_register_len,
        };
        if layout.total_dim() > usize::MAX as u128 {
            return Err(Error::CapExceeded {
                requested: layout.total_dim(),
                cap: usize::MAX,
            });
        }
        Ok(layout)
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dims.iter().product()
    }

    pub fn probe_factors(&self) -> &[usize] {
        &self.probe_dims
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn bob_register_len(&self) -> usize {
        self.bob_register_len
    }

    pub fn total_dim(&self) -> u128 {
        let bits = (self.num_qubits + self.bob_register_len) as u32;
        let probe: u128 = self.probe_dims.iter().map(|&d| d as u128).product();
        if bits >= 128 {
            return u128::MAX;
        }
        probe.saturating_mul(1u128 << bits)
    }

    /// `(stride, dim)` of a subsystem: its digit in basis index `b` is `(b / stride) % dim`.
    pub fn place(&self, s: Subsystem) -> Result<(usize, usize)> {
        let n = self.num_qubits;
        let r = self.bob_register_len;
        let low = 1usize << (n + r);
        match s {
            Subsystem::Probe => Ok((low, self.probe_dim())),
            Subsystem::ProbeFactor(j) => {
                let dim = *self.probe_dims.get(j).ok_or_else(|| {
                    Error::Dimension(format!(
                        "probe factor {j} out of range ({} factors)",
                        self.probe_dims.len()
                    ))
                })?;
                let faster: usize = self.probe_dims[j + 1..].iter().product();
                Ok((low * faster, dim))
            }
            Subsystem::Qubit(k) if k < n => Ok((1usize << (r + n - 1 - k), 2)),
            Subsystem::Bob(j) if j < r => Ok((1usize << (r - 1 - j), 2)),
            other => Err(Error::Dimension(format!(
                "{other:?} is not part of a layout with {n} qubits and {r} register qubits"
            ))),
        }
    }

    pub fn dim_of(&self, s: Subsystem) -> Result<usize> {
        self.place(s).map(|(_, d)| d)
    }

    /// Resolves an ordered target list, rejecting repeated or overlapping subsystems.
    pub fn resolve(&self, targets: &[Subsystem]) -> Result<Targets> {
        if targets.is_empty() {
            return Err(Error::Dimension("empty target list".into()));
        }
        let whole_probe = targets.contains(&Subsystem::Probe);
        let mut places = Vec::with_capacity(targets.len());
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) || (whole_probe && matches!(t, Subsystem::ProbeFactor(_)))
            {
                return Err(Error::Dimension(format!("repeated target {t:?}")));
            }
            places.push(self.place(*t)?);
        }
        Ok(Targets { places })
    }
}

/// Resolved strides and dimensions of an ordered target list.
#[derive(Debug, Clone)]
pub struct Targets {
    places: Vec<(usize, usize)>,
}

impl Targets {
    /// Product of target dimensions.
    pub fn local_dim(&self) -> usize {
        self.places.iter().map(|&(_, d)| d).product()
    }

    /// Mixed-radix local index of `index` over the targets, first target slowest.
    #[inline]
    pub fn gather(&self, index: usize) -> usize {
        self.places
            .iter()
            .fold(0, |acc, &(stride, dim)| acc * dim + (index / stride) % dim)
    }

    /// `index` with every target digit set to zero.
    #[inline]
    pub fn clear(&self, index: usize) -> usize {
        self.places
            .iter()
            .fold(index, |acc, &(stride, dim)| acc - ((acc / stride) % dim) * stride)
    }

    /// Offset contributed by local index `local` when added to a cleared index.
    #[inline]
    pub fn scatter(&self, mut local: usize) -> usize {
        let mut offset = 0;
        for &(stride, dim) in self.places.iter().rev() {
            offset += (local % dim) * stride;
            local /= dim;
        }
        offset
    }
}
