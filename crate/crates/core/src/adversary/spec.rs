use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{BasisPermutation, QuantumState, Subsystem, UnitaryMatrix};

/// A unitary acting on an ordered target list.
#[derive(Debug, Clone)]
pub enum Operator {
    Identity,
    Matrix(UnitaryMatrix<f64>),
    /// A basis permutation, used when the dense matrix would be too large.
    Permutation(BasisPermutation),
}

impl Operator {
    /// Local dimension the operator expects, `None` for the identity.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Identity => None,
            Self::Matrix(u) => Some(u.dim()),
            Self::Permutation(p) => Some(p.dim()),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Self::Identity)
    }

    pub fn apply<S: QuantumState<f64>>(&self, state: &mut S, targets: &[Subsystem]) -> Result<()> {
        match self {
            Self::Identity => Ok(()),
            Self::Matrix(u) => state.apply_unitary(u, targets),
            Self::Permutation(p) => state.permute_targets(targets, p),
        }
    }

    fn expect_dim(&self, dim: usize, what: &str) -> Result<()> {
        match self.dim() {
            Some(d) if d != dim => Err(Error::Dimension(format!(
                "{what} acts on dimension {d}, expected {dim}"
            ))),
            _ => Ok(()),
        }
    }
}

/// An operator plus the subsystems it touches.
#[derive(Debug, Clone)]
pub struct Gate {
    pub op: Operator,
    pub targets: Vec<Subsystem>,
}

/// `r ↦` backward operator on `probe ⊗ r returned qubits`.
pub type BlockFamily = Arc<dyn Fn(usize) -> Result<Operator> + Send + Sync>;

/// Where and how Eve's probe couples to the traffic.
#[derive(Clone)]
pub enum Coupling {
    /// A fresh `probe_dim` slot per position; `forward` acts on (slot, qubit) on the way
    /// to Bob and `backward` on the way back.
    PerQubit { forward: Operator, backward: Operator },
    /// One shared probe. `forward` acts on the probe and all N qubits at once; `backward(r)`
    /// on the probe and the r returned qubits, in the order they come back.
    Parallel {
        num_qubits: usize,
        forward: Operator,
        backward: BlockFamily,
    },
    /// The general family `U_1 … U_{N+1}`: `steps[0]` runs before Bob touches qubit 0,
    /// `steps[k]` between qubits k−1 and k, `steps[N]` after the last one.
    Sequential {
        num_qubits: usize,
        probe_factors: Vec<usize>,
        steps: Vec<Vec<Gate>>,
    },
}

impl fmt::Debug for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PerQubit { forward, backward } => f
                .debug_struct("PerQubit")
                .field("forward", forward)
                .field("backward", backward)
                .finish(),
            Self::Parallel {
                num_qubits,
                forward,
                ..
            } => f
                .debug_struct("Parallel")
                .field("num_qubits", num_qubits)
                .field("forward", forward)
                .finish_non_exhaustive(),
            Self::Sequential {
                num_qubits,
                probe_factors,
                steps,
            } => f
                .debug_struct("Sequential")
                .field("num_qubits", num_qubits)
                .field("probe_factors", probe_factors)
                .field("steps", &steps.len())
                .finish(),
        }
    }
}

/// How Eve turns her probe outcomes into a classical record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    /// The attack makes no guess.
    Nothing,
    /// Probe slot k holds Eve's guess of the computational value of qubit k.
    CopyPerQubit,
    /// The shared probe holds a count of ones among the qubits Bob measured.
    WeightCounter,
}

/// Public messages an attack may condition its readout on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Announcement {
    ReturnSignal,
    AliceBases,
    BobActions,
    ReflectOrder,
    TestIndices,
    TestValues,
    InfoIndices,
}

/// An eavesdropping strategy: probe layout, coupling unitaries, and final readout.
///
/// Immutable once built and cheap to clone, so one spec is shared by all trials.
#[derive(Debug, Clone)]
pub struct AttackSpec {
    pub name: String,
    pub parameters: Vec<(String, f64)>,
    pub coupling: Coupling,
    pub readout: Readout,
    pub listens_to: Vec<Announcement>,
    probe_dim: usize,
}

impl AttackSpec {
    /// Checks that every operator fits its declared slot.
    pub fn new(
        name: impl Into<String>,
        probe_dim: usize,
        coupling: Coupling,
        readout: Readout,
        listens_to: Vec<Announcement>,
    ) -> Result<Self> {
        if probe_dim == 0 {
            return Err(Error::Config("probe dimension must be positive".into()));
        }
        match &coupling {
            Coupling::PerQubit { forward, backward } => {
                forward.expect_dim(2 * probe_dim, "forward hook")?;
                backward.expect_dim(2 * probe_dim, "backward hook")?;
            }
            Coupling::Parallel {
                num_qubits,
                forward,
                ..
            } => {
                let dim = 1usize
                    .checked_shl(*num_qubits as u32)
                    .and_then(|b| b.checked_mul(probe_dim))
                    .ok_or_else(|| Error::Config("parallel attack too large".into()))?;
                forward.expect_dim(dim, "U_E")?;
            }
            Coupling::Sequential {
                num_qubits,
                probe_factors,
                steps,
            } => {
                if probe_factors.iter().product::<usize>() != probe_dim {
                    return Err(Error::Config(format!(
                        "probe factors {probe_factors:?} do not multiply to {probe_dim}"
                    )));
                }
                if steps.len() != num_qubits + 1 {
                    return Err(Error::Config(format!(
                        "sequential attack needs {} steps, got {}",
                        num_qubits + 1,
                        steps.len()
                    )));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            parameters: Vec::new(),
            coupling,
            readout,
            listens_to,
            probe_dim,
        })
    }

    pub fn with_parameter(mut self, key: &str, value: f64) -> Self {
        self.parameters.push((key.to_string(), value));
        self
    }

    /// Dimension of one probe slot (per-qubit couplings) or of the whole probe.
    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    pub fn is_per_qubit(&self) -> bool {
        matches!(self.coupling, Coupling::PerQubit { .. })
    }

    /// The N-qubit `{U_k}` encoding of a parallel attack:
    /// `U_1 = U_E`, identities in between, `U_{N+1} = U_F`.
    pub fn parallel_as_sequential(&self) -> Result<Self> {
        let Coupling::Parallel {
            num_qubits,
            forward,
            backward,
        } = &self.coupling
        else {
            return Err(Error::Config(format!("`{}` is not a parallel attack", self.name)));
        };
        let n = *num_qubits;
        let all: Vec<Subsystem> = std::iter::once(Subsystem::Probe)
            .chain((0..n).map(Subsystem::Qubit))
            .collect();
        let mut steps = vec![Vec::new(); n + 1];
        steps[0].push(Gate {
            op: forward.clone(),
            targets: all.clone(),
        });
        steps[n].push(Gate {
            op: backward(n)?,
            targets: all,
        });
        self.sequential_variant(n, vec![self.probe_dim], steps)
    }

    /// The individual-qubit restriction of `{U_k}`: `U_k = U_E^(k) U_F^(k−1)`, with one
    /// probe factor per qubit.
    pub fn individual_as_sequential(&self, num_qubits: usize) -> Result<Self> {
        let Coupling::PerQubit { forward, backward } = &self.coupling else {
            return Err(Error::Config(format!("`{}` is not a per-qubit attack", self.name)));
        };
        let pair = |k: usize| vec![Subsystem::ProbeFactor(k), Subsystem::Qubit(k)];
        let mut steps = vec![Vec::new(); num_qubits + 1];
        for k in 0..num_qubits {
            if !backward.is_identity() {
                steps[k + 1].push(Gate {
                    op: backward.clone(),
                    targets: pair(k),
                });
            }
            if !forward.is_identity() {
                steps[k].push(Gate {
                    op: forward.clone(),
                    targets: pair(k),
                });
            }
        }
        let factors = vec![self.probe_dim; num_qubits];
        self.sequential_variant(num_qubits, factors, steps)
    }

    fn sequential_variant(
        &self,
        num_qubits: usize,
        probe_factors: Vec<usize>,
        steps: Vec<Vec<Gate>>,
    ) -> Result<Self> {
        let probe_dim = probe_factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::Config("probe too large for a sequential encoding".into()))?;
        let mut spec = Self::new(
            format!("{}/sequential", self.name),
            probe_dim,
            Coupling::Sequential {
                num_qubits,
                probe_factors,
                steps,
            },
            self.readout,
            self.listens_to.clone(),
        )?;
        spec.parameters = self.parameters.clone();
        Ok(spec)
    }
}
