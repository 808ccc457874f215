//! Exact statevector engine for `probe ⊗ N qubits ⊗ Bob register`.
//!
//! Two backends implement [`QuantumState`]: [`StateVector`] stores every amplitude and
//! is capped at [`DEFAULT_MAX_DIM`]; [`SparseState`] stores only the support and is used
//! for collective attacks, where the layout is huge but few amplitudes are ever nonzero.

mod dense;
mod density;
mod layout;
mod permutation;
mod sparse;
mod unitary;

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

pub use dense::StateVector;
pub use density::{trace_distance, DensityMatrix};
pub use layout::{Subsystem, SubsystemLayout, Targets};
pub use permutation::BasisPermutation;
pub use sparse::SparseState;
pub use unitary::{MatrixFile, UnitaryMatrix, UNITARITY_TOL};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest total dimension a dense state may have unless overridden.
pub const DEFAULT_MAX_DIM: usize = 1 << 24;

/// Largest support a sparse state may reach unless overridden.
pub const DEFAULT_MAX_SUPPORT: usize = 1 << 22;

/// Outcomes with probability below this are never sampled.
pub const IMPOSSIBLE_OUTCOME: f64 = 1e-15;

/// Amplitudes with magnitude at or below this are omitted from debug dumps.
pub const DUMP_THRESHOLD: f64 = 1e-12;

/// Measurement basis of a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

/// Single-qubit preparation states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisState {
    Z0,
    Z1,
    XPlus,
    XMinus,
}

impl BasisState {
    pub fn new(basis: Basis, bit: u8) -> Self {
        match (basis, bit) {
            (Basis::Z, 0) => Self::Z0,
            (Basis::Z, _) => Self::Z1,
            (Basis::X, 0) => Self::XPlus,
            (Basis::X, _) => Self::XMinus,
        }
    }

    pub fn basis(self) -> Basis {
        match self {
            Self::Z0 | Self::Z1 => Basis::Z,
            Self::XPlus | Self::XMinus => Basis::X,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Self::Z0 | Self::XPlus => 0,
            Self::Z1 | Self::XMinus => 1,
        }
    }

    /// Amplitudes on `|0⟩` and `|1⟩`.
    pub fn amplitudes<T: Real>(self) -> [Complex<T>; 2] {
        let c = |x: T| Complex::new(x, T::zero());
        let s = T::FRAC_1_SQRT_2();
        match self {
            Self::Z0 => [c(T::one()), c(T::zero())],
            Self::Z1 => [c(T::zero()), c(T::one())],
            Self::XPlus => [c(s), c(s)],
            Self::XMinus => [c(s), c(-s)],
        }
    }
}

/// Operations shared by the dense and sparse backends.
pub trait QuantumState<T: Real>: Clone + Sized {
    /// `|probe_init⟩ ⊗ |φ₁…φ_N⟩ ⊗ |0…0⟩`.
    fn prepare(layout: SubsystemLayout, probe_init: usize, qubits: &[BasisState]) -> Result<Self>;

    fn layout(&self) -> &SubsystemLayout;

    /// Nonzero amplitudes in ascending basis-index order.
    fn entries(&self) -> Vec<(usize, Complex<T>)>;

    fn amplitude(&self, index: usize) -> Complex<T>;

    fn norm(&self) -> T;

    /// Applies `u` to the ordered `targets` (first target slowest in `u`'s index).
    fn apply_unitary(&mut self, u: &UnitaryMatrix<T>, targets: &[Subsystem]) -> Result<()>;

    /// Moves the amplitude at global index `b` to `perm(b)`.
    fn apply_basis_permutation(&mut self, perm: &dyn Fn(usize) -> usize) -> Result<()>;

    /// Applies a permutation of the local basis of `targets`.
    fn permute_targets(&mut self, targets: &[Subsystem], perm: &BasisPermutation) -> Result<()>;

    /// Born probabilities of each outcome of `target` measured in `basis`.
    ///
    /// The X basis is only defined for two-dimensional subsystems; outcome 0 is `|+⟩`.
    fn probabilities(&self, target: Subsystem, basis: Basis) -> Result<Vec<T>>;

    /// Projects onto `outcome` and divides by `sqrt(probability)`.
    fn collapse(
        &mut self,
        target: Subsystem,
        basis: Basis,
        outcome: usize,
        probability: T,
    ) -> Result<()>;

    fn measure<R: Rng + ?Sized>(
        &mut self,
        target: Subsystem,
        basis: Basis,
        rng: &mut R,
    ) -> Result<usize> {
        let probs = self.probabilities(target, basis)?;
        let outcome = sample_outcome(&probs, rng)?;
        self.collapse(target, basis, outcome, probs[outcome])?;
        Ok(outcome)
    }

    fn measure_qubit<R: Rng + ?Sized>(&mut self, qubit: usize, basis: Basis, rng: &mut R) -> Result<u8> {
        self.measure(Subsystem::Qubit(qubit), basis, rng).map(|o| o as u8)
    }

    fn measure_probe<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<usize> {
        self.measure(Subsystem::Probe, Basis::Z, rng)
    }

    /// Partial trace onto `keep`, with the local index ordered as `keep` (first slowest).
    fn reduced_density(&self, keep: &[Subsystem]) -> Result<DensityMatrix<T>> {
        let targets = self.layout().resolve(keep)?;
        let d = targets.local_dim();
        let mut groups: BTreeMap<usize, Vec<(usize, Complex<T>)>> = BTreeMap::new();
        for (index, amp) in self.entries() {
            groups
                .entry(targets.clear(index))
                .or_default()
                .push((targets.gather(index), amp));
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut rho = vec![zero; d * d];
        for members in groups.values() {
            for &(a, x) in members {
                for &(b, y) in members {
                    rho[a * d + b] = rho[a * d + b] + x * y.conj();
                }
            }
        }
        DensityMatrix::new(d, rho)
    }

    /// Layout plus `(index, re, im)` for every amplitude above [`DUMP_THRESHOLD`].
    fn debug_json(&self) -> serde_json::Value {
        let cut = T::lit(DUMP_THRESHOLD);
        let amps: Vec<_> = self
            .entries()
            .into_iter()
            .filter(|(_, a)| a.norm() > cut)
            .map(|(i, a)| json!([i, a.re.to_f64(), a.im.to_f64()]))
            .collect();
        json!({ "layout": self.layout(), "amplitudes": amps })
    }
}

/// Samples an outcome index, never choosing one with probability below [`IMPOSSIBLE_OUTCOME`].
pub fn sample_outcome<T: Real, R: Rng + ?Sized>(probs: &[T], rng: &mut R) -> Result<usize> {
    let floor = T::lit(IMPOSSIBLE_OUTCOME);
    let total = probs
        .iter()
        .filter(|&&p| p >= floor)
        .fold(T::zero(), |a, &p| a + p);
    if total <= T::zero() {
        return Err(Error::Domain("measurement on a zero state".into()));
    }
    let u = T::lit(rng.gen::<f64>()) * total;
    let mut acc = T::zero();
    let mut last = None;
    for (i, &p) in probs.iter().enumerate() {
        if p < floor {
            continue;
        }
        acc = acc + p;
        last = Some(i);
        if u < acc {
            return Ok(i);
        }
    }
    Ok(last.expect("at least one possible outcome"))
}

fn check_x_basis(basis: Basis, dim: usize, target: Subsystem) -> Result<()> {
    if basis == Basis::X && dim != 2 {
        return Err(Error::Dimension(format!(
            "X-basis measurement needs a qubit, {target:?} has dimension {dim}"
        )));
    }
    Ok(())
}

fn check_probability<T: Real>(outcome: usize, dim: usize, probability: T) -> Result<()> {
    if outcome >= dim {
        return Err(Error::Dimension(format!("outcome {outcome} >= dimension {dim}")));
    }
    if !(probability >= T::lit(IMPOSSIBLE_OUTCOME)) {
        return Err(Error::Domain(format!(
            "cannot collapse onto outcome {outcome} of probability {probability}"
        )));
    }
    Ok(())
}

fn prepared_product<T: Real>(
    layout: &SubsystemLayout,
    probe_init: usize,
    qubits: &[BasisState],
) -> Result<Vec<(usize, Complex<T>)>> {
    if qubits.len() != layout.num_qubits() {
        return Err(Error::Config(format!(
            "{} qubit states given for a layout with {} qubits",
            qubits.len(),
            layout.num_qubits()
        )));
    }
    if probe_init >= layout.probe_dim() {
        return Err(Error::Config(format!(
            "probe basis state {probe_init} out of range for dimension {}",
            layout.probe_dim()
        )));
    }
    let (probe_stride, _) = layout.place(Subsystem::Probe)?;
    let mut terms = vec![(probe_init * probe_stride, Complex::new(T::one(), T::zero()))];
    for (k, q) in qubits.iter().enumerate() {
        let (stride, _) = layout.place(Subsystem::Qubit(k))?;
        let amps = q.amplitudes::<T>();
        let mut next = Vec::with_capacity(terms.len() * 2);
        for &(index, a) in &terms {
            for (bit, &c) in amps.iter().enumerate() {
                if c.re != T::zero() || c.im != T::zero() {
                    next.push((index + bit * stride, a * c));
                }
            }
        }
        terms = next;
    }
    terms.sort_unstable_by_key(|&(i, _)| i);
    Ok(terms)
}
