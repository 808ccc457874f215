//! Simulation and verification toolkit for semi-quantum key distribution.
//!
//! * [`qstate`]: exact statevector engine (dense and sparse backends).
//! * [`protocol`]: the mock protocol, the randomization-based protocol and its balanced
//!   variant, and the measure-resend protocol, as executable state machines.
//! * [`adversary`]: Eve's interception surface and the built-in attacks.
//! * [`analysis`]: entropies, mutual information, closed-form bounds and exhaustive oracles.
//! * [`harness`]: seeded Monte Carlo experiments, sweeps, verification battery, result files.

pub mod adversary;
pub mod analysis;
pub mod error;
pub mod harness;
pub mod protocol;
pub mod qstate;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use rng::TrialRng;
pub use scalar::{Probability, Real};

/// Double-precision dense statevector.
pub type StateVector = qstate::StateVector<f64>;
/// Double-precision sparse statevector.
pub type SparseState = qstate::SparseState<f64>;
/// Double-precision unitary.
pub type UnitaryMatrix = qstate::UnitaryMatrix<f64>;
/// Double-precision density matrix.
pub type DensityMatrix = qstate::DensityMatrix<f64>;




/// Floating-point joint distribution.
pub type JointDistribution = analysis::JointDistribution<f64>;
/// Exact rational joint distribution.
pub type ExactDistribution = analysis::JointDistribution<num_rational::BigRational>;
