//! Eve's interception surface and the built-in attacks.
//!
//! An [`AttackSpec`] says where the probe couples to the traffic ([`Coupling`]) and how the
//! final probe outcomes become an [`EveRecord`]. The protocol engine owns the timing:
//! forward hooks fire on the way to Bob, backward hooks on the way back, and the probe is
//! measured only after the last announcement.

mod builtin;
mod record;
mod spec;
mod user;

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use builtin::{
    cnot_forward_only, cnot_mirror, hamming_weight_attack, intercept_resend_z, no_attack,
    rotation_probe,
};
pub use record::{pack_bits, read_out, EveRecord};
pub use spec::{Announcement, AttackSpec, BlockFamily, Coupling, Gate, Operator, Readout};
pub use user::{load_matrix, user_parallel, user_per_qubit};

use crate::error::{Error, Result};

/// Names accepted by [`AttackChoice`].
pub const ATTACK_NAMES: [&str; 8] = [
    "no_attack",
    "cnot_mirror",
    "cnot_forward_only",
    "intercept_resend_z",
    "rotation_probe",
    "hamming_weight",
    "user",
    "user_parallel",
];

/// An attack selected by name plus parameters, as it appears in configs and on the CLI.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AttackChoice {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Forward (or `U_E`) matrix file for user attacks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward_matrix: Option<PathBuf>,
    /// Backward (or `U_F` for the full returned block) matrix file for user attacks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backward_matrix: Option<PathBuf>,
}

impl AttackChoice {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            ..Self::default()
        }
    }

    pub fn rotation(theta: f64) -> Self {
        Self {
            theta: Some(theta),
            ..Self::named("rotation_probe")
        }
    }

    /// Checks the name and required parameters without building anything.
    pub fn validate(&self) -> Result<()> {
        let name = canonical(&self.name)
            .ok_or_else(|| Error::Config(format!("unknown attack `{}`", self.name)))?;
        match name {
            "rotation_probe" if self.theta.is_none() => {
                Err(Error::Config("rotation_probe needs theta".into()))
            }
            "user" | "user_parallel" if self.forward_matrix.is_none() => {
                Err(Error::Config(format!("{name} needs forward_matrix")))
            }
            _ => Ok(()),
        }
    }

    /// Builds the attack for a run on `num_qubits` qubits.
    pub fn build(&self, num_qubits: usize) -> Result<AttackSpec> {
        self.validate()?;
        match canonical(&self.name).expect("validated") {
            "no_attack" => Ok(no_attack()),
            "cnot_mirror" => Ok(cnot_mirror()),
            "cnot_forward_only" => Ok(cnot_forward_only()),
            "intercept_resend_z" => Ok(intercept_resend_z()),
            "rotation_probe" => rotation_probe(self.theta.expect("validated")),
            "hamming_weight" => hamming_weight_attack(num_qubits),
            "user" => {
                let forward = load_matrix(self.forward_matrix.as_ref().expect("validated"))?;
                let backward = self.backward_matrix.as_deref().map(load_matrix).transpose()?;
                user_per_qubit(forward, backward)
            }
            "user_parallel" => {
                let forward = load_matrix(self.forward_matrix.as_ref().expect("validated"))?;
                let mut backward = BTreeMap::new();
                if let Some(path) = &self.backward_matrix {
                    backward.insert(num_qubits, load_matrix(path)?);
                }
                user_parallel(num_qubits, forward, backward)
            }
            _ => unreachable!(),
        }
    }
}

fn canonical(name: &str) -> Option<&'static str> {
    let lower = name.to_ascii_lowercase().replace('-', "_");
    match lower.as_str() {
        "none" | "no_attack" => Some("no_attack"),
        "hamming_weight" | "hamming_weight_attack" => Some("hamming_weight"),
        other => ATTACK_NAMES.iter().copied().find(|n| *n == other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_resolves_names() {
        assert_eq!(AttackChoice::named("none").build(4).unwrap().name, "no_attack");
        assert_eq!(
            AttackChoice::named("hamming-weight").build(4).unwrap().probe_dim(),
            5
        );
        assert!(AttackChoice::named("rotation_probe").build(4).is_err());
        assert!(AttackChoice::rotation(0.5).build(4).is_ok());
        assert!(AttackChoice::named("bogus").validate().is_err());
        assert!(AttackChoice::named("user").validate().is_err());
    }
}
