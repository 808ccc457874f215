use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use super::spec::{Announcement, AttackSpec, Coupling, Operator, Readout};
use crate::error::{Error, Result};
use crate::qstate::{MatrixFile, UnitaryMatrix};

/// Reads a `{dim, entries: [[re, im], ...]}` file and checks unitarity.
pub fn load_matrix(path: &Path) -> Result<UnitaryMatrix<f64>> {
    let text = std::fs::read_to_string(path)?;
    let file: MatrixFile = serde_json::from_str(&text)?;
    file.into_unitary()
}

/// A per-qubit attack from explicit matrices on `probe slot ⊗ qubit` (probe slower).
///
/// The probe slot dimension is `dim / 2`; Eve's guess is the parity of each slot outcome.
pub fn user_per_qubit(
    forward: UnitaryMatrix<f64>,
    backward: Option<UnitaryMatrix<f64>>,
) -> Result<AttackSpec> {
    let dim = forward.dim();
    if dim % 2 != 0 {
        return Err(Error::Dimension(format!(
            "per-qubit hook must act on probe ⊗ qubit, got odd dimension {dim}"
        )));
    }
    AttackSpec::new(
        "user",
        dim / 2,
        Coupling::PerQubit {
            forward: Operator::Matrix(forward),
            backward: backward.map_or(Operator::Identity, Operator::Matrix),
        },
        Readout::CopyPerQubit,
        vec![Announcement::AliceBases, Announcement::BobActions, Announcement::InfoIndices],
    )
}

/// A collective attack from explicit matrices: `forward` on `probe ⊗ N qubits`,
/// and one backward matrix per returned-block size that the protocol may need.
pub fn user_parallel(
    num_qubits: usize,
    forward: UnitaryMatrix<f64>,
    backward: BTreeMap<usize, UnitaryMatrix<f64>>,
) -> Result<AttackSpec> {
    let block = 1usize << num_qubits;
    if forward.dim() % block != 0 {
        return Err(Error::Dimension(format!(
            "U_E of dimension {} does not factor as probe ⊗ {num_qubits} qubits",
            forward.dim()
        )));
    }
    let probe_dim = forward.dim() / block;
    for (&r, u) in &backward {
        if u.dim() != probe_dim << r {
            return Err(Error::Dimension(format!(
                "U_F for {r} returned qubits has dimension {}, expected {}",
                u.dim(),
                probe_dim << r
            )));
        }
    }
    let family = move |r: usize| {
        backward
            .get(&r)
            .cloned()
            .map(Operator::Matrix)
            .ok_or_else(|| Error::Config(format!("no U_F supplied for {r} returned qubits")))
    };
    AttackSpec::new(
        "user_parallel",
        probe_dim,
        Coupling::Parallel {
            num_qubits,
            forward: Operator::Matrix(forward),
            backward: Arc::new(family),
        },
        Readout::Nothing,
        Vec::new(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn loads_and_checks_matrix_files() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("cnot.json");
        std::fs::write(
            &good,
            r#"{"dim":4,"entries":[[1,0],[0,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],
                [0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[1,0],[0,0]]}"#,
        )
        .unwrap();
        let u = load_matrix(&good).unwrap();
        assert_eq!(u.dim(), 4);
        assert_eq!(user_per_qubit(u, None).unwrap().probe_dim(), 2);

        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, r#"{"dim":2,"entries":[[1,0],[1,0],[0,0],[1,0]]}"#).unwrap();
        assert!(matches!(load_matrix(&bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn parallel_dimensions_are_checked() {
        let u = UnitaryMatrix::identity(8);
        let mut back = BTreeMap::new();
        back.insert(2, UnitaryMatrix::identity(8));
        let spec = user_parallel(2, u.clone(), back).unwrap();
        assert_eq!(spec.probe_dim(), 2);
        let mut wrong = BTreeMap::new();
        wrong.insert(1, UnitaryMatrix::<f64>::identity(8));
        assert!(user_parallel(2, u, wrong).is_err());
        let odd = UnitaryMatrix::new(1, vec![Complex::new(1.0, 0.0)]).unwrap();
        assert!(user_per_qubit(odd, None).is_err());
    }
}
