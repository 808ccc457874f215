use crate::analysis::{
    abort_bound, entropy_gap, entropy_gap_bound, info_set_entropy, leak_bound, leak_exact, BoundReport, Direction,
};
use crate::error::{Error, Result};

/// Closed-form quantities at one `(n, ε)`, as shown by `sqkd bounds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsQuery {
    pub n: usize,
    pub epsilon: f64,
    /// Enables the abort bound (with `delta_prime`).
    pub delta: Option<f64>,
    pub delta_prime: Option<f64>,
    /// Qubits per INFO bit for the leakage figures.
    pub k: u64,
}

impl BoundsQuery {
    pub fn new(n: usize, epsilon: f64) -> Self {
        Self {
            n,
            epsilon,
            delta: None,
            delta_prime: None,
            k: 4,
        }
    }
}

pub fn bounds_table(q: &BoundsQuery) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    let n = q.n as f64;
    let entropy = info_set_entropy(q.n, q.epsilon)?;
    out.push(
        BoundReport::new("lg|I(n,eps)| <= n", entropy, n, Direction::AtMost)
            .param("n", n)
            .param("epsilon", q.epsilon),
    );
    let gap = entropy_gap(q.n, q.epsilon)?;
    out.push(match entropy_gap_bound(q.n, q.epsilon) {
        Ok(bound) => BoundReport::new("n - lg|I(n,eps)| <= (3/ln2)e^(-eps^2 n/2)", gap, bound, Direction::AtMost),
        Err(Error::Domain(why)) => BoundReport::skipped("n - lg|I(n,eps)| <= (3/ln2)e^(-eps^2 n/2)", why),
        Err(e) => return Err(e),
    }
    .param("n", n)
    .param("epsilon", q.epsilon));

    let k = q.k as f64;
    let bound = leak_bound(k)?;
    out.push(
        BoundReport::new("leak_bound(k)", bound, 0.293, Direction::AtMost)
            .param("k", k)
            .with_note("compared with the 0.293 ceiling at k = 4"),
    );
    out.push(
        BoundReport::new("leak_exact(n,k) <= leak_bound(k) + 1/n", leak_exact(q.n as u64, q.k)?, bound + 1.0 / n, Direction::AtMost)
            .param("n", n)
            .param("k", k)
            .with_note("the O(1/n) term taken as 1/n"),
    );

    if let Some(delta) = q.delta {
        let dp = q.delta_prime.unwrap_or((q.epsilon + delta) / 2.0);
        let b = abort_bound(q.n, delta, dp, q.epsilon)?;
        out.push(
            BoundReport::new("P1' abort bound <= 3e^(-kn)", b.bound, b.coarse, Direction::AtMost)
                .param("n", n)
                .param("delta", delta)
                .param("delta_prime", dp)
                .param("epsilon", q.epsilon)
                .param("k1", b.k1)
                .param("k2", b.k2),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_for_documented_query() {
        let rows = bounds_table(&BoundsQuery::new(40, 0.5)).unwrap();
        assert!(rows.iter().take(2).all(|r| r.satisfied));
        let small = bounds_table(&BoundsQuery::new(4, 0.5)).unwrap();
        assert!(small[1].note.as_deref().unwrap().starts_with("skipped"));
        let with_abort = bounds_table(&BoundsQuery {
            delta: Some(0.5),
            delta_prime: Some(0.3),
            ..BoundsQuery::new(16, 0.1)
        })
        .unwrap();
        assert_eq!(with_abort.len(), 5);
    }
}
