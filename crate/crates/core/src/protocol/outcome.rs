use serde::{Deserialize, Serialize};

use super::{AbortReason, ProtocolKind, ProtocolParams, Transcript};
use crate::adversary::EveRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Completed,
    Aborted(AbortReason),
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Self::Completed => "Completed",
            Self::Aborted(r) => r.name(),
        }
    }

    pub fn is_completed(self) -> bool {
        self == Self::Completed
    }
}

/// Checked and mismatched bits of one category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ErrorTally {
    pub checked: usize,
    pub errors: usize,
}

impl ErrorTally {
    pub fn record(&mut self, error: bool) {
        self.checked += 1;
        self.errors += usize::from(error);
    }

    /// `None` when nothing was checked.
    pub fn rate(&self) -> Option<f64> {
        (self.checked > 0).then(|| self.errors as f64 / self.checked as f64)
    }

    fn exceeds(&self, threshold: f64) -> bool {
        self.rate().is_some_and(|r| r > threshold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunStats {
    pub ctrl_z: ErrorTally,
    pub ctrl_x: ErrorTally,
    pub test: ErrorTally,
}

impl RunStats {
    pub(crate) fn ctrl_fails(&self, threshold: f64) -> bool {
        self.ctrl_z.exceeds(threshold) || self.ctrl_x.exceeds(threshold)
    }

    pub(crate) fn test_fails(&self, threshold: f64) -> bool {
        self.test.exceeds(threshold)
    }
}

/// Result of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub status: Status,
    pub alice_info: Vec<u8>,
    pub bob_info: Vec<u8>,
    pub transcript: Transcript,
    pub eve_record: EveRecord,
    pub stats: RunStats,
    /// Seed of the trial's random streams.
    pub seed: u64,
}

impl Outcome {
    /// 1 when Eve's INFO guess equals Alice's INFO string, 0 otherwise, `None` if aborted.
    pub fn eve_info_flag(&self) -> Option<u8> {
        if !self.status.is_completed() {
            return None;
        }
        let hit = self.eve_record.info_guess.as_deref() == Some(self.alice_info.as_slice());
        Some(u8::from(hit))
    }

    pub fn row(&self, params: &ProtocolParams) -> OutcomeRow {
        OutcomeRow {
            protocol: self.transcript.protocol,
            n: params.n,
            delta: params.delta,
            epsilon: params.epsilon,
            seed: self.seed,
            status: self.status.label().to_string(),
            ctrl_err_z: self.stats.ctrl_z.rate(),
            ctrl_err_x: self.stats.ctrl_x.rate(),
            test_err: self.stats.test.rate(),
            eve_info_flag: self.eve_info_flag(),
        }
    }
}

/// One CSV / JSON result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRow {
    pub protocol: ProtocolKind,
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub status: String,
    pub ctrl_err_z: Option<f64>,
    pub ctrl_err_x: Option<f64>,
    pub test_err: Option<f64>,
    pub eve_info_flag: Option<u8>,
}

/// Step-8 interface: an error-correcting code of rank `R` and a final key of `l ≤ R` bits.
///
/// Declared for completeness; nothing in this crate executes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostProcessingPlan {
    pub rank_r: usize,
    pub key_len_l: usize,
}

impl PostProcessingPlan {
    pub fn new(n: usize, rank_r: usize, key_len_l: usize) -> Result<Self> {
        if rank_r > n || key_len_l > rank_r {
            return Err(Error::Domain(format!(
                "need l ≤ R ≤ n, got l = {key_len_l}, R = {rank_r}, n = {n}"
            )));
        }
        Ok(Self { rank_r, key_len_l })
    }

    /// Upper bound on INFO bits revealed by publishing the ECC parities.
    pub fn parity_bits(&self, n: usize) -> usize {
        n - self.rank_r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_rates() {
        let mut t = ErrorTally::default();
        assert_eq!(t.rate(), None);
        assert!(!t.exceeds(0.0));
        t.record(false);
        t.record(true);
        assert_eq!(t.rate(), Some(0.5));
        assert!(t.exceeds(0.4));
        assert!(!t.exceeds(0.5));
    }

    #[test]
    fn plan_invariant() {
        assert!(PostProcessingPlan::new(16, 10, 8).is_ok());
        assert!(PostProcessingPlan::new(16, 8, 10).is_err());
        assert!(PostProcessingPlan::new(16, 20, 8).is_err());
        assert_eq!(PostProcessingPlan::new(16, 10, 8).unwrap().parity_bits(16), 6);
    }
}
