use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Probability;

/// Finite joint distribution over discrete variables, stored as a full mixed-radix table.
///
/// Variable 0 is the slowest index. With `P = BigRational` every probability and every
/// independence check is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<P: Probability> {
    arities: Vec<usize>,
    labels: Vec<String>,
    table: Vec<P>,
}

impl<P: Probability> JointDistribution<P> {
    pub fn new(arities: Vec<usize>, labels: Vec<String>, table: Vec<P>) -> Result<Self> {
        if labels.len() != arities.len() {
            return Err(Error::Config("one label per variable".into()));
        }
        if arities.contains(&0) {
            return Err(Error::Config("arities must be positive".into()));
        }
        let size = arities
            .iter()
            .try_fold(1usize, |acc, &a| acc.checked_mul(a))
            .ok_or_else(|| Error::Config("table size overflows".into()))?;
        if table.len() != size {
            return Err(Error::Dimension(format!(
                "table has {} entries, arities need {size}",
                table.len()
            )));
        }
        if table.iter().any(|p| p.is_negative()) {
            return Err(Error::Domain("negative probability".into()));
        }
        let total = table.iter().fold(P::zero(), |acc, p| acc + p.clone());
        if !total.is_unit() {
            return Err(Error::Domain(format!("probabilities sum to {}", total.to_f64())));
        }
        Ok(Self {
            arities,
            labels,
            table,
        })
    }

    /// Empirical (or exact, when counts enumerate equally likely cases) distribution.
    pub fn from_counts(
        arities: Vec<usize>,
        labels: Vec<String>,
        counts: &BTreeMap<Vec<usize>, u64>,
    ) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::Domain("no observations".into()));
        }
        let size: usize = arities.iter().product();
        let mut table = vec![P::zero(); size];
        for (outcome, &c) in counts {
            let idx = index_of(&arities, outcome)?;
            table[idx] = P::ratio(c, total);
        }
        Self::new(arities, labels, table)
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn prob(&self, outcome: &[usize]) -> Result<P> {
        Ok(self.table[index_of(&self.arities, outcome)?].clone())
    }

    /// Joint distribution of `vars`, in that order.
    pub fn marginal(&self, vars: &[usize]) -> Result<Self> {
        for &v in vars {
            if v >= self.arities.len() {
                return Err(Error::Config(format!("no variable {v}")));
            }
        }
        let arities: Vec<usize> = vars.iter().map(|&v| self.arities[v]).collect();
        let labels = vars.iter().map(|&v| self.labels[v].clone()).collect();
        let size: usize = arities.iter().product();
        let mut table = vec![P::zero(); size];
        let mut digits = vec![0usize; self.arities.len()];
        for p in &self.table {
            let mut idx = 0;
            for &v in vars {
                idx = idx * self.arities[v] + digits[v];
            }
            table[idx] = table[idx].clone() + p.clone();
            increment(&mut digits, &self.arities);
        }
        Ok(Self {
            arities,
            labels,
            table,
        })
    }

    /// Shannon entropy in bits, with `0·lg 0 = 0`.
    pub fn entropy(&self) -> f64 {
        entropy_bits(self.table.iter().map(|p| p.to_f64()))
    }

    pub fn entropy_of(&self, vars: &[usize]) -> Result<f64> {
        Ok(self.marginal(vars)?.entropy())
    }

    /// Exact test of `p(a, b) = p(a) p(b)`.
    pub fn is_independent(&self, a: &[usize], b: &[usize]) -> Result<bool> {
        let both: Vec<usize> = a.iter().chain(b).copied().collect();
        let joint = self.marginal(&both)?;
        let pa = self.marginal(a)?;
        let pb = self.marginal(b)?;
        let nb = pb.table.len();
        let tol = if P::EXACT { 0.0 } else { 1e-12 };
        Ok(joint.table.iter().enumerate().all(|(i, p)| {
            let prod = pa.table[i / nb].clone() * pb.table[i % nb].clone();
            if P::EXACT {
                *p == prod
            } else {
                (p.to_f64() - prod.to_f64()).abs() <= tol
            }
        }))
    }

    /// `I(A; B) = H(A) + H(B) − H(A, B)` in bits. Exactly 0 when the exact mode certifies
    /// independence.
    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        if P::EXACT && self.is_independent(a, b)? {
            return Ok(0.0);
        }
        let both: Vec<usize> = a.iter().chain(b).copied().collect();
        let mi = self.entropy_of(a)? + self.entropy_of(b)? - self.entropy_of(&both)?;
        Ok(mi)
    }

    /// `p(b | a)` for one value of `a`, as a distribution over `b`.
    pub fn conditional(&self, b: &[usize], a: &[usize], a_value: &[usize]) -> Result<Vec<P>> {
        let both: Vec<usize> = a.iter().chain(b).copied().collect();
        let joint = self.marginal(&both)?;
        let pa = self.marginal(a)?.prob(a_value)?;
        if pa.is_zero() {
            return Err(Error::Domain("conditioning on a null event".into()));
        }
        let nb: usize = b.iter().map(|&v| self.arities[v]).product();
        let start = index_of(&joint.arities[..a.len()], a_value)? * nb;
        Ok(joint.table[start..start + nb]
            .iter()
            .map(|p| p.clone() / pa.clone())
            .collect())
    }
}

/// `−Σ p lg p` over an iterator of probabilities.
pub fn entropy_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

fn index_of(arities: &[usize], outcome: &[usize]) -> Result<usize> {
    if outcome.len() != arities.len() {
        return Err(Error::Dimension(format!(
            "outcome has {} coordinates, distribution has {}",
            outcome.len(),
            arities.len()
        )));
    }
    let mut idx = 0;
    for (&x, &a) in outcome.iter().zip(arities) {
        if x >= a {
            return Err(Error::Dimension(format!("value {x} out of range {a}")));
        }
        idx = idx * a + x;
    }
    Ok(idx)
}

fn increment(digits: &mut [usize], arities: &[usize]) {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < arities[i] {
            return;
        }
        digits[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn labels(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn entropies() {
        let u6 = JointDistribution::new(vec![6], labels(1), vec![1.0 / 6.0; 6]).unwrap();
        assert!((u6.entropy() - 6f64.log2()).abs() < 1e-12);
        let point = JointDistribution::new(vec![3], labels(1), vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(point.entropy(), 0.0);
        let bin = JointDistribution::new(vec![3], labels(1), vec![0.25, 0.5, 0.25]).unwrap();
        assert!((bin.entropy() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_basics() {
        let indep = JointDistribution::new(vec![2, 2], labels(2), vec![0.25; 4]).unwrap();
        assert!(indep.mutual_information(&[0], &[1]).unwrap().abs() < 1e-12);
        let copy = JointDistribution::new(vec![2, 2], labels(2), vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((copy.mutual_information(&[0], &[1]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_bit_against_weight_of_three() {
        // X = first bit, W = weight of 3 uniform bits
        let mut counts = BTreeMap::new();
        for s in 0u32..8 {
            *counts.entry(vec![(s >> 2) as usize & 1, s.count_ones() as usize]).or_insert(0) += 1;
        }
        let d = JointDistribution::<f64>::from_counts(vec![2, 4], labels(2), &counts).unwrap();
        // H(Bin(3)) − H(Bin(2))
        let h3 = entropy_bits([1.0, 3.0, 3.0, 1.0].map(|c| c / 8.0));
        let h2 = 1.5;
        assert!((d.mutual_information(&[0], &[1]).unwrap() - (h3 - h2)).abs() < 1e-12);
        assert!((h3 - h2 - 0.3113).abs() < 1e-4);
    }

    #[test]
    fn rejects_invalid_tables() {
        assert!(JointDistribution::new(vec![2], labels(1), vec![0.5, 0.6]).is_err());
        assert!(JointDistribution::new(vec![2], labels(1), vec![1.5, -0.5]).is_err());
        assert!(JointDistribution::new(vec![3], labels(1), vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn exact_mode_certifies_independence() {
        let q = |n, d| <BigRational as Probability>::ratio(n, d);
        let d = JointDistribution::new(
            vec![2, 3],
            labels(2),
            vec![q(1, 6), q(1, 6), q(1, 6), q(1, 6), q(1, 6), q(1, 6)],
        )
        .unwrap();
        assert!(d.is_independent(&[0], &[1]).unwrap());
        assert_eq!(d.mutual_information(&[0], &[1]).unwrap(), 0.0);
        let c = d.conditional(&[1], &[0], &[1]).unwrap();
        assert!(c.iter().all(|p| *p == q(1, 3)));
    }
}
