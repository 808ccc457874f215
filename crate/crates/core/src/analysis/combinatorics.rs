use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::distribution::JointDistribution;
use super::entropy::info_set_size;
use super::report::BoundReport;
use crate::error::{Error, Result};
use crate::protocol::weight_window;

/// Default cap on enumerated table entries.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Largest `(Y, Q)` table materialized as an exact [`JointDistribution`].
pub const JOINT_TABLE_LIMIT: usize = 1 << 18;

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `|𝒫(E, k)| = |E|! / (|E| − k)!`, ordered selections of `k` distinct elements.
pub fn perm_count(e_size: usize, k: usize) -> Result<BigUint> {
    if k > e_size {
        return Err(Error::Domain(format!("cannot pick {k} distinct elements out of {e_size}")));
    }
    Ok(((e_size - k + 1)..=e_size).fold(BigUint::one(), |acc, j| acc * BigUint::from(j)))
}

fn check_ranges(h: usize, n: usize, wy: usize) -> Result<()> {
    if wy > n || wy > h || h + wy < n {
        return Err(Error::Domain(format!(
            "need h − n + |y| ≥ 0 and h − |y| ≥ 0 (h = {h}, n = {n}, |y| = {wy})"
        )));
    }
    Ok(())
}

/// `|Q(x, y)| = h!² / ((h − n + |y|)! (h − |y|)!)` for balanced `x` of length 2h.
pub fn q_count(h: usize, n: usize, wy: usize) -> Result<BigUint> {
    check_ranges(h, n, wy)?;
    Ok(factorial(h) * factorial(h) / (factorial(h + wy - n) * factorial(h - wy)))
}

/// Number of balanced `x` of length 2h with `x_q = y` for a fixed `q`: `C(2h − n, h − |y|)`.
pub fn x_count(h: usize, n: usize, wy: usize) -> Result<BigUint> {
    check_ranges(h, n, wy)?;
    Ok(factorial(2 * h - n) / (factorial(h + wy - n) * factorial(h - wy)))
}

/// Calls `f` on every ordered selection of `k` distinct elements of `0..m`, in
/// lexicographic order.
pub fn for_each_arrangement(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(m: usize, k: usize, used: &mut [bool], cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for j in 0..m {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(m, k, used, cur, f);
                cur.pop();
                used[j] = false;
            }
        }
    }
    if k <= m {
        rec(m, k, &mut vec![false; m], &mut Vec::with_capacity(k), &mut f);
    }
}

/// Bit `j` of the string `x` stored as a mask (bit 0 is position 0).
fn bit(x: u64, j: usize) -> u64 {
    (x >> j) & 1
}

/// `|Q(x, y)|` by listing every arrangement, with `x = 0^h 1^h` and `y = 0^{n−|y|} 1^{|y|}`.
pub fn q_count_bruteforce(h: usize, n: usize, wy: usize) -> u64 {
    let x: u64 = ((1u64 << h) - 1) << h;
    let y: Vec<u64> = (0..n).map(|j| u64::from(j >= n - wy.min(n))).collect();
    let mut count = 0;
    for_each_arrangement(2 * h, n, |q| {
        if q.iter().zip(&y).all(|(&p, &b)| bit(x, p) == b) {
            count += 1;
        }
    });
    count
}

/// Balanced strings `x` with `x_q = y` for `q = (0, 1, …, n−1)`, by listing all of them.
pub fn x_count_bruteforce(h: usize, n: usize, wy: usize) -> u64 {
    let y: Vec<u64> = (0..n).map(|j| u64::from(j >= n - wy.min(n))).collect();
    (0u64..(1 << (2 * h)))
        .filter(|x| x.count_ones() as usize == h)
        .filter(|&x| (0..n).all(|j| bit(x, j) == y[j]))
        .count() as u64
}

/// Exact enumeration of `x ~ U(E_h)`, `y ~ U(I_{n,ε})`, `q ~ U(Q(x, y))`.
#[derive(Debug, Clone)]
pub struct QIndependence {
    pub h: usize,
    pub n: usize,
    pub epsilon: f64,
    /// Distinct values taken by `p(q | y)` over all `q ∈ 𝒫(E, n)`, `y ∈ I_{n,ε}`.
    pub p_q_given_y: BTreeSet<BigRational>,
    /// Distinct values taken by `p(x | y)` over all `x ∈ E_h`, `y ∈ I_{n,ε}`.
    pub p_x_given_y: BTreeSet<BigRational>,
    pub expected_p_q_given_y: BigRational,
    pub expected_p_x_given_y: BigRational,
    /// `I(Y; Q)` from the exact joint (0 exactly when independence is certified). Tables above
    /// [`JOINT_TABLE_LIMIT`] are not materialized and rely on `p(q|y)` being constant.
    pub mutual_information: f64,
    pub independent: bool,
}

impl QIndependence {
    pub fn holds(&self) -> bool {
        self.independent
            && self.p_q_given_y.len() == 1
            && self.p_q_given_y.contains(&self.expected_p_q_given_y)
            && self.p_x_given_y.len() == 1
            && self.p_x_given_y.contains(&self.expected_p_x_given_y)
    }

    pub fn report(&self) -> BoundReport {
        BoundReport::exact("q-independence I(Y;Q)=0", self.mutual_information, 0.0, self.holds())
            .param("h", self.h as f64)
            .param("n", self.n as f64)
            .param("epsilon", self.epsilon)
            .with_note(format!(
                "p(q|y) = {}, p(x|y) = {}",
                join(&self.p_q_given_y),
                join(&self.p_x_given_y)
            ))
    }
}

fn join(values: &BTreeSet<BigRational>) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn verify_q_independence(h: usize, n: usize, epsilon: f64) -> Result<QIndependence> {
    verify_q_independence_capped(h, n, epsilon, DEFAULT_ENUMERATION_CAP)
}

pub fn verify_q_independence_capped(h: usize, n: usize, epsilon: f64, cap: u128) -> Result<QIndependence> {
    if n == 0 || 2 * h < n || 2 * h > 20 {
        return Err(Error::Domain(format!("need 1 ≤ n ≤ 2h ≤ 20, got h = {h}, n = {n}")));
    }
    let (lo, hi) = weight_window(n, epsilon);
    if lo + h < n || hi > h {
        return Err(Error::Domain(format!(
            "weights {lo}..={hi} of I_(n,ε) are not all realizable from {h} zeros and {h} ones"
        )));
    }
    let perms = perm_count(2 * h, n)?;
    let info = info_set_size(n, epsilon)?;
    let requested = (&perms * &info).to_u128().unwrap_or(u128::MAX);
    if requested > cap {
        return Err(Error::EnumerationCap { requested, cap });
    }

    // y strings of I_{n,ε} as masks, bit j = y_j
    let ys: Vec<u64> = (0u64..(1 << n))
        .filter(|y| (lo..=hi).contains(&(y.count_ones() as usize)))
        .collect();
    let y_index: HashMap<u64, usize> = ys.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    let xs: Vec<u64> = (0u64..(1 << (2 * h)))
        .filter(|x| x.count_ones() as usize == h)
        .collect();
    let x_index: HashMap<u64, usize> = xs.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    // integer tallies: for each (y, q) the x's with x_q = y, for each (x, y) the q's
    let num_q = perms.to_usize().expect("capped");
    let mut n_yq = vec![0u64; ys.len() * num_q];
    let mut n_xy = vec![0u64; xs.len() * ys.len()];
    let mut qi = 0;
    for_each_arrangement(2 * h, n, |q| {
        for &x in &xs {
            let y = q
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &p)| acc | (bit(x, p) << j));
            if let Some(&yi) = y_index.get(&y) {
                n_yq[yi * num_q + qi] += 1;
                n_xy[x_index[&x] * ys.len() + yi] += 1;
            }
        }
        qi += 1;
    });

    let big = |u: &BigUint| BigInt::from(u.clone());
    let q_counts: Vec<BigInt> = (0..=n)
        .map(|w| q_count(h, n, w).map(|c| big(&c)).unwrap_or_default())
        .collect();
    let e_size = BigInt::from(xs.len());
    let i_size = big(&info);
    // p(y, q) = #{x : x_q = y} / (|E_h| |I| |Q(y)|)
    let joint_entry = |count: u64, y: u64| {
        BigRational::new(
            BigInt::from(count),
            &e_size * &i_size * &q_counts[y.count_ones() as usize],
        )
    };
    let build_joint = n_yq.len() <= JOINT_TABLE_LIMIT;
    let mut table = Vec::with_capacity(if build_joint { n_yq.len() } else { 0 });
    let mut p_q_given_y = BTreeSet::new();
    for (yi, &y) in ys.iter().enumerate() {
        for qi in 0..num_q {
            let p = joint_entry(n_yq[yi * num_q + qi], y);
            p_q_given_y.insert(&p * BigRational::from(i_size.clone()));
            if build_joint {
                table.push(p);
            }
        }
    }
    let mut p_x_given_y = BTreeSet::new();
    for xi in 0..xs.len() {
        for (yi, &y) in ys.iter().enumerate() {
            let p = joint_entry(n_xy[xi * ys.len() + yi], y);
            p_x_given_y.insert(p * BigRational::from(i_size.clone()));
        }
    }

    let (independent, mutual_information) = if build_joint {
        let joint = JointDistribution::new(vec![ys.len(), num_q], vec!["Y".into(), "Q".into()], table)?;
        (joint.is_independent(&[0], &[1])?, joint.mutual_information(&[0], &[1])?)
    } else {
        // a constant p(q|y) is the factorization p(y, q) = p(y) p(q) itself
        let constant = p_q_given_y.len() == 1;
        (constant, if constant { 0.0 } else { f64::NAN })
    };
    let ratio = |a: BigUint, b: BigUint| BigRational::new(BigInt::from(a), BigInt::from(b));
    Ok(QIndependence {
        h,
        n,
        epsilon,
        p_q_given_y,
        p_x_given_y,
        expected_p_q_given_y: ratio(factorial(2 * h - n), factorial(2 * h)),
        expected_p_x_given_y: ratio(factorial(h) * factorial(h), factorial(2 * h)),
        mutual_information,
        independent,
    })
}

/// Closed forms against enumeration for every `(h, n, |y|)` with `2h ≤ max_2h`, plus the
/// exact `p(q|y)`, `p(x|y)` and `I(Y;Q)` checks at each `(h, n)`.
pub fn lemma_sweep(max_2h: usize) -> Result<Vec<BoundReport>> {
    let mut reports = Vec::new();
    for h in 1..=max_2h / 2 {
        for n in 1..=2 * h {
            for wy in n.saturating_sub(h)..=n.min(h) {
                let closed = q_count(h, n, wy)?.to_u64().expect("small");
                let brute = q_count_bruteforce(h, n, wy);
                reports.push(
                    BoundReport::exact("q_count vs enumeration", closed as f64, brute as f64, closed == brute)
                        .param("h", h as f64)
                        .param("n", n as f64)
                        .param("wy", wy as f64),
                );
                let closed = x_count(h, n, wy)?.to_u64().expect("small");
                let brute = x_count_bruteforce(h, n, wy);
                reports.push(
                    BoundReport::exact("x_count vs enumeration", closed as f64, brute as f64, closed == brute)
                        .param("h", h as f64)
                        .param("n", n as f64)
                        .param("wy", wy as f64),
                );
            }
            let epsilon = ((2 * h - n) as f64 / n as f64).min(1.0);
            reports.push(match verify_q_independence(h, n, epsilon) {
                Ok(r) => r.report(),
                Err(e @ Error::EnumerationCap { .. }) => {
                    BoundReport::skipped("q-independence I(Y;Q)=0", e.to_string())
                        .param("h", h as f64)
                        .param("n", n as f64)
                }
                Err(e) => return Err(e),
            });
        }
    }
    Ok(reports)
}
