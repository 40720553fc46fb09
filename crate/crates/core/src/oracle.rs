//! Independent ground truth for the generating functions: brute-force
//! n-th-power images of `S_k`, and sums of conjugacy-class sizes over
//! cycle types passing the divisibility criterion.
//!
//! Nothing here uses how an n-th power splits cycles; the image counts
//! come straight from composing permutations.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::numtheory::root_divisor;

/// Largest `k` accepted by the image enumeration (`8! = 40320`).
pub const MAX_IMAGE_K: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("image enumeration is capped at k = {cap}, got {k}")]
    TooLarge { k: usize, cap: usize },
    #[error("root degree must be at least 2, got {0}")]
    DegreeTooSmall(u64),
}

/// Cycle type of a permutation of `k` points as `(length, multiplicity)`
/// pairs, ascending by length, multiplicities positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    k: usize,
    counts: Vec<(usize, usize)>,
}

impl CycleType {
    /// From a multiset of positive cycle lengths in any order.
    pub fn from_parts(parts: &[usize]) -> Self {
        let mut sorted = parts.to_vec();
        sorted.sort_unstable();
        let mut counts: Vec<(usize, usize)> = Vec::new();
        for r in sorted {
            assert!(r >= 1, "cycle lengths are positive");
            match counts.last_mut() {
                Some((len, m)) if *len == r => *m += 1,
                _ => counts.push((r, 1)),
            }
        }
        Self {
            k: parts.iter().sum(),
            counts,
        }
    }

    /// Cycle type of a permutation given as its image array.
    pub fn of_permutation(perm: &[u8]) -> Self {
        let mut seen = vec![false; perm.len()];
        let mut parts = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i] as usize;
                len += 1;
            }
            parts.push(len);
        }
        Self::from_parts(&parts)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &[(usize, usize)] {
        &self.counts
    }

    /// Number of cycles of length `r`.
    pub fn count(&self, r: usize) -> usize {
        self.counts
            .iter()
            .find(|&&(len, _)| len == r)
            .map_or(0, |&(_, m)| m)
    }

    /// Size of the conjugacy class: `k! / prod_r (r^{m_r} m_r!)`.
    pub fn class_size(&self) -> BigUint {
        let mut denom = BigUint::one();
        for &(r, m) in &self.counts {
            denom *= BigUint::from(r).pow(m as u32);
            for i in 2..=m {
                denom *= BigUint::from(i);
            }
        }
        let fact = (2..=self.k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
        fact / denom
    }
}

/// Partitions of `k` as nonincreasing part lists, starting from `[k]` and
/// proceeding in decreasing lexicographic order.
#[derive(Debug, Clone)]
pub struct Partitions {
    parts: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn advance(&mut self) -> bool {
        // rightmost part larger than 1
        let Some(pos) = self.parts.iter().rposition(|&p| p > 1) else {
            return false;
        };
        let ones = self.parts.len() - pos - 1;
        let value = self.parts[pos] - 1;
        self.parts.truncate(pos);
        let mut rest = ones + 1 + value;
        while rest >= value {
            self.parts.push(value);
            rest -= value;
        }
        if rest > 0 {
            self.parts.push(rest);
        }
        true
    }
}

impl Iterator for Partitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.parts.clone();
        self.done = !self.advance();
        Some(current)
    }
}

pub fn partition_lists(k: usize) -> Partitions {
    Partitions {
        parts: if k == 0 { Vec::new() } else { vec![k] },
        done: false,
    }
}

/// Every partition of `k` exactly once, as a [`CycleType`].
pub fn partitions(k: usize) -> impl Iterator<Item = CycleType> {
    partition_lists(k).map(|parts| CycleType::from_parts(&parts))
}

fn check_degree(n: u64) -> Result<(), OracleError> {
    if n < 2 {
        Err(OracleError::DegreeTooSmall(n))
    } else {
        Ok(())
    }
}

/// A permutation with this cycle type has an n-th root iff every nonzero
/// `m_r` is a multiple of `d_n(r)`.
pub fn criterion(ct: &CycleType, n: u64) -> Result<bool, OracleError> {
    check_degree(n)?;
    Ok(ct.counts.iter().all(|&(r, m)| {
        let d = root_divisor(n, r as u64).expect("n >= 2, r >= 1") as usize;
        m % d == 0
    }))
}

/// `sum` of class sizes over cycle types of `k` passing [`criterion`].
pub fn count_by_cycle_types(k: usize, n: u64) -> Result<BigUint, OracleError> {
    Ok(counts_by_cycle_types(k, &[n])?.remove(0))
}

/// Same as [`count_by_cycle_types`] for several degrees, sharing one pass
/// over the partitions of `k`.
pub fn counts_by_cycle_types(k: usize, ns: &[u64]) -> Result<Vec<BigUint>, OracleError> {
    for &n in ns {
        check_degree(n)?;
    }
    let divs: Vec<Vec<usize>> = ns
        .iter()
        .map(|&n| {
            (0..=k.max(1))
                .map(|r| {
                    if r == 0 {
                        1
                    } else {
                        root_divisor(n, r as u64).unwrap() as usize
                    }
                })
                .collect()
        })
        .collect();
    let mut totals = vec![BigUint::default(); ns.len()];
    for ct in partitions(k) {
        let passing: Vec<usize> = (0..ns.len())
            .filter(|&i| ct.counts.iter().all(|&(r, m)| m % divs[i][r] == 0))
            .collect();
        if passing.is_empty() {
            continue;
        }
        let size = ct.class_size();
        for i in passing {
            totals[i] += &size;
        }
    }
    Ok(totals)
}

/// All permutations of `0..k` as image arrays, in lexicographic order.
pub fn permutations(k: usize) -> impl Iterator<Item = Vec<u8>> {
    let mut next: Option<Vec<u8>> = Some((0..k as u8).collect());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut p = current.clone();
        // standard next-permutation step
        if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
            next = Some(p);
        }
        Some(current)
    })
}

fn compose(outer: &[u8], inner: &[u8]) -> Vec<u8> {
    inner.iter().map(|&i| outer[i as usize]).collect()
}

/// `tau^n` by repeated squaring.
pub fn power(tau: &[u8], n: u64) -> Vec<u8> {
    let mut result: Vec<u8> = (0..tau.len() as u8).collect();
    let mut base = tau.to_vec();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = compose(&base, &result);
        }
        base = compose(&base, &base);
        e >>= 1;
    }
    result
}

/// `{tau^n : tau in S_k}`.
pub fn nth_power_image(k: usize, n: u64) -> Result<HashSet<Vec<u8>>, OracleError> {
    check_degree(n)?;
    if k > MAX_IMAGE_K {
        return Err(OracleError::TooLarge {
            k,
            cap: MAX_IMAGE_K,
        });
    }
    Ok(permutations(k).map(|tau| power(&tau, n)).collect())
}

pub fn nth_power_image_count(k: usize, n: u64) -> Result<usize, OracleError> {
    Ok(nth_power_image(k, n)?.len())
}
