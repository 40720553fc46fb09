//! Generating functions for permutations admitting an n-th root.
//!
//! With `d = d_n(r)` from [`root_divisor`], the probability generating
//! function is
//!
//! ```text
//! p(x) = prod_{r >= 1} exp_d(x^r / r)
//!      = q1(x) * B(x),
//! q1(x) = exp(sum_{gcd(r,n)=1} x^r / r) = prod_{d | n} (1 - x^d)^{-mu(d)/d},
//! B(x)  = prod_{gcd(r,n)>1} exp_d(x^r / r)  <=  q2(x) = exp(sum_{gcd(r,n)>1} x^{r d} / r^2).
//! ```
//!
//! Truncating the infinite products at `r = N` is exact: the factor for
//! `r` is `1 + O(x^{r d})` and `r d >= r > N`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numtheory::{coprime, divisors, moebius, root_divisor, NumberTheoryError};
use crate::series::exp_sected;
use crate::{Rational, RationalSeries};

/// Root degree `n >= 2` together with the truncation order shared by
/// every generating function built from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootProblem {
    n: u64,
    order: usize,
}

impl RootProblem {
    pub fn new(n: u64, order: usize) -> Result<Self, NumberTheoryError> {
        if n < 2 {
            return Err(NumberTheoryError::DegreeTooSmall(n));
        }
        Ok(Self { n, order })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn root_divisor(&self, r: usize) -> usize {
        root_divisor(self.n, r as u64).expect("n >= 2 and r >= 1") as usize
    }

    fn coprime_to_n(&self, r: usize) -> bool {
        coprime(r as u64, self.n)
    }
}

pub(crate) fn factorials(order: usize) -> Vec<BigInt> {
    let mut fact = Vec::with_capacity(order + 1);
    fact.push(BigInt::one());
    for i in 1..=order {
        let next = &fact[i - 1] * BigInt::from(i);
        fact.push(next);
    }
    fact
}

fn binomial_rows(order: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut row = Vec::with_capacity(m + 1);
        row.push(BigInt::one());
        for j in 1..m {
            row.push(&rows[m - 1][j - 1] + &rows[m - 1][j]);
        }
        if m > 0 {
            row.push(BigInt::one());
        }
        rows.push(row);
    }
    rows
}

/// Product of sected exponentials `exp_d(x^r / r)` over `factors`,
/// returned in factorial-scaled form: entry `m` is `m!` times the
/// coefficient of `x^m`.
///
/// Each factor has scaled coefficient `(i r d)! / (r^{i d} (i d)!)` at
/// `x^{i r d}` (the number of permutations of `i r d` points made of
/// `i d` cycles of length `r`), so all arithmetic stays in the integers
/// and products become binomial convolutions.
pub(crate) fn sected_product_counts(
    order: usize,
    factors: impl IntoIterator<Item = (usize, usize)>,
) -> Vec<BigInt> {
    let fact = factorials(order);
    let binom = binomial_rows(order);
    let mut counts = vec![BigInt::zero(); order + 1];
    counts[0] = BigInt::one();
    for (d, r) in factors {
        let step = r * d;
        if step > order {
            continue;
        }
        let r_pow_d = BigInt::from(r).pow(d as u32);
        let mut weights = vec![BigInt::one()];
        let mut r_pow = BigInt::one();
        for i in 1..=order / step {
            r_pow *= &r_pow_d;
            weights.push(&fact[i * step] / (&r_pow * &fact[i * d]));
        }
        for m in (step..=order).rev() {
            let mut acc = counts[m].clone();
            for i in 1..=m / step {
                let prev = &counts[m - i * step];
                if !prev.is_zero() {
                    acc += &binom[m][i * step] * &weights[i] * prev;
                }
            }
            counts[m] = acc;
        }
    }
    counts
}

fn counts_to_series(counts: &[BigInt]) -> RationalSeries {
    let fact = factorials(counts.len() - 1);
    RationalSeries::from_fn(counts.len() - 1, |m| {
        Rational::new(counts[m].clone(), fact[m].clone())
    })
}

/// `k! p_k` for `k = 0..=N`: the number of permutations of `k` points
/// that are n-th powers.
pub fn build_p_counts(prob: &RootProblem) -> Vec<BigInt> {
    let order = prob.order;
    sected_product_counts(order, (1..=order).map(|r| (prob.root_divisor(r), r)))
}

/// `p(x) = prod_r exp_{d_n(r)}(x^r / r)`; `p_k` is the probability that a
/// uniform permutation of `k` points has an n-th root.
pub fn build_p(prob: &RootProblem) -> RationalSeries {
    counts_to_series(&build_p_counts(prob))
}

/// `q1` from the Moebius product `prod_{d | n} (1 - x^d)^{-mu(d)/d}`.
pub fn build_q1(prob: &RootProblem) -> RationalSeries {
    let order = prob.order;
    let mut q1 = RationalSeries::one(order);
    for d in divisors(prob.n).expect("n >= 2") {
        let mu = moebius(d).expect("d >= 1");
        if mu == 0 {
            continue;
        }
        let mut base = RationalSeries::one(order);
        if (d as usize) <= order {
            base = &base - &RationalSeries::monomial(order, d as usize, Rational::one());
        }
        let e = Rational::new(BigInt::from(-mu), BigInt::from(d));
        let factor = base.pow_rational(&e).expect("constant term is 1");
        q1 = &q1 * &factor;
    }
    q1
}

/// `q1` from its defining exponential `exp(sum_{gcd(r,n)=1} x^r / r)`.
pub fn build_q1_exp(prob: &RootProblem) -> RationalSeries {
    let exponent = RationalSeries::from_fn(prob.order, |r| {
        if r >= 1 && prob.coprime_to_n(r) {
            Rational::new(BigInt::one(), BigInt::from(r))
        } else {
            Rational::zero()
        }
    });
    exponent.exp_series().expect("zero constant term")
}

/// Exponent of `q2`: `sum_{gcd(r,n)>1} x^{r d_n(r)} / r^2`.
pub fn q2_exponent(prob: &RootProblem) -> RationalSeries {
    let order = prob.order;
    let mut coeffs = vec![Rational::zero(); order + 1];
    for r in 1..=order {
        if prob.coprime_to_n(r) {
            continue;
        }
        let m = r * prob.root_divisor(r);
        if m <= order {
            coeffs[m] += Rational::new(BigInt::one(), BigInt::from(r * r));
        }
    }
    RationalSeries::new(coeffs).expect("order + 1 coefficients")
}

pub fn build_q2(prob: &RootProblem) -> RationalSeries {
    q2_exponent(prob).exp_series().expect("zero constant term")
}

/// `B(x) = prod_{gcd(r,n)>1} exp_{d_n(r)}(x^r / r)`, so that `p = q1 B`.
pub fn build_b(prob: &RootProblem) -> RationalSeries {
    counts_to_series(&build_b_counts(prob))
}

pub(crate) fn build_b_counts(prob: &RootProblem) -> Vec<BigInt> {
    let order = prob.order;
    sected_product_counts(
        order,
        (1..=order)
            .filter(|&r| !prob.coprime_to_n(r))
            .map(|r| (prob.root_divisor(r), r)),
    )
}

/// `exp(x^k / k!)`, the dominating series for `exp_k(x)`.
pub fn sected_bound(k: usize, order: usize) -> RationalSeries {
    let k_fact = factorials(k).pop().expect("k! exists");
    RationalSeries::monomial(order, 1, Rational::one())
        .exp_series()
        .expect("zero constant term")
        .substitute_monomial(k, &Rational::new(BigInt::one(), k_fact))
}

/// Outcome of the coefficientwise comparisons behind `p <= q1 q2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationReport {
    /// `q1 * q2 >= p`.
    pub q1q2_dominates_p: bool,
    /// `q2 >= B`.
    pub q2_dominates_b: bool,
    /// `(k, exp(x^k/k!) >= exp_k(x))` for each distinct `d_n(r) > 1` with
    /// `r d_n(r) <= N`.
    pub sected: Vec<(usize, bool)>,
}

impl DominationReport {
    pub fn all_hold(&self) -> bool {
        self.q1q2_dominates_p && self.q2_dominates_b && self.sected.iter().all(|&(_, ok)| ok)
    }
}

pub fn check_dominations(prob: &RootProblem) -> DominationReport {
    let order = prob.order;
    let q1 = build_q1(prob);
    let q2 = build_q2(prob);
    let p = build_p(prob);
    let b = build_b(prob);

    let mut ks: Vec<usize> = (1..=order)
        .map(|r| (r, prob.root_divisor(r)))
        .filter(|&(r, d)| d > 1 && r * d <= order)
        .map(|(_, d)| d)
        .collect();
    ks.sort_unstable();
    ks.dedup();
    let sected = ks
        .into_iter()
        .map(|k| {
            let ok = sected_bound(k, order).dominates(&exp_sected(k, 1, &Rational::one(), order));
            (k, ok)
        })
        .collect();

    DominationReport {
        q1q2_dominates_p: (&q1 * &q2).dominates(&p),
        q2_dominates_b: q2.dominates(&b),
        sected,
    }
}
