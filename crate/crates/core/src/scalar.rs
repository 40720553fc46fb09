use std::fmt::Debug;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, NumRef, One, Signed, ToPrimitive, Zero};

/// Coefficient type accepted by [`TruncatedSeries`](crate::TruncatedSeries).
///
/// Implemented for `f32`, `f64` and `BigRational`. Only the rational
/// instance gives exact results; the float instances exist for
/// diagnostics on data that is not rational to begin with.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Signed
    + NumRef
    + FromPrimitive
    + ToPrimitive
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar")
    }

    /// `num / den` in this scalar type.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("numerator representable")
            / Self::from_i64(den).expect("denominator representable")
    }

    /// Coefficients `g_0..=g_N` of `exp(f)` for `f_0 = 0`.
    fn exp_recurrence(f: &[Self]) -> Vec<Self> {
        exp_recurrence_generic(f)
    }

    /// `c_m = sum_{i<=m} f_i g_{m-i}` for `m < min(len)`.
    fn cauchy_product(f: &[Self], g: &[Self]) -> Vec<Self> {
        cauchy_product_generic(f, g)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

impl Scalar for BigRational {
    fn exp_recurrence(f: &[Self]) -> Vec<Self> {
        exp_recurrence_common_denominator(f)
    }

    fn cauchy_product(f: &[Self], g: &[Self]) -> Vec<Self> {
        cauchy_product_common_denominator(f, g)
    }
}

/// Support of the sparser operand first.
fn sparse_first<'a, T: Zero>(f: &'a [T], g: &'a [T]) -> (Vec<usize>, &'a [T], &'a [T]) {
    let nnz = |s: &[T]| s.iter().filter(|c| !c.is_zero()).count();
    let (sparse, dense) = if nnz(f) <= nnz(g) { (f, g) } else { (g, f) };
    let support = (0..sparse.len())
        .filter(|&i| !sparse[i].is_zero())
        .collect();
    (support, sparse, dense)
}

pub fn cauchy_product_generic<T: Scalar>(f: &[T], g: &[T]) -> Vec<T> {
    let len = f.len().min(g.len());
    let (support, sparse, dense) = sparse_first(&f[..len], &g[..len]);
    (0..len)
        .map(|m| {
            let mut acc = T::zero();
            for &i in support.iter().take_while(|&&i| i <= m) {
                let other = &dense[m - i];
                if !other.is_zero() {
                    acc += &(sparse[i].clone() * other);
                }
            }
            acc
        })
        .collect()
}

/// Integer numerators over one denominator per operand.
fn over_common_denominator(f: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let common = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let numers = f
        .iter()
        .map(|c| c.numer() * (&common / c.denom()))
        .collect();
    (numers, common)
}

/// [`cauchy_product_generic`] as an integer convolution followed by one
/// reduction per output coefficient.
pub fn cauchy_product_common_denominator(f: &[BigRational], g: &[BigRational]) -> Vec<BigRational> {
    let len = f.len().min(g.len());
    let (support, sparse, dense) = sparse_first(&f[..len], &g[..len]);
    let (sparse, ds) = over_common_denominator(sparse);
    let (dense, dd) = over_common_denominator(dense);
    let denom = ds * dd;
    (0..len)
        .map(|m| {
            let mut acc = BigInt::zero();
            for &i in support.iter().take_while(|&&i| i <= m) {
                let other = &dense[m - i];
                if !other.is_zero() {
                    acc += &sparse[i] * other;
                }
            }
            BigRational::new(acc, denom.clone())
        })
        .collect()
}

/// `g_0 = 1`, `m g_m = sum_{j=1}^m j f_j g_{m-j}`.
pub fn exp_recurrence_generic<T: Scalar>(f: &[T]) -> Vec<T> {
    let order = f.len() - 1;
    let weighted: Vec<(usize, T)> = (1..=order)
        .filter(|&j| !f[j].is_zero())
        .map(|j| (j, f[j].clone() * T::from_count(j)))
        .collect();
    let mut g: Vec<T> = Vec::with_capacity(order + 1);
    g.push(T::one());
    for m in 1..=order {
        let mut acc = T::zero();
        for (j, jf) in weighted.iter().take_while(|(j, _)| *j <= m) {
            let prev = &g[m - j];
            if !prev.is_zero() {
                acc += &(jf.clone() * prev);
            }
        }
        g.push(acc / T::from_count(m));
    }
    g
}

/// Same recurrence as [`exp_recurrence_generic`], with every `j f_j` over
/// one denominator `Q` and every `g_i` over one denominator `L`, so each
/// inner sum is an integer dot product. One gcd per output coefficient
/// instead of one per term.
pub fn exp_recurrence_common_denominator(f: &[BigRational]) -> Vec<BigRational> {
    let order = f.len() - 1;
    let weighted: Vec<(usize, BigRational)> = (1..=order)
        .filter(|&j| !f[j].is_zero())
        .map(|j| (j, &f[j] * BigInt::from(j)))
        .collect();
    let q = weighted
        .iter()
        .fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
    let scaled: Vec<(usize, BigInt)> = weighted
        .iter()
        .map(|(j, w)| (*j, w.numer() * (&q / w.denom())))
        .collect();

    // g_i = numerators[i] / common
    let mut common = BigInt::one();
    let mut numerators: Vec<BigInt> = vec![BigInt::one()];
    let mut g = vec![BigRational::one()];
    for m in 1..=order {
        let mut sum = BigInt::zero();
        for (j, p) in scaled.iter().take_while(|(j, _)| *j <= m) {
            let prev = &numerators[m - j];
            if !prev.is_zero() {
                sum += p * prev;
            }
        }
        let gm = BigRational::new(sum, BigInt::from(m) * &q * &common);
        let den = gm.denom();
        let grow = den / den.gcd(&common);
        if !grow.is_one() {
            for a in numerators.iter_mut() {
                *a *= &grow;
            }
            common *= &grow;
        }
        numerators.push(gm.numer() * (&common / den));
        g.push(gm);
    }
    g
}
