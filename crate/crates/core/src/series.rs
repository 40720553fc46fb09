//! Truncated formal power series and the coefficientwise dominance order.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0..=c_N`. Every binary
//! operation returns a series whose order is the smaller of the two
//! operand orders; nothing is ever silently extended with zeros.

use std::ops::{Add, Index, Mul, Neg, Sub};

use thiserror::Error;

use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("a truncated series needs at least one coefficient")]
    Empty,
    #[error("exp requires a zero constant term")]
    NonzeroConstant,
    #[error("log and fractional powers require constant term 1")]
    ConstantNotOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> TruncatedSeries<T> {
    /// Builds a series of order `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| T::zero())
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, T::one())
    }

    /// `coeff * x^power`, truncated at `order` (so it is zero when
    /// `power > order`).
    pub fn monomial(order: usize, power: usize, coeff: T) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = coeff;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &T {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Drops every coefficient above `order`. Orders above the current
    /// one leave the series unchanged.
    pub fn truncated(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=keep].to_vec(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.clone() * s).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Cauchy product, exact for exact scalars. Zero coefficients of the
    /// sparser factor are skipped, so multiplying by a lacunary series
    /// costs `O(N * nnz)`.
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            coeffs: T::cauchy_product(&self.coeffs, &other.coeffs),
        }
    }

    /// `exp(f)` via `m g_m = sum_{j=1}^m j f_j g_{m-j}`.
    pub fn exp_series(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        Ok(Self {
            coeffs: T::exp_recurrence(&self.coeffs),
        })
    }

    /// `log(f)` for `f_0 = 1`, the inverse of [`exp_series`](Self::exp_series).
    pub fn log_series(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantNotOne);
        }
        let order = self.order();
        // m g_m = m f_m - sum_{j=1}^{m-1} j g_j f_{m-j}
        let mut g: Vec<T> = vec![T::zero(); order + 1];
        let mut weighted: Vec<T> = vec![T::zero(); order + 1];
        for m in 1..=order {
            let mut acc = self.coeffs[m].clone() * T::from_count(m);
            for (w, f) in weighted[1..m].iter().zip(self.coeffs[1..m].iter().rev()) {
                if !f.is_zero() && !w.is_zero() {
                    acc -= &(w.clone() * f);
                }
            }
            g[m] = acc / T::from_count(m);
            weighted[m] = g[m].clone() * T::from_count(m);
        }
        Ok(Self { coeffs: g })
    }

    /// `f^e` for `f_0 = 1`, equal to `exp(e * log f)`.
    ///
    /// Uses `m g_m = sum_{j=1}^m ((e + 1) j - m) f_j g_{m-j}`, which follows
    /// from `f g' = e f' g`.
    pub fn pow_rational(&self, e: &T) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantNotOne);
        }
        let order = self.order();
        let e1 = e.clone() + T::one();
        let support: Vec<usize> = (1..=order).filter(|&j| !self.coeffs[j].is_zero()).collect();
        let mut g: Vec<T> = Vec::with_capacity(order + 1);
        g.push(T::one());
        for m in 1..=order {
            let mut weighted = T::zero();
            let mut plain = T::zero();
            for &j in support.iter().take_while(|&&j| j <= m) {
                let prev = &g[m - j];
                if prev.is_zero() {
                    continue;
                }
                let term = self.coeffs[j].clone() * prev;
                weighted += &(term.clone() * T::from_count(j));
                plain += &term;
            }
            let mg = e1.clone() * weighted - plain * T::from_count(m);
            g.push(mg / T::from_count(m));
        }
        Ok(Self { coeffs: g })
    }

    /// `f(s * x^r)`, kept at the order of `f`.
    pub fn substitute_monomial(&self, r: usize, s: &T) -> Self {
        assert!(r >= 1, "substitution power must be positive");
        let order = self.order();
        let mut out = Self::zero(order);
        let mut s_pow = T::one();
        for (i, m) in (0..=order).step_by(r).enumerate() {
            out.coeffs[m] = self.coeffs[i].clone() * &s_pow;
            s_pow *= s;
        }
        out
    }

    /// `true` iff `f_m >= g_m` on the shared prefix `0..=min(orders)`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a >= b)
    }
}

/// The sected exponential `exp_d(y) = sum_i y^{id} / (id)!` evaluated at
/// `y = s * x^r`, truncated at `order`.
pub fn exp_sected<T: Scalar>(d: usize, r: usize, s: &T, order: usize) -> TruncatedSeries<T> {
    assert!(d >= 1 && r >= 1, "sected exponential needs d, r >= 1");
    let step = r * d;
    let mut s_d = T::one();
    for _ in 0..d {
        s_d *= s;
    }
    let mut out = TruncatedSeries::one(order);
    let mut term = T::one();
    let mut i = 1;
    while i * step <= order {
        term *= &s_d;
        for t in ((i - 1) * d + 1)..=(i * d) {
            term = term / T::from_count(t);
        }
        out.coeffs[i * step] = term.clone();
        i += 1;
    }
    out
}

impl<T: Scalar> Index<usize> for TruncatedSeries<T> {
    type Output = T;

    fn index(&self, m: usize) -> &T {
        &self.coeffs[m]
    }
}

impl<T: Scalar> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        self.zip_with(rhs, |a, b| a.clone() + b)
    }
}

impl<T: Scalar> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        self.zip_with(rhs, |a, b| a.clone() - b)
    }
}

impl<T: Scalar> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn mul(self, rhs: Self) -> TruncatedSeries<T> {
        TruncatedSeries::mul(self, rhs)
    }
}

impl<T: Scalar> Neg for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn neg(self) -> TruncatedSeries<T> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}
