//! Certified coefficient envelopes.
//!
//! An [`Envelope`] `(C, k)` claims `c_m <= C m^{-k}` for every `m >= 1`
//! of the series it describes; the constant term is carried separately by
//! the caller. Envelopes propagate through Cauchy products, powers and
//! `exp` using
//!
//! ```text
//! (a b)_m   <= 2^{k+1} A B zeta(k) m^{-k}
//! (f^n)_m   <= C^n 2^{(k+1)(n-1)} zeta(k)^{n-1} m^{-k}
//! exp(f)_m  <= exp(2^{k+1} C zeta(k)) / (2^{k+1} zeta(k)) m^{-k}
//! ```
//!
//! for series with nonnegative coefficients and zero constant term.
//! `zeta(k)` and `exp` are replaced by rational bounds on the side that
//! keeps each constant an upper bound, so everything here is exact.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numtheory::divisors;
use crate::{Rational, RationalSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("envelope exponent must be at least 2, got {0}")]
    ExponentTooSmall(u32),
    #[error("envelope exponents differ: {0} vs {1}")]
    ExponentMismatch(u32, u32),
    #[error("envelope constant must be nonnegative")]
    NegativeConstant,
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("zeta cutoff must be at least 1")]
    ZeroCutoff,
    #[error("exp argument must be nonnegative")]
    NegativeArgument,
    #[error("exp tail bound needs x < terms + 2 (x = {x}, terms = {terms})")]
    TooFewTerms { x: String, terms: usize },
    #[error("coefficient {0} is negative")]
    NegativeCoefficient(usize),
    #[error("root degree must be at least 2, got {0}")]
    DegreeTooSmall(u64),
}

/// Tuning for the rational bounds; tightness only, never soundness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundConfig {
    pub zeta_cutoff: usize,
    pub exp_terms: usize,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            zeta_cutoff: 32,
            exp_terms: 48,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundTarget {
    /// `zeta(k)` from above.
    ZetaUpper(u32),
    /// `zeta(k)` from below.
    ZetaLower(u32),
    /// `exp(x)` from above.
    ExpUpper(Rational),
}

/// A rational one-sided bound on a transcendental quantity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalBound {
    pub value: Rational,
    pub target: BoundTarget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    c: Rational,
    k: u32,
}

impl Envelope {
    pub fn new(c: Rational, k: u32) -> Result<Self, EnvelopeError> {
        if k < 2 {
            return Err(EnvelopeError::ExponentTooSmall(k));
        }
        if c.is_negative() {
            return Err(EnvelopeError::NegativeConstant);
        }
        Ok(Self { c, k })
    }

    pub fn constant(&self) -> &Rational {
        &self.c
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    /// Checks the claim `c_m m^k <= C` on `1..=order` of `f`, exactly.
    /// Returns the first violating index.
    pub fn first_violation(&self, f: &RationalSeries) -> Option<usize> {
        (1..=f.order()).find(|&m| scaled_coeff(f, m, self.k) > self.c)
    }
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn scaled_coeff(f: &RationalSeries, m: usize, k: u32) -> Rational {
    f[m].clone() * Rational::from_integer(BigInt::from(m).pow(k))
}

fn zeta_partial(k: u32, cutoff: usize) -> Rational {
    (1..=cutoff)
        .map(|i| Rational::new(BigInt::one(), BigInt::from(i).pow(k)))
        .sum()
}

/// `sum_{i<=M} i^{-k} + M^{1-k} / (k-1)`, which is at least `zeta(k)`.
pub fn zeta_upper(k: u32, cutoff: usize) -> Result<RationalBound, EnvelopeError> {
    if k < 2 {
        return Err(EnvelopeError::ExponentTooSmall(k));
    }
    if cutoff == 0 {
        return Err(EnvelopeError::ZeroCutoff);
    }
    let tail = Rational::new(
        BigInt::one(),
        BigInt::from(cutoff).pow(k - 1) * BigInt::from(k - 1),
    );
    Ok(RationalBound {
        value: zeta_partial(k, cutoff) + tail,
        target: BoundTarget::ZetaUpper(k),
    })
}

/// The partial sum `sum_{i<=M} i^{-k}`, which is at most `zeta(k)`.
pub fn zeta_lower(k: u32, cutoff: usize) -> Result<RationalBound, EnvelopeError> {
    if k < 2 {
        return Err(EnvelopeError::ExponentTooSmall(k));
    }
    if cutoff == 0 {
        return Err(EnvelopeError::ZeroCutoff);
    }
    Ok(RationalBound {
        value: zeta_partial(k, cutoff),
        target: BoundTarget::ZetaLower(k),
    })
}

/// Upper bound on `exp(x)`: the partial sum through `x^T / T!` plus the
/// geometric tail bound `x^{T+1} / (T+1)! * 1 / (1 - x / (T+2))`.
pub fn exp_upper(x: &Rational, terms: usize) -> Result<RationalBound, EnvelopeError> {
    if x.is_negative() {
        return Err(EnvelopeError::NegativeArgument);
    }
    if *x >= int(terms + 2) {
        return Err(EnvelopeError::TooFewTerms {
            x: x.to_string(),
            terms,
        });
    }
    // sum_{i<=T} x^i / i! with x = a / b, as an integer over b^T T!:
    // t_i = a^i b^{T-i} T! / i!, t_0 = b^T T!, t_i = t_{i-1} a / (b i)
    let (a, b) = (x.numer(), x.denom());
    let mut t = b.pow(terms as u32) * (1..=terms).fold(BigInt::one(), |acc, i| acc * i);
    let denom = t.clone();
    let mut numer = t.clone();
    for i in 1..=terms {
        t = t * a / (b * BigInt::from(i));
        numer += &t;
    }
    let sum = Rational::new(numer, denom.clone());
    // x^{T+1} / (T+1)! = t_T a / (b (T+1)) / (b^T T!)
    let next = Rational::new(t * a, denom * b * BigInt::from(terms + 1));
    let ratio = Rational::one() - x / int(terms + 2);
    Ok(RationalBound {
        value: sum + next / ratio,
        target: BoundTarget::ExpUpper(x.clone()),
    })
}

/// Terms to use for `exp_upper(x)`: at least the configured count and
/// always enough for the tail bound to be valid.
fn exp_terms_for(x: &Rational, configured: usize) -> usize {
    let ceil = x.ceil().to_integer().to_usize().unwrap_or(usize::MAX / 4);
    configured.max(2 * ceil)
}

fn two_pow(e: u32) -> Rational {
    Rational::from_integer(BigInt::from(2u8).pow(e))
}

/// Envelope of the Cauchy product of two zero-constant-term series.
pub fn conv_envelope(
    a: &Envelope,
    b: &Envelope,
    cfg: &BoundConfig,
) -> Result<Envelope, EnvelopeError> {
    if a.k != b.k {
        return Err(EnvelopeError::ExponentMismatch(a.k, b.k));
    }
    let k = a.k;
    let zeta = zeta_upper(k, cfg.zeta_cutoff)?.value;
    Envelope::new(two_pow(k + 1) * &a.c * &b.c * zeta, k)
}

/// Envelope of `f^n`; the identity for `n = 1`.
pub fn pow_envelope(f: &Envelope, n: u32, cfg: &BoundConfig) -> Result<Envelope, EnvelopeError> {
    if n == 0 {
        return Err(EnvelopeError::ZeroPower);
    }
    if n == 1 {
        return Ok(f.clone());
    }
    let zeta = zeta_upper(f.k, cfg.zeta_cutoff)?.value;
    let c = Pow::pow(&f.c, n) * two_pow((f.k + 1) * (n - 1)) * Pow::pow(&zeta, n - 1);
    Envelope::new(c, f.k)
}

/// Envelope of `exp(f) - 1`.
///
/// The numerator uses an upper bound on `zeta(k)` inside `exp`; the
/// denominator uses the partial-sum lower bound, so the quotient stays an
/// upper bound.
pub fn exp_envelope(f: &Envelope, cfg: &BoundConfig) -> Result<Envelope, EnvelopeError> {
    let k = f.k;
    let zeta_hi = zeta_upper(k, cfg.zeta_cutoff)?.value;
    let zeta_lo = zeta_lower(k, cfg.zeta_cutoff)?.value;
    let x = two_pow(k + 1) * &f.c * zeta_hi;
    let numer = exp_upper(&x, exp_terms_for(&x, cfg.exp_terms))?.value;
    Envelope::new(numer / (two_pow(k + 1) * zeta_lo), k)
}

/// Smallest `C` with `f_m <= C m^{-k}` on `1..=N`. Observational only: it
/// says nothing about indices beyond the truncation.
pub fn empirical_envelope(f: &RationalSeries, k: u32) -> Result<Envelope, EnvelopeError> {
    if k < 2 {
        return Err(EnvelopeError::ExponentTooSmall(k));
    }
    let mut best = Rational::zero();
    for m in 1..=f.order() {
        if f[m].is_negative() {
            return Err(EnvelopeError::NegativeCoefficient(m));
        }
        let s = scaled_coeff(f, m, k);
        if s > best {
            best = s;
        }
    }
    Envelope::new(best, k)
}

/// Envelope `(sum_{d | n, d >= 2} d^2, 2)` for the exponent of `q2`: at a
/// fixed `m`, each divisor class `d` contributes at most the single term
/// `r = m / d`, worth `1 / r^2 = d^2 / m^2`.
pub fn log_q2_envelope(n: u64) -> Result<Envelope, EnvelopeError> {
    if n < 2 {
        return Err(EnvelopeError::DegreeTooSmall(n));
    }
    let c: u64 = divisors(n)
        .expect("n >= 2")
        .into_iter()
        .filter(|&d| d >= 2)
        .map(|d| d * d)
        .sum();
    Envelope::new(Rational::from_integer(BigInt::from(c)), 2)
}
