//! Asymptotics of `p_m`: the exponent `(phi(n) - n) / n`, the constant
//! of `q1`'s singular expansion at `x = 1`, enclosures for `B(1)`, and the
//! finite-`m` transfer sandwich for products `a(x) b(x)` with `a_m ~ C m^-alpha`
//! and summable `b`.
//!
//! This is the only module that uses floating point. Every quantity it
//! reports as an [`Interval`] is rounded outward.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::envelope::{exp_envelope, exp_upper, log_q2_envelope, BoundConfig, EnvelopeError};
use crate::numtheory::{coprime, divisors, moebius, totient, NumberTheoryError};
use crate::rootgf::{build_b, build_p, build_q2, RootProblem};
use crate::{Rational, Scalar, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error("alpha must lie in (0, 1), got {0}")]
    AlphaOutOfRange(String),
    #[error("beta must lie in (alpha, 1), got {0}")]
    BetaOutOfRange(String),
    #[error("index {m} exceeds the series order {order}")]
    IndexOutOfRange { m: usize, order: usize },
    #[error("relative tolerance must be positive and finite")]
    BadTolerance,
}

/// Closed interval of doubles known to contain some real quantity.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    /// Tightest double interval containing the rational `x`.
    pub fn from_rational(x: &Rational) -> Self {
        Self::enclosing(x, x)
    }

    /// Double interval containing the rational interval `[lo, hi]`.
    pub fn enclosing(lo: &Rational, hi: &Rational) -> Self {
        Self::new(round_down(lo), round_up(hi))
    }

    /// `[x (1 - tol), x (1 + tol)]`, widened by one ulp on each side.
    pub fn around(x: f64, rel_tol: f64) -> Self {
        let r = x.abs() * rel_tol;
        Self::new((x - r).next_down(), (x + r).next_up())
    }

    pub fn midpoint(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Product with outward rounding.
    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }
}

fn round_down(x: &Rational) -> f64 {
    let mut f = x.to_f64().unwrap_or(f64::NEG_INFINITY);
    while f.is_finite() && Rational::from_float(f).is_some_and(|exact| exact > *x) {
        f = f.next_down();
    }
    f
}

fn round_up(x: &Rational) -> f64 {
    let mut f = x.to_f64().unwrap_or(f64::INFINITY);
    while f.is_finite() && Rational::from_float(f).is_some_and(|exact| exact < *x) {
        f = f.next_up();
    }
    f
}

/// `(phi(n) - n) / n`, always in `(-1, 0)`.
pub fn exponent(n: u64) -> Result<Rational, AsymptoticsError> {
    if n < 2 {
        return Err(NumberTheoryError::DegreeTooSmall(n).into());
    }
    let phi = totient(n)?;
    Ok(Rational::new(
        BigInt::from(phi) - BigInt::from(n),
        BigInt::from(n),
    ))
}

/// Relative error of [`ln_gamma`] on `(0, 20]`, with margin.
pub const LN_GAMMA_REL_ERROR: f64 = 1e-13;

/// `ln Gamma(x)` for `x > 0`: shift to `x + s >= 15` with the recurrence,
/// then Stirling's series through the `B_12` term (truncation error below
/// `1e-17` at that size).
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument");
    let mut shift = 0.0;
    let mut z = x;
    while z < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    // B_{2j} / (2j (2j - 1) z^{2j-1}) for j = 1..6
    let series = (1.0 / 12.0
        - (1.0 / 360.0
            - (1.0 / 1260.0 - (1.0 / 1680.0 - (1.0 / 1188.0 - 691.0 / 360360.0 / z2) / z2) / z2)
                / z2)
            / z2)
        / z;
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Constant `K` in `[x^m] q1 ~ K m^{phi(n)/n - 1}`:
/// `K = prod_{d | n, d > 1} d^{-mu(d)/d} / Gamma(phi(n)/n)`, from
/// `1 - x^d ~ d (1 - x)` at `x = 1`.
///
/// `rel_tol` is the claimed relative accuracy of the floating evaluation;
/// values below [`LN_GAMMA_REL_ERROR`] are raised to it.
pub fn darboux_constant_q1(n: u64, rel_tol: f64) -> Result<Interval, AsymptoticsError> {
    if n < 2 {
        return Err(NumberTheoryError::DegreeTooSmall(n).into());
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(AsymptoticsError::BadTolerance);
    }
    let mut log_k = 0.0;
    for d in divisors(n)? {
        if d == 1 {
            continue;
        }
        let mu = moebius(d)? as f64;
        log_k -= mu / d as f64 * (d as f64).ln();
    }
    let s = totient(n)? as f64 / n as f64;
    log_k -= ln_gamma(s);
    Ok(Interval::around(
        log_k.exp(),
        rel_tol.max(LN_GAMMA_REL_ERROR),
    ))
}

/// Default relative tolerance for [`darboux_constant_q1`].
pub const DEFAULT_DARBOUX_TOL: f64 = 1e-10;

/// Enclosure of `B(1) = sum_i B_i`.
///
/// The lower end is the exact partial sum through `N`. The tail
/// `sum_{m>N} B_m` is bounded two ways and the smaller bound is used:
///
/// * envelope route: `B <= q2` coefficientwise and `q2 - 1` has the
///   envelope `exp_envelope(log_q2_envelope(n))`, so the tail is at most
///   `C / N`;
/// * mass route: the same domination gives a tail of at most
///   `q2(1) - sum_{m<=N} [x^m] q2`, with `q2(1) = exp(sum_{gcd(r,n)>1} r^-2)`
///   bounded above by a rational partial sum plus `1/R` and [`exp_upper`].
pub fn b_at_one(n: u64, order: usize, cfg: &BoundConfig) -> Result<Interval, AsymptoticsError> {
    let (interval, _) = b_at_one_detail(n, order, cfg)?;
    Ok(interval)
}

/// Tail bounds computed by [`b_at_one`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailBounds {
    pub partial_sum: Rational,
    pub envelope_tail: Option<Rational>,
    pub mass_tail: Rational,
}

pub fn b_at_one_detail(
    n: u64,
    order: usize,
    cfg: &BoundConfig,
) -> Result<(Interval, TailBounds), AsymptoticsError> {
    let prob = RootProblem::new(n, order)?;
    let partial_sum: Rational = build_b(&prob).into_coeffs().into_iter().sum();

    let envelope_tail = if order >= 1 {
        let env = exp_envelope(&log_q2_envelope(n)?, cfg)?;
        Some(env.constant() / Rational::from_integer(BigInt::from(order)))
    } else {
        None
    };

    let cutoff = (2 * order).max(64);
    let mut log_mass = Rational::new(BigInt::one(), BigInt::from(cutoff));
    for r in 2..=cutoff {
        if !coprime(r as u64, n) {
            log_mass += Rational::new(BigInt::one(), BigInt::from(r * r));
        }
    }
    let mass = exp_upper(&log_mass, cfg.exp_terms)?.value;
    let q2_partial: Rational = build_q2(&prob).into_coeffs().into_iter().sum();
    let mass_tail = mass - q2_partial;

    let tail = match &envelope_tail {
        Some(t) if *t < mass_tail => t.clone(),
        _ => mass_tail.clone(),
    };
    let interval = Interval::enclosing(&partial_sum, &(partial_sum.clone() + tail));
    Ok((
        interval,
        TailBounds {
            partial_sum,
            envelope_tail,
            mass_tail,
        },
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub n: u64,
    pub order: usize,
    pub exponent: Rational,
    pub darboux_constant: Interval,
    pub b_at_one: Interval,
    /// `darboux_constant * b_at_one`, the constant `C` in `p_m ~ C m^exponent`.
    pub final_constant: Interval,
    /// `(m, p_m m^{-exponent})` for `m = 1..=N`.
    pub ratios: Vec<(usize, f64)>,
    /// Least-squares slope of `ln p_m` against `ln m` over `[N/2, N]`.
    pub fit_slope: Option<f64>,
}

impl AsymptoticReport {
    pub fn ratio_at(&self, m: usize) -> Option<f64> {
        self.ratios.iter().find(|&&(i, _)| i == m).map(|&(_, r)| r)
    }
}

pub fn final_constant(
    n: u64,
    order: usize,
    cfg: &BoundConfig,
) -> Result<AsymptoticReport, AsymptoticsError> {
    let prob = RootProblem::new(n, order)?;
    let exp = exponent(n)?;
    let darboux = darboux_constant_q1(n, DEFAULT_DARBOUX_TOL)?;
    let b_one = b_at_one(n, order, cfg)?;
    let p = build_p(&prob);

    let e = exp.to_f64().expect("small rational");
    let ratios: Vec<(usize, f64)> = (1..=order)
        .map(|m| (m, p[m].to_f64().unwrap_or(0.0) * (m as f64).powf(-e)))
        .collect();

    let points: Vec<(f64, f64)> = (order.div_ceil(2).max(1)..=order)
        .filter_map(|m| {
            let v = p[m].to_f64()?;
            (v > 0.0).then(|| ((m as f64).ln(), v.ln()))
        })
        .collect();

    Ok(AsymptoticReport {
        n,
        order,
        exponent: exp,
        darboux_constant: darboux,
        b_at_one: b_one,
        final_constant: darboux.mul(&b_one),
        ratios,
        fit_slope: least_squares_slope(&points),
    })
}

/// Slope of the unweighted least-squares line through `points`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let len = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Finite-`m` evaluation of the two bounds that sandwich `c_m m^alpha`
/// for `c = a b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
    /// `(sum_i b_i) * max_{i <= m^beta} a_{m-i} * m^alpha`.
    pub upper_main: f64,
    /// `(sum_{i > m^beta} b_i) * max_j a_j * m^alpha`.
    pub upper_tail: f64,
}

/// Default number of `b` terms kept in the lower estimate.
pub const DEFAULT_LOWER_TERMS: usize = 64;

/// Both sides of the transfer argument at index `m`, for nonnegative `a`
/// and `b`:
///
/// * lower: `(sum_{i<=K} b_i) * min_{i<=K} a_{m-i} * m^alpha`;
/// * upper: split `c_m` at `i = floor(m^beta)`; the head is at most
///   `(sum_i b_i) * max_{i<=m^beta} a_{m-i}` and the rest at most
///   `(sum_{i>m^beta} b_i) * max_j a_j`.
///
/// The min and max only range over `i` with `b_i != 0`, which leaves both
/// bounds valid and makes them exact when `b` is a single term.
pub fn transfer_sandwich<T: Scalar>(
    a: &TruncatedSeries<T>,
    b: &TruncatedSeries<T>,
    alpha: &Rational,
    beta: &Rational,
    m: usize,
    lower_terms: usize,
) -> Result<Sandwich, AsymptoticsError> {
    if !(alpha.is_positive() && *alpha < Rational::one()) {
        return Err(AsymptoticsError::AlphaOutOfRange(alpha.to_string()));
    }
    if !(beta > alpha && *beta < Rational::one()) {
        return Err(AsymptoticsError::BetaOutOfRange(beta.to_string()));
    }
    let order = a.order().min(b.order());
    if m > order {
        return Err(AsymptoticsError::IndexOutOfRange { m, order });
    }
    let af: Vec<f64> = a.coeffs()[..=m]
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    let bf: Vec<f64> = b.coeffs()[..=m]
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    let support = |upto: usize| (0..=upto.min(m)).filter(|&i| !b[i].is_zero());

    let scale = (m as f64).powf(alpha.to_f64().expect("small rational"));

    let lower_sum: f64 = support(lower_terms).map(|i| bf[i]).sum();
    let lower_min = support(lower_terms)
        .map(|i| af[m - i])
        .fold(f64::INFINITY, f64::min);
    let lower = if lower_sum > 0.0 {
        lower_sum * lower_min * scale
    } else {
        0.0
    };

    let split = ((m as f64)
        .powf(beta.to_f64().expect("small rational"))
        .floor() as usize)
        .min(m);
    let total: f64 = bf.iter().sum();
    let head_max = support(split)
        .map(|i| af[m - i])
        .fold(f64::NEG_INFINITY, f64::max);
    let upper_main = if total > 0.0 {
        total * head_max * scale
    } else {
        0.0
    };
    let tail: f64 = bf[split + 1..].iter().sum();
    let a_max = af.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let upper_tail = if tail > 0.0 {
        tail * a_max * scale
    } else {
        0.0
    };

    Ok(Sandwich {
        lower,
        upper: upper_main + upper_tail,
        upper_main,
        upper_tail,
    })
}
