//! Elementary arithmetic functions on small positive integers.

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberTheoryError {
    #[error("argument must be positive, got 0")]
    Zero,
    #[error("root degree must be at least 2, got {0}")]
    DegreeTooSmall(u64),
}

/// Prime factorization as `(prime, exponent)` pairs with strictly
/// increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, a)| a == 1)
    }

    /// Multiplies the factors back together.
    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, a)| p.pow(a)).product()
    }
}

/// Trial-division factorization.
pub fn factorize(n: u64) -> Result<Factorization, NumberTheoryError> {
    if n == 0 {
        return Err(NumberTheoryError::Zero);
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut a = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                a += 1;
            }
            factors.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

pub fn moebius(d: u64) -> Result<i8, NumberTheoryError> {
    let f = factorize(d)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// Euler's totient.
pub fn totient(n: u64) -> Result<u64, NumberTheoryError> {
    let f = factorize(n)?;
    Ok(f.primes().fold(n, |acc, p| acc / p * (p - 1)))
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Result<Vec<u64>, NumberTheoryError> {
    if n == 0 {
        return Err(NumberTheoryError::Zero);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// The divisor `d_n(r)` governing which cycle types admit an n-th root:
/// a permutation has an n-th root iff, for every `r`, its number of
/// `r`-cycles is a multiple of `d_n(r)`.
///
/// This is the part of `n` supported on primes that also divide `r`,
/// i.e. `prod p^{v_p(n)}` over primes `p | gcd(n, r)`. Equivalently it is
/// the smallest divisor `d` of `n` with `gcd(r, n / d) = 1`.
pub fn root_divisor(n: u64, r: u64) -> Result<u64, NumberTheoryError> {
    if n < 2 {
        return Err(NumberTheoryError::DegreeTooSmall(n));
    }
    if r == 0 {
        return Err(NumberTheoryError::Zero);
    }
    let f = factorize(n)?;
    Ok(f.factors
        .iter()
        .filter(|&&(p, _)| r.is_multiple_of(p))
        .map(|&(p, a)| p.pow(a))
        .product())
}

pub fn coprime(a: u64, b: u64) -> bool {
    a.gcd(&b) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(97).unwrap().factors(), &[(97, 1)]);
        assert_eq!(factorize(0), Err(NumberTheoryError::Zero));
    }

    #[test]
    fn factorization_reconstructs() {
        for n in 1..2000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.product(), n);
            let primes: Vec<_> = f.primes().collect();
            assert!(primes.windows(2).all(|w| w[0] < w[1]));
            for p in primes {
                assert!((2..p).take_while(|q| q * q <= p).all(|q| p % q != 0));
            }
        }
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1), Ok(1));
        assert_eq!(moebius(6), Ok(1));
        assert_eq!(moebius(4), Ok(0));
        assert_eq!(moebius(30), Ok(-1));
        assert_eq!(moebius(0), Err(NumberTheoryError::Zero));
    }

    #[test]
    fn moebius_multiplicative_on_coprime() {
        for a in 1..60u64 {
            for b in 1..60u64 {
                if coprime(a, b) {
                    assert_eq!(
                        moebius(a * b).unwrap(),
                        moebius(a).unwrap() * moebius(b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1), Ok(1));
        assert_eq!(totient(2), Ok(1));
        assert_eq!(totient(12), Ok(4));
        assert_eq!(totient(0), Err(NumberTheoryError::Zero));
        for n in 1..200u64 {
            let brute = (1..=n).filter(|&r| coprime(r, n)).count() as u64;
            assert_eq!(totient(n).unwrap(), brute);
        }
    }

    #[test]
    fn moebius_sum_is_totient_ratio() {
        for n in 1..=60u64 {
            let sum: Ratio<i64> = divisors(n)
                .unwrap()
                .into_iter()
                .map(|d| Ratio::new(moebius(d).unwrap() as i64, d as i64))
                .sum();
            assert_eq!(sum, Ratio::new(totient(n).unwrap() as i64, n as i64));
        }
    }

    #[test]
    fn divisors_of_twelve() {
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(49).unwrap(), vec![1, 7, 49]);
    }

    #[test]
    fn root_divisor_examples() {
        assert_eq!(root_divisor(2, 3), Ok(1));
        assert_eq!(root_divisor(2, 4), Ok(2));
        assert_eq!(root_divisor(12, 10), Ok(4));
        assert_eq!(
            root_divisor(1, 3),
            Err(NumberTheoryError::DegreeTooSmall(1))
        );
        assert_eq!(root_divisor(6, 0), Err(NumberTheoryError::Zero));
    }

    #[test]
    fn root_divisor_properties() {
        for n in 2..=60u64 {
            for r in 1..=600u64 {
                let d = root_divisor(n, r).unwrap();
                assert_eq!(n % d, 0, "d_{n}({r}) must divide n");
                assert!(coprime(r, n / d));
                assert_eq!(d == 1, coprime(r, n));
                if r % n != 0 {
                    assert_eq!(d, root_divisor(n, r % n).unwrap());
                } else {
                    assert_eq!(d, n);
                }
                // smallest divisor with the coprimality property
                let smallest = divisors(n)
                    .unwrap()
                    .into_iter()
                    .find(|&e| coprime(r, n / e))
                    .unwrap();
                assert_eq!(d, smallest);
            }
        }
    }
}
