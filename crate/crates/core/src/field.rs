//! Split prime fields `F_p` with a chosen primitive `N`-th root of unity, and
//! the embedding of `Q(ζ_N)` into them.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};

const PRIME_SEARCH_LIMIT: u64 = 1 << 31;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse by Fermat; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `F_p` together with a fixed primitive `N`-th root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEmbedding {
    prime: u64,
    level: u64,
    omega: u64,
    safety_bound: u64,
}

/// Smallest prime `p ≡ 1 (mod N)` with `p > safety_bound`.
pub fn choose_prime(level: u64, safety_bound: u64) -> Result<PrimeEmbedding> {
    choose_prime_above(level, safety_bound, safety_bound)
}

/// Like [`choose_prime`] but starts the search above `start`, which may be
/// larger than the bound (used to skip primes that divide a denominator).
pub fn choose_prime_above(level: u64, safety_bound: u64, start: u64) -> Result<PrimeEmbedding> {
    assert!(level >= 1);
    let start = start.max(safety_bound);
    // first candidate congruent to 1 mod N and greater than start
    let q = start + 1;
    let mut p = q + (1 + level - q % level) % level;
    while p < PRIME_SEARCH_LIMIT {
        if is_prime(p) {
            return PrimeEmbedding::new(p, level, safety_bound);
        }
        p += level;
    }
    Err(Error::SearchExhausted(level))
}

impl PrimeEmbedding {
    /// Validates a user-supplied prime and finds its root of unity.
    pub fn new(prime: u64, level: u64, safety_bound: u64) -> Result<PrimeEmbedding> {
        if !is_prime(prime) {
            return Err(Error::BadPrime(prime, "not prime".into()));
        }
        if prime >= PRIME_SEARCH_LIMIT {
            return Err(Error::BadPrime(prime, "must be below 2^31".into()));
        }
        if (prime - 1) % level != 0 {
            return Err(Error::BadPrime(
                prime,
                format!("not congruent to 1 mod {level}"),
            ));
        }
        if prime <= safety_bound {
            return Err(Error::BadPrime(
                prime,
                format!("must exceed the safety bound {safety_bound}"),
            ));
        }
        let factors = prime_factors(level);
        let cofactor = (prime - 1) / level;
        let omega = (2..prime)
            .map(|g| pow_mod(g, cofactor, prime))
            .find(|&w| factors.iter().all(|&q| pow_mod(w, level / q, prime) != 1))
            .expect("F_p^* is cyclic of order divisible by N");
        Ok(PrimeEmbedding {
            prime,
            level,
            omega,
            safety_bound,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn omega(&self) -> u64 {
        self.omega
    }

    pub fn safety_bound(&self) -> u64 {
        self.safety_bound
    }

    /// Image of `ζ_N^k`.
    pub fn zeta_pow(&self, k: i64) -> u64 {
        pow_mod(
            self.omega,
            k.rem_euclid(self.level as i64) as u64,
            self.prime,
        )
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.prime as i64) as u64
    }

    /// Signed representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, x: u64) -> i64 {
        if x > self.prime / 2 {
            x as i64 - self.prime as i64
        } else {
            x as i64
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.prime
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.prime - b) % self.prime
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.prime)
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.prime - a) % self.prime
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a % self.prime != 0).then(|| inv_mod(a, self.prime))
    }

    fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.prime);
        let r = ((n % &p) + &p) % &p;
        r.to_u64().expect("reduced below p")
    }

    /// Ring homomorphism `Q(ζ_M) → F_p` for `M | N`, sending `ζ_N ↦ ω`.
    pub fn embed(&self, x: &CycloNumber) -> Result<u64> {
        if self.level % x.level() != 0 {
            return Err(Error::DimensionMismatch(format!(
                "level {} does not divide the embedding level {}",
                x.level(),
                self.level
            )));
        }
        let step = (self.level / x.level()) as i64;
        let mut acc = 0;
        for (k, c) in x.coeffs().iter().enumerate() {
            if c.numer().is_zero() {
                continue;
            }
            let den = self.reduce_bigint(c.denom());
            let den_inv = self.inv(den).ok_or_else(|| {
                Error::DenominatorNotInvertible(c.denom().abs().to_string(), self.prime)
            })?;
            let num = self.reduce_bigint(c.numer());
            let term = self.mul(self.mul(num, den_inv), self.zeta_pow(step * k as i64));
            acc = self.add(acc, term);
        }
        Ok(acc)
    }

    /// `k` with `ω^k = x`, if `x` is an `N`-th root of unity.
    pub fn discrete_log(&self, x: u64) -> Option<u64> {
        let mut w = 1;
        for k in 0..self.level {
            if w == x {
                return Some(k);
            }
            w = self.mul(w, self.omega);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_choices() {
        assert_eq!(choose_prime(1, 10).unwrap().prime(), 11);
        assert_eq!(choose_prime(6, 100).unwrap().prime(), 103);
        assert_eq!(choose_prime(12, 1000).unwrap().prime(), 1009);
    }

    #[test]
    fn trial_division_oracle_for_prime_choice() {
        // brute force: scan every integer above the bound
        for (n, bound) in [(6u64, 100u64), (12, 1000), (8, 50), (5, 7)] {
            let expected = (bound + 1..)
                .find(|&q| q % n == 1 && (2..q).all(|d| q % d != 0))
                .unwrap();
            assert_eq!(choose_prime(n, bound).unwrap().prime(), expected);
        }
    }

    #[test]
    fn omega_is_primitive() {
        for n in [1u64, 2, 4, 6, 12, 24] {
            let e = choose_prime(n, 500).unwrap();
            assert_eq!(pow_mod(e.omega(), n, e.prime()), 1);
            for m in 1..n {
                assert_ne!(pow_mod(e.omega(), m, e.prime()), 1);
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let e = choose_prime(6, 100).unwrap();
        assert_eq!(e.embed(&CycloNumber::one(6)).unwrap(), 1);
        let z = e.embed(&CycloNumber::zeta_pow(6, 1)).unwrap();
        assert_eq!(e.add(e.sub(e.mul(z, z), z), 1), 0);
        let s = &CycloNumber::zeta_pow(6, 1) + &CycloNumber::zeta_pow(6, -1);
        assert_eq!(e.embed(&s).unwrap(), 1);
        // lower level numbers embed through ζ_N^{N/M}
        let i = e.embed(&CycloNumber::zeta_pow(3, 1)).unwrap();
        assert_eq!(i, e.zeta_pow(2));
    }

    #[test]
    fn denominators() {
        let e = PrimeEmbedding::new(7, 1, 0).unwrap();
        let half = CycloNumber::parse("1/7", 1).unwrap();
        assert!(matches!(
            e.embed(&half),
            Err(Error::DenominatorNotInvertible(..))
        ));
        let third = CycloNumber::parse("1/3", 1).unwrap();
        assert_eq!(e.mul(e.embed(&third).unwrap(), 3), 1);
    }

    #[test]
    fn bad_primes() {
        assert!(PrimeEmbedding::new(15, 1, 0).is_err());
        assert!(PrimeEmbedding::new(11, 3, 0).is_err());
        assert!(PrimeEmbedding::new(13, 3, 20).is_err());
    }
}
