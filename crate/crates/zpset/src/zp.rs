//! Modular arithmetic over a validated odd prime modulus.
//!
//! Everything downstream (sets, expansion chains, checkers) works with
//! canonical residues in `[0, p-1]`, so set equality reduces to bitwise
//! equality of indicator vectors. The modulus is validated once, by a
//! deterministic Miller-Rabin test, and then carried around as a cheap
//! `Copy` token.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ZpError {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("p = 2 is rejected; the field must have odd characteristic")]
    EvenPrime,
    #[error("0 has no multiplicative inverse")]
    ZeroInverse,
}

/// A validated odd prime `p > 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeModulus({})", self.0)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PrimeModulus {
    /// Validates `n` as an odd prime. `2` is reported separately since the
    /// whole construction assumes odd characteristic.
    pub fn new(n: u64) -> Result<Self, ZpError> {
        if n == 2 {
            return Err(ZpError::EvenPrime);
        }
        if !is_prime(n) {
            return Err(ZpError::NotPrime(n));
        }
        Ok(PrimeModulus(n))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// Reduces `v` into the canonical range and wraps it.
    #[inline]
    pub fn element(self, v: u64) -> ZpElement {
        ZpElement {
            value: v % self.0,
            modulus: self,
        }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.0 && b < self.0);
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.0 && b < self.0);
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        debug_assert!(a < self.0);
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.0 && b < self.0);
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, base: u64, mut exp: u64) -> u64 {
        let mut base = base % self.0;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by Fermat: `a^(p-2)`. Errors on zero.
    pub fn inv(self, a: u64) -> Result<u64, ZpError> {
        if a % self.0 == 0 {
            return Err(ZpError::ZeroInverse);
        }
        Ok(self.pow(a, self.0 - 2))
    }
}

/// A canonical residue together with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZpElement {
    value: u64,
    modulus: PrimeModulus,
}

impl fmt::Debug for ZpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl ZpElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Result<ZpElement, ZpError> {
        let v = self.modulus.inv(self.value)?;
        Ok(ZpElement {
            value: v,
            modulus: self.modulus,
        })
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    // This witness set is known exact for all n < 3.3 * 10^24.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut r = d;
        while r != n - 1 {
            x = mulmod(x, x);
            r <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factors of `n` in increasing order, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

/// Smallest primitive root of `p`, memoized per modulus. Concurrent lookups
/// observe a consistent value because the cache sits behind one mutex.
pub fn primitive_root(m: PrimeModulus) -> u64 {
    static CACHE: OnceLock<Mutex<HashMap<u64, u64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("primitive root cache poisoned");
    if let Some(&g) = guard.get(&m.value()) {
        return g;
    }
    let p = m.value();
    let factors = prime_factors(p - 1);
    let g = (2..p)
        .find(|&g| factors.iter().all(|&q| m.pow(g, (p - 1) / q) != 1))
        .expect("every prime field has a primitive root");
    guard.insert(p, g);
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_validation() {
        assert_eq!(PrimeModulus::new(7).unwrap().value(), 7);
        assert_eq!(PrimeModulus::new(9), Err(ZpError::NotPrime(9)));
        assert_eq!(PrimeModulus::new(2), Err(ZpError::EvenPrime));
        assert_eq!(PrimeModulus::new(1), Err(ZpError::NotPrime(1)));
        assert_eq!(PrimeModulus::new(0), Err(ZpError::NotPrime(0)));
    }

    #[test]
    fn primality_matches_sieve_below_10k() {
        let n = 10_000usize;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                for j in (i * i..n).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for v in 0..n {
            assert_eq!(is_prime(v as u64), sieve[v], "mismatch at {v}");
        }
    }

    #[test]
    fn primality_large_known_values() {
        assert!(is_prime((1 << 31) - 1)); // Mersenne
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007u64 * 998_244_353));
        assert!(is_prime(4_179_340_454_199_820_289)); // 29 * 2^57 + 1
    }

    #[test]
    fn inverse_examples() {
        let m = PrimeModulus::new(7).unwrap();
        assert_eq!(m.element(3).inverse().unwrap().value(), 5);
        assert_eq!(m.element(1).inverse().unwrap().value(), 1);
        assert_eq!(m.element(0).inverse(), Err(ZpError::ZeroInverse));
    }

    #[test]
    fn inverse_exhaustive_small_moduli() {
        for p in [3u64, 5, 7, 101, 1009, 9973] {
            let m = PrimeModulus::new(p).unwrap();
            for x in 1..p {
                let y = m.inv(x).unwrap();
                assert_eq!(m.mul(x, y), 1);
                assert_eq!(m.inv(y).unwrap(), x);
            }
        }
    }

    #[test]
    fn element_reduces_into_canonical_range() {
        let m = PrimeModulus::new(101).unwrap();
        assert_eq!(m.element(103).value(), 2);
        assert_eq!(m.element(101).value(), 0);
    }

    #[test]
    fn primitive_roots_generate() {
        for p in [3u64, 5, 7, 101, 1009] {
            let m = PrimeModulus::new(p).unwrap();
            let g = primitive_root(m);
            let mut seen = vec![false; p as usize];
            let mut x = 1u64;
            for _ in 0..p - 1 {
                seen[x as usize] = true;
                x = m.mul(x, g);
            }
            assert!((1..p).all(|v| seen[v as usize]), "g={g} fails for p={p}");
        }
        assert_eq!(primitive_root(PrimeModulus::new(7).unwrap()), 3);
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_factors(100), vec![2, 5]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(29 << 57), vec![2, 29]);
    }
}
