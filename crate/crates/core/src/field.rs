//! Prime-field arithmetic and the Legendre-symbol table.
//!
//! Every scalar product goes through a 128-bit intermediate, so the helpers
//! here are correct for any 64-bit modulus even though [`PrimeContext`]
//! itself caps the table size.

use thiserror::Error;

use crate::fpset::FpSet;

/// Largest modulus for which a dense context is built.
pub const MAX_TABLE_MODULUS: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be an odd prime, got {0}")]
    TooSmall(u64),
    #[error("modulus {0} exceeds the dense table limit 2^31")]
    TooLarge(u64),
    #[error("0 has no multiplicative inverse")]
    ZeroInverse,
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin. The first twelve primes as witnesses are
/// sufficient for every n < 3.3 * 10^24, which covers all of u64.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n == w {
            return true;
        }
        if n.is_multiple_of(w) {
            return false;
        }
    }
    let twos = (n - 1).trailing_zeros();
    let odd = (n - 1) >> twos;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..twos {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes q with lo <= q <= hi, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    // Segmented sieve for moderate ranges, Miller-Rabin otherwise.
    if hi <= 1 << 26 {
        let n = hi as usize;
        let mut composite = vec![false; n + 1];
        let mut i = 2usize;
        while i * i <= n {
            if !composite[i] {
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        (lo as usize..=n)
            .filter(|&k| !composite[k])
            .map(|k| k as u64)
            .collect()
    } else {
        (lo..=hi).filter(|&k| is_prime(k)).collect()
    }
}

/// Inverse by Fermat; `p` must be prime.
pub fn inverse_mod(x: u64, p: u64) -> Result<u64, FieldError> {
    let x = x % p;
    if x == 0 {
        return Err(FieldError::ZeroInverse);
    }
    Ok(pow_mod(x, p - 2, p))
}

/// Residue class of a nonzero field element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Class {
    /// Quadratic residue.
    R,
    /// Quadratic non-residue.
    N,
}

impl Class {
    pub fn chi(self) -> i8 {
        match self {
            Class::R => 1,
            Class::N => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Class::R => 'R',
            Class::N => 'N',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'R' | 'r' => Some(Class::R),
            'N' | 'n' => Some(Class::N),
            _ => None,
        }
    }
}

/// An odd prime together with its Legendre table and the residue and
/// non-residue sets. Immutable once built.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u64,
    chi: Vec<i8>,
    residues: FpSet,
    nonresidues: FpSet,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < 3 {
            return Err(FieldError::TooSmall(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_TABLE_MODULUS {
            return Err(FieldError::TooLarge(p));
        }
        let n = p as usize;
        let mut chi = vec![-1i8; n];
        chi[0] = 0;
        // x^2 for x = 1..(p-1)/2 via (x+1)^2 = x^2 + 2x + 1.
        let mut sq = 0u64;
        for x in 1..=(p - 1) / 2 {
            sq = (sq + 2 * x - 1) % p;
            chi[sq as usize] = 1;
        }
        let residues = FpSet::from_predicate(p, |x| chi[x as usize] == 1);
        let nonresidues = FpSet::from_predicate(p, |x| chi[x as usize] == -1);
        Ok(Self {
            p,
            chi,
            residues,
            nonresidues,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Legendre symbol of `x mod p`.
    #[inline]
    pub fn legendre(&self, x: u64) -> i8 {
        self.chi[(x % self.p) as usize]
    }

    pub fn chi_table(&self) -> &[i8] {
        &self.chi
    }

    pub fn residues(&self) -> &FpSet {
        &self.residues
    }

    pub fn nonresidues(&self) -> &FpSet {
        &self.nonresidues
    }

    pub fn class_set(&self, class: Class) -> &FpSet {
        match class {
            Class::R => &self.residues,
            Class::N => &self.nonresidues,
        }
    }

    #[inline]
    pub fn in_class(&self, x: u64, class: Class) -> bool {
        self.legendre(x) == class.chi()
    }

    pub fn inverse(&self, x: u64) -> Result<u64, FieldError> {
        inverse_mod(x, self.p)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }

    /// Base-2 logarithm of p; every log in the bound formulas is base 2.
    pub fn log2p(&self) -> f64 {
        (self.p as f64).log2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn legendre_small_examples() {
        let ctx = PrimeContext::new(7).unwrap();
        assert_eq!(ctx.legendre(1), 1);
        assert_eq!(ctx.legendre(0), 0);
        // squares mod 7 are {1, 2, 4}
        assert_eq!(ctx.legendre(3), -1);
    }

    #[test]
    fn context_sets() {
        let ctx = PrimeContext::new(7).unwrap();
        assert_eq!(ctx.residues().to_vec(), vec![1, 2, 4]);
        assert_eq!(ctx.nonresidues().to_vec(), vec![3, 5, 6]);
        let ctx = PrimeContext::new(3).unwrap();
        assert_eq!(ctx.residues().to_vec(), vec![1]);
        assert_eq!(ctx.nonresidues().to_vec(), vec![2]);
        assert_eq!(PrimeContext::new(23).unwrap().residues().len(), 11);
    }

    #[test]
    fn context_errors() {
        assert_eq!(PrimeContext::new(2).unwrap_err(), FieldError::TooSmall(2));
        assert_eq!(PrimeContext::new(9).unwrap_err(), FieldError::NotPrime(9));
        assert_eq!(PrimeContext::new(1).unwrap_err(), FieldError::TooSmall(1));
        let big = 2147483659; // first prime above 2^31
        assert!(is_prime(big));
        assert_eq!(
            PrimeContext::new(big).unwrap_err(),
            FieldError::TooLarge(big)
        );
    }

    #[test]
    fn primes_in_range_examples() {
        assert_eq!(primes_in_range(4, 8), vec![5, 7]);
        assert!(primes_in_range(1, 1).is_empty());
        assert!(primes_in_range(14, 16).is_empty());
        assert_eq!(primes_in_range(1, 10), vec![2, 3, 5, 7]);
    }

    #[test]
    fn primes_match_trial_division() {
        let trial = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        let expected: Vec<u64> = (1..3000).filter(|&n| trial(n)).collect();
        assert_eq!(primes_in_range(1, 2999), expected);
        for n in 0..3000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn probe_primes() {
        let trial = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in [10007u64, 20011, 49999] {
            assert!(is_prime(n) && trial(n), "{n}");
        }
    }

    #[test]
    fn miller_rabin_hard_cases() {
        // strong pseudoprimes to several small bases
        for n in [
            3215031751u64,
            2152302898747,
            3474749660383,
            341550071728321,
            3825123056546413051,
        ] {
            assert!(!is_prime(n), "{n}");
        }
        assert!(is_prime(18446744073709551557)); // largest 64-bit prime
        assert!(!is_prime(18446744073709551615));
        assert!(is_prime((1 << 61) - 1));
    }

    #[test]
    fn inverse_examples() {
        let ctx = PrimeContext::new(7).unwrap();
        assert_eq!(ctx.inverse(1).unwrap(), 1);
        assert_eq!(ctx.inverse(2).unwrap(), 4);
        assert_eq!(ctx.inverse(6).unwrap(), 6);
        assert_eq!(ctx.inverse(0).unwrap_err(), FieldError::ZeroInverse);
        let p = (1u64 << 61) - 1;
        let x = 123456789012345;
        assert_eq!(mul_mod(x, inverse_mod(x, p).unwrap(), p), 1);
    }

    #[test]
    fn euler_criterion_and_zero_sum() {
        for p in primes_in_range(3, 2000) {
            let ctx = PrimeContext::new(p).unwrap();
            let mut total = 0i64;
            for x in 0..p {
                let e = pow_mod(x, (p - 1) / 2, p);
                let expected = match e {
                    0 => 0,
                    1 => 1,
                    v if v == p - 1 => -1,
                    v => panic!("Euler power {v} mod {p}"),
                };
                assert_eq!(ctx.legendre(x), expected, "x={x} p={p}");
                total += ctx.legendre(x) as i64;
            }
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn multiplicativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for p in [3, 101, 7919, 10007, 65537] {
            let ctx = PrimeContext::new(p).unwrap();
            for _ in 0..10_000 {
                let x = rng.random_range(0..p);
                let y = rng.random_range(0..p);
                assert_eq!(
                    ctx.legendre(ctx.mul(x, y)),
                    ctx.legendre(x) * ctx.legendre(y)
                );
            }
        }
    }
}
