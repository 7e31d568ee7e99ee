use std::collections::BTreeSet;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modular::{mod_pow, mul_mod};
use crate::error::{domain, Error, Result};

/// Default memory budget for a single sieve (one byte per integer).
pub const SIEVE_MEMORY_BUDGET: u64 = 1 << 30;

/// Rounds of Miller-Rabin applied to integers at or above 2^64. The error
/// probability for a composite is at most 4^-40.
pub const PROBABILISTIC_ROUNDS: usize = 40;

/// Primes in `[2, bound]`, ascending.
pub fn sieve_primes(bound: u64) -> Result<Vec<u64>> {
    sieve_primes_with_budget(bound, SIEVE_MEMORY_BUDGET)
}

pub fn sieve_primes_with_budget(bound: u64, budget_bytes: u64) -> Result<Vec<u64>> {
    if bound < 2 {
        return domain(format!("sieve bound must be at least 2, got {bound}"));
    }
    if bound >= budget_bytes {
        return Err(Error::Resource(format!(
            "sieve to {bound} exceeds the {budget_bytes}-byte budget"
        )));
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    Ok(primes)
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn miller_rabin_round(n: u64, d: u64, s: u32, a: u64) -> bool {
    let mut x = mod_pow(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for every `u64`: Miller-Rabin with the first
/// twelve primes as witnesses is exact below 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    SMALL_PRIMES.iter().all(|&a| miller_rabin_round(n, d, s, a))
}

/// Primality for arbitrary-precision integers: exact below 2^64,
/// [`PROBABILISTIC_ROUNDS`] Miller-Rabin rounds with a fixed-seed generator
/// above, so answers are reproducible.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_5ab1);
    let two = BigUint::from(2u32);
    let span = n - 3u32;
    'rounds: for _ in 0..PROBABILISTIC_ROUNDS {
        let a = &two + rng.gen_biguint_below(&span);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'rounds;
            }
        }
        return false;
    }
    true
}

/// Smallest-prime-factor table for fast factorization of every integer up
/// to a bound (used for the `p - 1` factorizations behind order computations).
#[derive(Debug, Clone)]
pub struct FactorTable {
    spf: Vec<u32>,
}

impl FactorTable {
    /// Largest bound accepted (4 bytes per entry).
    pub const MAX_BOUND: u64 = 1 << 27;

    pub fn new(bound: u64) -> Result<Self> {
        if bound > Self::MAX_BOUND {
            return Err(Error::Resource(format!(
                "factor table to {bound} exceeds {}",
                Self::MAX_BOUND
            )));
        }
        let n = bound.max(1) as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] != 0 {
                continue;
            }
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        Ok(Self { spf })
    }

    pub fn bound(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Factor `n` (1 <= n <= bound).
    pub fn factorize(&self, n: u64) -> super::Factorization<u64> {
        assert!(n >= 1 && n <= self.bound(), "{n} outside factor table");
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as u64;
            m /= p as usize;
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        super::Factorization::from_parts(n, factors)
    }
}

/// The primes of an interval minus an explicit exclusion set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRange {
    lo: u64,
    hi: u64,
    excluded: BTreeSet<u64>,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo < 2 || lo > hi {
            return domain(format!("prime range needs 2 <= lo <= hi, got [{lo}, {hi}]"));
        }
        Ok(Self {
            lo,
            hi,
            excluded: BTreeSet::new(),
        })
    }

    /// `[2, hi]`.
    pub fn up_to(hi: u64) -> Result<Self> {
        Self::new(2, hi)
    }

    pub fn excluding<I: IntoIterator<Item = u64>>(mut self, primes: I) -> Self {
        self.excluded.extend(primes);
        self
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn excluded(&self) -> &BTreeSet<u64> {
        &self.excluded
    }

    /// Excluded primes that actually fall inside `[lo, hi]`.
    pub fn exclusions_in_range(&self) -> Vec<u64> {
        self.excluded
            .range(self.lo..=self.hi)
            .copied()
            .filter(|&p| is_prime(p))
            .collect()
    }

    pub fn contains(&self, p: u64) -> bool {
        p >= self.lo && p <= self.hi && !self.excluded.contains(&p) && is_prime(p)
    }

    /// Every prime of the range, ascending.
    pub fn primes(&self) -> Result<Vec<u64>> {
        Ok(sieve_primes(self.hi)?
            .into_iter()
            .filter(|p| *p >= self.lo && !self.excluded.contains(p))
            .collect())
    }

    pub fn is_subset_of(&self, other: &PrimeRange) -> bool {
        self.lo >= other.lo
            && self.hi <= other.hi
            && other
                .excluded
                .range(self.lo..=self.hi)
                .all(|p| self.excluded.contains(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2
            && (2..n)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(sieve_primes(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap(), vec![2]);
        let expected: Vec<u64> = (2..=100).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(expected.len(), 25);
        assert_eq!(sieve_primes(100).unwrap(), expected);
        assert!(matches!(sieve_primes(1), Err(Error::Domain(_))));
        assert!(matches!(
            sieve_primes_with_budget(1_000_000, 1000),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(37));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(561));
        assert!(is_prime(18446744073709551557)); // largest 64-bit prime
        assert!(!is_prime(3215031751)); // strong pseudoprime to 2,3,5,7
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), trial_division_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn big_primality() {
        // 2^89 - 1 is a Mersenne prime, 2^67 - 1 is not.
        let m89 = (BigUint::one() << 89u32) - 1u32;
        let m67 = (BigUint::one() << 67u32) - 1u32;
        assert!(is_prime_big(&m89));
        assert!(!is_prime_big(&m67));
        assert!(is_prime_big(&BigUint::from(97u32)));
    }

    #[test]
    fn prime_range_iteration() {
        let r = PrimeRange::new(10, 40).unwrap().excluding([13, 37, 4]);
        assert_eq!(r.primes().unwrap(), vec![11, 17, 19, 23, 29, 31]);
        assert_eq!(r.exclusions_in_range(), vec![13, 37]);
        assert!(PrimeRange::new(1, 5).is_err());
        assert!(PrimeRange::new(9, 5).is_err());
        let small = PrimeRange::new(11, 20).unwrap().excluding([13]);
        assert!(small.is_subset_of(&r));
        assert!(!r.is_subset_of(&small));
    }

    #[test]
    fn factor_table_matches_trial_division() {
        let t = FactorTable::new(10_000).unwrap();
        for n in 1..=10_000u64 {
            let f = t.factorize(n);
            assert_eq!(f.product(), n);
            assert!(f.factors().iter().all(|(p, _)| is_prime(*p)));
        }
    }
}
