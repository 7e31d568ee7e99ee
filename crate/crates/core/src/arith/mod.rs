//! Integer number theory shared by the rest of the crate: sieving,
//! primality, factorization, modular arithmetic and valuations.

mod factor;
mod modular;
mod primes;

pub use factor::{
    factorize, factorize_big, factorize_big_with_budget, factorize_with_budget, Factorization,
    RHO_ITERATION_BUDGET, TRIAL_DIVISION_LIMIT,
};
pub use modular::{
    add_mod, ext_gcd, l_part, mod_inv, mod_pow, mul_mod, residue, solve_linear_congruence,
    sqrt_mod, sub_mod, valuation,
};
pub use primes::{
    is_prime, is_prime_big, sieve_primes, sieve_primes_with_budget, FactorTable, PrimeRange,
    PROBABILISTIC_ROUNDS, SIEVE_MEMORY_BUDGET,
};

use crate::error::{domain, Result};

/// Least `n >= 1` with `a^n ≡ 1 (mod p)`, found by factoring `p - 1` and
/// stripping prime factors from the exponent.
pub fn multiplicative_order(a: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let pm1 = factorize(p - 1)?;
    multiplicative_order_with(a, p, &pm1)
}

/// As [`multiplicative_order`] with a precomputed factorization of `p - 1`.
pub fn multiplicative_order_with(a: u64, p: u64, p_minus_1: &Factorization<u64>) -> Result<u64> {
    debug_assert_eq!(*p_minus_1.value(), p - 1);
    let a = a % p;
    if a == 0 {
        return domain(format!("{p} divides the base; no multiplicative order"));
    }
    let mut ord = p - 1;
    for &(q, e) in p_minus_1.factors() {
        for _ in 0..e {
            if mod_pow(a, ord / q, p) == 1 {
                ord /= q;
            } else {
                break;
            }
        }
    }
    Ok(ord)
}

/// A generator of `F_p^*`.
pub fn primitive_root(p: u64, p_minus_1: &Factorization<u64>) -> u64 {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| p_minus_1.primes().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("every prime field has a primitive root")
}
