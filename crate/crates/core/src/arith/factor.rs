//! Integer factorization: trial division up to [`TRIAL_DIVISION_LIMIT`],
//! then Pollard-rho with Brent's cycle detection. Rho runs under an
//! iteration budget and reports [`Error::FactoringBudget`] instead of
//! returning a partial answer.

use std::fmt::Debug;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::modular::{add_mod, mul_mod};
use super::primes::{is_prime, is_prime_big};
use crate::error::{domain, Error, Result};

pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Default number of rho iterations (per polynomial) before giving up.
pub const RHO_ITERATION_BUDGET: u64 = 1 << 24;

/// `value = ∏ prime^exponent`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<T> {
    value: T,
    factors: Vec<(T, u32)>,
}

impl<T> Factorization<T>
where
    T: Clone + Ord + One + Debug + for<'a> Mul<&'a T, Output = T>,
{
    pub(crate) fn from_parts(value: T, mut factors: Vec<(T, u32)>) -> Self {
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(T, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Self {
            value,
            factors: merged,
        }
    }

    pub fn value(&self) -> &T {
        &self.value
    }

    pub fn factors(&self) -> &[(T, u32)] {
        &self.factors
    }

    /// The support: distinct primes, ascending.
    pub fn primes(&self) -> impl Iterator<Item = &T> + '_ {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn product(&self) -> T {
        let mut acc = T::one();
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = acc * p;
            }
        }
        acc
    }
}

/// Factor a positive 64-bit integer.
pub fn factorize(n: u64) -> Result<Factorization<u64>> {
    factorize_with_budget(n, RHO_ITERATION_BUDGET)
}

pub fn factorize_with_budget(n: u64, budget: u64) -> Result<Factorization<u64>> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    let mut d = 3u64;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= m {
        push(d, &mut m);
        d += 2;
    }
    if m > 1 {
        let mut pending = vec![m];
        while let Some(c) = pending.pop() {
            if is_prime(c) {
                let e = {
                    let mut e = 0;
                    let mut r = m;
                    while r.is_multiple_of(c) {
                        r /= c;
                        e += 1;
                    }
                    e
                };
                // `m` may hold `c` more than once; record the full exponent once.
                if !factors.iter().any(|(p, _)| *p == c) {
                    factors.push((c, e));
                }
                continue;
            }
            let f = brent_rho(c, budget).ok_or_else(|| Error::FactoringBudget(c.to_string()))?;
            pending.push(f);
            pending.push(c / f);
        }
    }
    Ok(Factorization::from_parts(n, factors))
}

fn brent_rho(n: u64, budget: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    if let Some(r) = perfect_square_root(n) {
        return Some(r);
    }
    for c in 1..=20u64 {
        if let Some(f) = brent_rho_single(n, c, budget) {
            return Some(f);
        }
    }
    None
}

fn perfect_square_root(n: u64) -> Option<u64> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

fn brent_rho_single(n: u64, c: u64, budget: u64) -> Option<u64> {
    let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
    let batch = 128u64;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    let mut spent = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..batch.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += batch;
        }
        spent += r;
        if spent > budget {
            return None;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Factor an arbitrary-precision positive integer. Cofactors that fit in
/// 64 bits go through [`factorize`]; larger ones use a big-integer rho.
pub fn factorize_big(n: &BigUint) -> Result<Factorization<BigUint>> {
    factorize_big_with_budget(n, RHO_ITERATION_BUDGET)
}

pub fn factorize_big_with_budget(n: &BigUint, budget: u64) -> Result<Factorization<BigUint>> {
    if n.is_zero() {
        return domain("cannot factor 0");
    }
    if let Some(small) = n.to_u64() {
        let f = factorize_with_budget(small, budget)?;
        let parts = f
            .factors()
            .iter()
            .map(|&(p, e)| (BigUint::from(p), e))
            .collect();
        return Ok(Factorization::from_parts(n.clone(), parts));
    }
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT && BigUint::from(d * d) <= m {
        let mut e = 0;
        while (&m % d).is_zero() {
            m /= d;
            e += 1;
        }
        if e > 0 {
            factors.push((BigUint::from(d), e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut pending = vec![m];
    while let Some(c) = pending.pop() {
        if c.is_one() {
            continue;
        }
        if let Some(small) = c.to_u64() {
            let f = factorize_with_budget(small, budget)?;
            factors.extend(f.factors().iter().map(|&(p, e)| (BigUint::from(p), e)));
            continue;
        }
        if is_prime_big(&c) {
            factors.push((c, 1));
            continue;
        }
        let f = big_rho(&c, budget).ok_or_else(|| Error::FactoringBudget(c.to_string()))?;
        pending.push(&c / &f);
        pending.push(f);
    }
    Ok(Factorization::from_parts(n.clone(), factors))
}

fn big_rho(n: &BigUint, budget: u64) -> Option<BigUint> {
    let root = n.sqrt();
    if &(&root * &root) == n {
        return Some(root);
    }
    for c in 1..=20u32 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent = 0u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..128u64.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            spent += r;
            if spent > budget {
                break;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}
