//! Generic algorithms for finite abelian groups written additively:
//! baby-step giant-step, order from a known multiple, and Pohlig-Hellman.
//! Both `F_p^*` and `E(F_p)` implement [`FiniteGroup`].

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::arith::{factorize, mod_pow, mul_mod, multiplicative_order_with, Factorization};
use crate::error::Result;

pub trait FiniteGroup {
    type Elem: Clone + Eq + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    /// Exact order of `a`.
    fn order(&self, a: &Self::Elem) -> Result<u64>;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// `n·a` by double-and-add.
    fn scale(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        let mut acc = self.identity();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.op(&acc, &base);
            }
            base = self.op(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn scale_signed(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let m = self.scale(a, n.unsigned_abs());
        if n < 0 {
            self.inverse(&m)
        } else {
            m
        }
    }

    /// Least `e >= 0` with `e·base = target`, or `None` when `target` is not
    /// in the cyclic subgroup generated by `base`.
    fn dlog(&self, base: &Self::Elem, target: &Self::Elem) -> Result<Option<u64>> {
        let n = self.order(base)?;
        let nf = factorize(n)?;
        Ok(pohlig_hellman(self, base, &nf, target))
    }
}

/// Smallest `x` in `[0, len)` with `x·base = target`.
pub fn bsgs<G: FiniteGroup + ?Sized>(
    group: &G,
    base: &G::Elem,
    target: &G::Elem,
    len: u64,
) -> Option<u64> {
    if len == 0 {
        return None;
    }
    let m = (len as f64).sqrt().ceil() as u64;
    let m = m.max(1);
    let mut baby: HashMap<G::Elem, u64> = HashMap::with_capacity(m as usize);
    let mut cur = group.identity();
    for j in 0..m {
        baby.entry(cur.clone()).or_insert(j);
        cur = group.op(&cur, base);
    }
    // cur = m·base
    let stride = group.inverse(&cur);
    let mut giant = target.clone();
    let mut i = 0u64;
    while i * m < len {
        if let Some(&j) = baby.get(&giant) {
            let x = i * m + j;
            return (x < len).then_some(x);
        }
        giant = group.op(&giant, &stride);
        i += 1;
    }
    None
}

/// Smallest `M` in `[lo, hi]` with `M·a = 0`.
pub fn annihilator_in_interval<G: FiniteGroup + ?Sized>(
    group: &G,
    a: &G::Elem,
    lo: u64,
    hi: u64,
) -> Option<u64> {
    if lo > hi {
        return None;
    }
    let target = group.inverse(&group.scale(a, lo));
    bsgs(group, a, &target, hi - lo + 1).map(|k| lo + k)
}

/// Exact order of `a` given a multiple of it.
pub fn order_from_multiple<G: FiniteGroup + ?Sized>(
    group: &G,
    a: &G::Elem,
    multiple: &Factorization<u64>,
) -> u64 {
    let mut ord = *multiple.value();
    debug_assert!(group.is_identity(&group.scale(a, ord)));
    for &(q, e) in multiple.factors() {
        for _ in 0..e {
            if group.is_identity(&group.scale(a, ord / q)) {
                ord /= q;
            } else {
                break;
            }
        }
    }
    ord
}

/// Discrete logarithm in `<base>` where `base` has order `order`
/// (factored). Each prime-power component is solved digit by digit with
/// BSGS in the subgroup of prime order. Returns the least non-negative
/// solution, or `None` if `target ∉ <base>`.
pub fn pohlig_hellman<G: FiniteGroup + ?Sized>(
    group: &G,
    base: &G::Elem,
    order: &Factorization<u64>,
    target: &G::Elem,
) -> Option<u64> {
    let n = *order.value();
    if !group.is_identity(&group.scale(target, n)) {
        return None;
    }
    let mut residue: u128 = 0;
    let mut modulus: u128 = 1;
    for &(q, e) in order.factors() {
        let qe = q.pow(e);
        let cofactor = n / qe;
        let g = group.scale(base, cofactor);
        let h = group.scale(target, cofactor);
        let gamma = group.scale(&g, qe / q);
        let mut x = 0u64;
        let mut qk = 1u64;
        for _ in 0..e {
            let shifted = group.op(&h, &group.inverse(&group.scale(&g, x)));
            let hk = group.scale(&shifted, qe / qk / q);
            let d = bsgs(group, &gamma, &hk, q)?;
            x += d * qk;
            qk *= q;
        }
        // combine x mod q^e with the running residue mod `modulus` (coprime)
        let inv = crate::arith::mod_inv((modulus % qe as u128) as u64, qe)
            .expect("prime-power components are coprime");
        let t = mul_mod(
            (x as u128 + qe as u128 - residue % qe as u128) as u64 % qe,
            inv,
            qe,
        );
        residue += modulus * t as u128;
        modulus *= qe as u128;
    }
    let x = (residue % n.max(1) as u128) as u64;
    (group.scale(base, x) == *target).then_some(x)
}

/// The multiplicative group `F_p^*`, with `p - 1` factored once.
#[derive(Debug, Clone)]
pub struct MulModP {
    p: u64,
    p_minus_1: Factorization<u64>,
}

impl MulModP {
    pub fn new(p: u64) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return crate::error::domain(format!("{p} is not prime"));
        }
        Ok(Self {
            p,
            p_minus_1: factorize(p - 1)?,
        })
    }

    pub fn with_factorization(p: u64, p_minus_1: Factorization<u64>) -> Self {
        debug_assert_eq!(*p_minus_1.value(), p - 1);
        Self { p, p_minus_1 }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn group_order(&self) -> &Factorization<u64> {
        &self.p_minus_1
    }

    pub fn generator(&self) -> u64 {
        crate::arith::primitive_root(self.p, &self.p_minus_1)
    }
}

impl FiniteGroup for MulModP {
    type Elem = u64;

    fn identity(&self) -> u64 {
        1 % self.p
    }

    fn op(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }

    fn inverse(&self, a: &u64) -> u64 {
        crate::arith::mod_inv(*a, self.p).expect("unit")
    }

    fn scale(&self, a: &u64, n: u64) -> u64 {
        mod_pow(*a, n, self.p)
    }

    fn order(&self, a: &u64) -> Result<u64> {
        if self.p == 2 {
            return Ok(1);
        }
        multiplicative_order_with(*a, self.p, &self.p_minus_1)
    }

    fn dlog(&self, base: &u64, target: &u64) -> Result<Option<u64>> {
        let n = self.order(base)?;
        let nf = factorize(n)?;
        Ok(pohlig_hellman(self, base, &nf, target))
    }
}
