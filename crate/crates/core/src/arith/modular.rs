//! Word-size modular arithmetic. Products go through `u128`, so every
//! modulus up to `u64::MAX` is supported.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{domain, Result};

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
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `base^exp mod modulus`. The empty product is `1 mod modulus`, which is
/// `0` when `modulus == 1`.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    if modulus == 1 {
        return 0;
    }
    let mut base = base % modulus;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Extended Euclid on signed 128-bit integers: returns `(g, x, y)` with
/// `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd((a % m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Reduce an arbitrary-precision integer into `[0, m)`.
pub fn residue(n: &BigInt, m: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(m));
    debug_assert!(r.sign() != Sign::Minus);
    r.to_u64().expect("residue fits in u64")
}

/// Square root modulo an odd prime by Tonelli-Shanks; `None` for
/// non-residues. For `p == 2` every element is its own square root.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(mod_pow(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = mod_pow(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Largest power of `l` dividing `n`.
pub fn l_part(n: u64, l: u64) -> Result<u64> {
    if !super::is_prime(l) {
        return domain(format!("l_part: {l} is not prime"));
    }
    if n == 0 {
        return domain("l_part: n must be positive");
    }
    let mut n = n;
    let mut part = 1u64;
    while n.is_multiple_of(l) {
        n /= l;
        part *= l;
    }
    Ok(part)
}

/// Exponent of `l` in `n` (the `l`-adic valuation), `n > 0`.
pub fn valuation(mut n: u64, l: u64) -> u32 {
    debug_assert!(n > 0 && l > 1);
    let mut v = 0;
    while n.is_multiple_of(l) {
        n /= l;
        v += 1;
    }
    v
}

/// Solutions of `a*x ≡ b (mod n)`: `Some((x0, n'))` meaning `x ≡ x0 (mod n')`
/// with `n' = n / gcd(a, n)`, or `None` if there is none.
pub fn solve_linear_congruence(a: u64, b: u64, n: u64) -> Option<(u64, u64)> {
    assert!(n >= 1);
    let a = a % n;
    let b = b % n;
    let g = a.gcd(&n);
    if !b.is_multiple_of(g) {
        return None;
    }
    let n2 = n / g;
    let inv = mod_inv(a / g, n2)?;
    Some((mul_mod(b / g, inv, n2), n2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(2, 3, 7), 1);
        assert_eq!(mod_pow(9, 0, 10), 1);
        assert_eq!(mod_pow(5, 117, 1), 0);
        assert_eq!(mod_pow(u64::MAX - 1, 2, u64::MAX), 1);
    }

    #[test]
    fn l_part_examples() {
        assert_eq!(l_part(24, 2).unwrap(), 8);
        assert_eq!(l_part(7, 2).unwrap(), 1);
        assert_eq!(l_part(360, 3).unwrap(), 9);
        assert!(l_part(10, 4).is_err());
        assert!(l_part(0, 2).is_err());
    }

    #[test]
    fn sqrt_mod_covers_all_residues() {
        for p in [3u64, 5, 13, 17, 97, 193, 257] {
            for a in 0..p {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a, "p={p} a={a}"),
                    None => assert!((0..p).all(|y| mul_mod(y, y, p) != a)),
                }
            }
        }
    }

    #[test]
    fn inverse_and_congruences() {
        assert_eq!(mod_inv(4, 5), Some(4));
        assert_eq!(mod_inv(6, 9), None);
        assert_eq!(solve_linear_congruence(2, 4, 6), Some((2, 3)));
        assert_eq!(solve_linear_congruence(2, 3, 6), None);
        assert_eq!(solve_linear_congruence(0, 0, 6), Some((0, 1)));
    }

    #[test]
    fn residue_of_negative() {
        assert_eq!(residue(&BigInt::from(-1), 7), 6);
        assert_eq!(residue(&BigInt::from(-14), 7), 0);
    }
}
