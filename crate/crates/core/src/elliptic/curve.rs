use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::law::{Law, Point, RationalPoint, Rationals};
use super::reduced::ReducedCurve;
use crate::arith::{residue, PrimeRange};
use crate::error::{domain, Error, Result};

/// An elliptic curve over `Q` given by an integral long Weierstrass model
/// `[a1, a2, a3, a4, a6]`.
///
/// The model is used verbatim: no minimal model is computed, so every
/// prime dividing the discriminant of *this* model is treated as bad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticCurve {
    a: [BigInt; 5],
    aq: [BigRational; 5],
    discriminant: BigInt,
}

/// `(b2, b4, b6, b8)` covariants of `[a1, a2, a3, a4, a6]`.
pub fn b_invariants(a: &[BigInt; 5]) -> [BigInt; 4] {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    [b2, b4, b6, b8]
}

pub fn discriminant_of(a: &[BigInt; 5]) -> BigInt {
    let [b2, b4, b6, b8] = b_invariants(a);
    -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
}

impl EllipticCurve {
    pub fn new(a: [BigInt; 5]) -> Result<Self> {
        let discriminant = discriminant_of(&a);
        if discriminant.is_zero() {
            return domain("singular model: discriminant is zero");
        }
        let aq = a.clone().map(BigRational::from_integer);
        Ok(Self {
            a,
            aq,
            discriminant,
        })
    }

    pub fn from_coeffs(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(BigInt::from))
    }

    pub fn coeffs(&self) -> &[BigInt; 5] {
        &self.a
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// Stored discriminant equals the one recomputed from the coefficients.
    pub fn check_invariants(&self) -> bool {
        !self.discriminant.is_zero() && discriminant_of(&self.a) == self.discriminant
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        residue(&self.discriminant, p) != 0
    }

    /// Primes of `range` dividing the discriminant.
    pub fn bad_primes_in(&self, range: &PrimeRange) -> Result<Vec<u64>> {
        Ok(range
            .primes()?
            .into_iter()
            .filter(|&p| !self.is_good_prime(p))
            .collect())
    }

    /// `range` with the bad primes of the model added to its exclusions.
    pub fn good_primes(&self, range: &PrimeRange) -> Result<PrimeRange> {
        Ok(range.clone().excluding(self.bad_primes_in(range)?))
    }

    fn law(&self) -> Law<'_, Rationals> {
        Law {
            field: &Rationals,
            a: &self.aq,
        }
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.law().contains(p)
    }

    pub fn add(&self, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
        self.law().add(p, q)
    }

    pub fn neg(&self, p: &RationalPoint) -> RationalPoint {
        self.law().neg(p)
    }

    pub fn scalar_mul(&self, n: i64, p: &RationalPoint) -> RationalPoint {
        self.law().scale(p, &BigInt::from(n))
    }

    pub fn scalar_mul_big(&self, n: &BigInt, p: &RationalPoint) -> RationalPoint {
        self.law().scale(p, n)
    }

    /// The reduction of the model at a good prime.
    pub fn reduce_at(&self, p: u64) -> Result<ReducedCurve> {
        if !crate::arith::is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        if !self.is_good_prime(p) {
            return domain(format!(
                "{p} divides the discriminant {}",
                self.discriminant
            ));
        }
        Ok(ReducedCurve::new(p, self.a.clone().map(|c| residue(&c, p))))
    }

    /// Reduce a rational point at a good prime. The point is written
    /// projectively as `(X : Y : Z)` with coprime integers; a point whose
    /// coordinates have `p` in a denominator reduces to the point at infinity.
    pub fn reduce_point(&self, point: &RationalPoint, p: u64) -> Result<super::FieldPoint> {
        if !self.is_good_prime(p) {
            return domain(format!("{p} is a bad prime for this model"));
        }
        reduce_rational_point(point, p)
    }

    /// Nontorsion test from reductions: torsion points of `E(Q)` have order
    /// at most 12, and reduction at a good prime preserves that bound, so an
    /// order above 16 at two good primes certifies infinite order. Returns
    /// `false` if no two such primes are found below `search_bound`.
    pub fn is_nontorsion(&self, point: &RationalPoint, search_bound: u64) -> Result<bool> {
        if point.is_infinity() {
            return Ok(false);
        }
        let mut hits = 0;
        for p in crate::arith::sieve_primes(search_bound.max(3))? {
            if p < 3 || !self.is_good_prime(p) {
                continue;
            }
            let reduced = self.reduce_at(p)?;
            let r = reduce_rational_point(point, p)?;
            if reduced.point_order(&r)? > 16 {
                hits += 1;
                if hits == 2 {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

pub(crate) fn reduce_rational_point(point: &RationalPoint, p: u64) -> Result<super::FieldPoint> {
    let (x, y) = match point {
        Point::Infinity => return Ok(Point::Infinity),
        Point::Affine(x, y) => (x, y),
    };
    let z = x.denom().lcm(y.denom());
    let bz = BigInt::from(p);
    if (&z % &bz).is_zero() {
        return Ok(Point::Infinity);
    }
    let zinv = crate::arith::mod_inv(residue(&z, p), p)
        .ok_or_else(|| Error::Internal("denominator not invertible".into()))?;
    let big_x = x.numer() * (&z / x.denom());
    let big_y = y.numer() * (&z / y.denom());
    Ok(Point::Affine(
        crate::arith::mul_mod(residue(&big_x, p), zinv, p),
        crate::arith::mul_mod(residue(&big_y, p), zinv, p),
    ))
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(f, "{a1},{a2},{a3},{a4},{a6}")
    }
}

impl FromStr for EllipticCurve {
    type Err = Error;

    /// `"a1,a2,a3,a4,a6"`, optionally wrapped in brackets.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!(
                "curve needs five comma-separated integers, got {s:?}"
            )));
        }
        let mut a: [BigInt; 5] = Default::default();
        for (slot, text) in a.iter_mut().zip(&parts) {
            *slot = text
                .parse()
                .map_err(|_| Error::Parse(format!("bad curve coefficient {text:?}")))?;
        }
        Self::new(a)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Parse `"(x,y)"` (coordinates `n` or `n/d`) or `"inf"`.
pub fn parse_point(s: &str) -> Result<RationalPoint> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "O" {
        return Ok(Point::Infinity);
    }
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("point must look like (x,y) or inf, got {s:?}")))?;
    let (x, y) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("point needs two coordinates: {s:?}")))?;
    Ok(Point::Affine(parse_rational(x)?, parse_rational(y)?))
}

/// Parse a list of points: parenthesised pairs and `inf` tokens, separated
/// by whitespace, `;` or commas between points.
pub fn parse_point_list(s: &str) -> Result<Vec<RationalPoint>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ';' || c == ',');
        if rest.is_empty() {
            break;
        }
        if rest.starts_with('(') {
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed point in {s:?}")))?;
            out.push(parse_point(&rest[..=close])?);
            rest = &rest[close + 1..];
        } else {
            let end = rest
                .find(|c: char| c.is_whitespace() || c == ';' || c == ',')
                .unwrap_or(rest.len());
            out.push(parse_point(&rest[..end])?);
            rest = &rest[end..];
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty point list".into()));
    }
    Ok(out)
}

/// Shorthand for an affine rational point with integer coordinates.
pub fn int_point(x: i64, y: i64) -> RationalPoint {
    Point::Affine(
        BigRational::from_integer(BigInt::from(x)),
        BigRational::from_integer(BigInt::from(y)),
    )
}
