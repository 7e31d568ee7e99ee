//! Chord-tangent group law on a long Weierstrass model
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`, written once over any
//! coordinate field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{add_mod, mod_inv, mul_mod, sub_mod};

/// A point of `E(K)`: the point at infinity or an affine pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point<T> {
    Infinity,
    Affine(T, T),
}

impl<T> Point<T> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn coords(&self) -> Option<(&T, &T)> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, y) => Some((x, y)),
        }
    }
}

/// A point of `E(Q)`.
pub type RationalPoint = Point<BigRational>;

/// A point of `E(F_p)`, coordinates in `[0, p)`.
pub type FieldPoint = Point<u64>;

impl fmt::Display for Point<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Affine(x, y) => write!(f, "({x},{y})"),
        }
    }
}

impl fmt::Display for Point<u64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Affine(x, y) => write!(f, "({x},{y})"),
        }
    }
}

pub(crate) trait CoordField {
    type E: Clone + PartialEq;

    fn zero(&self) -> Self::E;
    fn int(&self, n: i64) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::E) -> Self::E;

    fn is_zero(&self, a: &Self::E) -> bool {
        *a == self.zero()
    }

    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }
}

pub(crate) struct Rationals;

impl CoordField for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        BigRational::one() / a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PrimeField(pub u64);

impl CoordField for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn int(&self, n: i64) -> u64 {
        n.rem_euclid(self.0 as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        add_mod(*a, *b, self.0)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        sub_mod(*a, *b, self.0)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn inv(&self, a: &u64) -> u64 {
        mod_inv(*a, self.0).expect("nonzero element of a prime field")
    }
}

/// Coefficients `[a1, a2, a3, a4, a6]` over a coordinate field.
pub(crate) struct Law<'a, F: CoordField> {
    pub field: &'a F,
    pub a: &'a [F::E; 5],
}

impl<F: CoordField> Law<'_, F> {
    pub fn contains(&self, p: &Point<F::E>) -> bool {
        let f = self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let lhs = f.add(&f.mul(y, y), &f.mul(y, &f.add(&f.mul(a1, x), a3)));
                let x2 = f.mul(x, x);
                let rhs = f.add(
                    &f.add(&f.mul(&x2, x), &f.mul(a2, &x2)),
                    &f.add(&f.mul(a4, x), a6),
                );
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, p: &Point<F::E>) -> Point<F::E> {
        let f = self.field;
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let [a1, _, a3, _, _] = self.a;
                let ny = f.sub(&f.neg(y), &f.add(&f.mul(a1, x), a3));
                Point::Affine(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, p: &Point<F::E>, q: &Point<F::E>) -> Point<F::E> {
        let f = self.field;
        let [a1, a2, a3, a4, _] = self.a;
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            // Same x: either Q = -P or Q = P.
            let denom = f.add(&f.add(y1, y2), &f.add(&f.mul(a1, x2), a3));
            if f.is_zero(&denom) {
                return Point::Infinity;
            }
            let x1sq = f.mul(x1, x1);
            let num = f.sub(
                &f.add(
                    &f.add(&f.mul(&f.int(3), &x1sq), &f.mul(&f.int(2), &f.mul(a2, x1))),
                    a4,
                ),
                &f.mul(a1, y1),
            );
            f.mul(&num, &f.inv(&denom))
        } else {
            f.mul(&f.sub(y2, y1), &f.inv(&f.sub(x2, x1)))
        };
        let nu = f.sub(y1, &f.mul(&lambda, x1));
        let x3 = f.sub(
            &f.sub(&f.add(&f.mul(&lambda, &lambda), &f.mul(a1, &lambda)), a2),
            &f.add(x1, x2),
        );
        let y3 = f.sub(&f.sub(&f.neg(&f.mul(&f.add(&lambda, a1), &x3)), &nu), a3);
        Point::Affine(x3, y3)
    }

    pub fn scale(&self, p: &Point<F::E>, n: &BigInt) -> Point<F::E> {
        let mut acc = Point::Infinity;
        let base = if n.sign() == num_bigint::Sign::Minus {
            self.neg(p)
        } else {
            p.clone()
        };
        let mag = n.magnitude();
        for i in (0..mag.bits()).rev() {
            acc = self.add(&acc, &acc);
            if mag.bit(i) {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }
}
