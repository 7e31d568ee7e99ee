use rand::Rng;

use super::law::{CoordField, Law, Point, PrimeField};
use super::FieldPoint;
use crate::arith::{factorize, mul_mod, sqrt_mod};
use crate::error::{Error, Result};
use crate::group::{annihilator_in_interval, order_from_multiple, pohlig_hellman, FiniteGroup};

/// Largest prime for which [`ReducedCurve::count_points`] sweeps every `x`.
pub const NAIVE_COUNT_LIMIT: u64 = 1 << 24;

/// How many points the point-order LCM method tries before giving up.
const LCM_METHOD_POINTS: usize = 64;

/// The reduction `E mod p` at a good prime, as a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedCurve {
    p: u64,
    field: PrimeField,
    a: [u64; 5],
    // completed-square model Y^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 with Y = 2y + a1 x + a3
    b2: u64,
    b4: u64,
    b6: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    NaiveCount,
    PointOrderLcm,
}

impl CountMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMethod::NaiveCount => "NaiveCount",
            CountMethod::PointOrderLcm => "PointOrderLcm",
        }
    }
}

/// `#E(F_p)` together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupOrderCertificate {
    pub p: u64,
    pub order: u64,
    pub method: CountMethod,
}

impl GroupOrderCertificate {
    pub fn satisfies_hasse(&self) -> bool {
        let t = self.p as i128 + 1 - self.order as i128;
        t * t <= 4 * self.p as i128
    }

    /// `order·R = O` for `samples` random points `R`.
    pub fn verify<R: Rng>(&self, curve: &ReducedCurve, rng: &mut R, samples: usize) -> bool {
        self.satisfies_hasse()
            && (0..samples).all(|_| {
                let r = curve.random_point(rng);
                curve.is_identity(&curve.scale(&r, self.order))
            })
    }
}

impl ReducedCurve {
    pub(crate) fn new(p: u64, a: [u64; 5]) -> Self {
        let f = PrimeField(p);
        let [a1, a2, a3, a4, a6] = a;
        let b2 = f.add(&f.mul(&a1, &a1), &f.mul(&f.int(4), &a2));
        let b4 = f.add(&f.mul(&2, &a4), &f.mul(&a1, &a3));
        let b6 = f.add(&f.mul(&a3, &a3), &f.mul(&f.int(4), &a6));
        Self {
            p,
            field: f,
            a,
            b2,
            b4,
            b6,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> [u64; 5] {
        self.a
    }

    fn law(&self) -> Law<'_, PrimeField> {
        Law {
            field: &self.field,
            a: &self.a,
        }
    }

    pub fn contains(&self, pt: &FieldPoint) -> bool {
        match pt {
            Point::Affine(x, y) if *x >= self.p || *y >= self.p => false,
            _ => self.law().contains(pt),
        }
    }

    pub fn add(&self, p: &FieldPoint, q: &FieldPoint) -> FieldPoint {
        self.law().add(p, q)
    }

    pub fn neg(&self, p: &FieldPoint) -> FieldPoint {
        self.law().neg(p)
    }

    /// `[lo, hi]` with `|p + 1 - N| <= 2 sqrt(p)` for every integer `N` in it.
    pub fn hasse_interval(&self) -> (u64, u64) {
        let w = (4 * self.p).isqrt();
        ((self.p + 1).saturating_sub(w).max(1), self.p + 1 + w)
    }

    /// Right-hand side of the completed-square model at `x`.
    fn completed_rhs(&self, x: u64) -> u64 {
        let f = &self.field;
        let x2 = f.mul(&x, &x);
        let t = f.add(&f.mul(&4, &f.mul(&x2, &x)), &f.mul(&self.b2, &x2));
        f.add(&f.add(&t, &f.mul(&2, &f.mul(&self.b4, &x))), &self.b6)
    }

    /// `y` values above `x` (zero, one or two of them).
    pub fn lift_x(&self, x: u64) -> Vec<u64> {
        let x = x % self.p;
        if self.p == 2 {
            return (0..2)
                .filter(|&y| self.contains(&Point::Affine(x, y)))
                .collect();
        }
        let f = &self.field;
        let Some(root) = sqrt_mod(self.completed_rhs(x), self.p) else {
            return Vec::new();
        };
        let [a1, _, a3, _, _] = self.a;
        let shift = f.add(&f.mul(&a1, &x), &a3);
        let half = f.inv(&2);
        let y1 = f.mul(&f.sub(&root, &shift), &half);
        let y2 = f.mul(&f.sub(&f.neg(&root), &shift), &half);
        if y1 == y2 {
            vec![y1]
        } else {
            let mut v = vec![y1, y2];
            v.sort_unstable();
            v
        }
    }

    /// Every point of `E(F_p)`, infinity first, then by `(x, y)`.
    pub fn points(&self) -> Vec<FieldPoint> {
        let mut out = vec![Point::Infinity];
        for x in 0..self.p {
            out.extend(self.lift_x(x).into_iter().map(|y| Point::Affine(x, y)));
        }
        out
    }

    /// A uniformly chosen `x` is tried until it lifts; a random lift is
    /// returned. Falls back to a sweep (and finally to infinity) on tiny
    /// fields with few affine points.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> FieldPoint {
        for _ in 0..64 {
            let x = rng.gen_range(0..self.p);
            let ys = self.lift_x(x);
            if !ys.is_empty() {
                let y = ys[rng.gen_range(0..ys.len())];
                return Point::Affine(x, y);
            }
        }
        let all = self.points();
        all[rng.gen_range(0..all.len())].clone()
    }

    /// Exact `#E(F_p)`. For `p` in {2, 3} every pair `(x, y)` is tested; for
    /// larger `p` the completed-square model is used and each `x`
    /// contributes `1 + (g(x) / p)`. Above [`NAIVE_COUNT_LIMIT`] the order
    /// is pinned down as the unique multiple, in the Hasse interval, of the
    /// LCM of orders of several points.
    pub fn count_points(&self) -> Result<GroupOrderCertificate> {
        let p = self.p;
        if p <= 3 {
            let mut n = 1;
            for x in 0..p {
                for y in 0..p {
                    if self.law().contains(&Point::Affine(x, y)) {
                        n += 1;
                    }
                }
            }
            return Ok(self.cert(n, CountMethod::NaiveCount));
        }
        if p <= NAIVE_COUNT_LIMIT {
            let mut is_square = vec![false; p as usize];
            for y in 0..p {
                is_square[mul_mod(y, y, p) as usize] = true;
            }
            let mut n = 1u64;
            for x in 0..p {
                let g = self.completed_rhs(x);
                n += if g == 0 {
                    1
                } else if is_square[g as usize] {
                    2
                } else {
                    0
                };
            }
            return Ok(self.cert(n, CountMethod::NaiveCount));
        }
        self.count_by_order_lcm()
    }

    fn cert(&self, order: u64, method: CountMethod) -> GroupOrderCertificate {
        GroupOrderCertificate {
            p: self.p,
            order,
            method,
        }
    }

    #[cfg(test)]
    pub(crate) fn count_by_order_lcm_for_tests(&self) -> Result<GroupOrderCertificate> {
        self.count_by_order_lcm()
    }

    fn count_by_order_lcm(&self) -> Result<GroupOrderCertificate> {
        let (lo, hi) = self.hasse_interval();
        let mut lcm = 1u64;
        let mut tried = 0;
        let mut x = 0u64;
        while tried < LCM_METHOD_POINTS && x < self.p {
            for y in self.lift_x(x) {
                let ord = self.point_order(&Point::Affine(x, y))?;
                lcm = num_integer::Integer::lcm(&lcm, &ord);
                tried += 1;
            }
            let first = lo.div_ceil(lcm) * lcm;
            if first <= hi && first + lcm > hi {
                return Ok(self.cert(first, CountMethod::PointOrderLcm));
            }
            x += 1;
        }
        Err(Error::Resource(format!(
            "point-order LCM {lcm} does not single out #E(F_{}) in the Hasse interval",
            self.p
        )))
    }

    /// Exact order of a point: BSGS finds the smallest annihilating
    /// multiple in the Hasse interval, whose prime factors are then
    /// stripped while the point stays annihilated.
    pub fn point_order(&self, r: &FieldPoint) -> Result<u64> {
        if r.is_infinity() {
            return Ok(1);
        }
        let (lo, hi) = self.hasse_interval();
        let m = annihilator_in_interval(self, r, lo, hi).ok_or_else(|| {
            Error::Internal(format!(
                "no multiple of the order of {r} in the Hasse interval"
            ))
        })?;
        Ok(order_from_multiple(self, r, &factorize(m)?))
    }

    /// Least `e >= 0` with `e·base = target`, or `None` when `target` lies
    /// outside `<base>`.
    pub fn dlog_in_cyclic(&self, base: &FieldPoint, target: &FieldPoint) -> Result<Option<u64>> {
        let n = self.point_order(base)?;
        Ok(pohlig_hellman(self, base, &factorize(n)?, target))
    }
}

impl FiniteGroup for ReducedCurve {
    type Elem = FieldPoint;

    fn identity(&self) -> FieldPoint {
        Point::Infinity
    }

    fn op(&self, a: &FieldPoint, b: &FieldPoint) -> FieldPoint {
        self.add(a, b)
    }

    fn inverse(&self, a: &FieldPoint) -> FieldPoint {
        self.neg(a)
    }

    fn order(&self, a: &FieldPoint) -> Result<u64> {
        self.point_order(a)
    }
}
