//! The two concrete groups with reduction maps: `Q^*` and `E(Q)`. Relation
//! searches in [`crate::dependence`] are written once against
//! [`ReductionSystem`].

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::elliptic::{
    EllipticCurve, FieldPoint, Point, RationalPoint, ReducedCurve, NONTORSION_SEARCH_BOUND,
};
use crate::error::Result;
use crate::group::{FiniteGroup, MulModP};
use crate::mulgroup::{MulElement, MAX_VERIFIED_EXPONENT};

/// Scalars above this magnitude are not applied to rational points (point
/// heights grow quadratically in the multiplier).
pub const MAX_EC_VERIFIED_MULTIPLIER: u64 = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Mul,
    Ec,
}

impl SystemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::Mul => "mul",
            SystemKind::Ec => "ec",
        }
    }
}

/// A finitely generated group over `Q` with reductions modulo primes.
pub trait ReductionSystem: Sync {
    type Point: Clone + Debug + PartialEq + Send + Sync;
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;
    type Local: FiniteGroup<Elem = Self::Elem> + Send + Sync;

    fn kind(&self) -> SystemKind;

    /// `p` is a prime of good reduction for the model and every point.
    fn is_good(&self, points: &[&Self::Point], p: u64) -> bool;

    fn local(&self, p: u64) -> Result<Self::Local>;

    fn reduce(&self, local: &Self::Local, point: &Self::Point) -> Result<Self::Elem>;

    fn identity(&self) -> Self::Point;

    fn combine(&self, a: &Self::Point, b: &Self::Point) -> Self::Point;

    /// `e·point`, or `None` when `|e|` is beyond the exact-arithmetic budget.
    fn scale(&self, point: &Self::Point, e: &BigInt) -> Option<Self::Point>;

    fn has_infinite_order(&self, point: &Self::Point) -> Result<bool>;
}

/// `Q^*` with reduction into `F_p^*`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MulSystem;

impl ReductionSystem for MulSystem {
    type Point = MulElement;
    type Elem = u64;
    type Local = MulModP;

    fn kind(&self) -> SystemKind {
        SystemKind::Mul
    }

    fn is_good(&self, points: &[&MulElement], p: u64) -> bool {
        points.iter().all(|x| x.is_unit_at(p))
    }

    fn local(&self, p: u64) -> Result<MulModP> {
        MulModP::new(p)
    }

    fn reduce(&self, local: &MulModP, point: &MulElement) -> Result<u64> {
        point.residue_mod(local.prime())
    }

    fn identity(&self) -> MulElement {
        MulElement::from_int(1).expect("1 is a unit")
    }

    fn combine(&self, a: &MulElement, b: &MulElement) -> MulElement {
        a.mul(b)
    }

    fn scale(&self, point: &MulElement, e: &BigInt) -> Option<MulElement> {
        if e.magnitude() > &BigUint::from(MAX_VERIFIED_EXPONENT) {
            return None;
        }
        Some(point.pow(e.to_i32()?))
    }

    fn has_infinite_order(&self, point: &MulElement) -> Result<bool> {
        Ok(!point.is_torsion())
    }
}

/// `E(Q)` with reduction into `E(F_p)`.
#[derive(Debug, Clone)]
pub struct EcSystem {
    pub curve: EllipticCurve,
}

impl EcSystem {
    pub fn new(curve: EllipticCurve) -> Self {
        Self { curve }
    }
}

impl ReductionSystem for EcSystem {
    type Point = RationalPoint;
    type Elem = FieldPoint;
    type Local = ReducedCurve;

    fn kind(&self) -> SystemKind {
        SystemKind::Ec
    }

    fn is_good(&self, _points: &[&RationalPoint], p: u64) -> bool {
        self.curve.is_good_prime(p)
    }

    fn local(&self, p: u64) -> Result<ReducedCurve> {
        self.curve.reduce_at(p)
    }

    fn reduce(&self, local: &ReducedCurve, point: &RationalPoint) -> Result<FieldPoint> {
        self.curve.reduce_point(point, local.prime())
    }

    fn identity(&self) -> RationalPoint {
        Point::Infinity
    }

    fn combine(&self, a: &RationalPoint, b: &RationalPoint) -> RationalPoint {
        self.curve.add(a, b)
    }

    fn scale(&self, point: &RationalPoint, e: &BigInt) -> Option<RationalPoint> {
        if e.magnitude() > &BigUint::from(MAX_EC_VERIFIED_MULTIPLIER) {
            return None;
        }
        Some(self.curve.scalar_mul_big(e, point))
    }

    fn has_infinite_order(&self, point: &RationalPoint) -> Result<bool> {
        self.curve.is_nontorsion(point, NONTORSION_SEARCH_BOUND)
    }
}
