//! Elliptic curves over `Q` on long Weierstrass models: the exact group
//! law on `E(Q)`, reduction at good primes, point counting and point
//! orders in `E(F_p)`.
//!
//! Text formats: a curve is `"a1,a2,a3,a4,a6"`; a point is `"(x,y)"` with
//! coordinates `n` or `n/d`, or `"inf"`.

mod curve;
mod law;
mod reduced;

pub use curve::{
    b_invariants, discriminant_of, int_point, parse_point, parse_point_list, parse_rational,
    EllipticCurve,
};
pub use law::{FieldPoint, Point, RationalPoint};
pub use reduced::{CountMethod, GroupOrderCertificate, ReducedCurve, NAIVE_COUNT_LIMIT};

/// Search bound for [`EllipticCurve::is_nontorsion`] used by callers that
/// need points of infinite order.
pub const NONTORSION_SEARCH_BOUND: u64 = 2000;

#[cfg(test)]
mod tests;
