use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::arith::{sieve_primes, PrimeRange};
use crate::group::FiniteGroup;

fn e37() -> EllipticCurve {
    EllipticCurve::from_coeffs([0, 0, 1, -1, 0]).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn discriminant_by_covariants() {
    assert_eq!(*e37().discriminant(), BigInt::from(37));
    let e11 = EllipticCurve::from_coeffs([0, -1, 1, -10, -20]).unwrap();
    assert_eq!(*e11.discriminant(), BigInt::from(-161051));
    let e14 = EllipticCurve::from_coeffs([1, 0, 1, 4, -6]).unwrap();
    assert_eq!(*e14.discriminant(), BigInt::from(-21952));
    assert!(e14.check_invariants());
    // y^2 = x^3 is singular
    assert!(EllipticCurve::from_coeffs([0, 0, 0, 0, 0]).is_err());
}

#[test]
fn rational_group_law_examples() {
    let e = e37();
    let p = int_point(0, 0);
    assert!(e.contains(&p));
    assert_eq!(e.add(&p, &p), int_point(1, 0));
    assert_eq!(e.scalar_mul(2, &p), int_point(1, 0));
    assert_eq!(e.add(&p, &Point::Infinity), p);
    assert_eq!(e.add(&p, &e.neg(&p)), Point::Infinity);
    assert_eq!(e.scalar_mul(0, &p), Point::Infinity);
    assert_eq!(e.scalar_mul(-1, &p), int_point(0, -1));
    // 3P = (-1,-1), 4P = (2,-3), 5P = (1/4,-5/8) on 37a1
    assert_eq!(e.scalar_mul(3, &p), int_point(-1, -1));
    assert_eq!(e.scalar_mul(4, &p), int_point(2, -3));
    assert_eq!(e.scalar_mul(5, &p), Point::Affine(q(1, 4), q(-5, 8)));
    for n in -8..=8 {
        assert!(e.contains(&e.scalar_mul(n, &p)));
    }
}

#[test]
fn good_primes_exclude_discriminant_divisors() {
    let e = e37();
    let range = PrimeRange::up_to(50).unwrap();
    let good = e.good_primes(&range).unwrap();
    let expected: Vec<u64> = sieve_primes(50)
        .unwrap()
        .into_iter()
        .filter(|&p| p != 37)
        .collect();
    assert_eq!(good.primes().unwrap(), expected);
    let below = PrimeRange::up_to(30).unwrap();
    assert_eq!(
        e.good_primes(&below).unwrap().primes().unwrap(),
        below.primes().unwrap()
    );
    // No integral model has unit discriminant; a curve whose only bad prime
    // lies outside the range leaves it unchanged.
    let e389 = EllipticCurve::from_coeffs([0, 1, 1, -2, 0]).unwrap();
    assert_eq!(*e389.discriminant(), BigInt::from(389));
    assert_eq!(
        e389.good_primes(&range).unwrap().primes().unwrap(),
        range.primes().unwrap()
    );
}

#[test]
fn reduce_point_examples() {
    let e = e37();
    assert_eq!(
        e.reduce_point(&int_point(0, 0), 5).unwrap(),
        Point::Affine(0, 0)
    );
    assert_eq!(
        e.reduce_point(&Point::Infinity, 5).unwrap(),
        Point::Infinity
    );
    // 5P = (1/4, -5/8): at p = 5, 4^{-1} = 4 and 8^{-1} = 2, so (4, -10 mod 5 = 0)
    let five_p = e.scalar_mul(5, &int_point(0, 0));
    assert_eq!(e.reduce_point(&five_p, 5).unwrap(), Point::Affine(4, 0));
    // p = 2 divides the denominators: reduces to infinity
    assert_eq!(e.reduce_point(&five_p, 2).unwrap(), Point::Infinity);
    assert!(e.reduce_point(&int_point(0, 0), 37).is_err());
    let red = e.reduce_at(5).unwrap();
    assert!(red.contains(&Point::Affine(4, 0)));
}

#[test]
fn counting_examples() {
    let e = e37();
    assert_eq!(e.reduce_at(2).unwrap().count_points().unwrap().order, 5);
    assert_eq!(e.reduce_at(3).unwrap().count_points().unwrap().order, 7);
    let c = e.reduce_at(101).unwrap().count_points().unwrap();
    assert!(c.satisfies_hasse());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    assert!(c.verify(&e.reduce_at(101).unwrap(), &mut rng, 20));
}

#[test]
fn lcm_method_agrees_with_sweep() {
    let e = e37();
    let mut pinned = 0;
    for p in [10007u64, 10009, 65537, 99991] {
        let red = e.reduce_at(p).unwrap();
        let naive = red.count_points().unwrap();
        if let Ok(lcm) = red.count_by_order_lcm_for_tests() {
            assert_eq!(lcm.order, naive.order, "p = {p}");
            assert_eq!(lcm.method, CountMethod::PointOrderLcm);
            pinned += 1;
        }
    }
    assert!(pinned >= 3);
}

#[test]
fn point_order_examples() {
    let e = e37();
    let red2 = e.reduce_at(2).unwrap();
    assert_eq!(red2.point_order(&Point::Infinity).unwrap(), 1);
    let r = e.reduce_point(&int_point(0, 0), 2).unwrap();
    assert_eq!(red2.point_order(&r).unwrap(), 5);
}

#[test]
fn dlog_examples() {
    let e = e37();
    let red = e.reduce_at(5).unwrap();
    let base = e.reduce_point(&int_point(0, 0), 5).unwrap();
    let target = e.reduce_point(&int_point(1, 0), 5).unwrap();
    assert_eq!(red.dlog_in_cyclic(&base, &target).unwrap(), Some(2));
    assert_eq!(
        red.dlog_in_cyclic(&base, &Point::Infinity).unwrap(),
        Some(0)
    );
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in [97u64, 101, 251] {
        let red = e.reduce_at(p).unwrap();
        let r = red.random_point(&mut rng);
        if red.point_order(&r).unwrap() > 2 {
            assert_eq!(red.dlog_in_cyclic(&r, &red.scale(&r, 2)).unwrap(), Some(2));
        }
    }
}

#[test]
fn point_order_matches_exhaustive_multiples() {
    let e = e37();
    for p in sieve_primes(200).unwrap() {
        if !e.is_good_prime(p) {
            continue;
        }
        let red = e.reduce_at(p).unwrap();
        let n = red.count_points().unwrap().order;
        for pt in red.points() {
            let mut k = 1;
            let mut acc = pt.clone();
            while !acc.is_infinity() {
                acc = red.add(&acc, &pt);
                k += 1;
            }
            let ord = red.point_order(&pt).unwrap();
            assert_eq!(ord, k, "p = {p}, pt = {pt}");
            assert_eq!(n % ord, 0);
        }
    }
}

#[test]
fn nontorsion_detection() {
    let e = e37();
    assert!(e
        .is_nontorsion(&int_point(0, 0), NONTORSION_SEARCH_BOUND)
        .unwrap());
    // (5,5) has order 5 on 11a1
    let e11 = EllipticCurve::from_coeffs([0, -1, 1, -10, -20]).unwrap();
    let t = int_point(5, 5);
    assert!(e11.contains(&t));
    assert_eq!(e11.scalar_mul(5, &t), Point::Infinity);
    assert!(!e11.is_nontorsion(&t, NONTORSION_SEARCH_BOUND).unwrap());
}

#[test]
fn parsing() {
    let e: EllipticCurve = "0,0,1,-1,0".parse().unwrap();
    assert_eq!(e, e37());
    assert_eq!(e.to_string(), "0,0,1,-1,0");
    assert_eq!("[0, 0, 1, -1, 0]".parse::<EllipticCurve>().unwrap(), e);
    assert!("0,0,1,-1".parse::<EllipticCurve>().is_err());
    assert!("0,0,0,0,0".parse::<EllipticCurve>().is_err());
    assert_eq!(parse_point("(0,0)").unwrap(), int_point(0, 0));
    assert_eq!(parse_point("inf").unwrap(), Point::Infinity);
    assert_eq!(
        parse_point("(1/4, -5/8)").unwrap(),
        Point::Affine(q(1, 4), q(-5, 8))
    );
    assert!(parse_point("(1/0,2)").is_err());
    assert!(parse_point("1,2").is_err());
    let list = parse_point_list("(0,0) (1,0);inf,(2/4,3)").unwrap();
    assert_eq!(list.len(), 4);
    assert_eq!(list[3], Point::Affine(q(1, 2), q(3, 1)));
    assert_eq!(parse_point(&list[3].to_string()).unwrap(), list[3]);
}
