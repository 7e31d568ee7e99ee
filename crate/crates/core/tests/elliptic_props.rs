use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use splab::arith::{factorize, sieve_primes};
use splab::elliptic::{int_point, EllipticCurve, FieldPoint, Point, RationalPoint};
use splab::group::FiniteGroup;

const CURVES: [[i64; 5]; 5] = [
    [0, 0, 1, -1, 0],
    [0, 1, 1, -2, 0],
    [0, -1, 1, -10, -20],
    [0, 0, 1, -7, 6],
    [1, 0, 1, 4, -6],
];

fn curve(i: usize) -> EllipticCurve {
    EllipticCurve::from_coeffs(CURVES[i]).unwrap()
}

fn good_prime(e: &EllipticCurve, idx: usize, bound: u64) -> u64 {
    let ps: Vec<u64> = sieve_primes(bound)
        .unwrap()
        .into_iter()
        .filter(|&p| e.is_good_prime(p))
        .collect();
    ps[idx % ps.len()]
}

/// Multiples of `r` until the identity.
fn exhaustive_order(e: &splab::elliptic::ReducedCurve, r: &FieldPoint) -> u64 {
    let mut acc = r.clone();
    let mut n = 1;
    while !acc.is_infinity() {
        acc = e.add(&acc, r);
        n += 1;
    }
    n
}

fn brute_count(e: &splab::elliptic::ReducedCurve) -> u64 {
    let p = e.prime();
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            if e.contains(&Point::Affine(x, y)) {
                n += 1;
            }
        }
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn group_axioms_over_finite_fields(ci in 0usize..5, pi in 0usize..200, seed: u64) {
        let e = curve(ci);
        let p = good_prime(&e, pi, 997);
        let red = e.reduce_at(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [0; 3].map(|_| red.random_point(&mut rng));
        let o = FieldPoint::Infinity;
        prop_assert!(red.contains(&a) && red.contains(&b) && red.contains(&c));
        prop_assert_eq!(red.add(&red.add(&a, &b), &c), red.add(&a, &red.add(&b, &c)));
        prop_assert_eq!(red.add(&a, &b), red.add(&b, &a));
        prop_assert_eq!(red.add(&a, &o), a.clone());
        prop_assert_eq!(red.add(&a, &red.neg(&a)), o);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn reduction_is_a_homomorphism(m in -4i64..=4, n in -4i64..=4, k in -4i64..=4, j in -4i64..=4, pi in 0usize..100) {
        let e = curve(1);
        let (g1, g2) = (int_point(-1, 1), int_point(0, 0));
        let pt = |a: i64, b: i64| -> RationalPoint { e.add(&e.scalar_mul(a, &g1), &e.scalar_mul(b, &g2)) };
        let (p_pt, q_pt) = (pt(m, n), pt(k, j));
        let p = good_prime(&e, pi, 2000);
        let red = e.reduce_at(p).unwrap();
        let lhs = e.reduce_point(&e.add(&p_pt, &q_pt), p).unwrap();
        let rhs = red.add(&e.reduce_point(&p_pt, p).unwrap(), &e.reduce_point(&q_pt, p).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn counts_respect_hasse_and_orders(ci in 0usize..5, pi in 0usize..1500, seed: u64) {
        let e = curve(ci);
        let p = good_prime(&e, pi, 12_000);
        let red = e.reduce_at(p).unwrap();
        let cert = red.count_points().unwrap();
        let (lo, hi) = red.hasse_interval();
        prop_assert!(cert.satisfies_hasse());
        prop_assert!(lo <= cert.order && cert.order <= hi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..4 {
            let r = red.random_point(&mut rng);
            let ord = red.point_order(&r).unwrap();
            prop_assert_eq!(cert.order % ord, 0);
            prop_assert!(red.scale(&r, ord).is_infinity());
            for q in factorize(ord).unwrap().primes() {
                prop_assert!(!red.scale(&r, ord / q).is_infinity());
            }
        }
    }
}

#[test]
fn counts_match_enumeration_and_orders_match_multiples() {
    for ci in 0..5 {
        let e = curve(ci);
        for p in sieve_primes(200).unwrap() {
            if !e.is_good_prime(p) {
                continue;
            }
            let red = e.reduce_at(p).unwrap();
            assert_eq!(
                red.count_points().unwrap().order,
                brute_count(&red),
                "{ci} {p}"
            );
            for r in red.points().into_iter().take(30) {
                assert_eq!(red.point_order(&r).unwrap(), exhaustive_order(&red, &r));
            }
        }
    }
}
