use proptest::prelude::*;
use splab::arith::PrimeRange;
use splab::elliptic::{int_point, EllipticCurve, FieldPoint, RationalPoint};
use splab::mulgroup::MulElement;
use splab::order_search::{sweep_ec, sweep_mul, OrderProfile};

fn lpart(mut n: u64, l: u64) -> u64 {
    let mut out = 1;
    while n.is_multiple_of(l) {
        n /= l;
        out *= l;
    }
    out
}

fn exhaustive_order(e: &splab::elliptic::ReducedCurve, r: &FieldPoint) -> u64 {
    let mut acc = r.clone();
    let mut n = 1;
    while !acc.is_infinity() {
        acc = e.add(&acc, r);
        n += 1;
    }
    n
}

fn rank_two() -> (EllipticCurve, Vec<RationalPoint>) {
    (
        EllipticCurve::from_coeffs([0, 1, 1, -2, 0]).unwrap(),
        vec![int_point(-1, 1), int_point(0, 0)],
    )
}

#[test]
fn elliptic_matches_are_sound_by_exhaustive_multiples() {
    let (e, pts) = rank_two();
    for l in [2u64, 3] {
        for ks in [vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 2]] {
            let prof = OrderProfile::new(l, ks.clone()).unwrap();
            let r = sweep_ec(&e, &pts, &prof, &PrimeRange::up_to(200).unwrap(), true).unwrap();
            for d in r.detail.unwrap() {
                let red = e.reduce_at(d.p).unwrap();
                let expect: Vec<u64> = pts
                    .iter()
                    .map(|pt| lpart(exhaustive_order(&red, &e.reduce_point(pt, d.p).unwrap()), l))
                    .collect();
                assert_eq!(d.lparts, expect, "p = {}", d.p);
                assert_eq!(d.matched, r.matches.contains(&d.p));
                assert_eq!(d.matched, expect == prof.targets());
            }
            assert!(r.exclusions.contains(&l));
            assert!(r.matches.iter().all(|&p| p != l && e.is_good_prime(p)));
        }
    }
}

#[test]
fn zero_profile_means_coprime_to_l() {
    let e = EllipticCurve::from_coeffs([0, 0, 1, -1, 0]).unwrap();
    let pt = int_point(0, 0);
    let prof = OrderProfile::new(3, vec![0]).unwrap();
    let r = sweep_ec(
        &e,
        std::slice::from_ref(&pt),
        &prof,
        &PrimeRange::up_to(500).unwrap(),
        true,
    )
    .unwrap();
    for d in r.detail.unwrap() {
        let red = e.reduce_at(d.p).unwrap();
        let ord = red.point_order(&e.reduce_point(&pt, d.p).unwrap()).unwrap();
        assert_eq!(d.matched, !ord.is_multiple_of(3));
    }
}

#[test]
fn separate_profiles_agree_with_joint_detail() {
    let e = EllipticCurve::from_coeffs([0, 0, 1, -1, 0]).unwrap();
    let pts = [int_point(0, 0)];
    let range = PrimeRange::up_to(2000).unwrap();
    let by2 = sweep_ec(
        &e,
        &pts,
        &OrderProfile::new(2, vec![1]).unwrap(),
        &range,
        true,
    )
    .unwrap();
    let by3 = sweep_ec(
        &e,
        &pts,
        &OrderProfile::new(3, vec![1]).unwrap(),
        &range,
        true,
    )
    .unwrap();
    for (a, b) in by2.detail.unwrap().iter().zip(by3.detail.unwrap().iter()) {
        if a.p == b.p {
            let red = e.reduce_at(a.p).unwrap();
            let ord = red
                .point_order(&e.reduce_point(&pts[0], a.p).unwrap())
                .unwrap();
            assert_eq!(a.lparts[0], lpart(ord, 2));
            assert_eq!(b.lparts[0], lpart(ord, 3));
        }
    }
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let (e, pts) = rank_two();
    let prof = OrderProfile::new(2, vec![1, 2]).unwrap();
    let range = PrimeRange::up_to(20_000).unwrap();
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| sweep_ec(&e, &pts, &prof, &range, true).unwrap())
    };
    assert_eq!(run(1), run(6));
    let xs = [
        MulElement::from_int(6).unwrap(),
        MulElement::from_ratio(-2, 5).unwrap(),
    ];
    let mp = OrderProfile::new(3, vec![1, 0]).unwrap();
    let run_mul = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| sweep_mul(&xs, &mp, &range, true).unwrap())
    };
    assert_eq!(run_mul(1), run_mul(5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn elliptic_range_monotone(l in prop::sample::select(vec![2u64, 3, 5]), k in 0u32..3, lo in 2u64..300, len1 in 10u64..800, extra_lo in 0u64..100, extra_hi in 0u64..800) {
        let e = EllipticCurve::from_coeffs([0, 0, 1, -1, 0]).unwrap();
        let pts = [int_point(0, 0)];
        let prof = OrderProfile::new(l, vec![k]).unwrap();
        let inner = PrimeRange::new(lo, lo + len1).unwrap();
        let outer = PrimeRange::new(lo.saturating_sub(extra_lo).max(2), lo + len1 + extra_hi).unwrap();
        prop_assume!(inner.is_subset_of(&outer));
        let a = sweep_ec(&e, &pts, &prof, &inner, false);
        let b = sweep_ec(&e, &pts, &prof, &outer, false).unwrap();
        if let Ok(a) = a {
            prop_assert!(a.matches.iter().all(|p| b.matches.contains(p)));
        }
    }
}
