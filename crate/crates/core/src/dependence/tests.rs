use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::elliptic::{int_point, EllipticCurve, RationalPoint};
use crate::group::MulModP;
use crate::mulgroup::MulElement;
use crate::system::{EcSystem, MulSystem};

fn mul(xs: &[i64]) -> Vec<MulElement> {
    xs.iter()
        .map(|&x| MulElement::from_int(x).unwrap())
        .collect()
}

fn curve_37a() -> EcSystem {
    EcSystem::new(EllipticCurve::from_coeffs([0, 0, 1, -1, 0]).unwrap())
}

fn curve_389a() -> EcSystem {
    EcSystem::new(EllipticCurve::from_coeffs([0, 1, 1, -2, 0]).unwrap())
}

/// Every `m` in `[1, l]^s` (full residue system modulo `l`).
fn brute_implication<G: FiniteGroup>(g: &G, rs: &[G::Elem], ss: &[G::Elem], l: u64) -> bool {
    let s = rs.len();
    let mut m = vec![1u64; s];
    loop {
        let eval = |xs: &[G::Elem]| {
            xs.iter()
                .zip(&m)
                .fold(g.identity(), |acc, (x, &k)| g.op(&acc, &g.scale(x, k)))
        };
        if g.is_identity(&eval(rs)) && !g.is_identity(&eval(ss)) {
            return false;
        }
        let mut i = s;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if m[i] < l {
                m[i] += 1;
                break;
            }
            m[i] = 1;
        }
    }
}

fn check_witness<G: FiniteGroup>(g: &G, rs: &[G::Elem], ss: &[G::Elem], m: &[u64]) -> bool {
    let eval = |xs: &[G::Elem]| {
        xs.iter()
            .zip(m)
            .fold(g.identity(), |acc, (x, &k)| g.op(&acc, &g.scale(x, k)))
    };
    m.iter().all(|&k| k > 0) && g.is_identity(&eval(rs)) && !g.is_identity(&eval(ss))
}

#[test]
fn single_generator_holds_with_constraint() {
    let r = implication_at(&MulSystem, &mul(&[2]), &mul(&[4]), 7, 100).unwrap();
    assert_eq!(r.status, ImplicationStatus::Holds);
    assert_eq!(r.method, ImplicationMethod::ExactS1);
    assert_eq!(r.constraint, Some(PrimeExponentConstraint::new(7, 3, 2)));
}

#[test]
fn single_generator_fails_on_order() {
    let r = implication_at(&MulSystem, &mul(&[2]), &mul(&[3]), 7, 100).unwrap();
    assert_eq!(r.status, ImplicationStatus::Fails { m: vec![3] });
}

#[test]
fn bad_prime_is_a_domain_error() {
    assert!(implication_at(&MulSystem, &mul(&[2]), &mul(&[4]), 2, 100).is_err());
    assert!(implication_at(&MulSystem, &mul(&[2]), &mul(&[4]), 9, 100).is_err());
    assert!(implication_at(&MulSystem, &mul(&[2]), &mul(&[4, 8]), 7, 100).is_err());
}

#[test]
fn cyclic_pair_holds_for_squares() {
    let r = implication_at(&MulSystem, &mul(&[2, 3]), &mul(&[4, 9]), 11, 100).unwrap();
    assert_eq!(r.status, ImplicationStatus::Holds);
    assert_eq!(r.method, ImplicationMethod::CyclicShortcut);
    let c = r.constraint.unwrap();
    assert_eq!(c.residue % c.modulus, 2 % c.modulus);
}

#[test]
fn affine_counterexample() {
    let one = MulElement::from_int(1).unwrap();
    let three = MulElement::from_int(3).unwrap();
    let r = affine_implication_at(&MulSystem, &mul(&[2]), &one, &mul(&[2]), &three, 7, 50).unwrap();
    assert_eq!(r.status, ImplicationStatus::Fails { m: vec![3] });
}

#[test]
fn affine_vacuous_and_holds() {
    // 3 is not a power of 2 mod 7
    let r = affine_implication_at(
        &MulSystem,
        &mul(&[2]),
        &MulElement::from_int(3).unwrap(),
        &mul(&[2]),
        &MulElement::from_int(3).unwrap(),
        7,
        50,
    )
    .unwrap();
    assert_eq!(r.status, ImplicationStatus::Vacuous);
    let r = affine_implication_at(
        &MulSystem,
        &mul(&[2]),
        &MulElement::from_int(4).unwrap(),
        &mul(&[4]),
        &MulElement::from_int(16).unwrap(),
        7,
        50,
    )
    .unwrap();
    assert_eq!(r.status, ImplicationStatus::Holds);
}

#[test]
fn affine_box_agrees_with_exact_single() {
    let p0 = MulElement::from_int(4).unwrap();
    let q0 = MulElement::from_int(5).unwrap();
    for p in [11u64, 13, 17, 19, 23] {
        let r = affine_implication_at(&MulSystem, &mul(&[2, 1]), &p0, &mul(&[3, 1]), &q0, p, 1000)
            .unwrap();
        let single =
            affine_implication_at(&MulSystem, &mul(&[2]), &p0, &mul(&[3]), &q0, p, 1000).unwrap();
        assert_eq!(r.status.holds(), single.status.holds(), "p = {p}");
        assert!(matches!(r.method, ImplicationMethod::BoxBruteForce { .. }));
    }
}

#[test]
fn recovers_multiplicative_exponents() {
    let range = PrimeRange::up_to(200).unwrap();
    for e in [-3i32, -2, -1, 1, 2, 3] {
        let ps = mul(&[2, 3]);
        let qs: Vec<_> = ps.iter().map(|x| x.pow(e)).collect();
        let r = infer_exponent(&MulSystem, &ps, &qs, &range, 100).unwrap();
        assert_eq!(
            r.witness,
            RelationWitness::Exponent(BigInt::from(e)),
            "e = {e}"
        );
        assert_eq!(r.exclusions, vec![2, 3]);
    }
}

#[test]
fn refutes_independent_units() {
    let r = infer_exponent(
        &MulSystem,
        &mul(&[2]),
        &mul(&[3]),
        &PrimeRange::up_to(100).unwrap(),
        100,
    )
    .unwrap();
    assert_eq!(r.witness.kind(), "Refuted");
    let RelationWitness::Refuted { prime, .. } = r.witness else {
        unreachable!()
    };
    assert_eq!(prime, 7);
}

#[test]
fn recovers_elliptic_multiple() {
    let sys = curve_37a();
    let p = int_point(0, 0);
    let q = sys.curve.scalar_mul(2, &p);
    let r = infer_exponent(
        &sys,
        std::slice::from_ref(&p),
        &[q],
        &PrimeRange::up_to(1000).unwrap(),
        100,
    )
    .unwrap();
    assert_eq!(r.witness, RelationWitness::Exponent(BigInt::from(2)));
    assert_eq!(r.exclusions, vec![37]);
    let q = sys.curve.scalar_mul(-3, &p);
    let r = infer_exponent(&sys, &[p], &[q], &PrimeRange::up_to(1000).unwrap(), 100).unwrap();
    assert_eq!(r.witness, RelationWitness::Exponent(BigInt::from(-3)));
}

#[test]
fn torsion_inputs_rejected() {
    let sys = EcSystem::new(EllipticCurve::from_coeffs([0, -1, 1, -10, -20]).unwrap());
    let t = int_point(5, 5);
    assert!(infer_exponent(
        &sys,
        std::slice::from_ref(&t),
        std::slice::from_ref(&t),
        &PrimeRange::up_to(100).unwrap(),
        10
    )
    .is_err());
    let one = mul(&[-1]);
    assert!(infer_exponent(&MulSystem, &one, &one, &PrimeRange::up_to(100).unwrap(), 10).is_err());
}

#[test]
fn rank_two_generators_are_refuted() {
    let sys = curve_389a();
    let (p, q) = (int_point(-1, 1), int_point(0, 0));
    assert!(sys.curve.contains(&p) && sys.curve.contains(&q));
    let r = infer_exponent(
        &sys,
        std::slice::from_ref(&p),
        std::slice::from_ref(&q),
        &PrimeRange::up_to(1000).unwrap(),
        100,
    )
    .unwrap();
    assert_eq!(r.witness.kind(), "Refuted");
    let w = search_pair_relation(&sys, &p, &q, 5).unwrap();
    assert_eq!(
        w,
        RelationWitness::Inconclusive {
            constraint: None,
            bound: Some(5)
        }
    );
}

#[test]
fn pair_relation_found_in_order() {
    let sys = curve_37a();
    let p = int_point(0, 0);
    let q = sys.curve.scalar_mul(2, &p);
    assert_eq!(
        search_pair_relation(&sys, &p, &q, 3).unwrap(),
        RelationWitness::Pairs(vec![(2, -1)])
    );
    let x = MulElement::from_int(8).unwrap();
    let y = MulElement::from_int(4).unwrap();
    // 8^2 = 4^3
    assert_eq!(
        search_pair_relation(&MulSystem, &x, &y, 4).unwrap(),
        RelationWitness::Pairs(vec![(2, -3)])
    );
}

#[test]
fn two_point_reports_match_brute_force_on_rank_two_curve() {
    let sys = curve_389a();
    let (a, b) = (int_point(-1, 1), int_point(0, 0));
    let combos: Vec<(i64, i64)> = vec![(1, 0), (0, 1), (1, 1), (2, -1), (3, 2)];
    let pts = |c: (i64, i64)| -> RationalPoint {
        sys.curve.add(
            &sys.curve.scalar_mul(c.0, &a),
            &sys.curve.scalar_mul(c.1, &b),
        )
    };
    let mut methods = std::collections::BTreeSet::new();
    for p in crate::arith::sieve_primes(80).unwrap() {
        if !sys.curve.is_good_prime(p) {
            continue;
        }
        let g = sys.local(p).unwrap();
        for &c1 in &combos {
            for &c2 in &combos {
                let ps = vec![a.clone(), b.clone()];
                let qs = vec![pts(c1), pts(c2)];
                let rep = implication_at(&sys, &ps, &qs, p, 10_000).unwrap();
                let rs = reduce_all(&sys, &g, &ps).unwrap();
                let ss = reduce_all(&sys, &g, &qs).unwrap();
                let l = rs
                    .iter()
                    .chain(&ss)
                    .fold(1u64, |acc, e| acc.lcm(&g.order(e).unwrap()));
                let expected = brute_implication(&g, &rs, &ss, l);
                methods.insert(rep.method.as_str());
                match &rep.status {
                    ImplicationStatus::Fails { m } => {
                        assert!(!expected, "p = {p}");
                        assert!(check_witness(&g, &rs, &ss, m));
                    }
                    ImplicationStatus::Holds | ImplicationStatus::Vacuous => {
                        assert!(expected, "p = {p} {c1:?} {c2:?}")
                    }
                    s => panic!("unexpected {s:?}"),
                }
            }
        }
    }
    assert!(methods.contains("RelationLattice"), "{methods:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplicative_implication_matches_brute_force(
        p in prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23, 29, 31]),
        raw in prop::collection::vec(2i64..40, 2..=6),
    ) {
        let s = raw.len() / 2;
        let ps = mul(&raw[..s]);
        let qs = mul(&raw[s..2 * s]);
        let all: Vec<_> = ps.iter().chain(&qs).collect();
        prop_assume!(MulSystem.is_good(&all, p));
        let g = MulModP::new(p).unwrap();
        let rs = reduce_all(&MulSystem, &g, &ps).unwrap();
        let ss = reduce_all(&MulSystem, &g, &qs).unwrap();
        let rep = implication_at(&MulSystem, &ps, &qs, p, p).unwrap();
        let expected = brute_implication(&g, &rs, &ss, p - 1);
        match &rep.status {
            ImplicationStatus::Fails { m } => {
                prop_assert!(!expected);
                prop_assert!(check_witness(&g, &rs, &ss, m));
            }
            st => prop_assert!(st.holds() || *st == ImplicationStatus::Vacuous) ,
        }
        if rep.status.holds() || rep.status == ImplicationStatus::Vacuous {
            prop_assert!(expected);
        }
        if let Some(c) = rep.constraint {
            for (r, s) in rs.iter().zip(&ss) {
                prop_assert_eq!(g.scale(r, c.residue), *s);
            }
        }
    }
}
