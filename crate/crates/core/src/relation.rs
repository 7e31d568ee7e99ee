//! Exponent constraints collected prime by prime, their CRT meet, the
//! relation lattice of a cyclic group, and the witness types returned by
//! relation searches.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{ext_gcd, solve_linear_congruence};

/// `e ≡ residue (mod modulus)` learned at prime `p`; `modulus | p - 1` in
/// the multiplicative system, `modulus | #E(F_p)` on a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeExponentConstraint {
    pub p: u64,
    pub modulus: u64,
    pub residue: u64,
}

impl PrimeExponentConstraint {
    pub fn new(p: u64, modulus: u64, residue: u64) -> Self {
        assert!(modulus >= 1);
        Self {
            p,
            modulus,
            residue: residue % modulus,
        }
    }

    pub fn admits(&self, e: &BigInt) -> bool {
        e.mod_floor(&BigInt::from(self.modulus)) == BigInt::from(self.residue)
    }

    pub fn compatible_with(&self, other: &Self) -> bool {
        let g = self.modulus.gcd(&other.modulus);
        self.residue % g == other.residue % g
    }
}

impl fmt::Display for PrimeExponentConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e ≡ {} mod {} (p = {})",
            self.residue, self.modulus, self.p
        )
    }
}

/// A residue class `residue mod modulus` with arbitrary-precision modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtClass {
    pub residue: BigInt,
    pub modulus: BigInt,
}

impl fmt::Display for CrtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e ≡ {} mod {}", self.residue, self.modulus)
    }
}

impl Default for CrtClass {
    fn default() -> Self {
        Self {
            residue: BigInt::zero(),
            modulus: BigInt::one(),
        }
    }
}

impl CrtClass {
    /// Intersect with `x ≡ r (mod m)`; `None` if the classes are disjoint.
    pub fn meet(&self, r: &BigInt, m: &BigInt) -> Option<CrtClass> {
        let (a, n) = (&self.residue, &self.modulus);
        let ext = n.extended_gcd(m);
        let g = ext.gcd;
        let diff = r - a;
        if !(&diff % &g).is_zero() {
            return None;
        }
        let lcm = n / &g * m;
        let k = (&diff / &g * ext.x).mod_floor(&(m / &g));
        let residue = (a + n * k).mod_floor(&lcm);
        Some(CrtClass {
            residue,
            modulus: lcm,
        })
    }

    /// Representatives of smallest absolute value: `residue` and
    /// `residue - modulus`, ordered by `|e|` (ties: positive first).
    pub fn balanced_candidates(&self) -> Vec<BigInt> {
        let up = self.residue.clone();
        let down = &self.residue - &self.modulus;
        let mut c = vec![up, down];
        c.sort_by(|x, y| x.abs().cmp(&y.abs()).then(y.cmp(x)));
        c.dedup();
        c
    }
}

/// Fold of per-prime constraints into one residue class, remembering which
/// prime contributed what so that conflicts can be attributed.
#[derive(Debug, Clone, Default)]
pub struct ConstraintMeet {
    class: CrtClass,
    sources: Vec<PrimeExponentConstraint>,
}

impl ConstraintMeet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn class(&self) -> &CrtClass {
        &self.class
    }

    pub fn sources(&self) -> &[PrimeExponentConstraint] {
        &self.sources
    }

    /// Add a constraint. On conflict returns the earlier constraint it is
    /// incompatible with (pairwise compatibility is equivalent to global
    /// solvability for systems of congruences).
    pub fn push(
        &mut self,
        c: PrimeExponentConstraint,
    ) -> std::result::Result<(), PrimeExponentConstraint> {
        match self
            .class
            .meet(&BigInt::from(c.residue), &BigInt::from(c.modulus))
        {
            Some(next) => {
                self.class = next;
                self.sources.push(c);
                Ok(())
            }
            None => Err(*self
                .sources
                .iter()
                .find(|s| !s.compatible_with(&c))
                .expect("an incompatible system has an incompatible pair")),
        }
    }
}

/// Solve `b_i ≡ c·a_i (mod n)` for all `i` simultaneously. Returns the
/// class of `c` as `(residue, modulus)` or `None`.
pub fn common_multiplier(a: &[u64], b: &[u64], n: u64) -> Option<(u64, u64)> {
    let mut class = CrtClass::default();
    for (&ai, &bi) in a.iter().zip(b) {
        let (r, m) = solve_linear_congruence(ai, bi, n)?;
        class = class.meet(&BigInt::from(r), &BigInt::from(m))?;
    }
    let m: u64 = class.modulus.try_into().expect("modulus divides n");
    let r: u64 = class.residue.try_into().expect("residue below modulus");
    Some((r, m))
}

/// A basis of the lattice `{m ∈ Z^s : Σ m_i a_i ≡ 0 (mod n)}`.
///
/// Built column by column: with `g = gcd(n, a_1..a_{j-1})` written as
/// `Σ u_i a_i (mod n)`, the least `k > 0` with `k a_j ∈ gZ/n` is
/// `g / gcd(g, a_j)`, and `k a_j = (a_j / h)·g` gives the vector
/// `(-(a_j/h) u, k, 0, ..)`. The basis is lower triangular with diagonal
/// product `n / gcd(n, a)`, the index of the lattice.
pub fn cyclic_kernel_basis(a: &[u64], n: u64) -> Vec<Vec<i128>> {
    let s = a.len();
    let n_i = n as i128;
    let mut g = n_i;
    let mut u: Vec<i128> = Vec::new();
    let mut basis = Vec::with_capacity(s);
    for (j, &aj) in a.iter().enumerate() {
        let aj = (aj % n) as i128;
        let (h, x, y) = ext_gcd(g, aj);
        let k = g / h;
        let t = aj / h;
        let mut v = vec![0i128; s];
        for (i, ui) in u.iter().enumerate() {
            v[i] = (-t * ui).rem_euclid(n_i);
        }
        v[j] = k;
        basis.push(v);
        // x·g + y·a_j = h, and g ≡ Σ u_i a_i
        u = u.iter().map(|ui| (x * ui).rem_euclid(n_i)).collect();
        u.push(y.rem_euclid(n_i));
        g = h;
    }
    basis
}

/// Move a lattice vector into `[1, n]^s` by adding multiples of `n` (which
/// lie in every relation lattice of an `n`-torsion group).
pub fn positive_representative(v: &[i128], n: u64) -> Vec<u64> {
    v.iter()
        .map(|&x| {
            let r = x.rem_euclid(n as i128) as u64;
            if r == 0 {
                n
            } else {
                r
            }
        })
        .collect()
}

/// `Σ v_i b_i mod n`.
pub fn pair_mod(v: &[i128], b: &[u64], n: u64) -> u64 {
    let n_i = n as i128;
    v.iter().zip(b).fold(0i128, |acc, (&vi, &bi)| {
        (acc + vi.rem_euclid(n_i) * bi as i128).rem_euclid(n_i)
    }) as u64
}

/// Why a relation `Q_i = e·P_i` was ruled out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// The per-prime implication fails with this positive vector `m`.
    ImplicationFails { m: Vec<u64> },
    /// `red(Q_i)` is not a multiple of `red(P_i)` at this prime.
    NotInSubgroup { index: usize },
    /// The residues for `e` at this prime contradict those at `other_prime`.
    CrtConflict { other_prime: u64 },
}

/// Outcome of a relation search between `P`s and `Q`s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationWitness {
    /// `Q_i = e·P_i` for every `i`, checked exactly in the global group.
    Exponent(BigInt),
    /// `α_i P_i + β_i Q_i = 0`, checked exactly.
    Pairs(Vec<(i64, i64)>),
    Refuted {
        prime: u64,
        reason: Refutation,
    },
    /// Every sampled prime was consistent but nothing verified globally.
    Inconclusive {
        constraint: Option<CrtClass>,
        bound: Option<u64>,
    },
}

impl RelationWitness {
    pub fn kind(&self) -> &'static str {
        match self {
            RelationWitness::Exponent(_) => "Verified",
            RelationWitness::Pairs(_) => "Pairs",
            RelationWitness::Refuted { .. } => "Refuted",
            RelationWitness::Inconclusive { .. } => "Inconclusive",
        }
    }
}

/// Result of exponent recovery over a range of primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub witness: RelationWitness,
    /// Primes whose constraints entered the CRT meet, ascending.
    pub constraints: Vec<PrimeExponentConstraint>,
    pub primes_scanned: usize,
    /// Primes of the range left out (bad primes and user exclusions).
    pub exclusions: Vec<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_kernel_member(a: &[u64], m: &[i128], n: u64) -> bool {
        pair_mod(m, a, n) == 0
    }

    #[test]
    fn crt_meet_and_conflict() {
        let mut meet = ConstraintMeet::new();
        meet.push(PrimeExponentConstraint::new(5, 4, 3)).unwrap();
        meet.push(PrimeExponentConstraint::new(11, 10, 7)).unwrap();
        assert_eq!(meet.class().modulus, BigInt::from(20));
        assert_eq!(meet.class().residue, BigInt::from(7));
        let clash = meet
            .push(PrimeExponentConstraint::new(13, 6, 0))
            .unwrap_err();
        assert_eq!(clash.p, 5);
    }

    #[test]
    fn balanced_lift() {
        let c = CrtClass {
            residue: BigInt::from(98),
            modulus: BigInt::from(100),
        };
        assert_eq!(c.balanced_candidates()[0], BigInt::from(-2));
        let c = CrtClass {
            residue: BigInt::from(3),
            modulus: BigInt::from(100),
        };
        assert_eq!(c.balanced_candidates()[0], BigInt::from(3));
        let tie = CrtClass {
            residue: BigInt::from(5),
            modulus: BigInt::from(10),
        };
        assert_eq!(
            tie.balanced_candidates(),
            vec![BigInt::from(5), BigInt::from(-5)]
        );
    }

    #[test]
    fn common_multiplier_examples() {
        // dlogs base 3 mod 7: 2 = 3^2, 4 = 3^4
        assert_eq!(common_multiplier(&[2], &[4], 6), Some((2, 3)));
        assert_eq!(common_multiplier(&[2], &[1], 6), None);
        assert_eq!(common_multiplier(&[0, 0], &[0, 0], 6), Some((0, 1)));
    }

    proptest! {
        #[test]
        fn kernel_basis_spans_exactly_the_kernel(
            n in 1u64..60,
            a in proptest::collection::vec(0u64..200, 1..4),
        ) {
            let basis = cyclic_kernel_basis(&a, n);
            for v in &basis {
                prop_assert!(brute_kernel_member(&a, v, n));
            }
            // Index check: the triangular diagonal multiplies to n / gcd(n, a).
            let g = a.iter().fold(n, |g, &x| g.gcd(&(x % n)));
            let det: i128 = basis.iter().enumerate().map(|(j, v)| v[j]).product();
            prop_assert_eq!(det, (n / g) as i128);
        }

        #[test]
        fn containment_iff_common_multiplier(
            n in 1u64..40,
            a in proptest::collection::vec(0u64..40, 1..3),
            b in proptest::collection::vec(0u64..40, 1..3),
        ) {
            prop_assume!(a.len() == b.len());
            let basis = cyclic_kernel_basis(&a, n);
            let contained = basis.iter().all(|v| pair_mod(v, &b, n) == 0);
            // brute force over the box [0, n)^s
            let s = a.len();
            let mut brute = true;
            let total = (n as usize).pow(s as u32);
            for idx in 0..total {
                let mut m = Vec::with_capacity(s);
                let mut t = idx;
                for _ in 0..s {
                    m.push((t % n as usize) as i128);
                    t /= n as usize;
                }
                if pair_mod(&m, &a, n) == 0 && pair_mod(&m, &b, n) != 0 {
                    brute = false;
                    break;
                }
            }
            prop_assert_eq!(contained, brute);
            prop_assert_eq!(contained, common_multiplier(&a, &b, n).is_some());
        }
    }
}
