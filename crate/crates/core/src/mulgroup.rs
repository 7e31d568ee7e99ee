//! The multiplicative group `Q^*`: support sets, the Erdős support
//! question, and the per-prime condition `∏ p_i^{m_i} ≡ 1 ⟹ ∏ q_i^{m_i} ≡ 1`
//! together with recovery of the exponent `e` in `q_i = p_i^e`.
//!
//! # Per-prime condition
//!
//! At a good prime `p`, `F_p^*` is cyclic of order `N = p - 1`. Writing
//! `a_i = log_g p_i` and `b_i = log_g q_i` for a generator `g`, the
//! condition says that every `m` with `Σ m_i a_i ≡ 0 (mod N)` also has
//! `Σ m_i b_i ≡ 0`. For linear forms over `Z/N` this kernel containment
//! holds exactly when `b ≡ c·a (mod N)` for some `c`. Restricting to
//! positive `m` changes nothing: adding `N` to any coordinate preserves
//! both sums, so every residue class has positive representatives.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{factorize, factorize_big, residue, sieve_primes, FactorTable, PrimeRange};
use crate::error::{domain, Error, Result};
use crate::group::{FiniteGroup, MulModP};
use crate::relation::{
    common_multiplier, cyclic_kernel_basis, pair_mod, positive_representative, ConstraintMeet,
    PrimeExponentConstraint, Refutation, RelationReport, RelationWitness,
};

/// Exponents above this magnitude are not checked exactly (the powers
/// would be too large to form); recovery reports `Inconclusive` instead.
pub const MAX_VERIFIED_EXPONENT: u64 = 1 << 16;

/// Witnesses with `n` up to this bound are re-derived by factoring
/// `x^n - 1` and `y^n - 1` directly.
pub const FACTOR_CROSS_CHECK_MAX_N: u64 = 12;

/// A nonzero rational number in lowest terms, denominator positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MulElement(BigRational);

impl MulElement {
    pub fn new(numerator: BigInt, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return domain("zero denominator");
        }
        if numerator.is_zero() {
            return domain("0 is not in Q^*");
        }
        Ok(Self(BigRational::new(numerator, denominator)))
    }

    pub fn from_int(n: i64) -> Result<Self> {
        Self::new(BigInt::from(n), BigInt::one())
    }

    pub fn from_ratio(n: i64, d: i64) -> Result<Self> {
        Self::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    /// `±1`, the torsion of `Q^*`.
    pub fn is_torsion(&self) -> bool {
        self.0.abs().is_one()
    }

    /// `p` divides neither numerator nor denominator.
    pub fn is_unit_at(&self, p: u64) -> bool {
        residue(self.numerator(), p) != 0 && residue(self.denominator(), p) != 0
    }

    /// `num · den^{-1} mod p` at a good prime.
    pub fn residue_mod(&self, p: u64) -> Result<u64> {
        if !self.is_unit_at(p) {
            return domain(format!(
                "{p} divides the numerator or denominator of {self}"
            ));
        }
        let inv = crate::arith::mod_inv(residue(self.denominator(), p), p)
            .expect("denominator is a unit");
        Ok(crate::arith::mul_mod(residue(self.numerator(), p), inv, p))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// `self^e`, exact; `e` may be negative.
    pub fn pow(&self, e: i32) -> Self {
        Self(num_traits::Pow::pow(&self.0, e))
    }
}

impl fmt::Display for MulElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for MulElement {
    type Err = Error;

    /// `"n"` or `"n/d"`.
    fn from_str(s: &str) -> Result<Self> {
        let r = crate::elliptic::parse_rational(s)?;
        if r.is_zero() {
            return Err(Error::Parse("0 is not in Q^*".into()));
        }
        Ok(Self(r))
    }
}

/// Parse a comma- or whitespace-separated list of elements.
pub fn parse_element_list(s: &str) -> Result<Vec<MulElement>> {
    let items: Vec<MulElement> = s
        .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Parse("empty element list".into()));
    }
    Ok(items)
}

/// `Supp(m)`: the primes dividing `m`.
pub fn supp(m: u64) -> Result<BTreeSet<u64>> {
    if m == 0 {
        return domain("Supp is defined for positive integers");
    }
    Ok(factorize(m)?.primes().copied().collect())
}

pub fn supp_big(m: &BigUint) -> Result<BTreeSet<BigUint>> {
    if m.is_zero() {
        return domain("Supp is defined for positive integers");
    }
    Ok(factorize_big(m)?.primes().cloned().collect())
}

/// Order of the reduction of `x` in `F_p^*`.
pub fn reduction_order(x: &MulElement, p: u64) -> Result<u64> {
    if !crate::arith::is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let r = x.residue_mod(p)?;
    crate::arith::multiplicative_order(r, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::X => "x",
            Side::Y => "y",
        }
    }
}

/// A prime in the support of exactly one of `x^n - 1`, `y^n - 1`; `side`
/// names the one it divides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportWitness {
    pub n: u64,
    pub prime: u64,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportVerdict {
    EqualInRange,
    Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportReport {
    pub x: MulElement,
    pub y: MulElement,
    pub n_max: u64,
    pub p_max: u64,
    pub verdict: SupportVerdict,
    pub witness: Option<SupportWitness>,
    /// Primes `<= p_max` dividing a numerator or denominator of `x` or `y`.
    pub exclusions: Vec<u64>,
    /// Whether the witness was re-derived by factoring `x^n - 1`, `y^n - 1`.
    pub cross_checked: bool,
}

/// Search for `n <= n_max` and a good prime `p <= p_max` with
/// `p ∈ Supp(x^n - 1) Δ Supp(y^n - 1)`, least `n` first, then least `p`.
///
/// Membership uses `p | x^n - 1 ⟺ ord_p(x) | n`. For a fixed prime the
/// least `n` in the symmetric difference is `ord_p(x)` when
/// `ord_p(y) ∤ ord_p(x)` or `ord_p(y)` when `ord_p(x) ∤ ord_p(y)`
/// (every multiple of the other order lies in both sets), so each prime is
/// processed independently and the minimum is taken over `(n, p)`.
pub fn erdos_test(x: &MulElement, y: &MulElement, n_max: u64, p_max: u64) -> Result<SupportReport> {
    for (name, v) in [("x", x), ("y", y)] {
        if v.is_torsion() {
            return domain(format!(
                "{name} = {v} is ±1; its support sets are degenerate"
            ));
        }
    }
    if n_max == 0 {
        return domain("n_max must be positive");
    }
    let primes = sieve_primes(p_max.max(2))?;
    let (good, exclusions): (Vec<u64>, Vec<u64>) = primes
        .into_iter()
        .partition(|&p| x.is_unit_at(p) && y.is_unit_at(p));
    let table = FactorTable::new(p_max.max(2))?;

    let best = good
        .par_iter()
        .map(|&p| -> Result<Option<(u64, u64, Side)>> {
            if x == y {
                return Ok(None);
            }
            let group = MulModP::with_factorization(p, table.factorize(p - 1));
            let ox = group.order(&x.residue_mod(p)?)?;
            let oy = group.order(&y.residue_mod(p)?)?;
            let mut cand: Option<(u64, Side)> = None;
            if ox % oy != 0 && ox <= n_max {
                cand = Some((ox, Side::X));
            }
            if oy % ox != 0 && oy <= n_max && cand.is_none_or(|(n, _)| oy < n) {
                cand = Some((oy, Side::Y));
            }
            Ok(cand.map(|(n, side)| (n, p, side)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .min_by_key(|&(n, p, _)| (n, p));

    let mut report = SupportReport {
        x: x.clone(),
        y: y.clone(),
        n_max,
        p_max,
        verdict: SupportVerdict::EqualInRange,
        witness: None,
        exclusions,
        cross_checked: false,
    };
    if let Some((n, prime, side)) = best {
        let w = SupportWitness { n, prime, side };
        if n <= FACTOR_CROSS_CHECK_MAX_N {
            if !witness_by_factorization(x, y, &w)? {
                return Err(Error::Internal(format!(
                    "order criterion and factorization disagree on {w:?}"
                )));
            }
            report.cross_checked = true;
        }
        report.verdict = SupportVerdict::Witness;
        report.witness = Some(w);
    }
    Ok(report)
}

/// `|a^n - b^n|` for `v = a/b`; at primes not dividing `b` this has the
/// same support as the numerator of `v^n - 1`.
pub fn power_minus_one_numerator(v: &MulElement, n: u64) -> BigUint {
    let e = n.to_u32().expect("small exponent");
    let a = num_traits::Pow::pow(v.numerator(), e);
    let b = num_traits::Pow::pow(v.denominator(), e);
    (a - b).magnitude().clone()
}

/// Re-derive a witness by factoring both numerators: the prime must lie in
/// the support of exactly the named side.
pub fn witness_by_factorization(
    x: &MulElement,
    y: &MulElement,
    w: &SupportWitness,
) -> Result<bool> {
    let prime = BigUint::from(w.prime);
    let in_supp = |v: &MulElement| -> Result<bool> {
        let m = power_minus_one_numerator(v, w.n);
        if m.is_zero() {
            return Ok(true);
        }
        Ok(supp_big(&m)?.contains(&prime))
    };
    let (sx, sy) = (in_supp(x)?, in_supp(y)?);
    Ok(match w.side {
        Side::X => sx && !sy,
        Side::Y => sy && !sx,
    })
}

/// Outcome of the per-prime condition for all positive `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchinzelOutcome {
    /// The condition holds; the admissible `e` (with `q_i ≡ p_i^e` for all
    /// `i`) form this residue class.
    Holds(PrimeExponentConstraint),
    /// A positive vector with `∏ p_i^{m_i} ≡ 1` but `∏ q_i^{m_i} ≢ 1`.
    Fails(Vec<u64>),
    /// Every `p_i` and `q_i` reduces to 1.
    Vacuous,
}

fn check_lists(ps: &[MulElement], qs: &[MulElement]) -> Result<()> {
    if ps.is_empty() || ps.len() != qs.len() {
        return domain(format!(
            "need equally long non-empty lists, got {} and {}",
            ps.len(),
            qs.len()
        ));
    }
    Ok(())
}

/// Decide `∏ p_i^{m_i} ≡ 1 ⟹ ∏ q_i^{m_i} ≡ 1 (mod p)` for all positive
/// `m` via discrete logs to a primitive root (see the module docs).
pub fn schinzel_condition_at(
    ps: &[MulElement],
    qs: &[MulElement],
    p: u64,
) -> Result<SchinzelOutcome> {
    check_lists(ps, qs)?;
    let group = MulModP::new(p)?;
    schinzel_condition_in(&group, ps, qs)
}

pub(crate) fn schinzel_condition_in(
    group: &MulModP,
    ps: &[MulElement],
    qs: &[MulElement],
) -> Result<SchinzelOutcome> {
    let p = group.prime();
    let n = p - 1;
    let g = group.generator();
    let log = |v: &MulElement| -> Result<u64> {
        let r = v.residue_mod(p)?;
        group.dlog(&g, &r)?.ok_or_else(|| {
            Error::Internal(format!("no discrete log of {r} to a generator mod {p}"))
        })
    };
    let a: Vec<u64> = ps.iter().map(log).collect::<Result<_>>()?;
    let b: Vec<u64> = qs.iter().map(log).collect::<Result<_>>()?;
    if a.iter().chain(&b).all(|&v| v == 0) {
        return Ok(SchinzelOutcome::Vacuous);
    }
    let basis = cyclic_kernel_basis(&a, n);
    if let Some(v) = basis.iter().find(|v| pair_mod(v, &b, n) != 0) {
        return Ok(SchinzelOutcome::Fails(positive_representative(v, n)));
    }
    let (residue, modulus) = common_multiplier(&a, &b, n).ok_or_else(|| {
        Error::Internal(format!(
            "kernel containment without a common multiplier at {p}"
        ))
    })?;
    Ok(SchinzelOutcome::Holds(PrimeExponentConstraint::new(
        p, modulus, residue,
    )))
}

/// Exactly `q_i = p_i^e` for all `i`.
pub fn verify_exponent(ps: &[MulElement], qs: &[MulElement], e: &BigInt) -> bool {
    if e.magnitude() > &BigUint::from(MAX_VERIFIED_EXPONENT) {
        return false;
    }
    let e = e.to_i32().expect("bounded exponent");
    let height_bits = |v: &MulElement| v.numerator().bits().max(v.denominator().bits());
    ps.iter().zip(qs).all(|(pi, qi)| {
        // p^e has at least (bits(p) - 1)·|e| + 1 bits; screen before powering
        let lower = (height_bits(pi) - 1) * e.unsigned_abs() as u64;
        lower < height_bits(qi) && &pi.pow(e) == qi
    })
}

/// Recover `e` with `q_i = p_i^e` from per-prime conditions over `range`:
/// CRT-combine the residue classes, lift to the balanced representative,
/// and verify exactly in `Q`.
pub fn recover_exponent_mul(
    ps: &[MulElement],
    qs: &[MulElement],
    range: &PrimeRange,
) -> Result<RelationReport> {
    check_lists(ps, qs)?;
    if let Some(t) = ps.iter().chain(qs).find(|v| v.is_torsion()) {
        return domain(format!("{t} has finite order"));
    }
    let all = range.primes()?;
    if all.is_empty() {
        return domain("empty prime range");
    }
    let (good, bad): (Vec<u64>, Vec<u64>) = all
        .into_iter()
        .partition(|&p| ps.iter().chain(qs).all(|v| v.is_unit_at(p)));
    let mut exclusions = range.exclusions_in_range();
    exclusions.extend(bad);
    exclusions.sort_unstable();
    let table = FactorTable::new(range.hi()).ok();

    let outcomes: Vec<SchinzelOutcome> = good
        .par_iter()
        .map(|&p| {
            let group = match &table {
                Some(t) => MulModP::with_factorization(p, t.factorize(p - 1)),
                None => MulModP::new(p)?,
            };
            schinzel_condition_in(&group, ps, qs)
        })
        .collect::<Result<_>>()?;

    let mut meet = ConstraintMeet::new();
    for (&p, outcome) in good.iter().zip(outcomes) {
        match outcome {
            SchinzelOutcome::Vacuous => {}
            SchinzelOutcome::Fails(m) => {
                return Ok(report(
                    RelationWitness::Refuted {
                        prime: p,
                        reason: Refutation::ImplicationFails { m },
                    },
                    &meet,
                    good.len(),
                    exclusions,
                ))
            }
            SchinzelOutcome::Holds(c) => {
                if let Err(earlier) = meet.push(c) {
                    return Ok(report(
                        RelationWitness::Refuted {
                            prime: p,
                            reason: Refutation::CrtConflict {
                                other_prime: earlier.p,
                            },
                        },
                        &meet,
                        good.len(),
                        exclusions,
                    ));
                }
            }
        }
    }
    let witness = meet
        .class()
        .balanced_candidates()
        .into_iter()
        .find(|e| !e.is_zero() && verify_exponent(ps, qs, e))
        .map(RelationWitness::Exponent)
        .unwrap_or_else(|| RelationWitness::Inconclusive {
            constraint: Some(meet.class().clone()),
            bound: None,
        });
    Ok(report(witness, &meet, good.len(), exclusions))
}

fn report(
    witness: RelationWitness,
    meet: &ConstraintMeet,
    scanned: usize,
    exclusions: Vec<u64>,
) -> RelationReport {
    RelationReport {
        witness,
        constraints: meet.sources().to_vec(),
        primes_scanned: scanned,
        exclusions,
    }
}
