//! Support-problem engine: per-prime implication tests and recovery of
//! global relations `Q_i = e·P_i` or `α P + β Q = 0`.
//!
//! At a good prime `p` write `R_i = red(P_i)` and `S_i = red(Q_i)`. The
//! linear implication asks that `Σ m_i R_i = 0 ⟹ Σ m_i S_i = 0` for all
//! positive `m`; since `L·e_i` (with `L` the LCM of all orders) lies in
//! both relation lattices, positive and arbitrary integer vectors give the
//! same answer. Decision procedures, in order of preference:
//!
//! * `s = 1`: `ord(S_1) | ord(R_1)`.
//! * all `R_i, S_i` in one cyclic subgroup `<G>` of order `N`: with
//!   `a_i = log_G R_i`, `b_i = log_G S_i`, check every basis vector of
//!   `{m : a·m ≡ 0 (mod N)}` against `b`.
//! * `s = 2` otherwise: the relation lattice of `(R_1, R_2)` has basis
//!   `(ord R_1, 0)` and `(-d, k)` where `k` is least with
//!   `k R_2 = d R_1 ∈ <R_1>`.
//! * otherwise: search the box `[1, min(bound, L)]^s`.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::arith::{factorize, PrimeRange};
use crate::error::{domain, Error, Result};
use crate::group::{pohlig_hellman, FiniteGroup};
use crate::relation::{
    common_multiplier, cyclic_kernel_basis, pair_mod, positive_representative, ConstraintMeet,
    PrimeExponentConstraint, Refutation, RelationReport, RelationWitness,
};
use crate::system::{ReductionSystem, SystemKind};

/// Box searches stop after this many vectors; the bound is shrunk to fit.
pub const BOX_SEARCH_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImplicationStatus {
    Holds,
    /// No counterexample in an incomplete box search.
    HoldsUpToBound {
        bound: u64,
    },
    Fails {
        m: Vec<u64>,
    },
    Vacuous,
}

impl ImplicationStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ImplicationStatus::Holds => "Holds",
            ImplicationStatus::HoldsUpToBound { .. } => "HoldsUpToBound",
            ImplicationStatus::Fails { .. } => "Fails",
            ImplicationStatus::Vacuous => "Vacuous",
        }
    }

    pub fn holds(&self) -> bool {
        matches!(
            self,
            ImplicationStatus::Holds | ImplicationStatus::HoldsUpToBound { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImplicationMethod {
    ExactS1,
    CyclicShortcut,
    RelationLattice,
    BoxBruteForce { bound: u64 },
}

impl ImplicationMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ImplicationMethod::ExactS1 => "Exact-s1",
            ImplicationMethod::CyclicShortcut => "CyclicShortcut",
            ImplicationMethod::RelationLattice => "RelationLattice",
            ImplicationMethod::BoxBruteForce { .. } => "BoxBruteForce",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationReport {
    pub system: SystemKind,
    pub p: u64,
    pub status: ImplicationStatus,
    pub method: ImplicationMethod,
    /// Residue class of `e` with `S_i = e·R_i` for all `i`, when one exists.
    pub constraint: Option<PrimeExponentConstraint>,
}

fn check_arity<T>(ps: &[T], qs: &[T]) -> Result<()> {
    if ps.is_empty() || ps.len() != qs.len() {
        return domain(format!(
            "need equally long non-empty point lists, got {} and {}",
            ps.len(),
            qs.len()
        ));
    }
    Ok(())
}

fn reduce_all<S: ReductionSystem>(
    sys: &S,
    local: &S::Local,
    points: &[S::Point],
) -> Result<Vec<S::Elem>> {
    points.iter().map(|pt| sys.reduce(local, pt)).collect()
}

fn good_local<S: ReductionSystem>(sys: &S, points: &[&S::Point], p: u64) -> Result<S::Local> {
    if !crate::arith::is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    if !sys.is_good(points, p) {
        return domain(format!("{p} is a bad prime for these inputs"));
    }
    sys.local(p)
}

fn lcm_of_orders<G: FiniteGroup>(g: &G, elems: &[&G::Elem]) -> Result<u64> {
    elems
        .iter()
        .try_fold(1u64, |acc, e| Ok(acc.lcm(&g.order(e)?)))
}

/// A generator of the subgroup spanned by `elems` when that subgroup is
/// cyclic, with its order.
fn cyclic_generator<G: FiniteGroup>(g: &G, elems: &[&G::Elem]) -> Result<Option<(G::Elem, u64)>> {
    let orders: Vec<u64> = elems.iter().map(|e| g.order(e)).collect::<Result<_>>()?;
    let l = orders.iter().fold(1u64, |acc, o| acc.lcm(o));
    let lf = factorize(l)?;
    let mut gen = g.identity();
    for &(q, v) in lf.factors() {
        let qv = q.pow(v);
        let j = orders
            .iter()
            .position(|o| o % qv == 0)
            .expect("some order carries the full q-part of the lcm");
        gen = g.op(&gen, &g.scale(elems[j], orders[j] / qv));
    }
    for e in elems {
        if pohlig_hellman(g, &gen, &lf, e).is_none() {
            return Ok(None);
        }
    }
    Ok(Some((gen, l)))
}

enum CoordinateConstraint {
    Class(PrimeExponentConstraint),
    NotInSubgroup(usize),
    Inconsistent,
}

/// Meet of `e ≡ log_{R_i} S_i (mod ord R_i)` over `i`.
fn coordinatewise_constraint<G: FiniteGroup>(
    g: &G,
    p: u64,
    rs: &[G::Elem],
    ss: &[G::Elem],
) -> Result<CoordinateConstraint> {
    let mut meet = ConstraintMeet::new();
    for (i, (r, s)) in rs.iter().zip(ss).enumerate() {
        let n = g.order(r)?;
        let Some(d) = pohlig_hellman(g, r, &factorize(n)?, s) else {
            return Ok(CoordinateConstraint::NotInSubgroup(i));
        };
        if meet.push(PrimeExponentConstraint::new(p, n, d)).is_err() {
            return Ok(CoordinateConstraint::Inconsistent);
        }
    }
    let class = meet.class();
    Ok(CoordinateConstraint::Class(PrimeExponentConstraint::new(
        p,
        class
            .modulus
            .clone()
            .try_into()
            .expect("modulus bounded by the group order"),
        class
            .residue
            .clone()
            .try_into()
            .expect("residue below modulus"),
    )))
}

fn optional_constraint<G: FiniteGroup>(
    g: &G,
    p: u64,
    rs: &[G::Elem],
    ss: &[G::Elem],
) -> Result<Option<PrimeExponentConstraint>> {
    Ok(match coordinatewise_constraint(g, p, rs, ss)? {
        CoordinateConstraint::Class(c) => Some(c),
        _ => None,
    })
}

/// Per-prime linear implication `Σ m_i red(P_i) = 0 ⟹ Σ m_i red(Q_i) = 0`.
pub fn implication_at<S: ReductionSystem>(
    sys: &S,
    ps: &[S::Point],
    qs: &[S::Point],
    p: u64,
    m_bound: u64,
) -> Result<ImplicationReport> {
    check_arity(ps, qs)?;
    let all: Vec<&S::Point> = ps.iter().chain(qs).collect();
    let local = good_local(sys, &all, p)?;
    let rs = reduce_all(sys, &local, ps)?;
    let ss = reduce_all(sys, &local, qs)?;
    implication_reduced(sys.kind(), &local, p, &rs, &ss, m_bound)
}

fn implication_reduced<G: FiniteGroup>(
    kind: SystemKind,
    g: &G,
    p: u64,
    rs: &[G::Elem],
    ss: &[G::Elem],
    m_bound: u64,
) -> Result<ImplicationReport> {
    let s = rs.len();
    let report = |status, method, constraint| ImplicationReport {
        system: kind,
        p,
        status,
        method,
        constraint,
    };
    if rs.iter().chain(ss).all(|e| g.is_identity(e)) {
        let method = if s == 1 {
            ImplicationMethod::ExactS1
        } else {
            ImplicationMethod::CyclicShortcut
        };
        return Ok(report(ImplicationStatus::Vacuous, method, None));
    }
    if s == 1 {
        let (or, os) = (g.order(&rs[0])?, g.order(&ss[0])?);
        let status = if or % os == 0 {
            ImplicationStatus::Holds
        } else {
            ImplicationStatus::Fails { m: vec![or] }
        };
        let constraint = if status.holds() {
            optional_constraint(g, p, rs, ss)?
        } else {
            None
        };
        return Ok(report(status, ImplicationMethod::ExactS1, constraint));
    }

    let elems: Vec<&G::Elem> = rs.iter().chain(ss).collect();
    if let Some((gen, n)) = cyclic_generator(g, &elems)? {
        let nf = factorize(n)?;
        let log = |e: &G::Elem| {
            pohlig_hellman(g, &gen, &nf, e)
                .ok_or_else(|| Error::Internal("element left the cyclic subgroup".into()))
        };
        let a: Vec<u64> = rs.iter().map(log).collect::<Result<_>>()?;
        let b: Vec<u64> = ss.iter().map(log).collect::<Result<_>>()?;
        let basis = cyclic_kernel_basis(&a, n);
        if let Some(v) = basis.iter().find(|v| pair_mod(v, &b, n) != 0) {
            return Ok(report(
                ImplicationStatus::Fails {
                    m: positive_representative(v, n),
                },
                ImplicationMethod::CyclicShortcut,
                None,
            ));
        }
        let constraint =
            common_multiplier(&a, &b, n).map(|(r, m)| PrimeExponentConstraint::new(p, m, r));
        return Ok(report(
            ImplicationStatus::Holds,
            ImplicationMethod::CyclicShortcut,
            constraint,
        ));
    }

    let l = lcm_of_orders(g, &elems)?;
    if s == 2 {
        let n1 = g.order(&rs[0])?;
        let n2 = g.order(&rs[1])?;
        let n1f = factorize(n1)?;
        let (k, d) = divisors(n2)?
            .into_iter()
            .find_map(|k| pohlig_hellman(g, &rs[0], &n1f, &g.scale(&rs[1], k)).map(|d| (k, d)))
            .expect("n2·R2 = 0 lies in <R1>");
        let lattice = [vec![n1 as i128, 0], vec![-(d as i128), k as i128]];
        let status = match lattice
            .iter()
            .find(|v| !g.is_identity(&combination(g, ss, v)))
        {
            Some(v) => ImplicationStatus::Fails {
                m: positive_representative(v, l),
            },
            None => ImplicationStatus::Holds,
        };
        let constraint = if status.holds() {
            optional_constraint(g, p, rs, ss)?
        } else {
            None
        };
        return Ok(report(
            status,
            ImplicationMethod::RelationLattice,
            constraint,
        ));
    }

    let zero = g.identity();
    let (status, bound) = box_search(g, rs, &zero, ss, &zero, m_bound, l)?;
    let constraint = if status.holds() {
        optional_constraint(g, p, rs, ss)?
    } else {
        None
    };
    Ok(report(
        status,
        ImplicationMethod::BoxBruteForce { bound },
        constraint,
    ))
}

fn combination<G: FiniteGroup>(g: &G, elems: &[G::Elem], coeffs: &[i128]) -> G::Elem {
    elems.iter().zip(coeffs).fold(g.identity(), |acc, (e, &c)| {
        let term = g.scale(e, c.unsigned_abs() as u64);
        let term = if c < 0 { g.inverse(&term) } else { term };
        g.op(&acc, &term)
    })
}

fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut out = vec![1u64];
    for &(q, e) in factorize(n)?.factors() {
        let prev = out.clone();
        let mut qk = 1;
        for _ in 0..e {
            qk *= q;
            out.extend(prev.iter().map(|d| d * qk));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Exhaustive check of `Σ m_i R_i = R_0 ⟹ Σ m_i S_i = S_0` over
/// `m ∈ [1, b]^s`, `b = min(m_bound, period)`, further capped by
/// [`BOX_SEARCH_BUDGET`]. Returns the status and the bound used. The first
/// counterexample in lexicographic order (last coordinate fastest) is
/// reported.
fn box_search<G: FiniteGroup>(
    g: &G,
    rs: &[G::Elem],
    r0: &G::Elem,
    ss: &[G::Elem],
    s0: &G::Elem,
    m_bound: u64,
    period: u64,
) -> Result<(ImplicationStatus, u64)> {
    let s = rs.len();
    let per_axis = (BOX_SEARCH_BUDGET as f64).powf(1.0 / s as f64).floor() as u64;
    let bound = m_bound.min(period).min(per_axis.max(1));
    if bound == 0 {
        return domain("m_bound must be positive");
    }
    let complete = bound >= period;
    let mut m = vec![1u64; s];
    let mut sum_r = rs.iter().fold(g.identity(), |a, e| g.op(&a, e));
    let mut sum_s = ss.iter().fold(g.identity(), |a, e| g.op(&a, e));
    // (bound - 1)·X, subtracted when a coordinate wraps back to 1
    let wrap_r: Vec<G::Elem> = rs.iter().map(|e| g.scale(e, bound - 1)).collect();
    let wrap_s: Vec<G::Elem> = ss.iter().map(|e| g.scale(e, bound - 1)).collect();
    let mut antecedent_seen = false;
    loop {
        if sum_r == *r0 {
            antecedent_seen = true;
            if sum_s != *s0 {
                return Ok((ImplicationStatus::Fails { m }, bound));
            }
        }
        let mut i = s;
        loop {
            if i == 0 {
                let status = if !complete {
                    ImplicationStatus::HoldsUpToBound { bound }
                } else if antecedent_seen {
                    ImplicationStatus::Holds
                } else {
                    ImplicationStatus::Vacuous
                };
                return Ok((status, bound));
            }
            i -= 1;
            if m[i] < bound {
                m[i] += 1;
                sum_r = g.op(&sum_r, &rs[i]);
                sum_s = g.op(&sum_s, &ss[i]);
                break;
            }
            m[i] = 1;
            sum_r = g.op(&sum_r, &g.inverse(&wrap_r[i]));
            sum_s = g.op(&sum_s, &g.inverse(&wrap_s[i]));
        }
    }
}

/// Per-prime affine implication
/// `Σ m_i red(P_i) = red(P_0) ⟹ Σ m_i red(Q_i) = red(Q_0)`.
pub fn affine_implication_at<S: ReductionSystem>(
    sys: &S,
    ps: &[S::Point],
    p0: &S::Point,
    qs: &[S::Point],
    q0: &S::Point,
    p: u64,
    m_bound: u64,
) -> Result<ImplicationReport> {
    check_arity(ps, qs)?;
    let all: Vec<&S::Point> = ps.iter().chain(qs).chain([p0, q0]).collect();
    let g = good_local(sys, &all, p)?;
    let rs = reduce_all(sys, &g, ps)?;
    let ss = reduce_all(sys, &g, qs)?;
    let r0 = sys.reduce(&g, p0)?;
    let s0 = sys.reduce(&g, q0)?;
    let report = |status, method| ImplicationReport {
        system: sys.kind(),
        p,
        status,
        method,
        constraint: None,
    };

    if rs.len() == 1 {
        // antecedent set: m ≡ d (mod n) where d = log_{R1} R0, n = ord R1
        let n = g.order(&rs[0])?;
        let Some(d) = pohlig_hellman(&g, &rs[0], &factorize(n)?, &r0) else {
            return Ok(report(
                ImplicationStatus::Vacuous,
                ImplicationMethod::ExactS1,
            ));
        };
        let s1 = &ss[0];
        let holds = g.scale(s1, d) == s0 && g.is_identity(&g.scale(s1, n));
        if holds {
            return Ok(report(ImplicationStatus::Holds, ImplicationMethod::ExactS1));
        }
        // some m = d + k n (m > 0) breaks the consequent; k ranges over one period
        let period = g.order(s1)?;
        let start = if d == 0 { 1 } else { 0 };
        let m = (start..=start + period)
            .map(|k| d + k * n)
            .find(|&m| g.scale(s1, m) != s0)
            .ok_or_else(|| Error::Internal("no affine counterexample in one period".into()))?;
        return Ok(report(
            ImplicationStatus::Fails { m: vec![m] },
            ImplicationMethod::ExactS1,
        ));
    }

    let elems: Vec<&S::Elem> = rs.iter().chain(&ss).chain([&r0, &s0]).collect();
    let l = lcm_of_orders(&g, &elems)?;
    let (status, bound) = box_search(&g, &rs, &r0, &ss, &s0, m_bound, l)?;
    Ok(report(status, ImplicationMethod::BoxBruteForce { bound }))
}

enum PrimeOutcome {
    Skip,
    Fails(Vec<u64>),
    NotInSubgroup(usize),
    Inconsistent,
    Class(PrimeExponentConstraint),
}

/// Recover `e` with `Q_i = e·P_i` from reductions over `range`: collect
/// `e ≡ log_{red P_i} red Q_i (mod ord red P_i)` at every good prime,
/// CRT-combine, lift to the balanced representative and verify exactly.
pub fn infer_exponent<S: ReductionSystem>(
    sys: &S,
    ps: &[S::Point],
    qs: &[S::Point],
    range: &PrimeRange,
    m_bound: u64,
) -> Result<RelationReport> {
    check_arity(ps, qs)?;
    for pt in ps.iter().chain(qs) {
        if !sys.has_infinite_order(pt)? {
            return domain(format!("{pt:?} is not of infinite order"));
        }
    }
    let all_points: Vec<&S::Point> = ps.iter().chain(qs).collect();
    let primes = range.primes()?;
    if primes.is_empty() {
        return domain("empty prime range");
    }
    let (good, bad): (Vec<u64>, Vec<u64>) = primes
        .into_iter()
        .partition(|&p| sys.is_good(&all_points, p));
    let mut exclusions = range.exclusions_in_range();
    exclusions.extend(bad);
    exclusions.sort_unstable();

    let outcomes: Vec<PrimeOutcome> = good
        .par_iter()
        .map(|&p| -> Result<PrimeOutcome> {
            let g = sys.local(p)?;
            let rs = reduce_all(sys, &g, ps)?;
            let ss = reduce_all(sys, &g, qs)?;
            let imp = implication_reduced(sys.kind(), &g, p, &rs, &ss, m_bound)?;
            Ok(match imp.status {
                ImplicationStatus::Fails { m } => PrimeOutcome::Fails(m),
                ImplicationStatus::Vacuous => PrimeOutcome::Skip,
                _ => match coordinatewise_constraint(&g, p, &rs, &ss)? {
                    CoordinateConstraint::Class(c) => PrimeOutcome::Class(c),
                    CoordinateConstraint::NotInSubgroup(i) => PrimeOutcome::NotInSubgroup(i),
                    CoordinateConstraint::Inconsistent => PrimeOutcome::Inconsistent,
                },
            })
        })
        .collect::<Result<_>>()?;

    let mut meet = ConstraintMeet::new();
    let refuted = |prime, reason, meet: &ConstraintMeet, exclusions: Vec<u64>| RelationReport {
        witness: RelationWitness::Refuted { prime, reason },
        constraints: meet.sources().to_vec(),
        primes_scanned: good.len(),
        exclusions,
    };
    for (&p, outcome) in good.iter().zip(outcomes) {
        let reason = match outcome {
            PrimeOutcome::Skip => continue,
            PrimeOutcome::Class(c) => match meet.push(c) {
                Ok(()) => continue,
                Err(earlier) => Refutation::CrtConflict {
                    other_prime: earlier.p,
                },
            },
            PrimeOutcome::Fails(m) => Refutation::ImplicationFails { m },
            PrimeOutcome::NotInSubgroup(index) => Refutation::NotInSubgroup { index },
            PrimeOutcome::Inconsistent => Refutation::CrtConflict { other_prime: p },
        };
        return Ok(refuted(p, reason, &meet, exclusions));
    }

    let verified = meet.class().balanced_candidates().into_iter().find(|e| {
        e.sign() != num_bigint::Sign::NoSign
            && ps
                .iter()
                .zip(qs)
                .all(|(pi, qi)| sys.scale(pi, e).as_ref() == Some(qi))
    });
    let witness = match verified {
        Some(e) => RelationWitness::Exponent(e),
        None => RelationWitness::Inconclusive {
            constraint: Some(meet.class().clone()),
            bound: None,
        },
    };
    Ok(RelationReport {
        witness,
        constraints: meet.sources().to_vec(),
        primes_scanned: good.len(),
        exclusions,
    })
}

/// Least `(α, β)` with `α > 0`, `β ≠ 0`, `|α|, |β| <= bound` and
/// `α P + β Q = 0`, ordered by `max(|α|, |β|)` and then lexicographically.
/// No bound on a genuine relation is known in advance, so a miss is
/// reported as `Inconclusive`.
pub fn search_pair_relation<S: ReductionSystem>(
    sys: &S,
    p: &S::Point,
    q: &S::Point,
    bound: u64,
) -> Result<RelationWitness> {
    if bound == 0 {
        return domain("relation bound must be positive");
    }
    for pt in [p, q] {
        if !sys.has_infinite_order(pt)? {
            return domain(format!("{pt:?} is not of infinite order"));
        }
    }
    let b = bound as i64;
    let scale = |pt: &S::Point, k: i64| {
        sys.scale(pt, &BigInt::from(k))
            .ok_or_else(|| Error::Resource(format!("multiplier {k} beyond exact budget")))
    };
    let alpha_p: Vec<S::Point> = (0..=b).map(|a| scale(p, a)).collect::<Result<_>>()?;
    let beta_q: Vec<S::Point> = (-b..=b).map(|k| scale(q, k)).collect::<Result<_>>()?;
    let identity = sys.identity();
    for t in 1..=b {
        for alpha in 1..=t {
            for beta in -t..=t {
                if beta == 0 || alpha.max(beta.abs()) != t {
                    continue;
                }
                let sum = sys.combine(&alpha_p[alpha as usize], &beta_q[(beta + b) as usize]);
                if sum == identity {
                    return Ok(RelationWitness::Pairs(vec![(alpha, beta)]));
                }
            }
        }
    }
    Ok(RelationWitness::Inconclusive {
        constraint: None,
        bound: Some(bound),
    })
}

#[cfg(test)]
mod tests;
