//! Sweeps over primes for those where the `l`-parts of the reduction
//! orders of given points equal a prescribed profile `(l^{k_1}, …, l^{k_s})`.
//!
//! Independence of the inputs is what guarantees infinitely many matches;
//! it is not checked here. An empty match list only means "none in range".

use rayon::prelude::*;

use crate::arith::{
    factorize, is_prime, l_part, multiplicative_order_with, FactorTable, PrimeRange,
};
use crate::elliptic::{EllipticCurve, RationalPoint};
use crate::error::{domain, Error, Result};
use crate::mulgroup::MulElement;
use crate::system::SystemKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderProfile {
    l: u64,
    ks: Vec<u32>,
}

impl OrderProfile {
    pub fn new(l: u64, ks: Vec<u32>) -> Result<Self> {
        if !is_prime(l) {
            return domain(format!("l = {l} is not prime"));
        }
        if ks.is_empty() {
            return domain("profile needs at least one exponent");
        }
        for &k in &ks {
            if l.checked_pow(k).is_none() {
                return domain(format!("{l}^{k} does not fit in 64 bits"));
            }
        }
        Ok(Self { l, ks })
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn ks(&self) -> &[u32] {
        &self.ks
    }

    /// `l^{k_t}` for each `t`.
    pub fn targets(&self) -> Vec<u64> {
        self.ks.iter().map(|&k| self.l.pow(k)).collect()
    }

    pub fn matches(&self, lparts: &[u64]) -> bool {
        lparts == self.targets().as_slice()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDetail {
    pub p: u64,
    pub lparts: Vec<u64>,
    pub matched: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOutcome {
    MatchesFound,
    NoMatchInRange,
}

impl SweepOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepOutcome::MatchesFound => "matches_found",
            SweepOutcome::NoMatchInRange => "no_match_in_range",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub system: SystemKind,
    pub profile: OrderProfile,
    pub range: PrimeRange,
    pub matches: Vec<u64>,
    pub scanned: usize,
    /// `p = l`, bad primes and user exclusions inside the range, ascending.
    pub exclusions: Vec<u64>,
    pub detail: Option<Vec<PrimeDetail>>,
}

impl SweepReport {
    pub fn outcome(&self) -> SweepOutcome {
        if self.matches.is_empty() {
            SweepOutcome::NoMatchInRange
        } else {
            SweepOutcome::MatchesFound
        }
    }

    /// Matches per scanned prime; descriptive only.
    pub fn match_fraction(&self) -> f64 {
        if self.scanned == 0 {
            0.0
        } else {
            self.matches.len() as f64 / self.scanned as f64
        }
    }
}

fn check_arity(profile: &OrderProfile, n: usize) -> Result<()> {
    if profile.ks.len() != n {
        return domain(format!(
            "profile has {} exponents for {n} inputs",
            profile.ks.len()
        ));
    }
    Ok(())
}

fn sweep<G, O>(
    system: SystemKind,
    profile: &OrderProfile,
    range: &PrimeRange,
    detail: bool,
    is_good: G,
    orders_at: O,
) -> Result<SweepReport>
where
    G: Fn(u64) -> bool,
    O: Fn(u64) -> Result<Vec<u64>> + Sync,
{
    let primes = range.primes()?;
    if primes.is_empty() {
        return domain(format!("no primes in [{}, {}]", range.lo(), range.hi()));
    }
    let (scan, skipped): (Vec<u64>, Vec<u64>) = primes
        .into_iter()
        .partition(|&p| p != profile.l && is_good(p));
    let mut exclusions = range.exclusions_in_range();
    exclusions.extend(skipped);
    exclusions.sort_unstable();

    let l = profile.l;
    let rows: Vec<PrimeDetail> = scan
        .par_iter()
        .map(|&p| {
            let lparts = orders_at(p)?
                .into_iter()
                .map(|o| l_part(o, l))
                .collect::<Result<Vec<_>>>()?;
            let matched = profile.matches(&lparts);
            Ok(PrimeDetail { p, lparts, matched })
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        system,
        profile: profile.clone(),
        range: range.clone(),
        matches: rows.iter().filter(|r| r.matched).map(|r| r.p).collect(),
        scanned: rows.len(),
        exclusions,
        detail: detail.then_some(rows),
    })
}

/// Sweep over `Q^*`: orders of `x_t mod p`.
pub fn sweep_mul(
    xs: &[MulElement],
    profile: &OrderProfile,
    range: &PrimeRange,
    detail: bool,
) -> Result<SweepReport> {
    check_arity(profile, xs.len())?;
    if let Some(x) = xs.iter().find(|x| x.is_torsion()) {
        return domain(format!("{x} has finite order"));
    }
    let table = (range.hi() <= FactorTable::MAX_BOUND)
        .then(|| FactorTable::new(range.hi()))
        .transpose()?;
    sweep(
        SystemKind::Mul,
        profile,
        range,
        detail,
        |p| xs.iter().all(|x| x.is_unit_at(p)),
        |p| {
            let pm1 = match &table {
                Some(t) => t.factorize(p - 1),
                None => factorize(p - 1)?,
            };
            xs.iter()
                .map(|x| multiplicative_order_with(x.residue_mod(p)?, p, &pm1))
                .collect()
        },
    )
}

/// Sweep over `E(Q)`: orders of `red_p(P_t)` in `E(F_p)`.
pub fn sweep_ec(
    curve: &EllipticCurve,
    points: &[RationalPoint],
    profile: &OrderProfile,
    range: &PrimeRange,
    detail: bool,
) -> Result<SweepReport> {
    check_arity(profile, points.len())?;
    for pt in points {
        if !curve.contains(pt) {
            return domain(format!("{pt} is not on the curve {curve}"));
        }
        if !curve.is_nontorsion(pt, crate::elliptic::NONTORSION_SEARCH_BOUND)? {
            return domain(format!("{pt} is not known to have infinite order"));
        }
    }
    sweep(
        SystemKind::Ec,
        profile,
        range,
        detail,
        |p| curve.is_good_prime(p),
        |p| {
            let reduced = curve.reduce_at(p)?;
            points
                .iter()
                .map(|pt| {
                    let r = curve.reduce_point(pt, p)?;
                    reduced.point_order(&r)
                })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| match e {
                    Error::Domain(m) => Error::Internal(m),
                    other => other,
                })
        },
    )
}
