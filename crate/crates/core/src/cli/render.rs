//! JSON and text forms of the library reports. Every integer is written as
//! a decimal string.

use serde_json::{json, Value};

use crate::dependence::ImplicationReport;
use crate::mulgroup::SupportReport;
use crate::order_search::SweepReport;
use crate::relation::{PrimeExponentConstraint, Refutation, RelationReport, RelationWitness};

pub(crate) fn num<T: ToString>(v: T) -> Value {
    Value::String(v.to_string())
}

pub(crate) fn nums<T: ToString>(vs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(vs.into_iter().map(num).collect())
}

fn constraint_json(c: &PrimeExponentConstraint) -> Value {
    json!({"p": num(c.p), "modulus": num(c.modulus), "residue": num(c.residue)})
}

fn vector_text(m: &[u64]) -> String {
    let parts: Vec<String> = m.iter().map(u64::to_string).collect();
    format!("({})", parts.join(", "))
}

pub(crate) fn support_json(r: &SupportReport) -> Value {
    json!({
        "kind": "support",
        "x": r.x.to_string(),
        "y": r.y.to_string(),
        "n_max": num(r.n_max),
        "p_max": num(r.p_max),
        "verdict": match r.verdict {
            crate::mulgroup::SupportVerdict::EqualInRange => "EqualInRange",
            crate::mulgroup::SupportVerdict::Witness => "Witness",
        },
        "witness": r.witness.map(|w| json!({
            "n": num(w.n), "prime": num(w.prime), "side": w.side.as_str()
        })),
        "cross_checked": r.cross_checked,
    })
}

pub(crate) fn support_text(r: &SupportReport) -> String {
    match r.witness {
        None => format!(
            "Equal in range: Supp(x^n - 1) = Supp(y^n - 1) for n <= {}, good p <= {}\n",
            r.n_max, r.p_max
        ),
        Some(w) => {
            let other = if w.side.as_str() == "x" { "y" } else { "x" };
            format!(
                "Witness: n = {}, p = {} divides {}^n - 1 but not {}^n - 1{}\n",
                w.n,
                w.prime,
                w.side.as_str(),
                other,
                if r.cross_checked {
                    " (checked by factoring)"
                } else {
                    ""
                }
            )
        }
    }
}

pub(crate) fn sweep_json(r: &SweepReport) -> Value {
    let mut v = json!({
        "kind": "sweep",
        "system": r.system.as_str(),
        "l": num(r.profile.l()),
        "ks": nums(r.profile.ks().iter()),
        "p_min": num(r.range.lo()),
        "p_max": num(r.range.hi()),
        "scanned": num(r.scanned),
        "matches": nums(r.matches.iter()),
        "match_fraction": format!("{:.6}", r.match_fraction()),
        "outcome": r.outcome().as_str(),
    });
    if let Some(rows) = &r.detail {
        v["detail"] = rows
            .iter()
            .map(|d| json!({"p": num(d.p), "lparts": nums(d.lparts.iter()), "matched": d.matched}))
            .collect();
    }
    v
}

pub(crate) fn sweep_text(r: &SweepReport) -> String {
    let targets: Vec<String> = r.profile.targets().iter().map(u64::to_string).collect();
    let mut out = format!(
        "l = {}, target l-parts ({}): {} of {} primes in [{}, {}] match ({:.4})\n",
        r.profile.l(),
        targets.join(", "),
        r.matches.len(),
        r.scanned,
        r.range.lo(),
        r.range.hi(),
        r.match_fraction()
    );
    if r.matches.is_empty() {
        out.push_str("no match in range\n");
    } else {
        let ps: Vec<String> = r.matches.iter().map(u64::to_string).collect();
        out.push_str(&format!("matches: {}\n", ps.join(" ")));
    }
    if let Some(rows) = &r.detail {
        for d in rows {
            out.push_str(&format!(
                "{:>10}  {}  {}\n",
                d.p,
                vector_text(&d.lparts),
                if d.matched { "match" } else { "-" }
            ));
        }
    }
    out
}

pub(crate) fn sweep_csv(r: &SweepReport) -> String {
    let s = r.profile.ks().len();
    let mut out = String::from("p");
    for t in 1..=s {
        out.push_str(&format!(",lpart_{t}"));
    }
    out.push_str(",match\n");
    for d in r.detail.as_deref().unwrap_or_default() {
        out.push_str(&d.p.to_string());
        for v in &d.lparts {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(if d.matched { ",1\n" } else { ",0\n" });
    }
    out
}

pub(crate) fn implication_json(r: &ImplicationReport) -> Value {
    use crate::dependence::{ImplicationMethod, ImplicationStatus};
    json!({
        "kind": "implication",
        "system": r.system.as_str(),
        "p": num(r.p),
        "status": r.status.as_str(),
        "m": match &r.status {
            ImplicationStatus::Fails { m } => nums(m.iter()),
            _ => Value::Null,
        },
        "status_bound": match r.status {
            ImplicationStatus::HoldsUpToBound { bound } => num(bound),
            _ => Value::Null,
        },
        "method": r.method.as_str(),
        "method_bound": match r.method {
            ImplicationMethod::BoxBruteForce { bound } => num(bound),
            _ => Value::Null,
        },
        "constraint": r.constraint.as_ref().map(constraint_json),
    })
}

pub(crate) fn implication_text(r: &ImplicationReport) -> String {
    use crate::dependence::ImplicationStatus;
    let head = match &r.status {
        ImplicationStatus::Holds => "Holds".to_string(),
        ImplicationStatus::HoldsUpToBound { bound } => {
            format!("Holds for all m in [1, {bound}]^s (search incomplete)")
        }
        ImplicationStatus::Fails { m } => format!("Fails for m = {}", vector_text(m)),
        ImplicationStatus::Vacuous => "Vacuous (every reduction is trivial)".to_string(),
    };
    let mut out = format!("p = {}: {head} [{}]\n", r.p, r.method.as_str());
    if let Some(c) = &r.constraint {
        out.push_str(&format!("e ≡ {} (mod {})\n", c.residue, c.modulus));
    }
    out
}

fn refutation_json(prime: u64, reason: &Refutation) -> Value {
    match reason {
        Refutation::ImplicationFails { m } => {
            json!({"prime": num(prime), "reason": "ImplicationFails", "m": nums(m.iter())})
        }
        Refutation::NotInSubgroup { index } => {
            json!({"prime": num(prime), "reason": "NotInSubgroup", "index": num(index)})
        }
        Refutation::CrtConflict { other_prime } => json!({
            "prime": num(prime), "reason": "CrtConflict", "other_prime": num(other_prime)
        }),
    }
}

pub(crate) fn witness_json(w: &RelationWitness) -> Value {
    let mut v = json!({
        "verdict": w.kind(),
        "e": Value::Null,
        "pairs": Value::Null,
        "refutation": Value::Null,
        "crt": Value::Null,
        "bound": Value::Null,
    });
    match w {
        RelationWitness::Exponent(e) => v["e"] = num(e),
        RelationWitness::Pairs(ps) => {
            v["pairs"] = ps.iter().map(|(a, b)| json!([num(a), num(b)])).collect()
        }
        RelationWitness::Refuted { prime, reason } => {
            v["refutation"] = refutation_json(*prime, reason)
        }
        RelationWitness::Inconclusive { constraint, bound } => {
            if let Some(c) = constraint {
                v["crt"] = json!({"residue": num(&c.residue), "modulus": num(&c.modulus)});
            }
            if let Some(b) = bound {
                v["bound"] = num(b);
            }
        }
    }
    v
}

pub(crate) fn relation_json(system: &str, r: &RelationReport) -> Value {
    let mut v = witness_json(&r.witness);
    v["kind"] = json!("relation");
    v["system"] = json!(system);
    v["primes_scanned"] = num(r.primes_scanned);
    v["constraints"] = r.constraints.iter().map(constraint_json).collect();
    v
}

pub(crate) fn witness_text(w: &RelationWitness) -> String {
    match w {
        RelationWitness::Exponent(e) => format!("Verified: Q_i = {e}·P_i\n"),
        RelationWitness::Pairs(ps) => ps
            .iter()
            .map(|(a, b)| format!("Relation: {a}·P + {b}·Q = 0\n"))
            .collect(),
        RelationWitness::Refuted { prime, reason } => {
            let why = match reason {
                Refutation::ImplicationFails { m } => {
                    format!("the implication fails for m = {}", vector_text(m))
                }
                Refutation::NotInSubgroup { index } => {
                    format!(
                        "red Q_{} is not a multiple of red P_{}",
                        index + 1,
                        index + 1
                    )
                }
                Refutation::CrtConflict { other_prime } => {
                    format!("the exponent class contradicts the one from p = {other_prime}")
                }
            };
            format!("Refuted at p = {prime}: {why}\n")
        }
        RelationWitness::Inconclusive { constraint, bound } => {
            let mut out = String::from("Inconclusive");
            if let Some(c) = constraint {
                out.push_str(&format!(
                    ": e ≡ {} (mod {}), not verified",
                    c.residue, c.modulus
                ));
            }
            if let Some(b) = bound {
                out.push_str(&format!(": no relation with coefficients up to {b}"));
            }
            out.push('\n');
            out
        }
    }
}

pub(crate) fn relation_text(r: &RelationReport) -> String {
    format!(
        "{}{} good primes used, {} constraints\n",
        witness_text(&r.witness),
        r.primes_scanned,
        r.constraints.len()
    )
}
