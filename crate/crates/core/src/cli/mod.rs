//! Command-line front end. [`run`] does everything except touching the
//! process, so tests can call it directly.

mod args;
mod render;

use std::ffi::OsString;
use std::fmt::Display;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use args::{
    AffineArgs, CountArgs, DetectArgs, ErdosArgs, ImplicationArgs, OrderSearchArgs, PairArgs,
    RangeArgs, SchinzelArgs, SystemArgs,
};
pub use args::{Cli, Command, Format, SystemChoice};
use render::{num, nums};

use crate::arith::PrimeRange;
use crate::dependence::{
    affine_implication_at, implication_at, infer_exponent, search_pair_relation,
};
use crate::elliptic::{parse_point, parse_point_list, EllipticCurve, RationalPoint};
use crate::error::{Error, Result};
use crate::mulgroup::{
    erdos_test, parse_element_list, recover_exponent_mul, schinzel_condition_at, MulElement,
    SchinzelOutcome, SupportVerdict,
};
use crate::order_search::{sweep_ec, sweep_mul, OrderProfile};
use crate::relation::RelationWitness;
use crate::system::{EcSystem, MulSystem, ReductionSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

struct Report {
    config: Map<String, Value>,
    exclusions: Vec<u64>,
    result: Value,
    text: String,
    csv: Option<String>,
    code: i32,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let msg = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), msg)
            } else {
                (msg, String::new())
            };
            return Outcome {
                stdout,
                stderr,
                code,
            };
        }
    };
    let computed = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::Resource(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match computed {
        Ok(report) => emit(&cli, report),
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: match e {
                Error::Domain(_) | Error::Parse(_) => EXIT_USAGE,
                _ => EXIT_INTERNAL,
            },
        },
    }
}

fn emit(cli: &Cli, report: Report) -> Outcome {
    let stdout = match cli.format {
        Format::Text => report.text,
        Format::Csv => match report.csv {
            Some(csv) => csv,
            None => {
                return Outcome {
                    stdout: String::new(),
                    stderr: "error: csv output is only available for order-search\n".into(),
                    code: EXIT_USAGE,
                }
            }
        },
        Format::Json => {
            let mut config = report.config;
            config.insert("seed".into(), num(cli.seed));
            let doc = json!({
                "tool_version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "exclusions": nums(report.exclusions.iter()),
                "result": report.result,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
            s.push('\n');
            s
        }
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code: report.code,
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Erdos(a) => cmd_erdos(a),
        Command::OrderSearch(a) => cmd_order_search(a),
        Command::Implication(a) => with_system(&a.system, |s| s.implication(a)),
        Command::AffineImplication(a) => with_system(&a.system, |s| s.affine(a)),
        Command::DetectRelation(a) => with_system(&a.system, |s| s.detect(a)),
        Command::PairRelation(a) => with_system(&a.system, |s| s.pair(a)),
        Command::Schinzel(a) => cmd_schinzel(a),
        Command::Count(a) => cmd_count(a, cli.seed),
    }
}

/// A reduction system the command line can parse inputs for.
trait CliSystem: ReductionSystem
where
    Self::Point: Display,
{
    fn parse_list(&self, s: &str) -> Result<Vec<Self::Point>>;

    fn parse_one(&self, s: &str) -> Result<Self::Point> {
        let mut v = self.parse_list(s)?;
        if v.len() != 1 {
            return Err(Error::Parse(format!("expected one input, got {s:?}")));
        }
        Ok(v.remove(0))
    }

    fn describe(&self, config: &mut Map<String, Value>);
}

impl CliSystem for MulSystem {
    fn parse_list(&self, s: &str) -> Result<Vec<MulElement>> {
        parse_element_list(s)
    }

    fn describe(&self, config: &mut Map<String, Value>) {
        config.insert("system".into(), json!("mul"));
    }
}

impl CliSystem for EcSystem {
    fn parse_list(&self, s: &str) -> Result<Vec<RationalPoint>> {
        let pts = parse_point_list(s)?;
        check_on_curve(&self.curve, &pts)?;
        Ok(pts)
    }

    fn parse_one(&self, s: &str) -> Result<RationalPoint> {
        let pt = parse_point(s)?;
        check_on_curve(&self.curve, std::slice::from_ref(&pt))?;
        Ok(pt)
    }

    fn describe(&self, config: &mut Map<String, Value>) {
        config.insert("system".into(), json!("ec"));
        config.insert("curve".into(), json!(self.curve.to_string()));
    }
}

fn check_on_curve(curve: &EllipticCurve, pts: &[RationalPoint]) -> Result<()> {
    match pts.iter().find(|p| !curve.contains(p)) {
        Some(p) => Err(Error::Domain(format!("{p} is not on the curve {curve}"))),
        None => Ok(()),
    }
}

fn parse_curve(s: Option<&str>) -> Result<EllipticCurve> {
    s.ok_or_else(|| Error::Domain("--system ec needs --curve".into()))?
        .parse()
}

fn with_system<F>(args: &SystemArgs, f: F) -> Result<Report>
where
    F: FnOnce(&dyn DispatchSystem) -> Result<Report>,
{
    match args.system {
        SystemChoice::Mul => f(&MulSystem),
        SystemChoice::Ec => f(&EcSystem::new(parse_curve(args.curve.as_deref())?)),
    }
}

/// Object-safe view used by [`with_system`]; each relation command is
/// monomorphized inside.
trait DispatchSystem {
    fn implication(&self, a: &ImplicationArgs) -> Result<Report>;
    fn affine(&self, a: &AffineArgs) -> Result<Report>;
    fn detect(&self, a: &DetectArgs) -> Result<Report>;
    fn pair(&self, a: &PairArgs) -> Result<Report>;
}

impl<S> DispatchSystem for S
where
    S: CliSystem,
    S::Point: Display,
{
    fn implication(&self, a: &ImplicationArgs) -> Result<Report> {
        let ps = self.parse_list(&a.ps)?;
        let qs = self.parse_list(&a.qs)?;
        let r = implication_at(self, &ps, &qs, a.p, a.m_bound)?;
        let mut config = base_config("implication");
        self.describe(&mut config);
        config.insert("Ps".into(), list(&ps));
        config.insert("Qs".into(), list(&qs));
        config.insert("p".into(), num(a.p));
        config.insert("m_bound".into(), num(a.m_bound));
        Ok(Report {
            config,
            exclusions: vec![],
            result: render::implication_json(&r),
            text: render::implication_text(&r),
            csv: None,
            code: EXIT_OK,
        })
    }

    fn affine(&self, a: &AffineArgs) -> Result<Report> {
        let ps = self.parse_list(&a.ps)?;
        let qs = self.parse_list(&a.qs)?;
        let p0 = self.parse_one(&a.p0)?;
        let q0 = self.parse_one(&a.q0)?;
        let r = affine_implication_at(self, &ps, &p0, &qs, &q0, a.p, a.m_bound)?;
        let mut config = base_config("affine-implication");
        self.describe(&mut config);
        config.insert("Ps".into(), list(&ps));
        config.insert("P0".into(), json!(p0.to_string()));
        config.insert("Qs".into(), list(&qs));
        config.insert("Q0".into(), json!(q0.to_string()));
        config.insert("p".into(), num(a.p));
        config.insert("m_bound".into(), num(a.m_bound));
        Ok(Report {
            config,
            exclusions: vec![],
            result: render::implication_json(&r),
            text: render::implication_text(&r),
            csv: None,
            code: EXIT_OK,
        })
    }

    fn detect(&self, a: &DetectArgs) -> Result<Report> {
        let ps = self.parse_list(&a.ps)?;
        let qs = self.parse_list(&a.qs)?;
        let range = prime_range(&a.range)?;
        let r = infer_exponent(self, &ps, &qs, &range, a.m_bound)?;
        let mut config = base_config("detect-relation");
        self.describe(&mut config);
        config.insert("Ps".into(), list(&ps));
        config.insert("Qs".into(), list(&qs));
        range_config(&mut config, &range);
        config.insert("m_bound".into(), num(a.m_bound));
        Ok(Report {
            config,
            result: render::relation_json(self.kind().as_str(), &r),
            text: render::relation_text(&r),
            csv: None,
            code: relation_exit_code(&r.witness),
            exclusions: r.exclusions,
        })
    }

    fn pair(&self, a: &PairArgs) -> Result<Report> {
        let p = self.parse_one(&a.p)?;
        let q = self.parse_one(&a.q)?;
        let w = search_pair_relation(self, &p, &q, a.bound)?;
        let mut config = base_config("pair-relation");
        self.describe(&mut config);
        config.insert("P".into(), json!(p.to_string()));
        config.insert("Q".into(), json!(q.to_string()));
        config.insert("bound".into(), num(a.bound));
        let mut result = render::witness_json(&w);
        result["kind"] = json!("pair");
        result["system"] = json!(self.kind().as_str());
        Ok(Report {
            config,
            exclusions: vec![],
            result,
            text: render::witness_text(&w),
            csv: None,
            code: relation_exit_code(&w),
        })
    }
}

fn relation_exit_code(w: &RelationWitness) -> i32 {
    match w {
        RelationWitness::Exponent(_) | RelationWitness::Pairs(_) => EXIT_OK,
        RelationWitness::Refuted { .. } => 1,
        RelationWitness::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    }
}

fn base_config(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m
}

fn list<T: Display>(items: &[T]) -> Value {
    items.iter().map(|x| json!(x.to_string())).collect()
}

fn prime_range(r: &RangeArgs) -> Result<PrimeRange> {
    PrimeRange::new(r.p_min, r.p_max)
}

fn range_config(config: &mut Map<String, Value>, range: &PrimeRange) {
    config.insert("p_min".into(), num(range.lo()));
    config.insert("p_max".into(), num(range.hi()));
}

fn cmd_erdos(a: &ErdosArgs) -> Result<Report> {
    let x: MulElement = a.x.parse()?;
    let y: MulElement = a.y.parse()?;
    let r = erdos_test(&x, &y, a.n_max, a.p_max)?;
    let mut config = base_config("erdos");
    config.insert("x".into(), json!(x.to_string()));
    config.insert("y".into(), json!(y.to_string()));
    config.insert("n_max".into(), num(a.n_max));
    config.insert("p_max".into(), num(a.p_max));
    Ok(Report {
        config,
        result: render::support_json(&r),
        text: render::support_text(&r),
        csv: None,
        code: match r.verdict {
            SupportVerdict::EqualInRange => EXIT_OK,
            SupportVerdict::Witness => 1,
        },
        exclusions: r.exclusions,
    })
}

fn cmd_order_search(a: &OrderSearchArgs) -> Result<Report> {
    let profile = OrderProfile::new(a.l, a.ks.clone())?;
    let range = prime_range(&a.range)?;
    let mut config = base_config("order-search");
    // CSV rows are per prime, so always collect them; JSON and text honour --detail
    let report = match a.system.system {
        SystemChoice::Mul => {
            let xs = parse_element_list(&a.inputs)?;
            MulSystem.describe(&mut config);
            config.insert("elements".into(), list(&xs));
            sweep_mul(&xs, &profile, &range, true)?
        }
        SystemChoice::Ec => {
            let sys = EcSystem::new(parse_curve(a.system.curve.as_deref())?);
            let pts = sys.parse_list(&a.inputs)?;
            sys.describe(&mut config);
            config.insert("points".into(), list(&pts));
            sweep_ec(&sys.curve, &pts, &profile, &range, true)?
        }
    };
    config.insert("l".into(), num(a.l));
    config.insert("ks".into(), nums(a.ks.iter()));
    range_config(&mut config, &range);
    config.insert("detail".into(), json!(a.detail));
    let csv = render::sweep_csv(&report);
    let shown = if a.detail {
        report
    } else {
        crate::order_search::SweepReport {
            detail: None,
            ..report
        }
    };
    Ok(Report {
        config,
        result: render::sweep_json(&shown),
        text: render::sweep_text(&shown),
        csv: Some(csv),
        code: EXIT_OK,
        exclusions: shown.exclusions,
    })
}

fn cmd_schinzel(a: &SchinzelArgs) -> Result<Report> {
    let ps = parse_element_list(&a.ps)?;
    let qs = parse_element_list(&a.qs)?;
    let range = prime_range(&a.range)?;
    let recovery = recover_exponent_mul(&ps, &qs, &range)?;
    let good: Vec<u64> = range
        .primes()?
        .into_iter()
        .filter(|&p| ps.iter().chain(&qs).all(|v| v.is_unit_at(p)))
        .collect();
    let outcomes: Vec<SchinzelOutcome> = good
        .par_iter()
        .map(|&p| schinzel_condition_at(&ps, &qs, p))
        .collect::<Result<_>>()?;
    let mut holds = 0u64;
    let mut vacuous = 0u64;
    let mut failures: Vec<(u64, Vec<u64>)> = Vec::new();
    for (&p, o) in good.iter().zip(outcomes) {
        match o {
            SchinzelOutcome::Holds(_) => holds += 1,
            SchinzelOutcome::Vacuous => vacuous += 1,
            SchinzelOutcome::Fails(m) => failures.push((p, m)),
        }
    }
    let mut config = base_config("schinzel");
    config.insert("Ps".into(), list(&ps));
    config.insert("Qs".into(), list(&qs));
    range_config(&mut config, &range);
    let first = failures
        .first()
        .map(|(p, m)| json!({"p": num(p), "m": nums(m.iter())}));
    let result = json!({
        "kind": "schinzel",
        "primes_checked": num(good.len()),
        "holds": num(holds),
        "vacuous": num(vacuous),
        "fails": num(failures.len()),
        "first_failure": first,
        "recovery": render::relation_json("mul", &recovery),
    });
    let mut text = format!(
        "{} good primes: condition holds at {}, vacuous at {}, fails at {}\n",
        good.len(),
        holds,
        vacuous,
        failures.len()
    );
    if let Some((p, m)) = failures.first() {
        let m: Vec<String> = m.iter().map(u64::to_string).collect();
        text.push_str(&format!("first failure: p = {p}, m = ({})\n", m.join(", ")));
    }
    text.push_str(&render::relation_text(&recovery));
    Ok(Report {
        config,
        result,
        text,
        csv: None,
        code: relation_exit_code(&recovery.witness),
        exclusions: recovery.exclusions,
    })
}

fn cmd_count(a: &CountArgs, seed: u64) -> Result<Report> {
    let curve: EllipticCurve = a.curve.parse()?;
    let range = prime_range(&a.range)?;
    let primes = range.primes()?;
    let (good, bad): (Vec<u64>, Vec<u64>) =
        primes.into_iter().partition(|&p| curve.is_good_prime(p));
    if good.is_empty() {
        return Err(Error::Domain("no good primes in range".into()));
    }
    let rows: Vec<(u64, u64, &'static str, bool, bool)> = good
        .par_iter()
        .map(|&p| {
            let reduced = curve.reduce_at(p)?;
            let cert = reduced.count_points()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
            let verified = cert.verify(&reduced, &mut rng, a.samples);
            Ok((
                p,
                cert.order,
                cert.method.as_str(),
                cert.satisfies_hasse(),
                verified,
            ))
        })
        .collect::<Result<_>>()?;
    let mut config = base_config("count");
    config.insert("curve".into(), json!(curve.to_string()));
    range_config(&mut config, &range);
    config.insert("samples".into(), num(a.samples));
    let result = json!({
        "kind": "count",
        "rows": rows.iter().map(|(p, n, m, h, v)| json!({
            "p": num(p), "order": num(n), "method": m, "hasse": h, "verified": v
        })).collect::<Vec<_>>(),
    });
    let text = rows
        .iter()
        .map(|(p, n, m, _, v)| {
            format!(
                "p = {p}: #E(F_p) = {n} [{m}{}]\n",
                if *v { "" } else { ", unverified" }
            )
        })
        .collect();
    Ok(Report {
        config,
        result,
        text,
        csv: None,
        code: EXIT_OK,
        exclusions: bad,
    })
}
