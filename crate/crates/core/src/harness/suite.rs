//! Batch verification of scenarios and the JSON-lines report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle_model::{apply_circle_superconn, d_s, iota, iota_e, iota_e_inverse};
use crate::coefficients::Rational;
use crate::endforms::{with_mutated_sign, Parity};
use crate::error::{Error, Result};
use crate::forms::{Form, SymplecticForm};
use crate::oracle::{
    apply_endpair, apply_prim, identified_power_matches, power_equivalence, random_epair,
    DEFAULT_PROBES,
};
use crate::primitive::{
    a_hat_with_order, bianchi_residual, boundary_partial, check_nilpotent, chern_character,
    closedness_residual, degree_zero_part, prim_bracket, prim_power, prim_square, str_bold,
    transgress_between, transgression_residual, EndPair, Grading, PrimFamily, PrimSuperConn,
    ScalarPair,
};
use crate::random::{self, Bounds};

use super::scenario::{format_coeffs, Scenario};

/// A named verification applied to a scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Bianchi,
    Closedness,
    Transgression,
    Corollary,
    Oracle,
    StrBracket,
    Crosswalk,
    Ch,
    Ahat,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Bianchi,
        Check::Closedness,
        Check::Transgression,
        Check::Corollary,
        Check::Oracle,
        Check::StrBracket,
        Check::Crosswalk,
        Check::Ch,
        Check::Ahat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Bianchi => "bianchi",
            Check::Closedness => "closedness",
            Check::Transgression => "transgression",
            Check::Corollary => "corollary",
            Check::Oracle => "oracle",
            Check::StrBracket => "str-bracket",
            Check::Crosswalk => "crosswalk",
            Check::Ch => "ch",
            Check::Ahat => "ahat",
        }
    }

    /// Parses a comma-separated list; `all` expands to every check and an
    /// empty string gives an empty list.
    pub fn parse_list(s: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Check::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        Ok(out)
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Scenario(format!("unknown check {s:?}")))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Error,
}

/// One line of the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    pub scenario: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub residual_zero: bool,
    pub residual_terms: usize,
    pub wall_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    /// True when no record failed or errored.
    pub fn ok(&self) -> bool {
        self.records
            .iter()
            .all(|r| matches!(r.status, Status::Pass | Status::Skipped))
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&serde_json::to_string(r).expect("serializable"));
            s.push('\n');
        }
        s
    }

    pub fn from_jsonl(text: &str) -> Result<Report> {
        let records = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<std::result::Result<_, _>>()?;
        Ok(Report { records })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub checks: Vec<Check>,
    /// Overrides each scenario's own seed.
    pub seed: Option<u64>,
    pub max_k: Option<usize>,
    /// Overrides each scenario's own `f`.
    pub f: Option<Vec<Rational>>,
    /// Random inputs per record for the sampling checks.
    pub samples: usize,
    pub probes: usize,
    /// Extra random polynomials per closedness run.
    pub random_f: usize,
    pub mutate_sign: bool,
    /// When false, `wall_ms` is written as 0 so reports compare byte for byte.
    pub timing: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            checks: Check::ALL.to_vec(),
            seed: None,
            max_k: None,
            f: None,
            samples: 10,
            probes: DEFAULT_PROBES,
            random_f: 5,
            mutate_sign: false,
            timing: true,
        }
    }
}

enum Outcome {
    Residual(usize),
    Holds(bool),
    Skip(String),
}

struct Ctx<'a> {
    s: &'a Scenario,
    opts: &'a SuiteOptions,
    seed: u64,
    max_k: usize,
}

impl Ctx<'_> {
    fn record(
        &self,
        check: Check,
        params: &[(&str, String)],
        body: impl FnOnce() -> Result<Outcome>,
    ) -> Record {
        let start = Instant::now();
        let res = body();
        let wall_ms = if self.opts.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        };
        let mut p: BTreeMap<String, String> =
            params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        p.insert("seed".into(), self.seed.to_string());
        if self.opts.mutate_sign {
            p.insert("mutated".into(), "true".into());
        }
        let (status, residual_terms, note) = match res {
            Ok(Outcome::Residual(0)) => (Status::Pass, 0, None),
            Ok(Outcome::Residual(n)) => (Status::Fail, n, None),
            Ok(Outcome::Holds(true)) => (Status::Pass, 0, None),
            Ok(Outcome::Holds(false)) => (Status::Fail, 1, None),
            Ok(Outcome::Skip(why)) => (Status::Skipped, 0, Some(why)),
            Err(e) => (Status::Error, 0, Some(e.to_string())),
        };
        Record {
            check: check.name().into(),
            scenario: self.s.id().into(),
            params: p,
            status,
            residual_zero: status == Status::Pass,
            residual_terms,
            wall_ms,
            note,
        }
    }

    fn sub_rng(&self, check: Check) -> random::Rng64 {
        random::rng(self.seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(check as u64 + 1)))
    }

    fn scenario_f(&self) -> Vec<Rational> {
        self.opts.f.clone().unwrap_or_else(|| self.s.f.clone())
    }

    /// `z, z², z³` and the scenario polynomial.
    fn base_polys(&self) -> Vec<Vec<Rational>> {
        let mut out: Vec<Vec<Rational>> = (1..=3).map(monomial_coeffs).collect();
        let f = self.scenario_f();
        if !out.contains(&f) {
            out.push(f);
        }
        out
    }
}

fn monomial_coeffs(k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); k + 1];
    v[k] = Rational::one();
    v
}

/// A random graded [`EndPair`].
pub fn random_endpair<R: Rng>(rng: &mut R, p: &PrimSuperConn, b: &Bounds) -> EndPair {
    let grading = if rng.gen_bool(0.5) {
        Grading::EvenFirst
    } else {
        Grading::OddFirst
    };
    let (pf, ps) = match grading {
        Grading::EvenFirst => (Parity::Even, Parity::Odd),
        Grading::OddFirst => (Parity::Odd, Parity::Even),
    };
    let first = random::endform(rng, p.bundle(), p.chart(), pf, b, true);
    let second = random::endform(rng, p.bundle(), p.chart(), ps, b, true);
    EndPair::new(first, second, Some(grading)).expect("graded by construction")
}

/// `(e^{-bω}, db∧e^{-bω})` for a scalar 0-form `b`, by direct expansion.
pub fn rank_one_ch(b: &Form, omega: &SymplecticForm) -> ScalarPair {
    let x = b.wedge(omega.form()).scale(&-Rational::one());
    let mut e = Form::one(b.chart());
    let mut term = Form::one(b.chart());
    let mut n = 1i64;
    loop {
        term = term.wedge(&x).scale(&Rational::new(1.into(), n.into()));
        if term.is_zero() {
            break;
        }
        e += &term;
        n += 1;
    }
    ScalarPair {
        second: b.d().wedge(&e),
        first: e,
    }
}

/// `(b^k ω^k, -k b^{k-1} ω^{k-1}∧db)`.
pub fn rank_one_power(b: &Form, omega: &SymplecticForm, k: usize) -> ScalarPair {
    let c = b.chart();
    let mut bw = Form::one(c);
    for _ in 0..k - 1 {
        bw = bw.wedge(b).wedge(omega.form());
    }
    ScalarPair {
        first: bw.wedge(b).wedge(omega.form()),
        second: bw
            .wedge(&b.d())
            .scale(&Rational::from_integer((-(k as i64)).into())),
    }
}

/// The scalar `b` when the scenario is rank (1,0) with `θ = 0` and a 0-form `B`.
fn rank_one_b(p: &PrimSuperConn) -> Option<Form> {
    let e = p.bundle();
    if e.r_plus() == 1 && e.r_minus() == 0 && p.theta().is_zero() && p.b().is_zero_form() {
        Some(p.b().form_at(0, 0))
    } else {
        None
    }
}

fn pair_diff(a: &ScalarPair, b: &ScalarPair) -> usize {
    (a - b).term_count()
}

fn run_bianchi(cx: &Ctx) -> Vec<Record> {
    (1..=cx.max_k)
        .map(|k| {
            cx.record(Check::Bianchi, &[("k", k.to_string())], || {
                Ok(Outcome::Residual(bianchi_residual(&cx.s.p0, k)?.term_count()))
            })
        })
        .collect()
}

fn run_closedness(cx: &Ctx) -> Vec<Record> {
    let mut fs = cx.base_polys();
    let mut rng = cx.sub_rng(Check::Closedness);
    fs.extend((0..cx.opts.random_f).map(|_| random::poly_coeffs(&mut rng, 3)));
    fs.iter()
        .map(|f| {
            cx.record(Check::Closedness, &[("f", format_coeffs(f))], || {
                Ok(Outcome::Residual(closedness_residual(f, &cx.s.p0)?.term_count()))
            })
        })
        .collect()
}

fn run_transgression(cx: &Ctx, check: Check) -> Vec<Record> {
    let Some(p1) = &cx.s.p1 else {
        return vec![cx.record(check, &[], || {
            Ok(Outcome::Skip("scenario has no second endpoint".into()))
        })];
    };
    let p0 = &cx.s.p0;
    cx.base_polys()
        .iter()
        .map(|f| {
            cx.record(check, &[("f", format_coeffs(f))], || {
                if check == Check::Transgression {
                    let fam = PrimFamily::affine(p0, p1)?;
                    Ok(Outcome::Residual(transgression_residual(&fam, f)?.term_count()))
                } else {
                    let (lhs, rhs) = transgress_between(f, p0, p1)?;
                    Ok(Outcome::Residual(pair_diff(&lhs, &rhs)))
                }
            })
        })
        .collect()
}

fn run_oracle(cx: &Ctx) -> Vec<Record> {
    let p = &cx.s.p0;
    let n = cx.opts.samples;
    let mut out: Vec<Record> = (1..=cx.max_k)
        .map(|k| {
            cx.record(
                Check::Oracle,
                &[("k", k.to_string()), ("mode", "equivalence".into()), ("samples", n.to_string())],
                || Ok(Outcome::Holds(power_equivalence(p, k, n, cx.seed.wrapping_add(k as u64))?)),
            )
        })
        .collect();
    out.push(cx.record(
        Check::Oracle,
        &[("k", "1".into()), ("mode", "identify".into()), ("probes", cx.opts.probes.to_string())],
        || Ok(Outcome::Holds(identified_power_matches(p, 1, cx.opts.probes, cx.seed)?)),
    ));
    out
}

fn run_str_bracket(cx: &Ctx) -> Vec<Record> {
    let n = cx.opts.samples;
    vec![cx.record(Check::StrBracket, &[("samples", n.to_string())], || {
        let p = &cx.s.p0;
        let mut rng = cx.sub_rng(Check::StrBracket);
        let b = Bounds::default();
        let mut bad = 0;
        for _ in 0..n {
            let q = random_endpair(&mut rng, p, &b);
            let lhs = str_bold(&prim_bracket(p, &q)?);
            let rhs = boundary_partial(&str_bold(&q), p.omega())?;
            bad += pair_diff(&lhs, &rhs);
        }
        Ok(Outcome::Residual(bad))
    })]
}

fn run_crosswalk(cx: &Ctx) -> Vec<Record> {
    let n = cx.opts.samples;
    vec![cx.record(Check::Crosswalk, &[("samples", n.to_string())], || {
        let p = &cx.s.p0;
        let omega = p.omega();
        let (bundle, chart) = (p.bundle(), p.chart());
        let mut rng = cx.sub_rng(Check::Crosswalk);
        let b = Bounds::default();
        let sq = prim_square(p);
        let mut bad = 0;
        for _ in 0..n {
            let sp = ScalarPair::new(random::form(&mut rng, chart, &b), random::form(&mut rng, chart, &b))?;
            let x = iota(&sp);
            let dx = d_s(&x, omega)?;
            if !d_s(&dx, omega)?.is_zero() {
                bad += 1;
            }
            if dx != iota(&boundary_partial(&sp, omega)?) {
                bad += 1;
            }
            let v = random_epair(&mut rng, bundle, chart, &b);
            let y = apply_circle_superconn(p, &iota_e(&v))?;
            if y != iota_e(&apply_prim(p, &v)?) {
                bad += 1;
            }
            let yy = apply_circle_superconn(p, &y)?;
            if iota_e_inverse(&yy) != apply_endpair(&sq, &v)? {
                bad += 1;
            }
        }
        Ok(Outcome::Residual(bad))
    })]
}

fn run_ch(cx: &Ctx) -> Vec<Record> {
    let p = &cx.s.p0;
    if let Err(e) = check_nilpotent(p) {
        return vec![cx.record(Check::Ch, &[], || Ok(Outcome::Skip(e.to_string())))];
    }
    let mut out = vec![cx.record(Check::Ch, &[("part", "closed".into())], || {
        let ch = chern_character(p)?;
        let mut bad = boundary_partial(&ch, p.omega())?.term_count();
        let rank = p.bundle().r_plus() as i64 - p.bundle().r_minus() as i64;
        let expect = Form::constant(p.chart(), Rational::from_integer(rank.into()));
        if degree_zero_part(&ch) != expect {
            bad += 1;
        }
        Ok(Outcome::Residual(bad))
    })];
    if let Some(b) = rank_one_b(p) {
        out.push(cx.record(Check::Ch, &[("part", "closed-form".into())], || {
            let ch = chern_character(p)?;
            let mut bad = pair_diff(&ch, &rank_one_ch(&b, p.omega()));
            for k in 1..=cx.max_k {
                let pk = str_bold(&prim_power(p, k)?);
                bad += pair_diff(&pk, &rank_one_power(&b, p.omega(), k));
            }
            Ok(Outcome::Residual(bad))
        }));
    }
    out
}

fn run_ahat(cx: &Ctx) -> Vec<Record> {
    let p = &cx.s.p0;
    let order = cx.s.file.truncation;
    vec![cx.record(Check::Ahat, &[("truncation", order.to_string())], || {
        let a = match a_hat_with_order(p, order) {
            Ok(a) => a,
            Err(Error::Precondition(why)) | Err(Error::SeriesDivergence(why)) => {
                return Ok(Outcome::Skip(why))
            }
            Err(e) => return Err(e),
        };
        let mut bad = boundary_partial(&a, p.omega())?.term_count();
        if degree_zero_part(&a) != Form::one(p.chart()) {
            bad += 1;
        }
        Ok(Outcome::Residual(bad))
    })]
}

/// Runs one check on one scenario.
pub fn run_check(s: &Scenario, check: Check, opts: &SuiteOptions) -> Vec<Record> {
    let cx = Ctx {
        s,
        opts,
        seed: opts.seed.unwrap_or(s.file.seed),
        max_k: opts.max_k.unwrap_or(s.file.max_k),
    };
    let go = || match check {
        Check::Bianchi => run_bianchi(&cx),
        Check::Closedness => run_closedness(&cx),
        Check::Transgression | Check::Corollary => run_transgression(&cx, check),
        Check::Oracle => run_oracle(&cx),
        Check::StrBracket => run_str_bracket(&cx),
        Check::Crosswalk => run_crosswalk(&cx),
        Check::Ch => run_ch(&cx),
        Check::Ahat => run_ahat(&cx),
    };
    if opts.mutate_sign {
        with_mutated_sign(go)
    } else {
        go()
    }
}

/// Runs every selected check on every scenario in parallel; records come
/// back in scenario-then-check order.
pub fn run_suite(scenarios: &[Scenario], opts: &SuiteOptions) -> Report {
    let tasks: Vec<(&Scenario, Check)> = scenarios
        .iter()
        .flat_map(|s| opts.checks.iter().map(move |&c| (s, c)))
        .collect();
    let records = tasks
        .par_iter()
        .map(|&(s, c)| run_check(s, c, opts))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Report { records }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::scenario::{gen_scenario, GenOptions};
    use crate::random::ThetaShape;

    fn scenario(m: usize, ranks: (usize, usize), shape: ThetaShape, seed: u64) -> Scenario {
        let mut o = GenOptions::new(m, ranks, seed);
        o.shape = shape;
        o.endpoint = true;
        gen_scenario(&o).unwrap().load().unwrap()
    }

    #[test]
    fn empty_check_list_is_success() {
        let s = scenario(2, (1, 0), ThetaShape::General, 1);
        let opts = SuiteOptions {
            checks: vec![],
            ..SuiteOptions::default()
        };
        let r = run_suite(&[s], &opts);
        assert!(r.records.is_empty() && r.ok());
    }

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let ss = vec![
            scenario(2, (1, 1), ThetaShape::General, 5),
            scenario(2, (1, 0), ThetaShape::Koszul, 6),
        ];
        let opts = SuiteOptions {
            timing: false,
            ..SuiteOptions::default()
        };
        let a = run_suite(&ss, &opts);
        assert!(a.ok(), "{}", a.to_jsonl());
        assert_eq!(a.to_jsonl(), run_suite(&ss, &opts).to_jsonl());
        assert_eq!(Report::from_jsonl(&a.to_jsonl()).unwrap(), a);
    }

    #[test]
    fn mutation_makes_something_fail() {
        let ss: Vec<_> = (1..=6).map(|i| scenario(2, (1, 1), ThetaShape::General, i)).collect();
        let mut opts = SuiteOptions {
            checks: vec![Check::Oracle, Check::Bianchi],
            ..SuiteOptions::default()
        };
        assert!(run_suite(&ss, &opts).ok());
        opts.mutate_sign = true;
        assert!(run_suite(&ss, &opts).count(Status::Fail) > 0);
    }

    #[test]
    fn rank_one_closed_form_is_compared() {
        let c = crate::forms::Chart::new(4).unwrap();
        let b = crate::syntax::parse_form(c, "x1*x2 - 2").unwrap();
        let omega = SymplecticForm::standard(c).unwrap();
        let ch = rank_one_ch(&b, &omega);
        assert!(boundary_partial(&ch, &omega).unwrap().is_zero());
        assert_eq!(ch.first.degree_part(0), Form::one(c));
    }

    #[test]
    fn check_list_parsing() {
        assert_eq!(Check::parse_list("").unwrap(), vec![]);
        assert_eq!(Check::parse_list("all").unwrap().len(), 9);
        assert_eq!(
            Check::parse_list("ch, ahat").unwrap(),
            vec![Check::Ch, Check::Ahat]
        );
        assert!(Check::parse_list("nope").is_err());
    }
}
