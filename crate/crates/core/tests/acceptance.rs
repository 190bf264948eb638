//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any of them fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use primcw::coefficients::{int, rat};
use primcw::endforms::covariant_bracket;
use primcw::harness::{gen_scenario, run_suite, Check, GenOptions, Report, Scenario, Status, SuiteOptions};
use primcw::primitive::{
    a_hat, a_hat_log_series, boundary_partial, chern_character, degree_zero_part, pair_product,
    prim_power,
};
use primcw::random::{self, Bounds, ThetaShape};
use primcw::syntax::parse_form;
use primcw::{
    Chart, EndForm, Form, Parity, PrimSuperConn, Rational, ScalarPair, SuperBundle, SuperConn,
    SymplecticForm,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();
    let shapes = [ThetaShape::General, ThetaShape::Nilpotent, ThetaShape::Koszul];
    let bounds = Bounds::new(2, 2, 3).unwrap();
    for m in [2, 4, 6] {
        for ranks in [(1, 0), (1, 1), (2, 1)] {
            for i in 0..6u64 {
                let seed = 1000 * m as u64 + 100 * (ranks.0 * 2 + ranks.1) as u64 + i;
                let mut o = GenOptions::new(m, ranks, seed);
                o.bounds = bounds;
                o.shape = shapes[i as usize % 3];
                o.endpoint = true;
                out.push(gen_scenario(&o).unwrap().load().unwrap());
            }
        }
    }
    out
}

fn only(checks: &[Check]) -> SuiteOptions {
    SuiteOptions {
        checks: checks.to_vec(),
        timing: false,
        ..SuiteOptions::default()
    }
}

fn summarize(r: &Report, what: &str) -> Outcome {
    let pass = r.count(Status::Pass);
    let bad = r.count(Status::Fail) + r.count(Status::Error);
    let mut detail = format!("{pass} {what} records pass, {bad} fail");
    if let Some(first) = r
        .records
        .iter()
        .find(|x| matches!(x.status, Status::Fail | Status::Error))
    {
        detail.push_str(&format!(" (first: {} on {})", first.check, first.scenario));
    }
    outcome(bad == 0 && pass > 0, detail)
}

fn bianchi(ss: &[Scenario]) -> Outcome {
    let r = run_suite(ss, &only(&[Check::Bianchi]));
    let mut o = summarize(&r, "bianchi");
    o.ok &= ss.len() >= 50 && r.records.len() == 3 * ss.len();
    o.detail.push_str(&format!(" over {} scenarios, k = 1..3", ss.len()));
    o
}

fn closedness(ss: &[Scenario]) -> Outcome {
    let r = run_suite(ss, &only(&[Check::Closedness]));
    let mut o = summarize(&r, "closedness");
    o.ok &= r.records.len() >= 8 * ss.len();
    o
}

fn families(ss: &[Scenario], check: Check) -> Outcome {
    let r = run_suite(ss, &only(&[check]));
    let fams = ss.iter().filter(|s| s.p1.is_some()).count();
    let mut o = summarize(&r, check.name());
    o.ok &= fams >= 25 && r.count(Status::Skipped) == 0;
    o.detail.push_str(&format!(" over {fams} affine families"));
    o
}

fn oracle(ss: &[Scenario]) -> Outcome {
    let r = run_suite(ss, &only(&[Check::Oracle]));
    let mut o = summarize(&r, "oracle");
    let mut mutated = only(&[Check::Oracle]);
    mutated.mutate_sign = true;
    let caught = run_suite(ss, &mutated).count(Status::Fail);
    o.ok &= caught > 0;
    o.detail.push_str(&format!("; sign mutation caught by {caught} records"));
    o
}

fn str_bracket(ss: &[Scenario]) -> Outcome {
    let mut opts = only(&[Check::StrBracket]);
    opts.samples = 2;
    let r = run_suite(ss, &opts);
    let instances = opts.samples * r.count(Status::Pass);
    let mut o = summarize(&r, "str-bracket");
    o.ok &= instances >= 100;
    o.detail.push_str(&format!(", {instances} random endomorphism pairs"));
    o
}

fn scalar_b(m: usize, b: &Form) -> PrimSuperConn {
    let c = Chart::new(m).unwrap();
    let e = SuperBundle::new(1, 0).unwrap();
    PrimSuperConn::new(
        SuperConn::trivial(e, c),
        EndForm::entry(e, 0, 0, b).unwrap(),
        SymplecticForm::standard(c).unwrap(),
    )
    .unwrap()
}

fn power_form(a: &Form, n: usize) -> Form {
    (0..n).fold(Form::one(a.chart()), |acc, _| acc.wedge(a))
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(int(1), |acc, k| acc * int(k as i64))
}

fn rank_one() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut rng = random::rng(77);
    for m in [2, 4, 6] {
        let c = Chart::new(m).unwrap();
        let omega = SymplecticForm::standard(c).unwrap();
        let w = omega.form();
        for _ in 0..5 {
            let b = Form::scalar(c, random::poly(&mut rng, c, 2, 3));
            let p = scalar_b(m, &b);
            for k in 1..=3 {
                let pk = prim_power(&p, k).unwrap();
                let first = power_form(&b, k).wedge(&power_form(w, k));
                let second = power_form(&b, k - 1)
                    .wedge(&power_form(w, k - 1))
                    .wedge(&b.d())
                    .scale(&int(-(k as i64)));
                if pk.first().form_at(0, 0) != first || pk.second().form_at(0, 0) != second {
                    bad.push(format!("power m={m} k={k}"));
                }
                let s = ScalarPair::new(first, second).unwrap();
                if !boundary_partial(&s, &omega).unwrap().is_zero() {
                    bad.push(format!("power not closed m={m} k={k}"));
                }
            }
            let mut e = Form::zero(c);
            for j in 0..=m / 2 {
                let sgn = if j % 2 == 0 { int(1) } else { int(-1) };
                e += &power_form(&b, j).wedge(&power_form(w, j)).scale(&(sgn / factorial(j)));
            }
            let expect = ScalarPair::new(e.clone(), b.d().wedge(&e)).unwrap();
            let ch = chern_character(&p).unwrap();
            if ch != expect {
                bad.push(format!("ch m={m} b={b}"));
            }
            if !boundary_partial(&ch, &omega).unwrap().is_zero() {
                bad.push(format!("ch not closed m={m}"));
            }
            checked += 1;
        }
    }
    let c = Chart::new(2).unwrap();
    let ch = chern_character(&scalar_b(2, &parse_form(c, "x1").unwrap())).unwrap();
    if ch.first != parse_form(c, "1 - x1*dx1^dx2").unwrap() || ch.second != parse_form(c, "dx1").unwrap() {
        bad.push("frozen m=2 example".into());
    }
    outcome(
        bad.is_empty(),
        format!("{checked} scalar b over m = 2,4,6, k = 1..3 and ch; mismatches: {bad:?}"),
    )
}

fn crosswalk(ss: &[Scenario]) -> Outcome {
    summarize(&run_suite(ss, &only(&[Check::Crosswalk])), "crosswalk")
}

/// `B_0..=B_n` from `Σ_{j<=n} C(n+1, j) B_j = 0`.
fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![int(1)];
    for k in 1..=n {
        let mut s = int(0);
        let mut binom = int(1);
        for (j, bj) in b.iter().enumerate() {
            s += &binom * bj;
            binom = binom * int((k + 1 - j) as i64) / int(j as i64 + 1);
        }
        b.push(-s / int(k as i64 + 1));
    }
    b
}

fn a_hat_criterion() -> Outcome {
    let g = a_hat_log_series(4).unwrap();
    let bern = bernoulli(4);
    let mut series_ok = true;
    for i in 0..=4 {
        let want = if i == 0 || i % 2 == 1 {
            int(0)
        } else {
            let n = i / 2;
            -bern[i].clone() / (int(4 * n as i64) * factorial(i))
        };
        series_ok &= g.coeff(i) == want;
    }
    series_ok &= g.coeff(2) == rat(-1, 48) && g.coeff(4) == rat(1, 5760);

    let mut count = 0;
    let mut nontrivial = 0;
    let mut bad = Vec::new();
    for m in [2, 4, 6] {
        for rp in [1, 2] {
            for seed in 0..3u64 {
                let mut o = GenOptions::new(m, (rp, 0), 500 + seed);
                o.shape = ThetaShape::Koszul;
                o.bounds = Bounds::new(2, 2, 3).unwrap();
                let s = gen_scenario(&o).unwrap().load().unwrap();
                let a = a_hat(&s.p0).unwrap();
                if degree_zero_part(&a) != Form::one(s.chart)
                    || !boundary_partial(&a, &s.omega).unwrap().is_zero()
                {
                    bad.push(s.id().to_string());
                }
                if a != ScalarPair::unit(s.chart) {
                    nontrivial += 1;
                }
                count += 1;
            }
        }
    }
    outcome(
        series_ok && bad.is_empty() && 2 * nontrivial >= count,
        format!(
            "series coefficients to z^4 {} the Bernoulli oracle; {count} Koszul scenarios ({nontrivial} with higher-degree terms), failures: {bad:?}",
            if series_ok { "match" } else { "DIFFER from" }
        ),
    )
}

fn parity<R: Rng>(r: &mut R) -> (Parity, usize) {
    if r.gen_bool(0.5) {
        (Parity::Even, 0)
    } else {
        (Parity::Odd, 1)
    }
}

fn sgn(n: usize) -> Rational {
    if n % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn structural() -> Outcome {
    const N: usize = 200;
    let mut rng = random::rng(4242);
    let b = Bounds::default();
    let mut fails = [0usize; 7];
    for i in 0..N {
        let c = Chart::new([2, 4, 6][i % 3]).unwrap();
        let e = SuperBundle::new([1, 1, 2][i % 3], [0, 1, 1][(i / 3) % 3]).unwrap();
        let omega = SymplecticForm::standard(c).unwrap();
        let (p, q) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let x = random::form_of_degree(&mut rng, c, p, &b);
        let y = random::form_of_degree(&mut rng, c, q, &b);
        let sp = ScalarPair::new(x.clone(), y.clone()).unwrap();
        fails[0] += !boundary_partial(&boundary_partial(&sp, &omega).unwrap(), &omega).unwrap().is_zero() as usize;
        fails[1] += !x.d().d().is_zero() as usize;
        fails[2] += (x.wedge(&y) != y.wedge(&x).scale(&sgn(p * q))) as usize;
        fails[3] += (x.wedge(&y).d() != &x.d().wedge(&y) + &x.wedge(&y.d()).scale(&sgn(p))) as usize;
        let a = SuperConn::new(random::endform(&mut rng, e, c, Parity::Odd, &b, true)).unwrap();
        let (ps, ns) = parity(&mut rng);
        let (pt, nt) = parity(&mut rng);
        let (pu, _) = parity(&mut rng);
        let s = random::endform(&mut rng, e, c, ps, &b, true);
        let t = random::endform(&mut rng, e, c, pt, &b, true);
        let u = random::endform(&mut rng, e, c, pu, &b, true);
        let lhs = covariant_bracket(&a, &s.mul(&t)).unwrap();
        let rhs = &covariant_bracket(&a, &s).unwrap().mul(&t)
            + &s.mul(&covariant_bracket(&a, &t).unwrap()).scale(&sgn(ns));
        fails[3] += (lhs != rhs) as usize;
        fails[4] += !(&s.mul(&t) - &t.mul(&s).scale(&sgn(ns * nt))).supertrace().is_zero() as usize;
        fails[5] += (s.mul(&t).mul(&u) != s.mul(&t.mul(&u))) as usize;
        let z = ScalarPair::new(random::form(&mut rng, c, &b), random::form(&mut rng, c, &b)).unwrap();
        let l = pair_product(&pair_product(&sp, &z).unwrap(), &sp).unwrap();
        let r = pair_product(&sp, &pair_product(&z, &sp).unwrap()).unwrap();
        fails[6] += (l != r) as usize;
    }
    let names = ["∂²", "d²", "graded commutativity", "Leibniz", "Str of supercommutator", "end_mul assoc", "pair product assoc"];
    let failed: Vec<_> = names.iter().zip(fails).filter(|(_, f)| *f > 0).collect();
    outcome(failed.is_empty(), format!("{N} instances each of {}; failures: {failed:?}", names.join(", ")))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ss = scenarios();
    type Crit<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Crit> = vec![
        ("primitive Bianchi identity", Box::new(|| bianchi(&ss))),
        ("closedness of Str f(A^2)", Box::new(|| closedness(&ss))),
        ("transgression residual in t", Box::new(|| families(&ss, Check::Transgression))),
        ("endpoint difference is exact", Box::new(|| families(&ss, Check::Corollary))),
        ("operator oracle and mutation", Box::new(|| oracle(&ss))),
        ("Str of pair commutator", Box::new(|| str_bracket(&ss))),
        ("rank-(1,0) closed forms", Box::new(rank_one)),
        ("circle crosswalk", Box::new(|| crosswalk(&ss))),
        ("A-hat genus", Box::new(a_hat_criterion)),
        ("structural invariants", Box::new(structural)),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        all &= o.ok;
        println!(
            "criterion {:>2} {} {:<32} {} [{:.1}s]",
            i + 1,
            if o.ok { "PASS" } else { "FAIL" },
            name,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} in {:.1}s",
        if all { "all criteria pass" } else { "FAILURES" },
        start.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
