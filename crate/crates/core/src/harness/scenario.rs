//! Scenario files: JSON descriptions of a primitive superconnection (and an
//! optional second endpoint) together with the test polynomial `f`.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coefficients::Rational;
use crate::endforms::{EndForm, SuperBundle, SuperConn};
use crate::error::{Error, Result};
use crate::forms::{Chart, SymplecticForm};
use crate::primitive::PrimSuperConn;
use crate::random::{self, Bounds, ThetaShape};
use crate::syntax::parse_form;

pub const SCHEMA_VERSION: u32 = 1;

/// One `(row, col, form)` entry, 1-based, with `E⁺` indices first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoint {
    pub theta: Vec<Entry>,
    pub b: Vec<Entry>,
}

/// The on-disk form of a scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub schema: u32,
    pub id: String,
    pub m: usize,
    pub ranks: [usize; 2],
    /// `"standard"` or an explicit closed 2-form.
    pub omega: String,
    #[serde(default)]
    pub koszul: bool,
    pub theta: Vec<Entry>,
    pub b: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<Endpoint>,
    /// Coefficients `f_0, f_1, ...` as rationals `p/q`.
    pub f: Vec<String>,
    pub seed: u64,
    pub max_k: usize,
    pub truncation: usize,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub chart: Chart,
    pub bundle: SuperBundle,
    pub omega: SymplecticForm,
    pub p0: PrimSuperConn,
    pub p1: Option<PrimSuperConn>,
    pub f: Vec<Rational>,
}

fn ctx(what: &str, e: Error) -> Error {
    Error::Scenario(format!("{what}: {e}"))
}

fn endform(bundle: SuperBundle, chart: Chart, entries: &[Entry], what: &str) -> Result<EndForm> {
    let mut out = EndForm::zero(bundle, chart);
    for (i, e) in entries.iter().enumerate() {
        if e.row == 0 || e.col == 0 {
            return Err(Error::Scenario(format!("{what} entry {i}: indices are 1-based")));
        }
        let f = parse_form(chart, &e.form).map_err(|err| ctx(&format!("{what} entry {i}"), err))?;
        out += &EndForm::entry(bundle, e.row - 1, e.col - 1, &f)
            .map_err(|err| ctx(&format!("{what} entry {i}"), err))?;
    }
    Ok(out)
}

fn entries(e: &EndForm) -> Vec<Entry> {
    e.entries()
        .into_iter()
        .map(|(r, c, f)| Entry {
            row: r + 1,
            col: c + 1,
            form: f.to_string(),
        })
        .collect()
}

fn prim(
    bundle: SuperBundle,
    chart: Chart,
    omega: &SymplecticForm,
    theta: &[Entry],
    b: &[Entry],
    koszul: bool,
    what: &str,
) -> Result<PrimSuperConn> {
    let theta = endform(bundle, chart, theta, &format!("{what} theta"))?;
    let b = endform(bundle, chart, b, &format!("{what} b"))?;
    let conn = if koszul {
        SuperConn::koszul(theta)
    } else {
        SuperConn::new(theta)
    }
    .map_err(|e| ctx(what, e))?;
    PrimSuperConn::new(conn, b, omega.clone()).map_err(|e| ctx(what, e))
}

impl ScenarioFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validates every field and builds the algebraic objects.
    pub fn load(self) -> Result<Scenario> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Scenario(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        let chart = Chart::new(self.m).map_err(|e| ctx("m", e))?;
        let bundle = SuperBundle::new(self.ranks[0], self.ranks[1]).map_err(|e| ctx("ranks", e))?;
        let omega = if self.omega.trim() == "standard" {
            SymplecticForm::standard(chart)
        } else {
            parse_form(chart, &self.omega).and_then(SymplecticForm::new)
        }
        .map_err(|e| ctx("omega", e))?;
        let p0 = prim(bundle, chart, &omega, &self.theta, &self.b, self.koszul, "scenario")?;
        let p1 = match &self.endpoint {
            Some(ep) => Some(prim(bundle, chart, &omega, &ep.theta, &ep.b, self.koszul, "endpoint")?),
            None => None,
        };
        let f = parse_coeffs(&self.f)?;
        if self.max_k == 0 {
            return Err(Error::Scenario("max_k must be at least 1".into()));
        }
        if self.truncation == 0 {
            return Err(Error::Scenario("truncation must be at least 1".into()));
        }
        Ok(Scenario {
            file: self,
            chart,
            bundle,
            omega,
            p0,
            p1,
            f,
        })
    }
}

/// Parses rationals written as `p/q` or integers.
pub fn parse_coeffs<S: AsRef<str>>(items: &[S]) -> Result<Vec<Rational>> {
    items
        .iter()
        .map(|s| {
            Rational::from_str(s.as_ref().trim())
                .map_err(|_| Error::Scenario(format!("bad rational coefficient {:?}", s.as_ref())))
        })
        .collect()
}

pub fn format_coeffs(f: &[Rational]) -> String {
    let parts: Vec<String> = f.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

impl Scenario {
    pub fn id(&self) -> &str {
        &self.file.id
    }

    pub fn read(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        ScenarioFile::from_json(&text)?.load()
    }
}

/// Parameters of [`gen_scenario`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenOptions {
    pub m: usize,
    pub ranks: (usize, usize),
    pub bounds: Bounds,
    pub seed: u64,
    pub shape: ThetaShape,
    pub endpoint: bool,
    pub max_k: usize,
}

impl GenOptions {
    pub fn new(m: usize, ranks: (usize, usize), seed: u64) -> Self {
        GenOptions {
            m,
            ranks,
            bounds: Bounds::default(),
            seed,
            shape: ThetaShape::General,
            endpoint: false,
            max_k: 3,
        }
    }
}

pub fn shape_name(s: ThetaShape) -> &'static str {
    match s {
        ThetaShape::General => "general",
        ThetaShape::Nilpotent => "nilpotent",
        ThetaShape::Koszul => "koszul",
    }
}

pub fn parse_shape(s: &str) -> Result<ThetaShape> {
    match s {
        "general" => Ok(ThetaShape::General),
        "nilpotent" => Ok(ThetaShape::Nilpotent),
        "koszul" => Ok(ThetaShape::Koszul),
        _ => Err(Error::InvalidBounds(format!(
            "unknown shape {s:?} (expected general, nilpotent or koszul)"
        ))),
    }
}

/// A reproducible random scenario with the standard symplectic form.
pub fn gen_scenario(opts: &GenOptions) -> Result<ScenarioFile> {
    if opts.m % 2 == 1 {
        return Err(Error::InvalidBounds(format!(
            "m = {} is odd; generated scenarios use the standard symplectic form",
            opts.m
        )));
    }
    if opts.max_k == 0 {
        return Err(Error::InvalidBounds("max_k must be at least 1".into()));
    }
    let chart = Chart::new(opts.m).map_err(|e| Error::InvalidBounds(e.to_string()))?;
    let bundle = SuperBundle::new(opts.ranks.0, opts.ranks.1)
        .map_err(|e| Error::InvalidBounds(e.to_string()))?;
    Bounds::new(opts.bounds.max_poly_deg, opts.bounds.max_form_deg, opts.bounds.max_terms)?;
    let omega = SymplecticForm::standard(chart)?;
    let mut rng = random::rng(opts.seed);
    let p0 = random::prim_superconn(&mut rng, bundle, chart, &omega, opts.shape, &opts.bounds)?;
    let endpoint = if opts.endpoint {
        let p1 = random::prim_superconn(&mut rng, bundle, chart, &omega, opts.shape, &opts.bounds)?;
        Some(Endpoint {
            theta: entries(p1.theta()),
            b: entries(p1.b()),
        })
    } else {
        None
    };
    let f = random::poly_coeffs(&mut rng, 3);
    Ok(ScenarioFile {
        schema: SCHEMA_VERSION,
        id: format!(
            "m{}-r{}{}-{}-s{}",
            opts.m,
            opts.ranks.0,
            opts.ranks.1,
            shape_name(opts.shape),
            opts.seed
        ),
        m: opts.m,
        ranks: [opts.ranks.0, opts.ranks.1],
        omega: "standard".into(),
        koszul: opts.shape == ThetaShape::Koszul,
        theta: entries(p0.theta()),
        b: entries(p0.b()),
        endpoint,
        f: f.iter().map(ToString::to_string).collect(),
        seed: opts.seed,
        max_k: opts.max_k,
        truncation: opts.m / 2 + 1,
    })
}
