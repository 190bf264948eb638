use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use primcw::harness::scenario::{parse_coeffs, parse_shape};
use primcw::harness::{gen_scenario, run_suite, Check, GenOptions, Report, Scenario, SuiteOptions};
use primcw::primitive::{a_hat_with_order, chern_character};
use primcw::random::Bounds;
use primcw::{Error, Result, ScalarPair};

#[derive(Parser)]
#[command(name = "primcw", version, about = "Exact checks for primitive superconnections")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Scenario file (repeatable for `verify`).
    #[arg(long)]
    scenario: Vec<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_k: Option<usize>,
    /// Coefficients of f, lowest degree first, e.g. `0,1,1/2`.
    #[arg(long)]
    f: Option<String>,
    /// Comma list of checks, or `all`.
    #[arg(long)]
    checks: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random scenario.
    Gen {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// `r+,r-`
        #[arg(long, default_value = "1,0")]
        ranks: String,
        #[arg(long, default_value_t = 2)]
        max_poly_deg: u32,
        #[arg(long, default_value_t = 2)]
        max_form_deg: usize,
        #[arg(long, default_value_t = 2)]
        max_terms: usize,
        /// general, nilpotent or koszul
        #[arg(long, default_value = "general")]
        shape: String,
        /// Also generate a second endpoint for the transgression checks.
        #[arg(long)]
        endpoint: bool,
    },
    /// Run checks and write a JSON-lines report.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Drop the Koszul sign in composition, to confirm the checks notice.
        #[arg(long)]
        mutate_sign: bool,
        /// Write wall_ms as 0.
        #[arg(long)]
        no_timing: bool,
    },
    /// Print the Chern character pair.
    Ch {
        #[command(flatten)]
        common: Common,
    },
    /// Print the Â pair.
    Ahat {
        #[command(flatten)]
        common: Common,
    },
    /// Run the circle-model comparison only.
    Crosswalk {
        #[command(flatten)]
        common: Common,
    },
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(common: &Common) -> Result<Vec<Scenario>> {
    if common.scenario.is_empty() {
        return Err(Error::Scenario("no --scenario given".into()));
    }
    common.scenario.iter().map(|p| Scenario::read(p)).collect()
}

fn single(common: &Common) -> Result<Scenario> {
    let mut v = load(common)?;
    if v.len() != 1 {
        return Err(Error::Scenario("expected exactly one --scenario".into()));
    }
    Ok(v.remove(0))
}

fn suite_options(common: &Common, default_checks: Vec<Check>) -> Result<SuiteOptions> {
    let checks = match &common.checks {
        Some(s) => Check::parse_list(s)?,
        None => default_checks,
    };
    let f = match &common.f {
        Some(s) => Some(parse_coeffs(&s.split(',').collect::<Vec<_>>())?),
        None => None,
    };
    Ok(SuiteOptions {
        checks,
        seed: common.seed,
        max_k: common.max_k,
        f,
        ..SuiteOptions::default()
    })
}

fn pair_json(id: &str, what: &str, p: &ScalarPair) -> String {
    let v = serde_json::json!({
        "scenario": id,
        "class": what,
        "first": p.first.to_string(),
        "second": p.second.to_string(),
    });
    format!("{v}\n")
}

fn verify(opts: &SuiteOptions, common: &Common) -> Result<bool> {
    let scenarios = load(common)?;
    let report: Report = run_suite(&scenarios, opts);
    write_out(common.out.as_deref(), &report.to_jsonl())?;
    Ok(report.ok())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen {
            common,
            m,
            ranks,
            max_poly_deg,
            max_form_deg,
            max_terms,
            shape,
            endpoint,
        } => {
            let r: Vec<usize> = ranks
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidBounds(format!("bad ranks {ranks:?}")))?;
            let [rp, rm] = r[..] else {
                return Err(Error::InvalidBounds(format!("ranks must be `r+,r-`, got {ranks:?}")));
            };
            let mut o = GenOptions::new(m, (rp, rm), common.seed.unwrap_or(0));
            o.bounds = Bounds::new(max_poly_deg, max_form_deg, max_terms)?;
            o.shape = parse_shape(&shape)?;
            o.endpoint = endpoint;
            if let Some(k) = common.max_k {
                o.max_k = k;
            }
            let mut file = gen_scenario(&o)?;
            if let Some(f) = &common.f {
                let coeffs = parse_coeffs(&f.split(',').collect::<Vec<_>>())?;
                file.f = coeffs.iter().map(ToString::to_string).collect();
            }
            write_out(common.out.as_deref(), &file.to_json())?;
            Ok(true)
        }
        Cmd::Verify {
            common,
            samples,
            mutate_sign,
            no_timing,
        } => {
            let mut opts = suite_options(&common, Check::ALL.to_vec())?;
            opts.samples = samples;
            opts.mutate_sign = mutate_sign;
            opts.timing = !no_timing;
            verify(&opts, &common)
        }
        Cmd::Crosswalk { common } => {
            let opts = suite_options(&common, vec![Check::Crosswalk])?;
            verify(&opts, &common)
        }
        Cmd::Ch { common } => {
            let s = single(&common)?;
            let ch = chern_character(&s.p0)?;
            write_out(common.out.as_deref(), &pair_json(s.id(), "ch", &ch))?;
            Ok(true)
        }
        Cmd::Ahat { common } => {
            let s = single(&common)?;
            let a = a_hat_with_order(&s.p0, s.file.truncation)?;
            write_out(common.out.as_deref(), &pair_json(s.id(), "ahat", &a))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("primcw: {e}");
            ExitCode::from(2)
        }
    }
}
