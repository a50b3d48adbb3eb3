//! Command-line front end. `run` returns the exit code and the report text
//! so that the binary and the tests share one code path.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{verify_algebra, AlgebraKind};
use crate::fock::{character, FockLayout, TruncatedSpace};
use crate::scalar::{parse_rational, rat};
use crate::series::Series;
use crate::suites::{self, AllConfig, Status, SuiteReport};
use crate::twisted::SigmaModule;

#[derive(Parser, Debug)]
#[command(name = "superfock", version, about = "Exact checks for free-field superconformal vertex algebras and their twisted modules")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomly sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Exit 0 even when some checks were skipped.
    #[arg(long, global = true)]
    pub allow_skip: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients of the exponential Δ_k operator.
    Delta {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        terms: usize,
        /// Check the functional equation through x^N.
        #[arg(long)]
        verify_order: Option<usize>,
    },
    #[command(subcommand)]
    Verify(Verify),
    #[command(subcommand)]
    Calibrate(Calibrate),
    /// Graded dimension of a truncated space.
    Character {
        #[arg(long, value_enum)]
        space: SpaceArg,
        /// Weight truncation W as p/q; states of weight < W are kept.
        #[arg(long)]
        trunc: String,
        /// Also list the basis, one state per line.
        #[arg(long)]
        dump: bool,
    },
    /// dim_q M_σ against dim_{q²} M_κ̃ through q^T.
    Corollary2 {
        #[arg(long, default_value_t = 3)]
        trunc: i64,
    },
    /// Every suite in dependency order.
    All(AllArgs),
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Super-skew-symmetry and super-Jacobi on a bracket window.
    Algebra {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 4)]
        window: i64,
    },
    /// The free-field VOSA and its tensor square.
    Vosa {
        #[arg(long, default_value_t = 4)]
        max_weight: i64,
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// The σ-twisted and mirror-twisted modules.
    Twisted {
        #[arg(long, default_value_t = 2)]
        window: i64,
        #[arg(long, default_value_t = 2)]
        max_weight: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum Calibrate {
    /// Solve for the N=2 generator normalisations on V⊗V.
    N2 {
        #[arg(long, default_value_t = 2)]
        window: i64,
        #[arg(long, default_value_t = 2)]
        max_weight: i64,
    },
}

#[derive(Args, Debug)]
pub struct AllArgs {
    #[arg(long, default_value_t = 2)]
    pub max_weight: i64,
    #[arg(long, default_value_t = 2)]
    pub window: i64,
    #[arg(long, default_value_t = 3)]
    pub trunc: i64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SpaceArg {
    Vosa,
    NsFermion,
    Ramond,
    Twisted,
}

impl SpaceArg {
    fn name(self) -> &'static str {
        match self {
            SpaceArg::Vosa => "vosa",
            SpaceArg::NsFermion => "ns-fermion",
            SpaceArg::Ramond => "ramond",
            SpaceArg::Twisted => "twisted",
        }
    }
}

pub struct Outcome {
    pub code: i32,
    pub output: String,
}

fn config_error(msg: impl std::fmt::Display) -> Outcome {
    Outcome {
        code: 2,
        output: format!("error: {msg}\n"),
    }
}

fn positive(name: &str, v: i64) -> Result<(), Outcome> {
    if v > 0 {
        Ok(())
    } else {
        Err(config_error(format!("--{name} must be positive")))
    }
}

fn render(json_mode: bool, body: Value, text: String) -> String {
    if json_mode {
        let mut obj = json!({ "schema": 1 });
        if let (Value::Object(dst), Value::Object(src)) = (&mut obj, body) {
            dst.extend(src);
        }
        let mut s = serde_json::to_string_pretty(&obj).expect("json");
        s.push('\n');
        s
    } else {
        text
    }
}

fn suites_text(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        for c in &r.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            out.push_str(&format!("{tag} {}: {}\n", r.suite, c.name));
        }
    }
    out.push_str("summary\n");
    for r in reports {
        out.push_str(&format!(
            "  {}: {} passed, {} failed, {} skipped\n",
            r.suite,
            r.count(Status::Pass),
            r.count(Status::Fail),
            r.count(Status::Skip)
        ));
    }
    out
}

fn summary_json(reports: &[SuiteReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "suite": r.suite,
                    "passed": r.count(Status::Pass),
                    "failed": r.count(Status::Fail),
                    "skipped": r.count(Status::Skip),
                })
            })
            .collect(),
    )
}

fn suites_code(reports: &[SuiteReport], allow_skip: bool) -> i32 {
    let skipped_fail = suites::skipped(reports) > 0 && !allow_skip;
    i32::from(!suites::all_pass(reports) || skipped_fail)
}

fn suites_outcome(cli: &Cli, reports: Vec<SuiteReport>, extra: Value) -> Outcome {
    let mut body = json!({
        "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
        "summary": summary_json(&reports),
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut body, extra) {
        dst.extend(src);
    }
    Outcome {
        code: suites_code(&reports, cli.allow_skip),
        output: render(cli.json, body, suites_text(&reports)),
    }
}

fn series_text(s: &Series) -> String {
    let terms: Vec<String> = s
        .terms()
        .iter()
        .map(|(e, c)| format!("({c}) {}^{e}", s.variable()))
        .collect();
    let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    format!("{body} + O({}^{})\n", s.variable(), s.truncation())
}

fn character_of(space: SpaceArg, w: &BigRational) -> Result<(Series, String), String> {
    match space {
        SpaceArg::Vosa => suites::untwisted_character(
            FockLayout::vosa(),
            &[(1, 2, "a(-1)a(-1)|0>"), (1, 2, "psi(-3/2)psi(-1/2)|0>")],
            rat(3, 2),
            w.clone(),
        ),
        SpaceArg::NsFermion => {
            let space = TruncatedSpace::new(FockLayout::fermion_ns(), BigRational::zero(), w.clone());
            graded_character(&space, rat(1, 2))
        }
        SpaceArg::Ramond => {
            // the offset is the fermion share of the σ-twisted ground weight
            let sigma = SigmaModule::new(0).map_err(|e| e.to_string())?;
            let offset = sigma.ground_split().1;
            let offset = offset.as_rational().cloned().ok_or("irrational ground weight")?;
            let space = TruncatedSpace::new(FockLayout::fermion_r(), offset, w.clone());
            graded_character(&space, rat(1, 2))
        }
        SpaceArg::Twisted => {
            let ground = SigmaModule::new(0).map_err(|e| e.to_string())?.ground_weight().clone();
            let above = w - &ground;
            if !above.is_positive() {
                let series = Series::zero(crate::series::Variable::Q, crate::series::FracExp::int(0));
                return Ok((series, String::new()));
            }
            // keep σ-levels ℓ with ground + ℓ < W
            let levels = (above.ceil().to_integer().try_into().unwrap_or(i64::MAX) - 1).max(0);
            let module = suites::build_module(levels, None)?;
            let series = module.character().map_err(|e| e.to_string())?;
            Ok((series, module.space().dump()))
        }
    }
}

/// Fock spaces graded by their own weight, `L(0) = weight`.
fn graded_character(space: &TruncatedSpace, c: BigRational) -> Result<(Series, String), String> {
    let l0 = |m: &crate::fock::Monomial| {
        crate::fock::FockVector::term(m.clone(), crate::scalar::ExactScalar::from_rational(space.weight(m)))
    };
    let shift = -(c / rat(24, 1));
    let series = character(space, &shift, &l0, &rat(1, 1)).map_err(|e| e.to_string())?;
    Ok((series, space.dump()))
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Delta { k, terms, verify_order } => {
            if *k < 1 {
                return config_error("--k must be positive");
            }
            if let Err(o) = positive("terms", *terms as i64) {
                return o;
            }
            match suites::delta_json(*k, *terms, *verify_order) {
                Ok(body) => {
                    let ok = body["residual"].is_null() || body["residual"]["terms"].as_array().is_some_and(|t| t.is_empty());
                    let mut text = format!("k = {k}\n");
                    for (j, a) in body["a"].as_array().into_iter().flatten().enumerate() {
                        text.push_str(&format!("a_{} = {}\n", j + 1, a.as_str().unwrap_or("")));
                    }
                    if let Some(order) = verify_order {
                        text.push_str(&format!(
                            "residual through x^{order}: {}\n",
                            if ok { "zero" } else { "nonzero" }
                        ));
                    }
                    Outcome {
                        code: if ok { 0 } else { 1 },
                        output: render(cli.json, body, text),
                    }
                }
                Err(e) => config_error(e),
            }
        }
        Command::Verify(Verify::Algebra { name, window }) => {
            let Some(kind) = AlgebraKind::parse(name) else {
                let names: Vec<&str> = AlgebraKind::ALL.iter().map(|k| k.as_str()).collect();
                return config_error(format!("unknown algebra {name:?}; expected one of {}", names.join(", ")));
            };
            if *window < 0 {
                return config_error("--window must be non-negative");
            }
            let r = verify_algebra(&kind, *window);
            let text = format!(
                "{} window {}: {} triples checked, {} violations\n{}\n",
                r.algebra,
                r.window,
                r.checked,
                r.violations.len(),
                if r.passed() { "PASS" } else { "FAIL" }
            );
            Outcome {
                code: if r.passed() { 0 } else { 1 },
                output: render(cli.json, r.to_json(), text),
            }
        }
        Command::Verify(Verify::Vosa { max_weight, window }) => {
            if let Err(o) = positive("max-weight", *max_weight).and(positive("window", *window)) {
                return o;
            }
            let r = suites::suite_vosa(*window, 2 * max_weight, cli.seed);
            suites_outcome(cli, vec![r], json!({}))
        }
        Command::Verify(Verify::Twisted { window, max_weight }) => {
            if let Err(o) = positive("max-weight", *max_weight).and(positive("window", *window)) {
                return o;
            }
            let sigma = suites::suite_sigma(*window, *max_weight);
            let mirror = suites::suite_mirror_twisted(*window, 2 * max_weight, None);
            let (c2, body) = suites::suite_corollary2(2 * max_weight);
            let characters = body.unwrap_or(Value::Null);
            suites_outcome(cli, vec![sigma, mirror, c2], json!({ "characters": characters }))
        }
        Command::Calibrate(Calibrate::N2 { window, max_weight }) => {
            if let Err(o) = positive("max-weight", *max_weight).and(positive("window", *window)) {
                return o;
            }
            let (r, cal) = suites::suite_calibration(*window, 2 * max_weight);
            let body = json!({ "calibration": cal.map(|c| c.to_json()) });
            suites_outcome(cli, vec![r], body)
        }
        Command::Character { space, trunc, dump } => {
            let w = match parse_rational(trunc) {
                Ok(w) if !w.is_negative() => w,
                Ok(_) => return config_error("--trunc must be non-negative"),
                Err(e) => return config_error(e),
            };
            match character_of(*space, &w) {
                Ok((series, basis)) => {
                    let mut body = json!({
                        "space": space.name(),
                        "truncation": w.to_string(),
                        "series": series.to_json(),
                    });
                    let mut text = series_text(&series);
                    if *dump {
                        body["basis"] = json!(basis.lines().collect::<Vec<_>>());
                        text.push_str(&basis);
                    }
                    Outcome {
                        code: 0,
                        output: render(cli.json, body, text),
                    }
                }
                Err(e) => Outcome {
                    code: 1,
                    output: format!("error: {e}\n"),
                },
            }
        }
        Command::Corollary2 { trunc } => {
            if let Err(o) = positive("trunc", *trunc) {
                return o;
            }
            let (r, body) = suites::suite_corollary2(*trunc);
            suites_outcome(cli, vec![r], json!({ "characters": body.unwrap_or(Value::Null) }))
        }
        Command::All(a) => {
            if let Err(o) = positive("max-weight", a.max_weight)
                .and(positive("window", a.window))
                .and(positive("trunc", a.trunc))
            {
                return o;
            }
            let cfg = AllConfig {
                window: a.window,
                max_weight: a.max_weight,
                trunc: a.trunc,
                seed: cli.seed,
            };
            let reports = suites::run_all(cfg);
            suites_outcome(cli, reports, json!({ "config": cfg }))
        }
    }
}

/// Parse `args` (including the program name) and run. Help and version
/// requests exit 0; any other parse failure is a configuration error.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            Outcome {
                code,
                output: e.render().to_string(),
            }
        }
    }
}

/// Cap the worker pool from `SUPERFOCK_THREADS`, if set.
pub fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SUPERFOCK_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("SUPERFOCK_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}
