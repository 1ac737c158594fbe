use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value as Json};

use mwf_core::acceptance::{self, SuiteConfig};
use mwf_core::distribution::Distribution;
use mwf_core::expr::{self, range_enumerate, Value, Domain, ExtInt, Sort};
use mwf_core::io::{field_text, parse_field, Config, Coords, DistJson, Queries, QueryJson, SbJson, ValueJson};
use mwf_core::microlocal::{ss_test, wf_test, LambdaGroup, SsParams, WfParams};
use mwf_core::schwartz::SbFunction;
use mwf_core::{oracle, random, Error, FieldElement, LocalField};

#[derive(Parser)]
#[command(name = "mwf", version, about = "Motivic Fourier analysis and wave front sets over F_q((t))")]
struct Cli {
    /// config file or inline JSON
    #[arg(long, global = true)]
    config: Option<String>,
    /// shorthand for a config with q = p^f and default modulus
    #[arg(long, global = true)]
    q: Option<u32>,
    /// compare results against brute-force character sums at L = q
    #[arg(long, global = true)]
    oracle: bool,
    /// sweep depth K
    #[arg(long, global = true)]
    depth: Option<i64>,
    /// enumeration budget
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// also write the JSON report here
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct One {
    /// Schwartz-Bruhat function: JSON text or a path
    #[arg(long)]
    input: String,
}

#[derive(Args)]
struct Two {
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fourier transform of a Schwartz-Bruhat function
    Fourier {
        #[command(flatten)]
        one: One,
        #[arg(long)]
        inverse: bool,
    },
    /// Convolution of two Schwartz-Bruhat functions
    Convolve(Two),
    /// Integral over K^m
    Integrate(One),
    /// Pointwise product
    Multiply(Two),
    /// Evaluate an expression, or a distribution on test functions
    Eval {
        #[arg(long, conflicts_with = "dist")]
        expr: Option<String>,
        /// variable binding var=value
        #[arg(long = "at")]
        at: Vec<String>,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long, requires = "dist")]
        sb: Option<String>,
        #[arg(long, requires = "dist")]
        query: Option<String>,
    },
    /// Wave front test at a point and covector
    WfTest {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        covector: String,
        #[arg(long, default_value_t = 0)]
        r: i64,
        /// Λ_n; defaults to the config value
        #[arg(long)]
        n: Option<u32>,
    },
    /// Singular support test at a point
    SsTest {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 0)]
        r: i64,
    },
    /// Pull a distribution back along a polynomial map and query it
    Pullback {
        #[arg(long)]
        dist: String,
        /// map components, comma separated
        #[arg(long, value_delimiter = ',')]
        map: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(long)]
        query: String,
    },
    /// Tensor product of two distributions, queried
    Tensor {
        #[command(flatten)]
        two: Two,
        #[arg(long)]
        query: String,
    },
    /// Product of two distributions through the diagonal, queried
    Product {
        #[command(flatten)]
        two: Two,
        #[arg(long)]
        query: String,
    },
    /// Compare the closed-form Fourier transform with character sums
    OracleCompare {
        #[command(flatten)]
        one: One,
        /// scale the first transform coefficient by L before comparing
        #[arg(long)]
        corrupt: bool,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Run the acceptance suite
    Selftest {
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
    /// Parse and sort-check an expression, optionally enumerating its range
    ParseCheck {
        #[arg(long)]
        expr: String,
        /// enumerate the integer range over a ball in the free field variables
        #[arg(long)]
        range: bool,
        #[arg(long)]
        center: Option<String>,
        #[arg(long, default_value_t = 0)]
        radius: i64,
        #[arg(long)]
        filter: Option<String>,
    },
}

enum Failure {
    Core(Error),
    Json(String),
    Io(String),
    Mismatch(Json),
    Suite(Json),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Out = Result<Json, Failure>;

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::Parse { .. } => ("parse", 2),
        Error::Sort(_) => ("sort", 2),
        Error::NonPolynomial(_) => ("non-polynomial", 2),
        Error::InvalidInput(_) => ("invalid-input", 2),
        Error::MismatchedDimension(..) => ("mismatched-dimension", 2),
        Error::MismatchedPrime(..) => ("mismatched-prime", 2),
        Error::Precondition(_) => ("precondition", 2),
        Error::Budget { .. } => ("budget", 3),
        Error::PrecisionExhausted(_) => ("precision-exhausted", 1),
        Error::VanishingDenominator(_) => ("vanishing-denominator", 1),
        Error::Unstable { .. } => ("unstable", 1),
        Error::DataViolation { .. } => ("data-violation", 1),
        Error::Eval(_) => ("eval", 1),
    }
}

/// Inline JSON if it looks like JSON, else a file path.
fn load<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Io(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Json(format!("{arg}: {e}")))
}

fn sb(k: &LocalField, arg: &str) -> Result<SbFunction, Failure> {
    Ok(load::<SbJson>(arg)?.to_sb(k)?)
}

fn sb_json(k: &LocalField, phi: &SbFunction) -> Json {
    serde_json::to_value(SbJson::from_sb(k, phi)).expect("serializable")
}

fn value(k: &LocalField, v: &mwf_core::MotivicScalar) -> Result<Json, Failure> {
    Ok(serde_json::to_value(ValueJson::new(k, v)?).expect("serializable"))
}

/// A point as JSON (`"t"`, `["1", "t"]`) or as bare field text.
fn point(k: &LocalField, arg: &str) -> Result<Vec<FieldElement>, Failure> {
    let t = arg.trim_start();
    if t.starts_with('"') || (t.starts_with('[') && serde_json::from_str::<Coords>(arg).is_ok()) {
        return Ok(load::<Coords>(arg)?.parse(k)?);
    }
    Ok(vec![parse_field(k, arg)?])
}

fn dist(k: &LocalField, arg: &str, seed: u64) -> Result<Distribution, Failure> {
    Ok(load::<DistJson>(arg)?.build(k, seed)?)
}

fn query_values(k: &LocalField, u: &Distribution, arg: &str) -> Out {
    let mut rows = Vec::new();
    for q in load::<Queries>(arg)?.to_queries(k)? {
        rows.push(json!({
            "query": QueryJson::from_query(k, &q),
            "value": value(k, &u.query(k, &q)?)?,
        }));
    }
    Ok(json!({ "kind": u.kind_name(), "dim": u.dim(), "values": rows }))
}

fn sample_points(k: &LocalField, phi: &SbFunction, seed: u64, count: usize) -> Vec<Vec<FieldElement>> {
    let mut rng = random::rng(seed);
    let lo = phi.support_bound().min(0) - 1;
    let hi = phi.constancy_bound().max(0) + 1;
    let mut pts: Vec<Vec<FieldElement>> = phi.terms().iter().map(|t| t.center.clone()).collect();
    pts.extend((0..count).map(|_| random::vector(k, &mut rng, phi.dim(), lo, hi)));
    pts
}

fn transform_points(k: &LocalField, phi: &SbFunction, f: &SbFunction, seed: u64, count: usize) -> Vec<Vec<FieldElement>> {
    let mut rng = random::rng(seed);
    let lo = f.support_bound().min(0) - 1;
    let hi = (1 - phi.support_bound()).max(0) + 1;
    let mut ys: Vec<Vec<FieldElement>> = f.terms().iter().map(|t| t.center.clone()).collect();
    ys.extend((0..count).map(|_| random::vector(k, &mut rng, phi.dim(), lo, hi)));
    ys
}

fn fourier_oracle(k: &LocalField, phi: &SbFunction, f: &SbFunction, seed: u64, count: usize) -> Out {
    let ys = transform_points(k, phi, f, seed, count);
    let report = match oracle::compare_fourier(k, phi, f, &ys)? {
        None => json!({ "agree": true, "points": ys.len() }),
        Some((y, sym, brute)) => json!({
            "agree": false,
            "points": ys.len(),
            "at": k.format_vec(&y),
            "closed_form": sym.to_string(),
            "brute_force": brute.to_string(),
        }),
    };
    Ok(report)
}

fn with_oracle(mut out: Json, report: Json) -> Out {
    let agree = report["agree"].as_bool() == Some(true);
    out["oracle"] = report;
    if agree {
        Ok(out)
    } else {
        Err(Failure::Mismatch(out))
    }
}

fn config(cli: &Cli) -> Result<Config, Failure> {
    let mut c = match (&cli.config, cli.q) {
        (Some(path), _) => load::<Config>(path)?,
        (None, Some(q)) => {
            let (p, f) = prime_power(q).ok_or_else(|| Error::invalid(format!("q = {q} is not a prime power")))?;
            Config { p, f, ..Config::default() }
        }
        (None, None) => Config::default(),
    };
    if let Some(d) = cli.depth {
        c.depth = d;
    }
    if let Some(b) = cli.budget {
        c.budget = b;
    }
    Ok(c)
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut f = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        f += 1;
    }
    (r == 1).then_some((p, f))
}

fn bind(k: &LocalField, e: &expr::Expr, at: &[String]) -> Result<BTreeMap<String, Value>, Failure> {
    let mut env = BTreeMap::new();
    for a in at {
        let (name, text) = a
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("binding `{a}` is not var=value")))?;
        let name = name.trim();
        let sort = e
            .vars
            .get(name)
            .ok_or_else(|| Error::invalid(format!("`{name}` is not a free variable")))?;
        let v = match sort {
            Sort::Field => Value::Field(parse_field(k, text)?),
            Sort::Residue => Value::Residue(k.residue().parse(text)?),
            Sort::Int => Value::Int(match text.trim() {
                "inf" | "+inf" => ExtInt::Inf,
                s => ExtInt::Fin(s.parse().map_err(|_| Error::invalid(format!("`{s}` is not an integer")))?),
            }),
            Sort::Bool => Value::Bool(text.trim().parse().map_err(|_| Error::invalid(format!("`{text}` is not a boolean")))?),
        };
        env.insert(name.to_string(), v);
    }
    if let Some(missing) = e.vars.keys().find(|v| !env.contains_key(*v)) {
        return Err(Error::invalid(format!("no value for `{missing}`")).into());
    }
    Ok(env)
}

fn run(cli: &Cli) -> Out {
    let cfg = config(cli)?;
    let k = cfg.field()?;
    let seed = cfg.seed;
    match &cli.cmd {
        Cmd::Fourier { one, inverse } => {
            let phi = sb(&k, &one.input)?;
            let f = if *inverse { phi.fourier_inverse(&k)? } else { phi.fourier(&k)? };
            let out = json!({ "result": sb_json(&k, &f) });
            if cli.oracle && !*inverse {
                return with_oracle(out, fourier_oracle(&k, &phi, &f, seed, 20)?);
            }
            Ok(out)
        }
        Cmd::Convolve(two) => {
            let (phi, psi) = (sb(&k, &two.left)?, sb(&k, &two.right)?);
            let c = phi.convolve(&k, &psi)?;
            let out = json!({ "result": sb_json(&k, &c) });
            if cli.oracle {
                let mut report = json!({ "agree": true });
                let pts = sample_points(&k, &c, seed, 10);
                for x in &pts {
                    let sym = c.evaluate(&k, x)?.eval_at_q(k.q() as u64)?;
                    let brute = oracle::convolution_at(&k, &phi, &psi, x)?;
                    if sym != brute {
                        report = json!({
                            "agree": false,
                            "at": k.format_vec(x),
                            "closed_form": sym.to_string(),
                            "brute_force": brute.to_string(),
                        });
                        break;
                    }
                }
                report["points"] = json!(pts.len());
                return with_oracle(out, report);
            }
            Ok(out)
        }
        Cmd::Integrate(one) => {
            let phi = sb(&k, &one.input)?;
            let v = phi.integrate();
            let out = json!({ "result": value(&k, &v)? });
            if cli.oracle {
                let zero = vec![FieldElement::zero(); phi.dim()];
                let brute = oracle::fourier_at(&k, &phi, &zero)?;
                let sym = v.eval_at_q(k.q() as u64)?;
                let report = json!({ "agree": sym == brute, "brute_force": brute.to_string() });
                return with_oracle(out, report);
            }
            Ok(out)
        }
        Cmd::Multiply(two) => {
            let (phi, psi) = (sb(&k, &two.left)?, sb(&k, &two.right)?);
            let prod = phi.multiply(&k, &psi)?;
            let out = json!({ "result": sb_json(&k, &prod) });
            if cli.oracle {
                let mut report = json!({ "agree": true });
                let q = k.q() as u64;
                let mut pts = sample_points(&k, &phi, seed, 10);
                pts.extend(sample_points(&k, &psi, seed ^ 1, 10));
                for x in &pts {
                    let sym = prod.evaluate(&k, x)?.eval_at_q(q)?;
                    let brute = phi.evaluate(&k, x)?.eval_at_q(q)?.mul(&psi.evaluate(&k, x)?.eval_at_q(q)?);
                    if sym != brute {
                        report = json!({ "agree": false, "at": k.format_vec(x) });
                        break;
                    }
                }
                report["points"] = json!(pts.len());
                return with_oracle(out, report);
            }
            Ok(out)
        }
        Cmd::Eval {
            expr: Some(text),
            at,
            ..
        } => {
            let e = expr::parse(text)?;
            let env = bind(&k, &e, at)?;
            let v = expr::eval(&k, &e.term, &env)?;
            let shown = match &v {
                Value::Field(x) => field_text(&k, x),
                other => other.format(&k),
            };
            Ok(json!({ "expr": e.to_string(), "sort": e.sort, "value": shown }))
        }
        Cmd::Eval {
            dist: Some(d),
            sb: test,
            query,
            ..
        } => {
            let u = dist(&k, d, seed)?;
            match (test, query) {
                (Some(t), None) => {
                    let phi = sb(&k, t)?;
                    Ok(json!({ "kind": u.kind_name(), "value": value(&k, &u.pair(&k, &phi)?)? }))
                }
                (None, Some(q)) => query_values(&k, &u, q),
                _ => Err(Error::invalid("give exactly one of --sb and --query").into()),
            }
        }
        Cmd::Eval { .. } => Err(Error::invalid("give --expr or --dist").into()),
        Cmd::WfTest {
            dist: d,
            point: x,
            covector,
            r,
            n,
        } => {
            let u = dist(&k, d, seed)?;
            let group = LambdaGroup::new(n.unwrap_or(cfg.n))?;
            let mut pr = WfParams::new(*r, group);
            pr.depth = cfg.depth;
            let cert = wf_test(&k, &u, &point(&k, x)?, &point(&k, covector)?, &pr)?;
            Ok(serde_json::to_value(cert).expect("serializable"))
        }
        Cmd::SsTest { dist: d, point: x, r } => {
            let u = dist(&k, d, seed)?;
            let mut pr = SsParams::new(*r);
            pr.depth = cfg.depth;
            pr.seed = seed;
            let x0 = point(&k, x)?;
            let rep = ss_test(&k, &u, &x0, &pr)?;
            Ok(json!({
                "point": k.format_vec(&x0),
                "r": r,
                "K": cfg.depth,
                "verdict": rep.verdict,
                "support": rep.support,
                "witness": rep.witness,
                "reconstruction": rep.reconstruction.as_ref().map(|f| sb_json(&k, f)),
            }))
        }
        Cmd::Pullback {
            dist: d,
            map,
            vars,
            query,
        } => {
            let desc = DistJson::Pullback {
                map: map.clone(),
                vars: vars.clone(),
                of: Box::new(load(d)?),
                data: Default::default(),
            };
            query_values(&k, &desc.build(&k, seed)?, query)
        }
        Cmd::Tensor { two, query } => {
            let desc = DistJson::Tensor {
                left: Box::new(load(&two.left)?),
                right: Box::new(load(&two.right)?),
                battery: 4,
            };
            query_values(&k, &desc.build(&k, seed)?, query)
        }
        Cmd::Product { two, query } => {
            let desc = DistJson::DiagonalProduct {
                left: Box::new(load(&two.left)?),
                right: Box::new(load(&two.right)?),
                data: Default::default(),
                battery: 4,
            };
            query_values(&k, &desc.build(&k, seed)?, query)
        }
        Cmd::OracleCompare { one, corrupt, samples } => {
            let phi = sb(&k, &one.input)?;
            let mut f = phi.fourier(&k)?;
            if *corrupt {
                f = oracle::corrupt(&k, &f)?;
            }
            let out = json!({ "transform": sb_json(&k, &f), "corrupted": corrupt });
            with_oracle(out, fourier_oracle(&k, &phi, &f, seed, *samples)?)
        }
        Cmd::Selftest { only } => {
            let mut sc = SuiteConfig::new(k.clone());
            sc.seed = seed;
            let reports = if only.is_empty() {
                acceptance::run_all(&sc)
            } else {
                only.iter()
                    .map(|&id| acceptance::run_one(&sc, id))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let passed = reports.iter().all(|r| r.passed);
            let out = json!({ "q": k.q(), "passed": passed, "criteria": reports });
            if passed {
                Ok(out)
            } else {
                Err(Failure::Suite(out))
            }
        }
        Cmd::ParseCheck {
            expr: text,
            range,
            center,
            radius,
            filter,
        } => {
            let e = expr::parse(text)?;
            let mut out = json!({
                "expr": e.to_string(),
                "sort": e.sort,
                "vars": e.vars,
            });
            if *range {
                let vars: Vec<&str> = e
                    .vars
                    .iter()
                    .filter(|(_, s)| **s == Sort::Field)
                    .map(|(v, _)| v.as_str())
                    .collect();
                let c = match center {
                    Some(c) => point(&k, c)?,
                    None => vec![FieldElement::zero(); vars.len()],
                };
                if c.len() != vars.len() {
                    return Err(Error::MismatchedDimension(vars.len(), c.len()).into());
                }
                let mut dom = Domain::ball(&vars, c, *radius);
                if let Some(f) = filter {
                    dom = dom.with_filter(expr::parse(f)?.term);
                }
                let rep = range_enumerate(&k, &e, &dom, cfg.depth)?;
                out["range"] = serde_json::to_value(rep).expect("serializable");
            }
            Ok(out)
        }
    }
}

fn emit(cli: &Cli, v: &Json) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(e.to_string());
        }
    }
    if let Some(path) = &cli.json_out {
        std::fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, code) = match run(&cli) {
        Ok(v) => (Some(v), 0),
        Err(Failure::Mismatch(v)) => (Some(v), 4),
        Err(Failure::Suite(v)) => (Some(v), 1),
        Err(f) => {
            let (kind, msg, code) = match f {
                Failure::Core(e) => {
                    let (kind, code) = error_kind(&e);
                    (kind, e.to_string(), code)
                }
                Failure::Json(m) => ("json", m, 2),
                Failure::Io(m) => ("io", m, 2),
                Failure::Mismatch(_) | Failure::Suite(_) => unreachable!(),
            };
            let err = json!({ "error": kind, "message": msg });
            eprintln!("{}", serde_json::to_string_pretty(&err).expect("serializable"));
            (None, code)
        }
    };
    if let Some(v) = report {
        if let Err(e) = emit(&cli, &v) {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}
