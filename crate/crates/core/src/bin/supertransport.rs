//! `supertransport` command-line front end.
//!
//! Exit codes: 0 pass, 2 residual failure, 64 usage, 65 input parse,
//! 1 internal error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use supertransport::clifford::{GammaBasis, Representation, ETA};
use supertransport::config;
use supertransport::error::Error;
use supertransport::grassmann::generator;
use supertransport::poly::Poly;
use supertransport::report::VerificationReport;
use supertransport::scalar::{GaussRational, Scalar, C64};
use supertransport::suites::{self, KillingModel, SugraChecks, SuiteOptions};
use supertransport::transport::{self, Method, Solver, TransportProblem};

const EXIT_RESIDUAL: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;

/// Transport tolerance for float-backend property checks.
const TRANSPORT_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "supertransport", version, about = "Exact super Lie algebra, super form and super parallel transport verification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite: clifford, jacobi, forms, fierz, mc-flatness, connection-axioms.
    Verify(VerifyArgs),
    /// Parallel transport of a connection along a path.
    Transport(TransportArgs),
    /// N=1 D=4 supergravity identities.
    Sugra(SugraArgs),
    /// Killing vector fields and Killing spinors on super Minkowski and super AdS.
    Killing(KillingArgs),
    /// Print the gamma matrix, charge conjugation and metric conventions.
    Conventions,
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    /// t134, iso134, osp14 or all (jacobi).
    #[arg(long)]
    algebra: Option<String>,
    /// Number of Grassmann generators (fierz).
    #[arg(long, default_value_t = 4)]
    generators: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Randomized case count (forms, mc-flatness, connection-axioms).
    #[arg(long)]
    cases: Option<usize>,
    /// AdS radius for osp(1|4), as an integer or fraction.
    #[arg(long = "L", default_value = "1")]
    l: String,
    /// standard or flipped gamma matrices.
    #[arg(long, default_value = "standard")]
    representation: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransportArgs {
    /// Problem file with `chart`, `algebra` and `connection` (TOML or JSON).
    #[arg(long)]
    connection: PathBuf,
    /// Path file; defaults to a `path` entry in the connection file.
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// rk4, product-exponential or magnus2.
    #[arg(long, default_value = "rk4")]
    method: String,
    /// Comma-separated: functoriality, gauge, reparam.
    #[arg(long, value_delimiter = ',')]
    check: Vec<String>,
    /// Gauge map file for `--check gauge`; defaults to a `gauge` entry in the connection file.
    #[arg(long)]
    gauge: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SugraArgs {
    /// Field file `{chart, e, omega, psi}`; random and symbolic fields otherwise.
    #[arg(long)]
    fields: Option<PathBuf>,
    /// Comma-separated: dl, rheonomy, susy.
    #[arg(long, default_value = "dl,rheonomy,susy")]
    checks: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random field sets for the dl check.
    #[arg(long, default_value_t = 10)]
    cases: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KillingArgs {
    /// minkowski or ads.
    #[arg(long, default_value = "minkowski")]
    model: String,
    #[arg(long = "L", default_value = "1")]
    l: String,
    #[arg(long, default_value_t = 2)]
    jet: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Unknown(_) => EXIT_USAGE,
        Error::Parse(_) | Error::Parity(_) | Error::Dim(_) | Error::Arity { .. } | Error::AlgebraMismatch(_) | Error::Endpoint(_) => EXIT_PARSE,
        _ => 1,
    }
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Transport(a) => transport_cmd(a),
        Cmd::Sugra(a) => sugra(a),
        Cmd::Killing(a) => killing(a),
        Cmd::Conventions => {
            println!("{}", serde_json::to_string_pretty(&conventions()?).expect("json"));
            Ok(0)
        }
    }
}

fn parse_l(s: &str) -> Result<GaussRational, Error> {
    let l = GaussRational::from_json(&Value::String(s.into())).map_err(|_| Error::Unknown(format!("--L expects a rational number, got '{s}'")))?;
    if l.magnitude() == 0.0 {
        return Err(Error::Unknown("--L must be nonzero".into()));
    }
    Ok(l)
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Error::Unknown(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn summarize(r: &VerificationReport) {
    for c in &r.checks {
        eprintln!("{} {:<32} residual {:e} (threshold {:e}, {})", if c.pass { "PASS" } else { "FAIL" }, c.id, c.residual, c.threshold, c.backend);
    }
    eprintln!("{}: {}", r.suite, if r.pass { "PASS" } else { "FAIL" });
}

fn finish(r: &VerificationReport, out: &Option<PathBuf>) -> Result<u8, Error> {
    summarize(r);
    write_out(out, &r.to_json_pretty())?;
    Ok(if r.pass { 0 } else { EXIT_RESIDUAL })
}

fn verify(a: VerifyArgs) -> Result<u8, Error> {
    if !suites::SUITES.contains(&a.suite.as_str()) {
        return Err(Error::Unknown(format!("unknown suite '{}'; usage: supertransport verify <{}>", a.suite, suites::SUITES.join("|"))));
    }
    let representation = match a.representation.as_str() {
        "standard" => Representation::Standard,
        "flipped" => Representation::Flipped,
        other => return Err(Error::Unknown(format!("representation '{other}' (standard, flipped)"))),
    };
    let o = SuiteOptions { seed: a.seed, cases: a.cases, generators: a.generators, algebra: a.algebra, l: parse_l(&a.l)?, representation, ..SuiteOptions::default() };
    finish(&suites::run(&a.suite, &o)?, &a.out)
}

fn load_or(primary: &Value, file: &Option<PathBuf>) -> Result<Value, Error> {
    match file {
        Some(p) => config::load(p),
        None => Ok(primary.clone()),
    }
}

fn transport_cmd(a: TransportArgs) -> Result<u8, Error> {
    let solver = Solver { steps: a.steps, method: Method::parse(&a.method)? };
    if solver.steps == 0 {
        return Err(Error::Unknown("--steps must be positive".into()));
    }
    let conn_v = config::load(&a.connection)?;
    let chart = config::chart_from_value(&conn_v)?;
    let alg = config::algebra_from_value::<C64>(&conn_v)?;
    let connection = config::connection_from_value(&chart, alg.clone(), &conn_v)?;
    let path_v = load_or(&conn_v, &a.path)?;
    let path = config::path_from_value::<C64>(&chart, &path_v)?;
    let p = TransportProblem { chart: chart.clone(), connection, path, solver };
    let res = transport::transport_even(&p)?;
    let mut report = VerificationReport::new("transport");
    report.env("steps", solver.steps);
    report.env("method", solver.method.name());
    for (k, v) in &res.diagnostics {
        report.check(&format!("diagnostic-{k}"), "solver diagnostic", C64::BACKEND.name(), *v, TRANSPORT_TOL);
    }
    for c in &a.check {
        match c.trim() {
            "functoriality" => {
                let half = C64::new(0.5, 0.0);
                let first = TransportProblem { path: p.path.restrict(&C64::new(0.0, 0.0), &half)?, ..p.clone() };
                let second = TransportProblem { path: p.path.restrict(&half, &C64::new(1.0, 0.0))?, ..p.clone() };
                let split = transport::compose_transport(&first, &second)?;
                report.check("functoriality", "transport along a concatenation is the composite", "c64", split.g.sub(&res.g)?.max_abs(), TRANSPORT_TOL);
            }
            "gauge" => {
                let gv = load_or(&conn_v, &a.gauge)?;
                if a.gauge.is_none() && conn_v.get("gauge").is_none() {
                    return Err(Error::Parse("--check gauge needs --gauge or a gauge entry".into()));
                }
                let g = config::gauge_from_value(&chart, &alg, &gv)?;
                report.check("gauge-covariance", "𝒫(f*𝒜) = σ_f(γ(1))⁻¹ 𝒫(𝒜) σ_f(γ(0))", "c64", transport::gauge_residual(&p, &g)?, TRANSPORT_TOL);
            }
            "reparam" => {
                let n = chart.gens.len();
                let k = chart.k();
                let mut worst: f64 = 0.0;
                if k > 0 {
                    let s0 = chart.param(0);
                    let mut lam = vec![None; n];
                    lam[s0] = Some(if k >= 3 {
                        &(&generator(s0) * &generator(chart.param(1))) * &generator(chart.param(2))
                    } else {
                        generator(s0).scale(&C64::new(2.0, 0.0))
                    });
                    worst = worst.max(transport::reparametrization_residual(&p, &lam)?);
                    let mut kill = vec![None; n];
                    for i in 0..k {
                        kill[chart.param(i)] = Some(Poly::zero());
                    }
                    worst = worst.max(transport::reparametrization_residual(&p, &kill)?);
                }
                report.check("reparametrization", "λ*𝒫(𝒜,γ) = 𝒫(λ*𝒜, λ*γ)", "c64", worst, TRANSPORT_TOL);
            }
            "" => {}
            other => return Err(Error::Unknown(format!("check '{other}' (functoriality, gauge, reparam)"))),
        }
    }
    let mut out = res.to_json(&chart);
    out["schema"] = json!(supertransport::report::SCHEMA);
    out["report"] = serde_json::to_value(&report).expect("json");
    summarize(&report);
    write_out(&a.out, &serde_json::to_string_pretty(&out).expect("json"))?;
    Ok(if report.pass { 0 } else { EXIT_RESIDUAL })
}

fn sugra(a: SugraArgs) -> Result<u8, Error> {
    let checks = SugraChecks::parse(&a.checks)?;
    let r = match &a.fields {
        Some(path) => {
            let v = config::load(path)?;
            let chart = config::chart_from_value(&v)?;
            let f = config::sugra_fields_from_value::<GaussRational>(&chart, &v)?;
            suites::sugra_suite(checks, a.seed, a.cases, Some((&chart, &f)))?
        }
        None => suites::sugra_suite(checks, a.seed, a.cases, None)?,
    };
    finish(&r, &a.out)
}

fn killing(a: KillingArgs) -> Result<u8, Error> {
    let model = KillingModel::parse(&a.model)?;
    finish(&suites::killing_suite(model, &parse_l(&a.l)?, a.jet)?, &a.out)
}

fn conventions() -> Result<Value, Error> {
    let gb = GammaBasis::<GaussRational>::build(Representation::Standard)?;
    let m = |x: &Vec<Vec<GaussRational>>| -> Value { x.iter().map(|row| row.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect() };
    Ok(json!({
        "eta": ETA,
        "gamma_lower": gb.gamma.iter().map(m).collect::<Vec<_>>(),
        "charge_conjugation": m(&gb.c),
        "gamma_star": m(&gb.gamma_star),
        "gamma_star_sign": gb.gamma_star_sign,
        "epsilon_upper_0123": 1,
        "bilinear": "ψ̄Γχ = ψ^α (CΓ)_{αβ} χ^β",
        "curvature": "F = d𝒜 + ½[𝒜∧𝒜]",
        "form_signs": "(−1)^{pq + |a||b|}",
    }))
}
