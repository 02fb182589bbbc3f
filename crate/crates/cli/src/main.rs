//! `meannorm`: build the matrices, estimate their norms, evaluate Schur-test
//! certificates and run the verification suites.
//!
//! Exit codes: 0 when every check passes, 1 when a proven bound is
//! violated, 2 on invalid usage.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod family;
mod sweep;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use meannorm::certificates::{hardy_certificate, m_alpha_certificate, CertFamily};
use meannorm::format::{g17, write_matrix_csv};
use meannorm::matrices::KernelOrder;
use meannorm::spectral::IterationConfig;
use meannorm::verify::{self, CheckReport};
use rayon::prelude::*;
use serde_json::json;

use family::{Family, Instance};
use sweep::PartialSpec;

#[derive(Debug)]
pub struct UsageError(pub String);

#[derive(Parser)]
#[command(
    name = "meannorm",
    version,
    about = "Operator norms of weighted mean matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the operator norm of one matrix and compare it with its bound.
    Norm(NormArgs),
    /// Evaluate the Schur-test certificate of the Hardy or M(alpha) matrix.
    Cert(CertArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Estimate norms over a grid of alpha and N, writing CSV.
    Sweep(SweepArgs),
    /// Write a matrix as CSV.
    Dump(DumpArgs),
}

#[derive(Args, Clone)]
struct MatrixArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Truncation size [default: 256, or the length of --lambda-file]
    #[arg(long)]
    n: Option<usize>,
    /// Kernel order for kernel_r: a number >= 1 or "inf".
    #[arg(long, default_value = "inf")]
    r: String,
    /// Points for mv_skew, one per line; the smallest gap is the spacing.
    #[arg(long)]
    lambda_file: Option<PathBuf>,
}

#[derive(Args)]
struct NormArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CertArgs {
    #[arg(long, value_parser = parse_cert_family)]
    family: CertFamily,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// "all", or suite names separated by commas.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the reports as a JSON array; the table goes to stderr.
    #[arg(long)]
    json: bool,
    /// List the suites and exit.
    #[arg(long)]
    list: bool,
    /// Worker threads; 0 picks one per core.
    #[arg(long, env = "MEANNORM_JOBS", default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// File of `key = value` lines; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    alpha_step: Option<f64>,
    /// Comma-separated truncation sizes.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "MEANNORM_JOBS", default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct DumpArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_cert_family(s: &str) -> Result<CertFamily, String> {
    s.parse().map_err(|e: meannorm::Error| e.to_string())
}

const OK: u8 = 0;
const VIOLATION: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Norm(a) => cmd_norm(a),
        Command::Cert(a) => cmd_cert(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Dump(a) => cmd_dump(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}

fn io_err(e: io::Error) -> UsageError {
    UsageError(format!("i/o error: {e}"))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, UsageError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| UsageError(format!("cannot start worker threads: {e}")))
}

fn instance(m: &MatrixArgs, p: f64) -> Result<Instance, UsageError> {
    let lambda = match &m.lambda_file {
        Some(path) if m.family == Family::MvSkew => Some(family::read_lambda_file(path)?),
        Some(_) => return Err(UsageError("--lambda-file applies only to mv_skew".into())),
        None => None,
    };
    let n = match (&lambda, m.n) {
        (Some(s), Some(n)) if n != s.len() => {
            return Err(UsageError(format!(
                "--n {n} disagrees with the {} points in --lambda-file",
                s.len()
            )))
        }
        (Some(s), _) => s.len(),
        (None, n) => n.unwrap_or(256),
    };
    let order: KernelOrder = family::parse_order(&m.r)?;
    Ok(Instance {
        family: m.family,
        alpha: m.alpha,
        n,
        p,
        order,
        lambda,
    })
}

fn cmd_norm(a: NormArgs) -> Result<u8, UsageError> {
    let inst = instance(&a.matrix, a.p)?;
    let cfg = IterationConfig::new(a.tol, a.max_iter).map_err(|e| UsageError(e.to_string()))?;
    let eval = inst.evaluate(&cfg)?;
    let e = &eval.estimate;
    if !e.converged {
        log::warn!(
            "not converged after {} iterations (residual {})",
            e.iterations,
            e.residual
        );
    }
    let mut out = io::stdout().lock();
    if a.json {
        let doc = json!({
            "family": inst.family.to_string(),
            "alpha": inst.alpha,
            "N": inst.n,
            "p": inst.p,
            "value": e.value,
            "iterations": e.iterations,
            "residual": e.residual,
            "converged": e.converged,
            "analytic_bound": eval.bound.map(|b| b.value),
            "proven": eval.bound.map(|b| b.proven),
            "ratio": eval.ratio(),
            "violated": eval.violated(),
        });
        writeln!(out, "{doc}").map_err(io_err)?;
    } else {
        let mut lines = vec![
            format!("family      {}", inst.family),
            format!("alpha       {}", g17(inst.alpha)),
            format!("N           {}", inst.n),
            format!("p           {}", g17(inst.p)),
            format!("value       {}", g17(e.value)),
            format!("iterations  {}", e.iterations),
            format!("residual    {}", g17(e.residual)),
            format!("converged   {}", e.converged),
        ];
        match eval.bound {
            Some(b) => {
                let status = if b.proven { "proven" } else { "open" };
                lines.push(format!("bound       {} ({status})", g17(b.value)));
                lines.push(format!(
                    "ratio       {}",
                    g17(eval.ratio().expect("bound present"))
                ));
            }
            None => lines.push("bound       none".into()),
        }
        if eval.violated() {
            lines.push("VIOLATED    estimate exceeds the proven bound".into());
        }
        writeln!(out, "{}", lines.join("\n")).map_err(io_err)?;
    }
    Ok(if eval.violated() { VIOLATION } else { OK })
}

fn cmd_cert(a: CertArgs) -> Result<u8, UsageError> {
    let cert = match a.family {
        CertFamily::Hardy => hardy_certificate(a.n),
        CertFamily::MAlpha => m_alpha_certificate(a.alpha, a.n),
    }
    .map_err(|e| UsageError(e.to_string()))?;
    let rec = cert.record();
    let mut out = io::stdout().lock();
    if a.json {
        let text = serde_json::to_string(&rec).expect("certificate serializes");
        writeln!(out, "{text}").map_err(io_err)?;
    } else {
        let lines = [
            format!("family          {}", rec.family),
            format!("alpha           {}", g17(rec.alpha)),
            format!("N               {}", rec.n),
            format!("p               {}", g17(rec.p)),
            format!("U1              {}", g17(rec.u1)),
            format!("U2              {}", g17(rec.u2)),
            format!("bound           {}", g17(rec.bound)),
            format!("analytic_bound  {}", g17(rec.analytic_bound)),
            format!(
                "tightest row    {} (margin {})",
                cert.worst_row,
                g17(cert.worst_row_margin)
            ),
            format!("violated        {}", rec.violated),
        ];
        writeln!(out, "{}", lines.join("\n")).map_err(io_err)?;
    }
    Ok(if rec.violated { VIOLATION } else { OK })
}

fn table(reports: &[CheckReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.suite.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut s = format!(
        "{:<6} {:<width$} {:>9} {:>12} {:>8}  witness\n",
        "status", "suite", "instances", "margin", "slack"
    );
    for r in reports {
        let status = match (r.passed, r.exploratory) {
            (_, true) => "EXPL",
            (true, false) => "PASS",
            (false, false) => "FAIL",
        };
        s.push_str(&format!(
            "{:<6} {:<width$} {:>9} {:>12.4e} {:>8.0e}  {}\n",
            status, r.suite, r.instances_tested, r.worst_margin, r.slack, r.witness
        ));
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    s.push_str(&format!("{} reports, {} failed\n", reports.len(), failed));
    s
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, UsageError> {
    if a.list {
        let mut out = io::stdout().lock();
        for s in verify::registry() {
            writeln!(out, "{:<26} {}", s.name, s.description).map_err(io_err)?;
        }
        return Ok(OK);
    }
    let suites: Vec<&verify::Suite> = if a.suite.trim() == "all" {
        verify::registry().iter().collect()
    } else {
        a.suite
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| {
                verify::find_suite(name)
                    .ok_or_else(|| UsageError(format!("unknown suite '{name}' (see --list)")))
            })
            .collect::<Result<_, _>>()?
    };
    if suites.is_empty() {
        return Err(UsageError("no suites selected".into()));
    }
    let seed = a.seed;
    let reports: Vec<CheckReport> = pool(a.jobs)?.install(|| {
        suites
            .par_iter()
            .map(|s| s.run(seed))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });
    let text = table(&reports);
    if a.json {
        eprint!("{text}");
        let doc = serde_json::to_string_pretty(&reports).expect("reports serialize");
        writeln!(io::stdout().lock(), "{doc}").map_err(io_err)?;
    } else {
        print!("{text}");
    }
    Ok(if reports.iter().all(|r| r.passed) {
        OK
    } else {
        VIOLATION
    })
}

fn cmd_sweep(a: SweepArgs) -> Result<u8, UsageError> {
    let file = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            PartialSpec::parse_config(&text)?
        }
        None => PartialSpec::default(),
    };
    let flags = PartialSpec {
        family: a.family.map(|f| f.to_string()),
        alpha_min: a.alpha_min,
        alpha_max: a.alpha_max,
        alpha_step: a.alpha_step,
        ns: a.n.as_deref().map(sweep::parse_n_list).transpose()?,
        p: a.p,
        seed: a.seed,
        out: a.out,
        r: a.r,
        tol: a.tol,
        max_iter: a.max_iter,
    };
    let spec = file.merge(flags).finish()?;
    let rows = pool(a.jobs)?.install(|| sweep::run(&spec))?;
    let text = sweep::render(&rows);
    match &spec.out {
        Some(path) => sweep::write_atomic(path, &text).map_err(io_err)?,
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(io_err)?,
    }
    for (k, v) in sweep::tally(&rows) {
        log::info!("{k}: {v}");
    }
    let violated: Vec<_> = rows.iter().filter(|r| r.eval.violated()).collect();
    for r in &violated {
        eprintln!(
            "violated: {} alpha={} N={} estimate {} > bound {}",
            r.instance.family,
            g17(r.instance.alpha),
            r.instance.n,
            g17(r.eval.estimate.value),
            g17(r.eval.bound.expect("violation has a bound").value)
        );
    }
    Ok(if violated.is_empty() { OK } else { VIOLATION })
}

fn cmd_dump(a: DumpArgs) -> Result<u8, UsageError> {
    let m = instance(&a.matrix, 2.0)?.matrix()?;
    let mut buf = Vec::new();
    write_matrix_csv(&m, &mut buf).map_err(io_err)?;
    match &a.out {
        Some(path) => sweep::write_atomic(path, &String::from_utf8(buf).expect("ascii csv"))
            .map_err(io_err)?,
        None => io::stdout().lock().write_all(&buf).map_err(io_err)?,
    }
    Ok(OK)
}
