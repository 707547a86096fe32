//! `secant`: secant dimensions, schedule replays and the regression catalog.
//!
//! Exit codes: 0 when everything is certified, 1 when some computation
//! exceeds its expected value (or a theorem's hypotheses fail), 2 on usage
//! errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use secant_core::catalog::{default_catalog, run_catalog};
use secant_core::certificate::{Certificate, ScheduleCertificate};
use secant_core::horace::{
    replay_prop_u1, replay_theorem_i1, replay_theorem_i1_0, replay_theorem_minus, ScheduleVerdict,
};
use secant_core::linalg::{MERSENNE_61, RETRY_PRIME};
use secant_core::terracini::DEFAULT_SEED;
use secant_core::{
    nondefectivity_scan, secant_dimension, BundleDegree, CohomologyConfig, Error,
    MultiProjectiveFormat, PrimeField, ScanMode, Verdict,
};

const WORKERS_ENV: &str = "SECANT_WORKERS";

#[derive(Parser)]
#[command(
    name = "secant",
    version,
    about = "Secant dimensions of Segre-Veronese varieties"
)]
struct Cli {
    #[command(flatten)]
    run: RunFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunFlags {
    /// Prime(s) for the rank computation; replaces the default pair.
    #[arg(long, global = true, value_delimiter = ',')]
    prime: Vec<u64>,
    /// Master seed.
    #[arg(long, global = true, conflicts_with = "entropy")]
    seed: Option<u64>,
    /// Draw the master seed from the OS (it is recorded in the output).
    #[arg(long, global = true)]
    entropy: bool,
    /// Maximum number of random trials per computation, spread over the primes.
    #[arg(long, global = true, default_value_t = 6)]
    trials: usize,
    /// Directory for certificates and the CSV summary.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of secant varieties of one embedding.
    Dims(DimsArgs),
    /// Replay a theorem's schedule on one instance.
    Theorem(TheoremArgs),
    /// Run the regression catalog.
    Catalog,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Critical,
    All,
}

#[derive(Args)]
#[command(group(ArgGroup::new("which_z").args(["z", "all_critical", "all", "mode"])))]
struct DimsArgs {
    /// Dimensions of the factors, e.g. 1,1,2.
    #[arg(long, value_delimiter = ',', required = true)]
    factors: Vec<usize>,
    /// Multidegree of the line bundle.
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<u32>,
    /// Numbers of points.
    #[arg(long, value_delimiter = ',')]
    z: Vec<usize>,
    #[arg(long)]
    all_critical: bool,
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    I1,
    Minus,
    #[value(name = "i1.0")]
    I1_0,
    U1,
}

#[derive(Args)]
struct TheoremArgs {
    #[arg(long, value_enum)]
    which: Which,
    /// `minus`: the two leading factor dimensions.
    #[arg(long, value_delimiter = ',')]
    factors: Vec<usize>,
    /// `minus`: number of trailing P1 factors.
    #[arg(long)]
    extra_p1: Option<usize>,
    /// `minus`: all degrees.
    #[arg(long, value_delimiter = ',')]
    degrees: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    y_factors: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    y_degrees: Vec<u32>,
    /// Degree on the added P1 (`i1`, `i1.0`).
    #[arg(long)]
    t: Option<u32>,
    /// Number of points (`u1`).
    #[arg(long)]
    z: Option<usize>,
}

/// Errors split by exit code.
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrime(_)
            | Error::LengthMismatch { .. }
            | Error::InvalidFormat(_)
            | Error::InvalidDivisor(_)
            | Error::TwistUnderflow { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

fn config(flags: &RunFlags) -> Result<CohomologyConfig, Failure> {
    let primes = if flags.prime.is_empty() {
        vec![MERSENNE_61, RETRY_PRIME]
    } else {
        flags.prime.clone()
    };
    for &p in &primes {
        PrimeField::new(p)?;
    }
    if flags.trials == 0 {
        return Err(Failure::Usage("--trials must be positive".into()));
    }
    let seed = match (flags.seed, flags.entropy) {
        (Some(s), _) => s,
        (None, true) => rand::random(),
        (None, false) => DEFAULT_SEED,
    };
    Ok(CohomologyConfig {
        seeds_per_prime: flags.trials.div_ceil(primes.len()),
        primes,
        seed,
    })
}

fn instance(
    factors: &[usize],
    degrees: &[u32],
) -> Result<(MultiProjectiveFormat, BundleDegree), Failure> {
    if factors.len() != degrees.len() {
        return Err(Error::LengthMismatch {
            factors: factors.len(),
            degrees: degrees.len(),
        }
        .into());
    }
    Ok((
        MultiProjectiveFormat::new(factors.to_vec())?,
        BundleDegree::new(degrees.to_vec()),
    ))
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    format: String,
    bundle: String,
    z: usize,
    sections: usize,
    degree: usize,
    rank: usize,
    h0: usize,
    h1: usize,
    expected_h0: usize,
    secant_dim: usize,
    expected_secant_dim: usize,
    defect: usize,
    trials: usize,
    verdict: &'a str,
}

fn summary_csv(certs: &[Certificate]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in certs {
        w.serialize(SummaryRow {
            format: c.format.to_string(),
            bundle: c.bundle.to_string(),
            z: c.z.unwrap_or(0),
            sections: c.sections,
            degree: c.degree,
            rank: c.rank,
            h0: c.h0,
            h1: c.h1,
            expected_h0: c.expected_h0,
            secant_dim: c.secant_dim.unwrap_or(0),
            expected_secant_dim: c.expected_secant_dim.unwrap_or(0),
            defect: c.defect.unwrap_or(0),
            trials: c.trials,
            verdict: &c.verdict_label,
        })
        .map_err(|e| Failure::Run(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Failure::Run(e.to_string()))
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), bytes)?;
    Ok(())
}

fn cmd_dims(args: &DimsArgs, flags: &RunFlags) -> Result<bool, Failure> {
    let cfg = config(flags)?;
    let (x, l) = instance(&args.factors, &args.degrees)?;
    let entries = if !args.z.is_empty() {
        if args.z.contains(&0) {
            return Err(Failure::Usage("z must be positive".into()));
        }
        args.z
            .par_iter()
            .map(|&z| secant_dimension(&x, &l, z, &cfg))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let mode = if args.all || matches!(args.mode, Some(Mode::All)) {
            ScanMode::All
        } else {
            ScanMode::CriticalOnly
        };
        nondefectivity_scan(&x, &l, &cfg, mode)?.entries
    };
    let certs: Vec<Certificate> = entries
        .iter()
        .map(|s| Certificate::from_secant(&x, &l, &cfg, s))
        .collect();
    let csv = summary_csv(&certs)?;
    match &flags.out {
        Some(dir) => {
            for c in &certs {
                let z = c.z.expect("secant certificate");
                write_file(dir, &format!("z{z}.json"), c.to_json().as_bytes())?;
            }
            write_file(dir, "summary.csv", &csv)?;
            std::io::stdout().write_all(&csv)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            for c in &certs {
                writeln!(out, "{}", c.to_json())?;
            }
            std::io::stderr().write_all(&csv)?;
        }
    }
    Ok(certs
        .iter()
        .all(|c| c.verdict == Verdict::CertifiedExpected))
}

fn cmd_theorem(args: &TheoremArgs, flags: &RunFlags) -> Result<bool, Failure> {
    let cfg = config(flags)?;
    let need = |ok: bool, msg: &str| {
        if ok {
            Ok(())
        } else {
            Err(Failure::Usage(msg.into()))
        }
    };
    let trace = match args.which {
        Which::Minus => {
            need(
                args.factors.len() == 2,
                "--factors takes the two leading dimensions",
            )?;
            let extra = args
                .extra_p1
                .unwrap_or(args.degrees.len().saturating_sub(2));
            need(
                args.degrees.len() == 2 + extra,
                "--degrees needs one degree per factor",
            )?;
            match replay_theorem_minus(args.factors[0], args.factors[1], &args.degrees, &cfg) {
                Ok(t) => t,
                Err(Error::Precondition(msg)) => {
                    eprintln!("hypothesis failed: {msg}");
                    return Ok(false);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Which::I1 | Which::I1_0 | Which::U1 => {
            let (y, l) = instance(&args.y_factors, &args.y_degrees)?;
            if let Which::U1 = args.which {
                let z = args
                    .z
                    .ok_or_else(|| Failure::Usage("u1 needs --z".into()))?;
                replay_prop_u1(&y, &l, z, &cfg)?.0
            } else {
                let t = args
                    .t
                    .ok_or_else(|| Failure::Usage("--t is required".into()))?;
                need(t >= 2, "--t must be at least 2")?;
                if let Which::I1 = args.which {
                    replay_theorem_i1(&y, &l, t, &cfg)?
                } else {
                    replay_theorem_i1_0(&y, &l, t, &cfg)?
                }
            }
        }
    };
    let verdict = trace.verdict;
    let cert = ScheduleCertificate::new(&cfg, trace);
    let json = cert.to_json();
    match &flags.out {
        Some(dir) => {
            let name = format!("theorem-{}.json", cert.trace.theorem);
            write_file(dir, &name, json.as_bytes())?;
        }
        None => println!("{json}"),
    }
    eprintln!("{}: {verdict:?}", cert.trace.theorem);
    Ok(verdict == ScheduleVerdict::Verified)
}

fn cmd_catalog(flags: &RunFlags) -> Result<bool, Failure> {
    let cfg = config(flags)?;
    let outcomes = run_catalog(&default_catalog(), &cfg)?;
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{:<28} {:>8} {:>8}  result  source",
        "case", "expected", "observed"
    )?;
    for o in &outcomes {
        writeln!(
            out,
            "{:<28} {:>8} {:>8}  {:<6}  {}",
            o.entry.name,
            o.entry.expected_defect,
            o.observed.defect,
            if o.matches { "pass" } else { "FAIL" },
            o.entry.provenance
        )?;
    }
    if let Some(dir) = &flags.out {
        let certs: Vec<Certificate> = outcomes
            .iter()
            .map(|o| Certificate::from_secant(&o.entry.format, &o.entry.bundle, &cfg, &o.observed))
            .collect();
        write_file(dir, "catalog.csv", &summary_csv(&certs)?)?;
    }
    Ok(outcomes.iter().all(|o| o.matches))
}

fn init_workers() -> Result<(), Failure> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::Usage(format!("{WORKERS_ENV} must be a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Run(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_workers().and_then(|()| match &cli.command {
        Command::Dims(a) => cmd_dims(a, &cli.run),
        Command::Theorem(a) => cmd_theorem(a, &cli.run),
        Command::Catalog => cmd_catalog(&cli.run),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
