//! Command-line driver: truncated resultants of bivariate polynomials over a
//! prime field, with fast / iterative / oracle backends, a CSV benchmark
//! runner, and a seeded selftest of the core property suite.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use truncres_cli::formats;
use truncres_core::halfgcd::Engine;
use truncres_core::{instances, oracle, resultant, selfcheck, Error, PrimeField};

#[derive(Parser)]
#[command(name = "truncres", version, about = "Exact truncated resultants Res_y(P,Q) mod x^k over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Res_y(P, Q) mod x^k from two TRP1 files and emit TRS1.
    Resultant(ResultantArgs),
    /// Time the backends over a grid of degrees and precisions; emit CSV.
    Bench(BenchArgs),
    /// Run the randomized property suite and report pass/fail counts.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Fast,
    Iterative,
    Oracle,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Fast => "fast",
            Mode::Iterative => "iterative",
            Mode::Oracle => "oracle",
        }
    }
}

#[derive(Args)]
struct ResultantArgs {
    /// First input polynomial (TRP1).
    p_file: PathBuf,
    /// Second input polynomial (TRP1).
    q_file: PathBuf,
    /// Backend selection.
    #[arg(long, value_enum, default_value = "fast")]
    mode: Mode,
    /// Override the precision k declared in both file headers.
    #[arg(long)]
    k: Option<usize>,
    /// Verify primality of the modulus (deterministic Miller-Rabin).
    #[arg(long, default_value_t = true, overrides_with = "no_prime_check")]
    prime_check: bool,
    /// Skip the primality check.
    #[arg(long)]
    no_prime_check: bool,
    /// Write the TRS1 output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated y-degrees.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    /// Comma-separated precisions.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// Trials per (algo, d, k) cell.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Comma-separated backends to run.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Mode::Fast, Mode::Oracle])]
    algo: Vec<Mode>,
    /// Prime modulus for the generated instances.
    #[arg(long, default_value_t = 2_305_843_009_213_693_951)]
    prime: u64,
    /// Seed for the instance generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed for the property-suite generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Resultant(args) => cmd_resultant(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CharacteristicTooSmall { .. } => 2,
            Error::BadPrime(_) => 3,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

fn read_poly(path: &PathBuf) -> Result<formats::PolyFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    formats::parse_trp1(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn field_for(p: u64, check: bool) -> Result<PrimeField, CliError> {
    let f = if check { PrimeField::new(p) } else { PrimeField::new_unchecked(p) }?;
    Ok(f)
}

fn run_mode(
    f: &PrimeField,
    mode: Mode,
    p: &resultant::BivariateInput,
    q: &resultant::BivariateInput,
) -> Result<truncres_core::TruncSeries, Error> {
    match mode {
        Mode::Fast => resultant::truncated_resultant_with(f, Engine::HalfGcd, p, q),
        Mode::Iterative => resultant::truncated_resultant_with(f, Engine::Iterative, p, q),
        Mode::Oracle => oracle::oracle_resultant(f, p, q),
    }
}

fn cmd_resultant(args: ResultantArgs) -> Result<ExitCode, CliError> {
    let pf = read_poly(&args.p_file)?;
    let qf = read_poly(&args.q_file)?;
    if pf.p != qf.p {
        return Err(CliError::input(format!(
            "modulus mismatch: p={} vs p={}",
            pf.p, qf.p
        )));
    }
    if args.k.is_none() && pf.k != qf.k {
        return Err(CliError::input(format!(
            "precision mismatch: k={} vs k={} (use --k to override)",
            pf.k, qf.k
        )));
    }
    let k = args.k.unwrap_or(pf.k);
    if k == 0 || k > formats::MAX_EXPONENT {
        return Err(CliError::input(format!("precision k={k} out of range")));
    }
    let check = args.prime_check && !args.no_prime_check;
    let f = field_for(pf.p, check)?;
    let pin = formats::build_input(&f, k, &pf);
    let qin = formats::build_input(&f, k, &qf);
    // Uniform guard across modes so outputs stay byte-comparable.
    if (f.modulus() as u128) < k as u128 {
        return Err(Error::CharacteristicTooSmall { p: f.modulus(), k }.into());
    }
    let series = run_mode(&f, args.mode, &pin, &qin)?;
    let text = formats::write_trs1(f.modulus(), &series);
    match args.out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// FNV-1a, the digest for cross-run validation of bench outputs.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, CliError> {
    let f = field_for(args.prime, true)?;
    let mut rows = Vec::new();
    for &mode in &args.algo {
        for &d in &args.d {
            for &k in &args.k {
                if (f.modulus() as u128) < k as u128 {
                    return Err(Error::CharacteristicTooSmall { p: f.modulus(), k }.into());
                }
                for trial in 0..args.trials {
                    // one deterministic instance per (d, k, trial), shared
                    // across algorithms so digests line up
                    let key = fnv1a(format!("{d}:{k}:{trial}").as_bytes());
                    let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ key);
                    let (pin, qin) = instances::bench_pair(&f, &mut rng, k, d);
                    let start = Instant::now();
                    let series = run_mode(&f, mode, &pin, &qin)?;
                    let nanos = start.elapsed().as_nanos();
                    let digest = fnv1a(formats::write_trs1(f.modulus(), &series).as_bytes());
                    rows.push((
                        mode.name().to_string(),
                        d,
                        k,
                        trial,
                        nanos,
                        format!("{digest:016x}"),
                    ));
                }
            }
        }
    }
    rows.sort();
    let mut csv = String::from("algo,d,k,p,trial,nanos,digest\n");
    for (algo, d, k, trial, nanos, digest) in rows {
        csv.push_str(&format!("{algo},{d},{k},{},{trial},{nanos},{digest}\n", f.modulus()));
    }
    match args.out {
        Some(path) => std::fs::write(&path, csv)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(args: SelftestArgs) -> Result<ExitCode, CliError> {
    let reports = selfcheck::run_all(args.seed);
    let mut passed = 0;
    let mut failed = 0;
    for r in &reports {
        let status = if r.passed() { "ok  " } else { "FAIL" };
        println!("{status} {} ({} cases, {} failures)", r.name, r.cases, r.failures);
        if r.passed() {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    println!("selftest: {passed} passed, {failed} failed");
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
