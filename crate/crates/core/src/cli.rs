//! `permroots` command-line interface.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.
//! Data goes to stdout, diagnostics to stderr. Rationals are written as
//! `"num/den"` strings; float columns are advisory.

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{final_constant, AsymptoticReport, Interval};
use crate::envelope::{exp_envelope, BoundConfig, Envelope};
use crate::oracle::{count_by_cycle_types, nth_power_image_count, MAX_IMAGE_K};
use crate::rootgf::{build_p_counts, factorials, RootProblem};
use crate::{Rational, RationalSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "permroots",
    version,
    about = "Exact counts and asymptotics for permutations that have an n-th root"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of k, k! p_k and p_k for k = 0..=order.
    Probs(ProbsArgs),
    /// Cross-check the generating function against brute-force oracles.
    Verify(VerifyArgs),
    /// Asymptotic exponent, constant enclosure and convergence diagnostics (JSON).
    Asym(AsymArgs),
    /// Check the exp envelope bound on f_m = C / m^k (JSON).
    Envelope(EnvelopeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Enumerate n-th powers of all of S_k (k <= 8).
    Image,
    /// Count permutations by cycle type with the root criterion.
    Cycletype,
    /// Run both checks.
    Both,
}

#[derive(Debug, Args)]
pub struct ProbsArgs {
    /// Root degree n >= 2.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub n: u64,
    /// Truncation order N.
    #[arg(long)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Root degree n >= 2.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub n: u64,
    /// Largest permutation size checked.
    #[arg(long)]
    pub max_k: usize,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: Mode,
    /// Adds one to the generating-function count at this k (self-test).
    #[arg(long, hide = true)]
    pub corrupt_k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    /// Root degree n >= 2.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub n: u64,
    /// Truncation order N.
    #[arg(long)]
    pub order: usize,
    #[command(flatten)]
    pub bounds: BoundArgs,
}

#[derive(Debug, Args)]
pub struct EnvelopeArgs {
    /// Nonnegative rational constant, `p/q` or an integer.
    #[arg(long)]
    pub c: String,
    /// Decay exponent k >= 2.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub k: u32,
    /// Truncation order N.
    #[arg(long)]
    pub order: usize,
    #[command(flatten)]
    pub bounds: BoundArgs,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Terms summed exactly in the rational zeta(k) bounds.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    pub zeta_cutoff: u64,
    /// Minimum number of Taylor terms in the rational exp upper bound.
    #[arg(long, default_value_t = 48)]
    pub exp_terms: usize,
}

impl BoundArgs {
    fn config(&self) -> BoundConfig {
        BoundConfig {
            zeta_cutoff: self.zeta_cutoff as usize,
            exp_terms: self.exp_terms,
        }
    }
}

/// One row of the `probs` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub k: usize,
    /// `k! p_k`, decimal.
    pub count: String,
    pub p_num: String,
    pub p_den: String,
    pub p_float: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbsTable {
    pub n: u64,
    pub order: usize,
    pub records: Vec<OutputRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub m: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymJson {
    pub n: u64,
    pub order: usize,
    pub exponent: String,
    pub darboux_constant: Interval,
    pub b_at_one: Interval,
    pub constant: Interval,
    pub ratios: Vec<RatioRow>,
    pub fit_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeJson {
    pub c: String,
    pub k: u32,
    pub order: usize,
    pub zeta_cutoff: usize,
    pub exp_terms: usize,
    /// `max_m f_m m^k`.
    pub f_max_ratio: String,
    /// `max_{m>=1} exp(f)_m m^k` and where it occurs.
    pub exp_max_ratio: String,
    pub exp_max_ratio_float: f64,
    pub exp_argmax: Option<usize>,
    pub certified_bound: String,
    pub certified_bound_float: f64,
    pub certified: bool,
}

/// `"num/den"` in lowest terms, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            BigInt::from_str(n.trim()).ok()?,
            BigInt::from_str(d.trim()).ok()?,
        ),
        None => (BigInt::from_str(s.trim()).ok()?, BigInt::from(1)),
    };
    (!den.is_zero()).then(|| Rational::new(num, den))
}

pub fn probs_table(n: u64, order: usize) -> ProbsTable {
    let prob = RootProblem::new(n, order).expect("n >= 2 checked by the parser");
    let counts = build_p_counts(&prob);
    let fact = factorials(order);
    let records = counts
        .into_iter()
        .zip(fact)
        .enumerate()
        .map(|(k, (count, f))| {
            let p = Rational::new(count.clone(), f);
            OutputRecord {
                k,
                count: count.to_string(),
                p_num: p.numer().to_string(),
                p_den: p.denom().to_string(),
                p_float: p.to_f64().unwrap_or(f64::NAN),
            }
        })
        .collect();
    ProbsTable { n, order, records }
}

fn write_csv(table: &ProbsTable, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "k,count,p_num,p_den,p_float")?;
    for r in &table.records {
        writeln!(
            out,
            "{},{},{},{},{:?}",
            r.k, r.count, r.p_num, r.p_den, r.p_float
        )?;
    }
    Ok(())
}

fn cmd_probs(args: &ProbsArgs, out: &mut dyn Write) -> std::io::Result<i32> {
    let table = probs_table(args.n, args.order);
    match args.format {
        Format::Csv => write_csv(&table, out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &table)?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let uses_image = matches!(args.mode, Mode::Image | Mode::Both);
    let uses_cycles = matches!(args.mode, Mode::Cycletype | Mode::Both);
    if uses_image && args.max_k > MAX_IMAGE_K {
        writeln!(
            err,
            "error: image enumeration is capped at --max-k {MAX_IMAGE_K}, got {}",
            args.max_k
        )?;
        return Ok(EXIT_USAGE);
    }
    let prob = RootProblem::new(args.n, args.max_k).expect("n >= 2 checked by the parser");
    let mut gf = build_p_counts(&prob);
    if let Some(k) = args.corrupt_k {
        if k <= args.max_k {
            gf[k] += 1;
        }
    }
    writeln!(out, "k,generating_function,image,cycle_type,status")?;
    let mut first_mismatch = None;
    for (k, gf_k) in gf.iter().enumerate() {
        let image = if uses_image {
            Some(BigInt::from(
                nth_power_image_count(k, args.n).expect("k within cap"),
            ))
        } else {
            None
        };
        let cycles = if uses_cycles {
            Some(BigInt::from(
                count_by_cycle_types(k, args.n).expect("n >= 2"),
            ))
        } else {
            None
        };
        let ok = image.iter().chain(cycles.iter()).all(|c| c == gf_k);
        let show = |c: &Option<BigInt>| {
            c.as_ref()
                .map_or_else(|| "-".to_string(), BigInt::to_string)
        };
        writeln!(
            out,
            "{k},{gf_k},{},{},{}",
            show(&image),
            show(&cycles),
            if ok { "ok" } else { "MISMATCH" }
        )?;
        if !ok && first_mismatch.is_none() {
            first_mismatch = Some(k);
        }
    }
    match first_mismatch {
        None => {
            writeln!(
                out,
                "PASS n={} max_k={} mode={:?}",
                args.n, args.max_k, args.mode
            )?;
            Ok(EXIT_OK)
        }
        Some(k) => {
            writeln!(out, "FAIL n={} first mismatch at k={k}", args.n)?;
            writeln!(err, "verification failed: first mismatch at k={k}")?;
            Ok(EXIT_FAILED)
        }
    }
}

pub fn asym_json(report: &AsymptoticReport) -> AsymJson {
    AsymJson {
        n: report.n,
        order: report.order,
        exponent: format_rational(&report.exponent),
        darboux_constant: report.darboux_constant,
        b_at_one: report.b_at_one,
        constant: report.final_constant,
        ratios: report
            .ratios
            .iter()
            .map(|&(m, ratio)| RatioRow { m, ratio })
            .collect(),
        fit_slope: report.fit_slope,
    }
}

fn cmd_asym(args: &AsymArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    match final_constant(args.n, args.order, &args.bounds.config()) {
        Ok(report) => {
            serde_json::to_writer_pretty(&mut *out, &asym_json(&report))?;
            writeln!(out)?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_USAGE)
        }
    }
}

pub fn envelope_report(
    c: &Rational,
    k: u32,
    order: usize,
    cfg: &BoundConfig,
) -> Result<EnvelopeJson, String> {
    let env = Envelope::new(c.clone(), k).map_err(|e| e.to_string())?;
    let bound = exp_envelope(&env, cfg).map_err(|e| e.to_string())?;
    let power = |m: usize| Rational::from_integer(BigInt::from(m).pow(k));
    let f = RationalSeries::from_fn(order, |m| {
        if m == 0 {
            Rational::zero()
        } else {
            c / power(m)
        }
    });
    let g = f.exp_series().expect("zero constant term");
    let mut exp_max = Rational::zero();
    let mut argmax = None;
    for m in 1..=order {
        let s = g[m].clone() * power(m);
        if argmax.is_none() || s > exp_max {
            exp_max = s;
            argmax = Some(m);
        }
    }
    let f_max = if order >= 1 {
        c.clone()
    } else {
        Rational::zero()
    };
    Ok(EnvelopeJson {
        c: format_rational(c),
        k,
        order,
        zeta_cutoff: cfg.zeta_cutoff,
        exp_terms: cfg.exp_terms,
        f_max_ratio: format_rational(&f_max),
        exp_max_ratio: format_rational(&exp_max),
        exp_max_ratio_float: exp_max.to_f64().unwrap_or(f64::NAN),
        exp_argmax: argmax,
        certified_bound: format_rational(bound.constant()),
        certified_bound_float: bound.constant().to_f64().unwrap_or(f64::INFINITY),
        certified: bound.first_violation(&g).is_none(),
    })
}

fn cmd_envelope(
    args: &EnvelopeArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let c = match parse_rational(&args.c) {
        Some(c) if !c.is_negative() => c,
        _ => {
            writeln!(
                err,
                "error: --c must be a nonnegative rational p/q, got {:?}",
                args.c
            )?;
            return Ok(EXIT_USAGE);
        }
    };
    match envelope_report(&c, args.k, args.order, &args.bounds.config()) {
        Ok(report) => {
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
            if report.certified {
                Ok(EXIT_OK)
            } else {
                writeln!(err, "envelope violated")?;
                Ok(EXIT_FAILED)
            }
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_USAGE)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Probs(a) => cmd_probs(a, out),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Asym(a) => cmd_asym(a, out, err),
        Command::Envelope(a) => cmd_envelope(a, out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_FAILED
    })
}
