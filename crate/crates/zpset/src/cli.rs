//! Command-line surface: set-literal parsing, job dispatch, and report
//! emission in text, JSON, or CSV.
//!
//! Exit codes: 0 all checks passed / witness verified; 1 at least one
//! failure or an unverified/unobtainable witness; 2 usage or configuration
//! error; 3 compute budget exceeded.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{
    corollary1_check, make_subgroup, theorem1_construct, Budget, ConstructError, Witness,
};
use crate::harness::{
    run_exhaustive_with, run_random_with, BoundInstance, Caps, HarnessError, LemmaId, Outcome,
};
use crate::set::{SumsetBackend, ZpSet};
use crate::zp::{PrimeModulus, ZpError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Bare invocations stay reproducible: seeds are never time-based.
pub const DEFAULT_SEED: u64 = 42;
const DEFAULT_SAMPLES: u64 = 1000;
const BENCH_DEFAULT_SAMPLES: u64 = 100;

#[derive(Debug, Error, PartialEq)]
pub enum LiteralError {
    #[error("set literal syntax error: {0}")]
    Syntax(String),
    #[error("set literal denotes the empty set")]
    EmptySet,
}

/// Parses `{` item (`,` item)* `}` with items `INT` or `INT..INT`
/// (inclusive). Values reduce mod p; duplicates collapse.
pub fn parse_set_literal(text: &str, m: PrimeModulus) -> Result<ZpSet, LiteralError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|rest| rest.strip_suffix('}'))
        .ok_or_else(|| LiteralError::Syntax("expected '{...}'".to_string()))?;
    if inner.trim().is_empty() {
        return Err(LiteralError::EmptySet);
    }
    let p = m.value();
    let mut out = ZpSet::empty(m);
    let mut insert_range = |lo: u64, hi: u64| {
        if hi - lo >= p - 1 {
            out = ZpSet::full(m);
        } else {
            let mut members: Vec<u64> = out.elements();
            members.extend((lo..=hi).map(|v| v % p));
            out = ZpSet::from_elements(m, members);
        }
    };
    for raw in inner.split(',') {
        let item = raw.trim();
        if item.is_empty() {
            return Err(LiteralError::Syntax("empty item".to_string()));
        }
        let parse_int = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| LiteralError::Syntax(format!("bad integer '{}'", s.trim())))
        };
        match item.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (parse_int(lo)?, parse_int(hi)?);
                if lo > hi {
                    return Err(LiteralError::Syntax(format!(
                        "descending range {lo}..{hi}"
                    )));
                }
                insert_range(lo, hi);
            }
            None => {
                let v = parse_int(item)?;
                insert_range(v, v);
            }
        }
    }
    Ok(out)
}

/// Renders a set back in literal syntax (plain members, no ranges).
pub fn set_literal(s: &ZpSet) -> String {
    let mut out = String::from("{");
    for (i, e) in s.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{e}");
    }
    out.push('}');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Parser)]
#[command(
    name = "zpset",
    version,
    about = "Exact set arithmetic over Z_p: verified sumset/product-set bounds and additive-basis covers"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Budget override: max checker calls (verify) or max cover order
    /// (construct/subgroup).
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check one lemma/corollary over exhaustively enumerated or seeded
    /// random instances.
    Verify {
        #[arg(long)]
        lemma: String,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: RunMode,
        /// Random mode only: number of instances.
        #[arg(long)]
        samples: Option<u64>,
        /// Random mode only: generator seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Build and verify a covering witness N with N * A^n = Z_p.
    Construct {
        #[arg(long)]
        p: u64,
        /// Set literal, e.g. "{1,2,5..9}".
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        eps: f64,
    },
    /// Generate the order-d subgroup of Z_p^* and verify its cover.
    Subgroup {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        order: u64,
    },
    /// Time the two sumset backends against each other on random instances.
    Bench {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct SubgroupReport {
    p: u64,
    order: u64,
    elements: Vec<u64>,
    witness: Witness,
}

#[derive(Debug, Serialize, Deserialize)]
struct BenchReport {
    p: u64,
    samples: u64,
    seed: String,
    dense_ms: u64,
    ntt_ms: u64,
    agree: bool,
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run_job(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

struct JobFailure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> JobFailure {
    JobFailure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<ZpError> for JobFailure {
    fn from(e: ZpError) -> Self {
        usage(e.to_string())
    }
}

impl From<std::io::Error> for JobFailure {
    fn from(e: std::io::Error) -> Self {
        usage(format!("i/o error: {e}"))
    }
}

impl From<ConstructError> for JobFailure {
    fn from(e: ConstructError) -> Self {
        let code = match e {
            ConstructError::HypothesisViolated { .. } => EXIT_FAIL,
            ConstructError::ComputeBudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        JobFailure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<HarnessError> for JobFailure {
    fn from(e: HarnessError) -> Self {
        let code = match &e {
            HarnessError::BudgetExceeded { .. } => EXIT_BUDGET,
            HarnessError::Construct(inner) => return JobFailure::from(inner.clone()),
            _ => EXIT_USAGE,
        };
        JobFailure {
            code,
            message: e.to_string(),
        }
    }
}

fn run_job(cli: Cli) -> Result<i32, JobFailure> {
    let format = cli.format;
    let mut output: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(std::io::stdout()),
    };
    match cli.command {
        Command::Verify {
            lemma,
            p,
            mode,
            samples,
            seed,
        } => {
            let id: LemmaId = lemma.parse().map_err(usage)?;
            let m = PrimeModulus::new(p)?;
            if mode == RunMode::Exhaustive && (samples.is_some() || seed.is_some()) {
                return Err(usage(
                    "--samples/--seed apply to random mode only".to_string(),
                ));
            }
            let mut caps = Caps::default();
            if let Some(b) = cli.budget {
                caps.budget = b;
            }
            let mut rows = String::new();
            let mut sink = |idx: u64, inst: &BoundInstance, outcome: Outcome| {
                if format == Format::Csv {
                    let _ = writeln!(
                        rows,
                        "{idx},{},\"{}\"",
                        outcome_str(outcome),
                        bindings_str(inst)
                    );
                }
            };
            let report = match mode {
                RunMode::Exhaustive => run_exhaustive_with(id, m, &caps, Some(&mut sink))?,
                RunMode::Random => run_random_with(
                    id,
                    m,
                    samples.unwrap_or(DEFAULT_SAMPLES),
                    seed.unwrap_or(DEFAULT_SEED),
                    &caps,
                    Some(&mut sink),
                )?,
            };
            match format {
                Format::Json => writeln!(output, "{}", report.to_json())?,
                Format::Csv => {
                    writeln!(output, "index,result,bindings")?;
                    output.write_all(rows.as_bytes())?;
                }
                Format::Text => {
                    writeln!(
                        output,
                        "lemma={} p={} mode={} tested={} vacuous={} failures={} elapsed_ms={}",
                        report.lemma,
                        report.p,
                        report.mode.as_str(),
                        report.tested,
                        report.vacuous,
                        report.failures.len(),
                        report.elapsed_ms
                    )?;
                    for f in &report.failures {
                        writeln!(output, "FAIL {}", bindings_str(f))?;
                    }
                    writeln!(output, "{}", if report.passed() { "PASS" } else { "FAIL" })?;
                }
            }
            Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Construct { p, set, n, eps } => {
            let m = PrimeModulus::new(p)?;
            let a = parse_set_literal(&set, m).map_err(|e| usage(e.to_string()))?;
            let budget = Budget {
                max_cover_order: cli.budget.unwrap_or(Budget::default().max_cover_order),
            };
            let witness = theorem1_construct(&a, n, eps, SumsetBackend::DenseShift, &budget)?;
            emit_witness(&mut output, format, &witness)?;
            Ok(if witness.cover_verified {
                EXIT_PASS
            } else {
                EXIT_FAIL
            })
        }
        Command::Subgroup { p, order } => {
            let m = PrimeModulus::new(p)?;
            let budget = Budget {
                max_cover_order: cli.budget.unwrap_or(Budget::default().max_cover_order),
            };
            let spec = make_subgroup(m, order)?;
            let witness = corollary1_check(&spec, SumsetBackend::DenseShift, &budget)?;
            let verified = witness.cover_verified;
            let report = SubgroupReport {
                p,
                order,
                elements: spec.elements.elements(),
                witness,
            };
            match format {
                Format::Json => writeln!(
                    output,
                    "{}",
                    serde_json::to_string(&report).expect("serializable")
                )?,
                Format::Csv => {
                    writeln!(output, "p,order,n,N,verified")?;
                    writeln!(
                        output,
                        "{},{},{},{},{}",
                        p, order, report.witness.n, report.witness.cover_order, verified
                    )?;
                }
                Format::Text => {
                    writeln!(
                        output,
                        "p={} order={} elements={} n={} N={} verified={}",
                        p,
                        order,
                        set_literal(&spec.elements),
                        report.witness.n,
                        report.witness.cover_order,
                        verified
                    )?;
                }
            }
            Ok(if verified { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Bench { p, samples, seed } => {
            let m = PrimeModulus::new(p)?;
            let samples = samples.unwrap_or(BENCH_DEFAULT_SAMPLES);
            let seed = seed.unwrap_or(DEFAULT_SEED);
            let report = run_bench(m, samples, seed)?;
            match format {
                Format::Json => writeln!(
                    output,
                    "{}",
                    serde_json::to_string(&report).expect("serializable")
                )?,
                Format::Csv => {
                    writeln!(output, "p,samples,seed,dense_ms,ntt_ms,agree")?;
                    writeln!(
                        output,
                        "{},{},{},{},{},{}",
                        report.p,
                        report.samples,
                        report.seed,
                        report.dense_ms,
                        report.ntt_ms,
                        report.agree
                    )?;
                }
                Format::Text => writeln!(
                    output,
                    "p={} samples={} seed={} dense_ms={} ntt_ms={} agree={}",
                    report.p,
                    report.samples,
                    report.seed,
                    report.dense_ms,
                    report.ntt_ms,
                    report.agree
                )?,
            }
            Ok(if report.agree { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn run_bench(m: PrimeModulus, samples: u64, seed: u64) -> Result<BenchReport, JobFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = m.value().min(8192);
    let pairs: Vec<(ZpSet, ZpSet)> = (0..samples)
        .map(|_| {
            (
                crate::harness::random_set(&mut rng, m, cap),
                crate::harness::random_set(&mut rng, m, cap),
            )
        })
        .collect();
    let t0 = Instant::now();
    let dense: Vec<ZpSet> = pairs
        .iter()
        .map(|(x, y)| x.sumset(y, SumsetBackend::DenseShift))
        .collect::<Result<_, _>>()
        .map_err(|e| usage(e.to_string()))?;
    let dense_ms = t0.elapsed().as_millis() as u64;
    let t1 = Instant::now();
    let conv: Vec<ZpSet> = pairs
        .iter()
        .map(|(x, y)| x.sumset(y, SumsetBackend::NttConvolution))
        .collect::<Result<_, _>>()
        .map_err(|e| usage(e.to_string()))?;
    let ntt_ms = t1.elapsed().as_millis() as u64;
    Ok(BenchReport {
        p: m.value(),
        samples,
        seed: seed.to_string(),
        dense_ms,
        ntt_ms,
        agree: dense == conv,
    })
}

fn emit_witness(
    output: &mut dyn Write,
    format: Format,
    w: &Witness,
) -> Result<(), std::io::Error> {
    match format {
        Format::Json => writeln!(
            output,
            "{}",
            serde_json::to_string(w).expect("serializable")
        ),
        Format::Csv => {
            writeln!(output, "p,case,n,eps,n0,k,N,cover_verified")?;
            writeln!(
                output,
                "{},{},{},{},{},{},{},{}",
                w.p,
                w.case_number,
                w.n,
                w.eps,
                w.n0.map_or(String::new(), |v| v.to_string()),
                w.k.map_or(String::new(), |v| v.to_string()),
                w.cover_order,
                w.cover_verified
            )
        }
        Format::Text => {
            writeln!(
                output,
                "p={} |A|={} n={} eps={} case={} n0={} k={} N={} cover={}",
                w.p,
                w.a.len(),
                w.n,
                w.eps,
                w.case_number,
                w.n0.map_or("-".to_string(), |v| v.to_string()),
                w.k.map_or("-".to_string(), |v| v.to_string()),
                w.cover_order,
                if w.cover_verified {
                    "verified"
                } else {
                    "UNVERIFIED"
                }
            )?;
            let sizes: Vec<String> = w
                .intermediate_sizes
                .iter()
                .map(|(label, size)| format!("{label}={size}"))
                .collect();
            writeln!(output, "sizes: {}", sizes.join(" "))
        }
    }
}

fn outcome_str(o: Outcome) -> &'static str {
    match o {
        Outcome::Holds => "holds",
        Outcome::Fails => "fails",
        Outcome::Vacuous => "vacuous",
    }
}

fn bindings_str(inst: &BoundInstance) -> String {
    let mut parts = Vec::new();
    for (label, set) in &inst.sets {
        parts.push(format!("{label}={}", set_literal(set)));
    }
    for (label, v) in &inst.scalars {
        parts.push(format!("{label}={v}"));
    }
    for (label, v) in &inst.reals {
        parts.push(format!("{label}={v}"));
    }
    parts.join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn literal_examples() {
        let s = parse_set_literal("{1,2,5..9}", m(101)).unwrap();
        assert_eq!(s.elements(), vec![1, 2, 5, 6, 7, 8, 9]);
        let s = parse_set_literal("{1..11}", m(101)).unwrap();
        assert_eq!(s.elements(), (1..=11).collect::<Vec<_>>());
        let s = parse_set_literal("{103}", m(101)).unwrap();
        assert_eq!(s.elements(), vec![2]);
    }

    #[test]
    fn literal_whitespace_and_duplicates() {
        let s = parse_set_literal(" { 3 , 1 .. 2 , 3 } ", m(7)).unwrap();
        assert_eq!(s.elements(), vec![1, 2, 3]);
    }

    #[test]
    fn literal_wide_range_covers_everything() {
        let s = parse_set_literal("{0..100000}", m(101)).unwrap();
        assert!(s.is_full());
    }

    #[test]
    fn literal_errors() {
        assert_eq!(parse_set_literal("{}", m(7)), Err(LiteralError::EmptySet));
        assert!(matches!(
            parse_set_literal("1,2", m(7)),
            Err(LiteralError::Syntax(_))
        ));
        assert!(matches!(
            parse_set_literal("{5..2}", m(7)),
            Err(LiteralError::Syntax(_))
        ));
        assert!(matches!(
            parse_set_literal("{a}", m(7)),
            Err(LiteralError::Syntax(_))
        ));
        assert!(matches!(
            parse_set_literal("{1,,2}", m(7)),
            Err(LiteralError::Syntax(_))
        ));
    }

    #[test]
    fn literal_round_trip() {
        let s = parse_set_literal("{1,2,4}", m(7)).unwrap();
        assert_eq!(set_literal(&s), "{1,2,4}");
        assert_eq!(parse_set_literal(&set_literal(&s), m(7)).unwrap(), s);
    }
}
