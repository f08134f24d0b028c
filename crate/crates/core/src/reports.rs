//! Command-line front end: argument parsing, run configuration and report
//! output as JSON envelopes, CSV or aligned text.
//!
//! Exit codes: 0 on success, 1 on a library error, 2 on a usage error and
//! 3 when `check42 --expect-clean-above W` finds a violation with `m > W`.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arithmetic::{greatest_prime_factor, is_smooth, radical, s_part, FactorEffort, PrimeSet};
use crate::effective_bounds::{default_cofactor_cap, smooth_threshold, three_digit_certificate};
use crate::lfl_bounds::{matveev_bound, parse_rational, yu_bound, BoundEvaluation, LinearFormInstance};
use crate::rigorous::{DEFAULT_PRECISION, MAX_PRECISION, MIN_PRECISION};
use crate::sparse_digits::{enumerate_sparse, Stop};
use crate::sunit_solver::{check_problem42, p_table, solve_three_digit, verify_spart_trend, SolveOptions, Source, TrendRow};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FINDING: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Settings shared by every subcommand, echoed in each report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub precision: u32,
    pub effort: FactorEffort,
    pub workers: usize,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision: DEFAULT_PRECISION,
            effort: FactorEffort::default(),
            workers: 1,
            format: Format::Json,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(MIN_PRECISION..=MAX_PRECISION).contains(&self.precision) {
            return Err(Error::InvalidArgument(format!(
                "precision must lie in [{MIN_PRECISION}, {MAX_PRECISION}], got {}",
                self.precision
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("worker count must be at least 1".into()));
        }
        if self.effort.trial_ceiling < 2 {
            return Err(Error::InvalidArgument("trial ceiling must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: Vec<String>,
    pub config: RunConfig,
    pub result: serde_json::Value,
    /// Hex SHA-256 of the compact JSON of `result`.
    pub content_hash: String,
}

impl ReportEnvelope {
    pub fn new(command: Vec<String>, config: RunConfig, result: serde_json::Value) -> Self {
        let content_hash = content_hash(&result);
        Self { command, config, result, content_hash }
    }

    pub fn hash_matches(&self) -> bool {
        content_hash(&self.result) == self.content_hash
    }
}

pub fn content_hash(result: &serde_json::Value) -> String {
    let bytes = serde_json::to_vec(result).expect("JSON values always serialize");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Parser)]
#[command(name = "sparse-sunit", version, about = "Sparse integers, S-parts and three-digit S-unit relations")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Working precision in bits for rigorous evaluation.
    #[arg(long, global = true, env = "SPARSE_SUNIT_PRECISION", default_value_t = DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u32).range(MIN_PRECISION as i64..=MAX_PRECISION as i64))]
    precision: u32,
    /// Solver threads.
    #[arg(long, global = true, env = "SPARSE_SUNIT_WORKERS", default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Trial division ceiling for factorization.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..))]
    trial_ceiling: u64,
    /// Run Pollard-Brent rho after trial division.
    #[arg(long, global = true)]
    second_stage: bool,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    iteration_budget: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integers with at most k nonzero base-b digits, not divisible by b, in increasing order.
    Enumerate {
        #[arg(long)]
        base: u64,
        #[arg(short = 'k', long = "digits")]
        k: usize,
        #[arg(long, conflicts_with = "ceiling", required_unless_present = "ceiling")]
        count: Option<usize>,
        /// Largest value to emit.
        #[arg(long)]
        ceiling: Option<String>,
    },
    /// S-part and cofactor of n.
    Spart {
        #[arg(long)]
        n: String,
        #[arg(long)]
        primes: String,
    },
    /// Greatest prime factor of n.
    Pfactor {
        #[arg(long)]
        n: String,
    },
    /// Greatest square-free divisor of n.
    Radical {
        #[arg(long)]
        n: String,
    },
    /// Whether every prime factor of n is at most the bound.
    Smooth {
        #[arg(long)]
        n: String,
        #[arg(long)]
        bound: u64,
    },
    /// Linear forms in logarithms estimates.
    Bound {
        #[command(subcommand)]
        kind: BoundCommand,
    },
    /// Bound certificate for d3 b^m + d2 b^n + d1 = [u]_S M.
    Certify {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        primes: String,
        /// Largest cofactor M covered; defaults to max(b, 3).
        #[arg(long)]
        cofactor_cap: Option<String>,
    },
    /// (1 - eps) log log n / log log log n.
    Threshold {
        /// Accepts 1e100 and similar, expanded exactly.
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "0.1")]
        eps: String,
    },
    /// All S-unit relations d3 b^m + d2 b^n + d1 with m <= mmax.
    Solve {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        primes: String,
        #[arg(long)]
        mmax: u32,
        /// Exclude relations with d2 = 0.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 10)]
        residue_exponent: u32,
        /// Test every candidate without residue screening.
        #[arg(long)]
        no_prune: bool,
    },
    /// [2^m + 2^n + 1]_{3,5} against 2^{3m/4}.
    Check42 {
        #[arg(long)]
        mmax: u32,
        /// Exit with status 3 if a violation has m above this value.
        #[arg(long)]
        expect_clean_above: Option<u32>,
    },
    /// S-parts along the sparse sequence against u^eps.
    Trend {
        #[arg(long)]
        base: u64,
        #[arg(short = 'k', long = "digits")]
        k: usize,
        #[arg(long)]
        primes: String,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value = "0.5")]
        eps: String,
    },
    /// Greatest prime factors along a sparse or a^m + c^n + 1 sequence.
    Ptable {
        #[arg(long, requires = "k", conflicts_with_all = ["a", "c"])]
        base: Option<u64>,
        #[arg(short = 'k', long = "digits")]
        k: Option<usize>,
        #[arg(long, requires = "c", required_unless_present = "base")]
        a: Option<u64>,
        #[arg(long, requires = "a")]
        c: Option<u64>,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value = "0.1")]
        eps: String,
    },
}

#[derive(Debug, Subcommand)]
enum BoundCommand {
    /// Lower bound for log|Λ|.
    Matveev {
        /// JSON instance, or @path to read it from a file.
        #[arg(long)]
        instance: String,
    },
    /// Upper bound for v_p(Λ).
    Yu {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        instance: String,
        /// B >= max(|b_i|, 3).
        #[arg(long = "b-bound")]
        b_bound: String,
        /// B_n with B >= B_n >= |b_n|.
        #[arg(long = "b-last")]
        b_last: String,
        #[arg(long, default_value = "1/2")]
        delta: String,
    },
}

/// A report rendered as rows of strings for CSV and text output.
struct Table {
    headers: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

struct Outcome {
    result: serde_json::Value,
    table: Table,
    exit: i32,
}

fn outcome<T: Serialize>(payload: &T, headers: &'static [&'static str], rows: Vec<Vec<String>>) -> Result<Outcome> {
    let result = serde_json::to_value(payload).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(Outcome { result, table: Table { headers, rows }, exit: EXIT_OK })
}

/// Non-negative integer from a decimal or scientific literal such as `1e100`.
pub fn parse_natural(s: &str) -> Result<BigUint> {
    let r = parse_rational(s)?;
    if !r.is_integer() || r.is_negative() {
        return Err(Error::InvalidArgument(format!("not a non-negative integer: {s:?}")));
    }
    Ok(r.to_integer().to_biguint().expect("non-negative"))
}

fn parse_positive(s: &str) -> Result<BigUint> {
    let n = parse_natural(s)?;
    if n.bits() == 0 {
        return Err(Error::NonPositive);
    }
    Ok(n)
}

pub fn parse_primes(s: &str) -> Result<PrimeSet> {
    let primes = s
        .split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| Error::InvalidArgument(format!("not a prime: {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    PrimeSet::new(primes)
}

fn parse_instance(s: &str) -> Result<LinearFormInstance> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{path}: {e}")))?,
        None => s.to_owned(),
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("bad instance: {e}")))
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn powers(primes: &PrimeSet, exps: &[u64]) -> String {
    join(primes.primes().iter().zip(exps).map(|(q, r)| format!("{q}^{r}")), "*")
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn bound_rows(ev: &BoundEvaluation) -> Vec<Vec<String>> {
    vec![vec![
        serde_json::to_value(&ev.kind).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default(),
        ev.value.to_string(),
        ev.value_f64().to_string(),
        ev.enclosure.lower().to_string(),
        ev.enclosure.upper().to_string(),
        ev.b.midpoint_f64().to_string(),
        ev.precision.to_string(),
    ]]
}

const BOUND_HEADERS: &[&str] = &["kind", "value", "value_f64", "lower", "upper", "b", "precision"];

fn trend_rows(rows: &[TrendRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                r.value.to_string(),
                opt(&r.s_part),
                opt(&r.cofactor),
                opt(&r.below_eps),
            ]
        })
        .collect()
}

fn ptable_rows(rows: &[TrendRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let lp = r.largest_prime.as_ref();
            vec![
                r.index.to_string(),
                r.value.to_string(),
                join(r.witnesses.iter().map(|(m, n)| format!("{m}:{n}")), ";"),
                lp.and_then(|l| l.prime.as_ref()).map(ToString::to_string).unwrap_or_default(),
                lp.map(|l| format!("{:?}", l.status).to_lowercase()).unwrap_or_default(),
                opt(&r.threshold),
                opt(&r.exceeds_threshold),
            ]
        })
        .collect()
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    let prec = cfg.precision;
    let effort = &cfg.effort;
    match cmd {
        Command::Enumerate { base, k, count, ceiling } => {
            let stop = match (count, ceiling) {
                (Some(c), _) => Stop::Count(*c),
                (None, Some(c)) => Stop::Ceiling(parse_natural(c)?),
                (None, None) => return Err(Error::InvalidArgument("need --count or --ceiling".into())),
            };
            let xs = enumerate_sparse(*base, *k, &stop)?;
            let rows = xs
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    vec![
                        (i + 1).to_string(),
                        x.value.to_string(),
                        x.nonzero_digits().to_string(),
                        join(x.terms.iter().map(|(d, e)| format!("{d}*{base}^{e}")), "+"),
                    ]
                })
                .collect();
            outcome(&xs, &["index", "value", "nonzero_digits", "terms"], rows)
        }
        Command::Spart { n, primes } => {
            let f = s_part(&parse_positive(n)?, &parse_primes(primes)?)?;
            let row = vec![f.n.to_string(), f.s_part().to_string(), f.cofactor.to_string(), powers(&f.primes, &f.exponents)];
            outcome(&f, &["n", "s_part", "cofactor", "exponents"], vec![row])
        }
        Command::Pfactor { n } => {
            let n = parse_natural(n)?;
            let lp = greatest_prime_factor(&n, effort)?;
            let row = vec![
                n.to_string(),
                opt(&lp.prime),
                format!("{:?}", lp.status).to_lowercase(),
                lp.unfactored.to_string(),
            ];
            outcome(&lp, &["n", "prime", "status", "unfactored"], vec![row])
        }
        Command::Radical { n } => {
            let n = parse_natural(n)?;
            let r = radical(&n, effort)?;
            let row = vec![n.to_string(), r.value.to_string(), format!("{:?}", r.status).to_lowercase()];
            outcome(&r, &["n", "radical", "status"], vec![row])
        }
        Command::Smooth { n, bound } => {
            let n = parse_positive(n)?;
            let s = is_smooth(&n, *bound, effort)?;
            let label = serde_json::to_value(s).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
            outcome(&s, &["n", "bound", "result"], vec![vec![n.to_string(), bound.to_string(), label]])
        }
        Command::Bound { kind } => {
            let ev = match kind {
                BoundCommand::Matveev { instance } => matveev_bound(&parse_instance(instance)?, prec)?,
                BoundCommand::Yu { prime, instance, b_bound, b_last, delta } => yu_bound(
                    *prime,
                    &parse_instance(instance)?,
                    &parse_rational(b_bound)?,
                    &parse_rational(b_last)?,
                    &parse_rational(delta)?,
                    prec,
                )?,
            };
            outcome(&ev, BOUND_HEADERS, bound_rows(&ev))
        }
        Command::Certify { base, primes, cofactor_cap } => {
            let cap = match cofactor_cap {
                Some(c) => parse_positive(c)?,
                None => default_cofactor_cap(*base),
            };
            let cert = three_digit_certificate(*base, &parse_primes(primes)?, &cap, prec)?;
            let row = vec![
                cert.base.to_string(),
                join(cert.primes.primes(), ";"),
                cert.cofactor_cap.to_string(),
                cert.m0.to_string(),
                cert.archimedean.m_bound.to_string(),
                cert.padic.m_bound.to_string(),
                opt(&cert.padic.prime),
                cert.exponent_f64.to_string(),
                cert.exponent_threshold.to_string(),
                cert.precision_used.to_string(),
            ];
            let headers = &[
                "base",
                "primes",
                "cofactor_cap",
                "m0",
                "archimedean_m_bound",
                "padic_m_bound",
                "padic_prime",
                "exponent",
                "exponent_threshold",
                "precision_used",
            ];
            outcome(&cert, headers, vec![row])
        }
        Command::Threshold { n, eps } => {
            let t = smooth_threshold(&parse_natural(n)?, &parse_rational(eps)?, prec)?;
            let row = vec![
                t.query.n.to_string(),
                t.query.eps.to_string(),
                t.value.to_string(),
                t.enclosure.lower().to_string(),
                t.enclosure.upper().to_string(),
            ];
            outcome(&t, &["n", "eps", "value", "lower", "upper"], vec![row])
        }
        Command::Solve { base, primes, mmax, strict, residue_exponent, no_prune } => {
            let set = parse_primes(primes)?;
            let opts = SolveOptions {
                workers: cfg.workers,
                residue_exponent: *residue_exponent,
                strict: *strict,
                prune: !no_prune,
            };
            let sols = solve_three_digit(*base, &set, *mmax, &opts)?;
            let rows = sols
                .iter()
                .map(|s| {
                    vec![
                        s.value.to_string(),
                        s.m.to_string(),
                        opt(&s.n),
                        s.d3.to_string(),
                        s.d2.to_string(),
                        s.d1.to_string(),
                        powers(&set, &s.exponents),
                    ]
                })
                .collect();
            outcome(&sols, &["value", "m", "n", "d3", "d2", "d1", "exponents"], rows)
        }
        Command::Check42 { mmax, expect_clean_above } => {
            let v = check_problem42(*mmax)?;
            let rows = v
                .iter()
                .map(|x| {
                    vec![
                        x.m.to_string(),
                        x.n.to_string(),
                        x.value.to_string(),
                        x.s_part.to_string(),
                        x.s_part_log2.to_string(),
                        x.cap_log2.to_string(),
                    ]
                })
                .collect();
            let mut out = outcome(&v, &["m", "n", "value", "s_part", "s_part_log2", "cap_log2"], rows)?;
            if let Some(w) = expect_clean_above {
                if v.iter().any(|x| x.m > *w) {
                    out.exit = EXIT_FINDING;
                }
            }
            Ok(out)
        }
        Command::Trend { base, k, primes, count, eps } => {
            let rows = verify_spart_trend(*base, *k, &parse_primes(primes)?, *count, &parse_rational(eps)?)?;
            let table = trend_rows(&rows);
            outcome(&rows, &["index", "value", "s_part", "cofactor", "below_eps"], table)
        }
        Command::Ptable { base, k, a, c, count, eps } => {
            let source = match (base, k, a, c) {
                (Some(base), Some(k), _, _) => Source::Sparse { base: *base, k: *k },
                (_, _, Some(a), Some(c)) => Source::ThreeTerm { a: *a, c: *c },
                _ => return Err(Error::InvalidArgument("need --base with -k, or --a with --c".into())),
            };
            let rows = p_table(source, *count, effort, &parse_rational(eps)?)?;
            let table = ptable_rows(&rows);
            let headers = &["index", "value", "witnesses", "prime", "status", "threshold", "exceeds_threshold"];
            outcome(&rows, headers, table)
        }
    }
}

fn write_csv(w: &mut dyn Write, table: &Table) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(table.headers)?;
    for row in &table.rows {
        out.write_record(row)?;
    }
    out.flush()
}

fn write_text(w: &mut dyn Write, env: &ReportEnvelope, table: &Table) -> std::io::Result<()> {
    writeln!(w, "# {}", env.command.join(" "))?;
    writeln!(w, "# sha256 {}", env.content_hash)?;
    let mut widths: Vec<usize> = table.headers.iter().map(|h| h.len()).collect();
    for row in &table.rows {
        for (wd, cell) in widths.iter_mut().zip(row) {
            *wd = (*wd).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, wd)| format!("{c:>wd$}")).collect();
        padded.join("  ").trim_end().to_owned()
    };
    writeln!(w, "{}", line(table.headers.to_vec()))?;
    for row in &table.rows {
        writeln!(w, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

/// Runs one invocation, writing the report to `out` and diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let g = &cli.global;
    let cfg = RunConfig {
        precision: g.precision,
        effort: FactorEffort {
            trial_ceiling: g.trial_ceiling,
            second_stage: g.second_stage,
            iteration_budget: g.iteration_budget,
        },
        workers: g.workers.to_usize().unwrap_or(usize::MAX),
        format: g.format,
        seed: g.seed,
    };
    if let Err(e) = cfg.validate() {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    let outcome = match execute(&cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let command = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let env = ReportEnvelope::new(command, cfg, outcome.result);
    let written = match env.config.format {
        Format::Json => serde_json::to_writer_pretty(&mut *out, &env)
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(out)),
        Format::Csv => write_csv(out, &outcome.table),
        Format::Text => write_text(out, &env, &outcome.table),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_ERROR;
    }
    outcome.exit
}

/// Runs one invocation against standard output and standard error.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("sparse-sunit").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn envelope(args: &[&str]) -> ReportEnvelope {
        let (code, out, err) = run(args);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn natural_literals() {
        assert_eq!(parse_natural("1e3").unwrap(), BigUint::from(1000u32));
        assert_eq!(parse_natural("2.5e1").unwrap(), BigUint::from(25u32));
        assert_eq!(parse_natural("1e100").unwrap(), BigUint::from(10u32).pow(100));
        assert!(parse_natural("1.5").is_err());
        assert!(parse_natural("-3").is_err());
        assert!(parse_natural("abc").is_err());
    }

    #[test]
    fn enumerate_count() {
        let env = envelope(&["enumerate", "--base", "2", "-k", "3", "--count", "10"]);
        let values: Vec<String> = env.result.as_array().unwrap().iter().map(|x| x["value"].as_str().unwrap().to_owned()).collect();
        assert_eq!(values, ["1", "3", "5", "7", "9", "11", "13", "17", "19", "21"]);
        assert!(env.hash_matches());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(&[]).0, EXIT_USAGE);
        assert_eq!(run(&["threshold", "--n", "1e100", "--precision", "32"]).0, EXIT_USAGE);
        assert_eq!(run(&["solve", "--base", "2", "--primes", "3", "--mmax", "5", "--workers", "0"]).0, EXIT_USAGE);
        assert_eq!(run(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn library_errors_exit_one() {
        let (code, _, err) = run(&["threshold", "--n", "100"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("outside domain"));
        assert_eq!(run(&["spart", "--n", "10", "--primes", "4"]).0, EXIT_ERROR);
    }

    #[test]
    fn check42_watermark() {
        assert_eq!(run(&["check42", "--mmax", "10", "--expect-clean-above", "6"]).0, EXIT_OK);
        assert_eq!(run(&["check42", "--mmax", "10", "--expect-clean-above", "5"]).0, EXIT_FINDING);
        assert_eq!(run(&["check42", "--mmax", "10"]).0, EXIT_OK);
    }

    #[test]
    fn csv_headers_always_present() {
        let (code, out, _) = run(&["check42", "--mmax", "3", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "m,n,value,s_part,s_part_log2,cap_log2\n");
        let (_, out, _) = run(&["spart", "--n", "1049601", "--primes", "3,7", "--format", "csv"]);
        assert_eq!(out, "n,s_part,cofactor,exponents\n1049601,21,49981,3^1*7^1\n");
    }

    #[test]
    fn text_output_has_hash() {
        let (code, out, _) = run(&["radical", "--n", "48", "--format", "text"]);
        assert_eq!(code, 0);
        assert!(out.contains("# sha256 "));
        assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["48", "6", "complete"]));
    }
}
