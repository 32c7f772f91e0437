//! The `segre` command line: integral tables, verification suites and the
//! series oracle.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::coeff::{DPoly, Rational};
use crate::error::{CacheError, Error, PreconditionError};
use crate::integrals::{
    check_chain_vanishing, check_grading, check_i_and_ii, check_main_theorem, check_wkmain,
    check_xi, lemma_combi, lemma_combi2, CheckOutcome, IntegralEngine, IntegralRecord,
};
use crate::operators::{apply_op, chain_closed_form, double_chain_closed_form, OpContext, OpExpr};
use crate::series::{
    curve_closed_form, expected_q, fit_universal_exponents, mop_closed_form, PowerSeries,
};
use crate::symalg::{Element, Rules};

/// Bumped whenever operator formulas or the record layout change.
pub const CACHE_VERSION: u32 = 1;

/// Overrides the default cache directory.
pub const CACHE_DIR_ENV: &str = "SEGRE_CACHE_DIR";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DMode {
    Symbolic,
    Fixed(Vec<i64>),
}

fn parse_d_mode(s: &str) -> Result<DMode, String> {
    if s == "symbolic" {
        return Ok(DMode::Symbolic);
    }
    parse_d_list(s).map(DMode::Fixed)
}

/// A comma-separated list of curve degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DList(pub Vec<i64>);

fn parse_d_set(s: &str) -> Result<DList, String> {
    parse_d_list(s).map(DList)
}

fn parse_d_list(s: &str) -> Result<Vec<i64>, String> {
    let values = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| format!("not an integer: {p:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("empty list".into());
    }
    Ok(values)
}

#[derive(Debug, Parser)]
#[command(
    name = "segre",
    version,
    about = "Segre integrals on Hilbert schemes of points of the plane"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Keep classes beyond the dimension of the Hilbert scheme.
    #[arg(long, global = true)]
    pub no_prune: bool,
    /// Also set θ_1^0 = θ_1^1 = 0.
    #[arg(long, global = true)]
    pub theta1: bool,
    /// Cache directory (default: $SEGRE_CACHE_DIR, then ~/.cache/segre).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate ∫ s_2n for n = 0..n-max.
    Integrals {
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        /// `symbolic` or a comma-separated list of curve degrees.
        #[arg(long, default_value = "symbolic", value_parser = parse_d_mode)]
        d: DMode,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Closed-form series and its comparison with the recursion.
    Series {
        #[command(subcommand)]
        sub: SeriesCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// The integrals vanish at d = 3 (and d = 0) and are integers for d = 0..5.
    Vanishing {
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Balanced chain sums are (d-3)-divisible.
    MainTheorem {
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 6)]
        m_max: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// The special δ2/δ3 sum is (d-3)-divisible, and d(d-3)-divisible for k >= 1.
    Wkmain {
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        #[arg(long, default_value_t = 6)]
        m_max: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Ad-prefixed Ξ(k) is (d-3)-divisible.
    Xi {
        #[arg(long, default_value_t = 1)]
        k_max: usize,
        #[arg(long, default_value_t = 5)]
        m_max: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        prefix_max: usize,
    },
    /// Over-weighted chains vanish; closed forms match operator compositions.
    Chains {
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 6)]
        m_max: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// δ2/δ3-prefixed chain sums are (d-3)-divisible.
    IAndIi {
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        #[arg(long, default_value_t = 2)]
        r_max: usize,
        #[arg(long, default_value_t = 5)]
        m_max: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// The two binomial identities.
    Identities {
        #[arg(long, default_value_t = 10)]
        combi_k_max: u32,
        #[arg(long, default_value_t = 3)]
        combi2_k_max: u32,
    },
    /// Signature and degree shifts of each δ on random monomials.
    Grading {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SeriesCmd {
    /// Print the closed-form z-series for the given Chern data.
    ClosedForm {
        #[arg(long, allow_hyphen_values = true)]
        c2: Rational,
        #[arg(long, allow_hyphen_values = true)]
        c1sq: Rational,
        #[arg(long, allow_hyphen_values = true)]
        c1k: Rational,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Compare recursion integrals with the closed form for each d.
    Compare {
        #[arg(long, value_parser = parse_d_set, default_value = "1,2,4,5")]
        d: DList,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Fit log S_d = d²Q + dL + C and test L = -3Q, C = 0.
    Fit {
        #[arg(long, value_parser = parse_d_set, default_value = "1,2,4,5")]
        d_list: DList,
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
}

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub threads: u32,
    pub pruning: bool,
    pub theta1_rule: bool,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Self {
        let cache_dir = if g.no_cache {
            None
        } else {
            g.cache_dir
                .clone()
                .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
                .or_else(|| {
                    std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache").join("segre"))
                })
        };
        RunConfig {
            threads: g.threads,
            pruning: !g.no_prune,
            theta1_rule: g.theta1,
            cache_dir,
            format: g.format,
        }
    }

    pub fn rules(&self) -> Rules {
        Rules {
            normalize: true,
            prune: self.pruning,
            kill_theta_one: self.theta1_rule,
        }
    }

    fn context(&self, d: Option<i64>) -> OpContext {
        let base = match d {
            Some(d) => OpContext::fixed(d),
            None => OpContext::default(),
        };
        OpContext {
            rules: self.rules(),
            parallel: self.threads > 1,
            ..base
        }
    }

    fn cache_path(&self, d: Option<i64>) -> Option<PathBuf> {
        let mode = d.map_or_else(|| "symbolic".to_string(), |d| format!("d{d}"));
        let name = format!(
            "integrals-v{CACHE_VERSION}-{mode}-prune{}-theta1{}.json",
            self.pruning as u8, self.theta1_rule as u8
        );
        self.cache_dir.as_ref().map(|dir| dir.join(name))
    }

    /// Integral records for `n = 0..=n_max`, symbolic if `d` is `None`.
    pub fn integral_table(&self, d: Option<i64>, n_max: u32) -> Result<Vec<IntegralRecord>, Error> {
        let path = self.cache_path(d);
        if let Some(records) = path.as_deref().and_then(load_cache) {
            if records.len() > n_max as usize {
                return Ok(records[..=n_max as usize].to_vec());
            }
        }
        let records = IntegralEngine::new(self.context(d)).table(n_max)?;
        if let Some(path) = path {
            store_cache(&path, &records)?;
        }
        Ok(records)
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    records: Vec<IntegralRecord>,
}

fn load_cache(path: &Path) -> Option<Vec<IntegralRecord>> {
    let text = fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    let contiguous = file
        .records
        .iter()
        .enumerate()
        .all(|(i, r)| r.n as usize == i);
    (file.version == CACHE_VERSION && contiguous).then_some(file.records)
}

fn store_cache(path: &Path, records: &[IntegralRecord]) -> Result<(), CacheError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let file = CacheFile {
        version: CACHE_VERSION,
        records: records.to_vec(),
    };
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec(&file)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn rational_pair(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn poly_json(p: &DPoly) -> serde_json::Value {
    json!(p.coeffs().iter().map(rational_pair).collect::<Vec<_>>())
}

/// Parses arguments, runs the command in a pool of the requested size and
/// returns the process exit code. Reports go to `out`, diagnostics to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let cfg = RunConfig::from_args(&cli.global);
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads as usize)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_FAIL;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(&cli.command, &cfg, &mut buf));
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        eprintln!("error: {e}");
        return EXIT_FAIL;
    }
    match result {
        Ok(code) => code,
        Err(Error::Precondition(e)) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Integrals { n_max, d } => cmd_integrals(cfg, *n_max, d, out),
        Command::Verify { suite } => cmd_verify(cfg, suite, out),
        Command::Series { sub } => cmd_series(cfg, sub, out),
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Cache(CacheError::Io(e))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Cache(CacheError::Io(io::Error::other(e)))
}

pub fn cmd_integrals(
    cfg: &RunConfig,
    n_max: u32,
    d: &DMode,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    match d {
        DMode::Symbolic => {
            let table = cfg.integral_table(None, n_max)?;
            write_symbolic(cfg.format, &table, out)?;
        }
        DMode::Fixed(ds) => {
            let mut columns = Vec::with_capacity(ds.len());
            for &d in ds {
                columns.push(cfg.integral_table(Some(d), n_max)?);
            }
            write_fixed(cfg.format, ds, &columns, n_max, out)?;
        }
    }
    Ok(EXIT_PASS)
}

fn write_symbolic(
    format: OutputFormat,
    table: &[IntegralRecord],
    out: &mut dyn Write,
) -> Result<(), Error> {
    match format {
        OutputFormat::Json => {
            let rows: Vec<_> = table
                .iter()
                .map(|r| json!({"n": r.n, "poly": poly_json(&r.value)}))
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&rows).map_err(CacheError::from)?
            )
            .map_err(io_err)?;
        }
        OutputFormat::Csv => {
            let width = table
                .iter()
                .filter_map(|r| r.value.degree())
                .max()
                .unwrap_or(0)
                + 1;
            let mut w = csv::Writer::from_writer(out);
            let header =
                std::iter::once("n".to_string()).chain((0..width).map(|i| format!("c{i}")));
            w.write_record(header).map_err(csv_err)?;
            for r in table {
                let cells = std::iter::once(r.n.to_string())
                    .chain((0..width).map(|i| r.value.coeff(i).to_string()));
                w.write_record(cells).map_err(csv_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        OutputFormat::Text => {
            for r in table {
                writeln!(out, "n = {}: {}", r.n, r.value).map_err(io_err)?;
            }
        }
    }
    Ok(())
}

fn write_fixed(
    format: OutputFormat,
    ds: &[i64],
    columns: &[Vec<IntegralRecord>],
    n_max: u32,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let value = |col: usize, n: u32| columns[col][n as usize].value.coeff(0);
    match format {
        OutputFormat::Json => {
            let rows: Vec<_> = (0..=n_max)
                .map(|n| {
                    let values: Vec<_> = ds
                        .iter()
                        .enumerate()
                        .map(|(i, d)| json!({"d": d, "value": rational_pair(&value(i, n))}))
                        .collect();
                    json!({"n": n, "values": values})
                })
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&rows).map_err(CacheError::from)?
            )
            .map_err(io_err)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let header =
                std::iter::once("n".to_string()).chain(ds.iter().map(|d| format!("d={d}")));
            w.write_record(header).map_err(csv_err)?;
            for n in 0..=n_max {
                let cells = std::iter::once(n.to_string())
                    .chain((0..ds.len()).map(|i| value(i, n).to_string()));
                w.write_record(cells).map_err(csv_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        OutputFormat::Text => {
            for n in 0..=n_max {
                let cells: Vec<String> = ds
                    .iter()
                    .enumerate()
                    .map(|(i, d)| format!("d={d}: {}", value(i, n)))
                    .collect();
                writeln!(out, "n = {n}: {}", cells.join(", ")).map_err(io_err)?;
            }
        }
    }
    Ok(())
}

/// One failed check: its parameters and what went wrong.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub params: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: &'static str,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    fn from_outcomes(suite: &'static str, outcomes: Vec<(String, CheckOutcome)>) -> Self {
        let checks = outcomes.len();
        let failures = outcomes
            .into_iter()
            .filter(|(_, o)| !o.passed)
            .map(|(params, o)| Failure {
                params,
                detail: o.witness.map_or_else(|| "failed".into(), |w| w.to_string()),
            })
            .collect();
        Report {
            suite,
            checks,
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn write_report(format: OutputFormat, report: &Report, out: &mut dyn Write) -> Result<(), Error> {
    match format {
        OutputFormat::Json => {
            let mut v = serde_json::to_value(report).map_err(CacheError::from)?;
            v["passed"] = json!(report.passed());
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&v).map_err(CacheError::from)?
            )
            .map_err(io_err)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["suite", "params", "detail"])
                .map_err(csv_err)?;
            for f in &report.failures {
                w.write_record([report.suite, &f.params, &f.detail])
                    .map_err(csv_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        OutputFormat::Text => {
            for f in &report.failures {
                writeln!(out, "FAIL {} [{}]: {}", report.suite, f.params, f.detail)
                    .map_err(io_err)?;
            }
            let passed = report.checks - report.failures.len();
            let verdict = if report.passed() { "pass" } else { "FAIL" };
            writeln!(
                out,
                "{}: {passed}/{} checks passed: {verdict}",
                report.suite, report.checks
            )
            .map_err(io_err)?;
        }
    }
    Ok(())
}

fn precondition(cond: bool, msg: impl Into<String>) -> Result<(), Error> {
    if cond {
        Ok(())
    } else {
        Err(PreconditionError(msg.into()).into())
    }
}

/// Runs every `(label, job)` on the pool and keeps the input order.
fn run_grid<P, F>(
    params: Vec<P>,
    label: impl Fn(&P) -> String + Sync,
    job: F,
) -> Result<Vec<(String, CheckOutcome)>, Error>
where
    P: Sync,
    F: Fn(&P) -> Result<CheckOutcome, PreconditionError> + Sync,
{
    params.par_iter().map(|p| Ok((label(p), job(p)?))).collect()
}

fn outcome(passed: bool, detail: impl FnOnce() -> String) -> CheckOutcome {
    CheckOutcome {
        passed,
        terms: 0,
        witness: (!passed).then(|| crate::integrals::Witness {
            monomial: detail(),
            coefficient: DPoly::zero(),
            reason: "mismatch",
        }),
    }
}

pub fn suite_report(cfg: &RunConfig, suite: &Suite) -> Result<Report, Error> {
    let rules = cfg.rules();
    let report = match *suite {
        Suite::Vanishing { n_max } => {
            let table = cfg.integral_table(None, n_max)?;
            let rows = table
                .iter()
                .map(|r| {
                    let at = |d: i64| r.value.eval(&Rational::from(d));
                    let bad = (0..=5)
                        .find(|&d| !at(d).is_integer())
                        .map(|d| format!("value at d={d} is {}", at(d)));
                    let bad = bad.or_else(|| {
                        (r.n >= 1 && !(at(3).is_zero() && at(0).is_zero()))
                            .then(|| format!("value {} does not vanish at d=3 and d=0", r.value))
                    });
                    (
                        format!("n={}", r.n),
                        outcome(bad.is_none(), || bad.unwrap_or_default()),
                    )
                })
                .collect();
            Report::from_outcomes("vanishing", rows)
        }
        Suite::MainTheorem {
            k_max,
            m_max,
            n_max,
        } => {
            precondition(
                k_max >= 1 && m_max >= 1 && n_max >= 1,
                "k-max, m-max and n-max must be at least 1",
            )?;
            let grid: Vec<_> = (1..=k_max)
                .flat_map(|k| {
                    (1..=m_max).flat_map(move |m| (k as u32..=n_max).map(move |n| (k, m, n)))
                })
                .collect();
            let rows = run_grid(
                grid,
                |&(k, m, n)| format!("k={k} m={m} n={n}"),
                |&(k, m, n)| check_main_theorem(k, m, n, rules),
            )?;
            Report::from_outcomes("main-theorem", rows)
        }
        Suite::Wkmain {
            k_max,
            m_max,
            n_max,
        } => {
            precondition(
                m_max >= 1 && n_max >= 1,
                "m-max and n-max must be at least 1",
            )?;
            let grid: Vec<_> = (0..=k_max)
                .flat_map(|k| (1..=m_max).flat_map(move |m| (1..=n_max).map(move |n| (k, m, n))))
                .collect();
            let rows = run_grid(
                grid,
                |&(k, m, n)| format!("k={k} m={m} n={n}"),
                |&(k, m, n)| check_wkmain(k, m, n, rules),
            )?;
            Report::from_outcomes("wkmain", rows)
        }
        Suite::Xi {
            k_max,
            m_max,
            n_max,
            prefix_max,
        } => {
            let prefixes = all_words(prefix_max);
            let mut grid = Vec::new();
            for k in 0..=k_max {
                for m in 1..=m_max {
                    for n in 1..=n_max {
                        grid.extend(prefixes.iter().map(|p| (k, m, n, p.clone())));
                    }
                }
            }
            let rows = run_grid(
                grid,
                |(k, m, n, p)| format!("k={k} m={m} n={n} prefix={p:?}"),
                |(k, m, n, p)| check_xi(*k, *m, *n, p, rules),
            )?;
            Report::from_outcomes("xi", rows)
        }
        Suite::Chains {
            k_max,
            m_max,
            n_max,
        } => {
            let mut grid = Vec::new();
            for k in 1..=k_max {
                for r in k + 1..=3 * k {
                    for m in 1..=m_max {
                        grid.extend((1..=n_max).map(|n| (k, r, m, n)));
                    }
                }
            }
            let mut rows = run_grid(
                grid,
                |&(k, r, m, n)| format!("vanishing k={k} r={r} m={m} n={n}"),
                |&(k, r, m, n)| check_chain_vanishing(k, r, m, n, rules),
            )?;
            rows.extend(closed_form_rows(k_max, m_max));
            Report::from_outcomes("chains", rows)
        }
        Suite::IAndIi {
            k_max,
            r_max,
            m_max,
            n_max,
        } => {
            let mut grid = Vec::new();
            for k in 0..=k_max {
                for r in 0..=r_max {
                    for m in 1..=m_max {
                        grid.extend((1..=n_max).map(|n| (k, r, m, n)));
                    }
                }
            }
            let rows = run_grid(
                grid,
                |&(k, r, m, n)| format!("k={k} r={r} m={m} n={n}"),
                |&(k, r, m, n)| check_i_and_ii(k, r, m, n, rules),
            )?;
            Report::from_outcomes("i-and-ii", rows)
        }
        Suite::Identities {
            combi_k_max,
            combi2_k_max,
        } => Report::from_outcomes("identities", identity_rows(combi_k_max, combi2_k_max)),
        Suite::Grading { seed, samples } => {
            let rows = run_grid(
                (0..4u8).collect(),
                |j| format!("d{j} seed={seed}"),
                |&j| check_grading(j, samples, seed),
            )?;
            Report::from_outcomes("grading", rows)
        }
    };
    Ok(report)
}

/// All words over `{0,1,2,3}` of length at most `max_len`, shortest first.
fn all_words(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<u8>| {
                (0..4u8).map(move |j| {
                    let mut w = w.clone();
                    w.push(j);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// `(δ_1)^k δ_0 (S_m)` and the double chains against their closed forms,
/// without any vanishing rules so that the comparison is a formal identity.
pub fn closed_form_rows(k_max: usize, m_max: u32) -> Vec<(String, CheckOutcome)> {
    let ctx = OpContext::raw();
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let n = k as u32 + 2;
        for m in 0..=m_max {
            let s = Element::segre(n, m);
            let mut chain = vec![1u8; k];
            chain.push(0);
            let lhs = apply_op(&OpExpr::chain(&chain), &s, &ctx);
            let rhs = chain_closed_form(k, m, n, &ctx);
            rows.push((
                format!("closed form k={k} m={m}"),
                outcome(lhs == rhs, || {
                    format!("(d1)^{k} d0 (S_{m}) differs from its expansion")
                }),
            ));
            for sh in 0..k {
                let mut chain = vec![1u8; k - 1 - sh];
                chain.push(0);
                chain.extend(std::iter::repeat_n(1u8, sh));
                chain.push(0);
                let lhs = apply_op(&OpExpr::chain(&chain), &s, &ctx);
                let rhs = double_chain_closed_form(k, sh, m, n, &ctx);
                rows.push((
                    format!("double chain k={k} s={sh} m={m}"),
                    outcome(lhs == rhs, || {
                        format!("double chain k={k} s={sh} on S_{m} differs from its expansion")
                    }),
                ));
            }
        }
    }
    rows
}

type ThetaFn = (&'static str, fn(u32) -> Rational);

/// The θ test functions: constant 1, `a + 1` and `a²`.
pub const THETA_TESTS: [ThetaFn; 3] = [
    ("1", |_| Rational::one()),
    ("a+1", |a| Rational::from(a as i64 + 1)),
    ("a^2", |a| Rational::from((a * a) as i64)),
];

pub fn identity_rows(combi_k_max: u32, combi2_k_max: u32) -> Vec<(String, CheckOutcome)> {
    let mut rows = Vec::new();
    for k in 1..=combi_k_max {
        for big_m in 0..k {
            let ok = lemma_combi(k, big_m);
            rows.push((
                format!("combi k={k} M={big_m}"),
                outcome(ok, || "binomial sum mismatch".into()),
            ));
        }
    }
    for k in 0..=combi2_k_max {
        for n in 0..=3 {
            for m in 0..=5 {
                for a in 0..=3 {
                    for (name, theta) in THETA_TESTS {
                        let ok = lemma_combi2(a, &Rational::from(n), m, k, &theta);
                        rows.push((
                            format!("combi2 k={k} N={n} m={m} a={a} theta={name}"),
                            outcome(ok, || "left and right sides differ".into()),
                        ));
                    }
                }
            }
        }
    }
    rows
}

pub fn cmd_verify(cfg: &RunConfig, suite: &Suite, out: &mut dyn Write) -> Result<i32, Error> {
    let report = suite_report(cfg, suite)?;
    write_report(cfg.format, &report, out)?;
    Ok(if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn write_series(format: OutputFormat, s: &PowerSeries, out: &mut dyn Write) -> Result<(), Error> {
    match format {
        OutputFormat::Json => {
            let v = json!({
                "var": s.var().symbol().to_string(),
                "coeffs": s.coeffs().iter().map(rational_pair).collect::<Vec<_>>(),
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&v).map_err(CacheError::from)?
            )
            .map_err(io_err)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["power", "coeff"]).map_err(csv_err)?;
            for (i, c) in s.coeffs().iter().enumerate() {
                w.write_record([i.to_string(), c.to_string()])
                    .map_err(csv_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        OutputFormat::Text => {
            let cells: Vec<String> = s.coeffs().iter().map(Rational::to_string).collect();
            writeln!(out, "{}", cells.join(", ")).map_err(io_err)?;
        }
    }
    Ok(())
}

pub fn cmd_series(cfg: &RunConfig, sub: &SeriesCmd, out: &mut dyn Write) -> Result<i32, Error> {
    match sub {
        SeriesCmd::ClosedForm {
            c2,
            c1sq,
            c1k,
            order,
        } => {
            write_series(cfg.format, &mop_closed_form(c2, c1sq, c1k, *order), out)?;
            Ok(EXIT_PASS)
        }
        SeriesCmd::Compare { d, order } => {
            precondition(*order >= 1, "order must be at least 1")?;
            let mut rows = Vec::new();
            for &d in &d.0 {
                let table = cfg.integral_table(Some(d), *order as u32)?;
                let closed = curve_closed_form(d, *order);
                for r in &table {
                    let (got, want) = (r.value.coeff(0), closed.coeff(r.n as usize).clone());
                    rows.push((
                        format!("d={d} n={}", r.n),
                        outcome(got == want, || {
                            format!("recursion gives {got}, closed form {want}")
                        }),
                    ));
                }
            }
            let report = Report::from_outcomes("series-compare", rows);
            write_report(cfg.format, &report, out)?;
            Ok(if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            })
        }
        SeriesCmd::Fit { d_list, order } => {
            precondition(*order >= 1, "order must be at least 1")?;
            let table = cfg.integral_table(None, *order as u32)?;
            let lookup = |n: usize, d: i64| table.get(n).map(|r| r.value.eval(&Rational::from(d)));
            let fit = match fit_universal_exponents(&d_list.0, *order, &lookup) {
                Err(e @ crate::error::SeriesError::SingularFit(_)) => {
                    return Err(PreconditionError(e.to_string()).into())
                }
                other => other?,
            };
            let minus_3q = fit.q.scale(&Rational::from(-3));
            let checks = [
                ("L = -3Q", fit.l == minus_3q),
                ("C = 0", fit.c.is_zero()),
                ("Q = -log(1+t) + 1/2 log(1+2t)", fit.q == expected_q(*order)),
            ];
            match cfg.format {
                OutputFormat::Json => {
                    let pairs =
                        |s: &PowerSeries| s.coeffs().iter().map(rational_pair).collect::<Vec<_>>();
                    let v = json!({
                        "Q": pairs(&fit.q),
                        "L": pairs(&fit.l),
                        "C": pairs(&fit.c),
                        "checks": checks.iter().map(|(name, ok)| json!({"check": name, "passed": ok})).collect::<Vec<_>>(),
                    });
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&v).map_err(CacheError::from)?
                    )
                    .map_err(io_err)?;
                }
                OutputFormat::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["power", "Q", "L", "C"]).map_err(csv_err)?;
                    for i in 0..=*order {
                        let cells = [
                            i.to_string(),
                            fit.q.coeff(i).to_string(),
                            fit.l.coeff(i).to_string(),
                            fit.c.coeff(i).to_string(),
                        ];
                        w.write_record(cells).map_err(csv_err)?;
                    }
                    w.flush().map_err(io_err)?;
                }
                OutputFormat::Text => {
                    writeln!(out, "Q = {}", fit.q).map_err(io_err)?;
                    writeln!(out, "L = {}", fit.l).map_err(io_err)?;
                    writeln!(out, "C = {}", fit.c).map_err(io_err)?;
                    for (name, ok) in &checks {
                        writeln!(out, "{name}: {}", if *ok { "pass" } else { "FAIL" })
                            .map_err(io_err)?;
                    }
                }
            }
            Ok(if checks.iter().all(|(_, ok)| *ok) {
                EXIT_PASS
            } else {
                EXIT_FAIL
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let mut full = vec!["segre", "--no-cache"];
        full.extend_from_slice(args);
        let code = run(full, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn d_mode_parsing() {
        assert_eq!(parse_d_mode("symbolic"), Ok(DMode::Symbolic));
        assert_eq!(parse_d_mode("1, 2,4"), Ok(DMode::Fixed(vec![1, 2, 4])));
        assert!(parse_d_mode("x").is_err());
        assert!(parse_d_list("").is_err());
    }

    #[test]
    fn symbolic_rows() {
        let (code, out) = run_str(&["integrals", "--n-max", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "n = 0: 1\nn = 1: 0\nn = 2: -1/2*d^2 + 3/2*d\n");
    }

    #[test]
    fn fixed_rows() {
        let (code, out) = run_str(&["integrals", "--n-max", "3", "--d", "3", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "n,d=3\n0,1\n1,0\n2,0\n3,0\n");
        let (_, out) = run_str(&["integrals", "--n-max", "2", "--d", "1", "--format", "csv"]);
        assert_eq!(out, "n,d=1\n0,1\n1,0\n2,1\n");
    }

    #[test]
    fn json_schema() {
        let (_, out) = run_str(&["--format", "json", "integrals", "--n-max", "2"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0], json!({"n": 0, "poly": [["1", "1"]]}));
        assert_eq!(v[1], json!({"n": 1, "poly": []}));
        assert_eq!(v[2]["poly"], json!([["0", "1"], ["3", "2"], ["-1", "2"]]));
    }

    #[test]
    fn closed_form_cubic() {
        let (code, out) = run_str(&[
            "series",
            "closed-form",
            "--c2",
            "9",
            "--c1sq",
            "9",
            "--c1k",
            "-9",
            "--order",
            "6",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "1, 0, 0, 0, 0, 0, 0\n");
    }

    #[test]
    fn invalid_parameters_exit_2() {
        assert_eq!(run_str(&["integrals", "--d", "x"]).0, EXIT_INVALID);
        assert_eq!(run_str(&["--threads", "0", "integrals"]).0, EXIT_INVALID);
        assert_eq!(
            run_str(&["verify", "main-theorem", "--k-max", "0"]).0,
            EXIT_INVALID
        );
        assert_eq!(
            run_str(&["series", "fit", "--d-list", "1,3,4"]).0,
            EXIT_INVALID
        );
    }

    #[test]
    fn words() {
        assert_eq!(all_words(0), vec![Vec::<u8>::new()]);
        assert_eq!(all_words(2).len(), 1 + 4 + 16);
    }
}
