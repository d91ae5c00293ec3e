//! Command-line front end: argument parsing, dispatch and output formatting.
//!
//! [`run`] returns the exit code and both output streams instead of printing,
//! so the binary is a thin wrapper and tests can drive it in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};
use subring_zeta::count::compositions;
use subring_zeta::galois::{parse_group_file, r2_csv, r2_row, table1, R2Row};
use subring_zeta::modular::{is_prime, primes_up_to};
use subring_zeta::series::parse_sidecar;
use subring_zeta::{
    assemble_counts, burnside_r, check_congruence_props, check_mu_bounds, check_quintic_exponent,
    check_wishful, fit_log_power, r2_closed_forms, r2_orbits, ring_from_kind, verify_a1,
    BoundCheckReport, Counter, Error, Family, GroupKind, LocalCountTable, RamifiedPolicy,
    SplittingType, StructureRing,
};

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "SUBRING_ZETA_CACHE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "subring-zeta",
    version,
    about = "Exact counts of subrings and orders"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Append-only JSON-lines cache of local counts.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    /// Size of the worker pool (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
    /// Search-node budget per count.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count subrings of index p^m.
    Count(CountArgs),
    /// Assemble f(k) and N(k) for a family up to a bound.
    Series(SeriesArgs),
    /// Orbit counts of permutation groups on unordered pairs.
    R2(R2Args),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    /// `split:<d>`, `monogenic:<poly>`, `unramified:<p>:<type>` or a ring-spec JSON file.
    #[arg(long)]
    pub ring: String,
    /// Primes: `7`, `2,3,5` or `2..13`.
    #[arg(long)]
    pub p: String,
    /// Exponents: `2`, `0..4` or `1,3`.
    #[arg(long, default_value = "1")]
    pub m: String,
    #[arg(long)]
    pub unital: bool,
    /// Recompute every cached value for this ring and compare.
    #[arg(long)]
    pub audit_cache: bool,
    /// Also list up to this many representatives per (p, m).
    #[arg(long)]
    pub dump_reps: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// `split:<d>` or `monogenic:<poly>`.
    #[arg(long)]
    pub family: String,
    #[arg(long = "B")]
    pub bound: u64,
    /// `exclude`, `error`, `direct` or `sidecar:<file>`.
    #[arg(long, default_value = "exclude")]
    pub ramified: String,
    /// Fit N(B) ~ C B^alpha (log B)^(beta-1).
    #[arg(long)]
    pub fit: bool,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<u32>,
    /// Write the fit JSON here (CSV output only).
    #[arg(long)]
    pub fit_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct R2Args {
    /// The built-in table of transitive groups of degree 3 to 5.
    #[arg(long, conflicts_with_all = ["group", "kind"])]
    pub table1: bool,
    /// Group JSON file (one group or a list).
    #[arg(long, conflicts_with = "kind")]
    pub group: Option<PathBuf>,
    /// `S5`, `A4`, `C6`, `D5`, `AGL(1,5)` or `solvable:<p>:<order>`.
    #[arg(long)]
    pub kind: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Congruence,
    Mu,
    A1,
    Quintic,
    Wishful,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub kmax: u32,
    #[arg(long, default_value_t = 6)]
    pub lmax: u32,
    /// Rank of the orders for the mu suite (3 to 6; default all).
    #[arg(long)]
    pub d: Option<usize>,
    /// Largest diagonal sum for the mu suite.
    #[arg(long)]
    pub weight: Option<u32>,
    /// Degree for the a1 suite.
    #[arg(long)]
    pub n: Option<usize>,
    /// Splitting type for the wishful suite (default: every partition of 5).
    #[arg(long = "type")]
    pub ty: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub mmax: u32,
    /// Exponents for the quintic suite.
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub slack: f64,
    #[arg(long, default_value_t = 1000)]
    pub witness_limit: usize,
    /// Drop runtime fields so reruns are byte-identical.
    #[arg(long)]
    pub omit_timing: bool,
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Output {
    fn new(stdout: String) -> Self {
        Output {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn note(&mut self, line: impl AsRef<str>) {
        self.stderr.push_str(line.as_ref());
        self.stderr.push('\n');
    }
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: error_json("usage", &e.to_string(), EXIT_INPUT),
                },
            };
        }
    };
    let result = match cli.config.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::Parse(format!("worker pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(out) => Outcome {
            code: out.code,
            stdout: out.stdout,
            stderr: out.stderr,
        },
        Err(e) => {
            let code = exit_code(&e);
            Outcome {
                code,
                stdout: String::new(),
                stderr: error_json(error_kind(&e), &e.to_string(), code),
            }
        }
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::ModulusTooLarge { .. } => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidRank(_) => "invalid_rank",
        Error::NotMonic(_) => "not_monic",
        Error::NotPrime(_) => "not_prime",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::InvalidRing(_) => "invalid_ring",
        Error::RamifiedPrime { .. } => "ramified_prime",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::MissingLocalData(_) => "missing_local_data",
        Error::UnsupportedKind(_) => "unsupported_kind",
        Error::InvalidPermutation(_) => "invalid_permutation",
        Error::InsufficientSamples(_) => "insufficient_samples",
        Error::Parse(_) => "parse",
        Error::ModulusTooLarge { .. } => "modulus_too_large",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

fn error_json(kind: &str, message: &str, code: i32) -> String {
    let mut s =
        json!({ "error": kind, "message": message.trim_end(), "exit_code": code }).to_string();
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<Output, Error> {
    let counter = make_counter(&cli.config)?;
    match &cli.command {
        Command::Count(a) => cmd_count(&cli.config, a, &counter),
        Command::Series(a) => cmd_series(&cli.config, a, &counter),
        Command::R2(a) => cmd_r2(&cli.config, a),
        Command::Verify(a) => cmd_verify(&cli.config, a, &counter),
    }
}

fn make_counter(config: &RunConfig) -> Result<Counter, Error> {
    let mut counter = Counter::new();
    if let Some(b) = config.budget {
        counter = counter.with_budget(b);
    }
    if let Some(path) = &config.cache {
        counter = counter.with_table(Arc::new(LocalCountTable::open(path)?));
    }
    Ok(counter)
}

/// A ring kind, or a path to a ring-spec JSON file.
pub fn load_ring(spec: &str) -> Result<StructureRing, Error> {
    let path = Path::new(spec);
    if path.is_file() {
        return StructureRing::from_spec_json(&std::fs::read_to_string(path)?);
    }
    ring_from_kind(spec)
}

fn parse_list(s: &str, what: &str) -> Result<Vec<u64>, Error> {
    let bad = || Error::Parse(format!("bad {what} list {s:?}"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b
                    .trim()
                    .trim_start_matches('=')
                    .parse()
                    .map_err(|_| bad())?;
                if a > b || b - a > 1_000_000 {
                    return Err(bad());
                }
                out.push((a, b));
            }
            None => {
                let a: u64 = item.parse().map_err(|_| bad())?;
                out.push((a, a));
            }
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out.into_iter().flat_map(|(a, b)| a..=b).collect())
}

/// `7`, `2,3,5` or `2..13` (primes in the range, inclusive).
pub fn parse_primes(s: &str) -> Result<Vec<u64>, Error> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if item.contains("..") {
            let r = parse_list(item, "prime")?;
            let (lo, hi) = (r[0], *r.last().expect("non-empty"));
            out.extend(primes_up_to(hi).into_iter().filter(|&p| p >= lo));
        } else {
            let p: u64 = item
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime {item:?}")))?;
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            out.push(p);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Parse(format!("no primes in {s:?}")));
    }
    Ok(out)
}

/// `2`, `0..4` or `1,3`.
pub fn parse_exponents(s: &str) -> Result<Vec<u32>, Error> {
    let mut v: Vec<u32> = parse_list(s, "exponent")?
        .into_iter()
        .map(|m| u32::try_from(m).map_err(|_| Error::Parse(format!("exponent {m} too large"))))
        .collect::<Result<_, _>>()?;
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn cmd_count(config: &RunConfig, a: &CountArgs, counter: &Counter) -> Result<Output, Error> {
    let ring = load_ring(&a.ring)?;
    let primes = parse_primes(&a.p)?;
    let ms = parse_exponents(&a.m)?;
    let digest = ring.digest();
    let mut rows = Vec::new();
    for &p in &primes {
        for &m in &ms {
            rows.push((p, m, counter.count_index(&ring, p, m, a.unital)?));
        }
    }
    let mut out = Output::new(String::new());
    let mut doc = json!({
        "ring": ring.label(),
        "digest": digest,
        "unital": a.unital,
        "counts": rows.iter().map(|(p, m, c)| json!({ "p": p, "m": m, "count": c.to_string() })).collect::<Vec<_>>(),
    });
    if a.audit_cache {
        let audit = audit_cache(&ring, &rows, a.unital, counter)?;
        if !audit["mismatches"].as_array().is_some_and(Vec::is_empty) {
            out.code = EXIT_VIOLATION;
        }
        doc["audit"] = audit;
    }
    if let Some(limit) = a.dump_reps {
        let mut dumps = Vec::new();
        for &p in &primes {
            for &m in &ms {
                let mut reps = Vec::new();
                for diag in compositions(m, ring.rank()) {
                    let left = limit.saturating_sub(reps.len());
                    if left == 0 {
                        break;
                    }
                    match counter.representatives(&ring, p, &diag, a.unital, left) {
                        Ok(found) => reps.extend(found),
                        Err(Error::BudgetExceeded { .. }) => {
                            out.note(format!(
                                "notice: representatives for p={p}, m={m} truncated at {limit}"
                            ));
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                dumps.push(json!({
                    "p": p,
                    "m": m,
                    "representatives": reps.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                }));
            }
        }
        doc["representatives"] = Value::Array(dumps);
    }
    let csv = config.format == Some(Format::Csv) && a.dump_reps.is_none() && !a.audit_cache;
    if csv {
        let mut s = String::from("p,m,count\n");
        for (p, m, c) in &rows {
            let _ = writeln!(s, "{p},{m},{c}");
        }
        out.stdout = s;
    } else {
        if config.format == Some(Format::Csv) {
            out.note("notice: audit and representative dumps are JSON only");
        }
        out.stdout = format!("{doc}\n");
    }
    Ok(out)
}

fn audit_cache(
    ring: &StructureRing,
    rows: &[(u64, u32, BigUint)],
    unital: bool,
    counter: &Counter,
) -> Result<Value, Error> {
    let digest = ring.digest();
    let mut keys: Vec<(u64, u32)> = rows.iter().map(|(p, m, _)| (*p, *m)).collect();
    if let Some(t) = counter.table() {
        keys.extend(
            t.records()
                .into_iter()
                .filter(|r| r.ring == digest && r.unital == unital)
                .map(|r| (r.p, r.m)),
        );
    }
    keys.sort_unstable();
    keys.dedup();
    let mut mismatches = Vec::new();
    for &(p, m) in &keys {
        let stored = counter.count_index(ring, p, m, unital)?;
        let fresh = counter.compute_index(ring, p, m, unital)?;
        if stored != fresh {
            mismatches.push(json!({
                "p": p, "m": m, "cached": stored.to_string(), "recomputed": fresh.to_string(),
            }));
        }
    }
    Ok(json!({ "checked": keys.len(), "mismatches": mismatches }))
}

fn parse_policy(s: &str) -> Result<RamifiedPolicy, Error> {
    match s.trim() {
        "exclude" => Ok(RamifiedPolicy::Exclude),
        "error" => Ok(RamifiedPolicy::Error),
        "direct" => Ok(RamifiedPolicy::Direct),
        other => {
            let path = other.strip_prefix("sidecar:").unwrap_or(other);
            if !Path::new(path).is_file() {
                return Err(Error::Parse(format!("unknown ramified policy {other:?}")));
            }
            Ok(RamifiedPolicy::Sidecar(parse_sidecar(
                &std::fs::read_to_string(path)?,
            )?))
        }
    }
}

/// Pole order of the split-`d` order zeta function at 1, where known.
fn default_beta(family: &Family) -> Option<u32> {
    match family {
        Family::Split(d) if (2..=5).contains(d) => Some((d * (d - 1) / 2) as u32),
        Family::Split(1) | Family::Monogenic(_) => Some(1),
        Family::Split(_) => None,
    }
}

fn cmd_series(config: &RunConfig, a: &SeriesArgs, counter: &Counter) -> Result<Output, Error> {
    let family: Family = a.family.parse()?;
    let policy = parse_policy(&a.ramified)?;
    let profile = assemble_counts(&family, a.bound, &policy, counter)?;
    let mut out = Output::new(String::new());
    for n in &profile.notices {
        out.note(format!("notice: {n}"));
    }
    let fit = if a.fit || a.alpha.is_some() || a.beta.is_some() {
        let beta = a
            .beta
            .or_else(|| default_beta(&family))
            .ok_or_else(|| Error::Parse(format!("--beta is required for {family}")))?;
        Some(fit_log_power(&profile, a.alpha.unwrap_or(1.0), beta)?.to_json())
    } else {
        None
    };
    if config.format == Some(Format::Json) {
        let strs = |v: &[BigUint]| v.iter().skip(1).map(|x| x.to_string()).collect::<Vec<_>>();
        let mut doc = json!({
            "family": profile.family,
            "B": profile.bound,
            "m_max": profile.m_max,
            "f": strs(&profile.f),
            "N": strs(&profile.n),
            "excluded": profile.excluded,
            "notices": profile.notices,
        });
        if let Some(f) = fit {
            doc["fit"] = f;
        }
        out.stdout = format!("{doc}\n");
    } else {
        out.stdout = profile.to_csv();
        if let Some(f) = fit {
            match &a.fit_out {
                Some(path) => std::fs::write(path, format!("{f}\n"))?,
                None => out.note(format!("fit: {f}")),
            }
        }
    }
    Ok(out)
}

fn row_json(r: &R2Row) -> Value {
    json!({
        "name": r.name,
        "degree": r.degree,
        "order": r.order,
        "r2": r.r2,
        "burnside_r": r.burnside.to_string(),
        "table_r2": r.expected,
        "match": r.matches(),
        "warnings": r.warnings,
    })
}

fn cmd_r2(config: &RunConfig, a: &R2Args) -> Result<Output, Error> {
    let rows: Vec<R2Row> = if let Some(kind) = &a.kind {
        let kind: GroupKind = kind.parse()?;
        let g = kind.build()?;
        vec![R2Row {
            name: kind.to_string(),
            degree: g.degree(),
            order: g.order(),
            r2: r2_orbits(&g),
            burnside: burnside_r(&g),
            expected: Some(r2_closed_forms(&kind)?),
            warnings: g.warnings(),
        }]
    } else {
        let specs = match &a.group {
            Some(path) => parse_group_file(&std::fs::read_to_string(path)?)?,
            None if a.table1 => table1(),
            None => {
                return Err(Error::Parse(
                    "one of --table1, --group, --kind is required".into(),
                ))
            }
        };
        specs.iter().map(r2_row).collect::<Result<_, _>>()?
    };
    let mut out = Output::new(if config.format == Some(Format::Json) {
        format!("{}\n", Value::Array(rows.iter().map(row_json).collect()))
    } else {
        r2_csv(&rows)
    });
    for r in &rows {
        for w in &r.warnings {
            out.note(format!("warning: {}: {w}", r.name));
        }
        if !r.matches() {
            out.note(format!(
                "mismatch: {} has r2 = {} (burnside {}), table says {:?}",
                r.name, r.r2, r.burnside, r.expected
            ));
            out.code = EXIT_VIOLATION;
        }
    }
    Ok(out)
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(o) => {
            o.remove("runtime_ms");
            o.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn report_csv(reports: &[BoundCheckReport]) -> String {
    let mut s = String::from("prop,checked,worst_ratio,violations\n");
    fn walk(r: &BoundCheckReport, s: &mut String) {
        if r.parts.is_empty() {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                r.prop,
                r.checked,
                r.worst_ratio,
                r.violations.len()
            );
        }
        r.parts.iter().for_each(|p| walk(p, s));
    }
    reports.iter().for_each(|r| walk(r, &mut s));
    s
}

fn cmd_verify(config: &RunConfig, a: &VerifyArgs, counter: &Counter) -> Result<Output, Error> {
    let primes = |default: &str| parse_primes(a.p.as_deref().unwrap_or(default));
    let mut gating = true;
    let reports: Vec<BoundCheckReport> = match a.suite {
        Suite::Congruence => primes("2,3,5")?
            .into_iter()
            .map(|p| check_congruence_props(p, a.kmax, a.lmax))
            .collect::<Result<_, _>>()?,
        Suite::Mu => {
            let ds: Vec<usize> = a.d.map(|d| vec![d]).unwrap_or_else(|| vec![3, 4, 5, 6]);
            let mut out = Vec::new();
            for d in ds {
                let (default_p, default_w) = if d == 6 { ("3", 3) } else { ("2,3,5", 4) };
                out.push(check_mu_bounds(
                    d,
                    &primes(default_p)?,
                    a.weight.unwrap_or(default_w),
                    counter,
                )?);
            }
            out
        }
        Suite::A1 => return verify_a1_suite(config, a, counter),
        Suite::Quintic => {
            gating = false;
            let ms = parse_exponents(a.m.as_deref().unwrap_or("2,3"))?;
            vec![check_quintic_exponent(
                &primes("3,5,7,11")?,
                &ms,
                a.slack,
                counter,
            )?]
        }
        Suite::Wishful => {
            let types = match &a.ty {
                Some(t) => vec![t.parse::<SplittingType>()?],
                None => SplittingType::all_of(5),
            };
            let mut out = Vec::new();
            for p in primes("3")? {
                for ty in &types {
                    out.push(check_wishful(p, a.mmax, ty, a.witness_limit, counter)?);
                }
            }
            out
        }
    };
    let mut out = Output::new(String::new());
    let violated = reports.iter().any(|r| !r.passed());
    if violated {
        if gating {
            out.code = EXIT_VIOLATION;
        } else {
            out.note("notice: empirical check, flags do not affect the exit status");
        }
    }
    out.stdout = if config.format == Some(Format::Csv) {
        report_csv(&reports)
    } else {
        let mut v = Value::Array(reports.iter().map(BoundCheckReport::to_json).collect());
        if a.omit_timing {
            strip_timing(&mut v);
        }
        format!("{v}\n")
    };
    Ok(out)
}

fn verify_a1_suite(config: &RunConfig, a: &VerifyArgs, counter: &Counter) -> Result<Output, Error> {
    let ns: Vec<usize> = match a.n {
        Some(n) => vec![n],
        None => (1..=5).collect(),
    };
    let primes = parse_primes(a.p.as_deref().unwrap_or("2,3,5"))?;
    let mut results = Vec::new();
    for &n in &ns {
        if n == 0 || n > 8 {
            return Err(Error::InvalidRank(n));
        }
        for &p in &primes {
            for ty in SplittingType::all_of(n) {
                results.push(verify_a1(p, &ty, counter)?);
            }
        }
    }
    let all = results.iter().all(|r| r.matches);
    let mut out = Output::new(if config.format == Some(Format::Csv) {
        let mut s = String::from("p,type,formula,brute,match\n");
        for r in &results {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.p, r.ty, r.formula, r.brute, r.matches
            );
        }
        s
    } else {
        format!(
            "{}\n",
            json!({ "suite": "a1", "all_match": all, "results": results })
        )
    });
    if !all {
        out.code = EXIT_VIOLATION;
    }
    Ok(out)
}
