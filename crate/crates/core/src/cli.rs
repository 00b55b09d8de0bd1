//! The `palindist` command line.
//!
//! Every subcommand produces a [`ReportEnvelope`]: a command name, the
//! resolved parameters, and a list of rows. Rows are flat maps of scalars.
//! Fields on the natural-log scale end in `_log`; big integers are decimal
//! strings; non-finite floats are the strings `inf`, `-inf` and `nan`.
//!
//! Exit codes: 0 success, 1 usage or invalid argument, 2 a hypothesis of
//! the requested bound fails, 3 a resource cap would be exceeded.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::bigmath::big_pow;
use crate::counting::{
    check_cumulative_decay, check_prop41, check_prop42, class_counts_exact_length, class_counts_up_to,
    prime_branch_admissible, prop41_min_length, prop42_min_length, ResidueCountTable, DEFAULT_GROWTH_FACTOR,
};
use crate::digits::{count_up_to, index_of, iter_palindromes};
use crate::error::{Error, Result};
use crate::expsums::{
    check_lemma31, check_lemma32, lemma21_sweep, lemma22_sweep, palindrome_exp_sum_brute,
    palindrome_exp_sum_product,
};
use crate::primes::{brun_truncated_bound, census, default_sieve_params, density_series};
use crate::report::{BoundReport, Param};

pub const SCHEMA_VERSION: u32 = 1;

/// Most rows `enumerate` will emit.
pub const ENUMERATE_CAP: u64 = 1_000_000;

pub type Row = Map<String, Value>;

/// The uniform output of every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub params: Row,
    pub rows: Vec<Row>,
    pub schema_version: u32,
}

impl ReportEnvelope {
    pub fn new(command: &str) -> Self {
        ReportEnvelope {
            command: command.to_string(),
            params: Row::new(),
            rows: Vec::new(),
            schema_version: SCHEMA_VERSION,
        }
    }

    fn param(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.params.insert(key.to_string(), value.into().0);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope values are plain JSON")
    }

    /// Header plus one line per row. Parameters are repeated on every line
    /// as `param.<name>` columns so that nothing is lost.
    pub fn to_csv(&self) -> String {
        let mut columns: Vec<String> = vec!["command".into(), "schema_version".into()];
        columns.extend(self.params.keys().map(|k| format!("param.{k}")));
        let mut row_keys: Vec<&String> = Vec::new();
        for row in &self.rows {
            for k in row.keys() {
                if !row_keys.contains(&k) {
                    row_keys.push(k);
                }
            }
        }
        columns.extend(row_keys.iter().map(|k| k.to_string()));

        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&columns).expect("in-memory write");
        let prefix: Vec<String> = [self.command.clone(), self.schema_version.to_string()]
            .into_iter()
            .chain(self.params.values().map(cell_text))
            .collect();
        let empty = Row::new();
        let rows: Vec<&Row> = if self.rows.is_empty() { vec![&empty] } else { self.rows.iter().collect() };
        for row in rows {
            let mut record = prefix.clone();
            record.extend(row_keys.iter().map(|k| row.get(*k).map(cell_text).unwrap_or_default()));
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}

/// Text form of a scalar, shared by the CSV writer and round-trip checks.
pub fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A JSON scalar following the envelope conventions.
pub struct Cell(Value);

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell(match serde_json::Number::from_f64(v) {
            Some(n) => Value::Number(n),
            None if v.is_nan() => Value::String("nan".into()),
            None if v > 0.0 => Value::String("inf".into()),
            None => Value::String("-inf".into()),
        })
    }
}

impl From<&BigUint> for Cell {
    fn from(v: &BigUint) -> Self {
        Cell(Value::String(v.to_string()))
    }
}

impl From<&num_bigint::BigInt> for Cell {
    fn from(v: &num_bigint::BigInt) -> Self {
        Cell(Value::String(v.to_string()))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell(Value::Bool(v))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell(Value::String(v.to_string()))
    }
}

impl From<&Param> for Cell {
    fn from(v: &Param) -> Self {
        match v {
            Param::Int(i) => Cell(Value::from(*i)),
            Param::Real(r) => Cell::from(*r),
            Param::Big(s) => Cell(Value::String(s.clone())),
        }
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell(Value::from(v))
            }
        }
    )*};
}
int_cell!(i8, i64, u32, u64, usize);

fn row() -> RowBuilder {
    RowBuilder(Row::new())
}

struct RowBuilder(Row);

impl RowBuilder {
    fn set(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.0.insert(key.to_string(), value.into().0);
        self
    }

    fn done(self) -> Row {
        self.0
    }
}

fn bound_row(r: &BoundReport) -> Row {
    let mut b = row().set("bound_id", r.bound_id.as_str());
    for (k, v) in &r.params {
        b = b.set(k, v);
    }
    b.set("lhs_log", r.lhs_log)
        .set("rhs_log", r.rhs_log)
        .set("satisfied", r.satisfied)
        .set("slack_log", r.slack_log)
        .done()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "palindist", version, about = "Exact computations on base-g palindromes")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads for sweeps (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List palindromes of one length or in a range.
    #[command(after_help = "Rows: n, length, index (0-based within its length).")]
    Enumerate {
        #[arg(long)]
        base: u32,
        #[arg(long, conflicts_with_all = ["lo", "hi"])]
        length: Option<usize>,
        #[arg(long, value_parser = parse_big)]
        lo: Option<BigUint>,
        #[arg(long, value_parser = parse_big)]
        hi: Option<BigUint>,
    },
    /// Exact residue-class counts of palindromes.
    #[command(after_help = "Rows: residue, count. Params carry total and max_discrepancy_log.")]
    Count {
        #[arg(long)]
        base: u32,
        #[arg(long, required_unless_present = "upto", conflicts_with = "upto")]
        length: Option<usize>,
        #[arg(long, value_parser = parse_big)]
        upto: Option<BigUint>,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Exponential sums over palindromes of one length.
    #[command(after_help = "Rows: c, then re, im, abs_log, arg per method \
        (prefixed brute_ / product_ when --method both, plus rel_error).")]
    Expsum {
        #[arg(long)]
        base: u32,
        #[arg(long)]
        length: usize,
        #[arg(long = "mod")]
        modulus: u64,
        /// Frequency; all of 0..q when omitted.
        #[arg(long, allow_negative_numbers = true)]
        c: Option<i64>,
        #[arg(long, value_enum, default_value = "product")]
        method: Method,
    },
    /// Check a bound over a parameter sweep.
    #[command(after_help = "Rows always carry lhs_log, rhs_log, satisfied.")]
    Verify(VerifyArgs),
    /// Count palindromes and prime palindromes up to x.
    #[command(after_help = "Rows: length, palindromes, primes. Params carry the totals, density and envelope.")]
    Census {
        #[arg(long)]
        base: u32,
        #[arg(long, value_parser = parse_big)]
        x: BigUint,
    },
    /// Evaluate the truncated Brun sieve bound.
    #[command(after_help = "Rows: q, mu, omega, a_q. Params carry y, h, truncated_sum, upper_bound.")]
    Sieve {
        #[arg(long)]
        base: u32,
        #[arg(long, value_parser = parse_big)]
        x: BigUint,
        /// Sieve level; defaults to e^-1 (log x)^(1/(4h)).
        #[arg(long)]
        y: Option<f64>,
        /// Truncation depth; defaults to floor(e log log log x).
        #[arg(long)]
        h: Option<u32>,
        /// Also run the census and compare it with the bound.
        #[arg(long)]
        census: bool,
    },
    /// Prime-palindrome density over a list of x.
    #[command(after_help = "Rows: x, palindromes, primes, density, envelope, ratio, density_log_x.")]
    Density {
        #[arg(long)]
        base: u32,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_parser = parse_big, value_delimiter = ',', required = true)]
        x: Vec<BigUint>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Product,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Lemma21,
    Lemma22,
    Lemma31,
    Lemma32,
    Prop41,
    Prop42,
    Decay,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    which: Which,
    #[arg(long, default_value_t = 10)]
    base: u32,
    /// Largest modulus (lemma21, lemma22).
    #[arg(long)]
    qmax: Option<u64>,
    /// Modulus (lemma31, lemma32, prop41, prop42, decay).
    #[arg(long = "mod")]
    modulus: Option<u64>,
    /// Single frequency; all nonzero residues when omitted.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<i64>,
    /// Smallest length; defaults to 1 or the hypothesis threshold.
    #[arg(long)]
    lmin: Option<usize>,
    /// Largest length; defaults to lmin.
    #[arg(long)]
    lmax: Option<usize>,
    /// Points x for the cumulative check (decay), comma-separated.
    #[arg(long, value_parser = parse_big, value_delimiter = ',')]
    x: Vec<BigUint>,
    /// Allowed growth of the cumulative constant (decay).
    #[arg(long, default_value_t = DEFAULT_GROWTH_FACTOR)]
    factor: f64,
}

/// Parses a decimal integer or `g^k`.
pub fn parse_big(s: &str) -> std::result::Result<BigUint, String> {
    let s = s.trim();
    if let Some((g, k)) = s.split_once('^') {
        let g: u64 = g.trim().parse().map_err(|e| format!("bad base in {s:?}: {e}"))?;
        let k: u64 = k.trim().parse().map_err(|e| format!("bad exponent in {s:?}: {e}"))?;
        if k > 1_000_000 {
            return Err(format!("exponent {k} too large"));
        }
        return Ok(big_pow(g, k));
    }
    s.parse().map_err(|e| format!("not a nonnegative integer: {s:?} ({e})"))
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required here")))
}

fn enumerate(base: u32, length: Option<usize>, lo: Option<BigUint>, hi: Option<BigUint>) -> Result<ReportEnvelope> {
    let (lo, hi) = match length {
        Some(0) => return Err(Error::InvalidArgument("length must be at least 1".into())),
        Some(len) => (big_pow(base as u64, len as u64 - 1), big_pow(base as u64, len as u64) - 1u32),
        None => (lo.unwrap_or_default(), required(hi, "hi")?),
    };
    let below = if lo.is_zero() { BigUint::zero() } else { count_up_to(base, &(&lo - 1u32))? };
    let upper = count_up_to(base, &hi)?;
    let n = if upper > below { upper - below } else { BigUint::zero() };
    if n > BigUint::from(ENUMERATE_CAP) {
        return Err(Error::Resource(format!("{n} palindromes exceed the enumeration cap {ENUMERATE_CAP}")));
    }
    let mut env = ReportEnvelope::new("enumerate")
        .param("g", base)
        .param("lo", &lo)
        .param("hi", &hi)
        .param("count", &n);
    for p in iter_palindromes(base, &lo, &hi)? {
        let (len, index) = index_of(&p, base)?;
        env.rows.push(row().set("n", &p).set("length", len).set("index", &index).done());
    }
    Ok(env)
}

fn count(base: u32, length: Option<usize>, upto: Option<BigUint>, q: u64) -> Result<ReportEnvelope> {
    let (table, env): (ResidueCountTable, _) = match (length, upto) {
        (Some(len), _) => (class_counts_exact_length(base, len, q)?, ReportEnvelope::new("count").param("length", len)),
        (None, Some(x)) => {
            let t = class_counts_up_to(base, &x, q)?;
            (t, ReportEnvelope::new("count").param("upto", &x))
        }
        (None, None) => return Err(Error::InvalidArgument("one of --length or --upto is required".into())),
    };
    let mut env = env
        .param("g", base)
        .param("q", q)
        .param("total", &table.total)
        .param("max_discrepancy_log", table.max_discrepancy.ln());
    for (a, c) in table.counts.iter().enumerate() {
        env.rows.push(row().set("residue", a).set("count", c).done());
    }
    Ok(env)
}

fn expsum(base: u32, len: usize, q: u64, c: Option<i64>, method: Method) -> Result<ReportEnvelope> {
    if q < 2 {
        return Err(Error::InvalidArgument("modulus must be at least 2".into()));
    }
    let cs: Vec<i64> = match c {
        Some(c) => vec![c],
        None => (0..q as i64).collect(),
    };
    let mut env = ReportEnvelope::new("expsum")
        .param("g", base)
        .param("length", len)
        .param("q", q)
        .param("method", format!("{method:?}").to_lowercase().as_str());
    for c in cs {
        let mut r = row().set("c", c);
        let brute = match method {
            Method::Product => None,
            _ => Some(palindrome_exp_sum_brute(base, len, q, c)?),
        };
        let product = match method {
            Method::Brute => None,
            _ => Some(palindrome_exp_sum_product(base, len, q, c)?),
        };
        let tag = |name: &str, field: &str| {
            if method == Method::Both {
                format!("{name}_{field}")
            } else {
                field.to_string()
            }
        };
        if let Some(z) = brute {
            r = r
                .set(&tag("brute", "re"), z.re)
                .set(&tag("brute", "im"), z.im)
                .set(&tag("brute", "abs_log"), z.norm().ln())
                .set(&tag("brute", "arg"), z.arg());
        }
        if let Some(z) = product {
            let lin = z.to_complex();
            r = r
                .set(&tag("product", "re"), lin.re)
                .set(&tag("product", "im"), lin.im)
                .set(&tag("product", "abs_log"), z.log_mag)
                .set(&tag("product", "arg"), z.arg);
        }
        if let (Some(a), Some(b)) = (brute, product) {
            let b = b.to_complex();
            r = r.set("rel_error", (a - b).norm() / a.norm().max(b.norm()).max(1.0));
        }
        env.rows.push(r.done());
    }
    Ok(env)
}

fn lengths(args: &VerifyArgs, default_min: usize) -> Result<std::ops::RangeInclusive<usize>> {
    let lo = args.lmin.unwrap_or(default_min);
    let hi = args.lmax.unwrap_or(lo);
    if lo == 0 || hi < lo {
        return Err(Error::InvalidArgument(format!("invalid length range {lo}..={hi}")));
    }
    Ok(lo..=hi)
}

fn frequencies(args: &VerifyArgs, q: u64) -> Vec<i64> {
    match args.c {
        Some(c) => vec![c],
        None => (1..q as i64).collect(),
    }
}

fn verify(args: &VerifyArgs) -> Result<ReportEnvelope> {
    let g = args.base;
    let name = format!("verify {:?}", args.which).to_lowercase();
    let mut env = ReportEnvelope::new(&name).param("g", g);
    match args.which {
        Which::Lemma21 => {
            let q_max = required(args.qmax, "qmax")?;
            env = env.param("qmax", q_max);
            for s in lemma21_sweep(g as u64, q_max)? {
                let mut r = bound_row(&s.tightest);
                r.insert("pairs".into(), s.pairs.into());
                r.insert("violations".into(), s.violations.into());
                r.insert("ord".into(), s.ord.into());
                r.insert("satisfied".into(), (s.violations == 0).into());
                env.rows.push(r);
            }
        }
        Which::Lemma22 => {
            let q_max = required(args.qmax, "qmax")?;
            env = env.param("qmax", q_max);
            for s in lemma22_sweep(q_max)? {
                let mut r = bound_row(&s.tightest);
                r.insert("checked".into(), s.checked.into());
                r.insert("violations".into(), s.violations.into());
                r.insert("satisfied".into(), (s.violations == 0).into());
                env.rows.push(r);
            }
        }
        Which::Lemma31 | Which::Lemma32 => {
            let q = required(args.modulus, "mod")?;
            let range = lengths(args, 1)?;
            env = env.param("q", q);
            let lemma31 = args.which == Which::Lemma31;
            for c in frequencies(args, q) {
                for len in range.clone() {
                    let report = if lemma31 {
                        check_lemma31(g, q, c, len)?
                    } else {
                        check_lemma32(g, q, c, len)?
                    };
                    env.rows.push(bound_row(&report));
                }
            }
        }
        Which::Prop41 => {
            let p = required(args.modulus, "mod")?;
            prime_branch_admissible(g, p)?;
            env = env.param("p", p);
            for len in lengths(args, prop41_min_length(p))? {
                env.rows.push(bound_row(&check_prop41(g, p, len)?));
            }
        }
        Which::Prop42 => {
            let q = required(args.modulus, "mod")?;
            env = env.param("q", q);
            for len in lengths(args, prop42_min_length(q))? {
                env.rows.push(bound_row(&check_prop42(g, q, len)?));
            }
        }
        Which::Decay => {
            let q = required(args.modulus, "mod")?;
            if args.x.is_empty() {
                return Err(Error::InvalidArgument("--x is required for decay".into()));
            }
            let rep = check_cumulative_decay(g, q, &args.x, args.factor)?;
            env = env
                .param("q", q)
                .param("xi", rep.branch.xi())
                .param("corollary", rep.branch.corollary().as_str())
                .param("factor", rep.factor)
                .param("growth_log", rep.growth_log)
                .param("bounded", rep.bounded);
            for r in &rep.rows {
                let mut out = bound_row(&r.report);
                out.insert("total".into(), Cell::from(&r.total).0);
                out.insert("decay_log".into(), Cell::from(r.decay_log).0);
                out.insert("empirical_constant_log".into(), Cell::from(r.empirical_constant_log).0);
                out.insert("discrepancy_log".into(), Cell::from(r.discrepancy.ln()).0);
                env.rows.push(out);
            }
        }
    }
    Ok(env)
}

fn census_cmd(base: u32, x: &BigUint) -> Result<ReportEnvelope> {
    let c = census(base, x)?;
    let mut env = ReportEnvelope::new("census")
        .param("g", base)
        .param("x", x)
        .param("palindrome_count", &c.palindrome_count)
        .param("prime_palindrome_count", &c.prime_palindrome_count)
        .param("density", c.density)
        .param("probabilistic", c.probabilistic);
    if let Some(e) = c.envelope {
        env = env.param("envelope", e);
    }
    for (len, pals, primes) in &c.per_length {
        env.rows.push(row().set("length", *len).set("palindromes", pals).set("primes", primes).done());
    }
    Ok(env)
}

fn sieve_cmd(base: u32, x: &BigUint, y: Option<f64>, h: Option<u32>, with_census: bool) -> Result<ReportEnvelope> {
    let (y, h) = match (y, h) {
        (Some(y), Some(h)) => (y, h),
        _ => {
            let d = default_sieve_params(x)?;
            (y.unwrap_or(d.y), h.unwrap_or(d.h))
        }
    };
    let ev = brun_truncated_bound(base, x, y, h)?;
    let primes: Vec<String> = ev.modulus.primes.iter().map(u64::to_string).collect();
    let mut env = ReportEnvelope::new("sieve")
        .param("g", base)
        .param("x", x)
        .param("y", y)
        .param("h", h)
        .param("sieve_primes", primes.join(" ").as_str())
        .param("truncated_sum", &ev.truncated_sum)
        .param("upper_bound", &ev.upper_bound)
        .param("complete", ev.is_complete());
    if with_census {
        let c = census(base, x)?;
        let count = crate::bigmath::to_signed(&c.prime_palindrome_count);
        env = env
            .param("prime_palindrome_count", &c.prime_palindrome_count)
            .param("satisfied", count <= ev.upper_bound);
    }
    for t in &ev.terms {
        env.rows.push(row().set("q", t.q).set("mu", t.mu).set("omega", t.omega).set("a_q", &t.a_q).done());
    }
    Ok(env)
}

fn density_cmd(base: u32, xs: &[BigUint]) -> Result<ReportEnvelope> {
    let t = density_series(base, xs)?;
    let mut env = ReportEnvelope::new("density")
        .param("g", base)
        .param("strictly_decreasing", t.strictly_decreasing);
    if let Some(growth) = t.ratio_growth {
        env = env.param("ratio_growth", growth);
    }
    for r in &t.rows {
        let c = &r.census;
        let opt = |v: Option<f64>| v.map_or(Cell(Value::Null), Cell::from);
        env.rows.push(
            row()
                .set("x", &c.x)
                .set("palindromes", &c.palindrome_count)
                .set("primes", &c.prime_palindrome_count)
                .set("density", c.density)
                .set("envelope", opt(c.envelope))
                .set("ratio", opt(r.envelope_ratio))
                .set("density_log_x", r.density_log_x)
                .done(),
        );
    }
    Ok(env)
}

fn dispatch(cmd: &Command) -> Result<ReportEnvelope> {
    match cmd {
        Command::Enumerate { base, length, lo, hi } => enumerate(*base, *length, lo.clone(), hi.clone()),
        Command::Count { base, length, upto, modulus } => count(*base, *length, upto.clone(), *modulus),
        Command::Expsum { base, length, modulus, c, method } => expsum(*base, *length, *modulus, *c, *method),
        Command::Verify(args) => verify(args),
        Command::Census { base, x } => census_cmd(*base, x),
        Command::Sieve { base, x, y, h, census } => sieve_cmd(*base, x, *y, *h, *census),
        Command::Density { base, x } => density_cmd(*base, x),
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Range(_) => 1,
        Error::Precondition(_) | Error::UndefinedOrder { .. } | Error::NoInverse { .. } => 2,
        Error::Resource(_) => 3,
    }
}

/// Parses `argv` (including the program name) and builds the report.
pub fn execute<I, T>(argv: I) -> std::result::Result<(ReportEnvelope, Format), CliFailure>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliFailure::Usage)?;
    let build = || dispatch(&cli.command);
    let env = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliFailure::Library(Error::InvalidArgument(format!("thread pool: {e}"))))?
            .install(build),
        None => build(),
    }
    .map_err(CliFailure::Library)?;
    Ok((env, cli.format))
}

#[derive(Debug)]
pub enum CliFailure {
    Usage(clap::Error),
    Library(Error),
}

/// Runs the command line, writing the report to `out` and diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match execute(argv) {
        Ok((env, format)) => {
            let text = match format {
                Format::Json => env.to_json() + "\n",
                Format::Csv => env.to_csv(),
            };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(CliFailure::Usage(e)) => {
            let _ = write!(err, "{}", e.render());
            if e.use_stderr() {
                1
            } else {
                // --help and --version
                let _ = write!(out, "{}", e.render());
                0
            }
        }
        Err(CliFailure::Library(e)) => {
            let _ = writeln!(err, "palindist: {e}");
            exit_code(&e)
        }
    }
}

/// Runs against the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &str) -> (i32, String, String) {
        let argv = std::iter::once("palindist").chain(args.split_whitespace());
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn report(args: &str) -> ReportEnvelope {
        let argv = std::iter::once("palindist").chain(args.split_whitespace());
        execute(argv).unwrap().0
    }

    #[test]
    fn parse_powers() {
        assert_eq!(parse_big("2^10").unwrap(), BigUint::from(1024u32));
        assert_eq!(parse_big("123").unwrap(), BigUint::from(123u32));
        assert!(parse_big("-4").is_err());
        assert!(parse_big("2^x").is_err());
    }

    #[test]
    fn count_csv_sums_to_total() {
        let (code, out, _) = go("count --base 10 --length 3 --mod 3 --format csv");
        assert_eq!(code, 0);
        let mut rdr = csv::Reader::from_reader(out.as_bytes());
        let idx = rdr.headers().unwrap().iter().position(|h| h == "count").unwrap();
        let counts: Vec<u64> = rdr.records().map(|r| r.unwrap()[idx].parse().unwrap()).collect();
        assert_eq!(counts.len(), 3);
        assert_eq!(counts.iter().sum::<u64>(), 90);
    }

    #[test]
    fn census_reports_five_primes_below_100() {
        let env = report("census --base 10 --x 100");
        assert_eq!(env.params["prime_palindrome_count"], "5");
        assert_eq!(env.params["palindrome_count"], "18");
    }

    #[test]
    fn json_and_csv_agree() {
        for args in [
            "count --base 10 --upto 200 --mod 7",
            "expsum --base 2 --length 7 --mod 11 --method both",
            "verify lemma32 --base 2 --mod 5 --lmin 6 --lmax 12",
            "sieve --base 2 --x 2^16 --y 29 --h 1",
            "density --base 10 --x 100,10^4",
        ] {
            let env = report(args);
            let json: Value = serde_json::from_str(&env.to_json()).unwrap();
            let csv_text = env.to_csv();
            let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
            let headers = rdr.headers().unwrap().clone();
            let records: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
            assert_eq!(records.len(), env.rows.len().max(1), "{args}");
            for (i, rec) in records.iter().enumerate() {
                for (h, field) in headers.iter().zip(rec.iter()) {
                    let expected = if let Some(p) = h.strip_prefix("param.") {
                        cell_text(&json["params"][p])
                    } else if h == "command" {
                        cell_text(&json["command"])
                    } else if h == "schema_version" {
                        cell_text(&json["schema_version"])
                    } else {
                        cell_text(&json["rows"][i][h])
                    };
                    assert_eq!(field, expected, "{args}: column {h}");
                }
            }
        }
    }

    #[test]
    fn verify_rows_are_checkable() {
        let env = report("verify lemma21 --base 2 --qmax 40");
        assert!(!env.rows.is_empty());
        for r in &env.rows {
            assert!(r.contains_key("lhs_log") && r.contains_key("rhs_log"));
            assert_eq!(r["satisfied"], true);
        }
        let env = report("verify prop42 --base 2 --mod 5");
        assert_eq!(env.rows.len(), 1);
        assert_eq!(env.rows[0]["L"], 91);
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = go("verify prop41 --base 10 --mod 13");
        assert_eq!(code, 2);
        assert!(err.contains("ord_p(g) >= 3*sqrt(p) fails"), "{err}");
        assert_eq!(go("census --base 10 --x 10^30").0, 3);
        assert_eq!(go("count --base 10 --length 3 --mod 3 --bogus").0, 1);
        assert_eq!(go("frobnicate").0, 1);
        assert_eq!(go("count --base 1 --length 3 --mod 3").0, 1);
        let (code, out, _) = go("--help");
        assert_eq!(code, 0);
        assert!(out.contains("census"));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let one = report("verify lemma22 --qmax 12 --threads 1");
        let four = report("verify lemma22 --qmax 12 --threads 4");
        assert_eq!(one, four);
    }

    #[test]
    fn enumerate_lists_in_order() {
        let env = report("enumerate --base 10 --lo 90 --hi 130");
        let ns: Vec<&str> = env.rows.iter().map(|r| r["n"].as_str().unwrap()).collect();
        assert_eq!(ns, ["99", "101", "111", "121"]);
        let env = report("enumerate --base 2 --length 5");
        assert_eq!(env.rows.len(), 4);
        assert_eq!(go("enumerate --base 10 --length 20").0, 3);
    }

    #[test]
    fn non_finite_values_are_strings() {
        // the digits 1..9 cover every class mod 3 equally, so the sum vanishes
        let env = report("expsum --base 10 --length 1 --mod 3 --c 1");
        assert_eq!(env.rows[0]["abs_log"], "-inf");
        assert!(env.to_json().contains("\"-inf\""));
    }
}
