//! Exact residue-class counts of palindromes and the equidistribution checks
//! built on them.
//!
//! A palindrome of length `L` with prefix digits `a_0 .. a_{h-1}` (most
//! significant first, `h = ceil(L/2)`) equals `sum a_i w_i` where
//! `w_i = g^(L-1-i) + g^i` for mirrored pairs and `w_i = g^i` for the middle
//! digit of odd `L`. Counting by residue is then a DP over prefix positions
//! whose state is the running residue mod `q`.

use std::ops::{AddAssign, RangeInclusive};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::bigmath::{abs_diff, big_pow, ln_biguint, pow_mod};
use crate::digits::{count_exact_length, count_up_to, digit_len, palindrome_from_prefix};
use crate::error::{Error, Result};
use crate::modular::{ord, Modulus};
use crate::report::{BoundId, BoundReport, LOG_TOLERANCE};

/// Largest modulus the DP will allocate a table for.
pub const MAX_DP_MODULUS: u64 = 50_000_000;

/// Counts summed by the DP. `u128` is used whenever the total provably fits.
trait Tally: Clone + Default + Send + Sync + for<'a> AddAssign<&'a Self> {
    fn unit() -> Self;
    fn into_big(self) -> BigUint;
}

impl Tally for u128 {
    fn unit() -> Self {
        1
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Tally for BigUint {
    fn unit() -> Self {
        BigUint::one()
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// Residue weights of the prefix positions of a length-`len` palindrome.
fn prefix_weights(g: u32, len: usize, q: u64) -> Vec<u64> {
    let half = len.div_ceil(2);
    (0..half)
        .map(|i| {
            let hi = pow_mod(g as u64, (len - 1 - i) as u64, q);
            if len - 1 - i == i {
                hi
            } else {
                (hi + pow_mod(g as u64, i as u64, q)) % q
            }
        })
        .collect()
}

/// `dst[(r + offset) mod q] += src[r]`.
fn shift_add<C: Tally>(dst: &mut [C], src: &[C], offset: usize) {
    let q = src.len();
    let (head, tail) = src.split_at(q - offset);
    for (d, s) in dst[offset..].iter_mut().zip(head) {
        *d += s;
    }
    for (d, s) in dst[..offset].iter_mut().zip(tail) {
        *d += s;
    }
}

fn digit_step<C: Tally>(dist: &[C], digits: std::ops::Range<u64>, weight: u64, q: u64) -> Vec<C> {
    let mut next = vec![C::default(); dist.len()];
    for d in digits {
        shift_add(&mut next, dist, ((d % q) * weight % q) as usize);
    }
    next
}

fn exact_length_dp<C: Tally>(g: u32, len: usize, q: u64) -> Vec<C> {
    let mut dist = vec![C::default(); q as usize];
    dist[0] = C::unit();
    for (i, &w) in prefix_weights(g, len, q).iter().enumerate() {
        let lo = if i == 0 { 1 } else { 0 };
        dist = digit_step(&dist, lo..g as u64, w, q);
    }
    dist
}

/// Counts of length-`len` palindromes whose prefix is below `prefix_digits`
/// (the prefix is most significant first and has `ceil(len/2)` digits).
fn bounded_prefix_dp<C: Tally>(g: u32, len: usize, q: u64, prefix_digits: &[u32]) -> (Vec<C>, u64) {
    let weights = prefix_weights(g, len, q);
    let mut loose = vec![C::default(); q as usize];
    let mut tight = 0u64;
    for (i, (&w, &p)) in weights.iter().zip(prefix_digits).enumerate() {
        let mut next = digit_step(&loose, 0..g as u64, w, q);
        let lo = if i == 0 { 1 } else { 0 };
        for d in lo..p as u64 {
            let r = (tight + d % q * w) % q;
            next[r as usize] += &C::unit();
        }
        loose = next;
        tight = (tight + p as u64 % q * w) % q;
    }
    (loose, tight)
}

fn up_to_dp<C: Tally>(g: u32, x: &BigUint, q: u64) -> Vec<C> {
    let len = digit_len(x, g);
    let mut acc = vec![C::default(); q as usize];
    for l in 1..len {
        for (a, c) in acc.iter_mut().zip(exact_length_dp::<C>(g, l, q)) {
            *a += &c;
        }
    }
    let half = len.div_ceil(2);
    let prefix = x / big_pow(g as u64, (len - half) as u64);
    let mut prefix_digits = crate::digits::radix_le(&prefix, g);
    prefix_digits.reverse();
    let (below, boundary_residue) = bounded_prefix_dp::<C>(g, len, q, &prefix_digits);
    for (a, c) in acc.iter_mut().zip(&below) {
        *a += c;
    }
    if palindrome_from_prefix(&prefix, len, g) <= *x {
        acc[boundary_residue as usize] += &C::unit();
    }
    acc
}

fn fits_u128(total: &BigUint) -> bool {
    total.bits() < 126
}

/// What a [`ResidueCountTable`] counts over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountScope {
    /// Palindromes with exactly this many digits.
    ExactLength(usize),
    /// Palindromes in `[1, x]`.
    UpTo(BigUint),
}

/// `max_a |N_a - total/q|`, held exactly as `numerator / q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub numerator: BigUint,
    pub q: u64,
}

impl Discrepancy {
    fn compute(counts: &[BigUint], total: &BigUint, q: u64) -> Self {
        let numerator = counts
            .iter()
            .map(|c| abs_diff(&(c * q), total))
            .max()
            .unwrap_or_default();
        Discrepancy { numerator, q }
    }

    /// Natural log; `-inf` for a perfectly balanced table.
    pub fn ln(&self) -> f64 {
        ln_biguint(&self.numerator) - (self.q as f64).ln()
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// Exact palindrome counts per residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueCountTable {
    pub g: u32,
    pub scope: CountScope,
    pub q: u64,
    pub counts: Vec<BigUint>,
    pub total: BigUint,
    pub max_discrepancy: Discrepancy,
}

impl ResidueCountTable {
    fn new(g: u32, scope: CountScope, q: u64, counts: Vec<BigUint>) -> Self {
        let total: BigUint = counts.iter().sum();
        let max_discrepancy = Discrepancy::compute(&counts, &total, q);
        ResidueCountTable {
            g,
            scope,
            q,
            counts,
            total,
            max_discrepancy,
        }
    }

    /// Sum of squared class counts, `sum_a N_a^2`.
    pub fn sum_of_squares(&self) -> BigUint {
        self.counts.iter().map(|c| c * c).sum()
    }
}

fn check_dp_args(g: u32, q: u64) -> Result<()> {
    if g < 2 {
        return Err(Error::invalid(format!("base must be at least 2, got {g}")));
    }
    if q < 2 {
        return Err(Error::invalid(format!("modulus must be at least 2, got {q}")));
    }
    if q > MAX_DP_MODULUS {
        return Err(Error::resource(format!(
            "modulus {q} exceeds the DP table limit {MAX_DP_MODULUS}"
        )));
    }
    Ok(())
}

/// `#{n in P_L : n = a (mod q)}` for every `a`.
pub fn class_counts_exact_length(g: u32, len: usize, q: u64) -> Result<ResidueCountTable> {
    check_dp_args(g, q)?;
    let total = count_exact_length(g, len)?;
    let counts = if fits_u128(&total) {
        exact_length_dp::<u128>(g, len, q).into_iter().map(Tally::into_big).collect()
    } else {
        exact_length_dp::<BigUint>(g, len, q)
    };
    Ok(ResidueCountTable::new(g, CountScope::ExactLength(len), q, counts))
}

/// `#{n in P(x) : n = a (mod q)}` for every `a`.
pub fn class_counts_up_to(g: u32, x: &BigUint, q: u64) -> Result<ResidueCountTable> {
    check_dp_args(g, q)?;
    if x.is_zero() {
        return Err(Error::invalid("x must be at least 1"));
    }
    let total = count_up_to(g, x)?;
    let counts = if fits_u128(&total) {
        up_to_dp::<u128>(g, x, q).into_iter().map(Tally::into_big).collect()
    } else {
        up_to_dp::<BigUint>(g, x, q)
    };
    Ok(ResidueCountTable::new(g, CountScope::UpTo(x.clone()), q, counts))
}

fn is_prime_modulus(q: u64) -> bool {
    Modulus::new(q).map(|m| m.is_prime()).unwrap_or(false)
}

/// `ord_p(g)^2 >= 9 p`, i.e. `ord_p(g) >= 3 sqrt(p)`, decided exactly.
fn order_condition(g: u32, p: u64) -> Result<(u64, bool)> {
    let t = ord(g as u64, &Modulus::new(p)?)?;
    Ok((t, (t as u128) * (t as u128) >= 9 * p as u128))
}

/// Checks the hypotheses on `(g, p)` for the prime-modulus estimate.
pub fn prime_branch_admissible(g: u32, p: u64) -> Result<u64> {
    if !is_prime_modulus(p) {
        return Err(Error::precondition(format!("p = {p} is not prime")));
    }
    if p <= g as u64 {
        return Err(Error::precondition(format!("p > g fails (p = {p}, g = {g})")));
    }
    let (t, ok) = order_condition(g, p)?;
    if !ok {
        return Err(Error::precondition(format!(
            "ord_p(g) >= 3*sqrt(p) fails (ord_{p}({g}) = {t}, 3*sqrt(p) = {:.4})",
            3.0 * (p as f64).sqrt()
        )));
    }
    if p < 11 {
        return Err(Error::precondition(format!("p >= 11 fails (p = {p})")));
    }
    Ok(t)
}

/// Checks `gcd(q, g(g^2 - 1)) = 1`.
pub fn coprime_branch_admissible(g: u32, q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::precondition(format!("q >= 2 fails (q = {q})")));
    }
    let g = g as u128;
    let w = g * (g * g - 1);
    let common = (q as u128).gcd(&w);
    if common != 1 {
        return Err(Error::precondition(format!(
            "gcd(q, g(g^2-1)) = 1 fails (gcd({q}, {w}) = {common})"
        )));
    }
    Ok(())
}

/// Smallest length at which the composite-modulus estimate applies:
/// the least integer `L >= 10 + 2 q^2 ln q`.
pub fn prop42_min_length(q: u64) -> usize {
    let qf = q as f64;
    (10.0 + 2.0 * qf * qf * qf.ln()).ceil() as usize
}

/// Exact-length discrepancy for a prime modulus against `(|P_L|/p) 0.99^L`.
pub fn check_prop41(g: u32, p: u64, len: usize) -> Result<BoundReport> {
    let t = prime_branch_admissible(g, p)?;
    let min_len = 10 * p as usize - 5;
    if len < min_len {
        return Err(Error::precondition(format!(
            "L >= 10p - 5 fails (L = {len}, 10p - 5 = {min_len})"
        )));
    }
    let table = class_counts_exact_length(g, len, p)?;
    let rhs_log = ln_biguint(&table.total) - (p as f64).ln() + len as f64 * 0.99f64.ln();
    Ok(BoundReport::new(BoundId::Prop41, table.max_discrepancy.ln(), rhs_log)
        .with("g", g)
        .with("p", p)
        .with("L", len)
        .with("ord", t))
}

/// Exact-length discrepancy against `(|P_L|/q) exp(-L / (2 q^2))`.
pub fn check_prop42(g: u32, q: u64, len: usize) -> Result<BoundReport> {
    coprime_branch_admissible(g, q)?;
    let qf = q as f64;
    let threshold = 10.0 + 2.0 * qf * qf * qf.ln();
    if (len as f64) < threshold {
        return Err(Error::precondition(format!(
            "L >= 10 + 2q^2 log q fails (L = {len}, bound = {threshold:.3})"
        )));
    }
    let table = class_counts_exact_length(g, len, q)?;
    let rhs_log = ln_biguint(&table.total) - qf.ln() - len as f64 / (2.0 * qf * qf);
    Ok(BoundReport::new(BoundId::Prop42, table.max_discrepancy.ln(), rhs_log)
        .with("g", g)
        .with("q", q)
        .with("L", len))
}

/// Which exact-length estimate supplies the decay rate `xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayBranch {
    /// Prime `p > g` with `ord_p(g) >= 3 sqrt(p)`; `xi = 0.99`.
    Prime { p: u64 },
    /// `gcd(q, g(g^2-1)) = 1`; `xi = exp(-1/(2 q^2))`.
    Coprime { q: u64 },
}

impl DecayBranch {
    /// Prefers the prime branch when both apply.
    pub fn select(g: u32, q: u64) -> Result<Self> {
        match prime_branch_admissible(g, q) {
            Ok(_) => Ok(DecayBranch::Prime { p: q }),
            Err(prime_err) => match coprime_branch_admissible(g, q) {
                Ok(()) => Ok(DecayBranch::Coprime { q }),
                Err(coprime_err) => Err(Error::precondition(format!(
                    "q = {q} is inadmissible: {prime_err}; {coprime_err}"
                ))),
            },
        }
    }

    pub fn xi(&self) -> f64 {
        match *self {
            DecayBranch::Prime { .. } => 0.99,
            DecayBranch::Coprime { q } => (-1.0 / (2.0 * (q as f64).powi(2))).exp(),
        }
    }

    pub fn modulus(&self) -> u64 {
        match *self {
            DecayBranch::Prime { p } => p,
            DecayBranch::Coprime { q } => q,
        }
    }

    pub fn corollary(&self) -> BoundId {
        match self {
            DecayBranch::Prime { .. } => BoundId::Cor45,
            DecayBranch::Coprime { .. } => BoundId::Cor46,
        }
    }

    /// Log of the corollary's decay factor at `x`, without the constant `C`:
    /// `0.99^(log x / (2 log g) - 10p)` or `q exp(-log x / (4 q^2 log g))`.
    pub fn corollary_decay_log(&self, g: u32, ln_x: f64) -> f64 {
        let ln_g = (g as f64).ln();
        match *self {
            DecayBranch::Prime { p } => (ln_x / (2.0 * ln_g) - 10.0 * p as f64) * 0.99f64.ln(),
            DecayBranch::Coprime { q } => {
                let qf = q as f64;
                qf.ln() - ln_x / (4.0 * qf * qf * ln_g)
            }
        }
    }
}

/// One measured length in a [`DecayFit`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecayPoint {
    pub len: usize,
    /// `ln(max_a |N_a - |P_L|/q|)`.
    pub discrepancy_log: f64,
    /// `ln(discrepancy / |P_L|)`.
    pub normalized_log: f64,
}

/// Empirical constants for `discrepancy_L <= |P_L| A xi^L`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub g: u32,
    pub branch: DecayBranch,
    pub xi: f64,
    pub series: Vec<DecayPoint>,
    /// `ln A`, where `A >= 1` is the smallest constant covering every measured length.
    pub log_a: f64,
    /// Largest `D(x) / (|P(x)| A xi^(log x / (2 log g)))` over `x = g^L - 1`
    /// for the measured `L`; an estimate of the cumulative constant.
    pub cumulative_constant: f64,
    /// Set when `xi < sqrt(2/3)`, outside the range the cumulative estimate assumes.
    pub xi_below_threshold: bool,
}

impl DecayFit {
    pub fn a(&self) -> f64 {
        self.log_a.exp()
    }

    /// Whether `normalized <= A xi^L` at every measured length.
    pub fn holds_everywhere(&self) -> bool {
        let ln_xi = self.xi.ln();
        self.series
            .iter()
            .all(|p| p.normalized_log <= self.log_a + p.len as f64 * ln_xi + LOG_TOLERANCE)
    }

    /// Whether the moving average of the normalized discrepancy (log scale,
    /// over `window` consecutive lengths) never increases.
    pub fn trend_nonincreasing(&self, window: usize) -> bool {
        let logs: Vec<f64> = self.series.iter().map(|p| p.normalized_log).collect();
        if window == 0 || logs.len() < window || logs.iter().any(|v| !v.is_finite()) {
            return logs.iter().all(|v| !v.is_finite());
        }
        let avgs: Vec<f64> = logs
            .windows(window)
            .map(|w| w.iter().sum::<f64>() / window as f64)
            .collect();
        avgs.windows(2).all(|w| w[1] <= w[0] + LOG_TOLERANCE)
    }
}

pub fn fit_decay(g: u32, q: u64, lengths: RangeInclusive<usize>) -> Result<DecayFit> {
    let branch = DecayBranch::select(g, q)?;
    fit_decay_with(g, branch, lengths)
}

pub fn fit_decay_with(g: u32, branch: DecayBranch, lengths: RangeInclusive<usize>) -> Result<DecayFit> {
    let q = branch.modulus();
    let (lo, hi) = (*lengths.start(), *lengths.end());
    if lo == 0 || lo > hi {
        return Err(Error::invalid(format!("invalid length range {lo}..={hi}")));
    }
    let xi = branch.xi();
    let ln_xi = xi.ln();
    let tables: Vec<ResidueCountTable> = (1..=hi)
        .into_par_iter()
        .map(|len| class_counts_exact_length(g, len, q))
        .collect::<Result<_>>()?;

    let series: Vec<DecayPoint> = tables[lo - 1..]
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let discrepancy_log = t.max_discrepancy.ln();
            DecayPoint {
                len: lo + i,
                discrepancy_log,
                normalized_log: discrepancy_log - ln_biguint(&t.total),
            }
        })
        .collect();
    let log_a = series
        .iter()
        .map(|p| p.normalized_log - p.len as f64 * ln_xi)
        .fold(0.0f64, f64::max);

    let ln_g = (g as f64).ln();
    let mut cumulative = vec![BigUint::zero(); q as usize];
    let mut cumulative_constant = 0.0f64;
    for (len, table) in (1..=hi).zip(&tables) {
        for (acc, c) in cumulative.iter_mut().zip(&table.counts) {
            *acc += c;
        }
        if len < lo {
            continue;
        }
        let total: BigUint = cumulative.iter().sum();
        let disc = Discrepancy::compute(&cumulative, &total, q);
        // ln(g^len - 1), accurate enough for a constant estimate
        let ln_x = len as f64 * ln_g + (-(g as f64).powi(-(len as i32))).ln_1p();
        let bound_log = ln_biguint(&total) + log_a + ln_xi * ln_x / (2.0 * ln_g);
        cumulative_constant = cumulative_constant.max((disc.ln() - bound_log).exp());
    }

    Ok(DecayFit {
        g,
        branch,
        xi,
        series,
        log_a,
        cumulative_constant,
        xi_below_threshold: xi < (2.0f64 / 3.0).sqrt(),
    })
}

/// One `x` in a [`CumulativeDecayReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeRow {
    pub x: BigUint,
    pub total: BigUint,
    pub discrepancy: Discrepancy,
    /// Log of the corollary decay factor (no constant).
    pub decay_log: f64,
    /// `ln(D(x) / (|P(x)| * decay))`: the log of the constant this `x` demands.
    pub empirical_constant_log: f64,
    /// `D(x)` against `|P(x)| * decay * factor * C_0`, where `C_0` is the first
    /// row's empirical constant.
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeDecayReport {
    pub g: u32,
    pub branch: DecayBranch,
    pub factor: f64,
    pub rows: Vec<CumulativeRow>,
    /// `max_i C_i / C_0` on the log scale.
    pub growth_log: f64,
    pub bounded: bool,
}

/// Default allowed growth of the empirical cumulative constant over an `x` list.
pub const DEFAULT_GROWTH_FACTOR: f64 = 10.0;

pub fn check_cumulative_decay(g: u32, q: u64, xs: &[BigUint], factor: f64) -> Result<CumulativeDecayReport> {
    let branch = DecayBranch::select(g, q)?;
    check_cumulative_decay_with(g, branch, xs, factor)
}

pub fn check_cumulative_decay_with(
    g: u32,
    branch: DecayBranch,
    xs: &[BigUint],
    factor: f64,
) -> Result<CumulativeDecayReport> {
    if xs.is_empty() {
        return Err(Error::invalid("x list is empty"));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::precondition("x list must be strictly increasing"));
    }
    if xs[0].is_zero() {
        return Err(Error::invalid("x must be at least 1"));
    }
    if factor.is_nan() || factor < 1.0 {
        return Err(Error::invalid(format!("growth factor must be >= 1, got {factor}")));
    }
    let q = branch.modulus();
    let tables: Vec<ResidueCountTable> = xs
        .par_iter()
        .map(|x| class_counts_up_to(g, x, q))
        .collect::<Result<_>>()?;

    let measured: Vec<(f64, f64)> = xs
        .iter()
        .zip(&tables)
        .map(|(x, t)| {
            let decay_log = branch.corollary_decay_log(g, ln_biguint(x));
            let constant_log = t.max_discrepancy.ln() - ln_biguint(&t.total) - decay_log;
            (decay_log, constant_log)
        })
        .collect();
    let c0 = measured[0].1;
    let allowed = c0 + factor.ln();

    let rows: Vec<CumulativeRow> = xs
        .iter()
        .zip(tables)
        .zip(&measured)
        .map(|((x, t), &(decay_log, constant_log))| {
            let rhs_log = ln_biguint(&t.total) + decay_log + allowed;
            let report = BoundReport::new(branch.corollary(), t.max_discrepancy.ln(), rhs_log)
                .with("g", g)
                .with("q", q)
                .with("x", x);
            CumulativeRow {
                x: x.clone(),
                total: t.total,
                discrepancy: t.max_discrepancy,
                decay_log,
                empirical_constant_log: constant_log,
                report,
            }
        })
        .collect();

    let max_c = measured.iter().map(|m| m.1).fold(f64::NEG_INFINITY, f64::max);
    let growth_log = if max_c == f64::NEG_INFINITY {
        0.0
    } else {
        max_c - c0
    };
    let bounded = rows.iter().all(|r| r.report.satisfied);
    Ok(CumulativeDecayReport {
        g,
        branch,
        factor,
        rows,
        growth_log,
        bounded,
    })
}

/// Smallest length allowed by [`check_prop41`] for the prime `p`.
pub fn prop41_min_length(p: u64) -> usize {
    (10 * p - 5) as usize
}
