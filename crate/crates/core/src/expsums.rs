//! Exponential sums over palindromes and the power-pair sums that control them.
//!
//! `S_L(c) = sum_{n in P_L} e_q(c n)` factors exactly over prefix positions:
//! each position contributes `sum_a e_q(c a w_i)` with the same weights the
//! counting DP uses. [`palindrome_exp_sum_product`] evaluates that product in
//! log-polar form so `|S_L|` can exceed the `f64` range;
//! [`palindrome_exp_sum_brute`] sums term by term and serves as its oracle.

use std::f64::consts::{PI, TAU};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bigmath::{ln_biguint, mul_mod, pow_mod};
use crate::digits::{count_exact_length, iter_palindromes, palindromes_of_length_u64};
use crate::error::{Error, Result};
use crate::modular::{mod_inverse, ord, Modulus};
use crate::report::{BoundId, BoundReport};

/// Largest `|P_L|` the direct summation will enumerate.
pub const BRUTE_FORCE_CAP: u64 = 10_000_000;

/// A complex number as `exp(log_mag) * exp(i arg)`, `arg` in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_mag: f64,
    pub arg: f64,
}

fn wrap_arg(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        arg: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        arg: 0.0,
    };

    pub fn new(log_mag: f64, arg: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex {
            log_mag,
            arg: wrap_arg(arg),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.is_zero() {
            return Self::ZERO;
        }
        Self::new(z.norm().ln(), z.arg())
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::zero();
        }
        Complex64::from_polar(self.log_mag.exp(), self.arg)
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// `|z|`, which may overflow to `inf` for large sums.
    pub fn norm(self) -> f64 {
        self.log_mag.exp()
    }
}

impl std::ops::Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag + rhs.log_mag, self.arg + rhs.arg)
    }
}

impl std::iter::Product for LogComplex {
    fn product<I: Iterator<Item = LogComplex>>(iter: I) -> LogComplex {
        iter.fold(LogComplex::ONE, |acc, z| acc * z)
    }
}

/// `exp(2 pi i x / q)`, with `x` reduced modulo `q` in integers first.
pub fn e_q(q: u64, x: i64) -> Complex64 {
    let r = (x as i128).rem_euclid(q as i128) as u64;
    unit_root(q, r)
}

fn unit_root(q: u64, r: u64) -> Complex64 {
    let theta = TAU * r as f64 / q as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// All `q` values `e_q(r)`, `0 <= r < q`.
#[derive(Debug, Clone)]
pub struct RootTable {
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(q: u64) -> Self {
        RootTable {
            roots: (0..q).map(|r| unit_root(q, r)).collect(),
        }
    }

    /// `e_q(r)` for `r` already reduced mod `q`.
    #[inline]
    pub fn get(&self, r: u64) -> Complex64 {
        self.roots[r as usize]
    }
}

fn residue(c: i64, q: u64) -> u64 {
    (c as i128).rem_euclid(q as i128) as u64
}

fn gcd3(a: u64, b: u64, q: u64) -> u64 {
    a.gcd(&b).gcd(&q)
}

/// `sum_{k=1}^{ord_q(g)} e_q(a g^k + b g^{-k})`.
pub fn power_pair_sum(q: u64, g: u64, a: i64, b: i64) -> Result<Complex64> {
    let m = Modulus::new(q)?;
    let t = ord(g, &m)?;
    let g_inv = mod_inverse(g as i64, q)?;
    let (a, b) = (residue(a, q), residue(b, q));
    let mut fwd = 1u64;
    let mut back = 1u64;
    let mut sum = Complex64::zero();
    for _ in 0..t {
        fwd = mul_mod(fwd, g, q);
        back = mul_mod(back, g_inv, q);
        let x = (mul_mod(a, fwd, q) + mul_mod(b, back, q)) % q;
        sum += unit_root(q, x);
    }
    Ok(sum)
}

fn lemma21_rhs(q: u64, a: u64, b: u64, d: u64) -> f64 {
    d as f64 * (q as f64).sqrt() * (gcd3(a, b, q) as f64).sqrt()
}

pub fn check_lemma21(q: u64, g: u64, a: i64, b: i64) -> Result<BoundReport> {
    let s = power_pair_sum(q, g, a, b)?;
    let d = Modulus::new(q)?.arithmetic().d;
    let (ar, br) = (residue(a, q), residue(b, q));
    Ok(
        BoundReport::from_linear(BoundId::Lemma21, s.norm(), lemma21_rhs(q, ar, br, d))
            .with("q", q)
            .with("g", g)
            .with("a", a)
            .with("b", b),
    )
}

/// The power-pair bound checked at every `(a, b) in [0, q)^2` for one modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPairSweep {
    pub q: u64,
    pub ord: u64,
    pub pairs: u64,
    pub violations: u64,
    /// The pair with the least slack.
    pub tightest: BoundReport,
}

pub fn lemma21_sweep_modulus(q: u64, g: u64) -> Result<PowerPairSweep> {
    let m = Modulus::new(q)?;
    let t = ord(g, &m)?;
    let d = m.arithmetic().d;
    let g_inv = mod_inverse(g as i64, q)?;
    let roots = RootTable::new(q);
    let fwd: Vec<u64> = (1..=t).map(|k| pow_mod(g, k, q)).collect();
    let back: Vec<u64> = (1..=t).map(|k| pow_mod(g_inv, k, q)).collect();

    let mut violations = 0;
    let mut tightest: Option<BoundReport> = None;
    let mut a_part = vec![0u64; t as usize];
    let mut b_part = vec![0u64; t as usize];
    for a in 0..q {
        b_part.fill(0);
        for b in 0..q {
            let mut sum = Complex64::zero();
            for k in 0..t as usize {
                let mut x = a_part[k] + b_part[k];
                if x >= q {
                    x -= q;
                }
                sum += roots.get(x);
            }
            let report = BoundReport::from_linear(BoundId::Lemma21, sum.norm(), lemma21_rhs(q, a, b, d));
            if !report.satisfied {
                violations += 1;
            }
            if tightest.as_ref().is_none_or(|r| report.slack_log < r.slack_log) {
                tightest = Some(report.with("a", a).with("b", b));
            }
            for (v, step) in b_part.iter_mut().zip(&back) {
                *v += step;
                if *v >= q {
                    *v -= q;
                }
            }
        }
        for (v, step) in a_part.iter_mut().zip(&fwd) {
            *v += step;
            if *v >= q {
                *v -= q;
            }
        }
    }
    Ok(PowerPairSweep {
        q,
        ord: t,
        pairs: q * q,
        violations,
        tightest: tightest.expect("q >= 2").with("q", q).with("g", g),
    })
}

/// Sweeps every `2 <= q <= q_max` coprime to `g`, in increasing `q`.
pub fn lemma21_sweep(g: u64, q_max: u64) -> Result<Vec<PowerPairSweep>> {
    (2..=q_max)
        .into_par_iter()
        .filter(|q| q.gcd(&g) == 1)
        .map(|q| lemma21_sweep_modulus(q, g))
        .collect()
}

/// `s(q, k, h) = |sum_{a<k} e_q(h a)|`.
pub fn geometric_digit_sum(q: u64, k: u64, h: i64) -> f64 {
    let h = residue(h, q);
    // the terms run over whole periods of length q / gcd(h, q)
    let period = q / h.gcd(&q);
    if period > 1 && k.is_multiple_of(period) {
        return 0.0;
    }
    let mut sum = Complex64::zero();
    let mut x = 0u64;
    for _ in 0..k {
        sum += unit_root(q, x);
        x = (x + h) % q;
    }
    sum.norm()
}

fn lemma22_rhs(q: u64, k: u64, h: u64) -> f64 {
    let d = h.gcd(&q) as f64;
    let qf = q as f64;
    k as f64 * (-4.0 * d * d / (qf * qf)).exp()
}

pub fn check_lemma22(q: u64, k: u64, h: i64) -> Result<BoundReport> {
    if q < 2 || k < 2 {
        return Err(Error::precondition(format!("q >= 2 and k >= 2 required (q = {q}, k = {k})")));
    }
    let hr = residue(h, q);
    if hr == 0 {
        return Err(Error::precondition(format!("q does not divide h fails (q = {q}, h = {h})")));
    }
    Ok(
        BoundReport::from_linear(BoundId::Lemma22, geometric_digit_sum(q, k, h), lemma22_rhs(q, k, hr))
            .with("q", q)
            .with("k", k)
            .with("h", h),
    )
}

/// The geometric digit-sum bound over `2 <= k <= k_max`, `1 <= h <= h_max`, `q` not dividing `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricSweep {
    pub q: u64,
    pub checked: u64,
    pub violations: u64,
    pub tightest: BoundReport,
}

pub fn lemma22_sweep_modulus(q: u64, k_max: u64, h_max: u64) -> Result<GeometricSweep> {
    if q < 2 || k_max < 2 {
        return Err(Error::invalid("need q >= 2 and k_max >= 2"));
    }
    let roots = RootTable::new(q);
    let mut checked = 0;
    let mut violations = 0;
    let mut tightest: Option<BoundReport> = None;
    for h in (1..=h_max).filter(|h| h % q != 0) {
        let step = h % q;
        let period = q / step.gcd(&q);
        // running partial sums over k
        let mut sum = Complex64::zero();
        let mut x = 0u64;
        for k in 1..=k_max {
            sum += roots.get(x);
            x = (x + step) % q;
            if k < 2 {
                continue;
            }
            let lhs = if k % period == 0 { 0.0 } else { sum.norm() };
            let report = BoundReport::from_linear(BoundId::Lemma22, lhs, lemma22_rhs(q, k, step));
            checked += 1;
            if !report.satisfied {
                violations += 1;
            }
            if tightest.as_ref().is_none_or(|r| report.slack_log < r.slack_log) {
                tightest = Some(report.with("k", k).with("h", h));
            }
        }
    }
    let tightest = tightest
        .ok_or_else(|| Error::invalid(format!("no admissible h for q = {q}")))?
        .with("q", q);
    Ok(GeometricSweep {
        q,
        checked,
        violations,
        tightest,
    })
}

/// For each `2 <= q <= q_max`: `k <= 3q`, `h <= 3q`.
pub fn lemma22_sweep(q_max: u64) -> Result<Vec<GeometricSweep>> {
    (2..=q_max)
        .into_par_iter()
        .map(|q| lemma22_sweep_modulus(q, 3 * q, 3 * q))
        .collect()
}

/// Direct summation of `S_L(c)` over every palindrome of length `len`.
pub fn palindrome_exp_sum_brute(g: u32, len: usize, q: u64, c: i64) -> Result<Complex64> {
    if q < 2 {
        return Err(Error::invalid("modulus must be at least 2"));
    }
    let size = count_exact_length(g, len)?;
    if size > BigUint::from(BRUTE_FORCE_CAP) {
        return Err(Error::resource(format!(
            "|P_{len}| = {size} exceeds the enumeration cap {BRUTE_FORCE_CAP}"
        )));
    }
    let c = residue(c, q);
    // Tally phases exactly, then weight each root of unity once; adding
    // millions of unit vectors one by one loses about 1e-7 to rounding.
    let mut phases = vec![0u64; q as usize];
    if let Some(pals) = palindromes_of_length_u64(g, len) {
        for n in pals {
            phases[mul_mod(c, n % q, q) as usize] += 1;
        }
    } else {
        let lo = crate::bigmath::big_pow(g as u64, len as u64 - 1);
        let hi = crate::bigmath::big_pow(g as u64, len as u64) - 1u32;
        for n in iter_palindromes(g, &lo, &hi)? {
            let r = (n % q).to_u64().expect("reduced below q");
            phases[mul_mod(c, r, q) as usize] += 1;
        }
    }
    let roots = RootTable::new(q);
    Ok(phases
        .iter()
        .enumerate()
        .map(|(r, &k)| roots.get(r as u64) * k as f64)
        .sum())
}

/// Weight `w_i` of each prefix position of a length-`len` palindrome, mod `q`.
fn position_weights(g: u32, len: usize, q: u64) -> Vec<u64> {
    let g = g as u64;
    (0..len.div_ceil(2))
        .map(|i| {
            let j = len - 1 - i;
            if i == j {
                pow_mod(g, i as u64, q)
            } else {
                (pow_mod(g, i as u64, q) + pow_mod(g, j as u64, q)) % q
            }
        })
        .collect()
}

/// `sum_{a=lo}^{g-1} e_q(a t)` with exact zero detection.
///
/// With `m = q / gcd(t, q)`, the full sum vanishes iff `1 < m | g` and the
/// sum without `a = 0` vanishes iff `1 < m | g - 1`.
fn digit_factor(g: u32, q: u64, t: u64, lo: u32) -> LogComplex {
    let m = q / t.gcd(&q);
    let span = if lo == 0 { g as u64 } else { g as u64 - 1 };
    if m > 1 && span % m == 0 {
        return LogComplex::ZERO;
    }
    let mut sum = Complex64::zero();
    let mut x = mul_mod(lo as u64, t, q);
    for _ in lo..g {
        sum += unit_root(q, x);
        x = (x + t) % q;
    }
    LogComplex::from_complex(sum)
}

/// `S_L(c)` through the exact product over prefix positions.
pub fn palindrome_exp_sum_product(g: u32, len: usize, q: u64, c: i64) -> Result<LogComplex> {
    if q < 2 {
        return Err(Error::invalid("modulus must be at least 2"));
    }
    count_exact_length(g, len)?;
    let c = residue(c, q);
    Ok(position_weights(g, len, q)
        .iter()
        .enumerate()
        .map(|(i, &w)| digit_factor(g, q, mul_mod(c, w, q), if i == 0 { 1 } else { 0 }))
        .product())
}

/// `Theta_c = 1/g + (g-1) d(q) q^(1/2) gcd(c,q)^(1/2) / (g ord_q(g))`.
pub fn theta_c(g: u32, q: u64, c: i64) -> Result<f64> {
    let m = Modulus::new(q)?;
    let t = ord(g as u64, &m)?;
    let d = m.arithmetic().d as f64;
    let gc = residue(c, q).gcd(&q) as f64;
    let gf = g as f64;
    Ok(1.0 / gf + (gf - 1.0) * d * (q as f64).sqrt() * gc.sqrt() / (gf * t as f64))
}

/// Verifies the hypotheses for the `Theta_c` bound, returning `ord_q(g)`.
pub fn lemma31_admissible(g: u32, q: u64, c: i64) -> Result<u64> {
    let m = Modulus::new(q)?;
    if let Some(&(p, _)) = m.factors().iter().find(|&&(p, _)| p <= g as u64) {
        return Err(Error::precondition(format!(
            "p > g for every prime p | q fails (p = {p}, g = {g})"
        )));
    }
    let t = ord(g as u64, &m)?;
    let d = m.arithmetic().d as f64;
    let gc = residue(c, q).gcd(&q) as f64;
    let needed = d * (q as f64).sqrt() * gc.sqrt();
    if t as f64 <= needed {
        return Err(Error::precondition(format!(
            "ord_q(g) > d(q) q^(1/2) gcd(c,q)^(1/2) fails (ord = {t}, bound = {needed:.4})"
        )));
    }
    Ok(t)
}

pub fn check_lemma31(g: u32, q: u64, c: i64, len: usize) -> Result<BoundReport> {
    let t = lemma31_admissible(g, q, c)?;
    let theta = theta_c(g, q, c)?;
    let s = palindrome_exp_sum_product(g, len, q, c)?;
    let size = ln_biguint(&count_exact_length(g, len)?);
    let exponent = (len as f64 - 2.0 * t as f64 - 1.0) / 4.0;
    Ok(BoundReport::new(BoundId::Lemma31, s.log_mag, size + exponent * theta.ln())
        .with("g", g)
        .with("q", q)
        .with("c", c)
        .with("L", len)
        .with("ord", t)
        .with("theta", theta))
}

pub fn lemma32_admissible(g: u32, q: u64, c: i64) -> Result<()> {
    crate::counting::coprime_branch_admissible(g, q)?;
    if residue(c, q) == 0 {
        return Err(Error::precondition(format!("q does not divide c fails (q = {q}, c = {c})")));
    }
    Ok(())
}

pub fn check_lemma32(g: u32, q: u64, c: i64, len: usize) -> Result<BoundReport> {
    lemma32_admissible(g, q, c)?;
    let s = palindrome_exp_sum_product(g, len, q, c)?;
    let size = ln_biguint(&count_exact_length(g, len)?);
    let gc = residue(c, q).gcd(&q) as f64;
    let qf = q as f64;
    let rhs = size - (len as f64 - 5.0) * gc * gc / (qf * qf);
    Ok(BoundReport::new(BoundId::Lemma32, s.log_mag, rhs)
        .with("g", g)
        .with("q", q)
        .with("c", c)
        .with("L", len))
}
