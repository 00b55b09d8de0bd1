//! Primality, the prime-palindrome census, and the truncated Brun sieve.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bigmath::{big_pow, ln_biguint, mul_mod, to_signed};
use crate::counting::class_counts_up_to;
use crate::digits::{
    count_exact_length, count_up_to, digit_len, palindrome_from_prefix, palindrome_from_prefix_u64,
};
use crate::error::{Error, Result};
use crate::modular::{primes_up_to, sieve_modulus_product, PrimeProduct};

/// Largest `|P(x)|` the census will enumerate.
pub const CENSUS_CAP: u64 = 100_000_000;

/// Largest number of sieve divisors evaluated.
pub const SIEVE_DIVISOR_CAP: u64 = 1_000_000;

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for 64-bit inputs (first twelve prime bases).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    SMALL_PRIMES.iter().all(|&a| strong_probable_prime_u64(n, a, d, s))
}

fn strong_probable_prime_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = crate::bigmath::pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality of an arbitrary integer: deterministic below `2^64`,
/// Baillie–PSW above (see [`is_prime_proven`]).
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => baillie_psw(n),
    }
}

/// Whether [`is_prime`] is a proof for this `n` rather than a probable-prime test.
pub fn is_prime_proven(n: &BigUint) -> bool {
    n.bits() <= 64
}

fn baillie_psw(n: &BigUint) -> bool {
    for &p in primes_up_to(1000).iter() {
        if (n % p).is_zero() {
            return *n == BigUint::from(p);
        }
    }
    strong_probable_prime_big(n, &BigUint::from(2u32)) && strong_lucas_probable_prime(n)
}

fn strong_probable_prime_big(n: &BigUint, a: &BigUint) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a / n)` for odd `n`.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let mut a = a.mod_floor(&to_signed(n)).magnitude().clone();
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap();
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameters.
fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 if d.magnitude() != n => return false,
            _ => {}
        }
        d = if d.is_positive() { -(d + 2i32) } else { -(d - 2i32) };
    }
    let ni = to_signed(n);
    let reduce = |v: BigInt| -> BigUint { v.mod_floor(&ni).magnitude().clone() };
    let q_big = reduce((BigInt::one() - &d) / 4);
    let d_mod = reduce(d.clone());
    let half = |v: BigUint| -> BigUint {
        if v.is_odd() {
            (v + n) >> 1
        } else {
            v >> 1
        }
    };

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // P = 1: U_1 = 1, V_1 = 1, Q^1 = Q
    let mut u = BigUint::one();
    let mut v = BigUint::one();
    let mut qk = q_big.clone();
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        // double
        u = &u * &v % n;
        v = (&v * &v + n * 2u32 - (&qk << 1) % n) % n;
        qk = &qk * &qk % n;
        if k.bit(i) {
            let u1 = half(&u + &v);
            let v1 = half((&d_mod * &u + &v) % n);
            u = u1 % n;
            v = v1 % n;
            qk = &qk * &q_big % n;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v + n * 2u32 - (&qk << 1) % n) % n;
        qk = &qk * &qk % n;
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Palindrome and prime-palindrome counts up to `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub g: u32,
    pub x: BigUint,
    pub palindrome_count: BigUint,
    pub prime_palindrome_count: BigUint,
    /// `(L, palindromes of length L up to x, primes among them)` for each
    /// length with at least one palindrome in range.
    pub per_length: Vec<(usize, BigUint, BigUint)>,
    pub density: f64,
    /// `log log log x / log log x`, when `log log log x > 0`.
    pub envelope: Option<f64>,
    /// Set when some tested value was at least `2^64`.
    pub probabilistic: bool,
}

/// `log log log x / log log x`, defined once `log log x > 1`.
pub fn density_envelope(x: &BigUint) -> Option<f64> {
    let ll = ln_biguint(x).ln();
    if ll.is_nan() || ll <= 1.0 {
        return None;
    }
    Some(ll.ln() / ll)
}

fn census_length(g: u32, len: usize, x: &BigUint) -> (BigUint, BigUint) {
    let half = len.div_ceil(2);
    let first = big_pow(g as u64, half as u64 - 1);
    let end = big_pow(g as u64, half as u64);
    let top = big_pow(g as u64, len as u64);
    let word = top.bits() < 64;
    // parallel over prefix chunks, summed in chunk order
    let chunk = 4096u64;
    let span = (&end - &first).to_u64().expect("census cap keeps prefixes small");
    let (pals, primes) = (0..span.div_ceil(chunk))
        .into_par_iter()
        .map(|ci| {
            let (mut pals, mut primes) = (0u64, 0u64);
            let offsets = ci * chunk..((ci + 1) * chunk).min(span);
            if let (true, Some(first), Some(x)) = (word, first.to_u64(), x.to_u64()) {
                for off in offsets {
                    let n = palindrome_from_prefix_u64(first + off, len, g as u64).expect("fits a word");
                    if n > x {
                        break;
                    }
                    pals += 1;
                    primes += is_prime_u64(n) as u64;
                }
            } else {
                for off in offsets {
                    let n = palindrome_from_prefix(&(&first + off), len, g);
                    if n > *x {
                        break;
                    }
                    pals += 1;
                    primes += is_prime(&n) as u64;
                }
            }
            (pals, primes)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    (BigUint::from(pals), BigUint::from(primes))
}

/// Enumerates `P(x)` and counts primes.
pub fn census(g: u32, x: &BigUint) -> Result<CensusReport> {
    let palindrome_count = count_up_to(g, x)?;
    if palindrome_count > BigUint::from(CENSUS_CAP) {
        return Err(Error::resource(format!(
            "|P(x)| = {palindrome_count} exceeds the census cap {CENSUS_CAP}; choose a smaller x"
        )));
    }
    let max_len = digit_len(x, g);
    let per_length: Vec<(usize, BigUint, BigUint)> = (1..=max_len)
        .map(|len| {
            let (p, q) = census_length(g, len, x);
            (len, p, q)
        })
        .filter(|row| !row.1.is_zero())
        .collect();
    let prime_palindrome_count: BigUint = per_length.iter().map(|r| &r.2).sum();
    debug_assert_eq!(per_length.iter().map(|r| &r.1).sum::<BigUint>(), palindrome_count);
    let density = if palindrome_count.is_zero() {
        0.0
    } else {
        (ln_biguint(&prime_palindrome_count) - ln_biguint(&palindrome_count)).exp()
    };
    Ok(CensusReport {
        g,
        x: x.clone(),
        palindrome_count,
        prime_palindrome_count,
        per_length,
        density,
        envelope: density_envelope(x),
        probabilistic: x.bits() > 64,
    })
}

/// Prime palindromes of exactly `len` digits, sorted.
pub fn prime_palindromes_of_length(g: u32, len: usize) -> Result<Vec<BigUint>> {
    let size = count_exact_length(g, len)?;
    if size > BigUint::from(CENSUS_CAP) {
        return Err(Error::resource(format!("|P_{len}| = {size} exceeds the census cap")));
    }
    let hi = big_pow(g as u64, len as u64) - 1u32;
    let lo = big_pow(g as u64, len as u64 - 1);
    Ok(crate::digits::iter_palindromes(g, &lo, &hi)?
        .filter(is_prime)
        .collect())
}

/// The sieve level `y` and truncation depth `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SieveParams {
    pub y: f64,
    pub h: u32,
}

/// Smallest integer `x` with `floor(e log log log x) >= 1`.
pub fn min_sieve_x() -> u64 {
    let threshold = (1.0f64 / std::f64::consts::E).exp().exp().exp();
    threshold.ceil() as u64
}

/// `h = floor(e log log log x)`, `y = e^{-1} (log x)^{1/(4h)}`.
pub fn default_sieve_params(x: &BigUint) -> Result<SieveParams> {
    let lll = ln_biguint(x).ln().ln();
    let h = (std::f64::consts::E * lll).floor();
    if h.is_nan() || h < 1.0 {
        return Err(Error::precondition(format!(
            "floor(e log log log x) >= 1 fails; x must be at least {}",
            min_sieve_x()
        )));
    }
    let h = h as u32;
    let y = (ln_biguint(x).ln() / (4.0 * h as f64) - 1.0).exp();
    Ok(SieveParams { y, h })
}

/// One divisor `q | Q` in the truncated sieve sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveTerm {
    pub q: u64,
    pub mu: i8,
    pub omega: u32,
    /// `#{n in P(x) : q | n}`.
    pub a_q: BigUint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SieveEvaluation {
    pub g: u32,
    pub x: BigUint,
    pub y: f64,
    pub h: u32,
    pub modulus: PrimeProduct,
    /// Sorted by `(omega, q)`.
    pub terms: Vec<SieveTerm>,
    /// `sum mu(q) A_q` over squarefree `q | Q` with `omega(q) <= 2h`.
    pub truncated_sum: BigInt,
    /// `floor(y) + truncated_sum`; bounds the prime census since the census is an integer.
    pub upper_bound: BigInt,
}

impl SieveEvaluation {
    /// Whether every prime factor of `Q` is in the truncated sum, making it
    /// the full inclusion–exclusion count of palindromes coprime to `Q`.
    pub fn is_complete(&self) -> bool {
        2 * self.h as usize >= self.modulus.primes.len()
    }
}

fn subsets_up_to(n: usize, k: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for r in 0..=k.min(n) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((n - r) as u64) / (r as u64 + 1);
    }
    total
}

/// Squarefree divisors of the product of `primes` with at most `max_omega` factors.
fn divisors_by_omega(primes: &[u64], max_omega: usize) -> Result<Vec<(u64, u32)>> {
    let mut out = vec![(1u64, 0u32)];
    for &p in primes {
        let extra: Vec<(u64, u32)> = out
            .iter()
            .filter(|&&(_, w)| (w as usize) < max_omega)
            .map(|&(q, w)| {
                q.checked_mul(p)
                    .map(|v| (v, w + 1))
                    .ok_or_else(|| Error::resource(format!("sieve divisor overflows 64 bits at prime {p}")))
            })
            .collect::<Result<_>>()?;
        out.extend(extra);
    }
    out.sort_unstable_by_key(|&(q, w)| (w, q));
    Ok(out)
}

/// Brun's truncated sieve with `Q = prod_{g^3 < p <= y} p`.
pub fn brun_truncated_bound(g: u32, x: &BigUint, y: f64, h: u32) -> Result<SieveEvaluation> {
    let modulus = sieve_modulus_product(g, y);
    brun_truncated_bound_with(g, x, y, h, modulus)
}

/// Brun's truncated sieve with an explicit set of sieving primes.
pub fn brun_truncated_bound_with(
    g: u32,
    x: &BigUint,
    y: f64,
    h: u32,
    modulus: PrimeProduct,
) -> Result<SieveEvaluation> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::invalid(format!("y must be nonnegative, got {y}")));
    }
    if h == 0 {
        return Err(Error::invalid("h must be at least 1"));
    }
    if x.is_zero() {
        return Err(Error::invalid("x must be at least 1"));
    }
    let depth = 2 * h as usize;
    let count = subsets_up_to(modulus.primes.len(), depth);
    if count > SIEVE_DIVISOR_CAP {
        return Err(Error::resource(format!(
            "{count} sieve divisors exceed the cap {SIEVE_DIVISOR_CAP}; use a smaller y or h"
        )));
    }
    let divisors = divisors_by_omega(&modulus.primes, depth)?;
    let total = count_up_to(g, x)?;
    let terms: Vec<SieveTerm> = divisors
        .par_iter()
        .map(|&(q, omega)| {
            let a_q = if q == 1 {
                total.clone()
            } else if BigUint::from(q) > *x {
                // no positive multiple of q is at most x
                BigUint::zero()
            } else {
                class_counts_up_to(g, x, q)?.counts.swap_remove(0)
            };
            Ok(SieveTerm {
                q,
                mu: if omega % 2 == 0 { 1 } else { -1 },
                omega,
                a_q,
            })
        })
        .collect::<Result<_>>()?;
    let truncated_sum: BigInt = terms
        .iter()
        .map(|t| {
            let v = to_signed(&t.a_q);
            if t.mu < 0 {
                -v
            } else {
                v
            }
        })
        .sum();
    let upper_bound = &truncated_sum + BigInt::from(y.floor() as u64);
    Ok(SieveEvaluation {
        g,
        x: x.clone(),
        y,
        h,
        modulus,
        terms,
        truncated_sum,
        upper_bound,
    })
}

/// `sum_{q | Q} mu(q) / q` over every squarefree divisor.
pub fn mobius_reciprocal_sum(primes: &[u64]) -> f64 {
    // Expanded term by term rather than as a product.
    let mut terms = vec![1.0f64];
    for &p in primes {
        let extra: Vec<f64> = terms.iter().map(|t| -t / p as f64).collect();
        terms.extend(extra);
    }
    // Neumaier summation; there are 2^omega(Q) terms of both signs.
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for &t in &terms {
        let next = sum + t;
        carry += if sum.abs() >= t.abs() { (sum - next) + t } else { (t - next) + sum };
        sum = next;
    }
    sum + carry
}

/// One row of a density table.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub census: CensusReport,
    /// `density / envelope`.
    pub envelope_ratio: Option<f64>,
    /// `density * log x`, an exploratory constant.
    pub density_log_x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityTable {
    pub rows: Vec<DensityRow>,
    pub strictly_decreasing: bool,
    /// Largest `ratio_j / ratio_i` with `i < j` over rows with a defined
    /// envelope; at least 1.
    pub ratio_growth: Option<f64>,
}

pub fn density_series(g: u32, xs: &[BigUint]) -> Result<DensityTable> {
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::precondition("x list must be strictly increasing"));
    }
    let rows: Vec<DensityRow> = xs
        .iter()
        .map(|x| {
            let census = census(g, x)?;
            Ok(DensityRow {
                envelope_ratio: census.envelope.map(|e| census.density / e),
                density_log_x: census.density * ln_biguint(x),
                census,
            })
        })
        .collect::<Result<_>>()?;
    let strictly_decreasing = rows.windows(2).all(|w| w[1].census.density < w[0].census.density);
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.envelope_ratio).collect();
    // largest r_j / r_i with i < j, i.e. the worst increase along the list
    let ratio_growth = ratios.first().map(|&first| {
        let mut low = first;
        let mut growth = 1.0f64;
        for &r in &ratios[1..] {
            growth = growth.max(r / low);
            low = low.min(r);
        }
        growth
    });
    Ok(DensityTable {
        rows,
        strictly_decreasing,
        ratio_growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::is_palindrome_u64;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&big(101)));
        assert!(!is_prime(&big(1001)));
        assert!(is_prime(&big(10301)));
        assert!(!is_prime(&big(0)) && !is_prime(&big(1)));
        assert!(is_prime(&big(2)));
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..200_000u64 {
            assert_eq!(is_prime_u64(n), trial_division(n), "n={n}");
        }
    }

    #[test]
    fn miller_rabin_on_hard_composites() {
        // strong pseudoprimes to several small bases, and Carmichael numbers
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321, 3_825_123_056_546_413_051, 561, 41041, 825_265] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn baillie_psw_beyond_64_bits() {
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_prime(&m127));
        assert!(!is_prime_proven(&m127));
        let m89 = (BigUint::one() << 89) - 1u32;
        assert!(!is_prime(&(&m127 * &m89)));
        assert!(!is_prime(&(&m89 * &m89)));
        // 2^64 + 13 is prime, 2^64 + 1 = 274177 * 67280421310721
        assert!(is_prime(&((BigUint::one() << 64) + 13u32)));
        assert!(!is_prime(&((BigUint::one() << 64) + 1u32)));
        let p = big(4_294_967_311);
        assert!(!is_prime(&(&p * &p * &p)));
        for n in (1u64 << 20)..(1u64 << 20) + 3000 {
            assert_eq!(baillie_psw(&big(n)), trial_division(n), "n={n}");
        }
    }

    #[test]
    fn jacobi_small_table() {
        assert_eq!(jacobi(&BigInt::from(2), &big(7)), 1);
        assert_eq!(jacobi(&BigInt::from(5), &big(7)), -1);
        assert_eq!(jacobi(&BigInt::from(-1), &big(7)), -1);
        assert_eq!(jacobi(&BigInt::from(7), &big(21)), 0);
        assert_eq!(jacobi(&BigInt::from(1001), &big(9907)), -1);
    }

    #[test]
    fn census_examples() {
        let c = census(10, &big(100)).unwrap();
        assert_eq!((c.palindrome_count.clone(), c.prime_palindrome_count.clone()), (big(18), big(5)));
        let c = census(10, &big(1000)).unwrap();
        assert_eq!(c.prime_palindrome_count, big(20));
        assert_eq!(c.per_length[2], (3, big(90), big(15)));
        let c = census(2, &big(2)).unwrap();
        assert_eq!((c.palindrome_count, c.prime_palindrome_count), (big(1), big(0)));
    }

    #[test]
    fn census_matches_naive_filter() {
        for g in [2u32, 3, 10] {
            for x in [1u64, 10, 999, 12_345, 100_000] {
                let naive = (1..=x).filter(|&n| is_palindrome_u64(n, g) && trial_division(n)).count();
                let c = census(g, &big(x)).unwrap();
                assert_eq!(c.prime_palindrome_count, big(naive as u64), "g={g} x={x}");
                let sum: BigUint = c.per_length.iter().map(|r| &r.2).sum();
                assert_eq!(sum, c.prime_palindrome_count);
                assert!(c.prime_palindrome_count <= c.palindrome_count);
            }
        }
    }

    #[test]
    fn census_cap() {
        let x = big_pow(10, 18);
        assert!(matches!(census(10, &x), Err(Error::Resource(_))));
    }

    #[test]
    fn prime_palindromes_of_length_three() {
        let got = prime_palindromes_of_length(10, 3).unwrap();
        assert_eq!(got.len(), 15);
        assert_eq!(got[0], big(101));
        assert_eq!(got[14], big(929));
    }

    #[test]
    fn sieve_params() {
        // log log log x = 1 exactly gives h = floor(e) = 2
        let x = big((std::f64::consts::E.exp().exp()).ceil() as u64);
        assert_eq!(default_sieve_params(&x).unwrap().h, 2);
        assert!(matches!(default_sieve_params(&big(50)), Err(Error::Precondition(_))));
        assert_eq!(min_sieve_x(), 70);
        assert_eq!(default_sieve_params(&big(70)).unwrap().h, 1);
        let small = default_sieve_params(&big_pow(10, 100)).unwrap();
        let huge = default_sieve_params(&big_pow(10, 10_000)).unwrap();
        assert!(huge.h >= small.h);
    }

    #[test]
    fn two_term_sieve() {
        let x = big_pow(2, 20);
        let ev = brun_truncated_bound(2, &x, 11.0, 1).unwrap();
        let qs: Vec<u64> = ev.terms.iter().map(|t| t.q).collect();
        assert_eq!(qs, vec![1, 11]);
        let a11 = (1..=1u64 << 20).filter(|&n| n % 11 == 0 && is_palindrome_u64(n, 2)).count();
        assert_eq!(ev.terms[1].a_q, big(a11 as u64));
        let expect = BigInt::from(2046i64 - a11 as i64);
        assert_eq!(ev.truncated_sum, expect);
        assert_eq!(ev.upper_bound, expect + 11);
        assert!(ev.is_complete());
    }

    #[test]
    fn sieve_terms_match_brute_force() {
        let x = 1u64 << 16;
        let pals: Vec<u64> = crate::digits::palindromes_u64(2, 1, x).collect();
        let ev = brun_truncated_bound(2, &big(x), 29.0, 1).unwrap();
        assert_eq!(ev.terms.len(), 22);
        for t in &ev.terms {
            assert!(t.omega <= 2);
            let brute = pals.iter().filter(|&&n| n % t.q == 0).count();
            assert_eq!(t.a_q, big(brute as u64), "q={}", t.q);
        }
    }

    #[test]
    fn full_sieve_is_exact_coprime_count() {
        let x = big(1u64 << 22);
        let ev = brun_truncated_bound(2, &x, 23.0, 3).unwrap();
        assert!(ev.is_complete());
        let q: u64 = ev.modulus.primes.iter().product();
        let coprime = crate::digits::palindromes_u64(2, 1, 1 << 22)
            .filter(|n| n.gcd(&q) == 1)
            .count();
        assert_eq!(ev.truncated_sum, BigInt::from(coprime));
    }

    #[test]
    fn bonferroni_upper_bounds_census() {
        for (k, y, h_max) in [(16u64, 29.0, 3), (20, 29.0, 2), (20, 41.0, 1), (24, 23.0, 2)] {
            let x = big(1u64 << k);
            let census = census(2, &x).unwrap();
            for h in 1..=h_max {
                let ev = brun_truncated_bound(2, &x, y, h).unwrap();
                assert!(to_signed(&census.prime_palindrome_count) <= ev.upper_bound, "k={k} y={y} h={h}");
            }
        }
    }

    #[test]
    fn explicit_prime_override() {
        let primes = PrimeProduct::from_primes(vec![3, 5]);
        let ev = brun_truncated_bound_with(10, &big(1000), 5.0, 1, primes).unwrap();
        let coprime = (1..=1000u64).filter(|&n| is_palindrome_u64(n, 10) && n % 3 != 0 && n % 5 != 0).count();
        assert_eq!(ev.truncated_sum, BigInt::from(coprime));
    }

    #[test]
    fn divisor_cap() {
        let primes = PrimeProduct::from_primes(primes_up_to(2000).into_iter().filter(|&p| p > 8).collect());
        let err = brun_truncated_bound_with(2, &big(1000), 2000.0, 3, primes).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn mertens_matches_mobius_sum() {
        for y in [20.0, 60.0, 100.0] {
            let q = sieve_modulus_product(2, y);
            let product = crate::modular::mertens_product(2, y);
            let sum = mobius_reciprocal_sum(&q.primes);
            assert!((sum - product).abs() < 1e-12, "y={y}: {sum} vs {product}");
        }
    }

    #[test]
    fn density_examples() {
        let xs = [2u64, 4, 6].map(|e| big_pow(10, e));
        let t = density_series(10, &xs).unwrap();
        assert!(t.strictly_decreasing);
        assert!(t.rows.iter().all(|r| r.census.density <= 1.0));
        let xs = [10u64, 20, 30].map(|e| big_pow(2, e));
        let t = density_series(2, &xs).unwrap();
        assert!(t.strictly_decreasing);
        let counts: Vec<_> = t.rows.iter().map(|r| r.census.prime_palindrome_count.clone()).collect();
        assert_eq!(counts, vec![big(11), big(187), big(3657)]);
    }
}
