//! Base-`g` digit strings, palindromes, and the K-signature decomposition.
//!
//! A palindrome of length `L` is determined by its half-prefix: the first
//! `ceil(L/2)` digits. Prefixes of a fixed length are ordered the same way
//! as the palindromes they generate, so indexing, enumeration and the digit
//! DP in [`crate::counting`] all work on prefixes.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::bigmath::big_pow;
use crate::error::{Error, Result};

/// A base-`g` digit vector, most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    base: u32,
    digits: Vec<u32>,
}

impl DigitString {
    /// Builds a digit string, rejecting out-of-range digits and leading zeros.
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        check_base(base)?;
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::invalid(format!("digit {d} not below base {base}")));
        }
        if digits.first() == Some(&0) {
            return Err(Error::invalid("leading digit must be nonzero"));
        }
        Ok(DigitString { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_palindrome(&self) -> bool {
        self.digits.iter().eq(self.digits.iter().rev())
    }

    pub fn to_biguint(&self) -> BigUint {
        from_digits(&self.digits, self.base)
    }
}

fn check_base(g: u32) -> Result<()> {
    if g < 2 {
        return Err(Error::invalid(format!("base must be at least 2, got {g}")));
    }
    Ok(())
}

/// Base-`g` expansion of `n >= 1`.
pub fn to_digits(n: &BigUint, g: u32) -> Result<DigitString> {
    check_base(g)?;
    if n.is_zero() {
        return Err(Error::invalid("n must be positive"));
    }
    let mut digits = radix_le(n, g);
    digits.reverse();
    Ok(DigitString { base: g, digits })
}

/// Least-significant-first base-`g` digits; empty for zero.
pub(crate) fn radix_le(n: &BigUint, g: u32) -> Vec<u32> {
    if g <= 256 {
        return n.to_radix_le(g).into_iter().map(u32::from).collect();
    }
    let mut out = Vec::new();
    let mut rest = n.clone();
    let base = BigUint::from(g);
    while !rest.is_zero() {
        let (quot, rem) = rest.div_rem(&base);
        out.push(rem.to_u32().expect("remainder below base"));
        rest = quot;
    }
    out
}

/// Horner evaluation of most-significant-first digits.
pub fn from_digits(digits: &[u32], g: u32) -> BigUint {
    // Fold digits into machine-word chunks before touching the big integer.
    let mut acc = BigUint::zero();
    let mut chunk = 0u64;
    let mut chunk_scale = 1u64;
    for &d in digits {
        match chunk_scale.checked_mul(g as u64) {
            Some(s) if s <= u64::MAX / (g as u64) => {
                chunk = chunk * g as u64 + d as u64;
                chunk_scale = s;
            }
            _ => {
                acc = acc * chunk_scale + chunk;
                chunk = d as u64;
                chunk_scale = g as u64;
            }
        }
    }
    acc * chunk_scale + chunk
}

/// Number of base-`g` digits of `n >= 1`.
pub fn digit_len(n: &BigUint, g: u32) -> usize {
    if n.is_zero() {
        return 0;
    }
    // Estimate from the bit length, then correct.
    let est = ((n.bits() as f64 - 1.0) * std::f64::consts::LN_2 / (g as f64).ln()).floor() as i64;
    let mut len = est.max(0) as u64;
    while big_pow(g as u64, len) > *n {
        len -= 1;
    }
    while big_pow(g as u64, len + 1) <= *n {
        len += 1;
    }
    len as usize + 1
}

pub fn is_palindrome(n: &BigUint, g: u32) -> Result<bool> {
    Ok(to_digits(n, g)?.is_palindrome())
}

/// Palindrome test for machine words. `n = 0` is rejected as non-palindromic.
pub fn is_palindrome_u64(n: u64, g: u32) -> bool {
    if n == 0 || g < 2 {
        return false;
    }
    let g = g as u64;
    let (mut rest, mut rev) = (n, 0u128);
    while rest > 0 {
        rev = rev * g as u128 + (rest % g) as u128;
        rest /= g;
    }
    rev == n as u128
}

/// `|P_L| = (g - 1) g^(ceil(L/2) - 1)`.
pub fn count_exact_length(g: u32, len: usize) -> Result<BigUint> {
    check_base(g)?;
    if len == 0 {
        return Err(Error::invalid("length must be at least 1"));
    }
    let half = len.div_ceil(2) as u64;
    Ok(BigUint::from(g - 1) * big_pow(g as u64, half - 1))
}

/// Exact `|P(x)|`, the number of palindromes in `[1, x]`.
pub fn count_up_to(g: u32, x: &BigUint) -> Result<BigUint> {
    check_base(g)?;
    if x.is_zero() {
        return Ok(BigUint::zero());
    }
    let len = digit_len(x, g);
    let mut total = BigUint::zero();
    for l in 1..len {
        total += count_exact_length(g, l)?;
    }
    let half = len.div_ceil(2);
    let prefix = x / big_pow(g as u64, (len - half) as u64);
    total += &prefix - big_pow(g as u64, half as u64 - 1);
    if palindrome_from_prefix(&prefix, len, g) <= *x {
        total += 1u32;
    }
    Ok(total)
}

/// Reverses the base-`g` digits of `n` (trailing zeros vanish).
fn reverse_digits(n: &BigUint, g: u32) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    // Least-significant-first digits, read most-significant-first.
    from_digits(&radix_le(n, g), g)
}

/// The length-`len` palindrome whose first `ceil(len/2)` digits are `prefix`.
pub fn palindrome_from_prefix(prefix: &BigUint, len: usize, g: u32) -> BigUint {
    let low_len = len / 2;
    let mirrored = if len % 2 == 1 {
        prefix / g
    } else {
        prefix.clone()
    };
    prefix * big_pow(g as u64, low_len as u64) + reverse_digits(&mirrored, g)
}

pub(crate) fn palindrome_from_prefix_u64(prefix: u64, len: usize, g: u64) -> Option<u64> {
    let low_len = (len / 2) as u32;
    let mut mirrored = if len % 2 == 1 { prefix / g } else { prefix };
    let mut rev = 0u64;
    while mirrored > 0 {
        rev = rev * g + mirrored % g;
        mirrored /= g;
    }
    prefix
        .checked_mul(g.checked_pow(low_len)?)?
        .checked_add(rev)
}

/// The `index`-th palindrome of length `len` in increasing order (0-based).
pub fn nth_palindrome(g: u32, len: usize, index: &BigUint) -> Result<BigUint> {
    let count = count_exact_length(g, len)?;
    if *index >= count {
        return Err(Error::Range(format!(
            "index {index} out of range for {count} palindromes of length {len}"
        )));
    }
    let half = len.div_ceil(2) as u64;
    let prefix = big_pow(g as u64, half - 1) + index;
    Ok(palindrome_from_prefix(&prefix, len, g))
}

/// Inverse of [`nth_palindrome`]: returns `(len, index)`.
pub fn index_of(n: &BigUint, g: u32) -> Result<(usize, BigUint)> {
    let ds = to_digits(n, g)?;
    if !ds.is_palindrome() {
        return Err(Error::invalid(format!("{n} is not a base-{g} palindrome")));
    }
    let len = ds.len();
    let half = len.div_ceil(2);
    let prefix = from_digits(&ds.digits()[..half], g);
    Ok((len, prefix - big_pow(g as u64, half as u64 - 1)))
}

/// Palindromes in `[lo, hi]`, increasing.
pub fn iter_palindromes(g: u32, lo: &BigUint, hi: &BigUint) -> Result<Palindromes> {
    check_base(g)?;
    let start = if lo.is_zero() { BigUint::one() } else { lo.clone() };
    let len = digit_len(&start, g);
    let half = len.div_ceil(2);
    let mut prefix = &start / big_pow(g as u64, (len - half) as u64);
    if palindrome_from_prefix(&prefix, len, g) < start {
        prefix += 1u32;
    }
    let mut it = Palindromes {
        g,
        len,
        prefix_end: big_pow(g as u64, half as u64),
        prefix,
        hi: hi.clone(),
        done: lo > hi,
    };
    it.roll_length();
    Ok(it)
}

/// Stream returned by [`iter_palindromes`].
#[derive(Debug, Clone)]
pub struct Palindromes {
    g: u32,
    len: usize,
    prefix: BigUint,
    prefix_end: BigUint,
    hi: BigUint,
    done: bool,
}

impl Palindromes {
    fn roll_length(&mut self) {
        if self.prefix == self.prefix_end {
            self.len += 1;
            let half = self.len.div_ceil(2) as u64;
            self.prefix = big_pow(self.g as u64, half - 1);
            self.prefix_end = big_pow(self.g as u64, half);
        }
    }
}

impl Iterator for Palindromes {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        if self.done {
            return None;
        }
        let n = palindrome_from_prefix(&self.prefix, self.len, self.g);
        if n > self.hi {
            self.done = true;
            return None;
        }
        self.prefix += 1u32;
        self.roll_length();
        Some(n)
    }
}

/// Machine-word palindromes of exactly `len` digits, increasing.
///
/// Returns `None` if the largest such palindrome does not fit in `u64`.
pub fn palindromes_of_length_u64(g: u32, len: usize) -> Option<impl Iterator<Item = u64>> {
    if g < 2 || len == 0 {
        return None;
    }
    let g64 = g as u64;
    let half = len.div_ceil(2) as u32;
    let first = g64.checked_pow(half - 1)?;
    let end = g64.checked_pow(half)?;
    palindrome_from_prefix_u64(end - 1, len, g64)?;
    Some((first..end).map(move |p| palindrome_from_prefix_u64(p, len, g64).unwrap()))
}

/// Machine-word palindromes in `[lo, hi]`, increasing.
pub fn palindromes_u64(g: u32, lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    let lo = lo.max(1);
    let min_len = if lo > hi { 1 } else { digit_len(&BigUint::from(lo), g) };
    let max_len = if lo > hi { 0 } else { digit_len(&BigUint::from(hi), g) };
    (min_len..=max_len)
        .flat_map(move |len| {
            let g64 = g as u64;
            let half = len.div_ceil(2) as u32;
            // start at the prefix of lo rather than scanning up to it
            let first = if len == min_len {
                lo / g64.pow(len as u32 - half)
            } else {
                g64.pow(half - 1)
            };
            let end = g64.checked_pow(half).unwrap_or(u64::MAX);
            (first..end).map_while(move |p| palindrome_from_prefix_u64(p, len, g64))
        })
        .skip_while(move |&n| n < lo)
        .take_while(move |&n| n <= hi)
}

/// The `(n1, n2, n3, mu, K)` split of a palindrome of length `2M + delta`
/// with `M = K + l_half`.
///
/// `n3` is the top `K` digits (the K-signature), `n1` the bottom `K` digits
/// (the K-complement), and the middle block of `2*l_half + delta` digits
/// is either all zeros (`n2 = None`) or `g^mu * n2` with `n2` a palindrome
/// of length `2*l_half + delta - 2*mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureDecomp {
    pub base: u32,
    pub k: usize,
    pub n1: BigUint,
    pub n2: Option<BigUint>,
    pub mu: usize,
    pub n3: BigUint,
    pub delta: usize,
    pub m: usize,
    pub l_half: usize,
}

impl SignatureDecomp {
    pub fn length(&self) -> usize {
        2 * self.m + self.delta
    }

    /// Reassembles the palindrome.
    pub fn recompose(&self) -> BigUint {
        let g = self.base as u64;
        let top_shift = (self.k + 2 * self.l_half + self.delta) as u64;
        let mut n = &self.n1 + big_pow(g, top_shift) * &self.n3;
        if let Some(n2) = &self.n2 {
            n += big_pow(g, (self.k + self.mu) as u64) * n2;
        }
        n
    }
}

pub fn signature_decompose(n: &BigUint, k: usize, g: u32) -> Result<SignatureDecomp> {
    let ds = to_digits(n, g)?;
    if !ds.is_palindrome() {
        return Err(Error::invalid(format!("{n} is not a base-{g} palindrome")));
    }
    if k == 0 {
        return Err(Error::invalid("K must be at least 1"));
    }
    let len = ds.len();
    let (m, delta) = (len / 2, len % 2);
    if m < k + 1 {
        return Err(Error::invalid(format!(
            "length {len} too short for K = {k}: need M = K + L with L >= 1"
        )));
    }
    let l_half = m - k;
    let g64 = g as u64;
    let mid_len = 2 * l_half + delta;
    let (upper, n1) = n.div_rem(&big_pow(g64, k as u64));
    let (n3, middle) = upper.div_rem(&big_pow(g64, mid_len as u64));
    let (n2, mu) = if middle.is_zero() {
        (None, 0)
    } else {
        let mut mu = 0;
        let mut rest = middle;
        while (&rest % g).is_zero() {
            rest /= g;
            mu += 1;
        }
        (Some(rest), mu)
    };
    Ok(SignatureDecomp {
        base: g,
        k,
        n1,
        n2,
        mu,
        n3,
        delta,
        m,
        l_half,
    })
}

/// The K-complement of a K-signature: the unique `1 <= n1 < g^K` with
/// `n1 + g^K n3` a palindrome of length `2K`.
pub fn k_complement(n3: &BigUint, k: usize, g: u32) -> Result<BigUint> {
    check_base(g)?;
    if k == 0 {
        return Err(Error::invalid("K must be at least 1"));
    }
    let lo = big_pow(g as u64, k as u64 - 1);
    let hi = big_pow(g as u64, k as u64);
    if *n3 < lo || *n3 >= hi {
        return Err(Error::Range(format!(
            "K-signature {n3} must have exactly {k} base-{g} digits"
        )));
    }
    Ok(reverse_digits(n3, g))
}
