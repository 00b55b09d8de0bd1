//! Multiplicative order, inverses, classical arithmetic functions, prime
//! generation and factorization for desk-scale moduli.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::bigmath::pow_mod;
use crate::error::{Error, Result};
use crate::primes::is_prime_u64;

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;
const SEGMENT: u64 = 1 << 15;

/// A modulus together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulus {
    q: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::invalid(format!("modulus must be at least 2, got {q}")));
        }
        Ok(Modulus {
            q,
            factors: factorize(q),
        })
    }

    pub fn value(&self) -> u64 {
        self.q
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn arithmetic(&self) -> ArithmeticFunctions {
        ArithmeticFunctions::from_factors(&self.factors)
    }
}

/// `d(q)`, `phi(q)`, `mu(q)` and `omega(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithmeticFunctions {
    pub d: u64,
    pub phi: u64,
    pub mu: i8,
    pub omega: u32,
}

impl ArithmeticFunctions {
    fn from_factors(factors: &[(u64, u32)]) -> Self {
        let mut out = ArithmeticFunctions {
            d: 1,
            phi: 1,
            mu: 1,
            omega: factors.len() as u32,
        };
        for &(p, e) in factors {
            out.d *= e as u64 + 1;
            out.phi *= (p - 1) * p.pow(e - 1);
            out.mu = if e > 1 { 0 } else { -out.mu };
        }
        out
    }
}

pub fn arithmetic_functions(q: u64) -> Result<ArithmeticFunctions> {
    if q == 0 {
        return Err(Error::invalid("q must be positive"));
    }
    Ok(ArithmeticFunctions::from_factors(&factorize(q)))
}

/// Least `t >= 1` with `g^t = 1 (mod q)`.
///
/// Found by descending from `phi(q)` through its prime factors.
pub fn ord(g: u64, q: &Modulus) -> Result<u64> {
    let m = q.value();
    if g.gcd(&m) != 1 {
        return Err(Error::UndefinedOrder { g, q: m });
    }
    let mut t = q.arithmetic().phi;
    for (p, _) in factorize(t) {
        while t.is_multiple_of(p) && pow_mod(g, t / p, m) == 1 {
            t /= p;
        }
    }
    Ok(t)
}

/// Inverse of `c` modulo `q`, in `[1, q)` (or `0` when `q = 1`).
pub fn mod_inverse(c: i64, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let m = q as i128;
    let a = (c as i128).rem_euclid(m);
    let ext = a.extended_gcd(&m);
    if ext.gcd != 1 {
        return Err(Error::NoInverse { c, q });
    }
    Ok(ext.x.rem_euclid(m) as u64)
}

/// Prime factorization: trial division up to 10^6, then Pollard rho.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for &p in small_primes() {
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let mut big_factors = Vec::new();
        split_large(n, &mut big_factors);
        big_factors.sort_unstable();
        for p in big_factors {
            match out.last_mut() {
                Some((last, e)) if *last == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    // no factor below 10^6 remains, so anything below 10^12 is prime
    if n < TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT || is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Brent's variant of Pollard rho. `n` must be composite and odd.
fn pollard_rho(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut power = 1u64;
        let mut lam = 1u64;
        while d == 1 {
            if power == lam {
                x = y;
                power *= 2;
                lam = 0;
            }
            y = f(y);
            lam += 1;
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| primes_up_to(TRIAL_DIVISION_LIMIT))
}

/// All primes `<= n`, by a segmented sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    primes_in_range(0, n)
}

/// Primes `p` with `lo < p <= hi`.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo >= hi {
        return Vec::new();
    }
    let root = hi.isqrt();
    let base = simple_sieve(root);
    let mut out = Vec::new();
    let mut seg_lo = (lo + 1).max(2);
    let mut composite = vec![false; SEGMENT as usize];
    while seg_lo <= hi {
        let seg_hi = (seg_lo + SEGMENT - 1).min(hi);
        let width = (seg_hi - seg_lo + 1) as usize;
        composite[..width].fill(false);
        for &p in &base {
            let start = (p * p).max(seg_lo.div_ceil(p) * p);
            let mut m = start;
            while m <= seg_hi {
                composite[(m - seg_lo) as usize] = true;
                m += p;
            }
        }
        out.extend(
            (0..width)
                .filter(|&i| !composite[i])
                .map(|i| seg_lo + i as u64),
        );
        seg_lo = seg_hi + 1;
    }
    out
}

fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut m = i * i;
            while m <= n {
                composite[m] = true;
                m += i;
            }
        }
    }
    out
}

/// The squarefree product `Q(y)` of the primes in `(g^3, y]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeProduct {
    pub primes: Vec<u64>,
    pub value: BigUint,
}

impl PrimeProduct {
    pub fn from_primes(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        primes.dedup();
        let value = primes.iter().fold(BigUint::one(), |acc, &p| acc * p);
        PrimeProduct { primes, value }
    }

    /// The product as a [`Modulus`], when it fits in a machine word.
    pub fn to_modulus(&self) -> Option<Modulus> {
        let q = u64::try_from(&self.value).ok()?;
        if q < 2 {
            return None;
        }
        Some(Modulus {
            q,
            factors: self.primes.iter().map(|&p| (p, 1)).collect(),
        })
    }
}

fn floor_y(y: f64) -> u64 {
    if y.is_nan() || y < 0.0 {
        0
    } else {
        y.floor().min(u64::MAX as f64) as u64
    }
}

pub fn sieve_modulus_product(g: u32, y: f64) -> PrimeProduct {
    let cube = (g as u64).pow(3);
    PrimeProduct::from_primes(primes_in_range(cube, floor_y(y)))
}

/// `prod_{g^3 < p <= y} (1 - 1/p)` in double precision.
pub fn mertens_product(g: u32, y: f64) -> f64 {
    sieve_modulus_product(g, y)
        .primes
        .iter()
        .map(|&p| 1.0 - 1.0 / p as f64)
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn modulus(q: u64) -> Modulus {
        Modulus::new(q).unwrap()
    }

    fn naive_ord(g: u64, q: u64) -> u64 {
        let mut v = g % q;
        let mut t = 1;
        while v != 1 {
            v = v * g % q;
            t += 1;
        }
        t
    }

    #[test]
    fn ord_examples() {
        assert_eq!(ord(10, &modulus(3)).unwrap(), 1);
        assert_eq!(ord(2, &modulus(11)).unwrap(), 10);
        assert_eq!(ord(10, &modulus(7)).unwrap(), 6);
        assert_eq!(
            ord(10, &modulus(4)),
            Err(Error::UndefinedOrder { g: 10, q: 4 })
        );
    }

    #[test]
    fn ord_matches_iteration_and_divides_phi() {
        for q in 2..2000u64 {
            let m = modulus(q);
            let phi = m.arithmetic().phi;
            for g in [2u64, 3, 10] {
                if g.gcd(&q) != 1 {
                    continue;
                }
                let t = ord(g, &m).unwrap();
                assert_eq!(t, naive_ord(g, q), "g={g} q={q}");
                assert_eq!(phi % t, 0);
            }
        }
    }

    #[test]
    fn ord_is_lcm_on_coprime_products() {
        for q1 in 3..60u64 {
            for q2 in 3..60u64 {
                if q1.gcd(&q2) != 1 || q1 % 2 == 0 || q2 % 2 == 0 {
                    continue;
                }
                let a = ord(2, &modulus(q1)).unwrap();
                let b = ord(2, &modulus(q2)).unwrap();
                assert_eq!(ord(2, &modulus(q1 * q2)).unwrap(), a.lcm(&b));
            }
        }
    }

    #[test]
    fn ord_for_large_prime_modulus() {
        // 10^9 + 7 is prime; 5 is a primitive root modulo it.
        let m = modulus(1_000_000_007);
        assert!(m.is_prime());
        assert_eq!(ord(5, &m).unwrap(), 1_000_000_006);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, 17).unwrap(), 1);
        assert_eq!(mod_inverse(2, 5).unwrap(), 3);
        assert_eq!(mod_inverse(7, 11).unwrap(), 8);
        assert_eq!(mod_inverse(-1, 11).unwrap(), 10);
        assert_eq!(mod_inverse(6, 9), Err(Error::NoInverse { c: 6, q: 9 }));
    }

    #[test]
    fn arithmetic_function_examples() {
        let f = arithmetic_functions(12).unwrap();
        assert_eq!((f.d, f.phi, f.mu, f.omega), (6, 4, 0, 2));
        let f = arithmetic_functions(1).unwrap();
        assert_eq!((f.d, f.phi, f.mu, f.omega), (1, 1, 1, 0));
        let f = arithmetic_functions(30).unwrap();
        assert_eq!((f.d, f.phi, f.mu, f.omega), (8, 8, -1, 3));
    }

    #[test]
    fn arithmetic_functions_against_definitions() {
        for q in 1..500u64 {
            let f = arithmetic_functions(q).unwrap();
            let divisors: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
            assert_eq!(f.d, divisors.len() as u64);
            assert_eq!(f.phi, (1..=q).filter(|k| k.gcd(&q) == 1).count() as u64);
            let mobius_sum: i64 = divisors
                .iter()
                .map(|&d| arithmetic_functions(d).unwrap().mu as i64)
                .sum();
            assert_eq!(mobius_sum, (q == 1) as i64);
        }
    }

    #[test]
    fn factorize_mixed_sizes() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        let p = 1_000_000_007u64;
        let r = 998_244_353u64;
        assert_eq!(factorize(p * r), vec![(r, 1), (p, 1)]);
        assert_eq!(factorize(p * p), vec![(p, 2)]);
        let n = 2u64.pow(5) * 999_983 * 4_294_967_291;
        assert_eq!(factorize(n), vec![(2, 5), (999_983, 1), (4_294_967_291, 1)]);
    }

    #[test]
    fn segmented_sieve_agrees_with_simple_sieve() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let many = primes_up_to(200_000);
        assert_eq!(many, simple_sieve(200_000));
        assert_eq!(primes_in_range(8, 20), vec![11, 13, 17, 19]);
        assert!(primes_in_range(11, 11).is_empty());
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }

    #[test]
    fn sieve_product_examples() {
        let q = sieve_modulus_product(2, 20.0);
        assert_eq!(q.primes, vec![11, 13, 17, 19]);
        assert_eq!(q.value, BigUint::from(46189u32));
        let q = sieve_modulus_product(10, 500.0);
        assert!(q.primes.is_empty());
        assert_eq!(q.value, BigUint::one());
        assert_eq!(sieve_modulus_product(2, 11.0).value, BigUint::from(11u32));
    }

    #[test]
    fn sieve_product_is_coprime_to_g_g2_minus_1() {
        for g in 2u64..12 {
            let q = sieve_modulus_product(g as u32, 5000.0);
            let w = BigUint::from(g * (g * g - 1));
            assert_eq!(q.value.gcd(&w), BigUint::one());
        }
    }

    #[test]
    fn mertens_examples() {
        assert_eq!(mertens_product(10, 100.0), 1.0);
        assert!((mertens_product(2, 13.0) - 120.0 / 143.0).abs() < 1e-15);
        assert!((mertens_product(2, 11.0) - 10.0 / 11.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn multiplicativity(a in 1u64..5000, b in 1u64..5000) {
            prop_assume!(a.gcd(&b) == 1);
            let fa = arithmetic_functions(a).unwrap();
            let fb = arithmetic_functions(b).unwrap();
            let fab = arithmetic_functions(a * b).unwrap();
            prop_assert_eq!(fab.d, fa.d * fb.d);
            prop_assert_eq!(fab.phi, fa.phi * fb.phi);
            prop_assert_eq!(fab.mu, fa.mu * fb.mu);
        }

        #[test]
        fn inverse_property(c in -10_000i64..10_000, q in 2u64..100_000) {
            match mod_inverse(c, q) {
                Ok(inv) => prop_assert_eq!(((c.rem_euclid(q as i64) as u64) * inv) % q, 1),
                Err(_) => prop_assert!(c.rem_euclid(q as i64).gcd(&(q as i64)) != 1),
            }
        }

        #[test]
        fn factorization_reconstructs(n in 2u64..u64::MAX / 2) {
            let f = factorize(n);
            let prod = f.iter().fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e));
            prop_assert_eq!(prod, n as u128);
            prop_assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
        }
    }
}
