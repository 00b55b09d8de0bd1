//! The truncated sieve bound against the exact prime-palindrome count.

use palindist::bigmath::big_pow;
use palindist::primes::{brun_truncated_bound, census, default_sieve_params};

fn main() -> palindist::Result<()> {
    let x = big_pow(2, 30);
    let primes = census(2, &x)?.prime_palindrome_count;
    println!("binary palindromes <= 2^30 that are prime: {primes}");

    for h in [1, 2] {
        let ev = brun_truncated_bound(2, &x, 29.0, h)?;
        println!(
            "y=29 h={h}: Q = {:?}, {} terms, truncated sum {}, bound {}",
            ev.modulus.primes,
            ev.terms.len(),
            ev.truncated_sum,
            ev.upper_bound
        );
    }

    let ev = brun_truncated_bound(2, &x, 29.0, 3)?;
    println!("h=3 covers all of Q: {}; coprime count {}", ev.is_complete(), ev.truncated_sum);

    // The default parameters are tiny until x is astronomically large.
    for k in [10u64, 100, 1000, 100_000] {
        let p = default_sieve_params(&big_pow(10, k))?;
        println!("x = 10^{k}: h = {}, y = {:.3}", p.h, p.y);
    }
    Ok(())
}
