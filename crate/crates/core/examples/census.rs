//! Prime palindromes: a census up to x and the density trend.
//!
//!     cargo run --release --example census -- 10 8

use palindist::bigmath::big_pow;
use palindist::primes::{census, density_series, prime_palindromes_of_length};

fn main() -> palindist::Result<()> {
    let mut args = std::env::args().skip(1);
    let g: u32 = args.next().map_or(10, |s| s.parse().expect("base"));
    let k: u64 = args.next().map_or(8, |s| s.parse().expect("exponent"));

    let five: Vec<String> = prime_palindromes_of_length(g, 5)?.iter().take(8).map(|p| p.to_string()).collect();
    println!("first 5-digit prime palindromes in base {g}: {}", five.join(", "));

    let c = census(g, &big_pow(g as u64, k))?;
    println!("\nx = {g}^{k}: {} palindromes, {} prime", c.palindrome_count, c.prime_palindrome_count);
    for (len, pals, primes) in &c.per_length {
        println!("  L={len:>2}: {primes:>6} of {pals}");
    }

    let xs: Vec<_> = (1..=k / 2).map(|j| big_pow(g as u64, 2 * j)).collect();
    let t = density_series(g, &xs)?;
    println!("\n{:>14} {:>9} {:>9} {:>9}", "x", "density", "envelope", "d*log x");
    for r in &t.rows {
        println!(
            "{:>14} {:>9.5} {:>9} {:>9.4}",
            r.census.x.to_string(),
            r.census.density,
            r.census.envelope.map_or("-".into(), |e| format!("{e:.5}")),
            r.density_log_x
        );
    }
    println!("strictly decreasing: {}", t.strictly_decreasing);
    Ok(())
}
