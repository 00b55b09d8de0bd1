//! Exponential sums over palindromes: direct enumeration against the digit
//! product, then lengths only the product can reach.

use palindist::expsums::{palindrome_exp_sum_brute, palindrome_exp_sum_product, theta_c};

fn main() -> palindist::Result<()> {
    let (g, q) = (10, 7);
    for c in 0..q as i64 {
        let direct = palindrome_exp_sum_brute(g, 6, q, c)?;
        let product = palindrome_exp_sum_product(g, 6, q, c)?.to_complex();
        println!("L=6 c={c}: direct {direct:.6}  product {product:.6}");
    }

    println!();
    for len in [100, 1000, 10_000] {
        let s = palindrome_exp_sum_product(2, len, 11, 1)?;
        println!("g=2 q=11 c=1 L={len}: log|S| = {:.3}, arg = {:.4}", s.log_mag, s.arg);
    }
    println!("Theta_1 for g=2, q=11: {:.6}", theta_c(2, 11, 1)?);

    // An exact zero: the middle digit's weight 10 has order 5 modulo 25.
    let z = palindrome_exp_sum_product(10, 3, 25, 1)?;
    println!("S_3(1) mod 25 in base 10 is zero: {}", z.is_zero());
    Ok(())
}
