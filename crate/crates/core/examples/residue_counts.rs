//! Exact counts of palindromes in each residue class, and how far they are
//! from uniform.

use palindist::bigmath::big_pow;
use palindist::counting::{class_counts_exact_length, class_counts_up_to};

fn main() -> palindist::Result<()> {
    let t = class_counts_exact_length(10, 3, 3)?;
    println!("3-digit palindromes mod 3: {:?} (total {})", t.counts, t.total);

    let t = class_counts_up_to(10, &200u32.into(), 7)?;
    println!("palindromes <= 200 mod 7: {:?}", t.counts);

    // The digit DP handles lengths far beyond enumeration.
    println!("\n   L  log(max_a |N_a - |P_L|/q|)  log|P_L|");
    for len in [10, 50, 100, 200, 400] {
        let t = class_counts_exact_length(2, len, 11)?;
        println!(
            "{len:>4}  {:>26.4}  {:>8.4}",
            t.max_discrepancy.ln(),
            palindist::bigmath::ln_biguint(&t.total)
        );
    }

    let x = big_pow(3, 120) + 12345u32;
    let t = class_counts_up_to(3, &x, 13)?;
    println!("\nbase 3, x = 3^120 + 12345, q = 13: total {}", t.total);
    for (a, c) in t.counts.iter().enumerate().take(3) {
        println!("  N_{a} = {c}");
    }
    Ok(())
}
