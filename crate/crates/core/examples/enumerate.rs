//! Listing, indexing and counting palindromes.
//!
//!     cargo run --example enumerate -- 10 900 1300

use num_bigint::BigUint;
use palindist::digits::{count_exact_length, count_up_to, index_of, iter_palindromes, nth_palindrome, to_digits};

fn main() -> palindist::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g: u32 = args.first().map_or(10, |s| s.parse().expect("base"));
    let lo: BigUint = args.get(1).map_or(900u32.into(), |s| s.parse().expect("lo"));
    let hi: BigUint = args.get(2).map_or(1300u32.into(), |s| s.parse().expect("hi"));

    println!("base {g} palindromes in [{lo}, {hi}]:");
    for n in iter_palindromes(g, &lo, &hi)? {
        let (len, index) = index_of(&n, g)?;
        println!("  {n:>8}  digits {:?}  length {len}  index {index}", to_digits(&n, g)?.digits());
    }

    for len in 1..=6 {
        println!("|P_{len}| = {}", count_exact_length(g, len)?);
    }
    println!("|P({hi})| = {}", count_up_to(g, &hi)?);

    let middle = count_exact_length(g, 9)? / 2u32;
    println!("the {middle}-th 9-digit palindrome is {}", nth_palindrome(g, 9, &middle)?);
    Ok(())
}
