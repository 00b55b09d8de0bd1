//! Splitting a palindrome into its K-signature, K-complement and middle block.

use num_bigint::BigUint;
use palindist::digits::{k_complement, signature_decompose};

fn main() -> palindist::Result<()> {
    let g = 10;
    for (n, k) in [(1234554321u64, 2), (12300321, 3), (1000000001, 2), (123454321, 1)] {
        let n = BigUint::from(n);
        let d = signature_decompose(&n, k, g)?;
        let middle = match &d.n2 {
            Some(n2) => format!("g^{} * {n2}", d.mu),
            None => "0".to_string(),
        };
        println!(
            "{n}: K={k} n3={} n1={} middle={middle} (M={}, l={}, delta={})",
            d.n3, d.n1, d.m, d.l_half, d.delta
        );
        assert_eq!(d.recompose(), n);
        assert_eq!(k_complement(&d.n3, k, g)?, d.n1);
    }
    Ok(())
}
