//! Sweeps of the power-pair and geometric digit-sum bounds.

use palindist::expsums::{check_lemma21, lemma21_sweep, lemma22_sweep};

fn main() -> palindist::Result<()> {
    let q_max = std::env::args().nth(1).map_or(120, |s| s.parse().expect("q_max"));

    let r = check_lemma21(11, 2, 3, 5)?;
    println!("q=11 g=2 (a,b)=(3,5): log|sum| {:.4} <= {:.4}: {}", r.lhs_log, r.rhs_log, r.satisfied);

    for g in [2, 10] {
        let sweeps = lemma21_sweep(g, q_max)?;
        let violations: u64 = sweeps.iter().map(|s| s.violations).sum();
        let tight = sweeps
            .iter()
            .min_by(|a, b| a.tightest.slack_log.total_cmp(&b.tightest.slack_log))
            .expect("nonempty sweep");
        println!(
            "g={g}: {} moduli, {violations} violations, tightest at q={} (slack_log {:.4})",
            sweeps.len(),
            tight.q,
            tight.tightest.slack_log
        );
    }

    let sweeps = lemma22_sweep(q_max.min(60))?;
    let checked: u64 = sweeps.iter().map(|s| s.checked).sum();
    let violations: u64 = sweeps.iter().map(|s| s.violations).sum();
    println!("geometric sums: {checked} checked, {violations} violations");
    Ok(())
}
