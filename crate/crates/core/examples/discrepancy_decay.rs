//! Exact-length discrepancy bounds, a fitted decay constant, and the
//! cumulative check over growing x.

use palindist::bigmath::big_pow;
use palindist::counting::{
    check_cumulative_decay, check_prop41, check_prop42, fit_decay, prop42_min_length, DEFAULT_GROWTH_FACTOR,
};

fn main() -> palindist::Result<()> {
    let r = check_prop41(2, 11, 105)?;
    println!("prime modulus, g=2 p=11 L=105: {:.3} < {:.3}", r.lhs_log, r.rhs_log);

    for (g, q) in [(2, 5), (10, 7)] {
        let len = prop42_min_length(q);
        let r = check_prop42(g, q, len)?;
        println!("coprime modulus, g={g} q={q} L={len}: {:.3} < {:.3}", r.lhs_log, r.rhs_log);
    }

    if let Err(e) = check_prop41(10, 13, 200) {
        println!("g=10 p=13 rejected: {e}");
    }

    let fit = fit_decay(2, 11, 105..=160)?;
    println!(
        "\nfit g=2 q=11: xi={} A={:.3e} holds everywhere: {}, trend non-increasing: {}",
        fit.xi,
        fit.a(),
        fit.holds_everywhere(),
        fit.trend_nonincreasing(8)
    );

    let xs: Vec<_> = [40, 80, 160, 320].iter().map(|&k| big_pow(2, k)).collect();
    let rep = check_cumulative_decay(2, 5, &xs, DEFAULT_GROWTH_FACTOR)?;
    println!("\ncumulative, g=2 q=5 ({})", rep.branch.corollary());
    for row in &rep.rows {
        println!(
            "  log2 x = {:>3}: log D = {:>8.3}  constant log = {:>7.3}",
            row.x.bits() - 1,
            row.discrepancy.ln(),
            row.empirical_constant_log
        );
    }
    println!("  bounded within {}x: {}", rep.factor, rep.bounded);
    Ok(())
}
