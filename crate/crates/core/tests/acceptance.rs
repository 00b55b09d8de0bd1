//! End-to-end checks with exact oracles. Prints one line per check and
//! exits nonzero if any fails.

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use palindist::bigmath::{big_pow, to_signed};
use palindist::counting::{check_prop41, check_prop42, class_counts_exact_length, prop42_min_length};
use palindist::digits::{count_exact_length, count_up_to, palindromes_of_length_u64};
use palindist::expsums::{
    check_lemma31, check_lemma32, lemma21_sweep, lemma22_sweep, palindrome_exp_sum_brute,
    palindrome_exp_sum_product,
};
use palindist::primes::{brun_truncated_bound, census, density_series};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Name, check, and time budget in seconds (0 for none).
type Check = (&'static str, fn() -> Outcome, u64);

const BASES: [u32; 3] = [2, 3, 10];

fn residue_counts_match_enumeration() -> Outcome {
    let mut cases = 0;
    for g in BASES {
        for len in 1..=12 {
            let pals: Vec<u64> = palindromes_of_length_u64(g, len).unwrap().collect();
            for q in 2..=30u64 {
                let mut brute = vec![0u64; q as usize];
                for &n in &pals {
                    brute[(n % q) as usize] += 1;
                }
                let table = class_counts_exact_length(g, len, q).unwrap();
                let dp: Vec<u64> = table.counts.iter().map(|c| c.to_u64().unwrap()).collect();
                if dp != brute {
                    return outcome(false, format!("mismatch at g={g} L={len} q={q}"));
                }
                cases += 1;
            }
        }
    }
    outcome(true, format!("{cases} (g, L, q) tables equal"))
}

fn product_formula_matches_direct_sum() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for g in BASES {
        for len in 1..=12 {
            for q in 2..=30u64 {
                for c in 0..q as i64 {
                    let direct = palindrome_exp_sum_brute(g, len, q, c).unwrap();
                    let product = palindrome_exp_sum_product(g, len, q, c).unwrap().to_complex();
                    let scale = direct.norm().max(product.norm()).max(1.0);
                    worst = worst.max((direct - product).norm() / scale);
                    cases += 1;
                }
            }
        }
    }
    outcome(worst <= 1e-9, format!("{cases} sums, worst relative error {worst:.2e}"))
}

fn power_pair_sweep() -> Outcome {
    let mut moduli = 0;
    let mut pairs = 0;
    let mut violations = 0;
    for g in [2u64, 10] {
        for s in lemma21_sweep(g, 300).unwrap() {
            moduli += 1;
            pairs += s.pairs;
            violations += s.violations;
        }
    }
    outcome(violations == 0, format!("{moduli} moduli, {pairs} pairs, {violations} violations"))
}

fn geometric_sum_sweep() -> Outcome {
    let sweeps = lemma22_sweep(100).unwrap();
    let checked: u64 = sweeps.iter().map(|s| s.checked).sum();
    let violations: u64 = sweeps.iter().map(|s| s.violations).sum();
    outcome(violations == 0, format!("{checked} (q, k, h) triples, {violations} violations"))
}

fn theta_contraction_instance() -> Outcome {
    let mut min_slack = f64::INFINITY;
    let mut failures = 0;
    for c in 1..=10 {
        for len in 1..=400 {
            let r = check_lemma31(2, 11, c, len).unwrap();
            failures += !r.satisfied as u32;
            min_slack = min_slack.min(r.slack_log);
        }
    }
    outcome(failures == 0, format!("4000 (c, L), {failures} failures, min slack_log {min_slack:.4}"))
}

fn coprime_decay_instance() -> Outcome {
    let mut min_slack = f64::INFINITY;
    let mut failures = 0;
    for c in 1..=4 {
        for len in 6..=400 {
            let r = check_lemma32(2, 5, c, len).unwrap();
            failures += !r.satisfied as u32;
            min_slack = min_slack.min(r.slack_log);
        }
    }
    outcome(failures == 0, format!("1580 (c, L), {failures} failures, min slack_log {min_slack:.4}"))
}

fn prime_modulus_threshold() -> Outcome {
    let start = Instant::now();
    let first = check_prop41(2, 11, 105).unwrap();
    let first_time = start.elapsed();
    let mut min_slack = f64::INFINITY;
    let mut failures = 0;
    for len in 105..=160 {
        let r = check_prop41(2, 11, len).unwrap();
        // strict inequality
        failures += (r.lhs_log.partial_cmp(&r.rhs_log) != Some(Ordering::Less)) as u32;
        min_slack = min_slack.min(r.slack_log);
    }
    let fast = first_time < Duration::from_secs(5);
    outcome(
        failures == 0 && first.lhs_log < first.rhs_log && fast,
        format!(
            "L=105 slack_log {:.4} in {:.2}s; L=105..160 {failures} failures, min slack_log {min_slack:.4}",
            first.slack_log,
            first_time.as_secs_f64()
        ),
    )
}

fn coprime_modulus_threshold() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (g, q, len) in [(2u32, 5u64, 91usize), (10, 7, 201)] {
        let start = Instant::now();
        let r = check_prop42(g, q, len).unwrap();
        let t = start.elapsed();
        ok &= r.lhs_log < r.rhs_log && t < Duration::from_secs(10) && prop42_min_length(q) == len;
        parts.push(format!("g={g} q={q} L={len} slack_log {:.4} in {:.2}s", r.slack_log, t.as_secs_f64()));
    }
    outcome(ok, parts.join("; "))
}

fn parseval_identity() -> Outcome {
    let mut worst = 0.0f64;
    for g in [2u32, 10] {
        for len in 1..=10 {
            for q in 2..=30u64 {
                let energy: f64 = (0..q as i64)
                    .map(|c| palindrome_exp_sum_product(g, len, q, c).unwrap().to_complex())
                    .map(|s: Complex64| s.norm_sqr())
                    .sum();
                let table = class_counts_exact_length(g, len, q).unwrap();
                let exact = (table.sum_of_squares() * q).to_f64().unwrap();
                worst = worst.max((energy - exact).abs() / exact);
            }
        }
    }
    outcome(worst <= 1e-6, format!("worst relative error {worst:.2e}"))
}

fn truncated_sieve_bounds_census() -> Outcome {
    let x = big_pow(2, 30);
    let c = census(2, &x).unwrap();
    let primes = to_signed(&c.prime_palindrome_count);
    let mut parts = vec![format!("census {} of {}", c.prime_palindrome_count, c.palindrome_count)];
    let mut ok = true;
    for h in [1u32, 2] {
        let ev = brun_truncated_bound(2, &x, 29.0, h).unwrap();
        ok &= ev.modulus.primes == [11, 13, 17, 19, 23, 29] && primes <= ev.upper_bound;
        parts.push(format!("h={h}: {} terms, bound {}", ev.terms.len(), ev.upper_bound));
    }
    outcome(ok, parts.join("; "))
}

fn density_decreases() -> Outcome {
    let xs: Vec<BigUint> = [4u64, 6, 8, 10].iter().map(|&e| big_pow(10, e)).collect();
    let t = density_series(10, &xs).unwrap();
    let densities: Vec<String> = t.rows.iter().map(|r| format!("{:.4}", r.census.density)).collect();
    let growth = t.ratio_growth.unwrap_or(f64::INFINITY);
    outcome(
        t.strictly_decreasing && growth <= 10.0,
        format!("densities [{}], ratio growth {growth:.3}", densities.join(", ")),
    )
}

fn counting_identities() -> Outcome {
    for g in [2u32, 3, 5, 10, 16] {
        for len in 1..=60usize {
            let formula = BigUint::from(g - 1) * big_pow(g as u64, (len.div_ceil(2) - 1) as u64);
            if count_exact_length(g, len).unwrap() != formula {
                return outcome(false, format!("|P_L| mismatch at g={g} L={len}"));
            }
        }
        for m in 1..=20u64 {
            for delta in [0u64, 1] {
                let x = big_pow(g as u64, 2 * m + delta - 1);
                let expect = big_pow(g as u64, m) + big_pow(g as u64, m + delta - 1) - 2u32;
                if count_up_to(g, &x).unwrap() != expect {
                    return outcome(false, format!("cumulative mismatch at g={g} M={m} delta={delta}"));
                }
            }
        }
    }
    outcome(true, "5 bases, L <= 60, M <= 20, both parities")
}

fn main() -> ExitCode {
    let checks: [Check; 12] = [
        ("residue counts equal enumeration", residue_counts_match_enumeration, 60),
        ("product formula equals direct sum", product_formula_matches_direct_sum, 60),
        ("power-pair sum bound, q <= 300", power_pair_sweep, 0),
        ("geometric digit sum bound, q <= 100", geometric_sum_sweep, 0),
        ("Theta contraction, g=2 q=11", theta_contraction_instance, 0),
        ("coprime decay, g=2 q=5", coprime_decay_instance, 0),
        ("prime-modulus discrepancy, g=2 p=11", prime_modulus_threshold, 0),
        ("coprime-modulus discrepancy at threshold", coprime_modulus_threshold, 0),
        ("Parseval identity", parseval_identity, 0),
        ("truncated sieve bounds census, x=2^30", truncated_sieve_bounds_census, 30),
        ("prime-palindrome density decreases", density_decreases, 60),
        ("palindrome counting identities", counting_identities, 0),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in checks.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let secs = start.elapsed().as_secs_f64();
        if *budget > 0 && secs >= *budget as f64 {
            result.passed = false;
            result.detail += &format!("; over the {budget}s budget");
        }
        let status = if result.passed { "PASS" } else { "FAIL" };
        failed += !result.passed as u32;
        println!("[{status}] {:>2}. {name} ({secs:.2}s): {}", i + 1, result.detail);
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() as u32 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
