//! Lower and upper bounds on the broadcast rate, with each upper-bound
//! candidate shown.
//!
//! ```text
//! cargo run --example broadcast_bounds -- 71 44 23
//! ```

use sni_coding::suicp::{truncated_decimal, SniProblem};

fn main() -> sni_coding::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let problems = match args[..] {
        [k, d, u] => vec![(k, d, u)],
        _ => vec![(71, 44, 23), (71, 52, 16), (71, 1, 1), (71, 10, 3), (25, 6, 2)],
    };
    println!(
        "{:<20} {:>6} {:>10} {:>4} {:>6} {:>10}  full-rate class",
        "problem", "lower", "l1", "l2", "D+U+1", "upper"
    );
    for (k, d, u) in problems {
        let b = SniProblem::new(k, d, u)?.bounds();
        println!(
            "{:<20} {:>6} {:>10} {:>4} {:>6} {:>10}  {}",
            b.problem.to_string(),
            b.lower,
            truncated_decimal(&b.l1, 4),
            b.l2,
            b.du1,
            truncated_decimal(&b.upper, 4),
            b.full_rate_class.map_or("-".to_string(), |l| l.to_string())
        );
    }
    Ok(())
}
