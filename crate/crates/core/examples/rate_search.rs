//! Minimum-rate search over the feasible `(a, b)` pairs and the partition
//! scheme the winner induces.
//!
//! ```text
//! cargo run --example rate_search -- 71 10 3
//! ```

use sni_coding::suicp::{truncated_decimal, SniProblem};

fn arg(i: usize, default: usize) -> usize {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> sni_coding::Result<()> {
    let problem = SniProblem::new(arg(1, 71), arg(2, 10), arg(3, 3))?;
    let r = problem.min_rate_fraction();
    println!("{problem}");
    println!(
        "minimum a/b = {}/{}, rate D+1+a/b = {} ~ {}",
        r.a,
        r.b,
        r.rate,
        truncated_decimal(&r.rate, 4)
    );

    let s = problem.partition_params(r.a, r.b)?;
    println!(
        "{} flat message symbols in {} partitions of {}",
        problem.messages() * s.b,
        s.tau,
        s.partition_size
    );
    println!(
        "each partition encoded by a {}x{} AIR matrix, {} code symbols in total",
        s.partition_size, s.gamma, s.code_len
    );
    println!("instantly decodable: {}", s.is_instantly_decodable());

    // the smallest feasible a for each b in the search box
    let b_max = problem.messages() / (problem.before() + 1);
    for b in 1..=b_max.min(12) {
        let top = b * (problem.messages() - problem.after() - 1);
        let a = (0..=top)
            .find(|&a| problem.is_feasible(a, b))
            .expect("a = top is feasible");
        println!("b = {b:>2}: smallest a = {a:>3}, a/b ~ {:.4}", a as f64 / b as f64);
    }
    Ok(())
}
