//! Build an AIR matrix, show its block chain and check both window
//! properties.
//!
//! ```text
//! cargo run --example air_matrix -- 23 9
//! ```

use sni_coding::air::{build_air, check_adjacent_independence, check_span_exclusion, euclid_chain};

fn arg(i: usize, default: usize) -> usize {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> sni_coding::Result<()> {
    let (m, n) = (arg(1, 23), arg(2, 9));
    let air = build_air(m, n)?;
    println!("L({m}x{n}):");
    print!("{}", air.to_text());

    if m > n {
        let chain = euclid_chain(m, n)?;
        println!("stripped I_{n} blocks: {}", chain.stripped_blocks);
        println!("lambda: {:?}", chain.lambda);
        println!("beta:   {:?}", chain.beta);
        println!("gcd({m}, {n}) = {}", chain.terminal());
    }

    println!(
        "every {n} cyclically adjacent rows independent: {}",
        check_adjacent_independence(&air, true)
    );
    println!(
        "no row in the span of its window neighbours: {}",
        check_span_exclusion(&air)
    );
    Ok(())
}
