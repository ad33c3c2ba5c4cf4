//! Basis round-trip verification of all three constructions on every
//! valid problem with `K <= k_max`.
//!
//! ```text
//! cargo run --release --example verify_sweep -- 16
//! ```

use sni_coding::galois::PrimeField;
use sni_coding::harness::verify_all_schemes;
use sni_coding::suicp::SniProblem;

fn main() -> sni_coding::Result<()> {
    let k_max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(12);
    let (mut instances, mut decodes, mut failures) = (0, 0, 0);
    for k in 2..=k_max {
        for d in 0..k {
            for u in (0..=d).filter(|u| u + d < k) {
                let problem = SniProblem::new(k, d, u)?;
                instances += 1;
                for report in verify_all_schemes(problem, PrimeField::GF2)? {
                    decodes += report.decodes;
                    if !report.verified() {
                        failures += report.failures.len();
                        println!(
                            "{problem} {}: {} failures",
                            report.scheme.kind.name(),
                            report.failures.len()
                        );
                    }
                }
            }
        }
    }
    println!("{instances} problems, {decodes} decodes, {failures} failures");
    Ok(())
}
