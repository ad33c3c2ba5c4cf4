//! The two scalar constructions: the zero-padded AIR code and the
//! `D+U+1` window code.

use sni_coding::codec::{IndexCode, MessageVector, PaddedScalarCode, SideInfo, WindowCode};
use sni_coding::galois::PrimeField;
use sni_coding::suicp::SniProblem;

fn round_trip(code: &dyn IndexCode) -> sni_coding::Result<()> {
    let problem = *code.problem();
    let k = problem.messages();
    let symbols: Vec<u32> = (0..k as u32).map(|i| (5 * i + 1) % 3).collect();
    let msg = MessageVector::new(code.field(), k, 1, symbols)?;
    let broadcast = code.encode(&msg)?;
    let mut worst = 0;
    for r in 0..k {
        let side = SideInfo::for_receiver(&problem, r, &msg);
        let (value, trace) = code.decode(&broadcast, r, 0, &side)?;
        assert_eq!(value.value(), msg.message(r)[0]);
        worst = worst.max(trace.code_indices.len());
    }
    let (rows, cols) = code.air_dims();
    println!(
        "  {}: {k} messages in {} symbols via a {rows}x{cols} matrix, all receivers decode, at most {worst} symbols read",
        code.kind().name(),
        code.code_len()
    );
    Ok(())
}

fn main() -> sni_coding::Result<()> {
    let field = PrimeField::GF3;
    for (k, d, u) in [(19, 13, 3), (71, 52, 16), (12, 3, 2)] {
        let problem = SniProblem::new(k, d, u)?;
        let pad = problem.scalar_padding();
        println!(
            "{problem}: pad with a={} zero messages and b={} extra columns",
            pad.a, pad.b
        );
        round_trip(&PaddedScalarCode::min_length(problem, field)?)?;
        round_trip(&WindowCode::new(problem, field)?)?;
    }
    Ok(())
}
