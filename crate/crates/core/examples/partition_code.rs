//! Encode and decode with the partitioned vector code for `K=13, D=4,
//! U=1`, printing which code symbols each receiver reads.

use sni_coding::codec::{IndexCode, MessageVector, PartitionedCode, SideInfo};
use sni_coding::galois::PrimeField;
use sni_coding::suicp::SniProblem;

fn main() -> sni_coding::Result<()> {
    let field = PrimeField::new(7)?;
    let problem = SniProblem::new(13, 4, 1)?;
    let code = PartitionedCode::new(problem, problem.partition_params(1, 5)?, field);
    let s = code.scheme();
    println!(
        "{problem}: b={}, N={}, {} partitions of {} symbols, AIR {}x{}",
        s.b, s.code_len, s.tau, s.partition_size, s.partition_size, s.gamma
    );
    println!("partition 6 holds flat symbols {:?}", s.partition(6));

    let symbols: Vec<u32> = (0..13 * 5).map(|i| (i * i + 3) % 7).collect();
    let msg = MessageVector::new(field, 13, 5, symbols)?;
    let broadcast = code.encode(&msg)?;
    println!("broadcast: {:?}", broadcast.symbols());

    for receiver in [0, 6, 12] {
        let side = SideInfo::for_receiver(&problem, receiver, &msg);
        for (value, trace) in code.decode_receiver(&broadcast, receiver, &side)? {
            println!(
                "receiver {receiver} slot {}: {} (sent {}) from code symbols {:?}",
                trace.slot,
                value.value(),
                msg.message(receiver)[trace.slot],
                trace.code_indices
            );
        }
    }
    Ok(())
}
