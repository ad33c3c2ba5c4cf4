//! Recompute the reference tables and compare them with the committed
//! golden copies.

use sni_coding::harness::{
    apply_errata, diff_tables, golden, read_csv, reproduce_full_rate_table, reproduce_interval_table, reproduce_table1,
    write_csv, Erratum, IntervalRow, TableRow, FULL_RATE_CELLS,
};

fn main() {
    let table = reproduce_table1(71, 10);
    println!("partition encoding, K=71:\n{}", write_csv(&table));

    let transcribed: Vec<TableRow> = read_csv(golden::TABLE1).expect("golden table");
    let errata: Vec<Erratum> = read_csv(golden::TABLE1_ERRATA).expect("errata");
    println!("against the raw transcription:");
    for line in diff_tables(&transcribed, &table) {
        println!("  {line}");
    }
    let corrected = apply_errata(&transcribed, &errata).expect("errata apply");
    println!(
        "after {} errata cells: {} differences\n",
        errata.len(),
        diff_tables(&corrected, &table).len()
    );

    let intervals = reproduce_interval_table(71, 5);
    let golden_intervals: Vec<IntervalRow> = read_csv(golden::TABLE4).expect("golden intervals");
    println!(
        "D_l and U_l intervals (match: {}):\n{}",
        intervals == golden_intervals,
        write_csv(&intervals)
    );

    println!(
        "full-rate boundary cells:\n{}",
        write_csv(&reproduce_full_rate_table(71, &FULL_RATE_CELLS))
    );
}
