//! Prime-field linear algebra: rank, solving and the annihilating
//! functional a receiver uses to cancel interference.

use sni_coding::galois::{annihilator, FieldMatrix, PrimeField};

fn main() -> sni_coding::Result<()> {
    let f = PrimeField::new(5)?;
    let a = FieldMatrix::from_rows(f, &[[2, 3, 1], [1, 1, 0], [0, 4, 2]])?;
    println!("A over GF(5):\n{a}");
    println!("rank = {}", a.rank());

    let x = [3, 1, 4];
    let y = a.mul_vec(&x)?;
    println!("A x = {y:?} for x = {x:?}");
    println!("solve(A, y) = {:?}", a.solve(&y)?);

    // phi kills every interfering row and reads 1 on the wanted row
    let interference = [[1, 0, 1], [0, 1, 1]];
    let wanted = [1, 1, 0];
    let phi = annihilator(f, &interference, &wanted)?;
    println!("phi = {phi:?}");
    for row in &interference {
        println!("  phi . {row:?} = {}", f.dot(row, &phi));
    }
    println!("  phi . {wanted:?} = {}", f.dot(&wanted, &phi));

    // no such phi once the wanted row is in the interference span
    let stuck = annihilator(f, &interference, &[1, 1, 2]);
    println!("wanted row in the span: {stuck:?}");
    Ok(())
}
