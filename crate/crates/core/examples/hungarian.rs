//! Minimum-cost assignment on a small matrix, with ties broken
//! lexicographically.

use lanefit::matching::hungarian;
use nalgebra::DMatrix;

fn main() -> lanefit::Result<()> {
    let cost = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0]);
    let a = hungarian(&cost)?;
    println!("pairs {:?}, total {}", a.pairs, a.total_cost);

    let tied = DMatrix::from_row_slice(3, 3, &[5.0, 1.0, 1.0, 1.0, 5.0, 1.0, 1.0, 1.0, 5.0]);
    println!("tied: {:?}", hungarian(&tied)?.pairs);
    Ok(())
}
