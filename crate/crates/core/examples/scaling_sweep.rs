//! Edge counts and stretch over growing instance sizes.
//!
//! cargo run --release --example scaling_sweep

use geodesic_spanner::verify::{scaling_sweep, SweepConfig};

fn main() -> geodesic_spanner::Result<()> {
    let table = scaling_sweep(&SweepConfig { sizes: vec![16, 32, 64, 128, 256], trials: 3, seed: 0, m: 8 })?;
    println!("{:>5} {:>9} {:>11} {:>9} {:>13}", "n", "edges", "pair sizes", "stretch", "edges/nlg^3n");
    for m in &table.medians {
        println!(
            "{:>5} {:>9.0} {:>11.0} {:>9.4} {:>13.5}",
            m.n, m.edges, m.pair_size_sum, m.max_stretch, m.normalized_edges
        );
    }
    println!("growth ratios {:?}", table.growth_ratios());
    Ok(())
}
