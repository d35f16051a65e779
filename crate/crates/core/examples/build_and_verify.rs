//! Builds a spanner for a random instance and reports its stretch.
//!
//! cargo run --release --example build_and_verify -- [n] [m] [seed]

use geodesic_spanner::prelude::*;

fn main() -> Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(100) as usize;
    let m = args.get(1).copied().unwrap_or(10) as usize;
    let seed = args.get(2).copied().unwrap_or(1);

    let env = random_instance(&GenConfig::new(seed, n, m))?;
    let build = build_spanner_detailed(&env)?;
    let report = spanning_ratio(&env, &build.graph)?;

    println!("points {n}, obstacles {m}, seed {seed}");
    println!("edges {} (budget {})", build.stats.edges, build.stats.edge_budget());
    println!("pair sizes {}, interior apexes {}", build.stats.pair_size_sum, build.stats.interior_apexes);
    println!("max L1 stretch {:.4} at {:?}", report.max_ratio, report.argmax);
    println!("Euclidean bound {:.4}", report.l2_bound);
    assert!(report.within_bound());
    Ok(())
}
