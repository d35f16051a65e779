//! The slab instance on which no graph missing an edge beats stretch
//! `2 - eps`.

use geodesic_spanner::prelude::*;
use geodesic_spanner::verify::lemma1_check;

fn main() -> Result<()> {
    let cfg = Lemma1Config { n: 10, eps: 0.1, s: 2.1, delta: 1e-3 };
    let env = lemma1_instance(&cfg)?;
    println!("{} points between {} slabs", env.n(), env.obstacles().len());

    let r = lemma1_check(&cfg)?;
    println!("geodesic distances in [{:.4}, {:.4}]", r.min_geodesic, r.max_geodesic);
    println!("allowed bracket    [{:.4}, {:.4}]", cfg.s, cfg.s + cfg.eps + 4.0 * cfg.delta);
    println!("best stretch with one edge removed {:.4} (threshold {})", r.min_removed_ratio, 2.0 - cfg.eps);
    Ok(())
}
