//! Samples points inside the box spanned by two points and compares the
//! detour through them with the direct geodesic distance.

use geodesic_spanner::prelude::*;
use geodesic_spanner::verify::sample_lemma2;

fn main() -> Result<()> {
    let mut worst: f64 = 0.0;
    let mut total = 0;
    for seed in 0..10 {
        let cfg = GenConfig { placement: Placement::MixedWithBoundary { fraction: 0.5 }, ..GenConfig::new(seed, 30, 15) };
        let env = random_instance(&cfg)?;
        let s = sample_lemma2(&env, 40, 25, seed)?;
        println!("seed {seed}: {}/{} within factor 4, max ratio {:.4}", s.passed, s.samples, s.max_ratio);
        worst = worst.max(s.max_ratio);
        total += s.samples;
    }
    println!("{total} samples, worst ratio {worst:.4}");

    let env = random_instance(&GenConfig::new(42, 2, 12))?;
    let (p, q) = (env.point(0), env.point(1));
    let mid = Point3::new(0.5 * (p.x + q.x), 0.5 * (p.y + q.y), 0.5 * (p.z + q.z));
    if env.is_free(mid) {
        let o = lemma2_check(&env, p, q, mid)?;
        println!("midpoint detour {:.4} vs 4 sigma {:.4}", o.lhs, o.rhs);
    }
    Ok(())
}
