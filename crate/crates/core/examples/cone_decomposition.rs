//! Builds the four cone-separated pair decompositions of a point set and
//! certifies each one by brute force.

use geodesic_spanner::cspd::build_all_cspds;
use geodesic_spanner::gen::SeededRng;
use geodesic_spanner::prelude::*;

fn main() {
    let n = 300;
    let mut rng = SeededRng::new(5);
    let points: Vec<Point3> = (0..n)
        .map(|_| Point3::new(rng.below(20) as f64, rng.below(20) as f64, rng.uniform(0.0, 1.0)))
        .collect();

    let mut covered = 0;
    for cspd in build_all_cspds(&points) {
        let cert = certify_cspd(&points, cspd.cone, &cspd);
        covered += cert.covered_pairs;
        println!(
            "cone {}: {} pairs, size sum {}, max membership {}, certified {}",
            cspd.cone.label(),
            cspd.pairs.len(),
            cspd.size_sum,
            cspd.max_membership(n),
            cert.is_ok()
        );
    }
    println!("ordered pairs covered {covered} of {}", n * (n - 1) / 2);

    let c = classify(points[0], points[1]).expect("distinct points");
    println!("points 0 -> 1: cone {}, reflected {}", c.cone.label(), c.reflected);
}
