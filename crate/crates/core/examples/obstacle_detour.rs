//! Geodesic distances around a single box, with the witness path.

use geodesic_spanner::geodesic::{build_track_graph, single_source_geodesic};
use geodesic_spanner::prelude::*;

fn main() -> Result<()> {
    let wall = AxisBox::from_bounds([1.0, -1.0, -2.0], [2.0, 3.0, 2.0]);
    let p = Point3::new(0.0, 0.0, 0.0);
    let q = Point3::new(3.0, 0.5, 0.0);
    let env = Environment::new(vec![p, q], vec![wall])?;

    println!("L1 distance        {}", l1_distance(p, q));
    println!("geodesic distance  {}", geodesic_distance(&env, p, q)?);

    let track = build_track_graph(&env, &[])?;
    println!("track graph: {} nodes, {} links", track.node_count(), track.link_count());
    let paths = single_source_geodesic(&track, p, true)?;
    for v in paths.polyline_to(q).unwrap_or_default() {
        println!("  {v}");
    }

    let field = GeodesicField::new(env.obstacles(), p)?;
    for t in [Point3::new(2.0, 0.0, 0.0), Point3::new(1.5, 3.0, 0.0), Point3::new(5.0, 5.0, 5.0)] {
        println!("sigma({p}, {t}) = {}", field.distance_to(t));
    }
    for h in [0.5, 0.25, 0.125] {
        println!("lattice 1/{:<3} {}", 1.0 / h, oracle_fine_grid_distance(&env, p, q, h)?);
    }
    Ok(())
}
