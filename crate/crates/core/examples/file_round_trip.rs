//! Writes an instance and its spanner to JSON and reads them back.

use geodesic_spanner::io::{read_graph, read_instance, write_graph, write_instance};
use geodesic_spanner::prelude::*;

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("geospanner-example");
    std::fs::create_dir_all(&dir)?;
    let (inst, graph) = (dir.join("instance.json"), dir.join("graph.json"));

    let env = random_instance(&GenConfig::new(3, 20, 4))?;
    write_instance(&inst, &env)?;
    write_graph(&graph, &build_spanner(&env)?)?;

    let env2 = read_instance(&inst)?;
    let g2 = read_graph(&graph)?;
    println!("{} points, {} edges", env2.n(), g2.edge_count());
    println!("stretch {:.4}", spanning_ratio(&env2, &g2)?.max_ratio);
    println!("files in {}", dir.display());
    Ok(())
}
