//! L1 geodesic distances amid box obstacles.
//!
//! Three routes to the same quantity:
//! - [`TrackGraph`]: the Hanan grid over obstacle faces and all terminals,
//!   searched with Dijkstra. Can return witness polylines.
//! - [`GeodesicField`]: a per-source grid over obstacle faces and the
//!   source planes only, answering arbitrary free query points. This is the
//!   workhorse of the spanner builder and the verifier.
//! - [`oracle_fine_grid_distance`]: a uniform lattice oblivious to obstacle
//!   faces, used only to validate the other two.

mod field;
mod grid;
mod oracle;
mod track;

use rayon::prelude::*;

pub use field::GeodesicField;
pub use oracle::{oracle_fine_grid_distance, oracle_fine_grid_distances};
pub use track::{
    build_track_graph, geodesic_distance, geodesic_distance_amid, geodesic_path, polyline_length,
    single_source_geodesic, GeodesicResult, TrackGraph, DEFAULT_NODE_CAP,
};

use crate::error::Result;
use crate::geometry::Environment;

/// Symmetric matrix of geodesic distances between the points of an
/// environment.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Assembles the matrix from per-source rows, keeping the value computed
    /// from the lower index on both sides.
    pub(crate) fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = rows[i][j];
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Self { n, data }
    }
}

/// All pairwise geodesic distances among the points of `env`, one
/// [`GeodesicField`] per point.
pub fn pairwise_geodesics(env: &Environment) -> Result<DistanceMatrix> {
    let rows = (0..env.n())
        .into_par_iter()
        .map(|i| {
            let field = GeodesicField::new(env.obstacles(), env.point(i))?;
            Ok(env.points().iter().map(|&q| field.distance_to(q)).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(DistanceMatrix::from_rows(rows))
}
