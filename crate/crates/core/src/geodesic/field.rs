//! Geodesic distance field around a single source.
//!
//! The grid carries only the obstacle faces and the three planes through the
//! source, so its size does not depend on the number of query points. A
//! query point `t` is answered from the corners of the grid cell holding it:
//!
//! ```text
//! sigma(s, t) = min over corners c of cell(t): sigma(s, c) + L1(c, t)
//! ```
//!
//! Adding the planes through `t` would refine only that cell, and a shortest
//! path on the refined grid can be slid off each of the planes through `t`
//! toward one side of the cell without getting longer, so one of the
//! corners is always on some shortest path. Points outside the grid's range
//! are clamped onto it first; the clamped-away part costs exactly its L1
//! length because no obstacle lies out there.

use crate::error::Result;
use crate::geometry::{l1_distance, AxisBox, Axis, Point3};

use super::grid::Grid;
use super::track::DEFAULT_NODE_CAP;

#[derive(Debug, Clone)]
pub struct GeodesicField {
    source: Point3,
    grid: Grid,
    dist: Vec<f64>,
}

impl GeodesicField {
    pub fn new(obstacles: &[AxisBox], source: Point3) -> Result<Self> {
        Self::with_cap(obstacles, source, DEFAULT_NODE_CAP)
    }

    pub fn with_cap(obstacles: &[AxisBox], source: Point3, node_cap: u64) -> Result<Self> {
        let extra = Axis::ALL.map(|a| vec![source.coord(a)]);
        let grid = Grid::new(obstacles, extra, node_cap)?;
        let src = grid.node_at(source).expect("source coordinates are cuts");
        let dist = grid.shortest_paths(src, None, false).dist;
        Ok(Self { source, grid, dist })
    }

    pub fn source(&self) -> Point3 {
        self.source
    }

    /// Geodesic distance from the source to `t`, which must not lie inside
    /// an obstacle.
    pub fn distance_to(&self, t: Point3) -> f64 {
        if t == self.source {
            return 0.0;
        }
        let mut clamped = t;
        let mut brackets = [(0usize, 0usize); 3];
        for axis in Axis::ALL {
            let cuts = self.grid.cuts(axis);
            let v = t.coord(axis).clamp(cuts[0], cuts[cuts.len() - 1]);
            clamped = clamped.with_coord(axis, v);
            let i = cuts.partition_point(|&c| c < v);
            brackets[axis.index()] = if cuts[i] == v { (i, i) } else { (i - 1, i) };
        }
        let outside = l1_distance(t, clamped);

        let mut best = f64::INFINITY;
        for ix in [brackets[0].0, brackets[0].1] {
            for iy in [brackets[1].0, brackets[1].1] {
                for iz in [brackets[2].0, brackets[2].1] {
                    let id = self.grid.id([ix, iy, iz]);
                    if !self.grid.is_free(id) {
                        continue;
                    }
                    let d = self.dist[id] + l1_distance(self.grid.point(id), clamped);
                    best = best.min(d);
                }
            }
        }
        best + outside
    }

    pub fn node_count(&self) -> usize {
        self.grid.node_count()
    }
}
