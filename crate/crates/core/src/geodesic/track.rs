use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{l1_distance, AxisBox, Axis, Environment, Point3};

use super::grid::{Grid, NO_NODE};

/// Default upper bound on the number of grid nodes.
pub const DEFAULT_NODE_CAP: u64 = 20_000_000;

/// Hanan grid over all obstacle faces and all terminal coordinates, with
/// the terminals registered as nodes.
#[derive(Debug, Clone)]
pub struct TrackGraph {
    grid: Grid,
    terminals: Vec<Point3>,
    terminal_nodes: Vec<usize>,
    by_node: HashMap<usize, usize>,
}

impl TrackGraph {
    /// Builds the graph for `obstacles` with the given terminals.
    /// Coincident terminals are registered once.
    pub fn build(obstacles: &[AxisBox], terminals: &[Point3], node_cap: u64) -> Result<Self> {
        for (i, t) in terminals.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::Precondition(format!("terminal {i} is not finite")));
            }
            if let Some(k) = obstacles.iter().position(|o| o.contains_open(*t)) {
                return Err(Error::Precondition(format!(
                    "terminal {t} lies inside obstacle {k}"
                )));
            }
        }
        let extra = Axis::ALL.map(|a| terminals.iter().map(|t| t.coord(a)).collect());
        let grid = Grid::new(obstacles, extra, node_cap)?;

        let mut reg = TrackGraph {
            grid,
            terminals: Vec::new(),
            terminal_nodes: Vec::new(),
            by_node: HashMap::new(),
        };
        for &t in terminals {
            let node = reg.grid.node_at(t).expect("terminal coordinates are cuts");
            if !reg.by_node.contains_key(&node) {
                reg.by_node.insert(node, reg.terminals.len());
                reg.terminals.push(t);
                reg.terminal_nodes.push(node);
            }
        }
        Ok(reg)
    }

    pub fn cuts(&self, axis: Axis) -> &[f64] {
        self.grid.cuts(axis)
    }

    /// Number of grid nodes that are not strictly inside an obstacle.
    pub fn node_count(&self) -> usize {
        (0..self.grid.node_count()).filter(|&id| self.grid.is_free(id)).count()
    }

    pub fn link_count(&self) -> usize {
        self.grid.link_count()
    }

    /// Whether a node exists at exactly `p`.
    pub fn has_node(&self, p: Point3) -> bool {
        self.grid.node_at(p).is_some_and(|id| self.grid.is_free(id))
    }

    /// Whether `a` and `b` are nodes joined by a single link.
    pub fn has_link(&self, a: Point3, b: Point3) -> bool {
        let (Some(ia), Some(ib)) = (self.grid.node_at(a), self.grid.node_at(b)) else {
            return false;
        };
        let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
        let (li, hi_idx) = (self.grid.index_of(lo), self.grid.index_of(hi));
        Axis::ALL.iter().any(|&axis| {
            let k = axis.index();
            let mut step = li;
            step[k] += 1;
            step == hi_idx && self.grid.has_forward_link(lo, axis)
        })
    }

    pub fn terminals(&self) -> &[Point3] {
        &self.terminals
    }

    pub fn terminal_index(&self, p: Point3) -> Option<usize> {
        self.grid.node_at(p).and_then(|id| self.by_node.get(&id).copied())
    }
}

/// Builds the track graph over all points of `env` plus `extra_terminals`.
pub fn build_track_graph(env: &Environment, extra_terminals: &[Point3]) -> Result<TrackGraph> {
    let terminals: Vec<Point3> = env.points().iter().chain(extra_terminals).copied().collect();
    TrackGraph::build(env.obstacles(), &terminals, DEFAULT_NODE_CAP)
}

/// Geodesic distances from one source to every registered terminal.
#[derive(Debug, Clone)]
pub struct GeodesicResult {
    pub source: Point3,
    /// Distances indexed like [`TrackGraph::terminals`].
    pub distances: Vec<f64>,
    pub terminals: Vec<Point3>,
    /// Shortest paths as axis-parallel polylines, when requested.
    pub polylines: Option<Vec<Vec<Point3>>>,
}

impl GeodesicResult {
    pub fn distance_to(&self, t: Point3) -> Option<f64> {
        self.terminals.iter().position(|&p| p == t).map(|i| self.distances[i])
    }

    pub fn polyline_to(&self, t: Point3) -> Option<&[Point3]> {
        let i = self.terminals.iter().position(|&p| p == t)?;
        self.polylines.as_ref().map(|lines| lines[i].as_slice())
    }
}

pub fn single_source_geodesic(
    track: &TrackGraph,
    source: Point3,
    with_polylines: bool,
) -> Result<GeodesicResult> {
    if track.terminal_index(source).is_none() {
        return Err(Error::Precondition(format!("source {source} is not a terminal")));
    }
    let grid = &track.grid;
    let src = grid.node_at(source).expect("registered");
    let search = grid.shortest_paths(src, Some(&track.terminal_nodes), with_polylines);

    let mut distances = Vec::with_capacity(track.terminals.len());
    for (t, &node) in track.terminals.iter().zip(&track.terminal_nodes) {
        let d = search.dist[node];
        if !d.is_finite() {
            return Err(Error::Internal(format!("terminal {t} unreachable from {source}")));
        }
        distances.push(d);
    }
    let polylines = with_polylines.then(|| {
        track
            .terminal_nodes
            .iter()
            .map(|&node| {
                let mut chain = vec![grid.point(node)];
                let mut cur = node;
                while cur != src {
                    cur = search.pred[cur] as usize;
                    debug_assert_ne!(cur as u32, NO_NODE);
                    chain.push(grid.point(cur));
                }
                chain.reverse();
                simplify_polyline(chain)
            })
            .collect()
    });
    Ok(GeodesicResult {
        source,
        distances,
        terminals: track.terminals.clone(),
        polylines,
    })
}

/// Drops interior vertices where the path goes straight on.
fn simplify_polyline(chain: Vec<Point3>) -> Vec<Point3> {
    let mut out: Vec<Point3> = Vec::with_capacity(chain.len());
    for p in chain {
        if out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            let same_axis = Axis::ALL.iter().all(|&ax| {
                (a.coord(ax) == b.coord(ax)) == (b.coord(ax) == p.coord(ax))
            });
            if same_axis {
                out.pop();
            }
        }
        out.push(p);
    }
    out
}

/// Total L1 length of a polyline.
pub fn polyline_length(line: &[Point3]) -> f64 {
    line.windows(2).map(|w| l1_distance(w[0], w[1])).sum()
}

/// Geodesic distance between two free points. Builds a track graph over the
/// obstacles with `p` and `q` as the only terminals.
pub fn geodesic_distance(env: &Environment, p: Point3, q: Point3) -> Result<f64> {
    geodesic_distance_amid(env.obstacles(), p, q)
}

pub fn geodesic_distance_amid(obstacles: &[AxisBox], p: Point3, q: Point3) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    let track = TrackGraph::build(obstacles, &[p, q], DEFAULT_NODE_CAP)?;
    let res = single_source_geodesic(&track, p, false)?;
    Ok(res.distances[track.terminal_index(q).expect("registered")])
}

/// Shortest obstacle-avoiding path from `p` to `q` with its length.
pub fn geodesic_path(env: &Environment, p: Point3, q: Point3) -> Result<(f64, Vec<Point3>)> {
    let track = TrackGraph::build(env.obstacles(), &[p, q], DEFAULT_NODE_CAP)?;
    let res = single_source_geodesic(&track, p, true)?;
    let i = track.terminal_index(q).expect("registered");
    let line = res.polylines.expect("requested")[i].clone();
    Ok((res.distances[i], line))
}
