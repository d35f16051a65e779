//! Spanner construction from cone-separated pair decompositions.
//!
//! For every pair `(A, B)` of every cone's decomposition, the apex `o` is
//! pushed out of the obstacle that may contain it along the six axis
//! directions. For each resulting candidate point, the member of `A ∪ B`
//! geodesically closest to it becomes a center and is connected to every
//! other member.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cspd::{build_all_cspds, ConeId, Cspd, CspdPair};
use crate::error::{Error, Result};
use crate::geodesic::{DistanceMatrix, GeodesicField};
use crate::geometry::{containing_obstacle, project_out, Environment, Point3};

/// Where an edge was first emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub cone: ConeId,
    /// Index of the pair within its cone's decomposition.
    pub pair: usize,
    /// Position of the candidate among the pair's distinct candidates.
    pub candidate: usize,
    pub center: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpannerEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    pub provenance: Option<Provenance>,
}

/// Undirected weighted graph on point indices, edges kept with `i < j` and
/// sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpannerGraph {
    n: usize,
    edges: Vec<SpannerEdge>,
}

impl SpannerGraph {
    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    /// Builds a graph from `(i, j, weight)` triples in any orientation.
    /// Repeated edges are merged, keeping the first weight.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, j, w) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::Precondition(format!("bad edge ({i}, {j}) for n = {n}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Precondition(format!("bad weight {w} on ({i}, {j})")));
            }
            let key = (i.min(j), i.max(j));
            map.entry(key).or_insert(SpannerEdge { i: key.0, j: key.1, weight: w, provenance: None });
        }
        Ok(Self { n, edges: map.into_values().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[SpannerEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        let key = (i.min(j), i.max(j));
        self.edges
            .binary_search_by(|e| (e.i, e.j).cmp(&key))
            .ok()
            .map(|k| self.edges[k].weight)
    }

    /// A copy without the edge between `i` and `j`.
    pub fn without_edge(&self, i: usize, j: usize) -> Self {
        let key = (i.min(j), i.max(j));
        Self {
            n: self.n,
            edges: self.edges.iter().filter(|e| (e.i, e.j) != key).copied().collect(),
        }
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push((e.j, e.weight));
            adj[e.j].push((e.i, e.weight));
        }
        adj
    }

    /// The complete graph weighted by `dist`.
    pub fn complete(dist: &DistanceMatrix) -> Self {
        let n = dist.n();
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| SpannerEdge { i, j, weight: dist.get(i, j), provenance: None })
            .collect();
        Self { n, edges }
    }
}

/// The distinct points among the six exits of the pair's apex, in
/// `x+, x-, y+, y-, z+, z-` order.
pub fn candidate_points(pair: &CspdPair, env: &Environment) -> Vec<Point3> {
    let mut out: Vec<Point3> = Vec::with_capacity(6);
    for c in project_out(pair.apex, env.obstacles()) {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Member of `A ∪ B` geodesically closest to `candidate`; ties go to the
/// smaller index.
pub fn select_center(pair: &CspdPair, env: &Environment, candidate: Point3) -> Result<usize> {
    if containing_obstacle(env.obstacles(), candidate).is_some() {
        return Err(Error::Precondition(format!("candidate {candidate} inside an obstacle")));
    }
    let field = GeodesicField::new(env.obstacles(), candidate)?;
    let mut best: Option<(f64, usize)> = None;
    for i in pair.members() {
        let d = field.distance_to(env.point(i));
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, i));
        }
    }
    best.map(|(_, i)| i)
        .ok_or_else(|| Error::Precondition("pair has no members".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeStats {
    pub cone: ConeId,
    pub pairs: usize,
    pub size_sum: usize,
    pub max_membership: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildStats {
    pub cones: Vec<ConeStats>,
    /// Sum of `|A| + |B|` over all pairs of all cones.
    pub pair_size_sum: usize,
    /// Pairs whose apex lies inside an obstacle.
    pub interior_apexes: usize,
    /// Distinct candidate points summed over pairs.
    pub candidates: usize,
    /// Edges emitted before deduplication.
    pub emissions: usize,
    pub edges: usize,
}

impl BuildStats {
    /// Upper bound on the edge count: six candidates per pair, each
    /// connecting at most `|A| + |B|` members.
    pub fn edge_budget(&self) -> usize {
        6 * self.pair_size_sum
    }
}

#[derive(Debug, Clone)]
pub struct SpannerBuild {
    pub graph: SpannerGraph,
    pub cspds: Vec<Cspd>,
    /// Geodesic distances between all points, as used for edge weights.
    pub distances: DistanceMatrix,
    pub stats: BuildStats,
}

pub fn build_spanner(env: &Environment) -> Result<SpannerGraph> {
    build_spanner_detailed(env).map(|b| b.graph)
}

struct Slot {
    cone: usize,
    pair: usize,
    candidate: usize,
    point: Point3,
}

pub fn build_spanner_detailed(env: &Environment) -> Result<SpannerBuild> {
    let n = env.n();
    let cspds = build_all_cspds(env.points());

    // One slot per (pair, distinct candidate); each member of the pair must
    // learn its distance to the slot's point.
    let mut slots = Vec::new();
    let mut member_slots: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut interior_apexes = 0;
    for (c, cspd) in cspds.iter().enumerate() {
        for (k, pair) in cspd.pairs.iter().enumerate() {
            if containing_obstacle(env.obstacles(), pair.apex).is_some() {
                interior_apexes += 1;
            }
            let members = pair.members();
            for (slot_in_pair, point) in candidate_points(pair, env).into_iter().enumerate() {
                let s = slots.len();
                slots.push(Slot { cone: c, pair: k, candidate: slot_in_pair, point });
                for &i in &members {
                    member_slots[i].push(s);
                }
            }
        }
    }

    let per_point: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let field = GeodesicField::new(env.obstacles(), env.point(i))?;
            let row = env.points().iter().map(|&q| field.distance_to(q)).collect();
            let to_slots = member_slots[i].iter().map(|&s| field.distance_to(slots[s].point)).collect();
            Ok((row, to_slots))
        })
        .collect::<Result<_>>()?;

    let mut best: Vec<Option<(f64, usize)>> = vec![None; slots.len()];
    for (i, (_, to_slots)) in per_point.iter().enumerate() {
        for (&s, &d) in member_slots[i].iter().zip(to_slots) {
            if best[s].is_none_or(|(bd, _)| d < bd) {
                best[s] = Some((d, i));
            }
        }
    }
    let distances = DistanceMatrix::from_rows(per_point.into_iter().map(|(row, _)| row).collect());

    let mut edges: BTreeMap<(usize, usize), SpannerEdge> = BTreeMap::new();
    let mut emissions = 0;
    for (s, slot) in slots.iter().enumerate() {
        let (_, center) = best[s].ok_or_else(|| Error::Internal("slot without members".into()))?;
        let cone = cspds[slot.cone].cone;
        for q in cspds[slot.cone].pairs[slot.pair].members() {
            if q == center {
                continue;
            }
            emissions += 1;
            let key = (center.min(q), center.max(q));
            edges.entry(key).or_insert(SpannerEdge {
                i: key.0,
                j: key.1,
                weight: distances.get(key.0, key.1),
                provenance: Some(Provenance { cone, pair: slot.pair, candidate: slot.candidate, center }),
            });
        }
    }

    let graph = SpannerGraph { n, edges: edges.into_values().collect() };
    let cones = cspds
        .iter()
        .map(|c| ConeStats {
            cone: c.cone,
            pairs: c.pairs.len(),
            size_sum: c.size_sum,
            max_membership: c.max_membership(n),
        })
        .collect();
    let stats = BuildStats {
        cones,
        pair_size_sum: cspds.iter().map(|c| c.size_sum).sum(),
        interior_apexes,
        candidates: slots.len(),
        emissions,
        edges: graph.edge_count(),
    };
    Ok(SpannerBuild { graph, cspds, distances, stats })
}
