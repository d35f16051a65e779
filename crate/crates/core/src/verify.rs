//! Checks for the quantitative guarantees of the construction: measured
//! stretch, the detour inequality for points inside `B(p, q)`, the
//! collinear lower-bound instance, the L1/L2 norm sandwich, and edge-count
//! scaling.

use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{lemma1_instance, mix_seed, random_instance, GenConfig, Lemma1Config, SeededRng};
use crate::geodesic::{pairwise_geodesics, DistanceMatrix, GeodesicField};
use crate::geometry::{
    bounding_box, containing_obstacle, l1_distance, l2_distance, Containment, Environment, Point3,
    EPS_GEOM,
};
use crate::spanner::{build_spanner_detailed, SpannerGraph};

/// Proven L1 stretch bound of the construction.
pub const STRETCH_BOUND: f64 = 8.0;
/// Absolute slack on the stretch bound for floating-point accumulation.
pub const STRETCH_SLACK: f64 = 1e-6;
/// Constant of the detour inequality.
pub const DETOUR_FACTOR: f64 = 4.0;

/// Shortest-path distances in `g` from `source`; unreachable vertices get
/// infinity.
pub fn graph_distances(g: &SpannerGraph, source: usize) -> Vec<f64> {
    distances_with(&g.adjacency(), source)
}

fn distances_with(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    #[derive(PartialEq)]
    struct Item(f64, usize);
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Item {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
        }
    }

    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Item(0.0, source));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Item(nd, v));
            }
        }
    }
    dist
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub metric: String,
    pub max_ratio: f64,
    pub argmax: Option<(usize, usize)>,
    /// Stretch implied for Euclidean geodesic distances: `sqrt(3)` times the
    /// measured L1 stretch. Not measured directly.
    pub l2_bound: f64,
    pub edge_count: usize,
    pub pair_size_sum: Option<usize>,
    /// Whether some graph distance fell below the geodesic distance.
    pub shortcut_found: bool,
}

impl StretchReport {
    pub fn within_bound(&self) -> bool {
        self.max_ratio <= STRETCH_BOUND + STRETCH_SLACK
    }
}

/// Largest ratio of graph distance to geodesic distance over all pairs.
pub fn spanning_ratio(env: &Environment, g: &SpannerGraph) -> Result<StretchReport> {
    if g.n() != env.n() {
        return Err(Error::Precondition(format!(
            "graph has {} vertices, environment {} points",
            g.n(),
            env.n()
        )));
    }
    let dist = pairwise_geodesics(env)?;
    Ok(spanning_ratio_with(g, &dist))
}

/// Largest ratio and the pair attaining it.
type Worst = (f64, (usize, usize));

/// As [`spanning_ratio`], with the geodesic distances supplied.
pub fn spanning_ratio_with(g: &SpannerGraph, dist: &DistanceMatrix) -> StretchReport {
    let n = g.n();
    let adj = g.adjacency();
    let per_source: Vec<(Option<Worst>, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let dg = distances_with(&adj, i);
            let mut best: Option<Worst> = None;
            let mut shortcut = false;
            for (j, &d) in dg.iter().enumerate().skip(i + 1) {
                let sigma = dist.get(i, j);
                let ratio = if sigma > 0.0 { d / sigma } else { 1.0 };
                shortcut |= d < sigma - EPS_GEOM * sigma.max(1.0);
                if best.is_none_or(|(r, _)| ratio > r) {
                    best = Some((ratio, (i, j)));
                }
            }
            (best, shortcut)
        })
        .collect();
    let mut best: Option<Worst> = None;
    let mut shortcut_found = false;
    for (b, short) in per_source {
        shortcut_found |= short;
        if let Some((r, arg)) = b {
            if best.is_none_or(|(br, _)| r > br) {
                best = Some((r, arg));
            }
        }
    }
    let max_ratio = best.map_or(1.0, |b| b.0);
    let argmax = best.map(|b| b.1);
    StretchReport {
        metric: "L1-geodesic".into(),
        max_ratio,
        argmax,
        l2_bound: 3f64.sqrt() * max_ratio,
        edge_count: g.edge_count(),
        pair_size_sum: None,
        shortcut_found,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Outcome {
    /// `sigma(p, o) + sigma(o, q)`.
    pub lhs: f64,
    /// `4 sigma(p, q)`.
    pub rhs: f64,
    pub holds: bool,
}

impl Lemma2Outcome {
    /// `lhs / sigma(p, q)`, or 1 when `p = q`.
    pub fn ratio(&self) -> f64 {
        if self.rhs > 0.0 {
            DETOUR_FACTOR * self.lhs / self.rhs
        } else {
            1.0
        }
    }
}

/// Detour check for a point `o` inside the closed box spanned by `p` and
/// `q`.
pub fn lemma2_check(env: &Environment, p: Point3, q: Point3, o: Point3) -> Result<Lemma2Outcome> {
    for (name, pt) in [("p", p), ("q", q), ("o", o)] {
        if containing_obstacle(env.obstacles(), pt).is_some() {
            return Err(Error::Precondition(format!("{name} = {pt} lies inside an obstacle")));
        }
    }
    if !bounding_box(p, q).contains(o, Containment::Closed) {
        return Err(Error::Precondition(format!("{o} is outside the box of {p} and {q}")));
    }
    let from_p = GeodesicField::new(env.obstacles(), p)?;
    let from_q = GeodesicField::new(env.obstacles(), q)?;
    Ok(detour(from_p.distance_to(q), from_p.distance_to(o), from_q.distance_to(o)))
}

fn detour(pq: f64, po: f64, qo: f64) -> Lemma2Outcome {
    let lhs = po + qo;
    let rhs = DETOUR_FACTOR * pq;
    Lemma2Outcome { lhs, rhs, holds: lhs <= rhs + EPS_GEOM }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Summary {
    pub samples: usize,
    pub passed: usize,
    /// Largest observed `lhs / sigma(p, q)`.
    pub max_ratio: f64,
}

impl Lemma2Summary {
    pub fn all_passed(&self) -> bool {
        self.samples == self.passed
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            samples: self.samples + other.samples,
            passed: self.passed + other.passed,
            max_ratio: self.max_ratio.max(other.max_ratio),
        }
    }
}

/// Samples `pairs` random point pairs of `env` and, for each, `per_pair`
/// free points `o` uniform in their box.
pub fn sample_lemma2(env: &Environment, pairs: usize, per_pair: usize, seed: u64) -> Result<Lemma2Summary> {
    if env.n() < 2 {
        return Err(Error::Precondition("need at least two points".into()));
    }
    let mut rng = SeededRng::new(seed);
    let mut jobs = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let i = rng.below(env.n());
        let j = (i + 1 + rng.below(env.n() - 1)) % env.n();
        let (p, q) = (env.point(i), env.point(j));
        let b = bounding_box(p, q);
        let mut os = Vec::with_capacity(per_pair);
        while os.len() < per_pair {
            let mut o = p;
            for _ in 0..1000 {
                let cand = rng.point_in(&b);
                if env.is_free(cand) {
                    o = cand;
                    break;
                }
            }
            os.push(o);
        }
        jobs.push((p, q, os));
    }
    jobs.par_iter()
        .map(|(p, q, os)| {
            let from_p = GeodesicField::new(env.obstacles(), *p)?;
            let from_q = GeodesicField::new(env.obstacles(), *q)?;
            let pq = from_p.distance_to(*q);
            let mut s = Lemma2Summary::default();
            for &o in os {
                let out = detour(pq, from_p.distance_to(o), from_q.distance_to(o));
                s.samples += 1;
                s.passed += usize::from(out.holds);
                s.max_ratio = s.max_ratio.max(out.ratio());
            }
            Ok(s)
        })
        .try_reduce(Lemma2Summary::default, |a, b| Ok(a.merge(b)))
}

/// Checks the L1/L2 sandwich `l1 / sqrt(3) <= l2 <= l1` on every pair of
/// points. The graph only fixes which instance is being reported on.
pub fn observation1_check(g: &SpannerGraph, env: &Environment) -> bool {
    g.n() == env.n() && norms_sandwiched(env.points())
}

pub fn norms_sandwiched(points: &[Point3]) -> bool {
    let root3 = 3f64.sqrt();
    points.iter().enumerate().all(|(i, &p)| {
        points[i + 1..].iter().all(|&q| {
            let (l1, l2) = (l1_distance(p, q), l2_distance(p, q));
            let slack = 4.0 * f64::EPSILON * l1;
            l1 / root3 <= l2 + slack && l2 <= l1 + slack
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub config: Lemma1Config,
    pub min_geodesic: f64,
    pub max_geodesic: f64,
    /// All geodesic distances within `[s, s + eps + 4 delta]`.
    pub bracket_holds: bool,
    /// Smallest stretch over graphs obtained by deleting one edge of the
    /// complete geodesic graph.
    pub min_removed_ratio: f64,
    /// Smallest graph distance between the endpoints of a deleted edge.
    pub min_removed_distance: f64,
    pub exceeds_lower_bound: bool,
}

/// Runs the lower-bound argument on the collinear slab instance.
pub fn lemma1_check(cfg: &Lemma1Config) -> Result<Lemma1Report> {
    let env = lemma1_instance(cfg)?;
    let dist = pairwise_geodesics(&env)?;
    let n = env.n();
    let upper = cfg.s + cfg.eps + 4.0 * cfg.delta;
    let mut min_geodesic = f64::INFINITY;
    let mut max_geodesic: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            min_geodesic = min_geodesic.min(dist.get(i, j));
            max_geodesic = max_geodesic.max(dist.get(i, j));
        }
    }
    let complete = SpannerGraph::complete(&dist);
    let mut min_removed_ratio = f64::INFINITY;
    let mut min_removed_distance = f64::INFINITY;
    for e in complete.edges() {
        let g = complete.without_edge(e.i, e.j);
        let dg = graph_distances(&g, e.i)[e.j];
        min_removed_distance = min_removed_distance.min(dg);
        min_removed_ratio = min_removed_ratio.min(dg / dist.get(e.i, e.j));
    }
    Ok(Lemma1Report {
        config: *cfg,
        min_geodesic,
        max_geodesic,
        bracket_holds: min_geodesic >= cfg.s - EPS_GEOM && max_geodesic <= upper + EPS_GEOM,
        min_removed_ratio,
        min_removed_distance,
        exceeds_lower_bound: min_removed_ratio > 2.0 - cfg.eps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub edges: usize,
    pub pair_size_sum: usize,
    pub max_stretch: f64,
    /// `edges / (n log2(n)^3)`.
    pub normalized_edges: f64,
    pub within_budget: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMedian {
    pub n: usize,
    pub edges: f64,
    pub pair_size_sum: f64,
    pub max_stretch: f64,
    pub normalized_edges: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub medians: Vec<SweepMedian>,
}

impl SweepTable {
    pub fn max_stretch(&self) -> f64 {
        self.rows.iter().map(|r| r.max_stretch).fold(1.0, f64::max)
    }

    pub fn all_within_bound(&self) -> bool {
        self.max_stretch() <= STRETCH_BOUND + STRETCH_SLACK
    }

    pub fn all_within_budget(&self) -> bool {
        self.rows.iter().all(|r| r.within_budget)
    }

    /// Ratios of the normalized edge count between consecutive sizes.
    pub fn growth_ratios(&self) -> Vec<f64> {
        self.medians
            .windows(2)
            .map(|w| w[1].normalized_edges / w[0].normalized_edges)
            .collect()
    }
}

pub fn normalized_edges(edges: usize, n: usize) -> f64 {
    let lg = (n as f64).log2();
    edges as f64 / (n as f64 * lg * lg * lg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Obstacle count per instance.
    pub m: usize,
}

/// Generates, builds and verifies `trials` instances per size.
pub fn scaling_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    if cfg.sizes.is_empty() || cfg.trials == 0 {
        return Err(Error::Precondition("sweep needs sizes and at least one trial".into()));
    }
    if cfg.sizes.iter().any(|&n| n < 2) {
        return Err(Error::Precondition("sweep sizes must be at least 2".into()));
    }
    let mut rows = Vec::new();
    let mut medians = Vec::new();
    for &n in &cfg.sizes {
        let mut group = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let seed = mix_seed(cfg.seed, &[n as u64, trial as u64]);
            let env = random_instance(&GenConfig::new(seed, n, cfg.m))?;
            let build = build_spanner_detailed(&env)?;
            let report = spanning_ratio_with(&build.graph, &build.distances);
            let edges = build.graph.edge_count();
            group.push(SweepRow {
                n,
                trial,
                seed,
                edges,
                pair_size_sum: build.stats.pair_size_sum,
                max_stretch: report.max_ratio,
                normalized_edges: normalized_edges(edges, n),
                within_budget: edges <= build.stats.edge_budget(),
            });
        }
        let med = |f: &dyn Fn(&SweepRow) -> f64| median(group.iter().map(f).collect());
        medians.push(SweepMedian {
            n,
            edges: med(&|r| r.edges as f64),
            pair_size_sum: med(&|r| r.pair_size_sum as f64),
            max_stretch: med(&|r| r.max_stretch),
            normalized_edges: med(&|r| r.normalized_edges),
        });
        rows.extend(group);
    }
    Ok(SweepTable { rows, medians })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AxisBox;

    #[test]
    fn graph_distance_examples() {
        let g = SpannerGraph::from_edges(2, [(0, 1, 2.5)]).unwrap();
        assert_eq!(graph_distances(&g, 0)[1], 2.5);
        let tri = SpannerGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        assert_eq!(graph_distances(&tri, 0)[2], 2.0);
        let lonely = SpannerGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        assert!(graph_distances(&lonely, 0)[2].is_infinite());
    }

    #[test]
    fn complete_graph_has_unit_stretch() {
        let env = random_instance(&GenConfig::new(11, 12, 3)).unwrap();
        let dist = pairwise_geodesics(&env).unwrap();
        let r = spanning_ratio_with(&SpannerGraph::complete(&dist), &dist);
        assert_eq!(r.max_ratio, 1.0);
        assert!(!r.shortcut_found);
        assert!((r.l2_bound - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn box_detour_is_tight_in_free_space() {
        let env = Environment::new_unchecked(vec![], vec![]);
        let p = Point3::new(0.0, 0.0, 0.0);
        let q = Point3::new(2.0, 1.0, 3.0);
        let out = lemma2_check(&env, p, q, Point3::new(1.0, 0.5, 0.5)).unwrap();
        assert_eq!(out.lhs, 6.0);
        assert_eq!(out.rhs, 24.0);
        assert!(out.holds);
        assert_eq!(out.ratio(), 1.0);
        let same = lemma2_check(&env, p, q, p).unwrap();
        assert_eq!(same.lhs, 6.0);
        assert!(lemma2_check(&env, p, q, Point3::new(3.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn box_detour_around_an_obstacle() {
        let cube = AxisBox::from_bounds([0.0; 3], [1.0; 3]);
        let env = Environment::new_unchecked(vec![], vec![cube]);
        let p = Point3::new(-0.5, 0.5, 0.5);
        let q = Point3::new(1.5, 0.5, 0.5);
        let out = lemma2_check(&env, p, q, Point3::new(0.0, 0.5, 0.5)).unwrap();
        // 0.5 to the near face, then around: 0.5 + 2.5.
        assert!((out.lhs - 3.0).abs() < 1e-12);
        assert!(out.holds);
    }

    #[test]
    fn norm_sandwich_extremes() {
        let o = Point3::new(0.0, 0.0, 0.0);
        let axis = Point3::new(5.0, 0.0, 0.0);
        assert_eq!(l1_distance(o, axis), l2_distance(o, axis));
        let diag = Point3::new(1.0, 1.0, 1.0);
        assert!((l1_distance(o, diag) - 3f64.sqrt() * l2_distance(o, diag)).abs() < 1e-15);
        assert!(norms_sandwiched(&[o, axis, diag]));
    }

    #[test]
    fn sweep_rejects_empty_sizes() {
        let cfg = SweepConfig { sizes: vec![], trials: 1, seed: 0, m: 0 };
        assert!(scaling_sweep(&cfg).is_err());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
