//! Cone-separated pair decompositions for the four cones above the xy-plane.
//!
//! Cone membership is decided combinatorially. Along each axis points are
//! ordered by the key `(coordinate, z, y, x, index)`, which is a strict
//! total order, so every ordered pair of distinct points falls in exactly
//! one of the eight octants. The four cones are the octants with a positive
//! z-sign; the remaining four are their reflections.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Axis, Point3};

/// One of the four cones above the xy-plane, identified by the signs of its
/// x- and y-directions. The z-direction is always positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeId {
    pub x_positive: bool,
    pub y_positive: bool,
}

impl ConeId {
    pub const ALL: [ConeId; 4] = [
        ConeId::new(true, true),
        ConeId::new(false, true),
        ConeId::new(false, false),
        ConeId::new(true, false),
    ];

    pub const fn new(x_positive: bool, y_positive: bool) -> Self {
        Self { x_positive, y_positive }
    }

    /// Whether the cone opens toward increasing values of `axis`.
    pub fn positive(self, axis: Axis) -> bool {
        match axis {
            Axis::X => self.x_positive,
            Axis::Y => self.y_positive,
            Axis::Z => true,
        }
    }

    pub fn reflected(self) -> Self {
        Self::new(!self.x_positive, !self.y_positive)
    }

    pub fn label(self) -> &'static str {
        match (self.x_positive, self.y_positive) {
            (true, true) => "++",
            (false, true) => "-+",
            (false, false) => "--",
            (true, false) => "+-",
        }
    }
}

/// Orders two points along `axis`, breaking coordinate ties by z, then y,
/// then x. Returns `Equal` only for identical points.
pub fn axis_order(axis: Axis, p: Point3, q: Point3) -> Ordering {
    p.coord(axis)
        .total_cmp(&q.coord(axis))
        .then(p.z.total_cmp(&q.z))
        .then(p.y.total_cmp(&q.y))
        .then(p.x.total_cmp(&q.x))
}

fn indexed_order(axis: Axis, points: &[Point3], i: usize, j: usize) -> Ordering {
    axis_order(axis, points[i], points[j]).then(i.cmp(&j))
}

/// Where `q` lies as seen from `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub cone: ConeId,
    /// When set, `q` lies in the reflection of `cone` at `p`; equivalently
    /// `p` lies in `cone` at `q`.
    pub reflected: bool,
}

pub fn classify(p: Point3, q: Point3) -> Result<Classification> {
    if p == q {
        return Err(Error::Precondition("cannot classify a point against itself".into()));
    }
    let greater = |axis| axis_order(axis, q, p) == Ordering::Greater;
    let (gx, gy, gz) = (greater(Axis::X), greater(Axis::Y), greater(Axis::Z));
    Ok(if gz {
        Classification { cone: ConeId::new(gx, gy), reflected: false }
    } else {
        Classification { cone: ConeId::new(!gx, !gy), reflected: true }
    })
}

/// Whether `points[q]` lies in `cone` translated to `points[p]`.
pub fn in_cone(cone: ConeId, points: &[Point3], p: usize, q: usize) -> bool {
    p != q
        && Axis::ALL.iter().all(|&axis| {
            let ord = indexed_order(axis, points, q, p);
            if cone.positive(axis) {
                ord == Ordering::Greater
            } else {
                ord == Ordering::Less
            }
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CspdPair {
    pub cone: ConeId,
    /// Indices on the reflected side of the apex, sorted.
    pub a: Vec<usize>,
    /// Indices inside the cone at the apex, sorted.
    pub b: Vec<usize>,
    pub apex: Point3,
}

impl CspdPair {
    pub fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// Members of `A ∪ B` in increasing index order.
    pub fn members(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.a.iter().chain(&self.b).copied().collect();
        m.sort_unstable();
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cspd {
    pub cone: ConeId,
    pub pairs: Vec<CspdPair>,
    pub size_sum: usize,
}

impl Cspd {
    /// Largest number of pairs any single point takes part in.
    pub fn max_membership(&self, n: usize) -> usize {
        let mut count = vec![0usize; n];
        for pair in &self.pairs {
            for &i in pair.a.iter().chain(&pair.b) {
                count[i] += 1;
            }
        }
        count.into_iter().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Reflected,
    Cone,
}

struct Builder<'a> {
    points: &'a [Point3],
    cone: ConeId,
    ranks: [Vec<u32>; 3],
    pairs: Vec<CspdPair>,
}

impl Builder<'_> {
    /// Splits `items` at the lower median of their rank along `axis`.
    /// Returns the split coordinate: that of the first upper element.
    fn split<T: Copy>(&self, items: &mut [T], axis: Axis, key: impl Fn(&T) -> usize) -> f64 {
        let ranks = &self.ranks[axis.index()];
        let mid = items.len() / 2;
        items.select_nth_unstable_by_key(mid, |t| ranks[key(t)]);
        self.points[key(&items[mid])].coord(axis)
    }

    fn level1(&mut self, mut set: Vec<usize>) {
        if set.len() < 2 {
            return;
        }
        let split_x = self.split(&mut set, Axis::X, |&i| i);
        let mid = set.len() / 2;
        let labelled: Vec<(usize, Side)> = set
            .iter()
            .enumerate()
            .map(|(k, &i)| (i, if k < mid { Side::Reflected } else { Side::Cone }))
            .collect();
        self.level2(labelled, split_x);
        let upper = set.split_off(mid);
        self.level1(set);
        self.level1(upper);
    }

    fn level2(&mut self, mut items: Vec<(usize, Side)>, split_x: f64) {
        if !has_both_sides(&items) {
            return;
        }
        let split_y = self.split(&mut items, Axis::Y, |t| t.0);
        let mid = items.len() / 2;
        let candidates: Vec<(usize, Side)> = items
            .iter()
            .enumerate()
            .filter(|&(k, t)| (k < mid) == (t.1 == Side::Reflected))
            .map(|(_, &t)| t)
            .collect();
        self.level3(candidates, split_x, split_y);
        let upper = items.split_off(mid);
        self.level2(items, split_x);
        self.level2(upper, split_x);
    }

    fn level3(&mut self, mut items: Vec<(usize, Side)>, split_x: f64, split_y: f64) {
        if !has_both_sides(&items) {
            return;
        }
        let split_z = self.split(&mut items, Axis::Z, |t| t.0);
        let mid = items.len() / 2;
        let mut a: Vec<usize> = items[..mid]
            .iter()
            .filter(|t| t.1 == Side::Reflected)
            .map(|t| t.0)
            .collect();
        let mut b: Vec<usize> = items[mid..].iter().filter(|t| t.1 == Side::Cone).map(|t| t.0).collect();
        if !a.is_empty() && !b.is_empty() {
            a.sort_unstable();
            b.sort_unstable();
            self.pairs.push(CspdPair {
                cone: self.cone,
                a,
                b,
                apex: Point3::new(split_x, split_y, split_z),
            });
        }
        let upper = items.split_off(mid);
        self.level3(items, split_x, split_y);
        self.level3(upper, split_x, split_y);
    }
}

fn has_both_sides(items: &[(usize, Side)]) -> bool {
    items.iter().any(|t| t.1 == Side::Reflected) && items.iter().any(|t| t.1 == Side::Cone)
}

/// Builds the decomposition of `points` for `cone` by three nested median
/// splits on x, y and z. Ranks along x and y are reversed for cones opening
/// toward negative values, so "upper" always means "inside the cone".
pub fn build_cspd(points: &[Point3], cone: ConeId) -> Cspd {
    let n = points.len();
    let ranks = Axis::ALL.map(|axis| {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| indexed_order(axis, points, i, j));
        let mut rank = vec![0u32; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = if cone.positive(axis) { r } else { n - 1 - r } as u32;
        }
        rank
    });
    let mut builder = Builder { points, cone, ranks, pairs: Vec::new() };
    builder.level1((0..n).collect());
    let pairs = builder.pairs;
    let size_sum = pairs.iter().map(CspdPair::size).sum();
    Cspd { cone, pairs, size_sum }
}

/// The decompositions for all four cones, in [`ConeId::ALL`] order.
pub fn build_all_cspds(points: &[Point3]) -> Vec<Cspd> {
    use rayon::prelude::*;
    ConeId::ALL.par_iter().map(|&c| build_cspd(points, c)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CspdViolation {
    /// A pair with an empty side, or a point on both sides.
    MalformedPair { pair: usize },
    /// `b` is not in the cone at `a` although both sit in the same pair.
    NotInCone { pair: usize, a: usize, b: usize },
    /// The apex fails to separate `a` from `b`.
    ApexMisplaced { pair: usize, a: usize, b: usize },
    /// A dominating ordered pair covered other than exactly once.
    Coverage { p: usize, q: usize, count: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspdCertificate {
    pub violations: Vec<CspdViolation>,
    pub covered_pairs: usize,
}

impl CspdCertificate {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Brute-force check of a decomposition against the definition, over all
/// ordered pairs of points.
pub fn certify_cspd(points: &[Point3], cone: ConeId, cspd: &Cspd) -> CspdCertificate {
    let n = points.len();
    let mut violations = Vec::new();
    let mut count = vec![0usize; n * n];
    for (k, pair) in cspd.pairs.iter().enumerate() {
        let overlap = pair.a.iter().any(|i| pair.b.contains(i));
        let out_of_range = pair.a.iter().chain(&pair.b).any(|&i| i >= n);
        if pair.a.is_empty() || pair.b.is_empty() || overlap || out_of_range || pair.cone != cone {
            violations.push(CspdViolation::MalformedPair { pair: k });
            continue;
        }
        for &a in &pair.a {
            for &b in &pair.b {
                count[a * n + b] += 1;
                if !in_cone(cone, points, a, b) {
                    violations.push(CspdViolation::NotInCone { pair: k, a, b });
                }
                if !apex_separates(cone, pair.apex, points[a], points[b]) {
                    violations.push(CspdViolation::ApexMisplaced { pair: k, a, b });
                }
            }
        }
    }
    let mut covered_pairs = 0;
    for p in 0..n {
        for q in 0..n {
            if in_cone(cone, points, p, q) {
                covered_pairs += 1;
                let c = count[p * n + q];
                if c != 1 {
                    violations.push(CspdViolation::Coverage { p, q, count: c });
                }
            }
        }
    }
    CspdCertificate { violations, covered_pairs }
}

/// Whether `a` lies in the reflected cone at `apex` and `b` in the cone,
/// both with closed boundaries.
pub fn apex_separates(cone: ConeId, apex: Point3, a: Point3, b: Point3) -> bool {
    Axis::ALL.iter().all(|&axis| {
        let (a, o, b) = (a.coord(axis), apex.coord(axis), b.coord(axis));
        if cone.positive(axis) {
            a <= o && o <= b
        } else {
            a >= o && o >= b
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    #[test]
    fn classify_examples() {
        let o = p(0.0, 0.0, 0.0);
        let c = classify(o, p(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(c, Classification { cone: ConeId::new(true, true), reflected: false });
        let c = classify(o, p(-1.0, 2.0, 3.0)).unwrap();
        assert_eq!(c, Classification { cone: ConeId::new(false, true), reflected: false });
        let c = classify(o, p(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(c, Classification { cone: ConeId::new(true, true), reflected: false });
        let c = classify(o, p(-1.0, -1.0, -1.0)).unwrap();
        assert_eq!(c, Classification { cone: ConeId::new(true, true), reflected: true });
        assert!(classify(o, o).is_err());
    }

    #[test]
    fn two_points_single_pair() {
        let pts = [p(0.0, 0.0, 0.0), p(1.0, 1.0, 1.0)];
        let cspd = build_cspd(&pts, ConeId::new(true, true));
        assert_eq!(cspd.pairs.len(), 1);
        let pair = &cspd.pairs[0];
        assert_eq!((pair.a.as_slice(), pair.b.as_slice()), (&[0][..], &[1][..]));
        for c in pair.apex.to_array() {
            assert!((0.0..=1.0).contains(&c));
        }
        assert_eq!(cspd.size_sum, 2);
    }

    #[test]
    fn three_on_a_diagonal() {
        let pts = [p(0.0, 0.0, 0.0), p(1.0, 1.0, 1.0), p(2.0, 2.0, 2.0)];
        let cone = ConeId::new(true, true);
        let cspd = build_cspd(&pts, cone);
        let cert = certify_cspd(&pts, cone, &cspd);
        assert!(cert.is_ok(), "{:?}", cert.violations);
        assert_eq!(cert.covered_pairs, 3);
        let mut covered: Vec<(usize, usize)> = cspd
            .pairs
            .iter()
            .flat_map(|pr| pr.a.iter().flat_map(move |&a| pr.b.iter().map(move |&b| (a, b))))
            .collect();
        covered.sort_unstable();
        assert_eq!(covered, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn incomparable_pair_yields_nothing() {
        let pts = [p(0.0, 0.0, 0.0), p(-1.0, 1.0, 1.0)];
        assert!(build_cspd(&pts, ConeId::new(true, true)).pairs.is_empty());
        assert_eq!(build_cspd(&pts, ConeId::new(false, true)).pairs.len(), 1);
    }

    #[test]
    fn corrupted_pair_is_reported() {
        let pts = [p(0.0, 0.0, 0.0), p(1.0, 1.0, 1.0), p(2.0, 2.0, 2.0)];
        let cone = ConeId::new(true, true);
        let cspd = Cspd {
            cone,
            pairs: vec![CspdPair { cone, a: vec![0, 2], b: vec![1], apex: pts[1] }],
            size_sum: 3,
        };
        let cert = certify_cspd(&pts, cone, &cspd);
        assert!(cert.violations.contains(&CspdViolation::NotInCone { pair: 0, a: 2, b: 1 }));
    }

    #[test]
    fn empty_decomposition_misses_coverage() {
        let pts = [p(0.0, 0.0, 0.0), p(1.0, 1.0, 1.0)];
        let cone = ConeId::new(true, true);
        let cspd = Cspd { cone, pairs: vec![], size_sum: 0 };
        let cert = certify_cspd(&pts, cone, &cspd);
        assert_eq!(cert.violations, vec![CspdViolation::Coverage { p: 0, q: 1, count: 0 }]);
    }

    #[test]
    fn axis_order_breaks_ties() {
        let a = p(1.0, 0.0, 0.0);
        let b = p(1.0, 0.0, 2.0);
        assert_eq!(axis_order(Axis::X, a, b), Ordering::Less);
        assert_eq!(axis_order(Axis::X, a, a), Ordering::Equal);
    }
}
