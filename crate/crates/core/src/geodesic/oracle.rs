//! Fine uniform lattice used as an independent check on the track graph.
//!
//! The lattice ignores obstacle faces entirely: its coordinates are the
//! multiples of the resolution from a fixed origin, plus the coordinates of
//! the query points so that they are lattice nodes. Every lattice path is a
//! real obstacle-avoiding path, so the result never undercuts the true
//! geodesic distance, and halving a dyadic resolution only adds nodes.
//!
//! Path lengths are accumulated exactly in fixed point: every coordinate is
//! an integer multiple of a common power of two, so lattice distances are
//! exact integers and the reported value is their correctly rounded `f64`.
//! Results therefore do not depend on summation order.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Environment, Point3};

use super::track::DEFAULT_NODE_CAP;

/// Shortest-path distance between `p` and `q` on the fine lattice.
pub fn oracle_fine_grid_distance(
    env: &Environment,
    p: Point3,
    q: Point3,
    resolution: f64,
) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    let d = oracle_fine_grid_distances(env.obstacles(), &[p, q], 0, resolution, DEFAULT_NODE_CAP)?;
    Ok(d[1])
}

/// Lattice distances from `terminals[source]` to every terminal. The
/// lattice spans the bounding box of obstacles and terminals, padded by the
/// largest obstacle extent.
pub fn oracle_fine_grid_distances(
    obstacles: &[AxisBox],
    terminals: &[Point3],
    source: usize,
    resolution: f64,
    node_cap: u64,
) -> Result<Vec<f64>> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::Precondition(format!("bad resolution {resolution}")));
    }
    if source >= terminals.len() {
        return Err(Error::Precondition("source index out of range".into()));
    }
    let lattice = Lattice::new(obstacles, terminals, resolution, node_cap)?;
    let dist = lattice.distances(lattice.node_of(terminals[source]));
    let unit = power_of_two(lattice.scale);
    Ok(terminals
        .iter()
        .map(|&t| match dist[lattice.node_of(t)] {
            UNREACHED => f64::INFINITY,
            d => d as f64 * unit,
        })
        .collect())
}

struct Lattice<'a> {
    obstacles: &'a [AxisBox],
    coords: [Vec<f64>; 3],
    /// `coords` divided by `2^scale`, exactly.
    fixed: [Vec<i128>; 3],
    scale: i32,
    free: Vec<bool>,
}

/// `(m, e)` with `x = m * 2^e` and `m` odd, or `None` for zero.
fn dyadic_parts(x: f64) -> Option<(i128, i32)> {
    if x == 0.0 {
        return None;
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if biased == 0 { (frac, -1074) } else { (frac | (1u64 << 52), biased - 1075) };
    let tz = mant.trailing_zeros();
    let m = (mant >> tz) as i128;
    Some((if x < 0.0 { -m } else { m }, exp + tz as i32))
}

fn power_of_two(e: i32) -> f64 {
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// Converts lattice coordinates to integers over a shared power of two.
fn fixed_point(coords: &[Vec<f64>; 3], nodes: usize) -> Result<([Vec<i128>; 3], i32)> {
    let parts: Vec<(i128, i32)> = coords.iter().flatten().filter_map(|&x| dyadic_parts(x)).collect();
    let scale = parts.iter().map(|&(_, e)| e).min().unwrap_or(0);
    let top = parts.iter().map(|&(m, e)| 128 - m.unsigned_abs().leading_zeros() as i32 + e - scale).max().unwrap_or(0);
    // Path sums stay below 2^126: one bit for differences, the rest for
    // the number of links on a path.
    let headroom = 126 - 1 - (usize::BITS - nodes.leading_zeros()) as i32;
    if top > headroom || !(-1022..=1023).contains(&scale) {
        return Err(Error::Precondition("coordinates too spread out for exact lattice distances".into()));
    }
    let convert = |v: &Vec<f64>| {
        v.iter()
            .map(|&x| dyadic_parts(x).map_or(0, |(m, e)| m << (e - scale)))
            .collect::<Vec<i128>>()
    };
    Ok(([convert(&coords[0]), convert(&coords[1]), convert(&coords[2])], scale))
}

impl<'a> Lattice<'a> {
    fn new(obstacles: &'a [AxisBox], terminals: &[Point3], h: f64, cap: u64) -> Result<Self> {
        let pad = obstacles
            .iter()
            .flat_map(|o| [o.hi.x - o.lo.x, o.hi.y - o.lo.y, o.hi.z - o.lo.z])
            .fold(0.0, f64::max);
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        let corners = obstacles.iter().flat_map(|o| [o.lo, o.hi]).chain(terminals.iter().copied());
        for c in corners {
            for (k, v) in c.to_array().into_iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        let mut coords: [Vec<f64>; 3] = Default::default();
        let mut total: u64 = 1;
        for k in 0..3 {
            let (a, b) = (lo[k] - pad, hi[k] + pad);
            let steps = ((b - a) / h).floor() as u64;
            total = total.saturating_mul(steps + 2 + terminals.len() as u64);
            if total > cap {
                return Err(Error::NodeCap { nodes: total, cap });
            }
            let mut v: Vec<f64> = (0..=steps).map(|i| a + i as f64 * h).filter(|&x| x <= b).collect();
            v.push(b);
            v.extend(terminals.iter().map(|t| t.to_array()[k]));
            v.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
            v.dedup();
            coords[k] = v;
        }
        let n = coords.iter().map(Vec::len).product::<usize>();
        let (fixed, scale) = fixed_point(&coords, n)?;
        let mut free = vec![true; n];
        let mut lat = Lattice { obstacles, coords, fixed, scale, free: Vec::new() };
        for (id, f) in free.iter_mut().enumerate() {
            let p = lat.point(id);
            *f = !obstacles.iter().any(|o| {
                o.lo.x < p.x && p.x < o.hi.x && o.lo.y < p.y && p.y < o.hi.y && o.lo.z < p.z && p.z < o.hi.z
            });
        }
        lat.free = free;
        Ok(lat)
    }

    fn dims(&self) -> [usize; 3] {
        [self.coords[0].len(), self.coords[1].len(), self.coords[2].len()]
    }

    fn split(&self, id: usize) -> [usize; 3] {
        let [_, ny, nz] = self.dims();
        [id / (ny * nz), (id / nz) % ny, id % nz]
    }

    fn join(&self, i: [usize; 3]) -> usize {
        let [_, ny, nz] = self.dims();
        (i[0] * ny + i[1]) * nz + i[2]
    }

    fn point(&self, id: usize) -> Point3 {
        let i = self.split(id);
        Point3::new(self.coords[0][i[0]], self.coords[1][i[1]], self.coords[2][i[2]])
    }

    fn node_of(&self, p: Point3) -> usize {
        let arr = p.to_array();
        let mut idx = [0; 3];
        for k in 0..3 {
            idx[k] = self.coords[k].iter().position(|&c| c == arr[k]).expect("terminal on lattice");
        }
        self.join(idx)
    }

    /// Whether the open segment between two lattice neighbors crosses an
    /// obstacle interior.
    fn segment_blocked(&self, a: Point3, b: Point3) -> bool {
        self.obstacles.iter().any(|o| {
            let lo = o.lo.to_array();
            let hi = o.hi.to_array();
            let (pa, pb) = (a.to_array(), b.to_array());
            (0..3).all(|k| {
                let (s, t) = if pa[k] <= pb[k] { (pa[k], pb[k]) } else { (pb[k], pa[k]) };
                if s == t {
                    lo[k] < s && s < hi[k]
                } else {
                    s < hi[k] && t > lo[k]
                }
            })
        })
    }

    fn distances(&self, source: usize) -> Vec<i128> {
        let dims = self.dims();
        let n = self.free.len();
        let mut dist = vec![UNREACHED; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0;
        heap.push(Entry(0, source));
        while let Some(Entry(d, u)) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            let iu = self.split(u);
            let pu = self.point(u);
            for k in 0..3 {
                for forward in [false, true] {
                    let mut iv = iu;
                    if forward {
                        if iv[k] + 1 >= dims[k] {
                            continue;
                        }
                        iv[k] += 1;
                    } else {
                        if iv[k] == 0 {
                            continue;
                        }
                        iv[k] -= 1;
                    }
                    let v = self.join(iv);
                    if !self.free[v] || done[v] {
                        continue;
                    }
                    let pv = self.point(v);
                    if self.segment_blocked(pu, pv) {
                        continue;
                    }
                    let nd = d + (self.fixed[k][iv[k]] - self.fixed[k][iu[k]]).abs();
                    if nd < dist[v] {
                        dist[v] = nd;
                        heap.push(Entry(nd, v));
                    }
                }
            }
        }
        dist
    }
}

const UNREACHED: i128 = i128::MAX;

struct Entry(i128, usize);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}
