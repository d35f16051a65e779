//! Hanan-style grid shared by the track graph and the per-source fields.
//!
//! Cut coordinates always include every obstacle face, so each open cell
//! lies either fully inside one obstacle or fully outside all of them and
//! every blocking decision reduces to index-range comparisons.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Axis, Point3};

const BLOCK_X: u8 = 1;
const BLOCK_Y: u8 = 2;
const BLOCK_Z: u8 = 4;
const INTERIOR: u8 = 8;

const BLOCK: [u8; 3] = [BLOCK_X, BLOCK_Y, BLOCK_Z];

pub(crate) const NO_NODE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct Grid {
    cuts: [Vec<f64>; 3],
    strides: [usize; 3],
    /// Per node: interior flag plus, per axis, whether the link to the next
    /// node along that axis is blocked.
    flags: Vec<u8>,
}

pub(crate) fn sorted_cuts(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| a == b);
    values
}

impl Grid {
    /// Builds the grid on the obstacle faces plus `extra` coordinates per
    /// axis.
    pub fn new(obstacles: &[AxisBox], extra: [Vec<f64>; 3], node_cap: u64) -> Result<Self> {
        let cuts = {
            let [ex, ey, ez] = extra;
            let mut out = [ex, ey, ez];
            for axis in Axis::ALL {
                let v = &mut out[axis.index()];
                for ob in obstacles {
                    v.push(ob.lo(axis));
                    v.push(ob.hi(axis));
                }
                *v = sorted_cuts(std::mem::take(v));
            }
            out
        };
        let dims = [cuts[0].len(), cuts[1].len(), cuts[2].len()];
        let nodes = dims.iter().map(|&d| d as u64).product::<u64>();
        if nodes > node_cap || nodes >= u64::from(NO_NODE) {
            return Err(Error::NodeCap { nodes, cap: node_cap });
        }
        if nodes == 0 {
            return Err(Error::Precondition("grid has no cut coordinates".into()));
        }
        let strides = [dims[1] * dims[2], dims[2], 1];
        let mut grid = Grid { cuts, strides, flags: vec![0; nodes as usize] };
        for ob in obstacles {
            grid.mark_obstacle(ob);
        }
        Ok(grid)
    }

    fn mark_obstacle(&mut self, ob: &AxisBox) {
        let mut lo = [0usize; 3];
        let mut hi = [0usize; 3];
        for axis in Axis::ALL {
            let a = axis.index();
            lo[a] = self.locate(axis, ob.lo(axis)).expect("obstacle face is a cut");
            hi[a] = self.locate(axis, ob.hi(axis)).expect("obstacle face is a cut");
        }
        // Interior nodes sit strictly between the face cuts on all axes. A
        // link along axis `a` is blocked when it runs strictly inside on the
        // other two axes and overlaps the open range on `a`.
        for ix in lo[0]..=hi[0] {
            for iy in lo[1]..=hi[1] {
                for iz in lo[2]..=hi[2] {
                    let idx = [ix, iy, iz];
                    let strict = |a: usize| lo[a] < idx[a] && idx[a] < hi[a];
                    let mut f = 0u8;
                    if strict(0) && strict(1) && strict(2) {
                        f |= INTERIOR;
                    }
                    for a in 0..3 {
                        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
                        if idx[a] < hi[a] && strict(b) && strict(c) {
                            f |= BLOCK[a];
                        }
                    }
                    if f != 0 {
                        let id = self.id(idx);
                        self.flags[id] |= f;
                    }
                }
            }
        }
    }

    pub fn cuts(&self, axis: Axis) -> &[f64] {
        &self.cuts[axis.index()]
    }

    #[cfg(test)]
    pub fn dims(&self) -> [usize; 3] {
        [self.cuts[0].len(), self.cuts[1].len(), self.cuts[2].len()]
    }

    pub fn node_count(&self) -> usize {
        self.flags.len()
    }

    /// Exact index of `value` among the cuts of `axis`.
    pub fn locate(&self, axis: Axis, value: f64) -> Option<usize> {
        let cuts = self.cuts(axis);
        let i = cuts.partition_point(|&c| c < value);
        (i < cuts.len() && cuts[i] == value).then_some(i)
    }

    pub fn id(&self, idx: [usize; 3]) -> usize {
        idx[0] * self.strides[0] + idx[1] * self.strides[1] + idx[2]
    }

    pub fn index_of(&self, id: usize) -> [usize; 3] {
        let ix = id / self.strides[0];
        let rest = id % self.strides[0];
        [ix, rest / self.strides[1], rest % self.strides[1]]
    }

    pub fn point(&self, id: usize) -> Point3 {
        let [ix, iy, iz] = self.index_of(id);
        Point3::new(self.cuts[0][ix], self.cuts[1][iy], self.cuts[2][iz])
    }

    pub fn node_at(&self, p: Point3) -> Option<usize> {
        let ix = self.locate(Axis::X, p.x)?;
        let iy = self.locate(Axis::Y, p.y)?;
        let iz = self.locate(Axis::Z, p.z)?;
        Some(self.id([ix, iy, iz]))
    }

    pub fn is_free(&self, id: usize) -> bool {
        self.flags[id] & INTERIOR == 0
    }

    /// Whether the link from `id` to its successor along `axis` exists.
    pub fn has_forward_link(&self, id: usize, axis: Axis) -> bool {
        let a = axis.index();
        let idx = self.index_of(id);
        idx[a] + 1 < self.cuts[a].len() && self.flags[id] & BLOCK[a] == 0
    }

    pub fn link_count(&self) -> usize {
        (0..self.node_count())
            .map(|id| Axis::ALL.iter().filter(|&&a| self.has_forward_link(id, a)).count())
            .sum()
    }

    #[inline]
    fn for_each_neighbor(&self, id: usize, mut f: impl FnMut(usize, f64)) {
        let idx = self.index_of(id);
        for a in 0..3 {
            let i = idx[a];
            let cuts = &self.cuts[a];
            let stride = self.strides[a];
            if i + 1 < cuts.len() && self.flags[id] & BLOCK[a] == 0 {
                f(id + stride, cuts[i + 1] - cuts[i]);
            }
            if i > 0 && self.flags[id - stride] & BLOCK[a] == 0 {
                f(id - stride, cuts[i] - cuts[i - 1]);
            }
        }
    }

    /// Single-source shortest paths. When `targets` is given the search
    /// stops as soon as all of them are settled.
    pub fn shortest_paths(&self, source: usize, targets: Option<&[usize]>, with_pred: bool) -> Search {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = if with_pred { vec![NO_NODE; n] } else { Vec::new() };
        let mut pending = targets.map(|t| {
            let mut mark = vec![false; n];
            let mut count = 0usize;
            for &id in t {
                if !mark[id] {
                    mark[id] = true;
                    count += 1;
                }
            }
            (mark, count)
        });
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(HeapEntry { dist: 0.0, node: source as u32 });
        while let Some(HeapEntry { dist: d, node }) = heap.pop() {
            let u = node as usize;
            if d > dist[u] {
                continue;
            }
            if let Some((mark, count)) = pending.as_mut() {
                if mark[u] {
                    mark[u] = false;
                    *count -= 1;
                    if *count == 0 {
                        break;
                    }
                }
            }
            self.for_each_neighbor(u, |v, w| {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    if with_pred {
                        pred[v] = node;
                    }
                    heap.push(HeapEntry { dist: nd, node: v as u32 });
                }
            });
        }
        Search { dist, pred }
    }
}

pub(crate) struct Search {
    pub dist: Vec<f64>,
    pub pred: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct HeapEntry {
    pub dist: f64,
    pub node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
