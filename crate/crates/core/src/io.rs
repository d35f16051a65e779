//! JSON interchange: instance files, graph files and reports.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Environment, Point3};
use crate::spanner::SpannerGraph;

pub const GRAPH_METRIC: &str = "L1-geodesic";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub points: Vec<[f64; 3]>,
    pub obstacles: Vec<ObstacleRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObstacleRecord {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl InstanceFile {
    pub fn from_env(env: &Environment) -> Self {
        Self {
            points: env.points().iter().map(|p| p.to_array()).collect(),
            obstacles: env
                .obstacles()
                .iter()
                .map(|o| ObstacleRecord { lo: o.lo.to_array(), hi: o.hi.to_array() })
                .collect(),
        }
    }

    /// Converts to a validated environment.
    pub fn into_env(self) -> Result<Environment> {
        for o in &self.obstacles {
            if (0..3).any(|k| o.lo[k] > o.hi[k]) {
                return Err(Error::Precondition(format!(
                    "obstacle lo {:?} exceeds hi {:?}",
                    o.lo, o.hi
                )));
            }
        }
        let points = self.points.into_iter().map(Point3::from).collect();
        let obstacles = self.obstacles.into_iter().map(|o| AxisBox::from_bounds(o.lo, o.hi)).collect();
        Environment::new(points, obstacles)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub metric: String,
}

impl GraphFile {
    pub fn from_graph(g: &SpannerGraph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().iter().map(|e| (e.i, e.j, e.weight)).collect(),
            metric: GRAPH_METRIC.into(),
        }
    }

    pub fn into_graph(self) -> Result<SpannerGraph> {
        if self.metric != GRAPH_METRIC {
            return Err(Error::Precondition(format!("unsupported metric {:?}", self.metric)));
        }
        for &(i, j, w) in &self.edges {
            if !(i < j && j < self.n) {
                return Err(Error::Precondition(format!("edge ({i}, {j}) out of order or range")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Precondition(format!("edge ({i}, {j}) has weight {w}")));
            }
        }
        SpannerGraph::from_edges(self.n, self.edges)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Writes `value` as pretty JSON through a temporary file and a rename.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Precondition(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_instance(path: &Path) -> Result<Environment> {
    read_json::<InstanceFile>(path)?.into_env()
}

pub fn write_instance(path: &Path, env: &Environment) -> Result<()> {
    write_json_atomic(path, &InstanceFile::from_env(env))
}

pub fn read_graph(path: &Path) -> Result<SpannerGraph> {
    read_json::<GraphFile>(path)?.into_graph()
}

pub fn write_graph(path: &Path, g: &SpannerGraph) -> Result<()> {
    write_json_atomic(path, &GraphFile::from_graph(g))
}
