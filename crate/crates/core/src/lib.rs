//! Geodesic spanners for points in 3-space amid disjoint axis-parallel box
//! obstacles.
//!
//! Distances are L1 geodesic distances: the length of a shortest path that
//! avoids the open interiors of the boxes, measured in the Manhattan norm.
//! [`spanner::build_spanner`] connects the points with a graph whose
//! shortest paths are at most 8 times longer than the geodesic distance,
//! using `O(n log^3 n)` edges. Since `L1 / sqrt(3) <= L2 <= L1`, the same
//! graph stretches Euclidean geodesic distances by at most `8 sqrt(3)`.
//!
//! ```
//! use geodesic_spanner::prelude::*;
//!
//! let env = random_instance(&GenConfig::new(7, 30, 4)).unwrap();
//! let graph = build_spanner(&env).unwrap();
//! let report = spanning_ratio(&env, &graph).unwrap();
//! assert!(report.max_ratio <= 8.0 + 1e-6);
//! ```
//!
//! Modules:
//! - [`geometry`]: points, boxes, norms, validation.
//! - [`geodesic`]: geodesic distances, witness paths, and an independent
//!   fine-lattice oracle.
//! - [`cspd`]: cone-separated pair decompositions and their certifier.
//! - [`spanner`]: the construction.
//! - [`verify`]: stretch measurement and the supporting inequalities.
//! - [`gen`]: seeded random and adversarial instances.
//! - [`io`] and [`cli`]: JSON files and the `geospanner` command.

pub mod cli;
pub mod cspd;
pub mod error;
pub mod gen;
pub mod geodesic;
pub mod geometry;
pub mod io;
pub mod spanner;
pub mod verify;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::cspd::{build_cspd, certify_cspd, classify, ConeId, Cspd, CspdPair};
    pub use crate::error::{Error, Result};
    pub use crate::gen::{lemma1_instance, random_instance, GenConfig, Lemma1Config, Placement};
    pub use crate::geodesic::{
        geodesic_distance, oracle_fine_grid_distance, pairwise_geodesics, GeodesicField, TrackGraph,
    };
    pub use crate::geometry::{
        bounding_box, l1_distance, l2_distance, project_out, validate_environment, AxisBox,
        Environment, Point3,
    };
    pub use crate::spanner::{build_spanner, build_spanner_detailed, SpannerGraph};
    pub use crate::verify::{lemma2_check, spanning_ratio, StretchReport};
}
