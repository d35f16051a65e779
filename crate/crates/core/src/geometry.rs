//! Points, axis-parallel boxes, norms and the environment of obstacles.
//!
//! Obstacles block only their open interiors: a point on a face, edge or
//! corner of a box is free, and paths may slide along box surfaces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used by validation margins and verification slack. Never used
/// by combinatorial decisions.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn coord(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn with_coord(mut self, axis: Axis, value: f64) -> Self {
        match axis {
            Axis::X => self.x = value,
            Axis::Y => self.y = value,
            Axis::Z => self.z = value,
        }
        self
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        p.to_array()
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn l1_distance(p: Point3, q: Point3) -> f64 {
    (p.x - q.x).abs() + (p.y - q.y).abs() + (p.z - q.z).abs()
}

pub fn l2_distance(p: Point3, q: Point3) -> f64 {
    let (dx, dy, dz) = (p.x - q.x, p.y - q.y, p.z - q.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Closed,
    Open,
}

/// An axis-parallel box given by its componentwise minimum and maximum
/// corners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    pub lo: Point3,
    pub hi: Point3,
}

impl AxisBox {
    /// Builds a box from two corners, which must already be ordered.
    pub fn new(lo: Point3, hi: Point3) -> Self {
        debug_assert!(lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z);
        Self { lo, hi }
    }

    pub fn from_bounds(lo: [f64; 3], hi: [f64; 3]) -> Self {
        Self::new(lo.into(), hi.into())
    }

    pub fn lo(&self, axis: Axis) -> f64 {
        self.lo.coord(axis)
    }

    pub fn hi(&self, axis: Axis) -> f64 {
        self.hi.coord(axis)
    }

    pub fn extent(&self, axis: Axis) -> f64 {
        self.hi(axis) - self.lo(axis)
    }

    pub fn contains(&self, pt: Point3, mode: Containment) -> bool {
        Axis::ALL.iter().all(|&a| {
            let v = pt.coord(a);
            match mode {
                Containment::Closed => self.lo(a) <= v && v <= self.hi(a),
                Containment::Open => self.lo(a) < v && v < self.hi(a),
            }
        })
    }

    pub fn contains_open(&self, pt: Point3) -> bool {
        self.contains(pt, Containment::Open)
    }

    /// Whether the two closed boxes come within `margin` of each other on
    /// every axis.
    pub fn touches(&self, other: &AxisBox, margin: f64) -> bool {
        Axis::ALL.iter().all(|&a| {
            self.lo(a) <= other.hi(a) + margin && other.lo(a) <= self.hi(a) + margin
        })
    }

    pub fn is_proper(&self) -> bool {
        Axis::ALL.iter().all(|&a| self.extent(a) > 0.0)
    }

    /// Smallest box containing both boxes.
    pub fn union(&self, other: &AxisBox) -> AxisBox {
        AxisBox {
            lo: Point3::new(
                self.lo.x.min(other.lo.x),
                self.lo.y.min(other.lo.y),
                self.lo.z.min(other.lo.z),
            ),
            hi: Point3::new(
                self.hi.x.max(other.hi.x),
                self.hi.y.max(other.hi.y),
                self.hi.z.max(other.hi.z),
            ),
        }
    }
}

/// The box B(p, q) spanned by `p` and `q` as opposite corners.
pub fn bounding_box(p: Point3, q: Point3) -> AxisBox {
    AxisBox {
        lo: Point3::new(p.x.min(q.x), p.y.min(q.y), p.z.min(q.z)),
        hi: Point3::new(p.x.max(q.x), p.y.max(q.y), p.z.max(q.z)),
    }
}

pub fn contains(bx: &AxisBox, pt: Point3, mode: Containment) -> bool {
    bx.contains(pt, mode)
}

/// The obstacle whose open interior contains `pt`, if any.
pub fn containing_obstacle(obstacles: &[AxisBox], pt: Point3) -> Option<usize> {
    obstacles.iter().position(|o| o.contains_open(pt))
}

/// Order of the six exit points returned by [`project_out`].
pub const EXIT_DIRECTIONS: [(Axis, bool); 6] = [
    (Axis::X, true),
    (Axis::X, false),
    (Axis::Y, true),
    (Axis::Y, false),
    (Axis::Z, true),
    (Axis::Z, false),
];

/// Pushes `o` out of the obstacle containing it along each of the six axis
/// directions: `[x+, x-, y+, y-, z+, z-]`. When `o` is interior to no
/// obstacle, all six are `o` itself.
pub fn project_out(o: Point3, obstacles: &[AxisBox]) -> [Point3; 6] {
    let Some(k) = containing_obstacle(obstacles, o) else {
        return [o; 6];
    };
    let ob = &obstacles[k];
    EXIT_DIRECTIONS.map(|(axis, positive)| {
        let face = if positive { ob.hi(axis) } else { ob.lo(axis) };
        o.with_coord(axis, face)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonFinitePoint { point: usize },
    NonFiniteObstacle { obstacle: usize },
    DegenerateObstacle { obstacle: usize },
    ObstaclesTouch { first: usize, second: usize },
    PointInsideObstacle { point: usize, obstacle: usize },
    DuplicatePoints { first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NonFinitePoint { point } => write!(f, "point {point} is not finite"),
            Violation::NonFiniteObstacle { obstacle } => {
                write!(f, "obstacle {obstacle} is not finite")
            }
            Violation::DegenerateObstacle { obstacle } => {
                write!(f, "obstacle {obstacle} has zero or negative extent")
            }
            Violation::ObstaclesTouch { first, second } => {
                write!(f, "obstacles {first} and {second} touch")
            }
            Violation::PointInsideObstacle { point, obstacle } => {
                write!(f, "point {point} inside obstacle {obstacle}")
            }
            Violation::DuplicatePoints { first, second } => {
                write!(f, "points {first} and {second} coincide")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A point set `P` amid box obstacles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    points: Vec<Point3>,
    obstacles: Vec<AxisBox>,
}

impl Environment {
    /// Builds a validated environment.
    pub fn new(points: Vec<Point3>, obstacles: Vec<AxisBox>) -> Result<Self> {
        let env = Self::new_unchecked(points, obstacles);
        let report = validate_environment(&env);
        if report.is_valid() {
            Ok(env)
        } else {
            Err(Error::InvalidEnvironment(report))
        }
    }

    /// Builds an environment without checking its invariants. Pair with
    /// [`validate_environment`].
    pub fn new_unchecked(points: Vec<Point3>, obstacles: Vec<AxisBox>) -> Self {
        Self { points, obstacles }
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn obstacles(&self) -> &[AxisBox] {
        &self.obstacles
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> Point3 {
        self.points[i]
    }

    /// Whether `pt` avoids every obstacle's open interior.
    pub fn is_free(&self, pt: Point3) -> bool {
        containing_obstacle(&self.obstacles, pt).is_none()
    }

    /// Bounding box of all points and obstacles, or `None` if both are empty.
    pub fn extent(&self) -> Option<AxisBox> {
        let boxes = self
            .points
            .iter()
            .map(|&p| AxisBox { lo: p, hi: p })
            .chain(self.obstacles.iter().copied());
        boxes.reduce(|a, b| a.union(&b))
    }
}

/// Lists every violated environment invariant; an empty report means valid.
pub fn validate_environment(env: &Environment) -> ValidationReport {
    let mut violations = Vec::new();
    let obstacles = env.obstacles();
    let points = env.points();

    for (i, ob) in obstacles.iter().enumerate() {
        if !(ob.lo.is_finite() && ob.hi.is_finite()) {
            violations.push(Violation::NonFiniteObstacle { obstacle: i });
        } else if !ob.is_proper() {
            violations.push(Violation::DegenerateObstacle { obstacle: i });
        }
    }
    for i in 0..obstacles.len() {
        for j in i + 1..obstacles.len() {
            if obstacles[i].touches(&obstacles[j], EPS_GEOM) {
                violations.push(Violation::ObstaclesTouch { first: i, second: j });
            }
        }
    }
    for (i, &p) in points.iter().enumerate() {
        if !p.is_finite() {
            violations.push(Violation::NonFinitePoint { point: i });
            continue;
        }
        if let Some(k) = containing_obstacle(obstacles, p) {
            violations.push(Violation::PointInsideObstacle { point: i, obstacle: k });
        }
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (points[a], points[b]);
        pa.x.total_cmp(&pb.x)
            .then(pa.y.total_cmp(&pb.y))
            .then(pa.z.total_cmp(&pb.z))
            .then(a.cmp(&b))
    });
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            violations.push(Violation::DuplicatePoints { first: w[0], second: w[1] });
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube() -> AxisBox {
        AxisBox::from_bounds([0.0; 3], [1.0; 3])
    }

    #[test]
    fn norms() {
        let o = Point3::new(0.0, 0.0, 0.0);
        assert_eq!(l1_distance(o, Point3::new(1.0, 2.0, 3.0)), 6.0);
        let a = Point3::new(0.3, -2.0, 7.5);
        assert_eq!(l1_distance(a, a), 0.0);
        let d = Point3::new(1.0, 1.0, 1.0);
        assert_eq!(l1_distance(o, d), 3.0);
        assert!((l2_distance(o, d) - 3f64.sqrt()).abs() < 1e-15);
        assert!(l1_distance(o, d) <= 3f64.sqrt() * l2_distance(o, d) + 1e-12);
        assert_eq!(l2_distance(o, Point3::new(3.0, 4.0, 0.0)), 5.0);
    }

    #[test]
    fn bounding_box_is_componentwise() {
        let b = bounding_box(Point3::new(1.0, 0.0, 2.0), Point3::new(0.0, 3.0, 1.0));
        assert_eq!(b, AxisBox::from_bounds([0.0, 0.0, 1.0], [1.0, 3.0, 2.0]));
        let p = Point3::new(0.5, 0.5, 0.5);
        let b = bounding_box(p, p);
        assert_eq!(b.lo, p);
        assert_eq!(b.hi, p);
        assert_eq!(
            bounding_box(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 1.0, 1.0)),
            unit_cube()
        );
    }

    #[test]
    fn containment_modes() {
        let c = unit_cube();
        let origin = Point3::new(0.0, 0.0, 0.0);
        assert!(contains(&c, origin, Containment::Closed));
        assert!(!contains(&c, origin, Containment::Open));
        assert!(!contains(&c, Point3::new(2.0, 0.0, 0.0), Containment::Closed));
    }

    #[test]
    fn project_out_interior_point() {
        let obs = [unit_cube()];
        let out = project_out(Point3::new(0.5, 0.5, 0.5), &obs);
        assert_eq!(
            out,
            [
                Point3::new(1.0, 0.5, 0.5),
                Point3::new(0.0, 0.5, 0.5),
                Point3::new(0.5, 1.0, 0.5),
                Point3::new(0.5, 0.0, 0.5),
                Point3::new(0.5, 0.5, 1.0),
                Point3::new(0.5, 0.5, 0.0),
            ]
        );
    }

    #[test]
    fn project_out_free_or_boundary_point() {
        let obs = [unit_cube()];
        let far = Point3::new(5.0, 5.0, 5.0);
        assert_eq!(project_out(far, &obs), [far; 6]);
        let face = Point3::new(1.0, 0.5, 0.5);
        assert_eq!(project_out(face, &obs), [face; 6]);
    }

    #[test]
    fn validation_reports_each_violation() {
        let a = unit_cube();
        let b = AxisBox::from_bounds([1.0, 0.0, 0.0], [2.0, 1.0, 1.0]);
        let env = Environment::new_unchecked(vec![Point3::new(5.0, 5.0, 5.0)], vec![a, b]);
        assert_eq!(
            validate_environment(&env).violations,
            vec![Violation::ObstaclesTouch { first: 0, second: 1 }]
        );

        let env = Environment::new_unchecked(vec![Point3::new(0.5, 0.5, 0.5)], vec![a]);
        assert_eq!(
            validate_environment(&env).violations,
            vec![Violation::PointInsideObstacle { point: 0, obstacle: 0 }]
        );

        let flat = AxisBox::from_bounds([3.0, 0.0, 0.0], [3.0, 1.0, 1.0]);
        let p = Point3::new(-1.0, 0.0, 0.0);
        let env = Environment::new_unchecked(vec![p, p], vec![flat]);
        let v = validate_environment(&env).violations;
        assert!(v.contains(&Violation::DegenerateObstacle { obstacle: 0 }));
        assert!(v.contains(&Violation::DuplicatePoints { first: 0, second: 1 }));

        let env = Environment::new(
            vec![Point3::new(1.0, 0.5, 0.5), Point3::new(3.0, 3.0, 3.0)],
            vec![a],
        );
        assert!(env.is_ok());
    }

    #[test]
    fn nearly_touching_obstacles_are_rejected() {
        let a = unit_cube();
        let b = AxisBox::from_bounds([1.0 + 1e-12, 0.0, 0.0], [2.0, 1.0, 1.0]);
        assert!(a.touches(&b, EPS_GEOM));
        let c = AxisBox::from_bounds([1.1, 0.0, 0.0], [2.0, 1.0, 1.0]);
        assert!(!a.touches(&c, EPS_GEOM));
    }
}
