//! Seeded instance generation.
//!
//! Randomness comes from ChaCha8 seeded through `SeedableRng::seed_from_u64`
//! (rand_core 0.6). Uniform reals take the top 53 bits of `next_u64`
//! scaled by 2^-53 and mapped affinely onto the target interval; integers
//! below `k` take the high word of the 128-bit product `next_u64 * k`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{validate_environment, AxisBox, Axis, Environment, Point3};

pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, k: usize) -> usize {
        ((u128::from(self.next_u64()) * k as u128) >> 64) as usize
    }

    pub fn point_in(&mut self, region: &AxisBox) -> Point3 {
        Point3::new(
            self.uniform(region.lo.x, region.hi.x),
            self.uniform(region.lo.y, region.hi.y),
            self.uniform(region.lo.z, region.hi.z),
        )
    }
}

/// Derives a child seed from a base seed and a few integer labels.
pub fn mix_seed(base: u64, labels: &[u64]) -> u64 {
    // splitmix64 finalizer folded over the labels
    let mut h = base;
    for &l in labels {
        h = h.wrapping_add(l).wrapping_add(0x9e37_79b9_7f4a_7c15);
        h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h ^= h >> 31;
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Placement {
    Free,
    /// A fraction of the points is snapped onto obstacle faces.
    MixedWithBoundary { fraction: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub region: AxisBox,
    /// Range of obstacle side lengths.
    pub min_side: f64,
    pub max_side: f64,
    /// Minimum separation between any two obstacles.
    pub gap: f64,
    pub placement: Placement,
    pub max_attempts: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 50,
            m: 5,
            region: AxisBox::from_bounds([0.0; 3], [10.0; 3]),
            min_side: 0.5,
            max_side: 2.5,
            gap: 0.05,
            placement: Placement::Free,
            max_attempts: 10_000,
        }
    }
}

impl GenConfig {
    pub fn new(seed: u64, n: usize, m: usize) -> Self {
        Self { seed, n, m, ..Self::default() }
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Precondition(msg.to_string()));
        if self.gap.is_nan() || self.gap <= 0.0 {
            return bad("gap must be positive");
        }
        if !(self.min_side > 0.0 && self.min_side <= self.max_side) {
            return bad("obstacle sides must satisfy 0 < min_side <= max_side");
        }
        if Axis::ALL.iter().any(|&a| self.region.extent(a) < self.max_side) {
            return bad("region smaller than the largest obstacle");
        }
        if let Placement::MixedWithBoundary { fraction } = self.placement {
            if !(0.0..=1.0).contains(&fraction) {
                return bad("boundary fraction must lie in [0, 1]");
            }
        }
        Ok(())
    }
}

/// Random valid instance: `m` separated boxes by rejection sampling, then
/// `n` distinct free points.
pub fn random_instance(cfg: &GenConfig) -> Result<Environment> {
    cfg.check()?;
    let mut rng = SeededRng::new(cfg.seed);
    let region = cfg.region;

    let mut obstacles: Vec<AxisBox> = Vec::with_capacity(cfg.m);
    let mut attempts = 0;
    while obstacles.len() < cfg.m {
        attempts += 1;
        if attempts > cfg.max_attempts {
            return Err(Error::Generation(format!(
                "placed {} of {} obstacles before giving up",
                obstacles.len(),
                cfg.m
            )));
        }
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        for axis in Axis::ALL {
            let side = rng.uniform(cfg.min_side, cfg.max_side);
            let start = rng.uniform(region.lo(axis), region.hi(axis) - side);
            lo[axis.index()] = start;
            hi[axis.index()] = start + side;
        }
        let candidate = AxisBox::from_bounds(lo, hi);
        if obstacles.iter().all(|o| !o.touches(&candidate, cfg.gap)) {
            obstacles.push(candidate);
        }
    }

    let mut points: Vec<Point3> = Vec::with_capacity(cfg.n);
    let mut attempts = 0;
    while points.len() < cfg.n {
        attempts += 1;
        if attempts > cfg.max_attempts.max(100 * cfg.n) {
            return Err(Error::Generation(format!(
                "placed {} of {} points before giving up",
                points.len(),
                cfg.n
            )));
        }
        let snap = match cfg.placement {
            Placement::MixedWithBoundary { fraction } if !obstacles.is_empty() => rng.unit() < fraction,
            _ => false,
        };
        let p = if snap {
            let ob = obstacles[rng.below(obstacles.len())];
            let axis = Axis::ALL[rng.below(3)];
            let face = if rng.below(2) == 0 { ob.lo(axis) } else { ob.hi(axis) };
            rng.point_in(&ob).with_coord(axis, face)
        } else {
            rng.point_in(&region)
        };
        if obstacles.iter().any(|o| o.contains_open(p)) || points.contains(&p) {
            continue;
        }
        points.push(p);
    }

    let env = Environment::new_unchecked(points, obstacles);
    let report = validate_environment(&env);
    if !report.is_valid() {
        return Err(Error::InvalidEnvironment(report));
    }
    Ok(env)
}

/// Parameters of the collinear lower-bound configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Config {
    pub n: usize,
    pub eps: f64,
    /// Side length of the slabs in y and z.
    pub s: f64,
    /// Slab thickness along x.
    pub delta: f64,
}

impl Lemma1Config {
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Precondition(msg));
        if self.n < 2 {
            return bad(format!("need at least two points, got {}", self.n));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps must be positive, got {}", self.eps));
        }
        if self.delta.is_nan() || self.delta <= 0.0 {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if self.s.is_nan() || self.s <= 2.0 - self.eps * self.eps / 2.0 {
            return bad(format!("s = {} must exceed 2 - eps^2/2", self.s));
        }
        if self.delta >= self.spacing() {
            return bad(format!(
                "delta = {} does not fit between points spaced {}",
                self.delta,
                self.spacing()
            ));
        }
        Ok(())
    }

    /// Gap between consecutive points; the whole row spans less than `eps`.
    pub fn spacing(&self) -> f64 {
        self.eps / self.n as f64
    }
}

/// `n` points on the x-axis spanning less than `eps`, separated by thin
/// slabs of side `s` centered on the axis.
pub fn lemma1_instance(cfg: &Lemma1Config) -> Result<Environment> {
    cfg.check()?;
    let h = cfg.spacing();
    let half = cfg.s / 2.0;
    let points: Vec<Point3> = (0..cfg.n).map(|i| Point3::new(i as f64 * h, 0.0, 0.0)).collect();
    let obstacles = points
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0].x + w[1].x);
            AxisBox::from_bounds(
                [mid - cfg.delta / 2.0, -half, -half],
                [mid + cfg.delta / 2.0, half, half],
            )
        })
        .collect();
    Environment::new(points, obstacles)
}
