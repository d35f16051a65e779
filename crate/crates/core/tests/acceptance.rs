//! Acceptance suite. Runs every criterion, prints one line per criterion
//! and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use geodesic_spanner::cspd::{build_cspd, certify_cspd, ConeId};
use geodesic_spanner::gen::{mix_seed, random_instance, GenConfig, Lemma1Config, Placement, SeededRng};
use geodesic_spanner::geodesic::{geodesic_distance, oracle_fine_grid_distances, DEFAULT_NODE_CAP};
use geodesic_spanner::geometry::{l1_distance, l2_distance, AxisBox, Environment, Point3};
use geodesic_spanner::spanner::build_spanner_detailed;
use geodesic_spanner::verify::{
    lemma1_check, sample_lemma2, scaling_sweep, spanning_ratio, spanning_ratio_with, SweepConfig,
};

const STRETCH_LIMIT: f64 = 8.0 + 1e-6;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Criteria 1 and 7 share these runs.
struct StretchRun {
    n: usize,
    m: usize,
    l1: f64,
    l2_figure: f64,
}

fn stretch_runs() -> Vec<StretchRun> {
    let sizes = [25, 50, 100, 200];
    let obstacle_counts = [0, 5, 10, 20];
    (0..20u64)
        .map(|k| {
            let n = sizes[k as usize % 4];
            let m = obstacle_counts[(k as usize / 4 + k as usize) % 4];
            let placement = if k % 2 == 0 {
                Placement::Free
            } else {
                Placement::MixedWithBoundary { fraction: 0.3 }
            };
            let env = random_instance(&GenConfig { placement, ..GenConfig::new(1000 + k, n, m) })
                .expect("instance");
            let build = build_spanner_detailed(&env).expect("build");
            let report = spanning_ratio_with(&build.graph, &build.distances);
            StretchRun { n, m, l1: report.max_ratio, l2_figure: report.l2_bound }
        })
        .collect()
}

fn criterion1(runs: &[StretchRun]) -> Outcome {
    let worst = runs.iter().max_by(|a, b| a.l1.total_cmp(&b.l1)).unwrap();
    let mut combos: Vec<(usize, usize)> = runs.iter().map(|r| (r.n, r.m)).collect();
    combos.sort();
    combos.dedup();
    outcome(
        runs.len() == 20 && runs.iter().all(|r| r.l1 <= STRETCH_LIMIT),
        format!(
            "{} instances, {} (n, m) combinations, max L1 stretch {:.6} (n={}, m={}) <= 8 + 1e-6",
            runs.len(),
            combos.len(),
            worst.l1,
            worst.n,
            worst.m
        ),
    )
}

fn criterion2() -> Outcome {
    let table = scaling_sweep(&SweepConfig { sizes: vec![16, 32, 64, 128, 256, 512], trials: 3, seed: 2, m: 8 })
        .expect("sweep");
    let ratios = table.growth_ratios();
    let norms: Vec<String> = table.medians.iter().map(|m| format!("{}:{:.4}", m.n, m.normalized_edges)).collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    outcome(
        ratios.iter().all(|&r| r <= 2.0) && table.all_within_budget() && table.rows.len() == 18,
        format!(
            "edges/(n lg^3 n) medians [{}], max consecutive ratio {:.4} <= 2, edges <= 6 * pair sizes on {}/{} runs",
            norms.join(" "),
            worst,
            table.rows.iter().filter(|r| r.within_budget).count(),
            table.rows.len()
        ),
    )
}

fn criterion3() -> Outcome {
    let mut samples = 0;
    let mut passed = 0;
    let mut max_ratio: f64 = 0.0;
    for k in 0..20u64 {
        let placement = if k % 2 == 0 {
            Placement::Free
        } else {
            Placement::MixedWithBoundary { fraction: 0.5 }
        };
        let env = random_instance(&GenConfig { placement, ..GenConfig::new(3000 + k, 30, 5 + k as usize % 16) })
            .expect("instance");
        let s = sample_lemma2(&env, 50, 10, mix_seed(3, &[k])).expect("samples");
        samples += s.samples;
        passed += s.passed;
        max_ratio = max_ratio.max(s.max_ratio);
    }
    outcome(
        samples >= 10_000 && passed == samples && max_ratio <= 4.0 + 1e-6,
        format!("{passed}/{samples} triples over 20 environments, max (sigma(p,o)+sigma(o,q))/sigma(p,q) = {max_ratio:.6}"),
    )
}

fn point_set(seed: u64, n: usize, coarse: bool) -> Vec<Point3> {
    let mut rng = SeededRng::new(seed);
    (0..n)
        .map(|_| {
            let mut c = || {
                if coarse {
                    rng.below(7) as f64
                } else {
                    rng.uniform(-5.0, 5.0)
                }
            };
            Point3::new(c(), c(), c())
        })
        .collect()
}

fn criterion4() -> Outcome {
    let mut certified = 0;
    let mut failures = Vec::new();
    let mut covered = 0usize;
    for n in [10, 50, 200, 500] {
        for (variant, coarse) in [("continuous", false), ("duplicated", true)] {
            let mut points = point_set(mix_seed(4, &[n as u64, coarse as u64]), n, coarse);
            if coarse {
                // Exact duplicates of whole points as well as shared coordinates.
                points[n - 1] = points[0];
            }
            for cone in ConeId::ALL {
                let cspd = build_cspd(&points, cone);
                let cert = certify_cspd(&points, cone, &cspd);
                covered += cert.covered_pairs;
                if cert.is_ok() {
                    certified += 1;
                } else {
                    failures.push(format!("n={n} {variant} cone {}", cone.label()));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{certified}/32 decompositions certified ({covered} ordered pairs covered) {}", failures.join(", ")),
    )
}

fn criterion5() -> Outcome {
    let cfg = Lemma1Config { n: 10, eps: 0.1, s: 2.1, delta: 1e-3 };
    let r = lemma1_check(&cfg).expect("lower-bound instance");
    outcome(
        r.bracket_holds && r.exceeds_lower_bound,
        format!(
            "sigma in [{:.6}, {:.6}] within [2.1, {:.3}]; min stretch after one edge removal {:.6} > 1.9",
            r.min_geodesic,
            r.max_geodesic,
            cfg.s + cfg.eps + 4.0 * cfg.delta,
            r.min_removed_ratio
        ),
    )
}

fn compact_instance(seed: u64) -> Environment {
    random_instance(&GenConfig {
        region: AxisBox::from_bounds([0.0; 3], [2.0; 3]),
        min_side: 0.25,
        max_side: 0.6,
        gap: 0.25,
        placement: Placement::MixedWithBoundary { fraction: 0.3 },
        ..GenConfig::new(seed, 10, 1 + seed as usize % 5)
    })
    .expect("instance")
}

fn criterion6() -> Outcome {
    let resolutions = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0];
    let results: Vec<(f64, bool, usize)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..10u64)
            .map(|k| {
                scope.spawn(move || {
                    let env = compact_instance(6000 + k);
                    let mut worst: f64 = 0.0;
                    let mut monotone = true;
                    let mut pairs = 0;
                    for i in 0..env.n() {
                        let seq: Vec<Vec<f64>> = resolutions
                            .iter()
                            .map(|&h| {
                                oracle_fine_grid_distances(env.obstacles(), env.points(), i, h, DEFAULT_NODE_CAP)
                                    .expect("oracle")
                            })
                            .collect();
                        #[allow(clippy::needless_range_loop)]
                        for j in 0..env.n() {
                            if i == j {
                                continue;
                            }
                            let d = geodesic_distance(&env, env.point(i), env.point(j)).expect("engine");
                            worst = worst.max((d - seq[2][j]).abs());
                            monotone &= seq[1][j] <= seq[0][j] && seq[2][j] <= seq[1][j];
                            pairs += 1;
                        }
                    }
                    (worst, monotone, pairs)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let monotone = results.iter().all(|r| r.1);
    let pairs: usize = results.iter().map(|r| r.2).sum();
    outcome(
        worst <= 6.0 / 32.0 && monotone,
        format!("{pairs} ordered pairs on 10 instances, max |engine - oracle(1/32)| = {worst:.6} <= 0.1875, oracle non-increasing: {monotone}"),
    )
}

fn criterion7(runs: &[StretchRun]) -> Outcome {
    let mut rng = SeededRng::new(7);
    let root3 = 3f64.sqrt();
    let mut ok = 0;
    for _ in 0..10_000 {
        let scale = 10f64.powf(rng.uniform(-6.0, 6.0));
        let mut c = || scale * rng.uniform(-1.0, 1.0);
        let p = Point3::new(c(), c(), c());
        let q = Point3::new(c(), c(), c());
        let (l1, l2) = (l1_distance(p, q), l2_distance(p, q));
        let slack = 4.0 * f64::EPSILON * l1;
        if l1 / root3 <= l2 + slack && l2 <= l1 + slack {
            ok += 1;
        }
    }
    let figures_ok = runs
        .iter()
        .all(|r| r.l2_figure == root3 * r.l1 && r.l2_figure <= 8.0 * root3 + 2e-6);
    let max_figure = runs.iter().map(|r| r.l2_figure).fold(0.0, f64::max);
    outcome(
        ok == 10_000 && figures_ok,
        format!("norm sandwich {ok}/10000 pairs; analytic L2 figure = sqrt(3) x L1 stretch, max {max_figure:.6} <= {:.6}", 8.0 * root3 + 2e-6),
    )
}

fn criterion8() -> Outcome {
    let mut checked = 0;
    let mut ok = true;
    for seed in 0..20u64 {
        let env = random_instance(&GenConfig::new(8000 + seed, 2, seed as usize % 6)).expect("instance");
        let build = build_spanner_detailed(&env).expect("build");
        let g = &build.graph;
        let direct = g.edge_count() == 1 && g.edges()[0].i == 0 && g.edges()[0].j == 1;
        let exact_weight = g.weight(0, 1) == Some(build.distances.get(0, 1));
        let ratio = spanning_ratio(&env, g).expect("stretch").max_ratio;
        ok &= direct && exact_weight && ratio == 1.0;
        checked += 1;
    }
    let single = random_instance(&GenConfig::new(8100, 1, 3)).expect("instance");
    let single_edges = build_spanner_detailed(&single).expect("build").graph.edge_count();
    outcome(
        ok && single_edges == 0,
        format!("{checked} two-point instances give one edge with stretch exactly 1; one point gives {single_edges} edges"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let runs = stretch_runs();
    let runs_secs = start.elapsed().as_secs_f64();
    type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("1 stretch bound", Box::new(|| criterion1(&runs))),
        ("2 edge-count scaling", Box::new(criterion2)),
        ("3 detour inequality", Box::new(criterion3)),
        ("4 cone pair decomposition", Box::new(criterion4)),
        ("5 lower-bound instance", Box::new(criterion5)),
        ("6 engine vs fine lattice", Box::new(criterion6)),
        ("7 norm conversion", Box::new(|| criterion7(&runs))),
        ("8 trivial cases", Box::new(criterion8)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let mut o = run();
        if name.starts_with('1') {
            o.detail.push_str(&format!(" [builds {runs_secs:.1}s]"));
        }
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} ({:.1}s)",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of 8 criteria passed in {:.1}s", 8 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
