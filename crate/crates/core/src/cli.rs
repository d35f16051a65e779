//! The `geospanner` command line.
//!
//! Exit codes: 0 when every asserted bound holds, 1 on a bound violation,
//! 2 on usage, input or I/O errors. The thread count can be set through
//! `GEOSPANNER_THREADS`.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{lemma1_instance, random_instance, GenConfig, Lemma1Config, Placement};
use crate::geometry::validate_environment;
use crate::io::{read_graph, read_instance, write_atomic, write_graph, write_instance, write_json_atomic};
use crate::spanner::{build_spanner_detailed, ConeStats};
use crate::verify::{
    observation1_check, sample_lemma2, scaling_sweep, spanning_ratio, Lemma2Summary, StretchReport,
    SweepConfig, SweepTable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "GEOSPANNER_THREADS";

#[derive(Debug, Parser)]
#[command(name = "geospanner", version, about = "Geodesic spanners amid axis-parallel boxes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenMode {
    Random,
    Lemma1,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random or lower-bound instance.
    Generate(GenerateArgs),
    /// Build a spanner for an instance.
    Build(BuildArgs),
    /// Measure stretch and check the supporting inequalities.
    Verify(VerifyArgs),
    /// Edge-count and stretch sweep over instance sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "random")]
    pub mode: GenMode,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fraction of points snapped onto obstacle faces (random mode).
    #[arg(long)]
    pub boundary_fraction: Option<f64>,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 2.1, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, clap::Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub graph: PathBuf,
    /// Number of sampled detour triples.
    #[arg(long, default_value_t = 0)]
    pub lemma2_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub m: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub n: usize,
    pub m: usize,
    pub edges: usize,
    pub edge_budget: usize,
    pub pair_size_sum: usize,
    pub cones: Vec<ConeStats>,
    pub interior_apexes: usize,
    pub candidates: usize,
    pub emissions: usize,
    pub read_ms: f64,
    pub build_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub stretch: StretchReport,
    pub lemma2: Option<Lemma2Summary>,
    pub observation1: bool,
    /// `sqrt(3)` times the measured L1 stretch.
    pub l2_bound_analytic: f64,
    pub passed: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Build(a) => cmd_build(&a).map(|_| EXIT_OK),
        Command::Verify(a) => cmd_verify(&a).map(|r| if r.passed { EXIT_OK } else { EXIT_VIOLATION }),
        Command::Bench(a) => cmd_bench(&a).map(|t| {
            if t.all_within_bound() && t.all_within_budget() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            }
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Configures the global thread pool from `GEOSPANNER_THREADS`, if set.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<i32> {
    let env = match a.mode {
        GenMode::Random => {
            let placement = match a.boundary_fraction {
                Some(fraction) => Placement::MixedWithBoundary { fraction },
                None => Placement::Free,
            };
            random_instance(&GenConfig { placement, ..GenConfig::new(a.seed, a.n, a.m) })?
        }
        GenMode::Lemma1 => lemma1_instance(&Lemma1Config { n: a.n, eps: a.eps, s: a.s, delta: a.delta })?,
    };
    write_instance(&a.out, &env)?;
    let valid = validate_environment(&env).is_valid();
    println!("n={} m={} valid={valid} -> {}", env.n(), env.obstacles().len(), a.out.display());
    Ok(EXIT_OK)
}

pub fn cmd_build(a: &BuildArgs) -> Result<BuildReport> {
    let t0 = Instant::now();
    let env = read_instance(&a.input)?;
    let read_ms = t0.elapsed().as_secs_f64() * 1e3;
    let t1 = Instant::now();
    let build = build_spanner_detailed(&env)?;
    let build_ms = t1.elapsed().as_secs_f64() * 1e3;
    write_graph(&a.output, &build.graph)?;
    let s = &build.stats;
    let report = BuildReport {
        n: env.n(),
        m: env.obstacles().len(),
        edges: s.edges,
        edge_budget: s.edge_budget(),
        pair_size_sum: s.pair_size_sum,
        cones: s.cones.clone(),
        interior_apexes: s.interior_apexes,
        candidates: s.candidates,
        emissions: s.emissions,
        read_ms,
        build_ms,
    };
    if let Some(path) = &a.report {
        write_json_atomic(path, &report)?;
    }
    println!(
        "n={} edges={} budget={} pair_size_sum={} ({:.1} ms)",
        report.n, report.edges, report.edge_budget, report.pair_size_sum, build_ms
    );
    Ok(report)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<VerifyReport> {
    let env = read_instance(&a.instance)?;
    let graph = read_graph(&a.graph)?;
    if graph.n() != env.n() {
        return Err(Error::Precondition(format!(
            "graph has {} vertices but the instance has {} points",
            graph.n(),
            env.n()
        )));
    }
    let stretch = spanning_ratio(&env, &graph)?;
    let lemma2 = if a.lemma2_samples > 0 && env.n() >= 2 {
        let full = a.lemma2_samples / 10;
        let rest = a.lemma2_samples % 10;
        let mut summary = sample_lemma2(&env, full, 10, a.seed)?;
        if rest > 0 {
            summary = summary.merge(sample_lemma2(&env, 1, rest, a.seed ^ 0x5eed)?);
        }
        Some(summary)
    } else {
        None
    };
    let observation1 = observation1_check(&graph, &env);
    let passed = stretch.within_bound() && observation1 && lemma2.is_none_or(|s| s.all_passed());
    let report = VerifyReport {
        n: env.n(),
        l2_bound_analytic: stretch.l2_bound,
        stretch,
        lemma2,
        observation1,
        passed,
    };
    if let Some(path) = &a.report {
        write_json_atomic(path, &report)?;
    }
    println!(
        "max L1 stretch {:.6} at {:?}; analytic L2 bound {:.6}; {}",
        report.stretch.max_ratio,
        report.stretch.argmax,
        report.l2_bound_analytic,
        if passed { "PASS" } else { "FAIL" }
    );
    if let Some(s) = report.lemma2 {
        println!("detour samples {}/{} pass, max ratio {:.4}", s.passed, s.samples, s.max_ratio);
    }
    Ok(report)
}

pub fn cmd_bench(a: &BenchArgs) -> Result<SweepTable> {
    let table = scaling_sweep(&SweepConfig {
        sizes: a.sizes.clone(),
        trials: a.trials,
        seed: a.seed,
        m: a.m,
    })?;
    if let Some(path) = &a.report {
        write_json_atomic(path, &table)?;
    }
    if let Some(path) = &a.csv {
        write_atomic(path, sweep_csv(&table).as_bytes())?;
    }
    println!("{:>6} {:>6} {:>10} {:>12} {:>10} {:>14}", "n", "trial", "edges", "pair_sizes", "stretch", "edges/nlg^3n");
    for r in &table.rows {
        println!(
            "{:>6} {:>6} {:>10} {:>12} {:>10.4} {:>14.5}",
            r.n, r.trial, r.edges, r.pair_size_sum, r.max_stretch, r.normalized_edges
        );
    }
    Ok(table)
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from("n,trial,seed,edges,pair_size_sum,max_stretch,normalized_edges\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n, r.trial, r.seed, r.edges, r.pair_size_sum, r.max_stretch, r.normalized_edges
        ));
    }
    out
}
