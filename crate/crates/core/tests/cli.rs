use std::fs;
use std::path::Path;

use geodesic_spanner::cli::{run_from, BuildReport, VerifyReport, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use geodesic_spanner::gen::{lemma1_instance, Lemma1Config};
use geodesic_spanner::geodesic::pairwise_geodesics;
use geodesic_spanner::io::{read_graph, read_instance, read_json, write_graph, GraphFile};
use geodesic_spanner::spanner::SpannerGraph;
use geodesic_spanner::verify::SweepTable;

fn run(args: &[&str]) -> i32 {
    run_from(std::iter::once("geospanner").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_build_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let graph = dir.path().join("graph.json");
    let build_report = dir.path().join("build.json");
    let verify_report = dir.path().join("verify.json");
    assert_eq!(run(&["generate", "--n", "40", "--m", "6", "--seed", "3", "--boundary-fraction", "0.3", "--out", s(&inst)]), EXIT_OK);
    assert_eq!(read_instance(&inst).unwrap().n(), 40);
    assert_eq!(run(&["build", "--input", s(&inst), "--output", s(&graph), "--report", s(&build_report)]), EXIT_OK);
    let b: BuildReport = read_json(&build_report).unwrap();
    assert_eq!(b.n, 40);
    assert!(b.edges <= b.edge_budget);
    assert_eq!(read_graph(&graph).unwrap().edge_count(), b.edges);
    assert_eq!(
        run(&[
            "verify", "--instance", s(&inst), "--graph", s(&graph),
            "--lemma2-samples", "10000", "--report", s(&verify_report),
        ]),
        EXIT_OK
    );
    let v: VerifyReport = read_json(&verify_report).unwrap();
    assert!(v.passed && v.observation1);
    assert!(v.stretch.max_ratio <= 8.0 + 1e-6);
    assert_eq!(v.l2_bound_analytic, 3f64.sqrt() * v.stretch.max_ratio);
    let l2 = v.lemma2.unwrap();
    assert_eq!((l2.samples, l2.passed), (10_000, 10_000));
    assert!(!dir.path().join(".graph.json.tmp").exists());
}

#[test]
fn outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for k in 0..2 {
        let inst = dir.path().join(format!("inst{k}.json"));
        let graph = dir.path().join(format!("graph{k}.json"));
        assert_eq!(run(&["generate", "--n", "30", "--m", "4", "--seed", "9", "--out", s(&inst)]), EXIT_OK);
        assert_eq!(run(&["build", "--input", s(&inst), "--output", s(&graph)]), EXIT_OK);
        texts.push((fs::read_to_string(&inst).unwrap(), fs::read_to_string(&graph).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn slab_generation_writes_nine_slabs() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("l1.json");
    let args = ["generate", "--mode", "lemma1", "--n", "10", "--eps", "0.1", "--s", "2.1", "--delta", "1e-3", "--out", s(&inst)];
    assert_eq!(run(&args), EXIT_OK);
    let env = read_instance(&inst).unwrap();
    assert_eq!((env.n(), env.obstacles().len()), (10, 9));
    let bad = dir.path().join("bad.json");
    for delta in ["0", "-1", "0.5"] {
        assert_eq!(run(&["generate", "--mode", "lemma1", "--n", "10", "--delta", delta, "--out", s(&bad)]), EXIT_USAGE);
    }
    assert!(!bad.exists());
}

#[test]
fn missing_critical_edge_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Lemma1Config { n: 10, eps: 0.1, s: 2.1, delta: 1e-3 };
    let inst = dir.path().join("l1.json");
    let graph = dir.path().join("cut.json");
    let report = dir.path().join("report.json");
    let env = lemma1_instance(&cfg).unwrap();
    geodesic_spanner::io::write_instance(&inst, &env).unwrap();
    let complete = SpannerGraph::complete(&pairwise_geodesics(&env).unwrap());
    write_graph(&graph, &complete.without_edge(3, 4)).unwrap();
    assert_eq!(
        run(&["verify", "--instance", s(&inst), "--graph", s(&graph), "--report", s(&report)]),
        EXIT_OK,
        "stretch below 8 is not a violation"
    );
    let v: VerifyReport = read_json(&report).unwrap();
    assert!(v.stretch.max_ratio > 2.0 - cfg.eps);
    assert_eq!(v.stretch.argmax, Some((3, 4)));

    // Dropping every edge at a vertex disconnects it.
    let isolated = SpannerGraph::from_edges(
        10,
        complete.edges().iter().filter(|e| e.i != 0 && e.j != 0).map(|e| (e.i, e.j, e.weight)),
    )
    .unwrap();
    write_graph(&graph, &isolated).unwrap();
    assert_eq!(run(&["verify", "--instance", s(&inst), "--graph", s(&graph)]), EXIT_VIOLATION);
}

#[test]
fn bench_writes_table_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("bench.json");
    let csv = dir.path().join("bench.csv");
    assert_eq!(
        run(&["bench", "--sizes", "8,16,32", "--trials", "2", "--m", "3", "--report", s(&report), "--csv", s(&csv)]),
        EXIT_OK
    );
    let table: SweepTable = read_json(&report).unwrap();
    assert_eq!(table.rows.len(), 6);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.starts_with("n,trial,seed,edges"));
}

#[test]
fn usage_and_io_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let out = dir.path().join("out.json");
    assert_eq!(run(&["build", "--input", s(&missing), "--output", s(&out)]), EXIT_USAGE);
    assert_eq!(run(&["bench", "--sizes", ""]), EXIT_USAGE);
    assert_eq!(run(&["bench"]), EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(run(&["generate", "--n", "x", "--out", s(&out)]), EXIT_USAGE);
    assert_eq!(run(&["--help"]), EXIT_OK);

    fs::write(&missing, "{\"points\": [[1.5, 1, 1]], \"obstacles\": [{\"lo\": [1, 0, 0], \"hi\": [2, 2, 2]}]}").unwrap();
    assert_eq!(run(&["build", "--input", s(&missing), "--output", s(&out)]), EXIT_USAGE);

    let inst = dir.path().join("inst.json");
    assert_eq!(run(&["generate", "--n", "5", "--m", "1", "--out", s(&inst)]), EXIT_OK);
    let wrong = GraphFile { n: 4, edges: vec![], metric: "L1-geodesic".into() };
    geodesic_spanner::io::write_json_atomic(&out, &wrong).unwrap();
    assert_eq!(run(&["verify", "--instance", s(&inst), "--graph", s(&out)]), EXIT_USAGE);
}
