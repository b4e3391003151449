//! End-to-end tests of the `diffuse` binary: exit codes, output files,
//! determinism, and input immutability.

use std::fs;
use std::process::{Command, Output};

use diffuse_core::io::{
    make_fixture, normalize_matrix, read_edge_list, read_matrix_market, read_trace_csv,
    read_vector, to_matrix, Fixture, NormalizationMode,
};
use diffuse_core::oracle::{dense_oracle_eigen, dense_oracle_solve};
use diffuse_core::vector::DenseVector;

fn diffuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffuse"))
        .args(args)
        .env("DIFFUSE_LOG", "info")
        .output()
        .expect("binary runs")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const SNAKE_EDGES: &str = "0 1 0.5\n0 2 0.5\n1 3\n2 4\n3 0\n4 0\n";

#[test]
fn solve_damped_snake_matches_dense_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("snake.edges");
    fs::write(&edges, SNAKE_EDGES).unwrap();
    let out_path = dir.path().join("x.txt");
    let out = diffuse(&[
        "solve",
        "--matrix",
        edges.to_str().unwrap(),
        "--format",
        "edges",
        "--damping",
        "0.85",
        "--b",
        "uniform",
        "--eps",
        "1e-10",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    // reproduce the same system and compare with the dense oracle
    let el = read_edge_list(&edges).unwrap();
    let (m, _) = to_matrix(&el, NormalizationMode::Damped(0.85)).unwrap();
    let b = DenseVector::uniform(5, 0.15 / 5.0);
    let oracle = dense_oracle_solve(&m, &b).unwrap();
    let x = read_vector(&out_path).unwrap();
    let mut worst = 0.0f64;
    for i in 0..5 {
        worst = worst.max((x[i] - oracle[i]).abs());
    }
    assert!(worst <= 1e-8, "solution deviates by {worst:e}");

    // the backward residual printed on stdout is small
    let stdout = stdout_of(&out);
    let line = stdout
        .lines()
        .find(|l| l.starts_with("backward_residual_linf:"))
        .expect("residual line present");
    let value: f64 = line.split(':').nth(1).unwrap().trim().parse().unwrap();
    assert!(value <= 1e-8);

    // input file is untouched
    assert_eq!(fs::read_to_string(&edges).unwrap(), SNAKE_EDGES);
}

#[test]
fn solve_missing_matrix_file_names_the_path() {
    let out = diffuse(&["solve", "--matrix", "/nonexistent/graph.mtx"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("/nonexistent/graph.mtx"));
}

#[test]
fn solve_budget_exhaustion_exits_2() {
    let out = diffuse(&[
        "solve",
        "--matrix",
        "fixture:twonode",
        "--b",
        "uniform",
        "--max-steps",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_of(&out).contains("converged: false"));
}

#[test]
fn solve_propagates_invariant_check_flag() {
    let out = diffuse(&[
        "solve",
        "--matrix",
        "fixture:random_substochastic(30,5)",
        "--check-invariant-every",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
}

#[test]
fn eigen_rank1_fixture_converges_immediately() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("v.txt");
    let out = diffuse(&[
        "eigen",
        "--matrix",
        "fixture:rank1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let v = read_vector(&out_path).unwrap();
    assert!((v[0] - 0.5).abs() < 1e-12);
    assert!((v[1] - 0.5).abs() < 1e-12);
    assert!(stdout_of(&out).contains("steps: 0"));
}

#[test]
fn eigen_matches_dense_oracle_on_ergodic_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("v.txt");
    let out = diffuse(&[
        "eigen",
        "--matrix",
        "fixture:random_ergodic(50,7)",
        "--eps",
        "1e-11",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let v = read_vector(&out_path).unwrap();
    let (m, _) = make_fixture(&Fixture::RandomErgodic { n: 50, seed: 7 }).unwrap();
    let oracle = dense_oracle_eigen(&m).unwrap();
    for i in 0..50 {
        assert!((v[i] - oracle[i]).abs() <= 1e-8);
    }
}

#[test]
fn eigen_rejects_non_stochastic_with_column_report() {
    let out = diffuse(&["eigen", "--matrix", "fixture:random_substochastic(10,1)"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.contains("do not sum to 1"), "stderr: {err}");
    assert!(err.contains("column 0"), "stderr: {err}");
}

#[test]
fn eigen_positive_experimental_warns() {
    let out = diffuse(&[
        "eigen",
        "--matrix",
        "fixture:rank1",
        "--scheduler",
        "positive-experimental",
    ]);
    assert!(stderr_of(&out).contains("conjectural"));
}

#[test]
fn emulate_zero_cycles_and_rank1() {
    let out = diffuse(&["emulate", "--matrix", "fixture:rank1", "--cycles", "0"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("cycle 0: max_relative_deviation 0e0"));

    let out = diffuse(&["emulate", "--matrix", "fixture:rank1", "--cycles", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = stdout_of(&out);
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("cycle ")).count(),
        6
    );
}

#[test]
fn emulate_rejects_oversized_matrix() {
    let out = diffuse(&[
        "emulate",
        "--matrix",
        "fixture:random_substochastic(600,1)",
        "--cycles",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("512"));
}

#[test]
fn bench_single_method_and_unknown_method() {
    let out = diffuse(&[
        "bench",
        "--matrix",
        "fixture:random_substochastic(50,2)",
        "--methods",
        "power",
        "--repeat",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("power")).count(), 1);
    assert!(stdout.contains("machine-dependent"));

    let out = diffuse(&[
        "bench",
        "--matrix",
        "fixture:random_substochastic(50,2)",
        "--methods",
        "power,gauss",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("gauss"));
}

#[test]
fn bench_writes_csv_and_counts_touches() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = diffuse(&[
        "bench",
        "--matrix",
        "fixture:random_substochastic(200,3)",
        "--methods",
        "diffusion-greedy,power",
        "--repeat",
        "2",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,steps,column_touches,converged,wall_median_s"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    let greedy_touches: u64 = rows[0][2].parse().unwrap();
    let power_touches: u64 = rows[1][2].parse().unwrap();
    assert!(greedy_touches < power_touches);
}

#[test]
fn snake_demo_exits_zero_and_traces_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = diffuse(&["snake-demo", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.contains("oscillation_detected: true"));
    for name in ["snake-mixed.csv", "snake-negative.csv"] {
        let trace = read_trace_csv(&dir.path().join(name)).unwrap();
        assert!(!trace.is_empty(), "{name} should hold records");
    }
}

#[test]
fn snake_demo_with_tiny_budget_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let out = diffuse(&[
        "snake-demo",
        "--max-steps",
        "10",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_of(&out).contains("inconclusive"));
}

#[test]
fn convert_edges_to_mtx_and_back() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("snake.edges");
    fs::write(&edges, SNAKE_EDGES).unwrap();
    let mtx = dir.path().join("snake.mtx");
    let out = diffuse(&[
        "convert",
        "--in",
        edges.to_str().unwrap(),
        "--out",
        mtx.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let m = read_matrix_market(&mtx).unwrap();
    assert_eq!(m.nnz(), 6);

    // round trip back to an edge list and again to matrix market
    let edges2 = dir.path().join("snake2.edges");
    let out = diffuse(&[
        "convert",
        "--in",
        mtx.to_str().unwrap(),
        "--out",
        edges2.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let el = read_edge_list(&edges2).unwrap();
    let (m2, _) = to_matrix(&el, NormalizationMode::None).unwrap();
    assert_eq!(m, m2);
}

#[test]
fn convert_normalize_stochastic_yields_unit_columns() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.edges");
    fs::write(&edges, "0 1 3.0\n0 2 1.0\n1 0 2.0\n2 0 5.0\n").unwrap();
    let mtx = dir.path().join("g.mtx");
    let out = diffuse(&[
        "convert",
        "--in",
        edges.to_str().unwrap(),
        "--out",
        mtx.to_str().unwrap(),
        "--normalize",
        "stochastic",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let m = read_matrix_market(&mtx).unwrap();
    for c in 0..3 {
        assert!((m.col_sum(c) - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn convert_rejects_unknown_extension() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("graph.dat");
    fs::write(&input, "0 1\n").unwrap();
    let out = diffuse(&[
        "convert",
        "--in",
        input.to_str().unwrap(),
        "--out",
        dir.path().join("out.mtx").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("--format") || stderr_of(&out).contains("format"));
}

#[test]
fn seeded_runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let out_path = dir.path().join(format!("x-{tag}.txt"));
        let trace_path = dir.path().join(format!("t-{tag}.csv"));
        let out = diffuse(&[
            "solve",
            "--matrix",
            "fixture:random_substochastic(60,9)",
            "--scheduler",
            "random",
            "--seed",
            "5",
            "--trace",
            trace_path.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        (fs::read(&out_path).unwrap(), fs::read(&trace_path).unwrap())
    };
    let (x1, t1) = run("a");
    let (x2, t2) = run("b");
    assert_eq!(x1, x2);
    assert_eq!(t1, t2);
}

#[test]
fn fixtures_lists_and_writes() {
    let out = diffuse(&["fixtures"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = stdout_of(&out);
    for name in [
        "snake",
        "twonode",
        "rank1",
        "random_substochastic",
        "random_ergodic",
    ] {
        assert!(stdout.contains(name), "missing {name}");
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rank1.mtx");
    let out = diffuse(&[
        "fixtures",
        "--name",
        "rank1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let m = read_matrix_market(&path).unwrap();
    assert_eq!(m.nnz(), 4);

    let out = diffuse(&["fixtures", "--name", "mystery"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("mystery"));
}

#[test]
fn quiet_mode_suppresses_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.txt");
    let out = Command::new(env!("CARGO_BIN_EXE_diffuse"))
        .args([
            "solve",
            "--matrix",
            "fixture:twonode",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .env("DIFFUSE_LOG", "quiet")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty(), "stderr: {}", stderr_of(&out));
}

#[test]
fn damped_mtx_input_gets_normalized_and_scaled() {
    // --damping on a Matrix Market input normalizes columns then scales
    let dir = tempfile::tempdir().unwrap();
    let (snake, _) = make_fixture(&Fixture::Snake).unwrap();
    let mtx = dir.path().join("snake.mtx");
    diffuse_core::io::write_matrix_market(&snake, &mtx).unwrap();
    let out_path = dir.path().join("x.txt");
    let out = diffuse(&[
        "solve",
        "--matrix",
        mtx.to_str().unwrap(),
        "--damping",
        "0.85",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let (damped, _) = normalize_matrix(&snake, NormalizationMode::Damped(0.85), false).unwrap();
    let b = DenseVector::uniform(5, 0.15 / 5.0);
    let oracle = dense_oracle_solve(&damped, &b).unwrap();
    let x = read_vector(&out_path).unwrap();
    for i in 0..5 {
        assert!((x[i] - oracle[i]).abs() <= 1e-8);
    }
}

#[test]
fn b_file_input_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let b_path = dir.path().join("b.txt");
    fs::write(&b_path, "1.0\n0.0\n").unwrap();
    let out_path = dir.path().join("x.txt");
    let out = diffuse(&[
        "solve",
        "--matrix",
        "fixture:twonode",
        "--b",
        &format!("file:{}", b_path.display()),
        "--eps",
        "1e-11",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let x = read_vector(&out_path).unwrap();
    assert!((x[0] - 4.0 / 3.0).abs() <= 1e-9);
    assert!((x[1] - 2.0 / 3.0).abs() <= 1e-9);

    // wrong length is an input error
    fs::write(&b_path, "1.0\n0.0\n0.0\n").unwrap();
    let out = diffuse(&[
        "solve",
        "--matrix",
        "fixture:twonode",
        "--b",
        &format!("file:{}", b_path.display()),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_and_bad_flag_exit_codes() {
    let out = diffuse(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = diffuse(&["solve", "--definitely-not-a-flag"]);
    assert_eq!(out.status.code(), Some(1));
}
