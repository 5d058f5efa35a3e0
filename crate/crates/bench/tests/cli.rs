use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use matroid_intersect::instance::parse_instance;

fn bench_bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matroid-bench"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_is_deterministic_and_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let a = bench_bin(
        &[
            "gen",
            "bipartite-matching",
            "--left",
            "3",
            "--right",
            "3",
            "--edges",
            "5",
            "--seed",
            "7",
        ],
        dir.path(),
    );
    let b = bench_bin(
        &[
            "gen",
            "bipartite-matching",
            "--left",
            "3",
            "--right",
            "3",
            "--edges",
            "5",
            "--seed",
            "7",
        ],
        dir.path(),
    );
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let g = bench_bin(
        &["gen", "gf2-pair", "--rows", "5", "--n", "12", "--seed", "1"],
        dir.path(),
    );
    let spec = parse_instance(&stdout(&g)).unwrap();
    assert_eq!(spec.n(), 12);
    assert_eq!(spec.matroid1.kind(), "gf2");
}

#[test]
fn solve_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let gen = bench_bin(
        &[
            "gen",
            "uniform-pair",
            "--n",
            "10",
            "--k1",
            "4",
            "--k2",
            "6",
            "--out",
            "u.txt",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    for solver in ["approx", "exact", "cunningham", "exhaustive"] {
        let out = bench_bin(
            &[
                "solve",
                "u.txt",
                "--solver",
                solver,
                "--out",
                "s.txt",
                "--debug-invariants",
            ],
            dir.path(),
        );
        assert_eq!(
            out.status.code(),
            Some(0),
            "{solver}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(stdout(&out).contains("verified true"));
    }
    let ok = bench_bin(&["verify", "u.txt", "s.txt", "--maximum"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("maximum size 4"));

    fs::write(dir.path().join("big.txt"), "0 1 2 3 4").unwrap();
    let bad = bench_bin(&["verify", "u.txt", "big.txt"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    fs::write(dir.path().join("short.txt"), "0 1 2").unwrap();
    assert_eq!(
        bench_bin(&["verify", "u.txt", "short.txt"], dir.path()).status.code(),
        Some(0)
    );
    assert_eq!(
        bench_bin(&["verify", "u.txt", "short.txt", "--maximum"], dir.path())
            .status
            .code(),
        Some(1)
    );
    fs::write(dir.path().join("range.txt"), "3 99").unwrap();
    assert_eq!(
        bench_bin(&["verify", "u.txt", "range.txt"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn solve_json_carries_the_trace() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("p.txt"),
        "partition 3 0 1 1 1 1\npartition 3 0 0 1 1 1\n",
    )
    .unwrap();
    let out = bench_bin(&["solve", "p.txt", "--json"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["size"], 2);
    assert_eq!(v["phases"][0]["stage"], "greedy");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("mismatch.txt"), "uniform 4 2\nuniform 5 3\n").unwrap();
    fs::write(dir.path().join("edge.txt"), "graphic 4 1 0 9\nuniform 1 1\n").unwrap();
    assert_eq!(bench_bin(&["solve", "mismatch.txt"], dir.path()).status.code(), Some(2));
    assert_eq!(bench_bin(&["solve", "edge.txt"], dir.path()).status.code(), Some(2));
    assert_eq!(bench_bin(&["solve", "missing.txt"], dir.path()).status.code(), Some(2));
    assert_eq!(
        bench_bin(&["bench", "--solver", "nope"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(bench_bin(&["gen", "not-a-family"], dir.path()).status.code(), Some(2));
    assert_eq!(bench_bin(&["bench"], dir.path()).status.code(), Some(2));
    let big = bench_bin(&["gen", "uniform-pair", "--n", "30", "--out", "big.txt"], dir.path());
    assert!(big.status.success());
    assert_eq!(
        bench_bin(&["solve", "big.txt", "--solver", "exhaustive"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_csv_is_byte_stable_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bench",
        "--family",
        "partition-pair",
        "--family",
        "gf2-pair",
        "--count",
        "6",
        "--seed",
        "3",
        "--omit-timing",
        "--out",
    ];
    let run = |name: &str| {
        let mut a = args.to_vec();
        a.push(name);
        assert!(bench_bin(&a, dir.path()).status.success());
        fs::read(dir.path().join(name)).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(
        "instance,solver,n,r,epsilon,queries_total,queries_m1,queries_m2,solution_size,verified,wall_ms\n"
    ));
    assert_eq!(text.lines().count(), 1 + 12 * 3);
}
