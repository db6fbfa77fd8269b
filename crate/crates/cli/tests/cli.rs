use std::fs;
use std::process::{Command, Output};

fn coebl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coebl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_benchmarks() {
    let out = coebl(&["solve", "--game", "rps"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("value: 0.000000000000") || text.contains("value: -0.000000000000"), "{text}");
    assert!(text.contains("row strategy: [0.333333, 0.333333, 0.333333]"), "{text}");

    let text = stdout(&coebl(&["solve", "--game", "diagonal:2"]));
    assert!(text.contains("row strategy: [0.000000, 0.000000, 0.000000, 1.000000]"), "{text}");
    assert!(text.contains("column strategy: [0.000000, 0.000000, 0.000000, 1.000000]"), "{text}");

    assert!(!coebl(&["solve", "--game", "nonsense"]).status.success());
    assert!(!coebl(&["solve", "--game", "bignum:x"]).status.success());
}

#[test]
fn solve_json_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    fs::write(&path, r#"{"m": 2, "entries": [[3.0, -1.0], [-2.0, 1.0]]}"#).unwrap();
    let text = stdout(&coebl(&["solve", "--game", path.to_str().unwrap()]));
    assert!(text.contains("value: 0.142857142857"), "{text}");
}

#[test]
fn bound_prints_both_curves() {
    let out = coebl(&["bound", "--c", "8", "--horizon", "3000", "--actions", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("theorem bound: 5715.29"), "{text}");
    assert!(text.contains("reference curve: 16.431677"), "{text}");
    assert!(out.stderr.is_empty());

    let out = coebl(&["bound", "--c", "2", "--horizon", "3000", "--actions", "3"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(!coebl(&["bound", "--c", "0", "--horizon", "3000", "--actions", "3"]).status.success());
}

#[test]
fn run_then_reaggregate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    fs::write(
        &cfg,
        r#"{"game": {"benchmark": "bignum", "n": 2},
            "row": {"algo": "ucb"}, "col": {"algo": "exp3"},
            "horizon": 40, "seeds": {"base": 0, "count": 3}}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = coebl(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--workers",
        "2",
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("seeds: 3"));
    let before = fs::read(out_dir.join("aggregate.csv")).unwrap();
    assert_eq!(String::from_utf8_lossy(&before).lines().count(), 5);

    let out = coebl(&["aggregate", "--input", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(fs::read(out_dir.join("aggregate.csv")).unwrap(), before);

    assert!(!coebl(&["run", "--config", "/nonexistent.toml"]).status.success());
}
