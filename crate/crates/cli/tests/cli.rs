use std::fs;
use std::process::{Command, Output};

use reebsnake::tree::{tree_isomorphic, PoincareReebTree};
use reebsnake_cli::{run, Artifact, DirectionChoice, EpsilonChoice, RunConfig};
use reebsnake::rational::rat;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reebsnake"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn circle_summary() {
    let o = bin(&["--poly", "x^2+y^2", "--epsilon", "1/4", "--emit", "summary"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("tree: path"), "{s}");
    assert!(s.contains("right snake: 1\n"));
    assert!(s.contains("left snake: 1\n"));
}

#[test]
fn vertical_bitangent_exit_code() {
    let o = bin(&["--poly", "x^2+(y^2-x)^2", "--direction", "0"]);
    assert_eq!(o.status.code(), Some(11));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("error code=11 kind=NonGenericBitangent"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn vertical_inflection_exit_code() {
    let o = bin(&["--poly", "x^12 + y^4/4 - x^2*y^3/3", "--direction", "0"]);
    assert_eq!(o.status.code(), Some(10));
}

#[test]
fn input_errors() {
    assert_eq!(bin(&["--poly", "x^2+y^2+1"]).status.code(), Some(3));
    assert_eq!(bin(&["--poly", "x^^2"]).status.code(), Some(2));
    assert_eq!(bin(&["--poly", "x^2+y^2", "--epsilon", "-1/2"]).status.code(), Some(4));
    assert_eq!(bin(&["--poly", "x^2+y^2", "--direction", "1,1"]).status.code(), Some(5));
    assert_eq!(bin(&["--poly", "x^2+y^2", "--emit", "png"]).status.code(), Some(2));
}

#[test]
fn poly_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    fs::write(&path, "x^2 + y^2\n").unwrap();
    let o = bin(&["--poly-file", path.to_str().unwrap(), "--epsilon", "1/4", "--direction", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("polynomial: x^2 + y^2"));
}

#[test]
fn artifacts_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&[
        "--poly",
        "x^2+(y^2-x)^2",
        "--direction",
        "1/100",
        "--epsilon",
        "1/1024",
        "--emit",
        "json,dot,svg",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["tree.json", "tree.dot", "curve.svg", "snake.txt", "snake.json"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let svg = fs::read_to_string(dir.path().join("curve.svg")).unwrap();
    let right = svg.matches("data-side=\"right\"").count();
    assert_eq!(right, 3);
    assert_eq!(
        fs::read_to_string(dir.path().join("snake.txt")).unwrap(),
        "right: 2 3 1\nleft: 1\n"
    );

    let cfg = RunConfig {
        polynomial_text: "x^2+(y^2-x)^2".into(),
        direction: DirectionChoice::HalfAngle(rat(1, 100)),
        epsilon: EpsilonChoice::Fixed(rat(1, 1024)),
        emit: [Artifact::Summary].into(),
        ..RunConfig::default()
    };
    let out = run(&cfg).unwrap();
    let back = PoincareReebTree::from_json(&fs::read_to_string(dir.path().join("tree.json")).unwrap()).unwrap();
    assert!(tree_isomorphic(&back, &out.tree));
    let json = fs::read_to_string(dir.path().join("tree.json")).unwrap();
    assert!(json.contains("\"epsilon\": \"1/1024\""));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = bin(&[
            "--poly",
            "x^2+y^2",
            "--direction",
            "auto",
            "--scan-points",
            "16",
            "--epsilon",
            "1/4",
            "--emit",
            "json,dot,svg",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    for name in ["tree.json", "tree.dot", "curve.svg", "snake.txt", "snake.json", "scan.json"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn auto_direction_avoids_flagged() {
    let cfg = RunConfig {
        polynomial_text: "x^2+(y^2-x)^2".into(),
        direction: DirectionChoice::Auto,
        scan_points: 16,
        ..RunConfig::default()
    };
    let out = run(&cfg).unwrap();
    let scan = out.scan.unwrap();
    let t = out.t.unwrap();
    assert!(scan.non_generic_intervals.iter().all(|iv| !iv.contains(&t)));
    assert!(out.summary.contains("right snake:"));
}
