use std::path::{Path, PathBuf};
use std::process::Command;

use polydiff_cli::format::SetDescriptor;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

fn polydiff(args: &[&str]) -> Run {
    polydiff_env(args, None)
}

fn polydiff_env(args: &[&str], seed: Option<&str>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polydiff"));
    cmd.current_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures"));
    cmd.args(args).env_remove("POLYDIFF_SEED");
    if let Some(s) = seed {
        cmd.env("POLYDIFF_SEED", s);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn diff_of_squares_and_reduction() {
    let r = polydiff(&["diff", "square_v.json", "square_v.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["vertices"].as_array().unwrap().len(), 16);

    let r = polydiff(&["diff", "--reduce", "square_v.json", "square_v.json"]);
    assert_eq!(r.code, 0);
    let mut got: Vec<Vec<f64>> = r.json()["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(floats)
        .collect();
    got.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(
        got,
        vec![
            vec![-1.0, -1.0],
            vec![-1.0, 1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0]
        ]
    );
}

#[test]
fn diff_half_line_minus_points() {
    let r = polydiff(&["diff", "half_line_h.json", "two_points_v.json"]);
    assert_eq!(r.code, 0);
    let doc = r.json();
    assert_eq!(doc["kind"], "hrep");
    assert_eq!(doc["A"][0][0].as_f64(), Some(1.0));
    assert_eq!(floats(&doc["b"]), vec![0.5]);

    let raw = polydiff(&["diff", "--raw", "half_line_h.json", "two_points_v.json"]).json();
    assert_eq!(floats(&raw["b"]), vec![1.0, 0.5]);
}

#[test]
fn diff_singleton_shortcuts() {
    let r = polydiff(&["diff", "ball.json", "point_v.json"]).json();
    assert_eq!(r["kind"], "ball");
    assert_eq!(floats(&r["center"]), vec![0.0, -1.0]);

    let r = polydiff(&["diff", "box_low.json", "point_v.json"]).json();
    assert_eq!(r["kind"], "box");
    assert_eq!(floats(&r["lower"]), vec![-1.0, -2.0]);
    assert_eq!(floats(&r["upper"]), vec![0.0, -1.0]);

    let r = polydiff(&["diff", "orthant.json", "point_v.json"]).json();
    assert_eq!(r["kind"], "hrep");
    assert_eq!(floats(&r["b"]), vec![1.0, 2.0]);
}

#[test]
fn diff_of_half_spaces_is_lifted_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let plot = dir.path().join("p.json");
    let r = polydiff(&[
        "diff",
        "box_high.json",
        "box_low.json",
        "--out",
        out.to_str().unwrap(),
        "--plot-2d",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        written,
        std::fs::read_to_string(fixture("lifted_boxes.json")).unwrap()
    );

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&plot).unwrap()).unwrap();
    let mut verts: Vec<Vec<f64>> = doc["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(floats)
        .collect();
    verts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(
        verts,
        vec![
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![3.0, -1.0],
            vec![3.0, 1.0]
        ]
    );
    assert_eq!(doc["edges"].as_array().unwrap().len(), 4);

    let c = polydiff(&["classify", out.to_str().unwrap()]).json();
    assert_eq!(c["category"], "exterior");
    assert!((c["margin"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn distance_of_disjoint_boxes() {
    let r = polydiff(&["distance", "box_high.json", "box_low.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    assert!((doc["distance"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(doc["certified"], true);
    let a = floats(&doc["nearest_points"]["a"]);
    let b = floats(&doc["nearest_points"]["b"]);
    assert!((a[0] - 2.0).abs() < 1e-9 && (b[0] - 1.0).abs() < 1e-9);

    let v = polydiff(&["distance", "far_points_v.json", "square_v.json"]).json();
    assert!((v["distance"].as_f64().unwrap() - 13f64.sqrt()).abs() < 1e-9);
}

#[test]
fn separate_verdicts() {
    let same = polydiff(&["separate", "box_low.json", "box_low.json"]).json();
    assert_eq!(same["verdict"], "inseparable");
    assert_eq!(same["direction"], Value::Null);

    let apart = polydiff(&["separate", "box_high.json", "box_low.json"]).json();
    assert_eq!(apart["verdict"], "strongly_separable");
    assert!((apart["offset"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    assert!((apart["thickness"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let point = polydiff(&["separate", "box_low.json", "point_v.json"]).json();
    assert_eq!(point["verdict"], "strongly_separable");
    let touching = polydiff(&["separate", "box_touching.json", "box_low.json"]).json();
    assert_eq!(touching["verdict"], "non_strongly_separable");
    assert_eq!(touching["thickness"].as_f64(), Some(0.0));
    assert_eq!(floats(&touching["direction"]), vec![1.0, 0.0]);
    let corner = polydiff(&["separate", "triangle_h.json", "square_v.json"]).json();
    assert_eq!(corner["verdict"], "inseparable");
}

#[test]
fn classify_half_line() {
    let doc = polydiff(&["classify", "ray_h.json"]).json();
    assert_eq!(doc["category"], "exterior");
    assert!((doc["margin"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(doc["exactness"], "exact");

    let doc = polydiff(&["classify", "triangle_h.json"]).json();
    assert_eq!(doc["category"], "boundary");
    assert_eq!(doc["margin"].as_f64(), Some(0.0));
}

#[test]
fn project_single_and_pair() {
    let one = polydiff(&["project", "far_points_v.json"]).json();
    assert_eq!(floats(&one["projection"]["point"]), vec![4.0, 3.0]);
    assert!(one["projection"]["witness"]["convex_weights"].is_array());

    let two = polydiff(&["project", "box_high.json", "box_low.json"]).json();
    let p = floats(&two["projection"]["point"]);
    assert!((p[0] - 1.0).abs() < 1e-9 && p[1].abs() < 1e-9);
}

#[test]
fn vi_report_has_all_forms() {
    let r = polydiff(&["vi", "far_points_v.json", "triangle_h.json", "--delta", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    for form in ["strong", "omega", "weak"] {
        assert_eq!(doc[form]["solvable"], true, "{form}");
        assert!(doc[form]["residual"].as_f64().unwrap() >= -1e-8, "{form}");
    }
    assert_eq!(doc["delta"].as_f64(), Some(2.0));

    let weak = polydiff(&["vi", "box_low.json", "box_low.json", "--form", "weak"]).json();
    assert_eq!(weak["weak"]["solvable"], false);
    assert!(weak.get("strong").is_none());

    let r = polydiff(&["vi", "box_low.json", "box_low.json", "--delta", "0"]);
    assert_eq!(r.code, 2);
}

#[test]
fn reports_carry_tolerances_and_seed() {
    let r = polydiff_env(
        &[
            "classify",
            "ray_h.json",
            "--feas-tol",
            "1e-7",
            "--max-iter",
            "500",
        ],
        Some("42"),
    );
    let doc = r.json();
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["tolerances"]["feas_tol"].as_f64(), Some(1e-7));
    assert_eq!(doc["tolerances"]["max_iter"], 500);
    assert_eq!(polydiff_env(&["classify", "ray_h.json"], Some("x")).code, 2);
    assert_eq!(
        polydiff(&["classify", "ray_h.json", "--feas-tol", "-1"]).code,
        2
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        polydiff(&["distance", "malformed.json", "box_low.json"]).code,
        2
    );
    assert_eq!(polydiff(&["classify", "unknown_kind.json"]).code, 2);
    assert_eq!(polydiff(&["classify", "missing.json"]).code, 2);
    assert_eq!(
        polydiff(&["distance", "segment_3d_v.json", "box_low.json"]).code,
        2
    );
    assert_eq!(polydiff(&["frobnicate"]).code, 2);

    assert_eq!(polydiff(&["diff", "square_v.json", "ball.json"]).code, 3);
    assert_eq!(polydiff(&["diff", "square_v.json", "box_low.json"]).code, 3);
    assert_eq!(polydiff(&["distance", "ball.json", "box_low.json"]).code, 3);
    assert_eq!(
        polydiff(&["separate", "lifted_boxes.json", "box_low.json"]).code,
        3
    );
    assert_eq!(
        polydiff(&[
            "diff",
            "segment_3d_v.json",
            "segment_3d_v.json",
            "--plot-2d",
            "/dev/null"
        ])
        .code,
        3
    );

    assert_eq!(polydiff(&["classify", "empty_h.json"]).code, 4);
    assert_eq!(polydiff(&["diff", "empty_h.json", "point_v.json"]).code, 4);
    assert_eq!(
        polydiff(&["separate", "box_low.json", "empty_h.json"]).code,
        4
    );
}

#[test]
fn numerical_failure_still_writes_a_report() {
    let r = polydiff(&[
        "project",
        "box_high.json",
        "box_low.json",
        "--max-iter",
        "1",
    ]);
    assert_eq!(r.code, 5);
    let doc = r.json();
    assert_eq!(doc["certified"], false);
    assert_eq!(doc["command"], "project");
    assert!(doc["error"].is_string());
    assert!(r.stderr.contains("numerical failure"));
}

#[test]
fn canonical_files_round_trip() {
    let dir = std::fs::read_dir(fixture("")).unwrap();
    let mut parsed = 0;
    for entry in dir {
        let path = entry.unwrap().path();
        let Ok(d) = SetDescriptor::read(&path) else {
            continue;
        };
        parsed += 1;
        let canon = d.to_canonical();
        let again = SetDescriptor::parse(&canon).unwrap();
        assert_eq!(again.to_canonical(), canon, "{}", path.display());
        if let Ok(op) = d.to_operand() {
            let rebuilt = SetDescriptor::from_operand(&op);
            assert_eq!(rebuilt.to_operand().unwrap(), op, "{}", path.display());
        }
    }
    assert!(parsed >= 12);
    let lifted = std::fs::read_to_string(fixture("lifted_boxes.json")).unwrap();
    assert_eq!(
        SetDescriptor::parse(&lifted).unwrap().to_canonical(),
        lifted
    );
}
