//! End-to-end checks of every subcommand surface.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoplane"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn dist_supports_inf_and_json() {
    let out = run(&["dist", "--p", "inf", "--a", "0,0", "--b", "3,-4"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "4");

    let json = stdout_json(&run(&[
        "dist", "--p", "2", "--a", "0,0", "--b", "3,4", "--format", "json",
    ]));
    assert_eq!(json["distance"], 5.0);
    assert_eq!(json["p"], 2.0);
}

#[test]
fn classify_reports_the_rotation() {
    let json = stdout_json(&run(&[
        "classify",
        "--map",
        r#"{"matrix":[[0,-1],[1,0]],"translation":[0,0]}"#,
    ]));
    assert_eq!(json["type"], "rotation");
    assert_eq!(json["center"][0], 0.0);
    assert!((json["angle"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn classify_rejects_non_isometries_with_exit_3() {
    let out = run(&[
        "classify",
        "--map",
        r#"{"matrix":[[2,0],[0,1]],"translation":[0,0]}"#,
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "not_an_isometry");
}

#[test]
fn decompose_translation_yields_two_mirrors() {
    let json = stdout_json(&run(&[
        "decompose",
        "--src",
        "0,0;0,1;1,0",
        "--dst",
        "2,0;2,1;3,0",
    ]));
    let mirrors = json.as_array().unwrap();
    assert_eq!(mirrors.len(), 2);
    assert_eq!(mirrors[0]["offset"], 1.0);
    assert_eq!(mirrors[1]["offset"], 2.0);
}

#[test]
fn decompose_supports_dimension_flag() {
    let json = stdout_json(&run(&[
        "decompose",
        "--dim",
        "3",
        "--src",
        "0,0,0;1,0,0;0,1,0;0,0,1",
        "--dst",
        "2,0,0;1,0,0;2,1,0;2,0,1",
    ]));
    // A single mirror: the plane x = 1 swaps 0 and (2,0,0) and fixes the rest.
    let mirrors = json.as_array().unwrap();
    assert_eq!(mirrors.len(), 1);
}

#[test]
fn group_reports_all_eight_verified() {
    let json = stdout_json(&run(&["group", "--p", "inf", "--samples", "200"]));
    assert_eq!(json["all_verified"], true);
    assert_eq!(json["p"], "inf");
    let elements = json["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 8);
    assert_eq!(elements[0]["name"], "identity");
    assert_eq!(elements[5]["name"], "rot_90");
    for e in elements {
        assert_eq!(e["report"]["verdict"], true);
        assert_eq!(e["report"]["max_violation"], 0.0);
    }
}

#[test]
fn midpoint_passes_for_octic_maps() {
    let json = stdout_json(&run(&[
        "midpoint",
        "--map",
        r#"{"matrix":[[0,-1],[1,0]],"translation":[0,0]}"#,
        "--p",
        "1.5",
    ]));
    assert_eq!(json["report"]["verdict"], true);
    assert_eq!(json["strictly_convex"], true);
}

#[test]
fn conic_svg_and_output_file() {
    let dir = std::env::temp_dir().join("isoplane-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("circle.svg");
    let path_str = path.to_str().unwrap();
    let out = run(&[
        "conic", "circle", "--center", "0,0", "--radius", "1", "--format", "svg", "--output",
        path_str,
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("<svg xmlns"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn conic_lpcircle_and_hyperbola_csv() {
    let out = run(&["conic", "lpcircle", "--p", "3", "--n", "8"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    // Header + 8 points + closing repeat.
    assert_eq!(csv.lines().count(), 10);

    let out = run(&[
        "conic",
        "hyperbola",
        "--f1",
        "0,0",
        "--f2",
        "1,2",
        "--gap",
        "1.5",
        "--bbox",
        "-4,-4,4,4",
    ]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.matches("x,y\n").count(), 2);
    assert!(csv.contains("0.25,2\n"));
}

#[test]
fn sphere_and_hyper_subcommands() {
    let json = stdout_json(&run(&[
        "sphere",
        "--mirrors",
        r#"[{"normal":[0,0,1]},{"normal":[0,1,0]}]"#,
    ]));
    assert_eq!(json["type"], "sphere_rotation");
    assert!((json["angle"].as_f64().unwrap().abs() - std::f64::consts::PI).abs() < 1e-9);

    let json = stdout_json(&run(&[
        "hyper",
        "--mirrors",
        r#"[{"kind":"diameter","direction":[1,0]},{"kind":"arc","center":[1,0.5],"radius":0.5}]"#,
    ]));
    assert_eq!(json["type"], "horolation");

    // Identical mirrors collapse to the identity, which has no class.
    let out = run(&[
        "hyper",
        "--mirrors",
        r#"[{"kind":"diameter","direction":[1,0]},{"kind":"diameter","direction":[1,0]}]"#,
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn map_argument_accepts_files() {
    let dir = std::env::temp_dir().join("isoplane-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rot90.json");
    std::fs::write(&path, r#"{"matrix":[[0,-1],[1,0]],"translation":[1,2]}"#).unwrap();
    let json = stdout_json(&run(&["classify", "--map", path.to_str().unwrap()]));
    assert_eq!(json["type"], "rotation");
    std::fs::remove_file(&path).ok();

    let missing = run(&["classify", "--map", "/nonexistent/map.json"]);
    assert_eq!(missing.status.code(), Some(2));
}
