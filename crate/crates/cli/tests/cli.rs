use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const T_L: &str = r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0},{"id":2,"x":1,"y":1}],"edges":[[0,1],[1,2]]}"#;
const T_HOOK: &str = r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":4,"y":0},{"id":2,"x":4,"y":4},{"id":3,"x":4,"y":-4}],"edges":[[0,1],[1,2],[1,3]]}"#;

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("treecut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn treecut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treecut")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn optimize_l_shape() {
    let t = scratch("l.json", T_L);
    let v = json_of(&treecut(&["optimize", t.to_str().unwrap()]));
    assert!((v["diameter_after"].as_f64().unwrap() - 1.5469182).abs() < 1e-6);
    assert_eq!(v["useful"], true);
    assert!(v.get("events").is_none());
    let traced = json_of(&treecut(&["optimize", t.to_str().unwrap(), "--trace"]));
    assert!(!traced["events"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_hook() {
    let t = scratch("hook.json", T_HOOK);
    let v = json_of(&treecut(&["analyze", t.to_str().unwrap()]));
    let bb = &v["backbone"];
    assert_eq!(bb["is_point"], true);
    let delta = bb["delta"].as_f64().unwrap();
    assert!((0.0..=8.0).contains(&delta));
    let c = &bb["center"];
    let (u, w, lambda) = (c["edge"][0].as_i64().unwrap(), c["edge"][1].as_i64().unwrap(), c["lambda"].as_f64().unwrap());
    assert!((u == 1 && lambda == 0.0) || (w == 1 && lambda == 1.0), "{c}");
    assert_eq!(v["diameter"]["diameter"].as_f64().unwrap(), 8.0);
}

#[test]
fn evaluate_hook_shortcut() {
    let t = scratch("hook-eval.json", T_HOOK);
    let s = r#"{"p":{"edge":[0,1],"lambda":0},"q":{"edge":[2,1],"lambda":0}}"#;
    let v = json_of(&treecut(&["evaluate", t.to_str().unwrap(), "--shortcut", s]));
    assert_eq!(v["usefulness"], "useless");
    assert!((v["diameter_after"].as_f64().unwrap() - 10.8284271).abs() < 1e-6);
}

#[test]
fn generated_trees_round_trip() {
    let out = treecut(&["gen", "12", "--seed", "4", "--shape", "caterpillar"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let text = text.trim_end();
    assert_eq!(treecut::load_tree(text).unwrap().to_json(), text);
    let again = treecut(&["gen", "12", "--seed", "4", "--shape", "caterpillar"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap().trim_end(), text);
}

#[test]
fn optimize_agrees_with_backbone_oracle() {
    for seed in ["1", "2", "3"] {
        let out = treecut(&["gen", "9", "--seed", seed, "--shape", "caterpillar"]);
        let t = scratch(&format!("gen-{seed}.json"), &String::from_utf8(out.stdout).unwrap());
        let path = t.to_str().unwrap();
        let opt = json_of(&treecut(&["optimize", path]));
        let grid = json_of(&treecut(&["oracle", path, "--restrict-backbone"]));
        let h = grid["resolution"].as_f64().unwrap();
        assert!(opt["diameter_after"].as_f64().unwrap() <= grid["diameter"].as_f64().unwrap() + 4.0 * h);
        assert_eq!(json_of(&treecut(&["optimize", path])), opt);
    }
}

#[test]
fn render_writes_svg() {
    let t = scratch("l-render.json", T_L);
    let svg = t.with_extension("svg");
    let out = treecut(&["render", t.to_str().unwrap(), "--optimal", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml") && text.contains("stroke-dasharray"));
    let plain = treecut(&["render", t.to_str().unwrap()]);
    assert_eq!(String::from_utf8(plain.stdout).unwrap().matches("<line ").count(), 2);
}

#[test]
fn input_errors_exit_with_2() {
    let bad = scratch("bad.json", r#"{"vertices":[{"id":0,"x":0,"y":0}],"edges":[]}"#);
    let t = scratch("l-errors.json", T_L);
    let cases: Vec<Vec<&str>> = vec![
        vec!["analyze", bad.to_str().unwrap()],
        vec!["analyze", "/nonexistent/tree.json"],
        vec!["oracle", t.to_str().unwrap(), "--resolution", "-1"],
        vec!["oracle", t.to_str().unwrap(), "--resolution", "10"],
        vec!["evaluate", t.to_str().unwrap(), "--shortcut", r#"{"p":{"edge":[0,2],"lambda":0.5},"q":{"edge":[0,1],"lambda":0}}"#],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = treecut(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
