// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

use serde_json::Value;

fn tpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpack")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn pack_star4() {
    let o = tpack(&["pack", "--zoo", "star", "--param", "4", "--terminals", "leaves"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["paths"].as_array().unwrap().len(), 2);
    assert_eq!(v["total"], 2);
    assert_eq!(v["bound"], 2.0);
}

#[test]
fn pack_star3_reports_the_center() {
    let o = tpack(&["pack", "--zoo", "star", "--param", "3", "--terminals", "leaves"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["witness"], "c");
    assert_eq!(v["bound"], 1.5);
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd degree"));
}

#[test]
fn arcs_even_ladder() {
    let o = tpack(&["arcs", "--zoo", "even_ladder", "--terminals", "ends", "--radius", "12", "--depth", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let arcs = v["arcs"].as_array().unwrap();
    assert_eq!(arcs.len(), 2);
    assert!(arcs.iter().all(|a| a["kind"] == "double_ray"));
    assert_eq!(v["counts"]["end:left"], 2);
    assert_eq!(v["lambda"]["end:right"], 2);
}

#[test]
fn arcs_fig3_premise_failure() {
    let o = tpack(&["arcs", "--zoo", "fig3_tree", "--terminals", "leaves"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["status"], "premise_failed");
}

#[test]
fn arcs_example_1_2_not_discrete() {
    let o = tpack(&["arcs", "--zoo", "dup_rung_ladder", "--terminals", "ends,class:a"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["status"], "not_discrete");
}

#[test]
fn mu_on_example_1_2() {
    let o = tpack(&["mu", "--zoo", "dup_rung_ladder", "--terminals", "ends,class:a", "--radius", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["mu"]["a@0"]["value"], 4);
    assert_eq!(v["mu"]["end:left"]["value"], 1);
}

#[test]
fn unknown_when_r_max_is_too_small() {
    let o = tpack(&["lambda", "--zoo", "even_ladder", "--terminals", "ends", "--rmax", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors() {
    assert_eq!(tpack(&["pack"]).status.code(), Some(1));
    assert_eq!(tpack(&["pack", "--zoo", "moebius"]).status.code(), Some(1));
    assert_eq!(tpack(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(tpack(&["pack", "--zoo", "ray"]).status.code(), Some(1));
}

#[test]
fn file_input_with_a_loop_names_the_edge() {
    let dir = std::env::temp_dir().join(format!("tpack-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("loop.json");
    std::fs::write(&path, r#"{"vertices":["a","b"],"edges":[["e1","a","b"],["spin","a","a"]]}"#).unwrap();
    let o = tpack(&["pack", "--input", path.to_str().unwrap(), "--terminals", "a,b"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`spin`"));
}

#[test]
fn export_round_trips_through_input() {
    let dir = std::env::temp_dir().join(format!("tpack-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("ladder.json");
    let dot = dir.join("ladder.dot");
    let o = tpack(&["export", "--zoo", "even_ladder", "--out", file.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph window {"));
    let a = tpack(&["arcs", "--input", file.to_str().unwrap(), "--terminals", "ends", "--radius", "8"]);
    let b = tpack(&["arcs", "--zoo", "even_ladder", "--terminals", "ends", "--radius", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn zoo_listing() {
    let v = json(&tpack(&["zoo", "list"]));
    let names: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["star", "path", "cycle", "parallel", "ray", "double_ladder", "dup_rung_ladder", "fig3_tree", "even_ladder"] {
        assert!(names.contains(&n), "{n}");
    }
    let v = json(&tpack(&["zoo", "show", "fig3_tree"]));
    assert_eq!(v["ends"][0], "inf");
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        &["pack", "--zoo", "cycle", "--param", "6", "--terminals", "c0,c2,c4"][..],
        &["arcs", "--zoo", "even_ladder", "--radius", "8", "--depth", "20"],
        &["check", "--zoo", "fig3_tree"],
    ] {
        let first = tpack(args).stdout;
        assert!(!first.is_empty());
        assert_eq!(tpack(args).stdout, first);
    }
}
