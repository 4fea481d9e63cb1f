use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const IMPLICATION: &str = "(=> (and (var 0) (var 1)) (var 2))\n";

fn nesy(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nesy"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(
        o.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(o);
    assert_eq!(text.trim().lines().count(), 1, "one JSON document: {text}");
    serde_json::from_str(&text).unwrap()
}

fn setup() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("implication.sexp");
    std::fs::write(&f, IMPLICATION).unwrap();
    let path = dir.path().to_path_buf();
    (dir, path)
}

fn compiled(dir: &Path) {
    let o = nesy(
        dir,
        &[
            "compile",
            "--formula",
            "implication.sexp",
            "-o",
            "implication.nnf",
            "--order",
            "2,0,1",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn compile_writes_circuit_and_stats() {
    let (_t, dir) = setup();
    let o = nesy(
        &dir,
        &[
            "compile",
            "--formula",
            "implication.sexp",
            "-o",
            "c.nnf",
            "--stats",
            "s.json",
            "--json",
        ],
    );
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    for key in ["nodes", "edges", "cache_hits", "seconds"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let header = std::fs::read_to_string(dir.join("c.nnf")).unwrap();
    assert!(header.starts_with("nnf "));
    let saved: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("s.json")).unwrap()).unwrap();
    assert_eq!(saved["nodes"], v["nodes"]);
}

#[test]
fn query_values_on_implication() {
    let (_t, dir) = setup();
    compiled(&dir);
    let wmc = json(&nesy(
        &dir,
        &[
            "wmc",
            "--circuit",
            "implication.nnf",
            "--probs",
            "0.3,0.5,0.2",
            "--json",
        ],
    ));
    assert!((wmc["wmc"].as_f64().unwrap() - 0.88).abs() < 1e-12);
    let sl = json(&nesy(
        &dir,
        &[
            "sl",
            "--circuit",
            "implication.nnf",
            "--probs",
            "0.3,0.5,0.2",
            "--json",
        ],
    ));
    assert!((sl["sl"].as_f64().unwrap() + 0.88f64.ln()).abs() < 1e-12);
    let h = json(&nesy(
        &dir,
        &[
            "entropy",
            "--circuit",
            "implication.nnf",
            "--probs",
            "0.3,0.5,0.2",
            "--json",
        ],
    ));
    assert!((h["entropy"].as_f64().unwrap() - 1.6335101305458148).abs() < 1e-12);
    let h2 = json(&nesy(
        &dir,
        &[
            "entropy",
            "--circuit",
            "implication.nnf",
            "--probs",
            "0.3,0.5,0.2",
            "--log-base",
            "2",
            "--json",
        ],
    ));
    assert!((h2["entropy"].as_f64().unwrap() - 1.6335101305458148 / 2f64.ln()).abs() < 1e-12);
}

#[test]
fn json_numbers_carry_seventeen_digits() {
    let (_t, dir) = setup();
    let o = nesy(
        &dir,
        &[
            "sl",
            "--formula",
            "implication.sexp",
            "--probs",
            "0.3,0.5,0.2",
            "--json",
        ],
    );
    let text = stdout(&o);
    let raw = text.split("\"sl\":").nth(1).unwrap();
    let mantissa = raw.split('e').next().unwrap();
    let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
    assert_eq!(digits, 17, "{text}");
}

#[test]
fn probs_from_file() {
    let (_t, dir) = setup();
    std::fs::write(dir.join("p.txt"), "0.3\n0.5\n0.2\n").unwrap();
    let o = nesy(
        &dir,
        &["wmc", "--formula", "implication.sexp", "--probs", "p.txt"],
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.88");
}

#[test]
fn gradients_match_library() {
    let (_t, dir) = setup();
    compiled(&dir);
    let c = nesy_core::read_nnf(&std::fs::read_to_string(dir.join("implication.nnf")).unwrap())
        .unwrap();
    let p = nesy_core::ProbVector::new(&[0.3, 0.5, 0.2]).unwrap();
    let trace = nesy_core::queries::evaluate(&c, &p).unwrap();
    let cases = [
        ("wmc", trace.wmc_gradient()),
        ("sl", trace.semantic_loss_gradient().unwrap()),
        ("entropy", trace.entropy_gradient().unwrap()),
    ];
    for (of, expect) in cases {
        let v = json(&nesy(
            &dir,
            &[
                "grad",
                "--circuit",
                "implication.nnf",
                "--probs",
                "0.3,0.5,0.2",
                "--of",
                of,
                "--json",
            ],
        ));
        assert_eq!(v["of"], of);
        let got: Vec<f64> = v["grad"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        assert_eq!(got.len(), 3);
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-14, "{of}: {g} vs {e}");
        }
    }
}

#[test]
fn check_reports_properties() {
    let (_t, dir) = setup();
    compiled(&dir);
    let v = json(&nesy(
        &dir,
        &["check", "--circuit", "implication.nnf", "--json"],
    ));
    assert_eq!(v["decomposable"], true);
    assert_eq!(v["smooth"], true);
    assert_eq!(v["deterministic"], true);
    assert!(v["witness"].is_null());

    // A ∨ A is smooth and decomposable but not deterministic.
    std::fs::write(dir.join("bad.nnf"), "nnf 2 2 1\nL 1\nO 0 2 0 0\n").unwrap();
    let o = nesy(&dir, &["check", "--circuit", "bad.nnf", "--json"]);
    let v = json(&o);
    assert_eq!(v["deterministic"], false);
    assert_eq!(v["witness"]["node"], 1);
    let v = json(&nesy(
        &dir,
        &[
            "check",
            "--circuit",
            "bad.nnf",
            "--determinism",
            "skip",
            "--json",
        ],
    ));
    assert_eq!(v["deterministic"], "unchecked");
}

#[test]
fn count_from_dimacs_and_circuit() {
    let (_t, dir) = setup();
    std::fs::write(dir.join("f.cnf"), "p cnf 3 2\n1 2 0\n-1 3 0\n").unwrap();
    let v = json(&nesy(&dir, &["count", "--dimacs", "f.cnf", "--json"]));
    assert_eq!(v["count"], 4);
    compiled(&dir);
    let o = nesy(&dir, &["count", "--circuit", "implication.nnf"]);
    assert_eq!(stdout(&o).trim(), "7");
}

#[test]
fn unsat_edge_cases() {
    let (_t, dir) = setup();
    std::fs::write(dir.join("u.sexp"), "(and (var 0) (not (var 0)))").unwrap();
    let v = json(&nesy(
        &dir,
        &["wmc", "--formula", "u.sexp", "--probs", "0.4", "--json"],
    ));
    assert_eq!(v["wmc"].as_f64().unwrap(), 0.0);
    let v = json(&nesy(
        &dir,
        &["sl", "--formula", "u.sexp", "--probs", "0.4", "--json"],
    ));
    assert_eq!(v["sl"], "+inf");
    let o = nesy(&dir, &["sl", "--formula", "u.sexp", "--probs", "0.4"]);
    assert_eq!(stdout(&o).trim(), "inf");
    let o = nesy(&dir, &["entropy", "--formula", "u.sexp", "--probs", "0.4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn exit_codes() {
    let (_t, dir) = setup();
    // usage errors
    assert_eq!(nesy(&dir, &["frobnicate"]).status.code(), Some(1));
    assert_eq!(nesy(&dir, &["wmc", "--probs"]).status.code(), Some(1));
    assert_eq!(nesy(&dir, &["--help"]).status.code(), Some(0));
    // input errors
    assert_eq!(
        nesy(
            &dir,
            &["wmc", "--formula", "missing.sexp", "--probs", "0.5"]
        )
        .status
        .code(),
        Some(2)
    );
    std::fs::write(dir.join("broken.sexp"), "(and (var 0)").unwrap();
    assert_eq!(
        nesy(&dir, &["count", "--formula", "broken.sexp"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        nesy(
            &dir,
            &["wmc", "--formula", "implication.sexp", "--probs", "0.5,0.5"]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        nesy(
            &dir,
            &[
                "wmc",
                "--formula",
                "implication.sexp",
                "--probs",
                "0.5,1.5,0.5"
            ]
        )
        .status
        .code(),
        Some(2)
    );
    // resource caps
    let o = nesy(
        &dir,
        &[
            "compile",
            "--formula",
            "implication.sexp",
            "-o",
            "x.nnf",
            "--max-nodes",
            "3",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    let o = nesy(
        &dir,
        &[
            "gen",
            "--kind",
            "path-full",
            "--rows",
            "4",
            "--cols",
            "4",
            "--path-cap",
            "10",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn gen_writes_formula_and_layout() {
    let (_t, dir) = setup();
    let o = nesy(
        &dir,
        &["gen", "--kind", "exactly-one", "--n", "3", "-o", "eo.sexp"],
    );
    assert!(o.status.success());
    let layout: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("eo.sexp.layout.json")).unwrap())
            .unwrap();
    assert_eq!(layout["schema"], 1);
    assert_eq!(layout["var_count"], 3);
    let v = json(&nesy(&dir, &["count", "--formula", "eo.sexp", "--json"]));
    assert_eq!(v["count"], 3);

    let o = nesy(
        &dir,
        &[
            "gen",
            "--kind",
            "total-order",
            "--n",
            "3",
            "-o",
            "to.sexp",
            "--layout",
            "to.json",
        ],
    );
    assert!(o.status.success());
    assert!(dir.join("to.json").exists());
    assert_eq!(
        json(&nesy(&dir, &["count", "--formula", "to.sexp", "--json"]))["count"],
        6
    );

    let o = nesy(
        &dir,
        &[
            "gen", "--kind", "path", "--rows", "3", "--cols", "3", "--source", "0", "--target", "8",
        ],
    );
    let text = stdout(&o);
    std::fs::write(dir.join("path.sexp"), text).unwrap();
    assert_eq!(
        json(&nesy(&dir, &["count", "--formula", "path.sexp", "--json"]))["count"],
        12
    );

    let o = nesy(
        &dir,
        &[
            "gen", "--kind", "tiles", "--rows", "2", "--cols", "2", "-o", "t.sexp",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let layout: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("t.sexp.layout.json")).unwrap())
            .unwrap();
    assert_eq!(layout["vocab"], 5);
    assert_eq!(layout["var_count"], 20);

    std::fs::write(dir.join("a.sexp"), "(var 0)").unwrap();
    std::fs::write(dir.join("b.sexp"), "(or (var 0) (var 1))").unwrap();
    let o = nesy(
        &dir,
        &[
            "gen",
            "--kind",
            "conditional",
            "--parts",
            "a.sexp,b.sexp",
            "-o",
            "c.sexp",
        ],
    );
    assert!(o.status.success());
    let layout: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("c.sexp.layout.json")).unwrap())
            .unwrap();
    assert_eq!(layout["content_vars"], 2);
    assert_eq!(layout["codes"], 2);
}

#[test]
fn train_writes_history() {
    let (_t, dir) = setup();
    let o = nesy(
        &dir,
        &[
            "train",
            "--task",
            "pref",
            "--lambda-sl",
            "1",
            "--epochs",
            "2",
            "--examples",
            "100",
            "--json",
            "m.json",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    let history = v["history"].as_array().unwrap();
    assert_eq!(history.len(), 2);
    for key in ["epoch", "coherent", "incoherent", "constraint"] {
        assert!(history[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn can_train_then_sample() {
    let (_t, dir) = setup();
    let o = nesy(
        &dir,
        &[
            "can-train",
            "--rows",
            "2",
            "--cols",
            "2",
            "--epochs",
            "2",
            "--bootstrap",
            "1",
            "--ramp",
            "1",
            "--json",
            "m.json",
            "--save",
            "g.json",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    for key in ["validity", "diversity", "pipe_tiles"] {
        assert!(v["history"][0].get(key).is_some(), "missing {key}");
    }
    let a = json(&nesy(
        &dir,
        &[
            "sample",
            "--generator",
            "g.json",
            "--n",
            "5",
            "--seed",
            "3",
            "--json",
        ],
    ));
    let b = json(&nesy(
        &dir,
        &[
            "sample",
            "--generator",
            "g.json",
            "--n",
            "5",
            "--seed",
            "3",
            "--json",
        ],
    ));
    assert_eq!(a, b);
    assert_eq!(a["samples"].as_array().unwrap().len(), 5);
    assert_eq!(a["samples"][0].as_array().unwrap().len(), 4);
}
