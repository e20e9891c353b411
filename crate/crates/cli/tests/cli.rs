use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn dehn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dehn")).args(args).env_remove("DEHN_OUT_DIR").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn fibers(v: &Value) -> Vec<i64> {
    let mut f: Vec<i64> = v["exceptional"].as_array().unwrap().iter().map(|x| x["alpha"].as_i64().unwrap()).collect();
    f.sort();
    f
}

#[test]
fn classify_torus_knot() {
    let out = dehn(&["classify", "torus(3,2)", "1/9", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "surgery-classification/1");
    assert_eq!(fibers(&v["pieces"][0]["seifert"]), [2, 3, 53]);
    assert_eq!(v["surgery_core"]["order"], 53);
}

#[test]
fn classify_refuses_outside_regime() {
    let out = dehn(&["classify", "torus(3,2)", "1/5", "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "regime_refusal");
    assert_eq!(v["precondition"], "|q| >= 9");
    let out = dehn(&["classify", "torus(3,2)", "1/5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("|q| >= 9"));
}

#[test]
fn classify_hyperbolic_atom() {
    let out = dehn(&["classify", "hyp(\"k\",1)", "2/9", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["surgery_core"]["kind"], "short_geodesic");
    assert!(v["surgery_core"]["certified_by"].as_str().unwrap().contains("|q| >= 9"));
}

#[test]
fn parse_errors_exit_one() {
    assert_eq!(dehn(&["classify", "torus(4,2)", "1/9"]).status.code(), Some(1));
    assert_eq!(dehn(&["classify", "torus(3,2)", "1/x"]).status.code(), Some(1));
    assert_eq!(dehn(&["frobnicate"]).status.code(), Some(1));
    let out = dehn(&["homology", "torus(3", "1", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "parse");
}

#[test]
fn output_is_byte_identical() {
    for args in [
        ["classify", "cable(13,2; torus(3,2))", "1/9", "--pretty"],
        ["certify", "cable(13,2; hyp(\"K\",1))", "1/30", "--json"],
        ["reduce", "cable(7,2; torus(3,2))", "13", "--json"],
    ] {
        let a = dehn(&args);
        let b = dehn(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn reduce_chains() {
    let v = json(&dehn(&["reduce", "torus(3,2)", "5/3", "--json"]));
    assert_eq!(v["chain"].as_array().unwrap().len(), 1);
    assert_eq!(v["end"], "companion");

    let v = json(&dehn(&["reduce", "cable(13,2; cable(3,2; hyp(\"K\",1)))", "25", "--json"]));
    let slopes: Vec<&str> = v["chain"].as_array().unwrap().iter().map(|s| s["slope"].as_str().unwrap()).collect();
    assert_eq!(slopes, ["25/1", "25/4", "25/16"]);

    let v = json(&dehn(&["reduce", "cable(13,2; torus(3,2))", "1/9", "--json"]));
    assert_eq!(v["end"], "essential_torus");
    assert_eq!(v["hyperbolic"], false);

    let out = dehn(&["reduce", "cable(13,2; torus(3,2))", "inf", "--json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_unknot() {
    let v = json(&dehn(&["certify", "unknot", "5/7", "--json"]));
    assert!(v["verdict"].as_str().unwrap().starts_with("characterising by cited theorem"));
    assert_eq!(v["schema"], "characterising-certificate/1");
    assert_eq!(v["checks"].as_array().unwrap().len(), 7);
}

#[test]
fn homology_is_p() {
    for (e, s, p) in [("torus(3,2)", "-7/3", "7"), ("sum(torus(3,2),torus(5,-2))", "12/5", "12"), ("unknot", "0", "0")] {
        let out = dehn(&["homology", e, s]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), p);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = dehn(&["certify", "unknot", "5/7", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["expression"], "unknot");
}

#[test]
fn length_with_cusp_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cusp.txt");
    fs::write(&path, "# knot cusp\n1 0 0 1\n").unwrap();
    let v = json(&dehn(&["length", "3/4", "--cusp-file", path.to_str().unwrap(), "--json"]));
    assert!((v["length"].as_f64().unwrap() - 5.0).abs() < 1e-12);
    let v = json(&dehn(&["length", "1/22", "--json"]));
    assert_eq!(v["exceeds_2pi"], true);
}

const TORUS_ATLAS: [&str; 7] = ["--max-rs", "5", "--max-p", "15", "--max-q", "15", "--json"];

fn atlas(dir: &std::path::Path, extra: &[&str]) -> Output {
    let mut args = vec!["atlas", "--out-dir", dir.to_str().unwrap()];
    args.extend_from_slice(&TORUS_ATLAS);
    args.extend_from_slice(extra);
    dehn(&args)
}

#[test]
fn atlas_torus_knots_pass_h1() {
    let dir = tempfile::tempdir().unwrap();
    let out = atlas(dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json(&out);
    assert_eq!(summary["h1_violations"].as_array().unwrap().len(), 0);
    let text = fs::read_to_string(dir.path().join("atlas.jsonl")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len() as u64, summary["records"].as_u64().unwrap());
    for (i, line) in lines.iter().enumerate() {
        let r: Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["index"].as_u64().unwrap(), i as u64);
        let p: i64 = r["slope"].as_str().unwrap().split('/').next().unwrap().parse().unwrap();
        assert_eq!(r["h1_order"].as_i64().unwrap(), p.abs());
    }
    // Every coincidence class has at least two members with equal data.
    for class in summary["coincidences"].as_array().unwrap() {
        assert!(class["members"].as_array().unwrap().len() >= 2);
        assert!(class["seifert"]["exceptional"].as_array().unwrap().len() >= 3);
    }
}

#[test]
fn atlas_resume_reproduces_file() {
    let full = tempfile::tempdir().unwrap();
    assert_eq!(atlas(full.path(), &[]).status.code(), Some(0));
    let expected = fs::read(full.path().join("atlas.jsonl")).unwrap();

    let part = tempfile::tempdir().unwrap();
    let path = part.path().join("atlas.jsonl");
    assert_eq!(atlas(part.path(), &["--limit", "700"]).status.code(), Some(0));
    // Cut mid-line.
    let mut bytes = fs::read(&path).unwrap();
    bytes.truncate(bytes.len() - 37);
    fs::write(&path, &bytes).unwrap();
    let out = atlas(part.path(), &["--resume", "--limit", "500"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["resumed_from"], 699);
    let out = atlas(part.path(), &["--resume"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&path).unwrap(), expected);
    assert_eq!(json(&out)["coincidences"], json(&atlas(full.path(), &["--resume"]))["coincidences"]);
}

#[test]
fn atlas_resume_rejects_foreign_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("atlas.jsonl"), "{\"not\":\"a record\"}\n").unwrap();
    assert_eq!(atlas(dir.path(), &["--resume"]).status.code(), Some(3));
}

#[test]
fn atlas_output_dir_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dehn"))
        .args(["atlas", "--max-rs", "3", "--max-p", "3", "--max-q", "2"])
        .env("DEHN_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("atlas.jsonl").exists());
}

#[test]
fn atlas_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(atlas(dir.path(), &["--min-rs", "1"]).status.code(), Some(1));
    let out = dehn(&["atlas", "--out-dir", "/nonexistent/dir", "--max-rs", "3"]);
    assert_eq!(out.status.code(), Some(3));
}
