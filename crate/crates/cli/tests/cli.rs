use std::path::Path;
use std::process::{Command, Output};

use spinrep_core::catalog::ExpectedFile;
use spinrep_core::{CharacterTable, Cyclotomic};

fn spinrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinrep")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn build_reports_structure() {
    let o = spinrep(&["build", "--catalog", "r54_8"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("order            54"));
    assert!(s.contains("center order     3"));
    assert!(s.contains("classes          10"));
    let o = spinrep(&["build", "--catalog", "g18_4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["order"].as_u64(), v["class_count"].as_u64()), (Some(18), Some(6)));
}

#[test]
fn build_reports_parse_errors_with_spans() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.pcp", "group bad;\ngen a 3;\ngen b 3;\nswap b a = a c;\n");
    let o = spinrep(&["build", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("4:14-14: unknown generator"), "{}", stderr(&o));
}

#[test]
fn dual_tables() {
    let o = spinrep(&["dual", "--catalog", "g18_4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> =
        stdout(&o).lines().skip(4).map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(rows, ["Pi(0,0;0)", "Pi(0,0;1)", "Pi(0,1)", "Pi(1,-1)", "Pi(1,0)", "Pi(1,1)"]);

    let o = spinrep(&["dual", "--catalog", "r54_8", "--spin-only", "--format", "json"]);
    let t = CharacterTable::from_json(&stdout(&o)).unwrap();
    let labels: Vec<&str> = t.rows.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["R(-1;0)", "R(-1;1)", "R(1;0)", "R(1;1)"]);
    assert!(t.rows.iter().all(|r| r.kind == "spin" && r.dim == 3));

    let o = spinrep(&["dual", "--catalog", "g54_5", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 11);
}

#[test]
fn dual_json_is_exact_and_deterministic() {
    let a = spinrep(&["dual", "--catalog", "g54_5", "--format", "json"]);
    let b = spinrep(&["dual", "--catalog", "g54_5", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let t = CharacterTable::from_json(&stdout(&a)).unwrap();
    // Burnside from the exported degrees
    assert_eq!(t.rows.iter().map(|r| r.dim * r.dim).sum::<usize>(), 54);
    // column orthogonality at the identity against every other class
    for j in 1..t.classes.len() {
        let s: Cyclotomic = t.rows.iter().map(|r| &r.values[0].exact * &r.values[j].exact.conj()).sum();
        assert!(s.is_zero());
    }
}

#[test]
fn dual_writes_to_file_and_needs_a_tower() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = spinrep(&["dual", "--catalog", "g18_4", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("label,dim,kind"));

    let f = write(dir.path(), "c3.pcp", "gen a 3;\n");
    let o = spinrep(&["dual", &f]);
    assert_eq!(o.status.code(), Some(2));
    let o = spinrep(&["dual", &f, "--tower", "U: a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn extend_and_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ext.pcp");
    let o = spinrep(&["extend", "--catalog", "g18_4", "--pair", "x1,x2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("efficiency       pass"));
    let o = spinrep(&["build", out.to_str().unwrap()]);
    assert!(stdout(&o).contains("order            54"));
    // stdout mode stays a valid presentation
    let o = spinrep(&["extend", "--catalog", "g18_4", "--pair", "x1,x2"]);
    let f = write(dir.path(), "again.pcp", &stdout(&o));
    assert_eq!(spinrep(&["build", &f]).status.code(), Some(0));
}

#[test]
fn extend_rejections() {
    for pair in ["w,x1", "x1,x1", "x1,x1^2", "x1"] {
        let o = spinrep(&["extend", "--catalog", "g18_4", "--pair", pair]);
        assert_eq!(o.status.code(), Some(2), "{pair}");
    }
    // commuting pair whose lift is inconsistent
    let o = spinrep(&["extend", "--catalog", "g54_5", "--pair", "h4,h3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("consistency      failed"));
}

#[test]
fn verify_catalog() {
    for name in ["g18_4", "r54_8", "g54_5", "g20"] {
        let o = spinrep(&["verify", "--catalog", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains(", 0 failed"));
    }
    let o = spinrep(&["verify", "--catalog", "g18_4"]);
    assert!(stdout(&o).contains("pass  character cells  (108 cells)"));
}

#[test]
fn verify_names_corrupted_cells() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = ExpectedFile::embedded();
    let g = file.groups.get_mut("r54_8").unwrap();
    let cell = g.cells.iter_mut().find(|c| c.label == "R(1;0)").unwrap();
    cell.value = Cyclotomic::omega_pow(1);
    let path = write(dir.path(), "expected.json", &file.to_json());
    let o = spinrep(&["verify", "--catalog", "r54_8", "--expected", &path]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("FAIL  character cells  (R(1;0) at (0,0,0,0))"), "{s}");
}

#[test]
fn catalog_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let src = spinrep_core::catalog::source("g18_4")
        .unwrap()
        .replace("tower U: x1 x2 | W: w;", "tower U: x1 x2 | W: w;\n# edited\n");
    write(dir.path(), "g18_4.pcp", &src);
    let o = Command::new(env!("CARGO_BIN_EXE_spinrep"))
        .args(["verify", "--catalog", "g18_4"])
        .env("SPINREP_CATALOG_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn factor_sets() {
    let o = spinrep(&["factor-set", "--label", "R(1;0)"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("R(1;0)  cocycle identity: holds"));
    let o = spinrep(&["factor-set", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["factor_sets"].as_array().unwrap().len(), 4);
    assert_eq!(spinrep(&["factor-set", "--label", "Pi(1,1)"]).status.code(), Some(2));
}

#[test]
fn precision_must_be_positive() {
    assert_eq!(spinrep(&["dual", "--catalog", "g18_4", "--precision", "0"]).status.code(), Some(2));
}

#[test]
fn unsupported_factor_set_exits_3() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures/d8_inner.pcp");
    let o = spinrep(&["dual", fixture]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("orbit of Pi(1,1)"));
    let o = spinrep(&["dual", fixture, "--tower", "U: r2 r u | W: s v"]);
    assert_eq!(o.status.code(), Some(0));
}
