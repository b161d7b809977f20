//! The embedded expected-values file must equal a fresh recomputation.
//! Set `SPINREP_REGEN=1` to rewrite it.

use spinrep_core::catalog::{build, generate_expected, verify, ExpectedFile, NAMES};

const PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/catalog/expected.json");

#[test]
fn expected_file_is_current() {
    let fresh = generate_expected().unwrap();
    if std::env::var("SPINREP_REGEN").as_deref() == Ok("1") {
        std::fs::write(PATH, fresh.to_json()).unwrap();
        return;
    }
    let on_disk = ExpectedFile::load(std::path::Path::new(PATH)).unwrap();
    assert_eq!(on_disk, fresh, "run with SPINREP_REGEN=1 after an intended change");
    assert_eq!(on_disk, ExpectedFile::embedded());
}

#[test]
fn every_catalog_group_verifies_against_the_file() {
    let file = ExpectedFile::embedded();
    for name in NAMES {
        let exp = file.groups.get(name).expect("group present");
        assert!(!exp.cells.is_empty());
        let results = verify(&build(name).unwrap(), Some(exp));
        for r in &results {
            assert!(r.passed, "{name}: {} ({})", r.name, r.detail);
        }
    }
}

#[test]
fn tampered_cell_is_reported() {
    let mut file = ExpectedFile::embedded();
    let exp = file.groups.get_mut("g18_4").unwrap();
    exp.cells[0].value = spinrep_core::cyclotomic::Cyclotomic::from_integer(7);
    let results = verify(&build("g18_4").unwrap(), Some(exp));
    let cells = results.iter().find(|r| r.name == "character cells").unwrap();
    assert!(!cells.passed);
}
