//! Golden-file round trips: the shipped `.proof` files must stay byte-equal
//! to the canonical serialization of the programmatic fixtures, and parsing
//! any of them back must reproduce the bytes exactly.

use std::fs;
use std::path::PathBuf;

use incidence::doc::fixture_documents;
use incidence::fixtures::all;
use incidence::parse::parse_document;
use incidence::serialize::serialize_document;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Rewrites every golden file from the programmatic fixtures. Run with
/// `REGEN_FIXTURES=1 cargo test -p incidence --test golden -- --ignored`.
#[test]
#[ignore = "writes the golden fixture files"]
fn regenerate_golden_files() {
    if std::env::var_os("REGEN_FIXTURES").is_none() {
        panic!("set REGEN_FIXTURES=1 to rewrite the golden files");
    }
    fs::create_dir_all(golden_dir()).unwrap();
    for fx in all() {
        for doc in fixture_documents(&fx) {
            let path = golden_dir().join(format!("{}.proof", doc.file_stem()));
            fs::write(&path, serialize_document(&doc)).unwrap();
        }
    }
}

#[test]
fn golden_files_match_the_programmatic_fixtures() {
    let mut seen = 0;
    for fx in all() {
        for doc in fixture_documents(&fx) {
            let path = golden_dir().join(format!("{}.proof", doc.file_stem()));
            let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
            assert_eq!(text, serialize_document(&doc), "{path:?} is stale");
            seen += 1;
        }
    }
    assert_eq!(seen, 17);
}

#[test]
fn golden_files_reserialize_to_identical_bytes() {
    let mut count = 0;
    for entry in fs::read_dir(golden_dir()).unwrap() {
        let path = entry.unwrap().path();
        assert_eq!(path.extension().and_then(|e| e.to_str()), Some("proof"), "{path:?}");
        let text = fs::read_to_string(&path).unwrap();
        let doc = parse_document(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"));
        assert_eq!(serialize_document(&doc), text, "{path:?}");
        count += 1;
    }
    assert_eq!(count, 17, "unexpected extra files in the fixtures directory");
}
