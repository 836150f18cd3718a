use std::path::PathBuf;

use nichebench_core::report::{self, to_compact};
use nichebench_core::*;
use nichebench_wasm::Explorer;

fn on_disk() -> Corpus {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    load_corpus(&CorpusPaths::in_dir(dir)).unwrap()
}

#[test]
fn embedded_corpus_matches_fixture_on_disk() {
    let ex = Explorer::load().unwrap();
    let disk = on_disk();
    assert_eq!(
        ex.taxonomy_json(),
        to_compact(&report::taxonomy_json(disk.taxonomy()))
    );
    assert_eq!(
        ex.institutions_json(),
        to_compact(&report::institutions_json(disk.institutions()))
    );
}

#[test]
fn rate_agrees_with_engine() {
    let ex = Explorer::load().unwrap();
    let disk = on_disk();
    let got = ex
        .rate_json(
            r#"{"subject": 60101, "level": 3, "weights": [10, 0, 40, 25, 5], "min_pubs": 0}"#,
        )
        .unwrap();
    let mut q = RatingQuery::new(
        SubjectCode(60101),
        Level::Niche,
        WeightScheme::new([10.0, 0.0, 40.0, 25.0, 5.0]).unwrap(),
    );
    q.min_pubs = 0;
    assert_eq!(
        got,
        to_compact(&report::rating_json(&rate_subject(&disk, &q).unwrap()))
    );
}

#[test]
fn benchmark_and_overall() {
    let ex = Explorer::load().unwrap();
    let b: serde_json::Value = serde_json::from_str(
        &ex.benchmark_json(r#"{"institutions": ["U03", "U01"], "subject": 60000, "level": 1}"#)
            .unwrap(),
    )
    .unwrap();
    assert_eq!(b["entries"][1]["institution"], "U01");
    assert_eq!(b["entries"][1]["pct"][0], 100.0);

    let o: serde_json::Value = serde_json::from_str(
        &ex.overall_json(r#"{"preset": "quality", "min_pubs": 5}"#)
            .unwrap(),
    )
    .unwrap();
    assert_eq!(o["subjects"].as_array().unwrap().len(), 15);
}

#[test]
fn errors_come_back_as_json() {
    let ex = Explorer::load().unwrap();
    let zero = ex
        .rate_json(r#"{"subject": 60000, "level": 1, "weights": [0, 0, 0, 0, 0]}"#)
        .unwrap_err();
    assert!(zero.contains("BadRequest"), "{zero}");
    let empty = ex
        .rate_json(r#"{"subject": 60000, "level": 1, "weights": "equal", "min_pubs": 9999}"#)
        .unwrap_err();
    let v: serde_json::Value = serde_json::from_str(&empty).unwrap();
    assert_eq!(v["error"], "EmptyScope");
    let six = ex
        .benchmark_json(r#"{"institutions": ["U01","U02","U03","U04","U05","U06"], "subject": 60000, "level": 1}"#)
        .unwrap_err();
    assert!(six.contains("TooManyInstitutions"));
}
