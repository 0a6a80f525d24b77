//! Golden files for the background tables and for every suite report.
//!
//! Run with `QCALC_BLESS=1` to rewrite the fixtures after an intended change.

use std::fs;
use std::path::PathBuf;

use qcalc::cli::{run_suite, SuiteId, SuiteOptions};
use qcalc::group::GroupPresentation;
use qcalc::wznw::{compute, printed_backgrounds, MetricJson};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn compare(rel: &str, actual: &str) {
    let path = fixture(rel);
    if std::env::var_os("QCALC_BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{rel} differs from the golden file; rerun with QCALC_BLESS=1 if intended");
}

#[test]
fn metric_tables() {
    let g = GroupPresentation::new().unwrap();
    let data = compute(&g).unwrap();
    let a = data.free.sys.alphabet();
    let computed = data.table.to_json(a);
    compare("wznw/metric.json", &(serde_json::to_string_pretty(&computed).unwrap() + "\n"));

    let printed = printed_backgrounds(&data.free).unwrap().to_json(a);
    compare("wznw/metric_printed.json", &(serde_json::to_string_pretty(&printed).unwrap() + "\n"));

    // The files deserialize back to the same tables.
    let text = fs::read_to_string(fixture("wznw/metric.json")).unwrap();
    let back: MetricJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back, computed);
}

#[test]
fn suite_reports() {
    for id in SuiteId::MODULES {
        let report = run_suite(id, &SuiteOptions::default()).unwrap().without_timing();
        compare(&format!("reports/{id}.json"), &(report.to_json().unwrap() + "\n"));
    }
}
