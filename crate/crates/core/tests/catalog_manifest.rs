use std::path::PathBuf;

use cdiff_core::catalog::{parse_manifest, run_manifest, Verdict};

fn bundled() -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../manifests/paper_examples.json");
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn bundled_manifest_passes_through_the_library() {
    let items = parse_manifest(&bundled()).unwrap();
    assert!(items.len() > 30);
    for (item, report) in items.iter().zip(run_manifest(&items)) {
        let report = report.unwrap_or_else(|e| panic!("{} on {}: {e}", item.entry, item.field));
        assert_eq!(
            report.verdict,
            Verdict::Pass,
            "{} on {}: {:?}",
            item.entry,
            item.field,
            report.counterexamples
        );
        assert!(report.checks.iter().all(|c| c.pass));
    }
}

#[test]
fn g_dependent_entries_echo_the_generator() {
    let items = parse_manifest(&bundled()).unwrap();
    let fixtures: Vec<_> = items.into_iter().filter(|i| i.entry == "fixture").take(3).collect();
    for report in run_manifest(&fixtures) {
        let report = report.unwrap();
        assert!(
            report.notes.iter().any(|n| n.contains("primitive element")),
            "{:?}",
            report.notes
        );
        assert!(!report.generator.is_empty());
    }
}
