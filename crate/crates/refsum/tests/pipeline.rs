use std::fs;
use std::path::{Path, PathBuf};

use refsum::config::PipelineConfig;
use refsum::{run_pipeline, Error};

const ARTIFACTS: [&str; 9] = [
    "documents.jsonl",
    "tweets.jsonl",
    "clusters.jsonl",
    "references.jsonl",
    "comparison.jsonl",
    "model.json",
    "summaries.jsonl",
    "eval.jsonl",
    "report.md",
];

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic/pipeline.toml")
}

fn config_into(out: &Path) -> PipelineConfig {
    let mut cfg = PipelineConfig::load(&fixture()).unwrap();
    cfg.paths.out_dir = out.to_path_buf();
    cfg
}

#[test]
fn every_artifact_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run_pipeline(&config_into(a.path()), false).unwrap();
    let rb = run_pipeline(&config_into(b.path()), false).unwrap();
    assert_eq!(ra.report, rb.report);
    assert_eq!(ra.clusters, 3);
    assert!(ra.skipped.is_empty());
    assert_eq!(ra.non_optimal, 0);
    for name in ARTIFACTS {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn resume_reuses_vouched_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_into(dir.path());
    let first = run_pipeline(&cfg, false).unwrap();
    assert!(first.reused.is_empty());
    let snapshot: Vec<Vec<u8>> = ARTIFACTS
        .iter()
        .map(|n| fs::read(dir.path().join(n)).unwrap())
        .collect();

    let again = run_pipeline(&cfg, true).unwrap();
    for stage in [
        "prep",
        "cluster",
        "reference",
        "compare",
        "train",
        "summarize",
        "eval",
    ] {
        assert!(
            again.reused.contains(&stage),
            "{stage} not reused: {:?}",
            again.reused
        );
    }
    assert_eq!(again.report, first.report);

    // A missing or edited artifact is recomputed; the rest is still reused.
    fs::remove_file(dir.path().join("references.jsonl")).unwrap();
    fs::write(dir.path().join("clusters.jsonl"), "{}\n").unwrap();
    let repaired = run_pipeline(&cfg, true).unwrap();
    assert!(repaired.reused.contains(&"prep"));
    assert!(!repaired.reused.contains(&"cluster"));
    for (name, bytes) in ARTIFACTS.iter().zip(&snapshot) {
        assert_eq!(&fs::read(dir.path().join(name)).unwrap(), bytes, "{name}");
    }

    // A different config invalidates the manifest.
    let mut other = cfg.clone();
    other.seed += 1;
    assert!(run_pipeline(&other, true).unwrap().reused.is_empty());
}

#[test]
fn resume_without_manifest_runs_everything() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_pipeline(&config_into(dir.path()), true).unwrap();
    assert!(report.reused.is_empty());
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config_into(dir.path());
    cfg.paths.tweets = dir.path().join("absent.jsonl");
    assert!(matches!(run_pipeline(&cfg, false), Err(Error::Io { .. })));
}

#[test]
fn malformed_line_reports_its_position() {
    let dir = tempfile::tempdir().unwrap();
    let docs = dir.path().join("documents.jsonl");
    fs::copy(fixture().with_file_name("documents.jsonl"), &docs).unwrap();
    let mut text = fs::read_to_string(&docs).unwrap();
    text.push_str("{not json\n");
    fs::write(&docs, text).unwrap();
    let mut cfg = config_into(&dir.path().join("out"));
    cfg.paths.documents = docs;
    match run_pipeline(&cfg, false) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 16),
        other => panic!("expected a parse error, got {other:?}"),
    }
}
