use std::path::PathBuf;

use kchlint_core::evalharness::{
    evaluate, load_dataset, write_dataset, EvalOptions, HallucType, Label, Mutator, Sample,
};
use kchlint_core::KnowledgeBase;

fn clean() -> Vec<Sample> {
    load_dataset(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus")).unwrap()
}

fn mixed(kb: &KnowledgeBase) -> Vec<Sample> {
    let clean = clean();
    let m = Mutator::new(kb);
    let mut out = clean.clone();
    for kind in HallucType::ALL {
        out.extend(m.corpus(&clean, kind, 10, 3).into_iter().map(|(s, _)| s));
    }
    out
}

#[test]
fn dataset_round_trips_through_disk() {
    let kb = KnowledgeBase::bundled();
    let samples = mixed(&kb);
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), &samples).unwrap();
    assert_eq!(load_dataset(dir.path()).unwrap(), samples);
}

#[test]
fn mutations_are_deterministic() {
    let kb = KnowledgeBase::bundled();
    assert_eq!(mixed(&kb), mixed(&kb));
}

#[test]
fn mixed_corpus_scores() {
    let kb = KnowledgeBase::bundled();
    let samples = mixed(&kb);
    let report = evaluate(&samples, &kb, EvalOptions::default());
    let clean = samples.iter().filter(|s| s.label == Label::Clean).count();
    assert_eq!(report.confusion.fp, 0);
    assert_eq!(report.confusion.tn, clean);
    assert_eq!(report.confusion.fn_, 0);
    assert_eq!(report.scores.precision, 1.0);
    assert!(report.fix_accuracy >= 0.9, "{}", report.render_text());
    assert_eq!(report.per_type["missing-import"].fix_correct, 10);
    assert!(report.parse_failures.is_empty());
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["fn"], 0);
    assert!(json.get("wall_time").is_none());
}

#[test]
fn duplicate_ids_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let s = Sample::clean("dup", "x = 1\n");
    write_dataset(dir.path(), std::slice::from_ref(&s)).unwrap();
    let index = dir.path().join("index.json");
    let text = std::fs::read_to_string(&index).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = doc["samples"][0].clone();
    let doubled = serde_json::json!({ "samples": [entry.clone(), entry] });
    std::fs::write(&index, doubled.to_string()).unwrap();
    assert!(load_dataset(dir.path()).unwrap_err().to_string().contains("duplicate"));
}
