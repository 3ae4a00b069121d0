use std::path::PathBuf;

use kchlint_core::evalharness::{load_dataset, HallucType, Mutator};
use kchlint_core::{parse, validate, KnowledgeBase};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus")
}

#[test]
fn clean_corpus_has_no_diagnostics() {
    let kb = KnowledgeBase::bundled();
    let samples = load_dataset(&corpus_dir()).unwrap();
    assert!(samples.len() >= 40);
    for s in &samples {
        let module = parse(&s.code).unwrap_or_else(|e| panic!("{}: {e}", s.id));
        let diags = validate(&module, &kb);
        let rendered: Vec<String> = diags.iter().map(|d| d.render()).collect();
        assert!(diags.is_empty(), "{}: {rendered:?}", s.id);
    }
}

#[test]
fn corpus_has_mutation_points() {
    let kb = KnowledgeBase::bundled();
    let samples = load_dataset(&corpus_dir()).unwrap();
    let m = Mutator::new(&kb);
    for (kind, needed) in [
        (HallucType::MissingImport, 50),
        (HallucType::MistypedApi, 50),
        (HallucType::ContextualMismatch, 15),
        (HallucType::IdentifierConflict, 20),
    ] {
        let points: Vec<&str> =
            samples.iter().filter(|s| m.mutate(s, kind, 7).is_ok()).map(|s| s.id.as_str()).collect();
        assert!(points.len() >= needed, "{kind}: {}", points.len());
    }
}
