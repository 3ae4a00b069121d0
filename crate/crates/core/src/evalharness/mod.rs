//! Corpus loading, scoring and synthetic mutation.
//!
//! A sample counts as detected when validation reports at least one
//! diagnostic. A fix is correct when the repaired tree equals the expected
//! code's tree, ignoring positions.

mod dataset;
mod metrics;
mod mutate;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

pub use dataset::{load_dataset, write_dataset, DatasetError, HallucType, Label, Sample, INDEX_FILE};
pub use metrics::{Confusion, Scores};
pub use mutate::{MutationDetail, MutationError, Mutator};

use crate::correction::{apply_fixes, plan_fixes, FixOptions};
use crate::knowledge_base::KnowledgeBase;
use crate::syntax::parse;
use crate::validation::validate;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BreakdownRow {
    pub samples: usize,
    pub detected: usize,
    pub fix_correct: usize,
    pub detection_rate: f64,
    /// Correct fixes over detected samples.
    pub fix_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleOutcome {
    pub id: String,
    pub label: Label,
    pub detected: bool,
    pub diagnostics: usize,
    /// `None` when no fix was scored (clean, undetected, or no expected code).
    pub fix_correct: Option<bool>,
    pub parse_failure: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    #[serde(flatten)]
    pub confusion: Confusion,
    #[serde(flatten)]
    pub scores: Scores,
    pub fix_attempted: usize,
    pub fix_correct: usize,
    pub fix_accuracy: f64,
    pub parse_failures: Vec<String>,
    pub per_type: BTreeMap<String, BreakdownRow>,
    pub per_library: BTreeMap<String, BreakdownRow>,
    pub samples: Vec<SampleOutcome>,
    /// Seconds; filled only when timing is requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions {
    pub fix: FixOptions,
    pub timing: bool,
}

fn outcome(sample: &Sample, kb: &KnowledgeBase, fix: FixOptions) -> SampleOutcome {
    let mut out = SampleOutcome {
        id: sample.id.clone(),
        label: sample.label,
        detected: false,
        diagnostics: 0,
        fix_correct: None,
        parse_failure: false,
    };
    let Ok(module) = parse(&sample.code) else {
        out.parse_failure = true;
        return out;
    };
    let diagnostics = validate(&module, kb);
    out.diagnostics = diagnostics.len();
    out.detected = !diagnostics.is_empty();
    if out.detected && sample.label == Label::Hallucinated {
        if let Some(expected) = &sample.expected_fixed_code {
            let plan = plan_fixes(&module, &diagnostics, fix);
            let fixed = apply_fixes(&module, &plan.edits);
            out.fix_correct = Some(parse(expected).is_ok_and(|e| e.structurally_eq(&fixed)));
        }
    }
    out
}

fn row(outcomes: &[&SampleOutcome]) -> BreakdownRow {
    let samples = outcomes.len();
    let detected = outcomes.iter().filter(|o| o.detected).count();
    let fix_correct = outcomes.iter().filter(|o| o.fix_correct == Some(true)).count();
    let rate = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
    BreakdownRow {
        samples,
        detected,
        fix_correct,
        detection_rate: rate(detected, samples),
        fix_accuracy: rate(fix_correct, detected),
    }
}

pub fn evaluate(samples: &[Sample], kb: &KnowledgeBase, options: EvalOptions) -> EvalReport {
    let started = Instant::now();
    let outcomes: Vec<SampleOutcome> = samples.iter().map(|s| outcome(s, kb, options.fix)).collect();
    let wall_time = options.timing.then(|| started.elapsed().as_secs_f64());

    let mut confusion = Confusion::default();
    for o in &outcomes {
        match (o.label, o.detected) {
            (Label::Hallucinated, true) => confusion.tp += 1,
            (Label::Hallucinated, false) => confusion.fn_ += 1,
            (Label::Clean, true) => confusion.fp += 1,
            (Label::Clean, false) => confusion.tn += 1,
        }
    }
    let fix_attempted = outcomes.iter().filter(|o| o.fix_correct.is_some()).count();
    let fix_correct = outcomes.iter().filter(|o| o.fix_correct == Some(true)).count();

    let mut by_type: BTreeMap<String, Vec<&SampleOutcome>> = BTreeMap::new();
    let mut by_library: BTreeMap<String, Vec<&SampleOutcome>> = BTreeMap::new();
    for (s, o) in samples.iter().zip(&outcomes) {
        let ty = s.halluc_type.map_or("clean", HallucType::as_str);
        by_type.entry(ty.to_string()).or_default().push(o);
        let lib = s.library.clone().unwrap_or_else(|| "unspecified".to_string());
        by_library.entry(lib).or_default().push(o);
    }

    EvalReport {
        confusion,
        scores: confusion.scores(),
        fix_attempted,
        fix_correct,
        fix_accuracy: if confusion.tp == 0 { 0.0 } else { fix_correct as f64 / confusion.tp as f64 },
        parse_failures: outcomes.iter().filter(|o| o.parse_failure).map(|o| o.id.clone()).collect(),
        per_type: by_type.into_iter().map(|(k, v)| (k, row(&v))).collect(),
        per_library: by_library.into_iter().map(|(k, v)| (k, row(&v))).collect(),
        samples: outcomes,
        wall_time,
    }
}

impl EvalReport {
    /// Plain-text summary with per-type and per-library tables.
    pub fn render_text(&self) -> String {
        let c = &self.confusion;
        let s = &self.scores;
        let mut out = String::new();
        out.push_str(&format!("samples     {}\n", c.total()));
        out.push_str(&format!("tp {}  fp {}  fn {}  tn {}\n", c.tp, c.fp, c.fn_, c.tn));
        let flag = if s.precision_defined { "" } else { "  (nothing flagged)" };
        out.push_str(&format!("precision   {:.3}{flag}\n", s.precision));
        out.push_str(&format!("recall      {:.3}\n", s.recall));
        out.push_str(&format!("f1          {:.3}\n", s.f1));
        out.push_str(&format!("accuracy    {:.3}\n", s.accuracy));
        out.push_str(&format!("fix         {}/{} ({:.3})\n", self.fix_correct, c.tp, self.fix_accuracy));
        if !self.parse_failures.is_empty() {
            out.push_str(&format!("parse failures: {}\n", self.parse_failures.join(", ")));
        }
        for (title, table) in [("type", &self.per_type), ("library", &self.per_library)] {
            out.push_str(&format!("\n{title:<22} {:>7} {:>8} {:>9} {:>7}\n", "samples", "detected", "detect%", "fix%"));
            for (k, r) in table {
                out.push_str(&format!(
                    "{k:<22} {:>7} {:>8} {:>9.1} {:>7.1}\n",
                    r.samples,
                    r.detected,
                    100.0 * r.detection_rate,
                    100.0 * r.fix_accuracy
                ));
            }
        }
        if let Some(t) = self.wall_time {
            out.push_str(&format!("\nwall time   {t:.3}s\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_clean_corpus() {
        let kb = KnowledgeBase::bundled();
        let samples = vec![Sample::clean("a", "import numpy as np\nx = np.mean([1])\n")];
        let r = evaluate(&samples, &kb, EvalOptions::default());
        assert_eq!(r.confusion, Confusion { tp: 0, fp: 0, fn_: 0, tn: 1 });
        assert_eq!(r.scores.precision, 1.0);
        assert!(!r.scores.precision_defined);
        assert!(r.wall_time.is_none());
    }

    #[test]
    fn single_hallucinated_sample() {
        let kb = KnowledgeBase::bundled();
        let s = Sample {
            id: "h".into(),
            code: "import pandas as pd\npd.read_exel('data.csv')\n".into(),
            label: Label::Hallucinated,
            halluc_type: Some(HallucType::MistypedApi),
            library: Some("pandas".into()),
            expected_fixed_code: Some("import pandas as pd\npd.read_csv('data.csv')\n".into()),
        };
        let r = evaluate(&[s], &kb, EvalOptions { timing: true, ..Default::default() });
        assert_eq!((r.scores.precision, r.scores.recall, r.fix_accuracy), (1.0, 1.0, 1.0));
        assert!(r.wall_time.is_some());
        assert_eq!(r.per_library["pandas"].fix_correct, 1);
    }

    #[test]
    fn parse_failures_are_not_detections() {
        let kb = KnowledgeBase::bundled();
        let mut s = Sample::clean("bad", "def f(:");
        s.label = Label::Hallucinated;
        s.halluc_type = Some(HallucType::MistypedApi);
        let r = evaluate(&[s], &kb, EvalOptions::default());
        assert_eq!(r.confusion.fn_, 1);
        assert_eq!(r.parse_failures, vec!["bad".to_string()]);
    }
}
