use serde::Serialize;

/// Binary confusion counts; "positive" means hallucinated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    /// False when nothing was flagged; precision is then reported as 1.0.
    pub precision_defined: bool,
    /// False when there were no hallucinated samples; recall is then 1.0.
    pub recall_defined: bool,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn scores(&self) -> Scores {
        let precision = ratio(self.tp, self.tp + self.fp);
        let recall = ratio(self.tp, self.tp + self.fn_);
        let (p, r) = (precision.unwrap_or(1.0), recall.unwrap_or(1.0));
        let f1 = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        Scores {
            precision: p,
            recall: r,
            f1,
            accuracy: ratio(self.tp + self.tn, self.total()).unwrap_or(0.0),
            precision_defined: precision.is_some(),
            recall_defined: recall.is_some(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_counts() {
        let s = Confusion { tp: 141, fp: 0, fn_: 20, tn: 39 }.scores();
        assert!((s.precision - 1.0).abs() < 1e-9);
        assert!((s.recall - 141.0 / 161.0).abs() < 1e-12);
        assert!((s.recall - 0.876).abs() < 0.001);
        assert!((s.f1 - 0.934).abs() < 0.001);
        assert!((s.accuracy - 0.9).abs() < 1e-12);
    }

    #[test]
    fn hand_computed() {
        let s = Confusion { tp: 3, fp: 1, fn_: 2, tn: 4 }.scores();
        assert_eq!(s.precision, 0.75);
        assert_eq!(s.recall, 0.6);
        assert!((s.f1 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.accuracy, 0.7);
    }

    #[test]
    fn all_clean_convention() {
        let s = Confusion { tp: 0, fp: 0, fn_: 0, tn: 5 }.scores();
        assert_eq!(s.precision, 1.0);
        assert!(!s.precision_defined);
        assert_eq!(s.accuracy, 1.0);
    }
}
