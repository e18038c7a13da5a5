use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    /// Precision or recall had a zero denominator and was reported as 0.
    pub ill_defined: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Average {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub classes: Vec<ClassMetrics>,
    pub micro: Average,
    pub macro_avg: Average,
    pub weighted: Average,
    pub samples: Average,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Unweighted mean of per-class values.
pub fn macro_average(classes: &[ClassMetrics]) -> Average {
    let n = classes.len().max(1) as f64;
    Average {
        precision: classes.iter().map(|c| c.precision).sum::<f64>() / n,
        recall: classes.iter().map(|c| c.recall).sum::<f64>() / n,
        f1: classes.iter().map(|c| c.f1).sum::<f64>() / n,
        support: classes.iter().map(|c| c.support).sum(),
    }
}

/// Support-weighted mean of per-class values.
pub fn weighted_average(classes: &[ClassMetrics]) -> Average {
    let support: u64 = classes.iter().map(|c| c.support).sum();
    let mean = |get: fn(&ClassMetrics) -> f64| {
        if support == 0 {
            0.0
        } else {
            classes.iter().map(|c| get(c) * c.support as f64).sum::<f64>() / support as f64
        }
    };
    Average {
        precision: mean(|c| c.precision),
        recall: mean(|c| c.recall),
        f1: mean(|c| c.f1),
        support,
    }
}

/// Multi-label classification report over the declared `labels`.
/// Single-label data is passed as singleton sets.
pub fn classification_report<L: Ord + Display>(
    gold: &[BTreeSet<L>],
    pred: &[BTreeSet<L>],
    labels: &[L],
) -> Result<EvalReport> {
    if gold.len() != pred.len() {
        return Err(Error::InvalidInput(format!(
            "gold has {} items, predictions have {}",
            gold.len(),
            pred.len()
        )));
    }
    let known: BTreeSet<&L> = labels.iter().collect();
    if let Some(l) = gold.iter().chain(pred).flatten().find(|l| !known.contains(l)) {
        return Err(Error::InvalidInput(format!("label `{l}` not in the declared alphabet")));
    }

    let mut counts: BTreeMap<&L, (u64, u64, u64)> = labels.iter().map(|l| (l, (0, 0, 0))).collect();
    let mut samples = (0.0, 0.0, 0.0);
    for (g, p) in gold.iter().zip(pred) {
        for l in labels {
            let c = counts.get_mut(l).unwrap();
            match (g.contains(l), p.contains(l)) {
                (true, true) => c.0 += 1,
                (false, true) => c.1 += 1,
                (true, false) => c.2 += 1,
                (false, false) => {}
            }
        }
        let hit = g.intersection(p).count() as u64;
        samples.0 += ratio(hit, p.len() as u64).unwrap_or(0.0);
        samples.1 += ratio(hit, g.len() as u64).unwrap_or(0.0);
        samples.2 += ratio(2 * hit, (g.len() + p.len()) as u64).unwrap_or(0.0);
    }

    let classes: Vec<ClassMetrics> = labels
        .iter()
        .map(|l| {
            let (tp, fp, fn_) = counts[l];
            let precision = ratio(tp, tp + fp);
            let recall = ratio(tp, tp + fn_);
            let (p, r) = (precision.unwrap_or(0.0), recall.unwrap_or(0.0));
            ClassMetrics {
                label: l.to_string(),
                precision: p,
                recall: r,
                f1: f1(p, r),
                support: tp + fn_,
                ill_defined: precision.is_none() || recall.is_none(),
            }
        })
        .collect();

    let (tp, fp, fn_) = counts.values().fold((0, 0, 0), |acc, c| (acc.0 + c.0, acc.1 + c.1, acc.2 + c.2));
    let (mp, mr) = (ratio(tp, tp + fp).unwrap_or(0.0), ratio(tp, tp + fn_).unwrap_or(0.0));
    let support = tp + fn_;
    let n = gold.len().max(1) as f64;

    Ok(EvalReport {
        micro: Average { precision: mp, recall: mr, f1: f1(mp, mr), support },
        macro_avg: macro_average(&classes),
        weighted: weighted_average(&classes),
        samples: Average { precision: samples.0 / n, recall: samples.1 / n, f1: samples.2 / n, support },
        classes,
    })
}

impl EvalReport {
    pub fn to_table(&self) -> String {
        let width = self.classes.iter().map(|c| c.label.len()).max().unwrap_or(0).max(12);
        let mut out = format!("{:>width$} {:>9} {:>9} {:>9} {:>9}\n", "", "precision", "recall", "f1-score", "support");
        for c in &self.classes {
            let flag = if c.ill_defined { " *" } else { "" };
            out.push_str(&format!(
                "{:>width$} {:>9.4} {:>9.4} {:>9.4} {:>9}{flag}\n",
                c.label, c.precision, c.recall, c.f1, c.support
            ));
        }
        out.push('\n');
        for (name, a) in [
            ("micro avg", &self.micro),
            ("macro avg", &self.macro_avg),
            ("weighted avg", &self.weighted),
            ("samples avg", &self.samples),
        ] {
            out.push_str(&format!(
                "{name:>width$} {:>9.4} {:>9.4} {:>9.4} {:>9}\n",
                a.precision, a.recall, a.f1, a.support
            ));
        }
        if self.classes.iter().any(|c| c.ill_defined) {
            out.push_str("\n* zero denominator, reported as 0\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn single(labels: &[&'static str]) -> Vec<BTreeSet<&'static str>> {
        labels.iter().map(|l| BTreeSet::from([*l])).collect()
    }

    #[test]
    fn perfect_prediction() {
        let gold = single(&["a", "b", "c", "a"]);
        let r = classification_report(&gold, &gold, &["a", "b", "c"]).unwrap();
        for c in &r.classes {
            assert_eq!((c.precision, c.recall, c.f1), (1.0, 1.0, 1.0));
        }
        for a in [r.micro, r.macro_avg, r.weighted, r.samples] {
            assert_eq!((a.precision, a.recall, a.f1), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn one_error_matches_confusion_counts() {
        // gold a a b b, pred a b b b: a: tp1 fn1; b: tp2 fp1
        let gold = single(&["a", "a", "b", "b"]);
        let pred = single(&["a", "b", "b", "b"]);
        let r = classification_report(&gold, &pred, &["a", "b"]).unwrap();
        let a = &r.classes[0];
        assert_eq!((a.precision, a.recall, a.support), (1.0, 0.5, 2));
        assert_abs_diff_eq!(a.f1, 2.0 / 3.0);
        let b = &r.classes[1];
        assert_abs_diff_eq!(b.precision, 2.0 / 3.0);
        assert_eq!(b.recall, 1.0);
        assert_abs_diff_eq!(b.f1, 0.8);
        assert_eq!(r.micro.f1, 0.75);
        assert_abs_diff_eq!(r.macro_avg.f1, (2.0 / 3.0 + 0.8) / 2.0);
        assert_eq!(r.samples.precision, 0.75);
    }

    #[test]
    fn absent_class_is_flagged_zero() {
        let gold = single(&["a"]);
        let r = classification_report(&gold, &gold, &["a", "z"]).unwrap();
        let z = &r.classes[1];
        assert!(z.ill_defined);
        assert_eq!((z.precision, z.recall, z.f1, z.support), (0.0, 0.0, 0.0, 0));
        assert!(r.to_table().contains('*'));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(classification_report(&single(&["a"]), &[], &["a"]).is_err());
        assert!(classification_report(&single(&["q"]), &single(&["a"]), &["a"]).is_err());
    }
}
