//! Sentence-level agreement over nominal labels: percentage agreement,
//! Fleiss' multi-pi and Krippendorff's alpha with the nominal metric.

use std::collections::BTreeMap;

use super::ItemTable;
use crate::error::{Error, Result};

fn label_counts<'a, L: Ord + 'a>(labels: impl Iterator<Item = &'a L>) -> BTreeMap<&'a L, usize> {
    let mut counts = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_insert(0) += 1;
    }
    counts
}

fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Mean share of agreeing annotator pairs per item. Items with fewer than
/// two judgments are skipped.
pub fn percentage_agreement<L: Ord + Clone>(table: &ItemTable<L>) -> Result<f64> {
    let mut total = 0.0;
    let mut used = 0usize;
    for item in table.items().iter().filter(|i| i.len() >= 2) {
        let agreeing: usize = label_counts(item.values()).values().map(|&c| pairs(c)).sum();
        total += agreeing as f64 / pairs(item.len()) as f64;
        used += 1;
    }
    if used == 0 {
        return Err(Error::Undefined("no item has two or more judgments".into()));
    }
    Ok(total / used as f64)
}

/// Fleiss' multi-pi. Only items judged by the full number of annotators
/// (the maximum judgments per item in the table) take part.
pub fn multi_pi<L: Ord + Clone>(table: &ItemTable<L>) -> Result<f64> {
    let raters = table.items().iter().map(|i| i.len()).max().unwrap_or(0);
    if raters < 2 {
        return Err(Error::Undefined("multi-pi needs at least two annotators".into()));
    }
    let complete: Vec<_> = table.items().iter().filter(|i| i.len() == raters).collect();

    let mut pooled: BTreeMap<&L, usize> = BTreeMap::new();
    let mut observed = 0.0;
    for item in &complete {
        let counts = label_counts(item.values());
        let agree: usize = counts.values().map(|&c| c * (c - 1)).sum();
        observed += agree as f64 / (raters * (raters - 1)) as f64;
        for (l, c) in counts {
            *pooled.entry(l).or_insert(0) += c;
        }
    }
    let observed = observed / complete.len() as f64;
    let judgments = (complete.len() * raters) as f64;
    let expected: f64 = pooled.values().map(|&c| (c as f64 / judgments).powi(2)).sum();

    chance_corrected(observed, expected, "multi-pi")
}

fn chance_corrected(observed: f64, expected: f64, what: &str) -> Result<f64> {
    if (1.0 - expected).abs() < 1e-15 {
        return if (1.0 - observed).abs() < 1e-15 {
            Ok(1.0)
        } else {
            Err(Error::Undefined(format!("{what}: expected agreement is 1")))
        };
    }
    Ok((observed - expected) / (1.0 - expected))
}

/// Krippendorff's alpha with the nominal distance, from the coincidence
/// matrix of pairable values. Items with a single judgment are not pairable.
pub fn krippendorff_alpha_nominal<L: Ord + Clone>(table: &ItemTable<L>) -> Result<f64> {
    let labels = table.labels();
    let index: BTreeMap<&L, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let k = labels.len();
    let mut coincidence = vec![vec![0.0f64; k]; k];

    for item in table.items().iter().filter(|i| i.len() >= 2) {
        let m = item.len() as f64;
        let counts = label_counts(item.values());
        for (&a, &ca) in &counts {
            for (&b, &cb) in &counts {
                let pairs = if a == b { ca * (ca - 1) } else { ca * cb };
                coincidence[index[a]][index[b]] += pairs as f64 / (m - 1.0);
            }
        }
    }

    let marginals: Vec<f64> = coincidence.iter().map(|row| row.iter().sum()).collect();
    let n: f64 = marginals.iter().sum();
    if n == 0.0 {
        return Err(Error::Undefined("no pairable values".into()));
    }
    let mut disagree_observed = 0.0;
    let mut disagree_expected = 0.0;
    for c in 0..k {
        for j in 0..k {
            if c != j {
                disagree_observed += coincidence[c][j];
                disagree_expected += marginals[c] * marginals[j];
            }
        }
    }
    let d_o = disagree_observed / n;
    let d_e = disagree_expected / (n * (n - 1.0));
    if d_e == 0.0 {
        return if d_o == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::Undefined("alpha: expected disagreement is 0".into()))
        };
    }
    Ok(1.0 - d_o / d_e)
}
