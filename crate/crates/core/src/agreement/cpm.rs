use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;

use super::ItemTable;
use crate::error::{Error, Result};

/// Row-conditional probabilities that one annotator picks the column label
/// given that another annotator picked the row label on the same item.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionProbabilityMatrix {
    pub labels: Vec<String>,
    /// Ordered-pair counts; `counts[r][c]` counts pairs (row annotator said r,
    /// column annotator said c).
    pub counts: Vec<Vec<u64>>,
    /// Normalized rows; `None` for rows without support.
    pub probabilities: Vec<Option<Vec<f64>>>,
}

impl ConfusionProbabilityMatrix {
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.probabilities[row].as_ref().map(|r| r[col])
    }

    pub fn undefined_rows(&self) -> Vec<&str> {
        self.labels
            .iter()
            .zip(&self.probabilities)
            .filter(|(_, p)| p.is_none())
            .map(|(l, _)| l.as_str())
            .collect()
    }

    pub fn to_table(&self) -> String {
        let width = self.labels.iter().map(|l| l.len()).max().unwrap_or(0).max(6);
        let mut out = format!("{:width$}", "");
        for l in &self.labels {
            out.push_str(&format!(" {l:>width$}"));
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.probabilities) {
            out.push_str(&format!("{label:width$}"));
            match row {
                Some(row) => {
                    for p in row {
                        out.push_str(&format!(" {p:>width$.4}"));
                    }
                }
                None => {
                    for _ in &self.labels {
                        out.push_str(&format!(" {:>width$}", "n/a"));
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// CPM over the table's sorted label alphabet.
pub fn confusion_probability_matrix<L: Ord + Clone + Display>(
    table: &ItemTable<L>,
) -> Result<ConfusionProbabilityMatrix> {
    let labels = table.labels();
    confusion_probability_matrix_with_labels(table, &labels)
}

/// CPM with a fixed row/column order. Labels in the data must all be listed.
pub fn confusion_probability_matrix_with_labels<L: Ord + Clone + Display>(
    table: &ItemTable<L>,
    labels: &[L],
) -> Result<ConfusionProbabilityMatrix> {
    if table.is_empty() {
        return Err(Error::InvalidInput("empty item table".into()));
    }
    let index: BTreeMap<&L, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let k = labels.len();
    let mut counts = vec![vec![0u64; k]; k];
    for item in table.items() {
        let idx = item
            .values()
            .map(|l| {
                index
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("label `{l}` not in matrix labels")))
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, &a) in idx.iter().enumerate() {
            for (j, &b) in idx.iter().enumerate() {
                if i != j {
                    counts[a][b] += 1;
                }
            }
        }
    }
    let probabilities = counts
        .iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            (total > 0).then(|| row.iter().map(|&c| c as f64 / total as f64).collect())
        })
        .collect();
    Ok(ConfusionProbabilityMatrix {
        labels: labels.iter().map(|l| l.to_string()).collect(),
        counts,
        probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn perfect_agreement_is_identity() {
        let table = ItemTable::from_rows([['A', 'A', 'A'], ['B', 'B', 'B']]);
        let cpm = confusion_probability_matrix(&table).unwrap();
        assert_eq!(cpm.probabilities, vec![Some(vec![1.0, 0.0]), Some(vec![0.0, 1.0])]);
    }

    #[test]
    fn two_annotator_example() {
        let table = ItemTable::from_rows([['S', 'S'], ['S', 'W'], ['W', 'W']]);
        let cpm = confusion_probability_matrix(&table).unwrap();
        assert_eq!(cpm.labels, ["S", "W"]);
        assert_abs_diff_eq!(cpm.get(0, 0).unwrap(), 2.0 / 3.0);
        assert_abs_diff_eq!(cpm.get(0, 1).unwrap(), 1.0 / 3.0);
        assert_abs_diff_eq!(cpm.get(1, 0).unwrap(), 1.0 / 3.0);
        assert_abs_diff_eq!(cpm.get(1, 1).unwrap(), 2.0 / 3.0);
    }

    #[test]
    fn unsupported_rows_are_flagged() {
        let table = ItemTable::from_rows([['A', 'A']]);
        let cpm = confusion_probability_matrix_with_labels(&table, &['A', 'B']).unwrap();
        assert_eq!(cpm.undefined_rows(), ["B"]);
        assert!(cpm.to_table().contains("n/a"));
        assert!(confusion_probability_matrix_with_labels(&table, &['B']).is_err());
        assert!(confusion_probability_matrix(&ItemTable::<char>::new()).is_err());
    }
}
