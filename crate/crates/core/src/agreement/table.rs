use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

/// Nominal judgments: one map annotator -> label per item.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemTable<L> {
    items: Vec<BTreeMap<String, L>>,
}

impl<L> Default for ItemTable<L> {
    fn default() -> Self {
        ItemTable { items: Vec::new() }
    }
}

impl<L: Ord + Clone> ItemTable<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, item: BTreeMap<String, L>) {
        self.items.push(item);
    }

    /// Builds a table from rows of labels; annotators are named by column index.
    pub fn from_rows<R, I>(rows: R) -> Self
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = L>,
    {
        let items = rows
            .into_iter()
            .map(|row| row.into_iter().enumerate().map(|(i, l)| (format!("r{i}"), l)).collect())
            .collect();
        ItemTable { items }
    }

    pub fn items(&self) -> &[BTreeMap<String, L>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Sorted label alphabet observed in the table.
    pub fn labels(&self) -> Vec<L> {
        let set: BTreeSet<&L> = self.items.iter().flat_map(|i| i.values()).collect();
        set.into_iter().cloned().collect()
    }

    pub fn map_labels<M: Ord + Clone>(&self, f: impl Fn(&L) -> M) -> ItemTable<M> {
        ItemTable {
            items: self
                .items
                .iter()
                .map(|item| item.iter().map(|(a, l)| (a.clone(), f(l))).collect())
                .collect(),
        }
    }
}

impl<L: Ord + Clone> FromIterator<BTreeMap<String, L>> for ItemTable<L> {
    fn from_iter<T: IntoIterator<Item = BTreeMap<String, L>>>(iter: T) -> Self {
        ItemTable { items: iter.into_iter().collect() }
    }
}
