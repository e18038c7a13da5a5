use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::AnnotatedCorpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios { train: 0.7, val: 0.2, test: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSplit {
    pub train: AnnotatedCorpus,
    pub val: AnnotatedCorpus,
    pub test: AnnotatedCorpus,
}

/// Partition sizes: floor allocation for validation and test, the remainder
/// goes to training.
pub fn split_sizes(n: usize, ratios: SplitRatios) -> Result<(usize, usize, usize)> {
    let all = [ratios.train, ratios.val, ratios.test];
    if all.iter().any(|r| r.is_nan() || *r <= 0.0) || (all.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "ratios must be positive and sum to 1, got {}/{}/{}",
            ratios.train, ratios.val, ratios.test
        )));
    }
    // absorbs representation error such as 0.1 * 30 = 3.0000000000000004
    let floor = |r: f64| (n as f64 * r + 1e-9).floor() as usize;
    let val = floor(ratios.val);
    let test = floor(ratios.test);
    Ok((n - val - test, val, test))
}

/// Seeded shuffle of document ids, cut into train/validation/test. Each part
/// keeps the corpus order of its documents.
pub fn split_corpus(corpus: &AnnotatedCorpus, ratios: SplitRatios, seed: u64) -> Result<CorpusSplit> {
    let n = corpus.documents.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!("cannot split a corpus of {n} documents")));
    }
    let (train_n, val_n, _) = split_sizes(n, ratios)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| corpus.documents[a].id.cmp(&corpus.documents[b].id));
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut part = vec![0u8; n];
    for (rank, &doc) in order.iter().enumerate() {
        part[doc] = if rank < train_n {
            0
        } else if rank < train_n + val_n {
            1
        } else {
            2
        };
    }
    let pick = |p: u8| AnnotatedCorpus {
        documents: corpus
            .documents
            .iter()
            .zip(&part)
            .filter(|(_, &q)| q == p)
            .map(|(d, _)| d.clone())
            .collect(),
    };
    Ok(CorpusSplit { train: pick(0), val: pick(1), test: pick(2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::AnnotatedDocument;

    fn corpus(n: usize) -> AnnotatedCorpus {
        AnnotatedCorpus {
            documents: (0..n)
                .map(|i| AnnotatedDocument { id: format!("doc{i:04}"), text: "x".into(), annotations: vec![] })
                .collect(),
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(split_sizes(500, SplitRatios::default()).unwrap(), (350, 100, 50));
        assert_eq!(split_sizes(10, SplitRatios::default()).unwrap(), (7, 2, 1));
        assert_eq!(split_sizes(30, SplitRatios::default()).unwrap(), (21, 6, 3));
        assert!(split_sizes(10, SplitRatios { train: 0.5, val: 0.5, test: 0.1 }).is_err());
        assert!(split_sizes(10, SplitRatios { train: 1.0, val: 0.0, test: 0.0 }).is_err());
    }

    #[test]
    fn reproducible_partition() {
        let c = corpus(50);
        let a = split_corpus(&c, SplitRatios::default(), 42).unwrap();
        let b = split_corpus(&c, SplitRatios::default(), 42).unwrap();
        assert_eq!(a, b);
        let other = split_corpus(&c, SplitRatios::default(), 43).unwrap();
        assert_ne!(a.test, other.test);
    }

    #[test]
    fn too_small() {
        assert!(split_corpus(&corpus(2), SplitRatios::default(), 1).is_err());
    }
}
