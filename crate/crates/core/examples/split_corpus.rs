//! Seeded train/validation/test split.

use empathy_workbench::analytics::{split_corpus, SplitRatios};
use empathy_workbench::corpus::{AnnotatedCorpus, AnnotatedDocument};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let documents = (0..500)
        .map(|i| AnnotatedDocument { id: format!("review-{i:03}"), text: "Gut.".into(), annotations: Vec::new() })
        .collect();
    let corpus = AnnotatedCorpus { documents };
    let split = split_corpus(&corpus, SplitRatios::default(), 42)?;
    println!(
        "train {}  val {}  test {}",
        split.train.documents.len(),
        split.val.documents.len(),
        split.test.documents.len()
    );
    let first: Vec<&str> = split.test.documents.iter().take(5).map(|d| d.id.as_str()).collect();
    println!("first test ids: {first:?}");
    Ok(())
}
