//! Descriptive statistics for an annotated corpus.
//!
//! `cargo run --example corpus_stats [path/to/corpus.json]`

use empathy_workbench::analytics::corpus_stats;
use empathy_workbench::corpus::parse_corpus;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/synthetic_corpus.json").into());
    let corpus = parse_corpus(&std::fs::read(&path)?, false)?;
    print!("{}", corpus_stats(&corpus)?.to_table());
    Ok(())
}
