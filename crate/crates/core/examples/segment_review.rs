//! Splits a review into strength, weakness and suggestion components.

use empathy_workbench::corpus::slice;
use empathy_workbench::segmenter::{segment_review, SegmenterConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let review = "Die Idee ist gut und klar beschrieben. Leider fehlt eine Grafik zum Ablauf. \
                  Du solltest eine Skizze ergänzen. Schwächen: Der Preis wird nicht erklärt.";
    for segment in segment_review(review, &SegmenterConfig::default())? {
        println!("{:<10} {}", segment.label.as_str(), slice(review, segment.span));
    }
    Ok(())
}
