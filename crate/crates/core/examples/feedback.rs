//! End-to-end rubric pipeline: segments, scores and adaptive messages.

use empathy_workbench::scorer::Language;
use empathy_workbench::service::Analyzer;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let draft = "Strengths: The idea is nice. Weaknesses: The pricing is missing.";
    let revised = "Strengths: I really like your idea because it solves a real problem for students! \
                   Weaknesses: I miss the pricing, for example what would a subscription cost you? \
                   I think your customers would find that important!";
    let analyzer = Analyzer::default();
    for text in [draft, revised] {
        let response = analyzer.analyze(text, Language::En)?;
        println!("{}", response.report.to_table(text));
    }
    Ok(())
}
