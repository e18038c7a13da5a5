//! Inter-annotator agreement on sentence labels and empathy scores,
//! plus the same metrics computed directly on a hand-built table.

use empathy_workbench::agreement::{
    agreement_report, confusion_probability_matrix, krippendorff_alpha_nominal, multi_pi, percentage_agreement,
    ItemTable, ReportConfig,
};
use empathy_workbench::corpus::parse_corpus;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // three annotators, five items
    let table = ItemTable::from_rows([
        ["strength", "strength", "strength"],
        ["weakness", "weakness", "suggestion"],
        ["suggestion", "suggestion", "suggestion"],
        ["weakness", "strength", "weakness"],
        ["none", "none", "none"],
    ]);
    println!("percentage agreement {:.4}", percentage_agreement(&table)?);
    println!("multi-pi             {:.4}", multi_pi(&table)?);
    println!("nominal alpha        {:.4}", krippendorff_alpha_nominal(&table)?);
    println!("\n{}", confusion_probability_matrix(&table)?.to_table());

    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/synthetic_corpus.json");
    let corpus = parse_corpus(&std::fs::read(fixture)?, true)?;
    let report = agreement_report(&corpus, &ReportConfig::default())?;
    print!("{}", report.to_table());
    Ok(())
}
