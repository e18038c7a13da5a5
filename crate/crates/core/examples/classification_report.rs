//! Precision, recall and F1 for single- and multi-label predictions.

use std::collections::BTreeSet;

use empathy_workbench::analytics::classification_report;

fn set(labels: &[&'static str]) -> BTreeSet<&'static str> {
    labels.iter().copied().collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let labels = ["non-empathic", "neutral", "empathic"];
    let gold = [&["empathic"][..], &["neutral"], &["non-empathic"], &["empathic"], &["neutral"]];
    let pred = [&["empathic"][..], &["empathic"], &["non-empathic"], &["neutral"], &["neutral"]];
    let gold: Vec<_> = gold.iter().map(|g| set(g)).collect();
    let pred: Vec<_> = pred.iter().map(|p| set(p)).collect();
    print!("{}", classification_report(&gold, &pred, &labels)?.to_table());

    // multi-label: a sentence can belong to several components
    let components = ["strength", "weakness", "suggestion"];
    let gold = vec![set(&["strength"]), set(&["weakness", "suggestion"]), set(&[])];
    let pred = vec![set(&["strength"]), set(&["weakness"]), set(&["suggestion"])];
    println!();
    print!("{}", classification_report(&gold, &pred, &components)?.to_table());
    Ok(())
}
