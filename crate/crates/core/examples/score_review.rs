//! Rubric scores for single review components, with the cues that fired.

use empathy_workbench::scorer::{Language, Rubric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples = [
        (Language::En, "I think your idea is brilliant!"),
        (Language::En, "Add a picture."),
        (Language::De, "Die Idee ist sehr gut."),
        (Language::De, "Du solltest ein Foto ergänzen, weil man z.B. das Produkt dann besser versteht. Was meinst du? Ich bin überzeugt, dass es hilft!"),
    ];
    for (language, text) in samples {
        let score = Rubric::builtin(language).score(text)?;
        println!("[{language}] {text}");
        println!("  cognitive {}  emotional {}", score.cognitive.value(), score.emotional.value());
        for hit in &score.cues {
            println!("  {:?}: {}", hit.cue, hit.text);
        }
    }
    Ok(())
}
