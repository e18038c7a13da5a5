//! Likert summary per questionnaire construct.

use empathy_workbench::analytics::{survey_summary, Construct, SurveyResponse};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let answers = [
        (Construct::Itu, "itu1", [6, 5, 7]),
        (Construct::Itu, "itu2", [5, 5, 6]),
        (Construct::Pesl, "pesl1", [4, 6, 5]),
        (Construct::Pfa, "pfa1", [3, 5, 4]),
    ];
    let mut responses = Vec::new();
    for (construct, item, ratings) in answers {
        for rating in ratings {
            let r = SurveyResponse { construct, item: item.into(), rating };
            r.validate()?;
            responses.push(r);
        }
    }
    print!("{}", survey_summary(&responses).to_table());
    Ok(())
}
