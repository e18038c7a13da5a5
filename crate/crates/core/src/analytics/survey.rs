use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Post-use questionnaire constructs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Construct {
    /// Intention to use.
    #[serde(rename = "ITU")]
    Itu,
    /// Perceived empathy skill learning.
    #[serde(rename = "PESL")]
    Pesl,
    /// Perceived feedback accuracy.
    #[serde(rename = "PFA")]
    Pfa,
}

impl Construct {
    pub const ALL: [Construct; 3] = [Construct::Itu, Construct::Pesl, Construct::Pfa];

    pub fn as_str(&self) -> &'static str {
        match self {
            Construct::Itu => "ITU",
            Construct::Pesl => "PESL",
            Construct::Pfa => "PFA",
        }
    }
}

impl fmt::Display for Construct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const LIKERT_MIN: u8 = 1;
pub const LIKERT_MAX: u8 = 7;
pub const LIKERT_MIDPOINT: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyResponse {
    pub construct: Construct,
    pub item: String,
    pub rating: u8,
}

impl SurveyResponse {
    pub fn validate(&self) -> Result<()> {
        if (LIKERT_MIN..=LIKERT_MAX).contains(&self.rating) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "rating {} for item `{}` outside {LIKERT_MIN}..={LIKERT_MAX}",
                self.rating, self.item
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructSummary {
    pub construct: Construct,
    pub n: usize,
    pub mean: f64,
    pub std_dev: f64,
    /// Mean minus the neutral midpoint 4.
    pub delta: f64,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveySummary {
    pub constructs: Vec<ConstructSummary>,
}

/// Mean and sample standard deviation per construct. Constructs without
/// responses are left out.
pub fn survey_summary(responses: &[SurveyResponse]) -> SurveySummary {
    let constructs = Construct::ALL
        .into_iter()
        .filter_map(|construct| {
            let ratings: Vec<f64> = responses
                .iter()
                .filter(|r| r.construct == construct)
                .map(|r| r.rating as f64)
                .collect();
            if ratings.is_empty() {
                return None;
            }
            let n = ratings.len();
            let mean = ratings.iter().sum::<f64>() / n as f64;
            let std_dev = if n > 1 {
                (ratings.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            let delta = mean - LIKERT_MIDPOINT;
            Some(ConstructSummary { construct, n, mean, std_dev, delta, positive: delta > 0.0 })
        })
        .collect();
    SurveySummary { constructs }
}

impl SurveySummary {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for c in &self.constructs {
            out.push_str(&format!(
                "{:<5} {:.2} (SD= {:.2})  n={}  {:+.2} vs 4{}\n",
                c.construct.as_str(),
                c.mean,
                c.std_dev,
                c.n,
                c.delta,
                if c.positive { "  positive" } else { "" }
            ));
        }
        out
    }
}
