//! Document-level empathy feedback built from per-component scores.

use serde::{Deserialize, Serialize};

use crate::corpus::{ComponentLabel, Dimension, Span};
use crate::error::{Error, Result};
use crate::json;
use crate::scorer::{Bucket, CueHit, Language};

/// Document means below this are non-empathic.
pub const NEUTRAL_FROM: f64 = 2.5;
/// Document means above this are empathic.
pub const EMPATHIC_ABOVE: f64 = 3.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredComponent {
    pub span: Span,
    pub label: ComponentLabel,
    pub cognitive: f64,
    pub emotional: f64,
    pub cognitive_bucket: Bucket,
    pub emotional_bucket: Bucket,
    pub cues: Vec<CueHit>,
}

impl ScoredComponent {
    pub fn score(&self, dimension: Dimension) -> f64 {
        match dimension {
            Dimension::Cognitive => self.cognitive,
            Dimension::Emotional => self.emotional,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentScores {
    pub cognitive_mean: f64,
    pub emotional_mean: f64,
    pub cognitive_bucket: Bucket,
    pub emotional_bucket: Bucket,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub dimension: Dimension,
    pub bucket: Bucket,
    pub template: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackReport {
    pub components: Vec<ScoredComponent>,
    pub document: DocumentScores,
    pub messages: Vec<Message>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Template {
    pub dimension: Dimension,
    pub bucket: Bucket,
    pub id: String,
    /// Message text; `{mean}` is replaced by the one-decimal document mean.
    pub text: String,
}

/// Messages keyed by (dimension, bucket); exactly one entry per key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateTable {
    pub templates: Vec<Template>,
}

const TEMPLATES_DE: &str = include_str!("../templates/de.json");
const TEMPLATES_EN: &str = include_str!("../templates/en.json");

impl TemplateTable {
    pub fn builtin(language: Language) -> TemplateTable {
        let src = match language {
            Language::De => TEMPLATES_DE,
            Language::En => TEMPLATES_EN,
        };
        serde_json::from_str(src).expect("built-in templates are valid")
    }

    pub fn from_json(bytes: &[u8]) -> Result<TemplateTable> {
        let value = json::parse_value(bytes)?;
        let table: TemplateTable =
            serde_json::from_value(value).map_err(|e| Error::InvalidInput(format!("template table: {e}")))?;
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        for dimension in Dimension::ALL {
            for bucket in Bucket::ALL {
                let n = self.templates.iter().filter(|t| t.dimension == dimension && t.bucket == bucket).count();
                if n != 1 {
                    return Err(Error::InvalidInput(format!(
                        "template table needs exactly one entry for ({dimension}, {bucket}), found {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, dimension: Dimension, bucket: Bucket) -> Option<&Template> {
        self.templates.iter().find(|t| t.dimension == dimension && t.bucket == bucket)
    }
}

pub fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Bucket of a document mean: < 2.5 non-empathic, 2.5..=3.5 neutral,
/// > 3.5 empathic.
pub fn document_bucket(mean: f64) -> Bucket {
    if mean < NEUTRAL_FROM {
        Bucket::NonEmpathic
    } else if mean <= EMPATHIC_ABOVE {
        Bucket::Neutral
    } else {
        Bucket::Empathic
    }
}

/// Averages component scores per dimension (rounded to one decimal), buckets
/// the rounded means, and picks one message per dimension.
pub fn build_feedback(components: Vec<ScoredComponent>, templates: &TemplateTable) -> Result<FeedbackReport> {
    if components.is_empty() {
        return Err(Error::InvalidInput("nothing to assess".into()));
    }
    let mean = |d: Dimension| round1(components.iter().map(|c| c.score(d)).sum::<f64>() / components.len() as f64);
    let (cognitive_mean, emotional_mean) = (mean(Dimension::Cognitive), mean(Dimension::Emotional));
    let document = DocumentScores {
        cognitive_mean,
        emotional_mean,
        cognitive_bucket: document_bucket(cognitive_mean),
        emotional_bucket: document_bucket(emotional_mean),
    };

    let messages = [
        (Dimension::Cognitive, cognitive_mean, document.cognitive_bucket),
        (Dimension::Emotional, emotional_mean, document.emotional_bucket),
    ]
    .into_iter()
    .map(|(dimension, mean, bucket)| {
        let template = templates.get(dimension, bucket).ok_or_else(|| {
            Error::InvalidInput(format!("no template for ({dimension}, {bucket})"))
        })?;
        Ok(Message {
            dimension,
            bucket,
            template: template.id.clone(),
            text: template.text.replace("{mean}", &format!("{mean:.1}")),
        })
    })
    .collect::<Result<Vec<_>>>()?;

    Ok(FeedbackReport { components, document, messages })
}

impl FeedbackReport {
    pub fn to_table(&self, text: &str) -> String {
        let mut out = String::new();
        for c in &self.components {
            let excerpt: String = crate::corpus::slice(text, c.span).chars().take(60).collect();
            out.push_str(&format!(
                "{:<10} cog {:.1} ({:<12}) emo {:.1} ({:<12}) [{}, {}) {}\n",
                c.label.as_str(),
                c.cognitive,
                c.cognitive_bucket.as_str(),
                c.emotional,
                c.emotional_bucket.as_str(),
                c.span.start,
                c.span.end,
                excerpt
            ));
        }
        out.push_str(&format!(
            "\ndocument: cognitive {:.1} ({}), emotional {:.1} ({})\n\n",
            self.document.cognitive_mean,
            self.document.cognitive_bucket,
            self.document.emotional_mean,
            self.document.emotional_bucket
        ));
        for m in &self.messages {
            out.push_str(&format!("- {}\n", m.text));
        }
        out
    }
}
