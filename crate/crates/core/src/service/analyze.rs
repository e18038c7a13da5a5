use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::slice;
use crate::error::{Error, Result};
use crate::feedback::{build_feedback, FeedbackReport, ScoredComponent, TemplateTable};
use crate::scorer::{Bucket, Language, Rubric, RubricConfig};
use crate::segmenter::{Segment, Segmenter, SegmenterConfig};

use super::remote::RemoteScorer;

/// Longest accepted review, in code points.
pub const MAX_TEXT_CHARS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScorerMode {
    #[default]
    Rubric,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeRequest {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<Language>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scorer_mode: Option<ScorerMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScorerProvenance {
    pub mode: ScorerMode,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeResponse {
    pub language: Language,
    #[serde(flatten)]
    pub report: FeedbackReport,
    pub scorer: ScorerProvenance,
}

/// Request validation failures, mapped to HTTP statuses by the router.
#[derive(Debug, Clone, PartialEq)]
pub enum Rejection {
    EmptyText,
    TooLong(usize),
}

/// Segmenter, rubrics and templates for every supported language.
#[derive(Debug, Clone)]
pub struct Analyzer {
    segmenter: Segmenter,
    rubrics: HashMap<Language, Rubric>,
    templates: HashMap<Language, TemplateTable>,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer::new(&SegmenterConfig::default(), Vec::new(), HashMap::new()).expect("default config is valid")
    }
}

impl Analyzer {
    /// Built-in rubrics and templates, with `rubrics` and `templates`
    /// replacing the built-ins of their language.
    pub fn new(
        segmenter: &SegmenterConfig,
        rubrics: Vec<RubricConfig>,
        templates: HashMap<Language, TemplateTable>,
    ) -> Result<Analyzer> {
        let mut by_lang: HashMap<Language, Rubric> =
            [Language::De, Language::En].into_iter().map(|l| (l, Rubric::builtin(l))).collect();
        for config in rubrics {
            by_lang.insert(config.language, Rubric::new(config));
        }
        let mut table: HashMap<Language, TemplateTable> =
            [Language::De, Language::En].into_iter().map(|l| (l, TemplateTable::builtin(l))).collect();
        for (lang, t) in templates {
            t.validate()?;
            table.insert(lang, t);
        }
        Ok(Analyzer { segmenter: Segmenter::new(segmenter)?, rubrics: by_lang, templates: table })
    }

    pub fn check(text: &str) -> std::result::Result<(), Rejection> {
        let len = text.chars().count();
        if text.trim().is_empty() {
            Err(Rejection::EmptyText)
        } else if len > MAX_TEXT_CHARS {
            Err(Rejection::TooLong(len))
        } else {
            Ok(())
        }
    }

    pub fn segment(&self, text: &str) -> Result<Vec<Segment>> {
        self.segmenter.segment(text)
    }

    /// Segments and scores every component with the rubric.
    pub fn score_rubric(&self, text: &str, language: Language, segments: &[Segment]) -> Result<Vec<ScoredComponent>> {
        let rubric = &self.rubrics[&language];
        segments
            .iter()
            .map(|seg| {
                let s = rubric.score(&slice(text, seg.span))?;
                Ok(ScoredComponent {
                    span: seg.span,
                    label: seg.label,
                    cognitive: s.cognitive.value() as f64,
                    emotional: s.emotional.value() as f64,
                    cognitive_bucket: Bucket::from(s.cognitive),
                    emotional_bucket: Bucket::from(s.emotional),
                    cues: s.cues,
                })
            })
            .collect()
    }

    /// Full rubric pipeline: segment, score, aggregate.
    pub fn analyze(&self, text: &str, language: Language) -> Result<AnalyzeResponse> {
        self.respond_rubric(text, language, &self.segment(text)?)
    }

    pub fn templates(&self, language: Language) -> &TemplateTable {
        &self.templates[&language]
    }

    /// Runs the pipeline for a request. Remote scoring is tried when
    /// requested and configured; any remote failure falls back to the rubric.
    pub async fn handle(&self, request: &AnalyzeRequest, remote: Option<&RemoteScorer>, default_mode: ScorerMode) -> Result<AnalyzeResponse> {
        let language = request.language.unwrap_or_default();
        let mode = request.scorer_mode.unwrap_or(default_mode);
        let segments = self.segment(&request.text)?;

        if mode == ScorerMode::Remote {
            let remote_result = match remote {
                Some(remote) => {
                    let paragraphs: Vec<String> = segments.iter().map(|s| slice(&request.text, s.span)).collect();
                    remote.score(&paragraphs).await.map(|preds| {
                        segments
                            .iter()
                            .zip(preds)
                            .map(|(seg, p)| ScoredComponent {
                                span: seg.span,
                                label: p.component,
                                cognitive: p.cognitive.midpoint(),
                                emotional: p.emotional.midpoint(),
                                cognitive_bucket: p.cognitive,
                                emotional_bucket: p.emotional,
                                cues: Vec::new(),
                            })
                            .collect::<Vec<_>>()
                    })
                }
                None => Err(Error::Remote("remote scorer not configured".into())),
            };
            if let Ok(components) = remote_result {
                let report = build_feedback(components, &self.templates[&language])?;
                return Ok(AnalyzeResponse {
                    language,
                    report,
                    scorer: ScorerProvenance { mode: ScorerMode::Remote, fallback: false },
                });
            }
        }

        // `mode` names the scorer that produced the scores
        let mut response = self.respond_rubric(&request.text, language, &segments)?;
        response.scorer.fallback = mode == ScorerMode::Remote;
        Ok(response)
    }

    /// Rubric-mode response for already segmented text.
    pub fn respond_rubric(&self, text: &str, language: Language, segments: &[Segment]) -> Result<AnalyzeResponse> {
        let components = self.score_rubric(text, language, segments)?;
        let report = build_feedback(components, &self.templates[&language])?;
        Ok(AnalyzeResponse {
            language,
            report,
            scorer: ScorerProvenance { mode: ScorerMode::Rubric, fallback: false },
        })
    }
}
