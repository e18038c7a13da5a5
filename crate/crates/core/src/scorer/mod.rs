//! Executable empathy rubric: lexical cue extraction and decision ladders
//! mapping cue counts to cognitive and emotional levels 1-5.
//!
//! The emotional ladder follows the level descriptions: strong emotion words
//! combined with personal pronouns and exclamation marks at the top, emotion
//! words written in third person in the middle, hedging only at level 2, and
//! purely objective text at level 1. The cognitive ladder rewards elaboration
//! (causal connectives, examples) and perspective taking (questions, direct
//! address of the author). All thresholds live in [`Thresholds`].

mod lexicon;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use lexicon::CompiledLexicon;
pub(crate) use lexicon::TokenizedText;

pub(crate) fn lexicon_tokens(text: &str) -> TokenizedText {
    TokenizedText::new(text)
}

use crate::corpus::{split_sentences, EmpathyScore};
use crate::error::{Error, Result};
use crate::json;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    #[default]
    De,
    En,
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "de" => Ok(Language::De),
            "en" => Ok(Language::En),
            other => Err(Error::InvalidInput(format!("unsupported language `{other}`"))),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::De => "de",
            Language::En => "en",
        })
    }
}

/// Cue word lists. Entries prefixed with `=` are matched case-sensitively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lexicons {
    pub pron12: Vec<String>,
    pub emo_strong: Vec<String>,
    pub emo_mild: Vec<String>,
    pub hedges: Vec<String>,
    pub causal: Vec<String>,
    pub example_markers: Vec<String>,
    pub direct_address: Vec<String>,
}

const LEXICON_DE: &str = include_str!("../../lexicons/de.json");
const LEXICON_EN: &str = include_str!("../../lexicons/en.json");

impl Lexicons {
    pub fn builtin(language: Language) -> Lexicons {
        let src = match language {
            Language::De => LEXICON_DE,
            Language::En => LEXICON_EN,
        };
        serde_json::from_str(src).expect("built-in lexicon is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionalThresholds {
    /// Level 5: pronouns, strong emotion words and exclamation marks.
    pub strong_pron12: usize,
    pub strong_emotion: usize,
    pub strong_exclam: usize,
    /// Level 4: pronouns and any emotion word.
    pub fairly_pron12: usize,
    pub fairly_emotion: usize,
    /// Level 3: any emotion word.
    pub slight_emotion: usize,
    /// Level 2: hedges or modal verbs.
    pub weak_hedges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CognitiveThresholds {
    /// Level 5: elaboration, perspective and length together.
    pub strong_elaboration: usize,
    pub strong_perspective: usize,
    pub strong_sentences: usize,
    /// Level 4: rich elaboration, or some elaboration over a longer text.
    pub fairly_elaboration: usize,
    pub fairly_some_elaboration: usize,
    pub fairly_sentences: usize,
    /// Level 3: some elaboration.
    pub slight_elaboration: usize,
    /// Level 2: more than a one-liner.
    pub weak_sentences: usize,
    pub weak_tokens: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub emotional: EmotionalThresholds,
    pub cognitive: CognitiveThresholds,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            emotional: EmotionalThresholds {
                strong_pron12: 1,
                strong_emotion: 1,
                strong_exclam: 1,
                fairly_pron12: 1,
                fairly_emotion: 1,
                slight_emotion: 1,
                weak_hedges: 1,
            },
            cognitive: CognitiveThresholds {
                strong_elaboration: 2,
                strong_perspective: 1,
                strong_sentences: 3,
                fairly_elaboration: 2,
                fairly_some_elaboration: 1,
                fairly_sentences: 3,
                slight_elaboration: 1,
                weak_sentences: 2,
                weak_tokens: 15,
            },
        }
    }
}

/// Full rubric configuration: language, cue lexicons and ladder thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RubricConfig {
    pub language: Language,
    pub lexicons: Lexicons,
    pub thresholds: Thresholds,
}

impl RubricConfig {
    pub fn builtin(language: Language) -> RubricConfig {
        RubricConfig { language, lexicons: Lexicons::builtin(language), thresholds: Thresholds::default() }
    }

    /// Reads a JSON config. Missing keys fall back to the built-in values of
    /// the file's `language` (German when absent).
    pub fn from_json(bytes: &[u8]) -> Result<RubricConfig> {
        let overrides = json::parse_value(bytes)?;
        let language = match overrides.get("language") {
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|e| Error::InvalidInput(format!("language: {e}")))?,
            None => Language::default(),
        };
        json::overlay(&RubricConfig::builtin(language), overrides, "rubric config")
    }
}

/// Lexical cue counts of one review component.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub exclam: usize,
    pub pron12: usize,
    pub emo_strong: usize,
    pub emo_mild: usize,
    pub hedges: usize,
    pub causal: usize,
    pub example_markers: usize,
    pub questions: usize,
    pub direct_address: usize,
    pub sentences: usize,
    pub tokens: usize,
}

impl FeatureVector {
    pub fn emotion(&self) -> usize {
        self.emo_strong + self.emo_mild
    }

    pub fn elaboration(&self) -> usize {
        self.causal + self.example_markers
    }

    pub fn perspective(&self) -> usize {
        self.questions + self.direct_address
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cue {
    Pron12,
    EmoStrong,
    EmoMild,
    Hedge,
    Causal,
    ExampleMarker,
    DirectAddress,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CueHit {
    pub cue: Cue,
    pub text: String,
}

/// Lexicons compiled for matching plus thresholds; immutable once built.
#[derive(Debug, Clone)]
pub struct Rubric {
    config: RubricConfig,
    lexicons: Vec<(Cue, CompiledLexicon)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentScore {
    pub cognitive: EmpathyScore,
    pub emotional: EmpathyScore,
    pub features: FeatureVector,
    pub cues: Vec<CueHit>,
}

impl Rubric {
    pub fn new(config: RubricConfig) -> Rubric {
        let l = &config.lexicons;
        let lexicons = vec![
            (Cue::Pron12, CompiledLexicon::new(&l.pron12)),
            (Cue::EmoStrong, CompiledLexicon::new(&l.emo_strong)),
            (Cue::EmoMild, CompiledLexicon::new(&l.emo_mild)),
            (Cue::Hedge, CompiledLexicon::new(&l.hedges)),
            (Cue::Causal, CompiledLexicon::new(&l.causal)),
            (Cue::ExampleMarker, CompiledLexicon::new(&l.example_markers)),
            (Cue::DirectAddress, CompiledLexicon::new(&l.direct_address)),
        ];
        Rubric { config, lexicons }
    }

    pub fn builtin(language: Language) -> Rubric {
        Rubric::new(RubricConfig::builtin(language))
    }

    pub fn config(&self) -> &RubricConfig {
        &self.config
    }

    pub fn language(&self) -> Language {
        self.config.language
    }

    /// Cue counts and the matched cue words of `text`.
    pub fn extract(&self, text: &str) -> Result<(FeatureVector, Vec<CueHit>)> {
        if text.trim().is_empty() {
            return Err(Error::InvalidInput("cannot score empty text".into()));
        }
        let tokens = TokenizedText::new(text);
        let mut f = FeatureVector {
            exclam: text.chars().filter(|&c| c == '!').count(),
            questions: text.chars().filter(|&c| c == '?').count(),
            sentences: split_sentences(text).len(),
            tokens: tokens.len(),
            ..FeatureVector::default()
        };
        let mut cues = Vec::new();
        for (cue, lexicon) in &self.lexicons {
            let hits = lexicon.find_all(&tokens);
            let slot = match cue {
                Cue::Pron12 => &mut f.pron12,
                Cue::EmoStrong => &mut f.emo_strong,
                Cue::EmoMild => &mut f.emo_mild,
                Cue::Hedge => &mut f.hedges,
                Cue::Causal => &mut f.causal,
                Cue::ExampleMarker => &mut f.example_markers,
                Cue::DirectAddress => &mut f.direct_address,
            };
            *slot = hits.len();
            cues.extend(hits.into_iter().map(|text| CueHit { cue: *cue, text }));
        }
        Ok((f, cues))
    }

    pub fn extract_features(&self, text: &str) -> Result<FeatureVector> {
        self.extract(text).map(|(f, _)| f)
    }

    pub fn score(&self, text: &str) -> Result<ComponentScore> {
        let (features, cues) = self.extract(text)?;
        Ok(ComponentScore {
            cognitive: score_cognitive(&features, &self.config.thresholds.cognitive),
            emotional: score_emotional(&features, &self.config.thresholds.emotional),
            features,
            cues,
        })
    }
}

fn level(v: u8) -> EmpathyScore {
    EmpathyScore::new(v as i64).expect("ladder levels are 1..=5")
}

pub fn score_emotional(f: &FeatureVector, t: &EmotionalThresholds) -> EmpathyScore {
    level(if f.pron12 >= t.strong_pron12 && f.emo_strong >= t.strong_emotion && f.exclam >= t.strong_exclam {
        5
    } else if f.pron12 >= t.fairly_pron12 && f.emotion() >= t.fairly_emotion {
        4
    } else if f.emotion() >= t.slight_emotion {
        3
    } else if f.hedges >= t.weak_hedges {
        2
    } else {
        1
    })
}

pub fn score_cognitive(f: &FeatureVector, t: &CognitiveThresholds) -> EmpathyScore {
    let e = f.elaboration();
    level(
        if e >= t.strong_elaboration && f.perspective() >= t.strong_perspective && f.sentences >= t.strong_sentences {
            5
        } else if e >= t.fairly_elaboration || (e >= t.fairly_some_elaboration && f.sentences >= t.fairly_sentences) {
            4
        } else if e >= t.slight_elaboration {
            3
        } else if f.sentences >= t.weak_sentences || f.tokens >= t.weak_tokens {
            2
        } else {
            1
        },
    )
}

/// Three-way grouping of empathy levels used for model labels and feedback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bucket {
    NonEmpathic,
    Neutral,
    Empathic,
}

impl Bucket {
    pub const ALL: [Bucket; 3] = [Bucket::NonEmpathic, Bucket::Neutral, Bucket::Empathic];

    pub fn as_str(&self) -> &'static str {
        match self {
            Bucket::NonEmpathic => "non-empathic",
            Bucket::Neutral => "neutral",
            Bucket::Empathic => "empathic",
        }
    }

    /// Representative 1-5 value for a bucket-only prediction.
    pub fn midpoint(&self) -> f64 {
        match self {
            Bucket::NonEmpathic => 1.5,
            Bucket::Neutral => 3.0,
            Bucket::Empathic => 4.5,
        }
    }
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Bucket {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Bucket::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown bucket `{s}`")))
    }
}

impl From<EmpathyScore> for Bucket {
    fn from(score: EmpathyScore) -> Bucket {
        match score.value() {
            1 | 2 => Bucket::NonEmpathic,
            3 => Bucket::Neutral,
            _ => Bucket::Empathic,
        }
    }
}

/// {1,2} -> non-empathic, {3} -> neutral, {4,5} -> empathic.
pub fn bucketize(score: i64) -> Result<Bucket> {
    EmpathyScore::new(score).map(Bucket::from)
}
