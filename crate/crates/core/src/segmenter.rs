//! Rule-based detection of review components in raw review text.
//!
//! Pass one looks for section headers ("Stärken:", "Weaknesses", ...) near
//! the start of a sentence; a header opens a block that runs until the next
//! header. Pass two labels sentences before the first header by a vote over
//! cue words. Adjacent sentences with the same label are merged.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{slice, split_sentences, ComponentLabel, Span};
use crate::error::{Error, Result};
use crate::json;
use crate::scorer::CompiledLexicon;

/// Header must start within this many tokens of the sentence start.
pub const HEADER_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelLists {
    pub strength: Vec<String>,
    pub weakness: Vec<String>,
    pub suggestion: Vec<String>,
}

impl LabelLists {
    fn iter(&self) -> impl Iterator<Item = (ComponentLabel, &Vec<String>)> {
        [
            (ComponentLabel::Strength, &self.strength),
            (ComponentLabel::Weakness, &self.weakness),
            (ComponentLabel::Suggestion, &self.suggestion),
        ]
        .into_iter()
    }

    fn validate(&self, what: &str) -> Result<()> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for (label, list) in self.iter() {
            if list.is_empty() {
                return Err(Error::InvalidInput(format!("{what}: empty list for {label}")));
            }
            let own: BTreeSet<String> = list.iter().map(|k| k.to_lowercase()).collect();
            if let Some(dup) = own.iter().find(|k| seen.contains(*k)) {
                return Err(Error::InvalidInput(format!("{what}: `{dup}` listed under more than one label")));
            }
            seen.extend(own);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmenterConfig {
    pub headers: LabelLists,
    pub cues: LabelLists,
}

fn strings(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        SegmenterConfig {
            headers: LabelLists {
                strength: strings(&["Stärken", "Stärke", "Strengths", "Strength"]),
                weakness: strings(&["Schwächen", "Schwäche", "Weaknesses", "Weakness"]),
                suggestion: strings(&[
                    "Verbesserungsvorschläge",
                    "Verbesserungsvorschlag",
                    "Vorschläge",
                    "Suggestions",
                    "Suggestion",
                ]),
            },
            cues: LabelLists {
                strength: strings(&[
                    "gut", "gute", "guten", "gelungen", "gefällt", "positiv", "überzeugend", "klar", "schön",
                    "toll", "super", "hervorragend", "stark", "good", "great", "well", "strong", "like", "nice",
                    "clear", "convincing", "excellent", "positive",
                ]),
                weakness: strings(&[
                    "fehlt", "fehlen", "fehlende", "leider", "schwach", "unklar", "nicht", "kein", "keine",
                    "problem", "problematisch", "mangelt", "negativ", "falsch", "unverständlich", "missing",
                    "lacks", "lack", "unclear", "weak", "not", "no", "wrong", "unfortunately", "negative",
                ]),
                suggestion: strings(&[
                    "sollte", "solltest", "sollten", "könnte", "könntest", "empfehle", "empfehlen", "vorschlag",
                    "würde", "würdest", "ergänzen", "hinzufügen", "verbessern", "wäre", "should", "could",
                    "recommend", "suggest", "consider", "add", "improve", "would",
                ]),
            },
        }
    }
}

impl SegmenterConfig {
    pub fn validate(&self) -> Result<()> {
        self.headers.validate("headers")?;
        self.cues.validate("cues")
    }

    /// Reads a JSON config; missing keys keep their defaults.
    pub fn from_json(bytes: &[u8]) -> Result<SegmenterConfig> {
        let config: SegmenterConfig = json::overlay(&SegmenterConfig::default(), json::parse_value(bytes)?, "segmenter config")?;
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub span: Span,
    pub label: ComponentLabel,
}

/// Segmenter with compiled keyword lists.
#[derive(Debug, Clone)]
pub struct Segmenter {
    headers: Vec<(ComponentLabel, CompiledLexicon)>,
    cues: Vec<(ComponentLabel, CompiledLexicon)>,
}

impl Segmenter {
    pub fn new(config: &SegmenterConfig) -> Result<Segmenter> {
        config.validate()?;
        let compile = |lists: &LabelLists| lists.iter().map(|(l, words)| (l, CompiledLexicon::new(words))).collect();
        Ok(Segmenter { headers: compile(&config.headers), cues: compile(&config.cues) })
    }

    fn header_label(&self, sentence: &str) -> Option<ComponentLabel> {
        let tokens = crate::scorer::lexicon_tokens(sentence);
        self.headers
            .iter()
            .find(|(_, lex)| lex.first_match_start(&tokens).is_some_and(|pos| pos < HEADER_WINDOW))
            .map(|(label, _)| *label)
    }

    fn cue_vote(&self, sentence: &str) -> ComponentLabel {
        let tokens = crate::scorer::lexicon_tokens(sentence);
        let hits: Vec<(ComponentLabel, usize)> =
            self.cues.iter().map(|(l, lex)| (*l, lex.count(&tokens))).collect();
        let best = hits.iter().map(|h| h.1).max().unwrap_or(0);
        let winners: Vec<_> = hits.iter().filter(|h| h.1 == best).collect();
        if best == 0 || winners.len() > 1 {
            ComponentLabel::None
        } else {
            winners[0].0
        }
    }

    /// One label per sentence, before merging.
    pub fn label_sentences(&self, text: &str) -> Vec<Segment> {
        let mut block: Option<ComponentLabel> = None;
        split_sentences(text)
            .into_iter()
            .map(|span| {
                let sentence = slice(text, span);
                if let Some(label) = self.header_label(&sentence) {
                    block = Some(label);
                }
                let label = block.unwrap_or_else(|| self.cue_vote(&sentence));
                Segment { span, label }
            })
            .collect()
    }

    /// Disjoint ordered component spans covering every sentence of `text`.
    pub fn segment(&self, text: &str) -> Result<Vec<Segment>> {
        if text.trim().is_empty() {
            return Err(Error::InvalidInput("cannot segment empty text".into()));
        }
        let mut merged: Vec<Segment> = Vec::new();
        for s in self.label_sentences(text) {
            match merged.last_mut() {
                Some(last) if last.label == s.label => last.span.end = s.span.end,
                _ => merged.push(s),
            }
        }
        Ok(merged)
    }
}

pub fn segment_review(text: &str, config: &SegmenterConfig) -> Result<Vec<Segment>> {
    Segmenter::new(config)?.segment(text)
}
