//! Annotated review corpora: domain types, the JSON corpus format,
//! tokenization, sentence splitting and projection of span annotations
//! onto sentences.
//!
//! All offsets are 0-based Unicode code points, end-exclusive.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Half-open range of code-point offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn intersection(&self, other: &Span) -> Option<Span> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start < end).then_some(Span { start, end })
    }

    pub fn shifted(&self, offset: usize) -> Span {
        Span::new(self.start + offset, self.end + offset)
    }
}

/// Review component type. `None` marks sentences no annotator span covers and
/// is never written to corpus files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentLabel {
    Strength,
    Weakness,
    Suggestion,
    None,
}

impl ComponentLabel {
    pub const STORED: [ComponentLabel; 3] = [
        ComponentLabel::Strength,
        ComponentLabel::Weakness,
        ComponentLabel::Suggestion,
    ];
    pub const ALL: [ComponentLabel; 4] = [
        ComponentLabel::Strength,
        ComponentLabel::Weakness,
        ComponentLabel::Suggestion,
        ComponentLabel::None,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ComponentLabel::Strength => "strength",
            ComponentLabel::Weakness => "weakness",
            ComponentLabel::Suggestion => "suggestion",
            ComponentLabel::None => "none",
        }
    }
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComponentLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strength" => Ok(ComponentLabel::Strength),
            "weakness" => Ok(ComponentLabel::Weakness),
            "suggestion" => Ok(ComponentLabel::Suggestion),
            "none" => Ok(ComponentLabel::None),
            other => Err(Error::InvalidInput(format!("unknown component label `{other}`"))),
        }
    }
}

/// The two empathy scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Cognitive,
    Emotional,
}

impl Dimension {
    pub const ALL: [Dimension; 2] = [Dimension::Cognitive, Dimension::Emotional];

    pub fn as_str(&self) -> &'static str {
        match self {
            Dimension::Cognitive => "cognitive",
            Dimension::Emotional => "emotional",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Empathy level on the 1-5 scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct EmpathyScore(u8);

impl EmpathyScore {
    pub const MIN: u8 = 1;
    pub const MAX: u8 = 5;

    pub fn new(value: i64) -> Result<Self> {
        if (Self::MIN as i64..=Self::MAX as i64).contains(&value) {
            Ok(EmpathyScore(value as u8))
        } else {
            Err(Error::InvalidInput(format!("score out of range: {value}")))
        }
    }

    pub fn value(&self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = EmpathyScore> {
        (Self::MIN..=Self::MAX).map(EmpathyScore)
    }
}

impl TryFrom<i64> for EmpathyScore {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        EmpathyScore::new(value)
    }
}

impl From<EmpathyScore> for u8 {
    fn from(score: EmpathyScore) -> u8 {
        score.0
    }
}

impl fmt::Display for EmpathyScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanAnnotation {
    pub annotator: String,
    pub start: usize,
    pub end: usize,
    pub component: ComponentLabel,
    pub cognitive: EmpathyScore,
    pub emotional: EmpathyScore,
}

impl SpanAnnotation {
    pub fn span(&self) -> Span {
        Span::new(self.start, self.end)
    }

    pub fn score(&self, dimension: Dimension) -> EmpathyScore {
        match dimension {
            Dimension::Cognitive => self.cognitive,
            Dimension::Emotional => self.emotional,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedDocument {
    pub id: String,
    pub text: String,
    pub annotations: Vec<SpanAnnotation>,
}

impl AnnotatedDocument {
    /// Annotator ids present in this document, sorted.
    pub fn annotators(&self) -> BTreeSet<&str> {
        self.annotations.iter().map(|a| a.annotator.as_str()).collect()
    }

    /// The annotations of one annotator, ordered by start offset.
    pub fn annotations_by(&self, annotator: &str) -> Vec<&SpanAnnotation> {
        let mut spans: Vec<_> = self
            .annotations
            .iter()
            .filter(|a| a.annotator == annotator)
            .collect();
        spans.sort_by_key(|a| (a.start, a.end));
        spans
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AnnotatedCorpus {
    pub documents: Vec<AnnotatedDocument>,
}

impl AnnotatedCorpus {
    pub fn annotation_count(&self) -> usize {
        self.documents.iter().map(|d| d.annotations.len()).sum()
    }

    pub fn annotators(&self) -> BTreeSet<&str> {
        self.documents.iter().flat_map(|d| d.annotators()).collect()
    }
}

/// Parses a corpus file. With `strict`, keys outside the documented format
/// are rejected; otherwise they are ignored.
pub fn parse_corpus(bytes: &[u8], strict: bool) -> Result<AnnotatedCorpus> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if strict {
        check_known_keys(&value)?;
    }
    let raw: RawCorpus = serde_json::from_value(value).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: e.to_string(),
    })?;

    let mut seen = BTreeSet::new();
    let mut documents = Vec::with_capacity(raw.documents.len());
    for doc in raw.documents {
        if !seen.insert(doc.id.clone()) {
            return Err(Error::validation(&doc.id, None, "duplicate document id"));
        }
        documents.push(doc.into_document()?);
    }
    Ok(AnnotatedCorpus { documents })
}

pub fn serialize_corpus(corpus: &AnnotatedCorpus) -> String {
    serde_json::to_string_pretty(corpus).expect("corpus serializes")
}

#[derive(Deserialize)]
struct RawCorpus {
    documents: Vec<RawDocument>,
}

#[derive(Deserialize)]
struct RawDocument {
    id: String,
    text: String,
    annotations: Vec<RawAnnotation>,
}

#[derive(Deserialize)]
struct RawAnnotation {
    annotator: String,
    start: i64,
    end: i64,
    component: String,
    cognitive: i64,
    emotional: i64,
}

impl RawDocument {
    fn into_document(self) -> Result<AnnotatedDocument> {
        let len = self.text.chars().count();
        let mut annotations = Vec::with_capacity(self.annotations.len());
        for (index, raw) in self.annotations.into_iter().enumerate() {
            let fail = |msg: String| Error::validation(&self.id, Some(index), msg);
            if raw.start < 0 || raw.end < 0 || raw.end as usize > len {
                return Err(fail(format!(
                    "offset out of range: [{}, {}) in text of length {len}",
                    raw.start, raw.end
                )));
            }
            if raw.start >= raw.end {
                return Err(fail(format!("empty or inverted span [{}, {})", raw.start, raw.end)));
            }
            let component = match raw.component.as_str() {
                "strength" => ComponentLabel::Strength,
                "weakness" => ComponentLabel::Weakness,
                "suggestion" => ComponentLabel::Suggestion,
                other => return Err(fail(format!("unknown component `{other}`"))),
            };
            let cognitive = EmpathyScore::new(raw.cognitive)
                .map_err(|_| fail(format!("score out of range: cognitive={}", raw.cognitive)))?;
            let emotional = EmpathyScore::new(raw.emotional)
                .map_err(|_| fail(format!("score out of range: emotional={}", raw.emotional)))?;
            annotations.push(SpanAnnotation {
                annotator: raw.annotator,
                start: raw.start as usize,
                end: raw.end as usize,
                component,
                cognitive,
                emotional,
            });
        }

        let mut by_annotator: BTreeMap<&str, Vec<(usize, Span)>> = BTreeMap::new();
        for (i, a) in annotations.iter().enumerate() {
            by_annotator.entry(&a.annotator).or_default().push((i, a.span()));
        }
        for spans in by_annotator.values_mut() {
            spans.sort_by_key(|(_, s)| (s.start, s.end));
            for pair in spans.windows(2) {
                if pair[0].1.overlaps(&pair[1].1) {
                    let index = pair[0].0.max(pair[1].0);
                    return Err(Error::validation(&self.id, Some(index), "overlapping spans"));
                }
            }
        }

        Ok(AnnotatedDocument { id: self.id, text: self.text, annotations })
    }
}

fn check_known_keys(value: &Value) -> Result<()> {
    fn check(obj: &Value, allowed: &[&str], context: &str) -> Result<()> {
        if let Value::Object(map) = obj {
            if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
                return Err(Error::Parse {
                    line: 0,
                    column: 0,
                    message: format!("unknown key `{key}` in {context}"),
                });
            }
        }
        Ok(())
    }
    check(value, &["documents"], "corpus")?;
    let docs = value.get("documents").and_then(Value::as_array);
    for doc in docs.into_iter().flatten() {
        check(doc, &["id", "text", "annotations"], "document")?;
        let anns = doc.get("annotations").and_then(Value::as_array);
        for ann in anns.into_iter().flatten() {
            check(
                ann,
                &["annotator", "start", "end", "component", "cognitive", "emotional"],
                "annotation",
            )?;
        }
    }
    Ok(())
}

/// Splits text into tokens: maximal runs of letters/digits, or single
/// non-whitespace characters that are neither.
pub fn tokenize(text: &str) -> Vec<Span> {
    let mut tokens = Vec::new();
    let mut run_start: Option<usize> = None;
    let mut len = 0;
    for (i, c) in text.chars().enumerate() {
        len = i + 1;
        if c.is_alphanumeric() {
            run_start.get_or_insert(i);
            continue;
        }
        if let Some(start) = run_start.take() {
            tokens.push(Span::new(start, i));
        }
        if !c.is_whitespace() {
            tokens.push(Span::new(i, i + 1));
        }
    }
    if let Some(start) = run_start {
        tokens.push(Span::new(start, len));
    }
    tokens
}

const SENTENCE_TERMINATORS: [char; 4] = ['.', '!', '?', ':'];

fn is_closing_mark(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '»' | '«' | '’' | '”' | '“' | '‘')
}

/// Splits text into sentences. A sentence ends after `.`, `!`, `?` or `:`
/// (optionally followed by closing quotes or brackets) when the next
/// character is whitespace or the end of text. Leading and trailing
/// whitespace is excluded from every sentence span.
pub fn split_sentences(text: &str) -> Vec<Span> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start: Option<usize> = None;
    let mut last_non_ws = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        start.get_or_insert(i);
        last_non_ws = i;
        if SENTENCE_TERMINATORS.contains(&c) {
            let mut j = i + 1;
            while j < chars.len() && is_closing_mark(chars[j]) {
                j += 1;
            }
            if j == chars.len() || chars[j].is_whitespace() {
                if let Some(s) = start.take() {
                    sentences.push(Span::new(s, j));
                }
                last_non_ws = j - 1;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    if let Some(s) = start {
        sentences.push(Span::new(s, last_non_ws + 1));
    }
    sentences
}

/// Returns the code-point slice of `text` covered by `span`.
pub fn slice(text: &str, span: Span) -> String {
    text.chars().skip(span.start).take(span.len()).collect()
}

/// Label and scores one annotator assigns to one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceLabel {
    pub component: ComponentLabel,
    pub scores: Option<(EmpathyScore, EmpathyScore)>,
}

impl SentenceLabel {
    pub const NONE: SentenceLabel = SentenceLabel { component: ComponentLabel::None, scores: None };

    pub fn score(&self, dimension: Dimension) -> Option<EmpathyScore> {
        self.scores.map(|(cog, emo)| match dimension {
            Dimension::Cognitive => cog,
            Dimension::Emotional => emo,
        })
    }
}

/// Sentence segmentation of a document plus one label row per annotator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentenceView {
    pub sentences: Vec<Span>,
    pub rows: BTreeMap<String, Vec<SentenceLabel>>,
}

impl SentenceView {
    pub fn build(document: &AnnotatedDocument) -> SentenceView {
        let sentences = split_sentences(&document.text);
        let rows = document
            .annotators()
            .into_iter()
            .map(|a| (a.to_string(), project_sentences(document, &sentences, a)))
            .collect();
        SentenceView { sentences, rows }
    }
}

/// Projects one annotator's spans onto the document's sentences.
pub fn project_to_sentences(document: &AnnotatedDocument, annotator: &str) -> Vec<SentenceLabel> {
    let sentences = split_sentences(&document.text);
    project_sentences(document, &sentences, annotator)
}

fn project_sentences(
    document: &AnnotatedDocument,
    sentences: &[Span],
    annotator: &str,
) -> Vec<SentenceLabel> {
    let non_ws: Vec<bool> = document.text.chars().map(|c| !c.is_whitespace()).collect();
    // prefix[i] = number of non-whitespace code points before offset i
    let mut prefix = Vec::with_capacity(non_ws.len() + 1);
    prefix.push(0usize);
    for &b in &non_ws {
        prefix.push(prefix.last().unwrap() + b as usize);
    }
    let count = |s: Span| prefix[s.end.min(non_ws.len())] - prefix[s.start.min(non_ws.len())];

    let spans = document.annotations_by(annotator);
    sentences
        .iter()
        .map(|&sentence| {
            let total = count(sentence);
            spans
                .iter()
                .find(|a| {
                    a.span()
                        .intersection(&sentence)
                        .is_some_and(|overlap| 2 * count(overlap) > total)
                })
                .map(|a| SentenceLabel {
                    component: a.component,
                    scores: Some((a.cognitive, a.emotional)),
                })
                .unwrap_or(SentenceLabel::NONE)
        })
        .collect()
}
