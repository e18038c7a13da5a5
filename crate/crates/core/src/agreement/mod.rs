//! Inter-annotator reliability: percentage agreement, multi-pi, nominal
//! alpha, unitized alpha over span boundaries, and confusion probability
//! matrices, plus the corpus-level report combining them.

mod cpm;
mod nominal;
mod table;
mod unitized;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use cpm::{confusion_probability_matrix, confusion_probability_matrix_with_labels, ConfusionProbabilityMatrix};
pub use nominal::{krippendorff_alpha_nominal, multi_pi, percentage_agreement};
pub use table::ItemTable;
pub use unitized::{unitized_alpha, unitized_alpha_detail, Continuum, SamplerConfig, UnitizedAlpha};

use crate::corpus::{tokenize, AnnotatedCorpus, AnnotatedDocument, ComponentLabel, Dimension, EmpathyScore, SentenceView, Span};
use crate::error::{Error, Result};

/// Row/column order of the component CPM.
pub const COMPONENT_CPM_ORDER: [ComponentLabel; 4] = [
    ComponentLabel::Suggestion,
    ComponentLabel::Weakness,
    ComponentLabel::Strength,
    ComponentLabel::None,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Components,
    Cognitive,
    Emotional,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Components, Target::Cognitive, Target::Emotional];
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub targets: Vec<Target>,
    pub alpha_u: bool,
    pub sampler: SamplerConfig,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { targets: Target::ALL.to_vec(), alpha_u: true, sampler: SamplerConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryAgreement {
    pub category: ComponentLabel,
    pub percentage: Option<f64>,
    pub multi_pi: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_u: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentAgreement {
    /// Sentences judged by at least two annotators.
    pub items: usize,
    pub categories: Vec<CategoryAgreement>,
    pub cpm: ConfusionProbabilityMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleAgreement {
    pub dimension: Dimension,
    /// Sentences every annotator of the document labelled as a component.
    pub items: usize,
    pub multi_pi: Option<f64>,
    pub cpm: Option<ConfusionProbabilityMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub documents: usize,
    pub annotators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<ComponentAgreement>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scales: Vec<ScaleAgreement>,
}

/// Documents with at least two annotators, ordered by id.
fn co_annotated(corpus: &AnnotatedCorpus) -> Vec<&AnnotatedDocument> {
    let mut docs: Vec<_> = corpus.documents.iter().filter(|d| d.annotators().len() >= 2).collect();
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    docs
}

pub fn agreement_report(corpus: &AnnotatedCorpus, config: &ReportConfig) -> Result<AgreementReport> {
    let docs = co_annotated(corpus);
    if docs.is_empty() {
        return Err(Error::Undefined("no document is annotated by two or more annotators".into()));
    }
    let views: Vec<SentenceView> = docs.iter().map(|d| SentenceView::build(d)).collect();
    let annotators: BTreeSet<&str> = docs.iter().flat_map(|d| d.annotators()).collect();

    let components = if config.targets.contains(&Target::Components) {
        Some(component_agreement(&docs, &views, config)?)
    } else {
        None
    };
    let scales = [(Target::Cognitive, Dimension::Cognitive), (Target::Emotional, Dimension::Emotional)]
        .into_iter()
        .filter(|(t, _)| config.targets.contains(t))
        .map(|(_, d)| scale_agreement(&views, d))
        .collect::<Result<Vec<_>>>()?;

    Ok(AgreementReport {
        documents: docs.len(),
        annotators: annotators.into_iter().map(String::from).collect(),
        sampler: (config.alpha_u && components.is_some()).then_some(config.sampler),
        components,
        scales,
    })
}

/// Sentence-level component labels of all co-annotated documents.
pub fn component_table(views: &[SentenceView]) -> ItemTable<ComponentLabel> {
    let mut table = ItemTable::new();
    for view in views {
        for s in 0..view.sentences.len() {
            table.push(view.rows.iter().map(|(a, row)| (a.clone(), row[s].component)).collect());
        }
    }
    table
}

/// Sentences that every annotator of the document labelled as a component,
/// with the raw 1-5 score of `dimension` as the nominal label.
pub fn score_table(views: &[SentenceView], dimension: Dimension) -> ItemTable<EmpathyScore> {
    let mut table = ItemTable::new();
    for view in views {
        for s in 0..view.sentences.len() {
            let item: Option<BTreeMap<String, EmpathyScore>> = view
                .rows
                .iter()
                .map(|(a, row)| row[s].score(dimension).map(|score| (a.clone(), score)))
                .collect();
            if let Some(item) = item {
                table.push(item);
            }
        }
    }
    table
}

fn component_agreement(
    docs: &[&AnnotatedDocument],
    views: &[SentenceView],
    config: &ReportConfig,
) -> Result<ComponentAgreement> {
    let table = component_table(views);
    let mut categories = Vec::new();
    for category in ComponentLabel::ALL {
        let binary = table.map_labels(|l| *l == category);
        let alpha_u = if config.alpha_u {
            unitized_alpha(&token_continua(docs, category), config.sampler).ok()
        } else {
            None
        };
        categories.push(CategoryAgreement {
            category,
            percentage: percentage_agreement(&binary).ok(),
            multi_pi: multi_pi(&binary).ok(),
            alpha: krippendorff_alpha_nominal(&binary).ok(),
            alpha_u,
        });
    }
    let cpm = confusion_probability_matrix_with_labels(&table, &COMPONENT_CPM_ORDER)?;
    Ok(ComponentAgreement { items: table.len(), categories, cpm })
}

fn scale_agreement(views: &[SentenceView], dimension: Dimension) -> Result<ScaleAgreement> {
    let table = score_table(views, dimension);
    let levels: Vec<EmpathyScore> = EmpathyScore::all().collect();
    let cpm = if table.is_empty() {
        None
    } else {
        Some(confusion_probability_matrix_with_labels(&table, &levels)?)
    };
    Ok(ScaleAgreement { dimension, items: table.len(), multi_pi: multi_pi(&table).ok(), cpm })
}

/// Maps a code-point span to the half-open range of token indices whose
/// first code point lies inside it.
fn token_range(tokens: &[Span], span: Span) -> Span {
    let first = tokens.partition_point(|t| t.start < span.start);
    let last = tokens.partition_point(|t| t.start < span.end);
    Span::new(first, last)
}

/// Token-scale continua of `docs` for one category. For `None`, units are
/// the maximal token runs an annotator left unannotated.
pub fn token_continua(docs: &[&AnnotatedDocument], category: ComponentLabel) -> Vec<Continuum> {
    docs.iter()
        .map(|doc| {
            let tokens = tokenize(&doc.text);
            let units = doc
                .annotators()
                .into_iter()
                .map(|a| {
                    let spans = doc.annotations_by(a);
                    let ranges: Vec<Span> = spans
                        .iter()
                        .filter(|s| category == ComponentLabel::None || s.component == category)
                        .map(|s| token_range(&tokens, s.span()))
                        .filter(|r| !r.is_empty())
                        .collect();
                    let units = if category == ComponentLabel::None { complement(&ranges, tokens.len()) } else { ranges };
                    (a.to_string(), units)
                })
                .collect();
            Continuum { extent: Span::new(0, tokens.len()), units }
        })
        .collect()
}

fn complement(sorted: &[Span], len: usize) -> Vec<Span> {
    let mut out = Vec::new();
    let mut pos = 0;
    for s in sorted {
        if s.start > pos {
            out.push(Span::new(pos, s.start));
        }
        pos = pos.max(s.end);
    }
    if pos < len {
        out.push(Span::new(pos, len));
    }
    out
}

fn fmt_metric(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.4}")).unwrap_or_else(|| "n/a".into())
}

impl AgreementReport {
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "documents: {}\nannotators: {}\n",
            self.documents,
            self.annotators.join(", ")
        );
        if let Some(s) = &self.sampler {
            out.push_str(&format!("alpha_u sampler: {} rounds, seed {}\n", s.rounds, s.seed));
        }
        if let Some(c) = &self.components {
            out.push_str(&format!("\ncomponents ({} sentences)\n", c.items));
            out.push_str(&format!(
                "{:<12} {:>8} {:>8} {:>8} {:>8}\n",
                "", "%", "multi-pi", "alpha", "alpha_u"
            ));
            for cat in &c.categories {
                out.push_str(&format!(
                    "{:<12} {:>8} {:>8} {:>8} {:>8}\n",
                    cat.category.as_str(),
                    fmt_metric(cat.percentage),
                    fmt_metric(cat.multi_pi),
                    fmt_metric(cat.alpha),
                    fmt_metric(cat.alpha_u),
                ));
            }
            out.push_str("\ncomponent CPM\n");
            out.push_str(&c.cpm.to_table());
        }
        for scale in &self.scales {
            out.push_str(&format!(
                "\n{} empathy ({} sentences)\nmulti-pi {}\n",
                scale.dimension,
                scale.items,
                fmt_metric(scale.multi_pi)
            ));
            if let Some(cpm) = &scale.cpm {
                out.push_str(&cpm.to_table());
            }
        }
        out
    }
}
