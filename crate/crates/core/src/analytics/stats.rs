use serde::Serialize;

use crate::corpus::{split_sentences, tokenize, AnnotatedCorpus, ComponentLabel, Dimension};
use crate::error::{Error, Result};

/// Total and distribution of a per-document count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

impl Summary {
    /// Summary of `values`; all fields are 0 for an empty slice. The standard
    /// deviation is the sample (n - 1) estimator, 0 for a single value.
    pub fn of(values: &[f64]) -> Summary {
        if values.is_empty() {
            return Summary { total: 0.0, mean: 0.0, std_dev: 0.0, min: 0.0, max: 0.0, median: 0.0 };
        }
        let n = values.len() as f64;
        let total: f64 = values.iter().sum();
        let mean = total / n;
        let std_dev = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 { sorted[mid] } else { (sorted[mid - 1] + sorted[mid]) / 2.0 };
        Summary { total, mean, std_dev, min: sorted[0], max: sorted[sorted.len() - 1], median }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentStats {
    pub component: ComponentLabel,
    /// Per-document annotation counts.
    pub per_document: Summary,
    /// Fraction of all component annotations.
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreStats {
    pub dimension: Dimension,
    /// Counts of levels 1..=5.
    pub histogram: [u64; 5],
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub documents: usize,
    pub sentences: Summary,
    pub tokens: Summary,
    pub components: Vec<ComponentStats>,
    pub scores: Vec<ScoreStats>,
    /// Pearson correlation of cognitive and emotional scores; absent when
    /// undefined.
    pub correlation: Option<f64>,
}

pub fn corpus_stats(corpus: &AnnotatedCorpus) -> Result<StatsReport> {
    if corpus.documents.is_empty() {
        return Err(Error::InvalidInput("empty corpus".into()));
    }
    let sentences: Vec<f64> = corpus.documents.iter().map(|d| split_sentences(&d.text).len() as f64).collect();
    let tokens: Vec<f64> = corpus.documents.iter().map(|d| tokenize(&d.text).len() as f64).collect();

    let all_components = corpus.annotation_count() as f64;
    let components = ComponentLabel::STORED
        .into_iter()
        .map(|component| {
            let counts: Vec<f64> = corpus
                .documents
                .iter()
                .map(|d| d.annotations.iter().filter(|a| a.component == component).count() as f64)
                .collect();
            let per_document = Summary::of(&counts);
            let share = if all_components > 0.0 { per_document.total / all_components } else { 0.0 };
            ComponentStats { component, per_document, share }
        })
        .collect();

    let scores = Dimension::ALL
        .into_iter()
        .map(|dimension| {
            let values: Vec<f64> = corpus
                .documents
                .iter()
                .flat_map(|d| d.annotations.iter())
                .map(|a| a.score(dimension).value() as f64)
                .collect();
            let mut histogram = [0u64; 5];
            for v in &values {
                histogram[*v as usize - 1] += 1;
            }
            let s = Summary::of(&values);
            ScoreStats { dimension, histogram, mean: s.mean, std_dev: s.std_dev, min: s.min, max: s.max, median: s.median }
        })
        .collect();

    Ok(StatsReport {
        documents: corpus.documents.len(),
        sentences: Summary::of(&sentences),
        tokens: Summary::of(&tokens),
        components,
        scores,
        correlation: score_correlation(corpus).ok(),
    })
}

/// Pearson correlation between cognitive and emotional scores, paired per
/// component annotation.
pub fn score_correlation(corpus: &AnnotatedCorpus) -> Result<f64> {
    let pairs: Vec<(f64, f64)> = corpus
        .documents
        .iter()
        .flat_map(|d| d.annotations.iter())
        .map(|a| (a.cognitive.value() as f64, a.emotional.value() as f64))
        .collect();
    pearson(&pairs)
}

pub fn pearson(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::Undefined("correlation needs at least two pairs".into()));
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn fmt_summary(name: &str, s: &Summary) -> String {
    format!(
        "{name:<12} {:>10} {:>8.2} {:>8.2} {:>6} {:>6} {:>7}\n",
        s.total, s.mean, s.std_dev, s.min, s.max, s.median
    )
}

impl StatsReport {
    pub fn to_table(&self) -> String {
        let mut out = format!("documents: {}\n\n", self.documents);
        out.push_str(&format!(
            "{:<12} {:>10} {:>8} {:>8} {:>6} {:>6} {:>7}\n",
            "", "total", "mean", "std", "min", "max", "median"
        ));
        out.push_str(&fmt_summary("sentences", &self.sentences));
        out.push_str(&fmt_summary("tokens", &self.tokens));
        out.push('\n');
        out.push_str(&format!(
            "{:<12} {:>10} {:>8} {:>8} {:>6} {:>6} {:>7} {:>6}\n",
            "", "total", "mean", "std", "min", "max", "median", "share"
        ));
        for c in &self.components {
            let line = fmt_summary(c.component.as_str(), &c.per_document);
            out.push_str(line.trim_end());
            out.push_str(&format!(" {:>6.2}\n", c.share));
        }
        out.push('\n');
        out.push_str(&format!(
            "{:<12} {:>8} {:>8} {:>6} {:>6} {:>7}   histogram 1..5\n",
            "", "mean", "std", "min", "max", "median"
        ));
        for s in &self.scores {
            out.push_str(&format!(
                "{:<12} {:>8.2} {:>8.2} {:>6} {:>6} {:>7}   {:?}\n",
                s.dimension.as_str(),
                s.mean,
                s.std_dev,
                s.min,
                s.max,
                s.median,
                s.histogram
            ));
        }
        match self.correlation {
            Some(r) => out.push_str(&format!("\ncognitive/emotional pearson r = {r:.4}\n")),
            None => out.push_str("\ncognitive/emotional pearson r = n/a\n"),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AnnotatedDocument, EmpathyScore, SpanAnnotation};
    use approx::assert_abs_diff_eq;

    fn ann(start: usize, end: usize, component: ComponentLabel, cog: i64, emo: i64) -> SpanAnnotation {
        SpanAnnotation {
            annotator: "a".into(),
            start,
            end,
            component,
            cognitive: EmpathyScore::new(cog).unwrap(),
            emotional: EmpathyScore::new(emo).unwrap(),
        }
    }

    #[test]
    fn summary_basics() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!((s.total, s.mean, s.min, s.max, s.median), (10.0, 2.5, 1.0, 4.0, 2.5));
        assert_abs_diff_eq!(s.std_dev, (5.0f64 / 3.0).sqrt());
        assert_eq!(Summary::of(&[7.0]).std_dev, 0.0);
    }

    #[test]
    fn single_document_counts() {
        // 2 sentences, 10 tokens
        let text = "Die Idee ist gut. Es fehlt ein Bild!";
        let corpus = AnnotatedCorpus {
            documents: vec![AnnotatedDocument {
                id: "d".into(),
                text: text.into(),
                annotations: vec![ann(0, 17, ComponentLabel::Strength, 3, 4)],
            }],
        };
        let r = corpus_stats(&corpus).unwrap();
        assert_eq!((r.sentences.total, r.tokens.total), (2.0, 10.0));
        assert_eq!(r.components[0].per_document.total, 1.0);
        assert_eq!(r.components[0].per_document.mean, 1.0);
        assert_eq!(r.components[0].share, 1.0);
        assert_eq!(r.scores[1].histogram, [0, 0, 0, 1, 0]);
    }

    #[test]
    fn document_without_annotations() {
        let corpus = AnnotatedCorpus {
            documents: vec![AnnotatedDocument { id: "d".into(), text: "Gut.".into(), annotations: vec![] }],
        };
        let r = corpus_stats(&corpus).unwrap();
        for c in &r.components {
            assert_eq!(c.per_document, Summary::of(&[0.0]));
            assert_eq!(c.share, 0.0);
        }
        assert_eq!(r.scores[0].histogram, [0; 5]);
        assert!(corpus_stats(&AnnotatedCorpus::default()).is_err());
    }

    #[test]
    fn correlation_examples() {
        let pairs = [(1.0, 5.0), (2.0, 4.0), (3.0, 3.0), (4.0, 2.0), (5.0, 1.0)];
        assert_abs_diff_eq!(pearson(&pairs).unwrap(), -1.0);
        let same: Vec<_> = (1..=5).map(|v| (v as f64, v as f64)).collect();
        assert_abs_diff_eq!(pearson(&same).unwrap(), 1.0);
        assert!(pearson(&[(1.0, 2.0), (1.0, 3.0)]).is_err());
    }
}
