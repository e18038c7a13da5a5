//! Corpus statistics, score correlation, classification reports, dataset
//! splits and survey summaries.

mod eval;
mod split;
mod stats;
mod survey;

pub use eval::{classification_report, macro_average, weighted_average, Average, ClassMetrics, EvalReport};
pub use split::{split_corpus, split_sizes, CorpusSplit, SplitRatios};
pub use stats::{corpus_stats, pearson, score_correlation, ComponentStats, ScoreStats, StatsReport, Summary};
pub use survey::{survey_summary, Construct, ConstructSummary, SurveyResponse, SurveySummary, LIKERT_MIDPOINT};
