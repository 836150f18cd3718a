//! Rating and benchmarking of research institutions from a publication corpus.
//!
//! The crate is organised as a pipeline:
//!
//! * [`corpus`] loads the five input CSV files into an immutable [`Corpus`].
//! * [`taxonomy`] holds the three-level subject hierarchy.
//! * [`indicators`] computes the five indicators for one
//!   (institution, subject, level, window) cell.
//! * [`rating`] normalizes, weights, scores and bands the institutions of a scope.
//! * [`benchmark`] produces per-indicator percentage profiles for up to five
//!   institutions.
//! * [`report`] turns engine output into the JSON and CSV wire formats.

pub mod benchmark;
pub mod corpus;
pub mod error;
pub mod indicators;
pub mod rating;
pub mod report;
pub mod taxonomy;

pub use benchmark::{benchmark, benchmark_multi, BenchmarkEntry, BenchmarkProfile, SubjectSpec};
pub use corpus::{
    load_corpus, load_corpus_with_window, validate_corpus, Corpus, CorpusInputs, CorpusPaths,
    CorpusSummary, InstitutionRecord, JournalRecord, PublicationRecord, ValidationReport,
    ValidationWarning, YearWindow,
};
pub use error::{CorpusError, EngineError, RefKind, TaxonomyError};
pub use indicators::{
    build_snip_quartiles, cpp, h_index, indicator_vector, pct_top_snip, Indicator, IndicatorVector,
    SnipQuartileTable,
};
pub use rating::{
    band, normalize, percentage_scores, rate_overall, rate_subject, weighted_total, OverallQuery,
    OverallRating, OverallRow, Preset, RatingQuery, RatingRow, Region, WeightScheme,
};
pub use taxonomy::{Ancestry, Level, SubjectCode, SubjectNode, SubjectTaxonomy};
