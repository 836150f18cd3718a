//! At-a-glance benchmarking of up to five institutions.
//!
//! Each indicator is divided by its maximum among the chosen institutions
//! only and scaled to a percentage. No publication threshold applies.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, YearWindow};
use crate::error::EngineError;
use crate::indicators::{CellScope, IndicatorVector};
use crate::rating::normalize;
use crate::taxonomy::{Level, SubjectCode};

pub const MAX_BENCHMARK_INSTITUTIONS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectSpec {
    pub subject: SubjectCode,
    pub level: Level,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkEntry {
    pub institution_id: String,
    pub actual: IndicatorVector,
    pub pct: [f64; 5],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkProfile {
    pub subject: SubjectCode,
    pub level: Level,
    pub window: YearWindow,
    pub entries: Vec<BenchmarkEntry>,
    /// Columns whose maximum is zero; every percentage there is 0.
    pub degenerate: [bool; 5],
}

/// Per-indicator percentages of the column maximum, in input order.
pub fn profile_entries(
    vectors: Vec<(String, IndicatorVector)>,
) -> (Vec<BenchmarkEntry>, [bool; 5]) {
    let columns: Vec<Vec<f64>> = (0..5)
        .map(|i| {
            normalize(
                &vectors
                    .iter()
                    .map(|(_, v)| v.as_array()[i])
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let degenerate = [0, 1, 2, 3, 4].map(|i| vectors.iter().all(|(_, v)| v.as_array()[i] <= 0.0));
    let entries = vectors
        .into_iter()
        .enumerate()
        .map(|(row, (institution_id, actual))| BenchmarkEntry {
            institution_id,
            actual,
            pct: [0, 1, 2, 3, 4].map(|i| columns[i][row] * 100.0),
        })
        .collect();
    (entries, degenerate)
}

fn check_selection(corpus: &Corpus, institution_ids: &[String]) -> Result<(), EngineError> {
    if institution_ids.is_empty() {
        return Err(EngineError::NoInstitutions);
    }
    if institution_ids.len() > MAX_BENCHMARK_INSTITUTIONS {
        return Err(EngineError::TooManyInstitutions(institution_ids.len()));
    }
    let mut seen = BTreeSet::new();
    for id in institution_ids {
        if corpus.institution(id).is_none() {
            return Err(EngineError::UnknownInstitution(id.clone()));
        }
        if !seen.insert(id.as_str()) {
            return Err(EngineError::DuplicateInstitution(id.clone()));
        }
    }
    Ok(())
}

pub fn benchmark(
    corpus: &Corpus,
    institution_ids: &[String],
    subject: SubjectCode,
    level: Level,
    window: YearWindow,
) -> Result<BenchmarkProfile, EngineError> {
    check_selection(corpus, institution_ids)?;
    let scope = CellScope::new(corpus, subject, level, window)?;
    let vectors = institution_ids
        .iter()
        .map(|id| (id.clone(), scope.vector(corpus, id)))
        .collect();
    let (entries, degenerate) = profile_entries(vectors);
    Ok(BenchmarkProfile {
        subject,
        level,
        window,
        entries,
        degenerate,
    })
}

/// One independently normalized profile per subject tab.
pub fn benchmark_multi(
    corpus: &Corpus,
    institution_ids: &[String],
    specs: &[SubjectSpec],
    window: YearWindow,
) -> Result<Vec<BenchmarkProfile>, EngineError> {
    specs
        .iter()
        .map(|s| benchmark(corpus, institution_ids, s.subject, s.level, window))
        .collect()
}
