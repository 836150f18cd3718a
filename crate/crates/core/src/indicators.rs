//! The five per-cell indicators: publications, citations, h-index,
//! share of papers in top-quartile SNIP journals, and citations per paper.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::corpus::{Corpus, PublicationRecord, YearWindow};
use crate::error::EngineError;
use crate::taxonomy::{Level, SubjectCode};

/// Indicator order used everywhere a 5-vector appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Indicator {
    Publications,
    Citations,
    HIndex,
    PctTopSnip,
    Cpp,
}

impl Indicator {
    pub const ALL: [Indicator; 5] = [
        Indicator::Publications,
        Indicator::Citations,
        Indicator::HIndex,
        Indicator::PctTopSnip,
        Indicator::Cpp,
    ];

    /// Wire name.
    pub fn key(self) -> &'static str {
        match self {
            Indicator::Publications => "pubs",
            Indicator::Citations => "cites",
            Indicator::HIndex => "h",
            Indicator::PctTopSnip => "pct_top_snip",
            Indicator::Cpp => "cpp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct IndicatorVector {
    pub total_pubs: u64,
    pub total_cites: u64,
    pub h_index: u64,
    pub pct_top_snip: f64,
    pub cpp: f64,
}

impl IndicatorVector {
    /// Computes the vector for publications already filtered to one cell.
    /// `scope` is the set of level-3 subjects whose quartiles count.
    pub fn from_cell(
        cell: &[&PublicationRecord],
        quartiles: &SnipQuartileTable,
        scope: &BTreeSet<SubjectCode>,
    ) -> Self {
        let citations: Vec<u64> = cell.iter().map(|p| p.citations).collect();
        let total_pubs = cell.len() as u64;
        let total_cites = citations.iter().sum();
        IndicatorVector {
            total_pubs,
            total_cites,
            h_index: h_index(&citations),
            pct_top_snip: pct_top_snip(cell, quartiles, scope),
            cpp: cpp(total_cites, total_pubs),
        }
    }

    pub fn value(&self, indicator: Indicator) -> f64 {
        match indicator {
            Indicator::Publications => self.total_pubs as f64,
            Indicator::Citations => self.total_cites as f64,
            Indicator::HIndex => self.h_index as f64,
            Indicator::PctTopSnip => self.pct_top_snip,
            Indicator::Cpp => self.cpp,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        Indicator::ALL.map(|i| self.value(i))
    }
}

/// Largest `h` such that at least `h` of the counts are `>= h`.
pub fn h_index(citations: &[u64]) -> u64 {
    let mut sorted = citations.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c > i as u64)
        .count() as u64
}

/// Citations per paper; zero for an empty cell.
pub fn cpp(total_cites: u64, total_pubs: u64) -> f64 {
    if total_pubs == 0 {
        0.0
    } else {
        total_cites as f64 / total_pubs as f64
    }
}

/// Journals in the top 25% by 2010 SNIP, per level-3 subject.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SnipQuartileTable {
    top: BTreeMap<SubjectCode, BTreeSet<String>>,
}

impl SnipQuartileTable {
    /// Picks the top quarter (rounded up) of `(journal_id, snip)` pairs by
    /// SNIP. Every journal tied with the cutoff value is admitted.
    pub fn select_top(ranked: &[(String, f64)]) -> BTreeSet<String> {
        if ranked.is_empty() {
            return BTreeSet::new();
        }
        let mut items: Vec<&(String, f64)> = ranked.iter().collect();
        items.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let slots = ranked.len().div_ceil(4);
        let cutoff = items[slots - 1].1;
        items
            .into_iter()
            .take_while(|(_, snip)| *snip >= cutoff)
            .map(|(id, _)| id.clone())
            .collect()
    }

    pub fn top(&self, subject: SubjectCode) -> Option<&BTreeSet<String>> {
        self.top.get(&subject)
    }

    /// True if the journal is top-quartile in any of the given subjects.
    pub fn is_top_in_any(&self, journal_id: &str, scope: &BTreeSet<SubjectCode>) -> bool {
        scope
            .iter()
            .any(|s| self.top.get(s).is_some_and(|set| set.contains(journal_id)))
    }

    pub fn subjects(&self) -> impl Iterator<Item = (SubjectCode, &BTreeSet<String>)> {
        self.top.iter().map(|(k, v)| (*k, v))
    }
}

/// Ranks each level-3 subject's SNIP-bearing journals. Subjects with no such
/// journal get an empty set; SNIP-absent journals never enter a ranking.
pub fn build_snip_quartiles(corpus: &Corpus) -> SnipQuartileTable {
    let mut ranked: BTreeMap<SubjectCode, Vec<(String, f64)>> = corpus
        .taxonomy()
        .nodes_at(Level::Niche)
        .map(|n| (n.code, Vec::new()))
        .collect();
    for journal in corpus.journals() {
        let Some(snip) = journal.snip_2010 else {
            continue;
        };
        for code in &journal.asjc_codes {
            if let Some(list) = ranked.get_mut(code) {
                list.push((journal.journal_id.clone(), snip));
            }
        }
    }
    SnipQuartileTable {
        top: ranked
            .into_iter()
            .map(|(code, list)| (code, SnipQuartileTable::select_top(&list)))
            .collect(),
    }
}

/// Percentage of a cell's publications in top-quartile journals of any
/// subject in `scope`. Papers in SNIP-absent journals stay in the denominator.
pub fn pct_top_snip(
    cell: &[&PublicationRecord],
    quartiles: &SnipQuartileTable,
    scope: &BTreeSet<SubjectCode>,
) -> f64 {
    if cell.is_empty() {
        return 0.0;
    }
    let hits = cell
        .iter()
        .filter(|p| quartiles.is_top_in_any(&p.journal_id, scope))
        .count();
    100.0 * hits as f64 / cell.len() as f64
}

/// A validated (subject, level, window) scope, reusable across institutions.
#[derive(Debug, Clone)]
pub(crate) struct CellScope {
    pub subject: SubjectCode,
    pub level: Level,
    pub window: YearWindow,
    pub leaves: BTreeSet<SubjectCode>,
}

impl CellScope {
    pub fn new(
        corpus: &Corpus,
        subject: SubjectCode,
        level: Level,
        window: YearWindow,
    ) -> Result<Self, EngineError> {
        let node = corpus
            .taxonomy()
            .node(subject)
            .ok_or(EngineError::UnknownCode(subject))?;
        if node.level != level {
            return Err(EngineError::LevelMismatch {
                code: subject,
                expected: level,
                actual: node.level,
            });
        }
        let outer = corpus.window();
        if !window.is_within(&outer) {
            return Err(EngineError::WindowOutsideCorpus {
                start: window.start(),
                end: window.end(),
                min: outer.start(),
                max: outer.end(),
            });
        }
        let leaves = corpus
            .taxonomy()
            .descendants(subject)
            .map_err(|_| EngineError::UnknownCode(subject))?;
        Ok(CellScope {
            subject,
            level,
            window,
            leaves,
        })
    }

    pub fn publications<'a>(
        &self,
        corpus: &'a Corpus,
        institution_id: &str,
    ) -> Vec<&'a PublicationRecord> {
        corpus
            .publications_of(institution_id)
            .filter(|p| self.window.contains(p.year))
            .filter(|p| {
                corpus
                    .subjects_of_journal(&p.journal_id, self.level)
                    .is_some_and(|s| s.contains(&self.subject))
            })
            .collect()
    }

    pub fn vector(&self, corpus: &Corpus, institution_id: &str) -> IndicatorVector {
        let cell = self.publications(corpus, institution_id);
        IndicatorVector::from_cell(&cell, corpus.snip_quartiles(), &self.leaves)
    }
}

/// The indicator vector of one (institution, subject, level, window) cell.
pub fn indicator_vector(
    corpus: &Corpus,
    institution_id: &str,
    subject: SubjectCode,
    level: Level,
    window: YearWindow,
) -> Result<IndicatorVector, EngineError> {
    if corpus.institution(institution_id).is_none() {
        return Err(EngineError::UnknownInstitution(institution_id.to_string()));
    }
    let scope = CellScope::new(corpus, subject, level, window)?;
    Ok(scope.vector(corpus, institution_id))
}
