use std::fmt;
use std::path::PathBuf;

use crate::taxonomy::{Level, SubjectCode};

/// The kind of entity a dangling or duplicate id refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefKind {
    Publication,
    Journal,
    Institution,
    Subject,
    Snip,
}

impl fmt::Display for RefKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RefKind::Publication => "publication",
            RefKind::Journal => "journal",
            RefKind::Institution => "institution",
            RefKind::Subject => "subject",
            RefKind::Snip => "snip",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TaxonomyError {
    #[error("unknown subject code {0}")]
    UnknownCode(SubjectCode),
    #[error("duplicate subject code {0}")]
    DuplicateCode(SubjectCode),
    #[error("subject {code} refers to missing parent {parent}")]
    OrphanNode {
        code: SubjectCode,
        parent: SubjectCode,
    },
    #[error("subject {0} is part of a parent cycle")]
    Cycle(SubjectCode),
    #[error("subject {code} at level {level} has an invalid parent ({reason})")]
    InvalidParent {
        code: SubjectCode,
        level: Level,
        reason: String,
    },
}

/// Errors raised while loading the input files.
#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("missing input file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("failed to read {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {reason}")]
    MalformedRow {
        file: String,
        line: u64,
        reason: String,
    },
    #[error("dangling {kind} reference {id:?}")]
    DanglingReference { kind: RefKind, id: String },
    #[error("duplicate {kind} id {id:?}")]
    DuplicateId { kind: RefKind, id: String },
    #[error("invalid taxonomy: {0}")]
    Taxonomy(#[from] TaxonomyError),
}

impl CorpusError {
    /// True for errors caused by absent files rather than bad content.
    pub fn is_missing_file(&self) -> bool {
        matches!(self, CorpusError::MissingFile(_))
    }
}

/// Errors raised by the indicator, rating and benchmark engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("unknown institution {0:?}")]
    UnknownInstitution(String),
    #[error("unknown subject code {0}")]
    UnknownCode(SubjectCode),
    #[error("subject {code} is a level {actual} subject, not level {expected}")]
    LevelMismatch {
        code: SubjectCode,
        expected: Level,
        actual: Level,
    },
    #[error("unknown region {0:?}")]
    UnknownRegion(String),
    #[error("no institution passes the publication threshold in this scope")]
    EmptyScope,
    #[error("invalid year window {start}:{end}")]
    InvalidWindow { start: i32, end: i32 },
    #[error("year window {start}:{end} lies outside the corpus window {min}:{max}")]
    WindowOutsideCorpus {
        start: i32,
        end: i32,
        min: i32,
        max: i32,
    },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("percentage {0} outside [0, 100]")]
    OutOfRange(f64),
    #[error("overall rating needs at least 15 level-1 subjects, taxonomy has {0}")]
    InsufficientTaxonomy(usize),
    #[error("at most 5 institutions can be benchmarked, got {0}")]
    TooManyInstitutions(usize),
    #[error("no institutions selected")]
    NoInstitutions,
    #[error("institution {0:?} selected more than once")]
    DuplicateInstitution(String),
}

impl EngineError {
    /// Stable machine-readable name, used by the CLI and the HTTP API.
    pub fn name(&self) -> &'static str {
        match self {
            EngineError::UnknownInstitution(_) => "UnknownInstitution",
            EngineError::UnknownCode(_) => "UnknownCode",
            EngineError::LevelMismatch { .. } => "LevelMismatch",
            EngineError::UnknownRegion(_) => "UnknownRegion",
            EngineError::EmptyScope => "EmptyScope",
            EngineError::InvalidWindow { .. } => "InvalidWindow",
            EngineError::WindowOutsideCorpus { .. } => "WindowOutsideCorpus",
            EngineError::InvalidWeights(_) => "InvalidWeights",
            EngineError::OutOfRange(_) => "OutOfRange",
            EngineError::InsufficientTaxonomy(_) => "InsufficientTaxonomy",
            EngineError::TooManyInstitutions(_) => "TooManyInstitutions",
            EngineError::NoInstitutions => "NoInstitutions",
            EngineError::DuplicateInstitution(_) => "DuplicateInstitution",
        }
    }
}
