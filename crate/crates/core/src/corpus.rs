//! Loading and validation of the input CSV files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{CorpusError, EngineError, RefKind};
use crate::indicators::{build_snip_quartiles, SnipQuartileTable};
use crate::taxonomy::{Level, SubjectCode, SubjectTaxonomy};

pub const PUBLICATIONS_FILE: &str = "publications.csv";
pub const JOURNALS_FILE: &str = "journals.csv";
pub const INSTITUTIONS_FILE: &str = "institutions.csv";
pub const TAXONOMY_FILE: &str = "taxonomy.csv";
pub const SNIP_FILE: &str = "snip.csv";

/// Region value that matches every institution.
pub const ALL_REGIONS: &str = "ALL";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublicationRecord {
    pub pub_id: String,
    pub institution_id: String,
    pub journal_id: String,
    pub year: i32,
    pub citations: u64,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JournalRecord {
    pub journal_id: String,
    pub title: String,
    pub asjc_codes: BTreeSet<SubjectCode>,
    pub snip_2010: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstitutionRecord {
    pub institution_id: String,
    pub name: String,
    pub region: String,
}

/// Inclusive range of publication years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWindow")]
pub struct YearWindow {
    start: i32,
    end: i32,
}

#[derive(Deserialize)]
struct RawWindow {
    start: i32,
    end: i32,
}

impl TryFrom<RawWindow> for YearWindow {
    type Error = EngineError;

    fn try_from(raw: RawWindow) -> Result<Self, Self::Error> {
        YearWindow::new(raw.start, raw.end)
    }
}

impl YearWindow {
    pub const DEFAULT: YearWindow = YearWindow {
        start: 2008,
        end: 2013,
    };

    pub fn new(start: i32, end: i32) -> Result<Self, EngineError> {
        if start > end {
            return Err(EngineError::InvalidWindow { start, end });
        }
        Ok(YearWindow { start, end })
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn end(&self) -> i32 {
        self.end
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }

    pub fn is_within(&self, outer: &YearWindow) -> bool {
        outer.start <= self.start && self.end <= outer.end
    }
}

impl Default for YearWindow {
    fn default() -> Self {
        YearWindow::DEFAULT
    }
}

impl fmt::Display for YearWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

impl FromStr for YearWindow {
    type Err = String;

    /// Parses `start:end`, both inclusive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected START:END, got {s:?}"))?;
        let start = a
            .trim()
            .parse::<i32>()
            .map_err(|e| format!("bad start year {a:?}: {e}"))?;
        let end = b
            .trim()
            .parse::<i32>()
            .map_err(|e| format!("bad end year {b:?}: {e}"))?;
        YearWindow::new(start, end).map_err(|e| e.to_string())
    }
}

/// Locations of the five input files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusPaths {
    pub publications: PathBuf,
    pub journals: PathBuf,
    pub institutions: PathBuf,
    pub taxonomy: PathBuf,
    pub snip: PathBuf,
}

impl CorpusPaths {
    /// The standard file names inside one directory.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        CorpusPaths {
            publications: dir.join(PUBLICATIONS_FILE),
            journals: dir.join(JOURNALS_FILE),
            institutions: dir.join(INSTITUTIONS_FILE),
            taxonomy: dir.join(TAXONOMY_FILE),
            snip: dir.join(SNIP_FILE),
        }
    }

    fn all(&self) -> [&Path; 5] {
        [
            &self.publications,
            &self.journals,
            &self.institutions,
            &self.taxonomy,
            &self.snip,
        ]
    }
}

/// The five inputs as in-memory CSV text.
#[derive(Debug, Clone, Copy)]
pub struct CorpusInputs<'a> {
    pub publications: &'a str,
    pub journals: &'a str,
    pub institutions: &'a str,
    pub taxonomy: &'a str,
    pub snip: &'a str,
}

/// Row counts echoed after a load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub publications: usize,
    pub journals: usize,
    pub journals_without_snip: usize,
    pub institutions: usize,
    pub regions: Vec<String>,
    pub subjects: usize,
    pub year_min: i32,
    pub year_max: i32,
}

/// A referentially closed, immutable publication corpus.
#[derive(Debug)]
pub struct Corpus {
    publications: Vec<PublicationRecord>,
    journals: BTreeMap<String, JournalRecord>,
    institutions: BTreeMap<String, InstitutionRecord>,
    taxonomy: SubjectTaxonomy,
    window: YearWindow,
    regions: BTreeSet<String>,
    by_institution: BTreeMap<String, Vec<usize>>,
    journal_subjects: BTreeMap<String, [BTreeSet<SubjectCode>; 3]>,
    quartiles: OnceLock<SnipQuartileTable>,
}

pub fn load_corpus(paths: &CorpusPaths) -> Result<Corpus, CorpusError> {
    load_corpus_with_window(paths, YearWindow::DEFAULT)
}

pub fn load_corpus_with_window(
    paths: &CorpusPaths,
    window: YearWindow,
) -> Result<Corpus, CorpusError> {
    for path in paths.all() {
        if !path.is_file() {
            return Err(CorpusError::MissingFile(path.to_path_buf()));
        }
    }
    let read = |path: &Path| {
        fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })
    };
    let publications = read(&paths.publications)?;
    let journals = read(&paths.journals)?;
    let institutions = read(&paths.institutions)?;
    let taxonomy = read(&paths.taxonomy)?;
    let snip = read(&paths.snip)?;
    Corpus::from_inputs(
        CorpusInputs {
            publications: &publications,
            journals: &journals,
            institutions: &institutions,
            taxonomy: &taxonomy,
            snip: &snip,
        },
        window,
    )
}

pub(crate) fn csv_reader<R: Read>(
    reader: R,
    file: &str,
    expected: &[&str],
) -> Result<csv::Reader<R>, CorpusError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| CorpusError::MalformedRow {
        file: file.to_string(),
        line: 1,
        reason: e.to_string(),
    })?;
    let found: Vec<&str> = headers
        .iter()
        .map(|h| h.trim().trim_start_matches('\u{feff}'))
        .collect();
    if found != expected {
        return Err(CorpusError::MalformedRow {
            file: file.to_string(),
            line: 1,
            reason: format!(
                "expected header {:?}, found {:?}",
                expected.join(","),
                found.join(",")
            ),
        });
    }
    Ok(rdr)
}

pub(crate) fn record_or_malformed(
    record: Result<csv::StringRecord, csv::Error>,
    file: &str,
) -> Result<(csv::StringRecord, u64), CorpusError> {
    match record {
        Ok(r) => {
            let line = r.position().map_or(0, |p| p.line());
            Ok((r, line))
        }
        Err(e) => {
            let line = e.position().map_or(0, |p| p.line());
            Err(CorpusError::MalformedRow {
                file: file.to_string(),
                line,
                reason: e.to_string(),
            })
        }
    }
}

fn malformed(file: &str, line: u64, reason: impl Into<String>) -> CorpusError {
    CorpusError::MalformedRow {
        file: file.to_string(),
        line,
        reason: reason.into(),
    }
}

fn required<'r>(
    record: &'r csv::StringRecord,
    idx: usize,
    column: &str,
    file: &str,
    line: u64,
) -> Result<&'r str, CorpusError> {
    let value = record[idx].trim();
    if value.is_empty() {
        return Err(malformed(file, line, format!("empty {column}")));
    }
    Ok(value)
}

impl Corpus {
    /// Parses and cross-checks the five inputs.
    pub fn from_inputs(
        inputs: CorpusInputs<'_>,
        window: YearWindow,
    ) -> Result<Corpus, CorpusError> {
        let taxonomy = SubjectTaxonomy::from_csv(inputs.taxonomy.as_bytes(), TAXONOMY_FILE)?;
        let mut journals = parse_journals(inputs.journals, &taxonomy)?;
        apply_snip(inputs.snip, &mut journals)?;
        let institutions = parse_institutions(inputs.institutions)?;
        let publications = parse_publications(inputs.publications, &journals, &institutions)?;

        let regions = institutions.values().map(|i| i.region.clone()).collect();
        let mut by_institution: BTreeMap<String, Vec<usize>> = institutions
            .keys()
            .map(|k| (k.clone(), Vec::new()))
            .collect();
        for (idx, p) in publications.iter().enumerate() {
            by_institution
                .get_mut(&p.institution_id)
                .expect("institution resolved during parsing")
                .push(idx);
        }

        let mut journal_subjects = BTreeMap::new();
        for j in journals.values() {
            let mut sets: [BTreeSet<SubjectCode>; 3] = Default::default();
            for (slot, level) in sets.iter_mut().zip(Level::ALL) {
                *slot = taxonomy.subjects_at(&j.asjc_codes, level)?;
            }
            journal_subjects.insert(j.journal_id.clone(), sets);
        }

        Ok(Corpus {
            publications,
            journals,
            institutions,
            taxonomy,
            window,
            regions,
            by_institution,
            journal_subjects,
            quartiles: OnceLock::new(),
        })
    }

    pub fn publications(&self) -> &[PublicationRecord] {
        &self.publications
    }

    pub fn journals(&self) -> impl Iterator<Item = &JournalRecord> {
        self.journals.values()
    }

    pub fn journal(&self, id: &str) -> Option<&JournalRecord> {
        self.journals.get(id)
    }

    /// Institutions in id order.
    pub fn institutions(&self) -> impl Iterator<Item = &InstitutionRecord> {
        self.institutions.values()
    }

    pub fn institution(&self, id: &str) -> Option<&InstitutionRecord> {
        self.institutions.get(id)
    }

    pub fn taxonomy(&self) -> &SubjectTaxonomy {
        &self.taxonomy
    }

    /// The declared corpus year window.
    pub fn window(&self) -> YearWindow {
        self.window
    }

    pub fn regions(&self) -> &BTreeSet<String> {
        &self.regions
    }

    pub fn is_known_region(&self, region: &str) -> bool {
        region == ALL_REGIONS || self.regions.contains(region)
    }

    /// Publications of one institution in file order.
    pub fn publications_of<'a>(
        &'a self,
        institution_id: &str,
    ) -> impl Iterator<Item = &'a PublicationRecord> + 'a {
        self.by_institution
            .get(institution_id)
            .into_iter()
            .flatten()
            .map(move |&i| &self.publications[i])
    }

    /// Subjects of a journal at one level, with set semantics.
    pub fn subjects_of_journal(
        &self,
        journal_id: &str,
        level: Level,
    ) -> Option<&BTreeSet<SubjectCode>> {
        self.journal_subjects
            .get(journal_id)
            .map(|s| &s[level.number() as usize - 1])
    }

    /// Top-quartile SNIP journals per level-3 subject, built on first use.
    pub fn snip_quartiles(&self) -> &SnipQuartileTable {
        self.quartiles.get_or_init(|| build_snip_quartiles(self))
    }

    pub fn summary(&self) -> CorpusSummary {
        CorpusSummary {
            publications: self.publications.len(),
            journals: self.journals.len(),
            journals_without_snip: self
                .journals
                .values()
                .filter(|j| j.snip_2010.is_none())
                .count(),
            institutions: self.institutions.len(),
            regions: self.regions.iter().cloned().collect(),
            subjects: self.taxonomy.len(),
            year_min: self.window.start(),
            year_max: self.window.end(),
        }
    }
}

fn parse_journals(
    text: &str,
    taxonomy: &SubjectTaxonomy,
) -> Result<BTreeMap<String, JournalRecord>, CorpusError> {
    let mut out = BTreeMap::new();
    let mut rdr = csv_reader(
        text.as_bytes(),
        JOURNALS_FILE,
        &["journal_id", "title", "asjc_codes"],
    )?;
    for record in rdr.records() {
        let (record, line) = record_or_malformed(record, JOURNALS_FILE)?;
        let id = required(&record, 0, "journal_id", JOURNALS_FILE, line)?.to_string();
        let mut codes = BTreeSet::new();
        for raw in record[2]
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
        {
            let code = raw.parse::<u32>().map(SubjectCode).map_err(|e| {
                malformed(JOURNALS_FILE, line, format!("bad ASJC code {raw:?}: {e}"))
            })?;
            match taxonomy.node(code) {
                None => {
                    return Err(CorpusError::DanglingReference {
                        kind: RefKind::Subject,
                        id: raw.to_string(),
                    })
                }
                Some(n) if n.level != Level::Niche => {
                    return Err(malformed(
                        JOURNALS_FILE,
                        line,
                        format!(
                            "ASJC code {raw} is level {}, journals take level-3 codes",
                            n.level
                        ),
                    ))
                }
                Some(_) => {}
            }
            codes.insert(code);
        }
        if codes.is_empty() {
            return Err(malformed(JOURNALS_FILE, line, "journal has no ASJC codes"));
        }
        let journal = JournalRecord {
            journal_id: id.clone(),
            title: record[1].to_string(),
            asjc_codes: codes,
            snip_2010: None,
        };
        if out.insert(id.clone(), journal).is_some() {
            return Err(CorpusError::DuplicateId {
                kind: RefKind::Journal,
                id,
            });
        }
    }
    Ok(out)
}

fn apply_snip(
    text: &str,
    journals: &mut BTreeMap<String, JournalRecord>,
) -> Result<(), CorpusError> {
    let mut seen = BTreeSet::new();
    let mut rdr = csv_reader(text.as_bytes(), SNIP_FILE, &["journal_id", "snip_2010"])?;
    for record in rdr.records() {
        let (record, line) = record_or_malformed(record, SNIP_FILE)?;
        let id = required(&record, 0, "journal_id", SNIP_FILE, line)?.to_string();
        if !seen.insert(id.clone()) {
            return Err(CorpusError::DuplicateId {
                kind: RefKind::Snip,
                id,
            });
        }
        let journal = journals
            .get_mut(&id)
            .ok_or_else(|| CorpusError::DanglingReference {
                kind: RefKind::Journal,
                id: id.clone(),
            })?;
        let raw = record[1].trim();
        if raw.is_empty() {
            continue;
        }
        let snip = raw
            .parse::<f64>()
            .map_err(|e| malformed(SNIP_FILE, line, format!("bad snip_2010 {raw:?}: {e}")))?;
        if !snip.is_finite() || snip < 0.0 {
            return Err(malformed(
                SNIP_FILE,
                line,
                format!("snip_2010 must be a non-negative number, got {raw}"),
            ));
        }
        journal.snip_2010 = Some(snip);
    }
    Ok(())
}

fn parse_institutions(text: &str) -> Result<BTreeMap<String, InstitutionRecord>, CorpusError> {
    let mut out = BTreeMap::new();
    let mut rdr = csv_reader(
        text.as_bytes(),
        INSTITUTIONS_FILE,
        &["institution_id", "name", "region"],
    )?;
    for record in rdr.records() {
        let (record, line) = record_or_malformed(record, INSTITUTIONS_FILE)?;
        let id = required(&record, 0, "institution_id", INSTITUTIONS_FILE, line)?.to_string();
        let region = required(&record, 2, "region", INSTITUTIONS_FILE, line)?.to_string();
        if region == ALL_REGIONS {
            return Err(malformed(INSTITUTIONS_FILE, line, "region ALL is reserved"));
        }
        let inst = InstitutionRecord {
            institution_id: id.clone(),
            name: record[1].to_string(),
            region,
        };
        if out.insert(id.clone(), inst).is_some() {
            return Err(CorpusError::DuplicateId {
                kind: RefKind::Institution,
                id,
            });
        }
    }
    Ok(out)
}

fn parse_publications(
    text: &str,
    journals: &BTreeMap<String, JournalRecord>,
    institutions: &BTreeMap<String, InstitutionRecord>,
) -> Result<Vec<PublicationRecord>, CorpusError> {
    let mut out = Vec::new();
    let mut ids = BTreeSet::new();
    let mut rdr = csv_reader(
        text.as_bytes(),
        PUBLICATIONS_FILE,
        &[
            "pub_id",
            "institution_id",
            "journal_id",
            "year",
            "citations",
            "title",
        ],
    )?;
    for record in rdr.records() {
        let (record, line) = record_or_malformed(record, PUBLICATIONS_FILE)?;
        let pub_id = required(&record, 0, "pub_id", PUBLICATIONS_FILE, line)?.to_string();
        let institution_id =
            required(&record, 1, "institution_id", PUBLICATIONS_FILE, line)?.to_string();
        let journal_id = required(&record, 2, "journal_id", PUBLICATIONS_FILE, line)?.to_string();
        let year_raw = required(&record, 3, "year", PUBLICATIONS_FILE, line)?;
        let year = year_raw.parse::<i32>().map_err(|e| {
            malformed(
                PUBLICATIONS_FILE,
                line,
                format!("bad year {year_raw:?}: {e}"),
            )
        })?;
        let cites_raw = required(&record, 4, "citations", PUBLICATIONS_FILE, line)?;
        let citations = cites_raw.parse::<u64>().map_err(|e| {
            malformed(
                PUBLICATIONS_FILE,
                line,
                format!("bad citations {cites_raw:?}: {e}"),
            )
        })?;

        if !ids.insert(pub_id.clone()) {
            return Err(CorpusError::DuplicateId {
                kind: RefKind::Publication,
                id: pub_id,
            });
        }
        if !journals.contains_key(&journal_id) {
            return Err(CorpusError::DanglingReference {
                kind: RefKind::Journal,
                id: journal_id,
            });
        }
        if !institutions.contains_key(&institution_id) {
            return Err(CorpusError::DanglingReference {
                kind: RefKind::Institution,
                id: institution_id,
            });
        }
        out.push(PublicationRecord {
            pub_id,
            institution_id,
            journal_id,
            year,
            citations,
            title: record[5].to_string(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationWarning {
    MissingSnip { journal_id: String },
    OutOfWindow { pub_id: String, year: i32 },
    NoPublications { institution_id: String },
}

/// Warnings about a loaded corpus. Structural errors never get this far:
/// they fail the load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub summary: CorpusSummary,
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn count(&self, pred: impl Fn(&ValidationWarning) -> bool) -> usize {
        self.warnings.iter().filter(|w| pred(w)).count()
    }
}

pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let mut warnings = Vec::new();
    for j in corpus.journals() {
        if j.snip_2010.is_none() {
            warnings.push(ValidationWarning::MissingSnip {
                journal_id: j.journal_id.clone(),
            });
        }
    }
    let window = corpus.window();
    for p in corpus.publications() {
        if !window.contains(p.year) {
            warnings.push(ValidationWarning::OutOfWindow {
                pub_id: p.pub_id.clone(),
                year: p.year,
            });
        }
    }
    for inst in corpus.institutions() {
        if corpus
            .publications_of(&inst.institution_id)
            .next()
            .is_none()
        {
            warnings.push(ValidationWarning::NoPublications {
                institution_id: inst.institution_id.clone(),
            });
        }
    }
    ValidationReport {
        summary: corpus.summary(),
        warnings,
    }
}
