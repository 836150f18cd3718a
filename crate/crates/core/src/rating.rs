//! Subject-specific and overall rating: normalize each indicator by its
//! maximum, weight, sum, rescale to a percentage of the best total, and
//! map the percentage to a band from 1 (best) to 10.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, YearWindow, ALL_REGIONS};
use crate::error::EngineError;
use crate::indicators::{CellScope, IndicatorVector};
use crate::taxonomy::{Level, SubjectCode};

pub const DEFAULT_MIN_PUBS: u64 = 40;

/// Number of level-1 subjects in the overall rating.
pub const OVERALL_SUBJECTS: usize = 15;

/// Per-indicator weights in `[0, 100]`, in the order
/// (pubs, cites, h, pct_top_snip, cpp).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 5]")]
pub struct WeightScheme([f64; 5]);

impl WeightScheme {
    pub const EQUAL: WeightScheme = WeightScheme([50.0; 5]);
    pub const VOLUME: WeightScheme = WeightScheme([100.0, 100.0, 100.0, 0.0, 0.0]);
    pub const QUALITY: WeightScheme = WeightScheme([0.0, 0.0, 0.0, 100.0, 100.0]);

    pub fn new(weights: [f64; 5]) -> Result<Self, EngineError> {
        if let Some(w) = weights.iter().find(|w| !(0.0..=100.0).contains(*w)) {
            return Err(EngineError::InvalidWeights(format!(
                "weight {w} outside [0, 100]"
            )));
        }
        if weights.iter().all(|&w| w == 0.0) {
            return Err(EngineError::InvalidWeights(
                "at least one weight must be positive".into(),
            ));
        }
        Ok(WeightScheme(weights))
    }

    pub fn as_array(&self) -> [f64; 5] {
        self.0
    }
}

impl From<WeightScheme> for [f64; 5] {
    fn from(w: WeightScheme) -> Self {
        w.0
    }
}

impl FromStr for WeightScheme {
    type Err = EngineError;

    /// Accepts a preset name or five comma-separated numbers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(preset) = s.parse::<Preset>() {
            return Ok(preset.weights());
        }
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(EngineError::InvalidWeights(format!(
                "expected a preset (equal, volume, quality) or 5 comma-separated weights, got {s:?}"
            )));
        }
        let mut w = [0.0; 5];
        for (slot, part) in w.iter_mut().zip(&parts) {
            *slot = part
                .parse::<f64>()
                .map_err(|e| EngineError::InvalidWeights(format!("bad weight {part:?}: {e}")))?;
        }
        WeightScheme::new(w)
    }
}

/// Accepts either a preset name or an array of five weights.
impl<'de> Deserialize<'de> for WeightScheme {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Preset(String),
            Weights([f64; 5]),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Preset(name) => name
                .parse::<Preset>()
                .map(Preset::weights)
                .map_err(serde::de::Error::custom),
            Raw::Weights(w) => WeightScheme::new(w).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Equal,
    Volume,
    Quality,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Equal, Preset::Volume, Preset::Quality];

    pub fn weights(self) -> WeightScheme {
        match self {
            Preset::Equal => WeightScheme::EQUAL,
            Preset::Volume => WeightScheme::VOLUME,
            Preset::Quality => WeightScheme::QUALITY,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Equal => "equal",
            Preset::Volume => "volume",
            Preset::Quality => "quality",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "equal" => Ok(Preset::Equal),
            "volume" => Ok(Preset::Volume),
            "quality" => Ok(Preset::Quality),
            other => Err(format!("unknown preset {other:?}")),
        }
    }
}

/// `ALL` or a region code from institutions.csv.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum Region {
    #[default]
    All,
    Code(String),
}

impl Region {
    pub fn matches(&self, region: &str) -> bool {
        match self {
            Region::All => true,
            Region::Code(c) => c == region,
        }
    }

    fn check(&self, corpus: &Corpus) -> Result<(), EngineError> {
        match self {
            Region::All => Ok(()),
            Region::Code(c) if corpus.is_known_region(c) => Ok(()),
            Region::Code(c) => Err(EngineError::UnknownRegion(c.clone())),
        }
    }
}

impl From<String> for Region {
    fn from(s: String) -> Self {
        if s == ALL_REGIONS {
            Region::All
        } else {
            Region::Code(s)
        }
    }
}

impl From<Region> for String {
    fn from(r: Region) -> Self {
        match r {
            Region::All => ALL_REGIONS.to_string(),
            Region::Code(c) => c,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::All => f.write_str(ALL_REGIONS),
            Region::Code(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatingQuery {
    pub window: YearWindow,
    pub region: Region,
    pub subject: SubjectCode,
    pub level: Level,
    pub weights: WeightScheme,
    pub min_pubs: u64,
}

impl RatingQuery {
    /// Query over the default window, all regions, with the default threshold.
    pub fn new(subject: SubjectCode, level: Level, weights: WeightScheme) -> Self {
        RatingQuery {
            window: YearWindow::DEFAULT,
            region: Region::All,
            subject,
            level,
            weights,
            min_pubs: DEFAULT_MIN_PUBS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatingRow {
    pub institution_id: String,
    pub name: String,
    pub vector: IndicatorVector,
    pub grand_total: f64,
    pub percentage: f64,
    pub band: u8,
}

/// Divides every value by the maximum; an all-zero column stays zero.
pub fn normalize(values: &[f64]) -> Vec<f64> {
    let max = values.iter().copied().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| v / max).collect()
}

pub fn weighted_total(normalized: &[f64; 5], weights: &WeightScheme) -> f64 {
    normalized
        .iter()
        .zip(weights.as_array())
        .map(|(n, w)| n * w)
        .sum()
}

/// Each total as a percentage of the largest. An empty list means nobody
/// passed the threshold.
pub fn percentage_scores(totals: &[f64]) -> Result<Vec<f64>, EngineError> {
    if totals.is_empty() {
        return Err(EngineError::EmptyScope);
    }
    Ok(normalize(totals).into_iter().map(|v| v * 100.0).collect())
}

/// Band `k` covers percentages in `(100 - 10k, 110 - 10k]`; 0 is band 10.
pub fn band(percentage: f64) -> Result<u8, EngineError> {
    if !(0.0..=100.0).contains(&percentage) {
        return Err(EngineError::OutOfRange(percentage));
    }
    // snap to a 1e-9 grid so rounding noise never crosses a decade boundary
    let p = (percentage * 1e9).round() / 1e9;
    let k = ((110.0 - p) / 10.0).floor() as u8;
    Ok(k.clamp(1, 10))
}

/// Scores already-computed vectors: the normalize/weight/score/band steps
/// without the threshold. Rows come back sorted.
pub fn score_vectors(
    entries: Vec<(String, String, IndicatorVector)>,
    weights: &WeightScheme,
) -> Result<Vec<RatingRow>, EngineError> {
    if entries.is_empty() {
        return Err(EngineError::EmptyScope);
    }
    let columns: Vec<Vec<f64>> = (0..5)
        .map(|i| {
            normalize(
                &entries
                    .iter()
                    .map(|(_, _, v)| v.as_array()[i])
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let totals: Vec<f64> = (0..entries.len())
        .map(|row| {
            let normalized = [0, 1, 2, 3, 4].map(|i| columns[i][row]);
            weighted_total(&normalized, weights)
        })
        .collect();
    let percentages = percentage_scores(&totals)?;

    let mut rows = entries
        .into_iter()
        .zip(totals.into_iter().zip(percentages))
        .map(|((id, name, vector), (grand_total, percentage))| {
            Ok(RatingRow {
                institution_id: id,
                name,
                vector,
                grand_total,
                percentage,
                band: band(percentage)?,
            })
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    rows.sort_by(compare_rows);
    Ok(rows)
}

fn compare_rows(a: &RatingRow, b: &RatingRow) -> Ordering {
    b.percentage
        .total_cmp(&a.percentage)
        .then_with(|| b.vector.total_pubs.cmp(&a.vector.total_pubs))
        .then_with(|| a.name.cmp(&b.name))
        .then_with(|| a.institution_id.cmp(&b.institution_id))
}

/// Rates every in-region institution meeting the threshold in one subject.
pub fn rate_subject(corpus: &Corpus, query: &RatingQuery) -> Result<Vec<RatingRow>, EngineError> {
    query.region.check(corpus)?;
    let scope = CellScope::new(corpus, query.subject, query.level, query.window)?;
    let entries: Vec<_> = corpus
        .institutions()
        .filter(|inst| query.region.matches(&inst.region))
        .map(|inst| {
            let v = scope.vector(corpus, &inst.institution_id);
            (inst.institution_id.clone(), inst.name.clone(), v)
        })
        .filter(|(_, _, v)| v.total_pubs >= query.min_pubs)
        .collect();
    score_vectors(entries, &query.weights)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverallQuery {
    #[serde(default)]
    pub region: Region,
    pub preset: Preset,
    #[serde(default)]
    pub window: YearWindow,
    #[serde(default = "default_min_pubs")]
    pub min_pubs: u64,
}

fn default_min_pubs() -> u64 {
    DEFAULT_MIN_PUBS
}

impl OverallQuery {
    pub fn new(region: Region, preset: Preset) -> Self {
        OverallQuery {
            region,
            preset,
            window: YearWindow::DEFAULT,
            min_pubs: DEFAULT_MIN_PUBS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverallRow {
    pub institution_id: String,
    pub name: String,
    /// One entry per subject column; `None` where the institution fell
    /// below the threshold.
    pub bands: Vec<Option<u8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverallRating {
    pub query: OverallQuery,
    pub subjects: Vec<SubjectCode>,
    pub rows: Vec<OverallRow>,
}

/// The `n` level-1 subjects with the most distinct in-window publications,
/// ties broken by code.
pub fn top_disciplines(corpus: &Corpus, window: YearWindow, n: usize) -> Vec<SubjectCode> {
    let mut counts: BTreeMap<SubjectCode, usize> = corpus
        .taxonomy()
        .nodes_at(Level::Discipline)
        .map(|node| (node.code, 0))
        .collect();
    for p in corpus
        .publications()
        .iter()
        .filter(|p| window.contains(p.year))
    {
        for code in corpus
            .subjects_of_journal(&p.journal_id, Level::Discipline)
            .into_iter()
            .flatten()
        {
            *counts.entry(*code).or_default() += 1;
        }
    }
    let mut ranked: Vec<(SubjectCode, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.into_iter().take(n).map(|(c, _)| c).collect()
}

/// Band matrix of every in-region institution over the top 15 level-1 subjects.
pub fn rate_overall(corpus: &Corpus, query: &OverallQuery) -> Result<OverallRating, EngineError> {
    let disciplines = corpus.taxonomy().nodes_at(Level::Discipline).count();
    if disciplines < OVERALL_SUBJECTS {
        return Err(EngineError::InsufficientTaxonomy(disciplines));
    }
    query.region.check(corpus)?;
    let subjects = top_disciplines(corpus, query.window, OVERALL_SUBJECTS);

    let mut rows: Vec<OverallRow> = corpus
        .institutions()
        .filter(|i| query.region.matches(&i.region))
        .map(|i| OverallRow {
            institution_id: i.institution_id.clone(),
            name: i.name.clone(),
            bands: vec![None; subjects.len()],
        })
        .collect();
    let index: BTreeMap<String, usize> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.institution_id.clone(), i))
        .collect();

    for (col, &subject) in subjects.iter().enumerate() {
        let rq = RatingQuery {
            window: query.window,
            region: query.region.clone(),
            subject,
            level: Level::Discipline,
            weights: query.preset.weights(),
            min_pubs: query.min_pubs,
        };
        match rate_subject(corpus, &rq) {
            Ok(table) => {
                for r in table {
                    rows[index[&r.institution_id]].bands[col] = Some(r.band);
                }
            }
            Err(EngineError::EmptyScope) => {}
            Err(e) => return Err(e),
        }
    }

    Ok(OverallRating {
        query: query.clone(),
        subjects,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(p: u64, c: u64, h: u64, s: f64) -> IndicatorVector {
        IndicatorVector {
            total_pubs: p,
            total_cites: c,
            h_index: h,
            pct_top_snip: s,
            cpp: crate::indicators::cpp(c, p),
        }
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&[905.0, 725.0, 636.0]);
        assert_eq!(n[0], 1.0);
        assert!((n[1] - 725.0 / 905.0).abs() < 1e-15);
        assert!((n[1] - 0.8011).abs() < 1e-4);
        assert!((n[2] - 0.7028).abs() < 1e-4);
        assert_eq!(normalize(&[0.0, 0.0, 0.0]), vec![0.0; 3]);
        assert_eq!(normalize(&[7.0]), vec![1.0]);
        assert!(normalize(&[]).is_empty());
    }

    #[test]
    fn weighted_total_examples() {
        assert_eq!(weighted_total(&[1.0; 5], &WeightScheme::EQUAL), 250.0);
        assert_eq!(weighted_total(&[1.0; 5], &WeightScheme::VOLUME), 300.0);
        assert_eq!(
            weighted_total(&[1.0, 0.5, 0.0, 0.0, 0.0], &WeightScheme::VOLUME),
            150.0
        );
    }

    #[test]
    fn percentage_examples() {
        assert_eq!(
            percentage_scores(&[300.0, 150.0]).unwrap(),
            vec![100.0, 50.0]
        );
        assert_eq!(percentage_scores(&[7.0, 7.0, 7.0]).unwrap(), vec![100.0; 3]);
        assert_eq!(percentage_scores(&[0.0, 0.0]).unwrap(), vec![0.0; 2]);
        assert_eq!(percentage_scores(&[]), Err(EngineError::EmptyScope));
    }

    #[test]
    fn band_examples() {
        assert_eq!(band(95.0), Ok(1));
        assert_eq!(band(45.0), Ok(6));
        assert_eq!(band(90.0), Ok(2));
        assert_eq!(band(90.5), Ok(1));
        assert_eq!(band(100.0), Ok(1));
        assert_eq!(band(0.0), Ok(10));
        assert_eq!(band(0.3), Ok(10));
        assert_eq!(band(10.0), Ok(10));
        assert_eq!(band(10.01), Ok(9));
        assert!(matches!(band(100.5), Err(EngineError::OutOfRange(_))));
        assert!(matches!(band(-1.0), Err(EngineError::OutOfRange(_))));
        assert!(band(f64::NAN).is_err());
    }

    #[test]
    fn band_is_monotone_step() {
        let mut prev = 10;
        for i in 0..=10_000 {
            let b = band(i as f64 / 100.0).unwrap();
            assert!(b <= prev);
            prev = b;
        }
    }

    #[test]
    fn weights_validate() {
        assert!(WeightScheme::new([0.0; 5]).is_err());
        assert!(WeightScheme::new([101.0, 0.0, 0.0, 0.0, 0.0]).is_err());
        assert!(WeightScheme::new([-1.0, 5.0, 0.0, 0.0, 0.0]).is_err());
        assert_eq!(
            "quality".parse::<WeightScheme>().unwrap(),
            WeightScheme::QUALITY
        );
        assert_eq!(
            "1,2,3,4,5".parse::<WeightScheme>().unwrap().as_array(),
            [1.0, 2.0, 3.0, 4.0, 5.0]
        );
        assert!("0,0,0,0,0".parse::<WeightScheme>().is_err());
        assert!("1,2,3".parse::<WeightScheme>().is_err());

        let w: WeightScheme = serde_json::from_str("\"volume\"").unwrap();
        assert_eq!(w, WeightScheme::VOLUME);
        let w: WeightScheme = serde_json::from_str("[10,0,0,0,0]").unwrap();
        assert_eq!(w.as_array()[0], 10.0);
        assert!(serde_json::from_str::<WeightScheme>("[0,0,0,0,0]").is_err());
    }

    #[test]
    fn presets_match_published_defaults() {
        assert_eq!(
            WeightScheme::VOLUME.as_array(),
            [100.0, 100.0, 100.0, 0.0, 0.0]
        );
        assert_eq!(
            WeightScheme::QUALITY.as_array(),
            [0.0, 0.0, 0.0, 100.0, 100.0]
        );
        assert_eq!(WeightScheme::EQUAL.as_array(), [50.0; 5]);
    }

    #[test]
    fn dominant_entry_scores_full_marks() {
        let entries = vec![
            ("A".into(), "Alpha".into(), vector(50, 100, 5, 20.0)),
            ("D".into(), "Delta".into(), vector(90, 900, 12, 60.0)),
            ("B".into(), "Beta".into(), vector(70, 300, 8, 60.0)),
        ];
        for preset in Preset::ALL {
            let rows = score_vectors(entries.clone(), &preset.weights()).unwrap();
            assert_eq!(rows[0].institution_id, "D");
            assert_eq!(rows[0].percentage, 100.0);
            assert_eq!(rows[0].band, 1);
        }
    }

    #[test]
    fn identical_vectors_tie() {
        let v = vector(40, 120, 6, 30.0);
        let entries = vec![
            ("B".into(), "Beta".into(), v),
            ("A".into(), "Alpha".into(), v),
            ("C".into(), "Gamma".into(), vector(10, 5, 1, 0.0)),
        ];
        let rows = score_vectors(entries, &WeightScheme::EQUAL).unwrap();
        assert_eq!(rows[0].percentage, rows[1].percentage);
        assert_eq!(rows[0].band, rows[1].band);
        // ties fall back to name order
        assert_eq!(rows[0].name, "Alpha");
    }

    #[test]
    fn region_round_trip() {
        assert_eq!(Region::from("ALL".to_string()), Region::All);
        assert_eq!(String::from(Region::Code("PB".into())), "PB");
        let r: Region = serde_json::from_str("\"SD\"").unwrap();
        assert!(r.matches("SD") && !r.matches("PB"));
    }
}
