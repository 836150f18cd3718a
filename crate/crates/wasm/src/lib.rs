//! Browser bindings over the bundled fixture corpus.
//!
//! Each exported method takes and returns JSON text. The same functions
//! are callable natively, which is how they are tested.

use nichebench_core::report::{self, to_compact};
use nichebench_core::{
    benchmark, rate_overall, rate_subject, Corpus, CorpusInputs, EngineError, Level, OverallQuery,
    RatingQuery, Region, SubjectCode, WeightScheme, YearWindow,
};
use serde::Deserialize;
use wasm_bindgen::prelude::*;

const FIXTURE: CorpusInputs<'static> = CorpusInputs {
    publications: include_str!("../../../fixtures/publications.csv"),
    journals: include_str!("../../../fixtures/journals.csv"),
    institutions: include_str!("../../../fixtures/institutions.csv"),
    taxonomy: include_str!("../../../fixtures/taxonomy.csv"),
    snip: include_str!("../../../fixtures/snip.csv"),
};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RateInput {
    subject: SubjectCode,
    level: Level,
    weights: WeightScheme,
    #[serde(default)]
    region: Region,
    #[serde(default)]
    window: YearWindow,
    #[serde(default)]
    min_pubs: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchmarkInput {
    institutions: Vec<String>,
    subject: SubjectCode,
    level: Level,
    #[serde(default)]
    window: YearWindow,
}

fn engine(e: EngineError) -> String {
    to_compact(&report::error_json(&e))
}

fn bad_input(e: serde_json::Error) -> String {
    to_compact(&serde_json::json!({"error": "BadRequest", "message": e.to_string()}))
}

/// Holds the parsed corpus for the lifetime of the page.
#[wasm_bindgen]
pub struct Explorer {
    corpus: Corpus,
}

impl Explorer {
    pub fn load() -> Result<Explorer, String> {
        Corpus::from_inputs(FIXTURE, YearWindow::DEFAULT)
            .map(|corpus| Explorer { corpus })
            .map_err(|e| e.to_string())
    }

    pub fn taxonomy_json(&self) -> String {
        to_compact(&report::taxonomy_json(self.corpus.taxonomy()))
    }

    pub fn institutions_json(&self) -> String {
        to_compact(&report::institutions_json(self.corpus.institutions()))
    }

    pub fn rate_json(&self, request: &str) -> Result<String, String> {
        let input: RateInput = serde_json::from_str(request).map_err(bad_input)?;
        let mut query = RatingQuery::new(input.subject, input.level, input.weights);
        query.region = input.region;
        query.window = input.window;
        if let Some(m) = input.min_pubs {
            query.min_pubs = m;
        }
        let rows = rate_subject(&self.corpus, &query).map_err(engine)?;
        Ok(to_compact(&report::rating_json(&rows)))
    }

    pub fn benchmark_json(&self, request: &str) -> Result<String, String> {
        let input: BenchmarkInput = serde_json::from_str(request).map_err(bad_input)?;
        let profile = benchmark(
            &self.corpus,
            &input.institutions,
            input.subject,
            input.level,
            input.window,
        )
        .map_err(engine)?;
        Ok(to_compact(&report::benchmark_json(&profile)))
    }

    pub fn overall_json(&self, request: &str) -> Result<String, String> {
        let query: OverallQuery = serde_json::from_str(request).map_err(bad_input)?;
        let overall = rate_overall(&self.corpus, &query).map_err(engine)?;
        Ok(to_compact(&report::overall_json(&self.corpus, &overall)))
    }
}

#[wasm_bindgen]
impl Explorer {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Result<Explorer, JsError> {
        Explorer::load().map_err(|e| JsError::new(&e))
    }

    pub fn taxonomy(&self) -> String {
        self.taxonomy_json()
    }

    pub fn institutions(&self) -> String {
        self.institutions_json()
    }

    /// `{subject, level, weights, region?, window?, min_pubs?}` to rating rows.
    pub fn rate(&self, request: &str) -> Result<String, JsError> {
        self.rate_json(request).map_err(|e| JsError::new(&e))
    }

    /// `{institutions, subject, level, window?}` to a benchmark profile.
    pub fn benchmark(&self, request: &str) -> Result<String, JsError> {
        self.benchmark_json(request).map_err(|e| JsError::new(&e))
    }

    /// `{preset, region?, window?, min_pubs?}` to the band matrix.
    pub fn overall(&self, request: &str) -> Result<String, JsError> {
        self.overall_json(request).map_err(|e| JsError::new(&e))
    }
}
