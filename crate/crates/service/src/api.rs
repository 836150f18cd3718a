//! Routes and handlers. Every body is the canonical serialization of the
//! matching engine call, so the HTTP layer adds no numbers of its own.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use nichebench_core::report::{self, to_compact};
use nichebench_core::{
    benchmark, benchmark_multi, rate_overall, rate_subject, Corpus, EngineError, Level,
    OverallQuery, Preset, RatingQuery, Region, SubjectCode, SubjectSpec, WeightScheme, YearWindow,
};
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};
use tower_http::cors::CorsLayer;

/// Values used when a request leaves a field out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defaults {
    pub window: YearWindow,
    pub min_pubs: u64,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            window: YearWindow::DEFAULT,
            min_pubs: nichebench_core::rating::DEFAULT_MIN_PUBS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("a corpus is already loaded")]
pub struct AlreadyLoaded;

struct Shared {
    corpus: OnceLock<Arc<Corpus>>,
    defaults: Defaults,
}

/// Shared handler state. Until a corpus is installed every endpoint
/// answers 503.
#[derive(Clone)]
pub struct AppState {
    shared: Arc<Shared>,
}

impl AppState {
    pub fn pending(defaults: Defaults) -> Self {
        AppState {
            shared: Arc::new(Shared {
                corpus: OnceLock::new(),
                defaults,
            }),
        }
    }

    pub fn ready(corpus: Corpus, defaults: Defaults) -> Self {
        let state = AppState::pending(defaults);
        state.install(corpus).ok();
        state
    }

    /// Installs the corpus. A second install is refused; the corpus is
    /// fixed for the life of the process.
    pub fn install(&self, corpus: Corpus) -> Result<(), AlreadyLoaded> {
        self.shared
            .corpus
            .set(Arc::new(corpus))
            .map_err(|_| AlreadyLoaded)
    }

    pub fn corpus(&self) -> Option<&Arc<Corpus>> {
        self.shared.corpus.get()
    }

    pub fn defaults(&self) -> Defaults {
        self.shared.defaults
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateRequest {
    pub subject: SubjectCode,
    pub level: Level,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<YearWindow>,
    pub weights: WeightScheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_pubs: Option<u64>,
}

impl RateRequest {
    pub fn to_query(&self, defaults: &Defaults) -> RatingQuery {
        RatingQuery {
            window: self.window.unwrap_or(defaults.window),
            region: self.region.clone().unwrap_or_default(),
            subject: self.subject,
            level: self.level,
            weights: self.weights,
            min_pubs: self.min_pubs.unwrap_or(defaults.min_pubs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkRequest {
    pub institutions: Vec<String>,
    pub subject: SubjectCode,
    pub level: Level,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<YearWindow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiBenchmarkRequest {
    pub institutions: Vec<String>,
    pub subjects: Vec<SubjectSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<YearWindow>,
}

pub fn router(state: AppState, cors: bool) -> Router {
    let router = Router::new()
        .route("/api/health", get(health))
        .route("/api/taxonomy", get(taxonomy))
        .route("/api/institutions", get(institutions))
        .route("/api/rate", post(rate))
        .route("/api/benchmark", post(bench))
        .route("/api/benchmark/multi", post(bench_multi))
        .route("/api/overall", get(overall))
        .with_state(state);
    if cors {
        router.layer(CorsLayer::permissive())
    } else {
        router
    }
}

/// HTTP status for an engine error.
pub fn status_for(err: &EngineError) -> StatusCode {
    match err {
        EngineError::EmptyScope => StatusCode::UNPROCESSABLE_ENTITY,
        _ => StatusCode::BAD_REQUEST,
    }
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn engine_error(err: &EngineError) -> Response {
    json_response(status_for(err), to_compact(&report::error_json(err)))
}

fn bad_request(message: impl std::fmt::Display) -> Response {
    json_response(
        StatusCode::BAD_REQUEST,
        to_compact(&json!({"error": "BadRequest", "message": message.to_string()})),
    )
}

fn not_ready() -> Response {
    json_response(
        StatusCode::SERVICE_UNAVAILABLE,
        to_compact(&json!({"error": "NotReady", "message": "corpus is not loaded yet"})),
    )
}

macro_rules! corpus_or_503 {
    ($state:expr) => {
        match $state.corpus() {
            Some(c) => c.clone(),
            None => return not_ready(),
        }
    };
}

#[allow(clippy::result_large_err)]
fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, Response> {
    serde_json::from_slice(body).map_err(bad_request)
}

async fn health(State(state): State<AppState>) -> Response {
    let corpus = corpus_or_503!(state);
    let summary = serde_json::to_value(corpus.summary()).expect("summary serializes");
    json_response(
        StatusCode::OK,
        to_compact(&json!({"status": "ok", "corpus": summary})),
    )
}

async fn taxonomy(State(state): State<AppState>, headers: HeaderMap) -> Response {
    let corpus = corpus_or_503!(state);
    let body = to_compact(&report::taxonomy_json(corpus.taxonomy()));
    let digest = Sha256::digest(body.as_bytes());
    let etag = format!("\"{}\"", hex::encode(&digest[..16]));
    let etag_value = HeaderValue::from_str(&etag).expect("hex etag is a valid header");
    if headers
        .get(header::IF_NONE_MATCH)
        .is_some_and(|v| v.as_bytes() == etag.as_bytes())
    {
        return (StatusCode::NOT_MODIFIED, [(header::ETAG, etag_value)]).into_response();
    }
    let mut resp = json_response(StatusCode::OK, body);
    resp.headers_mut().insert(header::ETAG, etag_value);
    resp
}

async fn institutions(
    State(state): State<AppState>,
    Query(params): Query<HashMap<String, String>>,
) -> Response {
    let corpus = corpus_or_503!(state);
    let region = Region::from(
        params
            .get("region")
            .cloned()
            .unwrap_or_else(|| "ALL".into()),
    );
    if let Region::Code(code) = &region {
        if !corpus.is_known_region(code) {
            return engine_error(&EngineError::UnknownRegion(code.clone()));
        }
    }
    let list = corpus.institutions().filter(|i| region.matches(&i.region));
    json_response(StatusCode::OK, to_compact(&report::institutions_json(list)))
}

async fn rate(State(state): State<AppState>, body: Bytes) -> Response {
    let corpus = corpus_or_503!(state);
    let req: RateRequest = match parse_body(&body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    match rate_subject(&corpus, &req.to_query(&state.defaults())) {
        Ok(rows) => json_response(StatusCode::OK, to_compact(&report::rating_json(&rows))),
        Err(e) => engine_error(&e),
    }
}

async fn bench(State(state): State<AppState>, body: Bytes) -> Response {
    let corpus = corpus_or_503!(state);
    let req: BenchmarkRequest = match parse_body(&body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    let window = req.window.unwrap_or(state.defaults().window);
    match benchmark(&corpus, &req.institutions, req.subject, req.level, window) {
        Ok(p) => json_response(StatusCode::OK, to_compact(&report::benchmark_json(&p))),
        Err(e) => engine_error(&e),
    }
}

async fn bench_multi(State(state): State<AppState>, body: Bytes) -> Response {
    let corpus = corpus_or_503!(state);
    let req: MultiBenchmarkRequest = match parse_body(&body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    let window = req.window.unwrap_or(state.defaults().window);
    match benchmark_multi(&corpus, &req.institutions, &req.subjects, window) {
        Ok(p) => json_response(
            StatusCode::OK,
            to_compact(&report::benchmark_multi_json(&p)),
        ),
        Err(e) => engine_error(&e),
    }
}

async fn overall(
    State(state): State<AppState>,
    Query(params): Query<HashMap<String, String>>,
) -> Response {
    let corpus = corpus_or_503!(state);
    let defaults = state.defaults();
    let preset = match params.get("preset").map(|p| p.parse::<Preset>()) {
        None => Preset::Equal,
        Some(Ok(p)) => p,
        Some(Err(e)) => return bad_request(e),
    };
    let mut query = OverallQuery::new(
        Region::from(
            params
                .get("region")
                .cloned()
                .unwrap_or_else(|| "ALL".into()),
        ),
        preset,
    );
    query.window = match params.get("years").map(|y| y.parse::<YearWindow>()) {
        None => defaults.window,
        Some(Ok(w)) => w,
        Some(Err(e)) => return bad_request(e),
    };
    query.min_pubs = match params.get("min_pubs").map(|m| m.parse::<u64>()) {
        None => defaults.min_pubs,
        Some(Ok(m)) => m,
        Some(Err(e)) => return bad_request(format!("bad min_pubs: {e}")),
    };
    match rate_overall(&corpus, &query) {
        Ok(m) => json_response(
            StatusCode::OK,
            to_compact(&report::overall_json(&corpus, &m)),
        ),
        Err(e) => engine_error(&e),
    }
}
