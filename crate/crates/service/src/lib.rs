//! Read-only JSON API over a loaded corpus.
//!
//! | method | path | body |
//! |---|---|---|
//! | GET | `/api/health` | corpus row counts |
//! | GET | `/api/taxonomy` | subject tree, with an ETag |
//! | GET | `/api/institutions?region=R` | institution list |
//! | POST | `/api/rate` | [`RateRequest`] → rating rows |
//! | POST | `/api/benchmark` | [`BenchmarkRequest`] → profile |
//! | POST | `/api/benchmark/multi` | [`MultiBenchmarkRequest`] → profiles |
//! | GET | `/api/overall?preset=P&region=R` | band matrix |

mod api;
mod config;

pub use api::{
    router, status_for, AlreadyLoaded, AppState, BenchmarkRequest, Defaults, MultiBenchmarkRequest,
    RateRequest,
};
pub use config::{ConfigError, ServiceConfig, ENV_DATA, ENV_HOST, ENV_PORT};

/// Serves `app` on an already-bound listener until the process exits.
pub async fn serve(listener: tokio::net::TcpListener, app: axum::Router) -> std::io::Result<()> {
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app).await
}
