//! Local HTTP service for reviewing bootstrapped rankings.
//!
//! All routes live under `/api/v1` and exchange JSON:
//!
//! | method | path | purpose |
//! |---|---|---|
//! | GET | `/categories` | candidate, accepted and pending counts per category |
//! | POST | `/sessions` | open a review session (`category`, `random_order`, `limit`, `rng_seed`, `include_seeds`) |
//! | GET | `/sessions/{id}` | session state, including the cursor |
//! | GET | `/sessions/{id}/next?n=` | next `n` candidates; advances the cursor |
//! | POST | `/sessions/{id}/decisions` | accept, reject or defer a word (`word`, `verdict`, `rating`, `reviewer`) |
//! | POST | `/reruns` | rerun a category, optionally seeding with accepted words |
//! | GET | `/runs/{id}` | rerun progress |
//! | GET | `/curves/{category}?step=&thresholds=` | acquisition curves over the rated prefix |
//!
//! Random-order sessions never include `rank` or `score` in candidates.
//! Original seed words are left out of sessions unless `include_seeds` is set.

pub mod api;
pub mod state;

use axum::routing::{get, post};
use axum::Router;
use tower_http::services::ServeDir;

pub use api::AppState;
pub use state::{LoadError, ReviewState, ServeConfig};

pub const API_PREFIX: &str = "/api/v1";

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/categories", get(api::list_categories))
        .route("/sessions", post(api::create_session))
        .route("/sessions/{id}", get(api::get_session))
        .route("/sessions/{id}/next", get(api::next_candidates))
        .route("/sessions/{id}/decisions", post(api::submit_decision))
        .route("/reruns", post(api::start_rerun))
        .route("/runs/{id}", get(api::get_run))
        .route("/curves/{category}", get(api::get_curves));
    let ui = state.config.ui_dir.clone();
    let app = Router::new().nest(API_PREFIX, api).with_state(state);
    match ui {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

/// Serves until the listener fails or the task is cancelled.
pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> std::io::Result<()> {
    if let Ok(addr) = listener.local_addr() {
        log::info!("review service listening on http://{addr}{API_PREFIX}");
    }
    axum::serve(listener, router(state)).await
}
