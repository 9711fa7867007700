//! Request handlers for the `/api/v1` routes.

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use seedlex::bootstrap::AutoPromote;
use seedlex::corpus::normalize;
use seedlex::lexicon::{curve_for_words, CurvePoint, DecisionOutcome};
use seedlex::manifest::{execute_run, write_run, RunRequest};
use seedlex::{LexiconError, NumberFilter, Rating, ReviewDecision, SeedList, Verdict};
use serde::{Deserialize, Serialize};

use crate::state::{CategoryRun, ReviewState, RunRecord, RunState};

pub const MAX_EXAMPLES: usize = 5;
const DEFAULT_PAGE: usize = 20;
const MAX_PAGE: usize = 200;

pub type AppState = Arc<ReviewState>;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into() }
    }

    fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("no {what} {id:?}"))
    }
}

impl From<LexiconError> for ApiError {
    fn from(e: LexiconError) -> Self {
        let (status, code) = match &e {
            LexiconError::UnknownCategory(_) | LexiconError::WordNotInRanking { .. } => {
                (StatusCode::NOT_FOUND, "not_found")
            }
            LexiconError::InvalidRating(_) | LexiconError::MissingRating(_) | LexiconError::CurveParameters(_) => {
                (StatusCode::BAD_REQUEST, "invalid_request")
            }
            LexiconError::BelowThreshold { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "below_threshold"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": { "code": self.code, "message": self.message } });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn category_run(state: &ReviewState, category: &str) -> ApiResult<CategoryRun> {
    state.category(category).ok_or_else(|| ApiError::not_found("category", category))
}

#[derive(Debug, Serialize)]
pub struct CategorySummary {
    pub category: String,
    pub run_id: String,
    pub candidates: usize,
    pub accepted: usize,
    /// Ranked words with no reviewer decision yet.
    pub pending: usize,
}

pub async fn list_categories(State(state): State<AppState>) -> Json<Vec<CategorySummary>> {
    let categories = state.categories.read().expect("categories lock").clone();
    let store = state.store.lock().expect("store lock");
    let summaries = categories
        .into_iter()
        .map(|(name, run)| {
            let decided: std::collections::HashSet<&str> =
                store.decisions().iter().filter(|d| d.category == name).map(|d| d.word.as_str()).collect();
            CategorySummary {
                run_id: run.ranked.run_id.clone(),
                candidates: run.ranked.len(),
                accepted: store.entries(&name).map_or(0, |e| e.len()),
                pending: run.ranked.words.iter().filter(|w| !decided.contains(w.word.as_str())).count(),
                category: name,
            }
        })
        .collect();
    Json(summaries)
}

fn default_true() -> bool {
    true
}

fn default_limit() -> usize {
    200
}

#[derive(Debug, Deserialize)]
pub struct NewSession {
    pub category: String,
    #[serde(default = "default_true")]
    pub random_order: bool,
    #[serde(default = "default_limit")]
    pub limit: usize,
    #[serde(default)]
    pub rng_seed: Option<u64>,
    #[serde(default)]
    pub include_seeds: bool,
}

#[derive(Debug, Serialize)]
pub struct SessionInfo {
    pub session_id: String,
    pub category: String,
    pub run_id: String,
    pub random_order: bool,
    pub rng_seed: u64,
    pub length: usize,
    pub cursor: usize,
    pub clamped: bool,
}

fn session_info(s: &crate::state::Session) -> SessionInfo {
    SessionInfo {
        session_id: s.id.clone(),
        category: s.category.clone(),
        run_id: s.run.ranked.run_id.clone(),
        random_order: s.random_order,
        rng_seed: s.rng_seed,
        length: s.order.len(),
        cursor: s.cursor,
        clamped: s.order.clamped,
    }
}

pub async fn create_session(
    State(state): State<AppState>,
    Json(req): Json<NewSession>,
) -> ApiResult<(StatusCode, Json<SessionInfo>)> {
    let run = category_run(&state, &req.category)?;
    let session = state.open_session(run, req.random_order, req.limit, req.rng_seed, req.include_seeds);
    let info = session_info(&session);
    state.sessions.lock().expect("sessions lock").insert(session.id.clone(), session);
    Ok((StatusCode::CREATED, Json(info)))
}

pub async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionInfo>> {
    let sessions = state.sessions.lock().expect("sessions lock");
    let s = sessions.get(&id).ok_or_else(|| ApiError::not_found("session", &id))?;
    Ok(Json(session_info(s)))
}

#[derive(Debug, Deserialize)]
pub struct PageQuery {
    pub n: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Candidate {
    pub word: String,
    /// Position in this session's presentation order.
    pub position: usize,
    pub window_count: u64,
    pub corpus_freq: u64,
    pub examples: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CandidatePage {
    pub session_id: String,
    pub cursor: usize,
    pub length: usize,
    pub done: bool,
    pub candidates: Vec<Candidate>,
}

pub async fn next_candidates(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<PageQuery>,
) -> ApiResult<Json<CandidatePage>> {
    let n = q.n.unwrap_or(DEFAULT_PAGE).min(MAX_PAGE);
    let mut sessions = state.sessions.lock().expect("sessions lock");
    let s = sessions.get_mut(&id).ok_or_else(|| ApiError::not_found("session", &id))?;
    let start = s.cursor;
    let end = (start + n).min(s.order.len());
    let ranked = &s.run.ranked;
    let corpus = &s.run.corpus;
    let candidates = (start..end)
        .map(|pos| {
            let rank = s.order.true_rank(pos).expect("position within order");
            let w = &ranked.words[rank];
            let examples = corpus
                .postings(&w.word)
                .iter()
                .take(MAX_EXAMPLES)
                .map(|&id| corpus.sentence(id).text.clone())
                .collect();
            Candidate {
                word: w.display.clone(),
                position: pos,
                window_count: w.window_count,
                corpus_freq: w.corpus_freq,
                examples,
                rank: (!s.random_order).then_some(rank + 1),
                score: (!s.random_order).then(|| w.score.to_string()),
            }
        })
        .collect();
    s.cursor = end;
    Ok(Json(CandidatePage {
        session_id: s.id.clone(),
        cursor: s.cursor,
        length: s.order.len(),
        done: s.cursor >= s.order.len(),
        candidates,
    }))
}

fn default_reviewer() -> String {
    "reviewer".into()
}

#[derive(Debug, Deserialize)]
pub struct DecisionBody {
    pub word: String,
    pub verdict: Verdict,
    #[serde(default)]
    pub rating: Option<u8>,
    #[serde(default = "default_reviewer")]
    pub reviewer: String,
}

#[derive(Debug, Serialize)]
pub struct DecisionAck {
    pub word: String,
    pub category: String,
    pub verdict: Verdict,
    pub outcome: &'static str,
    pub accepted: usize,
}

pub async fn submit_decision(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(body): Json<DecisionBody>,
) -> ApiResult<Json<DecisionAck>> {
    let (ranked, category) = {
        let sessions = state.sessions.lock().expect("sessions lock");
        let s = sessions.get(&id).ok_or_else(|| ApiError::not_found("session", &id))?;
        let norm = normalize(&body.word);
        if !s.order.words().contains(&norm) {
            return Err(ApiError::not_found(&format!("word in session {id}"), &body.word));
        }
        (s.run.ranked.clone(), s.category.clone())
    };
    let decision = ReviewDecision {
        word: body.word.clone(),
        category: category.clone(),
        verdict: body.verdict,
        rating: body.rating,
        timestamp: seedlex::manifest::now_epoch_secs(),
        reviewer: body.reviewer,
        run_id: ranked.run_id.clone(),
    };
    let mut store = state.store.lock().expect("store lock");
    let outcome = store.record_decision(&ranked, decision)?;
    if outcome == DecisionOutcome::Applied {
        store.save(&state.config.store_path)?;
    }
    Ok(Json(DecisionAck {
        word: normalize(&body.word),
        category: category.clone(),
        verdict: body.verdict,
        outcome: match outcome {
            DecisionOutcome::Applied => "applied",
            DecisionOutcome::Unchanged => "unchanged",
        },
        accepted: store.entries(&category).map_or(0, |e| e.len()),
    }))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub iterations: Option<u32>,
    pub promote_per_iteration: Option<usize>,
    pub min_corpus_freq: Option<u64>,
    pub number_filter: Option<NumberFilter>,
    pub freq_nouns_only: Option<bool>,
}

#[derive(Debug, Deserialize)]
pub struct RerunBody {
    pub category: String,
    #[serde(default)]
    pub use_accepted_as_seeds: bool,
    #[serde(default)]
    pub overrides: ConfigOverrides,
}

pub async fn start_rerun(
    State(state): State<AppState>,
    Json(body): Json<RerunBody>,
) -> ApiResult<(StatusCode, Json<RunRecord>)> {
    let run = category_run(&state, &body.category)?;
    let mut seeds: Vec<String> = run.ranked.seeds.original().to_vec();
    if body.use_accepted_as_seeds {
        let accepted = state.store.lock().expect("store lock").accepted_words(&body.category);
        if accepted.is_empty() {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "no_accepted_words",
                format!("no accepted words in {}", body.category),
            ));
        }
        seeds.extend(accepted);
    }
    let mut config = run.ranked.config.clone();
    let o = body.overrides;
    config.iterations = o.iterations.unwrap_or(config.iterations);
    config.promote_per_iteration = o.promote_per_iteration.unwrap_or(config.promote_per_iteration);
    config.min_corpus_freq = o.min_corpus_freq.unwrap_or(config.min_corpus_freq);
    config.number_filter = o.number_filter.unwrap_or(config.number_filter);
    config.freq_nouns_only = o.freq_nouns_only.unwrap_or(config.freq_nouns_only);
    config.validate().map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", e.to_string()))?;

    let seeds = SeedList::new(body.category.clone(), seeds);
    let req = RunRequest {
        corpus: run.manifest.corpus.clone(),
        lexicon: run.manifest.lexicon.clone(),
        seeds: seeds.clone(),
        seed_files: Vec::new(),
        config: config.clone(),
    };
    let run_id = seedlex::manifest::derive_run_id(
        &req.corpus.content_hash,
        &req.lexicon.sha256,
        &body.category,
        seeds.original(),
        &config,
    );
    let record = RunRecord {
        run_id: run_id.clone(),
        category: body.category.clone(),
        seeds: seeds.original().to_vec(),
        state: RunState::Running,
    };
    {
        let mut runs = state.runs.lock().expect("runs lock");
        if runs.values().any(|r| r.category == body.category && matches!(r.state, RunState::Running)) {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "run_active",
                format!("a run for {} is already active", body.category),
            ));
        }
        runs.insert(run_id.clone(), record.clone());
    }

    let worker = state.clone();
    tokio::task::spawn_blocking(move || {
        let out_dir = worker.config.rankings_dir.join("reruns").join(&run_id);
        let result = execute_run(&run.corpus, &run.lexicon, req, &mut AutoPromote).map_err(|e| e.to_string()).and_then(
            |(ranked, manifest)| {
                write_run(&out_dir, &ranked, &manifest).map_err(|e| e.to_string())?;
                Ok((ranked, manifest))
            },
        );
        let state = match result {
            Ok((ranked, manifest)) => {
                let status = ranked.status.clone();
                let category = manifest.category.clone();
                let next = CategoryRun { ranked: Arc::new(ranked), manifest, corpus: run.corpus, lexicon: run.lexicon };
                worker.categories.write().expect("categories lock").insert(category, next);
                RunState::Completed { status, output_dir: out_dir.display().to_string() }
            }
            Err(error) => {
                log::error!("rerun {run_id} failed: {error}");
                RunState::Failed { error }
            }
        };
        if let Some(r) = worker.runs.lock().expect("runs lock").get_mut(&run_id) {
            r.state = state;
        }
    });
    Ok((StatusCode::ACCEPTED, Json(record)))
}

pub async fn get_run(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<RunRecord>> {
    let runs = state.runs.lock().expect("runs lock");
    runs.get(&id).cloned().map(Json).ok_or_else(|| ApiError::not_found("run", &id))
}

#[derive(Debug, Deserialize)]
pub struct CurveQuery {
    pub step: Option<usize>,
    /// Comma-separated thresholds; defaults to 2,3,4,5.
    pub thresholds: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CurveSeries {
    pub threshold: u8,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Serialize)]
pub struct CurveData {
    pub category: String,
    pub run_id: String,
    pub step: usize,
    /// Length of the longest fully rated prefix of the ranking, seeds aside.
    pub rated_prefix: usize,
    /// First unrated word after that prefix, if any.
    pub next_unrated: Option<String>,
    pub curves: Vec<CurveSeries>,
}

/// Curves over the ranking, counting imported judge ratings and every
/// reviewer decision that carried a rating. Original seeds without a rating
/// are left out of the ranking first.
pub async fn get_curves(
    State(state): State<AppState>,
    Path(category): Path<String>,
    Query(q): Query<CurveQuery>,
) -> ApiResult<Json<CurveData>> {
    let run = category_run(&state, &category)?;
    let step = q.step.unwrap_or(seedlex::lexicon::DEFAULT_CURVE_STEP);
    let thresholds: Vec<u8> =
        match &q.thresholds {
            None => vec![2, 3, 4, 5],
            Some(t) => t.split(',').map(|x| x.trim().parse::<u8>()).collect::<Result<_, _>>().map_err(|_| {
                ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", format!("bad thresholds {t:?}"))
            })?,
        };

    let mut ratings: Vec<Rating> = Vec::new();
    {
        let store = state.store.lock().expect("store lock");
        ratings.extend(store.ratings().iter().filter(|r| r.category == category).cloned());
        // latest rated decision per (word, reviewer)
        let mut latest: BTreeMap<(&str, &str), u8> = BTreeMap::new();
        for d in store.decisions().iter().filter(|d| d.category == category) {
            if let Some(r) = d.rating {
                latest.insert((d.word.as_str(), d.reviewer.as_str()), r);
            }
        }
        ratings.extend(latest.into_iter().map(|((word, reviewer), value)| Rating {
            word: word.to_string(),
            category: category.clone(),
            judge_id: format!("reviewer:{reviewer}"),
            value,
            override_value: None,
        }));
    }

    let rated = |w: &str| ratings.iter().any(|r| r.word == w);
    // sessions hide original seeds by default, so unrated ones are skipped
    let words: Vec<&str> = run
        .ranked
        .words
        .iter()
        .filter(|w| !w.flags.was_original_seed || rated(&w.word))
        .map(|w| w.word.as_str())
        .collect();
    let rated_prefix = words.iter().position(|w| !rated(w)).unwrap_or(words.len());
    let mut curves = Vec::new();
    for t in thresholds {
        let c = curve_for_words(&category, &words[..rated_prefix], &ratings, t, step)?;
        curves.push(CurveSeries { threshold: t, points: c.points });
    }
    Ok(Json(CurveData {
        category,
        run_id: run.ranked.run_id.clone(),
        step,
        rated_prefix,
        next_unrated: words.get(rated_prefix).map(|w| w.to_string()),
        curves,
    }))
}
