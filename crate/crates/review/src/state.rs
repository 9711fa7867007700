use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use seedlex::lexicon::{review_order, ReviewOrder};
use seedlex::manifest::{sha256_hex, RunManifest};
use seedlex::{CorpusIndex, LexiconStore, PosLexicon, RankedList, RunStatus, TokenizerConfig};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Artifact { path: PathBuf, message: String },
    #[error(transparent)]
    Corpus(#[from] seedlex::CorpusError),
    #[error(transparent)]
    Lexicon(#[from] seedlex::LexiconError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub store_path: PathBuf,
    /// Directory holding `<category>.manifest.json` files from bootstrap runs.
    pub rankings_dir: PathBuf,
    /// Static files served at `/` when set.
    pub ui_dir: Option<PathBuf>,
    /// Shuffle seed for sessions that do not bring their own.
    pub default_rng_seed: u64,
}

/// The current ranking for a category plus what is needed to rerun it.
#[derive(Clone)]
pub struct CategoryRun {
    pub ranked: Arc<RankedList>,
    pub manifest: RunManifest,
    pub corpus: Arc<CorpusIndex>,
    pub lexicon: Arc<PosLexicon>,
}

pub struct Session {
    pub id: String,
    pub category: String,
    pub random_order: bool,
    pub rng_seed: u64,
    pub order: ReviewOrder,
    pub cursor: usize,
    pub run: CategoryRun,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum RunState {
    Running,
    Completed { status: RunStatus, output_dir: String },
    Failed { error: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub run_id: String,
    pub category: String,
    pub seeds: Vec<String>,
    #[serde(flatten)]
    pub state: RunState,
}

pub struct ReviewState {
    pub config: ServeConfig,
    pub store: Mutex<LexiconStore>,
    pub categories: RwLock<BTreeMap<String, CategoryRun>>,
    pub sessions: Mutex<HashMap<String, Session>>,
    pub runs: Mutex<BTreeMap<String, RunRecord>>,
    next_session: AtomicU64,
}

impl ReviewState {
    /// Opens the store and loads every run manifest found in the rankings directory.
    pub fn load(config: ServeConfig) -> Result<Arc<Self>, LoadError> {
        let mut store = LexiconStore::open(&config.store_path)?;
        let mut categories = BTreeMap::new();
        let mut corpora: HashMap<String, Arc<CorpusIndex>> = HashMap::new();
        let mut lexicons: HashMap<Option<String>, Arc<PosLexicon>> = HashMap::new();

        let mut manifests: Vec<PathBuf> = std::fs::read_dir(&config.rankings_dir)
            .map_err(|e| LoadError::Artifact { path: config.rankings_dir.clone(), message: e.to_string() })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.to_string_lossy().ends_with(".manifest.json"))
            .collect();
        manifests.sort();
        for path in manifests {
            let run = load_run(&path, &mut corpora, &mut lexicons)?;
            store.register_category(&run.manifest.category);
            categories.insert(run.manifest.category.clone(), run);
        }
        store.save(&config.store_path)?;
        log::info!("loaded {} categories from {}", categories.len(), config.rankings_dir.display());
        Ok(Arc::new(ReviewState {
            config,
            store: Mutex::new(store),
            categories: RwLock::new(categories),
            sessions: Mutex::new(HashMap::new()),
            runs: Mutex::new(BTreeMap::new()),
            next_session: AtomicU64::new(1),
        }))
    }

    pub fn category(&self, name: &str) -> Option<CategoryRun> {
        self.categories.read().expect("categories lock").get(name).cloned()
    }

    /// Original seed words are left out unless `include_seeds` is set.
    pub fn open_session(
        &self,
        run: CategoryRun,
        random_order: bool,
        limit: usize,
        rng_seed: Option<u64>,
        include_seeds: bool,
    ) -> Session {
        let rng_seed = rng_seed.unwrap_or(self.config.default_rng_seed);
        let order = review_order(&run.ranked, limit, random_order.then_some(rng_seed), include_seeds);
        let id = format!("s{}", self.next_session.fetch_add(1, Ordering::Relaxed));
        Session { id, category: run.manifest.category.clone(), random_order, rng_seed, order, cursor: 0, run }
    }
}

fn artifact_err(path: &Path, message: impl ToString) -> LoadError {
    LoadError::Artifact { path: path.to_path_buf(), message: message.to_string() }
}

fn load_run(
    manifest_path: &Path,
    corpora: &mut HashMap<String, Arc<CorpusIndex>>,
    lexicons: &mut HashMap<Option<String>, Arc<PosLexicon>>,
) -> Result<CategoryRun, LoadError> {
    let manifest = RunManifest::load(manifest_path).map_err(|e| artifact_err(manifest_path, e))?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let ranking_path = dir.join(&manifest.outputs.ranking_json);
    let text = std::fs::read_to_string(&ranking_path).map_err(|e| artifact_err(&ranking_path, e))?;
    let ranked = RankedList::from_json(&text).map_err(|e| artifact_err(&ranking_path, e))?;
    if ranked.run_id != manifest.run_id {
        return Err(artifact_err(
            &ranking_path,
            format!("run id {} does not match manifest {}", ranked.run_id, manifest.run_id),
        ));
    }

    let corpus = match corpora.get(&manifest.corpus.path) {
        Some(c) => c.clone(),
        None => {
            let path = Path::new(&manifest.corpus.path);
            let index = if path.is_dir() {
                seedlex::load_corpus(path, &TokenizerConfig::default())?.0
            } else {
                CorpusIndex::load_cache(path)?
            };
            let index = Arc::new(index);
            corpora.insert(manifest.corpus.path.clone(), index.clone());
            index
        }
    };
    if corpus.content_hash() != manifest.corpus.content_hash {
        return Err(artifact_err(manifest_path, format!("corpus {} changed since the run", manifest.corpus.path)));
    }

    let lexicon = match lexicons.get(&manifest.lexicon.path) {
        Some(l) => l.clone(),
        None => {
            let lex = match &manifest.lexicon.path {
                None => PosLexicon::demo(),
                Some(p) => {
                    let bytes = std::fs::read(p)?;
                    if sha256_hex(&bytes) != manifest.lexicon.sha256 {
                        return Err(artifact_err(manifest_path, format!("lexicon {p} changed since the run")));
                    }
                    PosLexicon::parse(&String::from_utf8_lossy(&bytes))
                        .map_err(|e| artifact_err(Path::new(p), e))?
                        .lexicon
                }
            };
            let lex = Arc::new(lex);
            lexicons.insert(manifest.lexicon.path.clone(), lex.clone());
            lex
        }
    };
    Ok(CategoryRun { ranked: Arc::new(ranked), manifest, corpus, lexicon })
}
