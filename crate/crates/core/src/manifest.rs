//! Run identity and the files a bootstrapping run leaves behind.
//!
//! A run writes `<category>.ranking.tsv`, `<category>.ranking.json` and
//! `<category>.manifest.json` into one directory. The run id is a digest of
//! everything that determines the ranking, so the same inputs always produce
//! the same id and byte-identical ranking files.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bootstrap::{
    run_bootstrap_with, BootstrapConfig, BootstrapError, PromotionGate, RankedList, RunStatus, SeedList,
};
use crate::corpus::{hex, CorpusIndex};
use crate::parser::PosLexicon;
use crate::util::write_atomic;

pub const MANIFEST_FORMAT: &str = "seedlex-manifest";
pub const MANIFEST_VERSION: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

pub fn now_epoch_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRef {
    /// Corpus directory or index cache, as given on the command line.
    pub path: String,
    pub content_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconRef {
    /// `None` for the bundled demo lexicon.
    pub path: Option<String>,
    pub sha256: String,
}

impl LexiconRef {
    pub fn demo() -> Self {
        LexiconRef { path: None, sha256: sha256_hex(crate::parser::DEMO_LEXICON.as_bytes()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromotionRecord {
    pub iteration: u32,
    pub promoted: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOutputs {
    pub ranking_tsv: String,
    pub ranking_json: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format: String,
    pub version: u32,
    pub run_id: String,
    pub category: String,
    pub corpus: CorpusRef,
    pub lexicon: LexiconRef,
    pub seed_files: Vec<FileDigest>,
    pub seeds: Vec<String>,
    pub config: BootstrapConfig,
    /// Seconds since the Unix epoch.
    pub started_at: u64,
    pub finished_at: u64,
    pub status: RunStatus,
    pub promotions: Vec<PromotionRecord>,
    pub outputs: RunOutputs,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self, BootstrapError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| BootstrapError::Format(format!("{}: {e}", path.display())))?;
        let m: RunManifest =
            serde_json::from_str(&text).map_err(|e| BootstrapError::Format(format!("{}: {e}", path.display())))?;
        if m.format != MANIFEST_FORMAT || m.version != MANIFEST_VERSION {
            return Err(BootstrapError::Format(format!(
                "{}: not a {MANIFEST_FORMAT} v{MANIFEST_VERSION} file",
                path.display()
            )));
        }
        Ok(m)
    }
}

/// Digest of the inputs that fix a ranking. Seed order does not matter.
pub fn derive_run_id(
    corpus_hash: &str,
    lexicon_sha256: &str,
    category: &str,
    seeds: &[String],
    cfg: &BootstrapConfig,
) -> String {
    let mut seeds = seeds.to_vec();
    seeds.sort();
    let key = serde_json::json!({
        "corpus": corpus_hash,
        "lexicon": lexicon_sha256,
        "category": category,
        "seeds": seeds,
        "config": cfg,
    });
    let digest = sha256_hex(key.to_string().as_bytes());
    format!("run-{}", &digest[..16])
}

pub fn ranking_tsv_name(category: &str) -> String {
    format!("{category}.ranking.tsv")
}

pub fn ranking_json_name(category: &str) -> String {
    format!("{category}.ranking.json")
}

pub fn manifest_name(category: &str) -> String {
    format!("{category}.manifest.json")
}

/// Everything a run needs besides the corpus index and lexicon themselves.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub corpus: CorpusRef,
    pub lexicon: LexiconRef,
    pub seeds: SeedList,
    pub seed_files: Vec<FileDigest>,
    pub config: BootstrapConfig,
}

/// Runs the loop and fills in the run id and manifest.
pub fn execute_run(
    index: &CorpusIndex,
    lex: &PosLexicon,
    req: RunRequest,
    gate: &mut dyn PromotionGate,
) -> Result<(RankedList, RunManifest), BootstrapError> {
    let started_at = now_epoch_secs();
    let category = req.seeds.category.clone();
    let seeds = req.seeds.original().to_vec();
    let run_id = derive_run_id(&req.corpus.content_hash, &req.lexicon.sha256, &category, &seeds, &req.config);
    let mut ranked = run_bootstrap_with(index, req.seeds, lex, &req.config, gate)?;
    ranked.run_id = run_id.clone();
    let manifest = RunManifest {
        format: MANIFEST_FORMAT.into(),
        version: MANIFEST_VERSION,
        run_id,
        corpus: req.corpus,
        lexicon: req.lexicon,
        seed_files: req.seed_files,
        seeds,
        config: req.config,
        started_at,
        finished_at: now_epoch_secs(),
        status: ranked.status.clone(),
        promotions: ranked
            .iterations
            .iter()
            .map(|l| PromotionRecord { iteration: l.iteration, promoted: l.promoted.clone() })
            .collect(),
        outputs: RunOutputs { ranking_tsv: ranking_tsv_name(&category), ranking_json: ranking_json_name(&category) },
        category,
    };
    Ok((ranked, manifest))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunArtifacts {
    pub ranking_tsv: PathBuf,
    pub ranking_json: PathBuf,
    pub manifest: PathBuf,
}

/// Writes the three run files into `dir`, each atomically.
pub fn write_run(dir: &Path, ranked: &RankedList, manifest: &RunManifest) -> std::io::Result<RunArtifacts> {
    std::fs::create_dir_all(dir)?;
    let out = RunArtifacts {
        ranking_tsv: dir.join(&manifest.outputs.ranking_tsv),
        ranking_json: dir.join(&manifest.outputs.ranking_json),
        manifest: dir.join(manifest_name(&manifest.category)),
    };
    write_atomic(&out.ranking_tsv, ranked.to_tsv().as_bytes())?;
    write_atomic(&out.ranking_json, ranked.to_json().as_bytes())?;
    write_atomic(&out.manifest, manifest.to_json().as_bytes())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bootstrap::AutoPromote;
    use crate::corpus::TokenizerConfig;

    fn request(seeds: &[&str]) -> RunRequest {
        RunRequest {
            corpus: CorpusRef { path: "mem".into(), content_hash: "abc".into() },
            lexicon: LexiconRef::demo(),
            seeds: SeedList::new("weapon", seeds),
            seed_files: Vec::new(),
            config: BootstrapConfig { iterations: 1, min_corpus_freq: 0, ..BootstrapConfig::default() },
        }
    }

    #[test]
    fn run_id_ignores_seed_order_but_not_config() {
        let cfg = BootstrapConfig::default();
        let a = derive_run_id("h", "l", "weapon", &["gun".into(), "rifle".into()], &cfg);
        let b = derive_run_id("h", "l", "weapon", &["rifle".into(), "gun".into()], &cfg);
        assert_eq!(a, b);
        let other = BootstrapConfig { iterations: 2, ..cfg.clone() };
        assert_ne!(a, derive_run_id("h", "l", "weapon", &["gun".into(), "rifle".into()], &other));
        assert_ne!(a, derive_run_id("h2", "l", "weapon", &["gun".into(), "rifle".into()], &cfg));
    }

    #[test]
    fn files_carry_the_run_id() {
        let index = CorpusIndex::from_texts(&["I bought an AK-47 gun and an M-16 rifle."], &TokenizerConfig::default());
        let (ranked, manifest) =
            execute_run(&index, &PosLexicon::demo(), request(&["gun", "rifle"]), &mut AutoPromote).unwrap();
        assert!(ranked.to_tsv().starts_with(&format!("# seedlex-ranking v1 run_id={} ", manifest.run_id)));
        let dir = tempfile::tempdir().unwrap();
        let files = write_run(dir.path(), &ranked, &manifest).unwrap();
        assert_eq!(RunManifest::load(&files.manifest).unwrap(), manifest);
        let back = RankedList::from_json(&std::fs::read_to_string(&files.ranking_json).unwrap()).unwrap();
        assert_eq!(back.run_id, manifest.run_id);
    }
}
