//! Optional TOML file for `bootstrap`. Command-line flags win over the file,
//! and the file wins over the built-in defaults. Relative paths in the file
//! resolve against the file's own directory.
//!
//! ```toml
//! corpus = "demo/corpus"
//! out = "runs"
//! seeds = ["seeds/weapon.txt"]
//! iterations = 8
//! promote = 5
//! min_freq = 5
//! number_filter = "strict"
//! jobs = 4
//! ```

use std::path::{Path, PathBuf};

use seedlex::NumberFilter;
use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub corpus: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    #[serde(default)]
    pub seeds: Vec<PathBuf>,
    pub category: Option<String>,
    pub iterations: Option<u32>,
    pub promote: Option<usize>,
    pub min_freq: Option<u64>,
    pub stoplist: Option<PathBuf>,
    pub number_filter: Option<NumberFilter>,
    pub freq_nouns_only: Option<bool>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        cfg.corpus.as_mut().map(rebase);
        cfg.out.as_mut().map(rebase);
        cfg.lexicon.as_mut().map(rebase);
        cfg.stoplist.as_mut().map(rebase);
        cfg.seeds.iter_mut().for_each(rebase);
        Ok(cfg)
    }
}
