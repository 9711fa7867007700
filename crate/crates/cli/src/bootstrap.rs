use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use log::{info, warn};
use seedlex::bootstrap::{PromotionGate, DEFAULT_SEED_FILES};
use seedlex::manifest::{
    execute_run, sha256_hex, write_run, CorpusRef, FileDigest, LexiconRef, RunArtifacts, RunManifest, RunRequest,
};
use seedlex::{
    load_corpus, BootstrapConfig, CorpusError, CorpusIndex, NumberFilter, PosLexicon, RankedList, RunStatus,
    ScoredWord, SeedList, TokenizerConfig,
};

use crate::config::FileConfig;
use crate::{CliError, CliResult, Exit, OrExit};

#[derive(Args, Debug, Clone, Default)]
pub struct BootstrapArgs {
    /// Corpus directory or index cache written by `seedlex index`
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Seed file, one word per line; repeat for several categories.
    /// Without any, the five shipped seed lists are used.
    #[arg(long = "seeds", value_name = "FILE")]
    pub seeds: Vec<PathBuf>,
    /// Category name for a single seed file, or the one shipped list to run
    #[arg(long)]
    pub category: Option<String>,
    #[arg(long)]
    pub iterations: Option<u32>,
    /// Words promoted into the seed list after each iteration
    #[arg(long)]
    pub promote: Option<usize>,
    /// Drop words whose corpus frequency is at or below this
    #[arg(long = "min-freq")]
    pub min_freq: Option<u64>,
    /// Replacement stoplist file
    #[arg(long)]
    pub stoplist: Option<PathBuf>,
    #[arg(long = "number-filter", value_name = "strict|paper")]
    pub number_filter: Option<NumberFilter>,
    /// Count only noun and number occurrences in score denominators
    #[arg(long)]
    pub freq_nouns_only: bool,
    /// Ask on stdin before promoting each word
    #[arg(long)]
    pub confirm_promotions: bool,
    /// Worker threads for parsing (output does not depend on it)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// TOML file with defaults for any of these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Part-of-speech dictionary (defaults to the built-in one)
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Output directory for rankings and manifests
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Everything one category's run produced.
#[derive(Debug, Clone)]
pub struct CategoryOutput {
    pub ranked: RankedList,
    pub manifest: RunManifest,
    pub artifacts: RunArtifacts,
}

struct Resolved {
    corpus: PathBuf,
    out: PathBuf,
    lexicon: Option<PathBuf>,
    seeds: Vec<PathBuf>,
    category: Option<String>,
    config: BootstrapConfig,
    jobs: Option<usize>,
}

fn resolve(args: &BootstrapArgs) -> CliResult<Resolved> {
    let file = match &args.config {
        Some(p) => {
            FileConfig::load(p).map_err(|e| CliError::new(Exit::Input, e.context(format!("config {}", p.display()))))?
        }
        None => FileConfig::default(),
    };
    let mut config = BootstrapConfig::default();
    if let Some(path) = args.stoplist.as_ref().or(file.stoplist.as_ref()) {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::new(Exit::Input, anyhow::anyhow!("stoplist {}: {e}", path.display())))?;
        config = config.with_stoplist_text(&text);
    }
    config.iterations = args.iterations.or(file.iterations).unwrap_or(config.iterations);
    config.promote_per_iteration = args.promote.or(file.promote).unwrap_or(config.promote_per_iteration);
    config.min_corpus_freq = args.min_freq.or(file.min_freq).unwrap_or(config.min_corpus_freq);
    config.number_filter = args.number_filter.or(file.number_filter).unwrap_or(config.number_filter);
    config.freq_nouns_only = args.freq_nouns_only || file.freq_nouns_only.unwrap_or(config.freq_nouns_only);
    config.validate().or_exit(Exit::Input)?;

    let corpus =
        args.corpus.clone().or(file.corpus).ok_or_else(|| {
            CliError::msg(Exit::Input, "no corpus given (use --corpus or set corpus in the config file)")
        })?;
    Ok(Resolved {
        corpus,
        out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("runs")),
        lexicon: args.lexicon.clone().or(file.lexicon),
        seeds: if args.seeds.is_empty() { file.seeds } else { args.seeds.clone() },
        category: args.category.clone().or(file.category),
        config,
        jobs: args.jobs.or(file.jobs),
    })
}

fn seed_lists(files: &[PathBuf], category: Option<&str>) -> CliResult<Vec<(SeedList, Vec<FileDigest>)>> {
    if files.is_empty() {
        let shipped = DEFAULT_SEED_FILES.iter().filter(|(c, _)| category.is_none_or(|want| want == *c));
        let lists: Vec<_> = shipped
            .map(|(c, text)| {
                let digest = FileDigest { path: format!("builtin:seeds/{c}.txt"), sha256: sha256_hex(text.as_bytes()) };
                (SeedList::parse(*c, text), vec![digest])
            })
            .collect();
        if lists.is_empty() {
            let known: Vec<&str> = DEFAULT_SEED_FILES.iter().map(|(c, _)| *c).collect();
            return Err(CliError::msg(
                Exit::Lookup,
                format!(
                    "no shipped seed list for category {:?} (known: {})",
                    category.unwrap_or_default(),
                    known.join(", ")
                ),
            ));
        }
        return Ok(lists);
    }
    if category.is_some() && files.len() > 1 {
        return Err(CliError::msg(Exit::Input, "--category names a single seed file; several were given"));
    }
    let mut lists: Vec<(SeedList, Vec<FileDigest>)> = Vec::new();
    for path in files {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::new(Exit::Input, anyhow::anyhow!("seed file {}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| CliError::msg(Exit::Input, format!("seed file {} is not valid UTF-8", path.display())))?;
        let name = match category {
            Some(c) => c.to_string(),
            None => path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        };
        let seeds = SeedList::parse(name.clone(), &text);
        if seeds.is_empty() {
            return Err(CliError::msg(Exit::Input, format!("seed file {} has no words", path.display())));
        }
        if lists.iter().any(|(s, _)| s.category == name) {
            return Err(CliError::msg(Exit::Input, format!("category {name:?} is given twice")));
        }
        let digest = FileDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) };
        lists.push((seeds, vec![digest]));
    }
    Ok(lists)
}

/// Loads a corpus directory or an index cache. The returned path is canonical
/// so manifests point at the same place from any working directory.
pub fn open_corpus(path: &Path) -> CliResult<(CorpusIndex, PathBuf)> {
    let canonical = path
        .canonicalize()
        .map_err(|e| CliError::new(Exit::Input, anyhow::anyhow!("corpus {}: {e}", path.display())))?;
    let index = if canonical.is_dir() {
        let (index, report) = load_corpus(&canonical, &TokenizerConfig::default()).map_err(corpus_error)?;
        for s in &report.skipped {
            warn!("skipped {}: {}", s.path.display(), s.reason);
        }
        index
    } else {
        CorpusIndex::load_cache(&canonical).map_err(corpus_error)?
    };
    Ok((index, canonical))
}

pub(crate) fn corpus_error(e: CorpusError) -> CliError {
    match e {
        CorpusError::Io(_) => CliError::new(Exit::Io, e),
        _ => CliError::new(Exit::Input, e),
    }
}

fn open_lexicon(path: Option<&Path>) -> CliResult<(PosLexicon, LexiconRef)> {
    let Some(path) = path else {
        return Ok((PosLexicon::demo(), LexiconRef::demo()));
    };
    let canonical = path
        .canonicalize()
        .map_err(|e| CliError::new(Exit::Input, anyhow::anyhow!("lexicon {}: {e}", path.display())))?;
    let bytes = std::fs::read(&canonical)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::msg(Exit::Input, format!("lexicon {} is not valid UTF-8", path.display())))?;
    let loaded = PosLexicon::parse(&text).or_exit(Exit::Input)?;
    for w in &loaded.warnings {
        warn!("{}: {w}", path.display());
    }
    let reference = LexiconRef { path: Some(canonical.display().to_string()), sha256: sha256_hex(&bytes) };
    Ok((loaded.lexicon, reference))
}

/// Asks before each promotion; anything but `y` or `yes` declines, and so
/// does end of input.
struct PromptGate<'a> {
    category: String,
    input: &'a mut (dyn BufRead + Send),
    prompt: &'a mut (dyn Write + Send),
}

impl PromotionGate for PromptGate<'_> {
    fn approve(&mut self, iteration: u32, c: &ScoredWord) -> bool {
        let _ = write!(
            self.prompt,
            "{} iteration {iteration}: promote {:?} (score {}, {} windows, freq {})? [y/N] ",
            self.category, c.display, c.score, c.window_count, c.corpus_freq
        );
        let _ = self.prompt.flush();
        let mut line = String::new();
        match self.input.read_line(&mut line) {
            Ok(0) | Err(_) => false,
            Ok(_) => matches!(line.trim().to_ascii_lowercase().as_str(), "y" | "yes"),
        }
    }
}

fn describe(status: &RunStatus) -> String {
    match status {
        RunStatus::Completed => "completed".into(),
        RunStatus::TerminatedEarly { iteration, reason } => format!("stopped at iteration {iteration}: {reason}"),
    }
}

pub fn cmd_bootstrap(
    args: &BootstrapArgs,
    input: &mut (dyn BufRead + Send),
    out: &mut (dyn Write + Send),
) -> CliResult<Vec<CategoryOutput>> {
    let r = resolve(args)?;
    let lists = seed_lists(&r.seeds, r.category.as_deref())?;
    let (index, corpus_path) = open_corpus(&r.corpus)?;
    let (lexicon, lexicon_ref) = open_lexicon(r.lexicon.as_deref())?;
    let corpus_ref =
        CorpusRef { path: corpus_path.display().to_string(), content_hash: index.content_hash().to_string() };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = r.jobs {
        if jobs == 0 {
            return Err(CliError::msg(Exit::Input, "--jobs must be at least 1"));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().or_exit(Exit::Io)?;

    let mut outputs = Vec::new();
    for (seeds, seed_files) in lists {
        let category = seeds.category.clone();
        let req = RunRequest {
            corpus: corpus_ref.clone(),
            lexicon: lexicon_ref.clone(),
            seeds,
            seed_files,
            config: r.config.clone(),
        };
        let result = if args.confirm_promotions {
            let mut gate = PromptGate { category: category.clone(), input: &mut *input, prompt: &mut *out };
            pool.install(|| execute_run(&index, &lexicon, req, &mut gate))
        } else {
            pool.install(|| execute_run(&index, &lexicon, req, &mut seedlex::bootstrap::AutoPromote))
        };
        let (ranked, manifest) = result.or_exit(Exit::Input)?;
        let artifacts = write_run(&r.out, &ranked, &manifest)?;
        if ranked.status.is_warning() {
            warn!("{category}: {}", describe(&ranked.status));
        }
        let promoted: usize = ranked.iterations.iter().map(|l| l.promoted.len()).sum();
        writeln!(
            out,
            "{category}\t{}\t{}\titerations={}\tpromoted={promoted}\tranked={}\t{}",
            ranked.run_id,
            describe(&ranked.status),
            ranked.iterations.len(),
            ranked.len(),
            artifacts.ranking_tsv.display()
        )?;
        info!("{category}: wrote {}", artifacts.manifest.display());
        outputs.push(CategoryOutput { ranked, manifest, artifacts });
    }
    Ok(outputs)
}
