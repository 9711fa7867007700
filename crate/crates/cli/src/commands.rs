use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::Args;
use log::warn;
use seedlex::bootstrap::DEFAULT_SEED_FILES;
use seedlex::lexicon::{acquisition_curve, import_ratings, ExportFormat, DEFAULT_CURVE_STEP};
use seedlex::util::write_atomic;
use seedlex::{load_corpus, LexiconError, LexiconStore, RankedList, TokenizerConfig};
use seedlex_review::{ReviewState, ServeConfig};

use crate::bootstrap::corpus_error;
use crate::plot::{render_svg, CurveFile};
use crate::{CliError, CliResult, Exit, OrExit};

#[derive(Args, Debug, Clone)]
pub struct IndexArgs {
    /// Directory of `.txt` documents
    #[arg(long)]
    pub corpus: PathBuf,
    /// Cache file to write
    #[arg(long)]
    pub out: PathBuf,
    /// Extra abbreviations, one per line, that never end a sentence
    #[arg(long)]
    pub abbreviations: Option<PathBuf>,
}

pub fn cmd_index(args: &IndexArgs, out: &mut dyn Write) -> CliResult {
    let mut tokenizer = TokenizerConfig::default();
    if let Some(path) = &args.abbreviations {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::msg(Exit::Input, format!("{}: {e}", path.display())))?;
        tokenizer.extend_abbreviations(&text);
    }
    let (index, report) = load_corpus(&args.corpus, &tokenizer).map_err(corpus_error)?;
    index.save_cache(&args.out).map_err(corpus_error)?;
    write!(out, "{}", report.to_log())?;
    writeln!(out, "sentences\t{}", index.sentences().len())?;
    writeln!(out, "content_hash\t{}", index.content_hash())?;
    Ok(())
}

#[derive(Args, Debug, Clone)]
pub struct EvaluateArgs {
    /// `<category>.ranking.json` from a bootstrap run
    #[arg(long)]
    pub ranking: PathBuf,
    /// Ratings TSV; repeat to combine judges from several files
    #[arg(long = "ratings", value_name = "FILE", required = true)]
    pub ratings: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = [2u8, 3, 4, 5])]
    pub thresholds: Vec<u8>,
    #[arg(long, default_value_t = DEFAULT_CURVE_STEP)]
    pub step: usize,
    /// Words from the top of the ranking to plot
    #[arg(long, default_value_t = 200)]
    pub limit: usize,
    /// Directory for the curve files
    #[arg(long, default_value = "curves")]
    pub out: PathBuf,
}

pub fn curve_file_name(category: &str, threshold: u8) -> String {
    format!("{category}.curve.t{threshold}.tsv")
}

pub fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> CliResult {
    let text = std::fs::read_to_string(&args.ranking)
        .map_err(|e| CliError::msg(Exit::Input, format!("ranking {}: {e}", args.ranking.display())))?;
    let ranked = RankedList::from_json(&text).or_exit(Exit::Input)?;
    let mut ratings = Vec::new();
    for path in &args.ratings {
        let import =
            import_ratings(path).map_err(|e| CliError::new(Exit::Input, anyhow::anyhow!("{}: {e}", path.display())))?;
        for w in &import.warnings {
            warn!("{}: {w}", path.display());
        }
        for r in import.needing_override() {
            warn!(
                "{}: {} rated 0 by {} with no override; it counts as unrated-for-membership",
                path.display(),
                r.word,
                r.judge_id
            );
        }
        ratings.extend(import.ratings);
    }

    let mut curves = Vec::new();
    for &t in &args.thresholds {
        match acquisition_curve(&ranked, &ratings, t, args.step, Some(args.limit)) {
            Ok(c) => curves.push(c),
            Err(LexiconError::UnratedWords(words)) => {
                return Err(CliError::msg(
                    Exit::Coverage,
                    format!("{} words in the top {} have no rating: {}", words.len(), args.limit, words.join(", ")),
                ));
            }
            Err(e) => return Err(CliError::new(Exit::Input, e)),
        }
    }
    std::fs::create_dir_all(&args.out)?;
    for c in &curves {
        let path = args.out.join(curve_file_name(&c.category, c.threshold));
        write_atomic(&path, c.to_tsv().as_bytes())?;
        let last = c.points.last().map_or(0, |p| p.count);
        writeln!(out, "{}\tthreshold={}\tpoints={}\tfinal={last}", path.display(), c.threshold, c.points.len())?;
    }
    Ok(())
}

#[derive(Args, Debug, Clone)]
pub struct ExportArgs {
    /// Lexicon store file
    #[arg(long)]
    pub store: PathBuf,
    #[arg(long)]
    pub category: String,
    #[arg(long, default_value = "tsv", value_name = "tsv|json")]
    pub format: ExportFormat,
    /// Write here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_export(args: &ExportArgs, out: &mut dyn Write) -> CliResult {
    if !args.store.is_file() {
        return Err(CliError::msg(Exit::Input, format!("store {} does not exist", args.store.display())));
    }
    let mut store = LexiconStore::load(&args.store).or_exit(Exit::Input)?;
    if !store.has_category(&args.category) && DEFAULT_SEED_FILES.iter().any(|(c, _)| *c == args.category) {
        store.register_category(&args.category);
    }
    let text = store.export(&args.category, args.format).map_err(|e| match e {
        LexiconError::UnknownCategory(_) => CliError::new(Exit::Lookup, e),
        other => CliError::new(Exit::Input, other),
    })?;
    match &args.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Args, Debug, Clone)]
pub struct ServeArgs {
    /// Lexicon store file; created when missing
    #[arg(long)]
    pub store: PathBuf,
    /// Directory of bootstrap output (`*.manifest.json`)
    #[arg(long, default_value = "runs")]
    pub rankings: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8765")]
    pub bind: SocketAddr,
    /// Static review client to serve at `/`
    #[arg(long)]
    pub ui: Option<PathBuf>,
    /// Shuffle seed for random-order sessions that do not pick one
    #[arg(long = "rng-seed", default_value_t = 0)]
    pub rng_seed: u64,
}

/// Blocks serving requests. Prints the bound address first, which matters
/// when binding port 0.
pub fn cmd_serve(args: &ServeArgs, out: &mut dyn Write) -> CliResult {
    let state = ReviewState::load(ServeConfig {
        store_path: args.store.clone(),
        rankings_dir: args.rankings.clone(),
        ui_dir: args.ui.clone(),
        default_rng_seed: args.rng_seed,
    })
    .or_exit(Exit::Input)?;
    let listener = std::net::TcpListener::bind(args.bind)
        .map_err(|e| CliError::new(Exit::Bind, anyhow::anyhow!("cannot bind {}: {e}", args.bind)))?;
    listener.set_nonblocking(true)?;
    let addr = listener.local_addr()?;
    writeln!(out, "listening on http://{addr}{}", seedlex_review::API_PREFIX)?;
    out.flush()?;

    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::from_std(listener)?;
        seedlex_review::serve(listener, state).await
    })?;
    Ok(())
}

#[derive(Args, Debug, Clone)]
pub struct PlotArgs {
    /// Curve files written by `seedlex evaluate`
    #[arg(required = true)]
    pub curves: Vec<PathBuf>,
    #[arg(long, default_value = "curves.svg")]
    pub out: PathBuf,
    #[arg(long)]
    pub title: Option<String>,
}

pub fn cmd_plot(args: &PlotArgs, out: &mut dyn Write) -> CliResult {
    let mut curves = Vec::new();
    for path in &args.curves {
        curves.push(read_curve(path)?);
    }
    let svg = render_svg(&curves, args.title.as_deref());
    write_atomic(&args.out, svg.as_bytes())?;
    writeln!(out, "{}", args.out.display())?;
    Ok(())
}

fn read_curve(path: &Path) -> CliResult<CurveFile> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::msg(Exit::Input, format!("{}: {e}", path.display())))?;
    CurveFile::parse(&text).map_err(|e| CliError::msg(Exit::Input, format!("{}: {e}", path.display())))
}
