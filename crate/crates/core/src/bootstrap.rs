//! Context-window bootstrapping.
//!
//! Each iteration selects the sentences containing a seed word, chunks them,
//! collects the nearest noun on either side of every seed that heads a noun
//! phrase, and scores every collected word by
//!
//! ```text
//! score(w) = occurrences of w in the category's context windows
//!            ------------------------------------------------------
//!                      occurrences of w in the corpus
//! ```
//!
//! After filtering and ranking, the top new words join the seed list and the
//! next iteration starts. The ranking produced by the last iteration is the
//! result.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{is_number, is_plain_number, normalize, CorpusIndex, SentenceId};
use crate::parser::{parse_sentence, ChunkedSentence, PosLexicon, Tag};
use crate::util::parse_word_list;

pub const DEFAULT_STOPLIST: &str = include_str!("../data/stoplist.txt");
pub const RANKING_FORMAT: &str = "seedlex-ranking";
pub const RANKING_VERSION: u32 = 1;

/// The five seed lists shipped in `seeds/`, as `(category, file body)`.
pub const DEFAULT_SEED_FILES: [(&str, &str); 5] = [
    ("energy", include_str!("../../../seeds/energy.txt")),
    ("financial", include_str!("../../../seeds/financial.txt")),
    ("military", include_str!("../../../seeds/military.txt")),
    ("vehicle", include_str!("../../../seeds/vehicle.txt")),
    ("weapon", include_str!("../../../seeds/weapon.txt")),
];

#[derive(Debug, thiserror::Error)]
pub enum BootstrapError {
    #[error("seed list for {0:?} is empty")]
    NoSeeds(String),
    #[error("corpus index is empty")]
    EmptyCorpus,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("window word {0:?} has zero corpus frequency; windows and index disagree")]
    ZeroFrequency(String),
    #[error("ranking file: {0}")]
    Format(String),
}

/// Exact ratio `window_count / corpus_freq`. Ordering and equality compare
/// the rational values, so `2/2 == 1/1`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Score {
    pub numerator: u64,
    pub denominator: u64,
}

impl Score {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator > 0, "score denominator must be positive");
        Score { numerator, denominator }
    }

    pub fn as_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Decimal rendering rounded half-up to `places` digits, computed exactly.
    pub fn to_decimal(self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let num = self.numerator as u128 * scale * 2 + self.denominator as u128;
        let q = num / (2 * self.denominator as u128);
        if places == 0 {
            return q.to_string();
        }
        format!("{}.{:0width$}", q / scale, q % scale, width = places as usize)
    }
}

impl PartialEq for Score {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(6))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumberFilter {
    /// Digits with optional sign, commas and periods are all removed.
    #[default]
    Strict,
    /// Only plain digit strings are removed; `2,000` survives.
    #[serde(rename = "paper")]
    PaperFaithful,
}

impl NumberFilter {
    pub fn is_filtered(self, word: &str) -> bool {
        match self {
            NumberFilter::Strict => is_number(word),
            NumberFilter::PaperFaithful => is_plain_number(word),
        }
    }
}

impl FromStr for NumberFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(NumberFilter::Strict),
            "paper" | "paper_faithful" => Ok(NumberFilter::PaperFaithful),
            other => Err(format!("unknown number filter {other:?} (expected strict or paper)")),
        }
    }
}

impl fmt::Display for NumberFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NumberFilter::Strict => "strict",
            NumberFilter::PaperFaithful => "paper",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BootstrapConfig {
    pub iterations: u32,
    pub promote_per_iteration: usize,
    /// Words with corpus frequency at or below this are dropped.
    pub min_corpus_freq: u64,
    pub stoplist: BTreeSet<String>,
    pub number_filter: NumberFilter,
    /// Score denominators count only noun- and number-tagged occurrences.
    pub freq_nouns_only: bool,
    pub left_nouns: u8,
    pub right_nouns: u8,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            iterations: 8,
            promote_per_iteration: 5,
            min_corpus_freq: 5,
            stoplist: parse_word_list(DEFAULT_STOPLIST).iter().map(|w| normalize(w)).collect(),
            number_filter: NumberFilter::Strict,
            freq_nouns_only: false,
            left_nouns: 1,
            right_nouns: 1,
        }
    }
}

impl BootstrapConfig {
    pub fn with_stoplist_text(mut self, text: &str) -> Self {
        self.stoplist = parse_word_list(text).iter().map(|w| normalize(w)).collect();
        self
    }

    pub fn validate(&self) -> Result<(), BootstrapError> {
        if self.iterations == 0 {
            return Err(BootstrapError::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.left_nouns != 1 || self.right_nouns != 1 {
            return Err(BootstrapError::InvalidConfig("context windows are one noun on each side".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromotedSeed {
    pub word: String,
    pub iteration: u32,
}

/// A category's seed words: the user-supplied originals plus words promoted
/// by earlier iterations. All entries are normalized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedList {
    pub category: String,
    original: Vec<String>,
    promoted: Vec<PromotedSeed>,
}

impl SeedList {
    pub fn new<I, S>(category: impl Into<String>, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut original: Vec<String> = Vec::new();
        for w in words {
            let w = normalize(w.as_ref().trim());
            if !w.is_empty() && !original.contains(&w) {
                original.push(w);
            }
        }
        SeedList { category: category.into(), original, promoted: Vec::new() }
    }

    /// Parses a seed file body (one word per line, `#` comments).
    pub fn parse(category: impl Into<String>, text: &str) -> Self {
        Self::new(category, parse_word_list(text))
    }

    pub fn defaults() -> Vec<SeedList> {
        DEFAULT_SEED_FILES.iter().map(|(c, text)| SeedList::parse(*c, text)).collect()
    }

    pub fn original(&self) -> &[String] {
        &self.original
    }

    pub fn promoted(&self) -> &[PromotedSeed] {
        &self.promoted
    }

    pub fn contains(&self, norm: &str) -> bool {
        self.original.iter().any(|w| w == norm) || self.promoted.iter().any(|p| p.word == norm)
    }

    pub fn is_original(&self, norm: &str) -> bool {
        self.original.iter().any(|w| w == norm)
    }

    pub fn is_promoted(&self, norm: &str) -> bool {
        self.promoted.iter().any(|p| p.word == norm)
    }

    pub fn len(&self) -> usize {
        self.original.len() + self.promoted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.original.iter().map(String::as_str).chain(self.promoted.iter().map(|p| p.word.as_str()))
    }

    /// Adds `word` as a promoted seed; returns false if it is already a seed.
    pub fn promote(&mut self, word: &str, iteration: u32) -> bool {
        let word = normalize(word);
        if self.contains(&word) {
            return false;
        }
        self.promoted.push(PromotedSeed { word, iteration });
        true
    }
}

/// One side of a context window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSlot {
    pub position: usize,
    pub word: String,
}

/// The nearest noun on each side of a seed occurrence that heads a noun phrase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextWindow {
    pub sentence: SentenceId,
    pub anchor: usize,
    pub seed: String,
    pub left: Option<WindowSlot>,
    pub right: Option<WindowSlot>,
}

/// Tokens that can fill a window slot. Numbers qualify so that the number
/// filter, not the tagger, decides whether they reach the ranking.
fn fills_window(tag: Tag) -> bool {
    matches!(tag, Tag::Noun | Tag::Number)
}

/// Windows for every seed occurrence that heads a noun phrase, in sentence
/// order. Seeds that only modify another noun anchor nothing.
pub fn extract_windows(chunked: &[ChunkedSentence], seeds: &SeedList) -> Vec<ContextWindow> {
    chunked.par_iter().map(|cs| sentence_windows(cs, seeds)).flatten_iter().collect()
}

fn sentence_windows(cs: &ChunkedSentence, seeds: &SeedList) -> Vec<ContextWindow> {
    let slot = |i: usize| WindowSlot { position: i, word: cs.tokens[i].token.norm.clone() };
    cs.heads()
        .filter(|&h| seeds.contains(&cs.tokens[h].token.norm))
        .map(|h| ContextWindow {
            sentence: cs.sentence,
            anchor: h,
            seed: cs.tokens[h].token.norm.clone(),
            left: (0..h).rev().find(|&i| fills_window(cs.tokens[i].tag)).map(slot),
            right: (h + 1..cs.tokens.len()).find(|&i| fills_window(cs.tokens[i].tag)).map(slot),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFlags {
    pub was_original_seed: bool,
    pub was_promoted_seed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoredWord {
    pub word: String,
    pub display: String,
    pub window_count: u64,
    pub corpus_freq: u64,
    pub score: Score,
    #[serde(default)]
    pub flags: SeedFlags,
}

impl ScoredWord {
    pub fn seed_flag(&self) -> &'static str {
        if self.flags.was_original_seed {
            "original"
        } else if self.flags.was_promoted_seed {
            "promoted"
        } else {
            "-"
        }
    }
}

/// Occurrences of each word counted over noun- and number-tagged tokens only.
pub fn noun_frequencies(index: &CorpusIndex, lex: &PosLexicon) -> BTreeMap<String, u64> {
    let partial: Vec<BTreeMap<String, u64>> = (0..index.sentences().len())
        .into_par_iter()
        .map(|id| {
            let mut counts = BTreeMap::new();
            for t in parse_sentence(index, id, lex).tokens {
                if fills_window(t.tag) {
                    *counts.entry(t.token.norm).or_default() += 1;
                }
            }
            counts
        })
        .collect();
    let mut total = BTreeMap::new();
    for counts in partial {
        for (w, n) in counts {
            *total.entry(w).or_default() += n;
        }
    }
    total
}

/// Scores window words against the index's token frequencies.
pub fn score_words(windows: &[ContextWindow], index: &CorpusIndex) -> Result<Vec<ScoredWord>, BootstrapError> {
    score_words_with(windows, index, index.frequencies())
}

/// Scores window words against an explicit frequency table. Each filled
/// slot of each window counts once, so a token captured by two windows
/// counts twice. Output is ordered by word.
pub fn score_words_with(
    windows: &[ContextWindow],
    index: &CorpusIndex,
    freqs: &BTreeMap<String, u64>,
) -> Result<Vec<ScoredWord>, BootstrapError> {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for w in windows {
        for slot in [&w.left, &w.right].into_iter().flatten() {
            *counts.entry(slot.word.as_str()).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .map(|(word, window_count)| {
            let corpus_freq = freqs.get(word).copied().unwrap_or(0);
            if corpus_freq == 0 {
                return Err(BootstrapError::ZeroFrequency(word.to_string()));
            }
            Ok(ScoredWord {
                word: word.to_string(),
                display: index.display_form(word).to_string(),
                window_count,
                corpus_freq,
                score: Score::new(window_count, corpus_freq),
                flags: SeedFlags::default(),
            })
        })
        .collect()
}

/// Drops stoplist words, numbers (per the configured filter) and words with
/// corpus frequency at or below the threshold.
pub fn filter_candidates(scored: Vec<ScoredWord>, cfg: &BootstrapConfig) -> Vec<ScoredWord> {
    scored
        .into_iter()
        .filter(|w| !cfg.stoplist.contains(&w.word))
        .filter(|w| !cfg.number_filter.is_filtered(&w.word))
        .filter(|w| w.corpus_freq > cfg.min_corpus_freq)
        .collect()
}

/// Canonical ranking order: score descending, then corpus frequency
/// descending, then word ascending.
pub fn ranking_order(a: &ScoredWord, b: &ScoredWord) -> Ordering {
    b.score.cmp(&a.score).then_with(|| b.corpus_freq.cmp(&a.corpus_freq)).then_with(|| a.word.cmp(&b.word))
}

pub fn rank(mut scored: Vec<ScoredWord>) -> Vec<ScoredWord> {
    scored.sort_by(ranking_order);
    scored
}

/// Decides whether a candidate may join the seed list.
pub trait PromotionGate {
    fn approve(&mut self, iteration: u32, candidate: &ScoredWord) -> bool;
}

/// Promotes without asking.
#[derive(Debug, Clone, Copy, Default)]
pub struct AutoPromote;

impl PromotionGate for AutoPromote {
    fn approve(&mut self, _iteration: u32, _candidate: &ScoredWord) -> bool {
        true
    }
}

impl<F: FnMut(u32, &ScoredWord) -> bool> PromotionGate for F {
    fn approve(&mut self, iteration: u32, candidate: &ScoredWord) -> bool {
        self(iteration, candidate)
    }
}

/// Adds the first `k` ranked words that are not already seeds.
pub fn promote_seeds(ranked: &[ScoredWord], seeds: &mut SeedList, k: usize, iteration: u32) -> Vec<String> {
    promote_seeds_with(ranked, seeds, k, iteration, &mut AutoPromote)
}

pub fn promote_seeds_with(
    ranked: &[ScoredWord],
    seeds: &mut SeedList,
    k: usize,
    iteration: u32,
    gate: &mut dyn PromotionGate,
) -> Vec<String> {
    let mut added = Vec::new();
    for candidate in ranked {
        if added.len() == k {
            break;
        }
        if seeds.contains(&candidate.word) || !gate.approve(iteration, candidate) {
            continue;
        }
        seeds.promote(&candidate.word, iteration);
        added.push(candidate.word.clone());
    }
    added
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRank {
    pub word: String,
    /// 1-based rank in this iteration's list, `None` if it was filtered or unscored.
    pub rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iteration: u32,
    pub seeds_before: usize,
    pub sentences: usize,
    pub windows: usize,
    pub candidates: usize,
    pub promoted: Vec<String>,
    /// Where previously promoted seeds landed in this iteration's ranking.
    pub seed_ranks: Vec<SeedRank>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum RunStatus {
    #[default]
    Completed,
    /// An iteration found no context windows; the last non-empty ranking was kept.
    TerminatedEarly { iteration: u32, reason: String },
}

impl RunStatus {
    pub fn is_warning(&self) -> bool {
        !matches!(self, RunStatus::Completed)
    }
}

/// Final ranking for one category with the configuration and per-iteration
/// log that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedList {
    #[serde(default)]
    pub run_id: String,
    pub category: String,
    pub status: RunStatus,
    pub config: BootstrapConfig,
    pub seeds: SeedList,
    pub iterations: Vec<IterationLog>,
    pub words: Vec<ScoredWord>,
}

#[derive(Serialize, Deserialize)]
struct RankingFile<T> {
    format: String,
    version: u32,
    #[serde(flatten)]
    ranking: T,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn position(&self, norm: &str) -> Option<usize> {
        self.words.iter().position(|w| w.word == norm)
    }

    pub fn contains(&self, norm: &str) -> bool {
        self.position(norm).is_some()
    }

    /// Tab-separated export, one row per word, preceded by a run comment and
    /// a header row.
    pub fn to_tsv(&self) -> String {
        let mut out =
            format!("# {RANKING_FORMAT} v{RANKING_VERSION} run_id={} category={}\n", self.run_id, self.category);
        out.push_str("rank\tword\tscore\twindow_count\tcorpus_freq\tseed_flag\n");
        for (i, w) in self.words.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                i + 1,
                w.display,
                w.score,
                w.window_count,
                w.corpus_freq,
                w.seed_flag()
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let file = RankingFile { format: RANKING_FORMAT.into(), version: RANKING_VERSION, ranking: self };
        let mut s = serde_json::to_string_pretty(&file).expect("ranking serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, BootstrapError> {
        let file: RankingFile<RankedList> =
            serde_json::from_str(text).map_err(|e| BootstrapError::Format(e.to_string()))?;
        if file.format != RANKING_FORMAT || file.version != RANKING_VERSION {
            return Err(BootstrapError::Format(format!(
                "expected {RANKING_FORMAT} v{RANKING_VERSION}, found {} v{}",
                file.format, file.version
            )));
        }
        Ok(file.ranking)
    }
}

/// Runs the full loop with automatic promotion.
pub fn run_bootstrap(
    index: &CorpusIndex,
    seeds: SeedList,
    lex: &PosLexicon,
    cfg: &BootstrapConfig,
) -> Result<RankedList, BootstrapError> {
    run_bootstrap_with(index, seeds, lex, cfg, &mut AutoPromote)
}

pub fn run_bootstrap_with(
    index: &CorpusIndex,
    mut seeds: SeedList,
    lex: &PosLexicon,
    cfg: &BootstrapConfig,
    gate: &mut dyn PromotionGate,
) -> Result<RankedList, BootstrapError> {
    cfg.validate()?;
    if seeds.original().is_empty() {
        return Err(BootstrapError::NoSeeds(seeds.category.clone()));
    }
    if index.is_empty() {
        return Err(BootstrapError::EmptyCorpus);
    }
    let freqs: Cow<'_, BTreeMap<String, u64>> =
        if cfg.freq_nouns_only { Cow::Owned(noun_frequencies(index, lex)) } else { Cow::Borrowed(index.frequencies()) };

    let mut status = RunStatus::Completed;
    let mut log = Vec::new();
    let mut last: Vec<ScoredWord> = Vec::new();
    for iteration in 1..=cfg.iterations {
        let selected = index.sentences_containing(seeds.words());
        let chunked: Vec<ChunkedSentence> = selected.par_iter().map(|&id| parse_sentence(index, id, lex)).collect();
        let windows = extract_windows(&chunked, &seeds);
        if windows.is_empty() {
            let reason = "no context windows around seed head nouns".to_string();
            warn!("{}: iteration {iteration}: {reason}; stopping early", seeds.category);
            status = RunStatus::TerminatedEarly { iteration, reason };
            break;
        }
        let ranked = rank(filter_candidates(score_words_with(&windows, index, &freqs)?, cfg));
        let seed_ranks = seeds
            .promoted()
            .iter()
            .map(|p| SeedRank {
                word: p.word.clone(),
                rank: ranked.iter().position(|w| w.word == p.word).map(|r| r + 1),
            })
            .collect();
        let seeds_before = seeds.len();
        let promoted = promote_seeds_with(&ranked, &mut seeds, cfg.promote_per_iteration, iteration, gate);
        log.push(IterationLog {
            iteration,
            seeds_before,
            sentences: selected.len(),
            windows: windows.len(),
            candidates: ranked.len(),
            promoted,
            seed_ranks,
        });
        last = ranked;
    }

    for w in &mut last {
        w.flags =
            SeedFlags { was_original_seed: seeds.is_original(&w.word), was_promoted_seed: seeds.is_promoted(&w.word) };
    }
    Ok(RankedList {
        run_id: String::new(),
        category: seeds.category.clone(),
        status,
        config: cfg.clone(),
        seeds,
        iterations: log,
        words: last,
    })
}
