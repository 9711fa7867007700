//! The permanent semantic lexicon, judge ratings, and acquisition curves.
//!
//! Ratings follow a 0 to 5 scale: 5 core member, 4 part of a member,
//! 3 strongly associated, 2 weakly associated, 1 unrelated, 0 unknown word.
//! Zeros do not count toward curves unless a manual override (1 to 5) is
//! attached; the original zero is kept alongside the override.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bootstrap::RankedList;
use crate::corpus::normalize;
use crate::util::write_atomic;

pub const STORE_FORMAT: &str = "seedlex-store";
pub const LEXICON_FORMAT: &str = "seedlex-lexicon";
pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_ACCEPTANCE_THRESHOLD: u8 = 3;
pub const DEFAULT_CURVE_STEP: usize = 20;

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("ratings line {line}: {message}")]
    RatingsFormat { line: usize, message: String },
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
    #[error("word {word:?} is not in the ranking of run {run_id:?}")]
    WordNotInRanking { word: String, run_id: String },
    #[error("rating {0} is outside 1..=5")]
    InvalidRating(u8),
    #[error("rating below acceptance threshold ({rating} < {threshold})")]
    BelowThreshold { rating: u8, threshold: u8 },
    #[error("accepting {0:?} requires a rating")]
    MissingRating(String),
    #[error("unrated words in the plotted prefix: {}", .0.join(", "))]
    UnratedWords(Vec<String>),
    #[error("invalid curve parameters: {0}")]
    CurveParameters(String),
    #[error("store file {path}: {message}")]
    Store { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One judge's rating of one word for one category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rating {
    pub word: String,
    pub category: String,
    pub judge_id: String,
    pub value: u8,
    #[serde(rename = "override", default, skip_serializing_if = "Option::is_none")]
    pub override_value: Option<u8>,
}

impl Rating {
    /// The override when present, otherwise the raw value; `None` for an
    /// unresolved zero.
    pub fn effective(&self) -> Option<u8> {
        match (self.value, self.override_value) {
            (_, Some(o)) => Some(o),
            (0, None) => None,
            (v, None) => Some(v),
        }
    }

    pub fn needs_override(&self) -> bool {
        self.value == 0 && self.override_value.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RatingImport {
    pub ratings: Vec<Rating>,
    pub warnings: Vec<String>,
}

impl RatingImport {
    /// Zero ratings still waiting for a manual override.
    pub fn needing_override(&self) -> impl Iterator<Item = &Rating> {
        self.ratings.iter().filter(|r| r.needs_override())
    }
}

pub fn import_ratings(path: &Path) -> Result<RatingImport, LexiconError> {
    parse_ratings(&std::fs::read_to_string(path)?)
}

/// Parses `word<TAB>category<TAB>judge_id<TAB>rating[<TAB>override]` rows.
/// A repeated (word, category, judge) row replaces the earlier one.
pub fn parse_ratings(text: &str) -> Result<RatingImport, LexiconError> {
    let mut import = RatingImport::default();
    let mut seen: HashMap<(String, String, String), usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim_end_matches('\r');
        if row.trim().is_empty() || row.trim_start().starts_with('#') {
            continue;
        }
        let err = |message: String| LexiconError::RatingsFormat { line, message };
        let fields: Vec<&str> = row.split('\t').map(str::trim).collect();
        if !(4..=5).contains(&fields.len()) {
            return Err(err(format!("expected 4 or 5 tab-separated fields, found {}", fields.len())));
        }
        if fields[..3].iter().any(|f| f.is_empty()) {
            return Err(err("empty word, category or judge".into()));
        }
        let value: u8 = fields[3].parse().map_err(|_| err(format!("rating {:?} is not an integer", fields[3])))?;
        if value > 5 {
            return Err(err(format!("rating {value} is outside 0..=5")));
        }
        let override_value = match fields.get(4).filter(|f| !f.is_empty()) {
            None => None,
            Some(f) => {
                let o: u8 = f.parse().map_err(|_| err(format!("override {f:?} is not an integer")))?;
                if !(1..=5).contains(&o) {
                    return Err(err(format!("override {o} is outside 1..=5")));
                }
                if value != 0 {
                    return Err(err("override is only allowed on a 0 rating".into()));
                }
                Some(o)
            }
        };
        let rating = Rating {
            word: normalize(fields[0]),
            category: fields[1].to_lowercase(),
            judge_id: fields[2].to_string(),
            value,
            override_value,
        };
        let key = (rating.word.clone(), rating.category.clone(), rating.judge_id.clone());
        match seen.get(&key) {
            Some(&at) => {
                import.warnings.push(format!(
                    "line {line}: duplicate rating of {:?} by {}; keeping the later row",
                    rating.word, rating.judge_id
                ));
                import.ratings[at] = rating;
            }
            None => {
                seen.insert(key, import.ratings.len());
                import.ratings.push(rating);
            }
        }
    }
    for w in &import.warnings {
        log::warn!("ratings {w}");
    }
    Ok(import)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub words_reviewed: usize,
    pub count: usize,
}

/// Cumulative count of words whose best effective rating across judges
/// reaches `threshold`, sampled every `step` words down a ranking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcquisitionCurve {
    /// Run that produced the ranking; empty for a bare word list.
    #[serde(default)]
    pub run_id: String,
    pub category: String,
    pub threshold: u8,
    pub step: usize,
    pub points: Vec<CurvePoint>,
}

impl AcquisitionCurve {
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# category={} threshold={} step={}", self.category, self.threshold, self.step);
        if !self.run_id.is_empty() {
            let _ = write!(out, " run_id={}", self.run_id);
        }
        out.push_str("\nwords_reviewed\tcount\n");
        for p in &self.points {
            let _ = writeln!(out, "{}\t{}", p.words_reviewed, p.count);
        }
        out
    }
}

/// Curve over the first `limit` words of `ranked` (all of it when `None`).
pub fn acquisition_curve(
    ranked: &RankedList,
    ratings: &[Rating],
    threshold: u8,
    step: usize,
    limit: Option<usize>,
) -> Result<AcquisitionCurve, LexiconError> {
    let words: Vec<&str> = ranked.words.iter().map(|w| w.word.as_str()).collect();
    let prefix = limit.map_or(words.len(), |l| l.min(words.len()));
    let mut curve = curve_for_words(&ranked.category, &words[..prefix], ratings, threshold, step)?;
    curve.run_id = ranked.run_id.clone();
    Ok(curve)
}

pub fn curve_for_words(
    category: &str,
    words: &[&str],
    ratings: &[Rating],
    threshold: u8,
    step: usize,
) -> Result<AcquisitionCurve, LexiconError> {
    if !(1..=5).contains(&threshold) {
        return Err(LexiconError::CurveParameters(format!("threshold {threshold} is outside 1..=5")));
    }
    if step == 0 {
        return Err(LexiconError::CurveParameters("step must be positive".into()));
    }
    // None: rated, but only with unresolved zeros
    let mut best: HashMap<&str, Option<u8>> = HashMap::new();
    for r in ratings.iter().filter(|r| r.category == category) {
        let slot = best.entry(r.word.as_str()).or_insert(None);
        *slot = (*slot).max(r.effective());
    }
    let gaps: Vec<String> = words.iter().filter(|w| !best.contains_key(*w)).map(|w| w.to_string()).collect();
    if !gaps.is_empty() {
        return Err(LexiconError::UnratedWords(gaps));
    }
    let mut points = Vec::with_capacity(words.len() / step);
    let mut count = 0;
    for (i, w) in words.iter().enumerate() {
        if best[w].is_some_and(|r| r >= threshold) {
            count += 1;
        }
        if (i + 1) % step == 0 {
            points.push(CurvePoint { words_reviewed: i + 1, count });
        }
    }
    Ok(AcquisitionCurve { run_id: String::new(), category: category.to_string(), threshold, step, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
    Defer,
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "accept" | "a" => Ok(Verdict::Accept),
            "reject" | "r" => Ok(Verdict::Reject),
            "defer" | "d" => Ok(Verdict::Defer),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewDecision {
    pub word: String,
    pub category: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rating: Option<u8>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub reviewer: String,
    #[serde(default)]
    pub run_id: String,
}

impl ReviewDecision {
    fn same_as(&self, other: &ReviewDecision) -> bool {
        self.word == other.word
            && self.category == other.category
            && self.verdict == other.verdict
            && self.rating == other.rating
            && self.reviewer == other.reviewer
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntrySource {
    Manual,
    BootstrapAccepted,
}

impl fmt::Display for EntrySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntrySource::Manual => "manual",
            EntrySource::BootstrapAccepted => "bootstrap-accepted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub display: String,
    pub rating: u8,
    pub source: EntrySource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionOutcome {
    Applied,
    /// Identical to the previous decision for this word; nothing changed.
    Unchanged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Tsv,
    Structured,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(ExportFormat::Tsv),
            "structured" | "json" => Ok(ExportFormat::Structured),
            other => Err(format!("unknown export format {other:?} (expected tsv or json)")),
        }
    }
}

/// Accepted category members, the append-only decision log and imported
/// ratings, persisted as a single JSON file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconStore {
    format: String,
    version: u32,
    pub acceptance_threshold: u8,
    categories: BTreeMap<String, BTreeMap<String, LexiconEntry>>,
    decisions: Vec<ReviewDecision>,
    ratings: Vec<Rating>,
}

impl Default for LexiconStore {
    fn default() -> Self {
        LexiconStore {
            format: STORE_FORMAT.into(),
            version: FORMAT_VERSION,
            acceptance_threshold: DEFAULT_ACCEPTANCE_THRESHOLD,
            categories: BTreeMap::new(),
            decisions: Vec::new(),
            ratings: Vec::new(),
        }
    }
}

impl LexiconStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path)?;
        let store_err = |message: String| LexiconError::Store { path: path.display().to_string(), message };
        let store: LexiconStore = serde_json::from_str(&text).map_err(|e| store_err(e.to_string()))?;
        if store.format != STORE_FORMAT || store.version != FORMAT_VERSION {
            return Err(store_err(format!("unsupported format {} v{}", store.format, store.version)));
        }
        Ok(store)
    }

    /// Loads `path`, or starts an empty store when the file does not exist yet.
    pub fn open(path: &Path) -> Result<Self, LexiconError> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Self::new())
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), LexiconError> {
        let mut text = serde_json::to_string_pretty(self).expect("store serializes");
        text.push('\n');
        write_atomic(path, text.as_bytes())?;
        Ok(())
    }

    pub fn register_category(&mut self, category: &str) {
        self.categories.entry(category.to_string()).or_default();
    }

    pub fn has_category(&self, category: &str) -> bool {
        self.categories.contains_key(category)
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.categories.keys().map(String::as_str)
    }

    pub fn entries(&self, category: &str) -> Option<&BTreeMap<String, LexiconEntry>> {
        self.categories.get(category)
    }

    pub fn entry(&self, category: &str, word: &str) -> Option<&LexiconEntry> {
        self.categories.get(category)?.get(word)
    }

    pub fn decisions(&self) -> &[ReviewDecision] {
        &self.decisions
    }

    pub fn ratings(&self) -> &[Rating] {
        &self.ratings
    }

    pub fn accepted_words(&self, category: &str) -> Vec<String> {
        self.categories.get(category).map_or_else(Vec::new, |e| e.keys().cloned().collect())
    }

    /// Replaces ratings with the same (word, category, judge).
    pub fn add_ratings(&mut self, ratings: impl IntoIterator<Item = Rating>) {
        for r in ratings {
            match self
                .ratings
                .iter_mut()
                .find(|x| x.word == r.word && x.category == r.category && x.judge_id == r.judge_id)
            {
                Some(slot) => *slot = r,
                None => self.ratings.push(r),
            }
        }
    }

    /// Adds a hand-entered member, registering the category if needed.
    pub fn add_manual(&mut self, category: &str, word: &str, rating: u8) -> Result<(), LexiconError> {
        if !(1..=5).contains(&rating) {
            return Err(LexiconError::InvalidRating(rating));
        }
        self.categories.entry(category.to_string()).or_default().insert(
            normalize(word),
            LexiconEntry { display: word.to_string(), rating, source: EntrySource::Manual, provenance: None },
        );
        Ok(())
    }

    /// Applies a reviewer decision about a word from `ranked`.
    ///
    /// Accepting upserts the entry, rejecting removes it, deferring only logs.
    /// Every applied decision is appended to the log; repeating the previous
    /// decision for the same word is a no-op.
    pub fn record_decision(&mut self, ranked: &RankedList, d: ReviewDecision) -> Result<DecisionOutcome, LexiconError> {
        if !self.categories.contains_key(&d.category) || ranked.category != d.category {
            return Err(LexiconError::UnknownCategory(d.category));
        }
        let word = normalize(&d.word);
        let Some(pos) = ranked.position(&word) else {
            return Err(LexiconError::WordNotInRanking { word: d.word, run_id: ranked.run_id.clone() });
        };
        if let Some(r) = d.rating.filter(|r| !(1..=5).contains(r)) {
            return Err(LexiconError::InvalidRating(r));
        }
        if d.verdict == Verdict::Accept {
            let rating = d.rating.ok_or_else(|| LexiconError::MissingRating(word.clone()))?;
            if rating < self.acceptance_threshold {
                return Err(LexiconError::BelowThreshold { rating, threshold: self.acceptance_threshold });
            }
        }
        let d = ReviewDecision { word: word.clone(), run_id: ranked.run_id.clone(), ..d };
        let previous = self.decisions.iter().rev().find(|p| p.word == word && p.category == d.category);
        if previous.is_some_and(|p| p.same_as(&d)) {
            return Ok(DecisionOutcome::Unchanged);
        }

        let entries = self.categories.entry(d.category.clone()).or_default();
        match d.verdict {
            Verdict::Accept => {
                entries.insert(
                    word,
                    LexiconEntry {
                        display: ranked.words[pos].display.clone(),
                        rating: d.rating.unwrap_or_default(),
                        source: EntrySource::BootstrapAccepted,
                        provenance: Some(ranked.run_id.clone()),
                    },
                );
            }
            Verdict::Reject => {
                entries.remove(&word);
            }
            Verdict::Defer => {}
        }
        self.decisions.push(d);
        Ok(DecisionOutcome::Applied)
    }

    /// Serializes one category, ordered by word.
    pub fn export(&self, category: &str, format: ExportFormat) -> Result<String, LexiconError> {
        let entries =
            self.categories.get(category).ok_or_else(|| LexiconError::UnknownCategory(category.to_string()))?;
        Ok(match format {
            ExportFormat::Tsv => {
                let mut out = String::from("word\tcategory\trating\tsource\n");
                for e in entries.values() {
                    let _ = writeln!(out, "{}\t{}\t{}\t{}", e.display, category, e.rating, e.source);
                }
                out
            }
            ExportFormat::Structured => {
                #[derive(Serialize)]
                struct Row<'a> {
                    word: &'a str,
                    category: &'a str,
                    rating: u8,
                    source: EntrySource,
                    provenance: &'a Option<String>,
                }
                let rows: Vec<Row<'_>> = entries
                    .values()
                    .map(|e| Row {
                        word: &e.display,
                        category,
                        rating: e.rating,
                        source: e.source,
                        provenance: &e.provenance,
                    })
                    .collect();
                let doc = serde_json::json!({
                    "format": LEXICON_FORMAT,
                    "version": FORMAT_VERSION,
                    "category": category,
                    "entries": rows,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("export serializes");
                s.push('\n');
                s
            }
        })
    }
}

/// Presentation order for judging the top of a ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewOrder {
    words: Vec<String>,
    ranks: Vec<usize>,
    /// Set when the requested size exceeded the ranking and was reduced.
    pub clamped: bool,
}

impl ReviewOrder {
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// 0-based rank in the original list of the word shown at `position`.
    pub fn true_rank(&self, position: usize) -> Option<usize> {
        self.ranks.get(position).copied()
    }
}

/// Seeded uniform permutation of the top `n` ranked words.
pub fn shuffle_for_review(ranked: &RankedList, n: usize, rng_seed: u64) -> ReviewOrder {
    review_order(ranked, n, Some(rng_seed), true)
}

/// Rank-order presentation of the top `n` words.
pub fn rank_order(ranked: &RankedList, n: usize) -> ReviewOrder {
    review_order(ranked, n, None, true)
}

/// The top `n` words, shuffled when `rng_seed` is given. Without
/// `include_seeds` the original seed words are skipped before taking `n`;
/// true ranks still index the full ranking.
pub fn review_order(ranked: &RankedList, n: usize, rng_seed: Option<u64>, include_seeds: bool) -> ReviewOrder {
    let pool: Vec<usize> =
        (0..ranked.len()).filter(|&i| include_seeds || !ranked.words[i].flags.was_original_seed).collect();
    let clamped = n > pool.len();
    if clamped {
        log::warn!("review size {n} exceeds the {} reviewable words; clamping", pool.len());
    }
    let mut ranks: Vec<usize> = pool.into_iter().take(n).collect();
    if let Some(seed) = rng_seed {
        ranks.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let words = ranks.iter().map(|&r| ranked.words[r].word.clone()).collect();
    ReviewOrder { words, ranks, clamped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bootstrap::{BootstrapConfig, RunStatus, Score, ScoredWord, SeedFlags, SeedList};

    fn ranking(category: &str, words: &[&str]) -> RankedList {
        RankedList {
            run_id: "run-1".into(),
            category: category.into(),
            status: RunStatus::Completed,
            config: BootstrapConfig::default(),
            seeds: SeedList::new(category, ["seed"]),
            iterations: Vec::new(),
            words: words
                .iter()
                .map(|w| ScoredWord {
                    word: normalize(w),
                    display: w.to_string(),
                    window_count: 1,
                    corpus_freq: 6,
                    score: Score::new(1, 6),
                    flags: SeedFlags::default(),
                })
                .collect(),
        }
    }

    fn decision(word: &str, verdict: Verdict, rating: Option<u8>) -> ReviewDecision {
        ReviewDecision {
            word: word.into(),
            category: "weapon".into(),
            verdict,
            rating,
            timestamp: 0,
            reviewer: "r1".into(),
            run_id: String::new(),
        }
    }

    fn store() -> LexiconStore {
        let mut s = LexiconStore::new();
        s.register_category("weapon");
        s
    }

    #[test]
    fn accept_inserts_entry() {
        let ranked = ranking("weapon", &["gun", "rifle"]);
        let mut s = store();
        assert_eq!(
            s.record_decision(&ranked, decision("gun", Verdict::Accept, Some(5))).unwrap(),
            DecisionOutcome::Applied
        );
        let e = s.entry("weapon", "gun").unwrap();
        assert_eq!((e.rating, e.source), (5, EntrySource::BootstrapAccepted));
        assert_eq!(e.provenance.as_deref(), Some("run-1"));
    }

    #[test]
    fn last_decision_wins_and_log_keeps_both() {
        let ranked = ranking("weapon", &["gun"]);
        let mut s = store();
        s.record_decision(&ranked, decision("gun", Verdict::Reject, None)).unwrap();
        s.record_decision(&ranked, decision("gun", Verdict::Accept, Some(4))).unwrap();
        assert!(s.entry("weapon", "gun").is_some());
        assert_eq!(s.decisions().len(), 2);
        s.record_decision(&ranked, decision("gun", Verdict::Reject, None)).unwrap();
        assert!(s.entry("weapon", "gun").is_none());
    }

    #[test]
    fn repeated_decision_is_idempotent() {
        let ranked = ranking("weapon", &["gun"]);
        let mut s = store();
        s.record_decision(&ranked, decision("gun", Verdict::Accept, Some(5))).unwrap();
        let again = ReviewDecision { timestamp: 99, ..decision("gun", Verdict::Accept, Some(5)) };
        assert_eq!(s.record_decision(&ranked, again).unwrap(), DecisionOutcome::Unchanged);
        assert_eq!(s.decisions().len(), 1);
    }

    #[test]
    fn decision_errors() {
        let ranked = ranking("weapon", &["gun"]);
        let mut s = store();
        let err = s.record_decision(&ranked, decision("gun", Verdict::Accept, Some(2))).unwrap_err();
        assert_eq!(err.to_string(), "rating below acceptance threshold (2 < 3)");
        let err = s.record_decision(&ranked, decision("tank", Verdict::Accept, Some(5))).unwrap_err();
        assert!(err.to_string().contains("run-1"), "{err}");
        let err = s.record_decision(&ranked, decision("gun", Verdict::Accept, Some(6))).unwrap_err();
        assert!(matches!(err, LexiconError::InvalidRating(6)));
        let err = s.record_decision(&ranked, decision("gun", Verdict::Accept, None)).unwrap_err();
        assert!(matches!(err, LexiconError::MissingRating(_)));
        let mut empty = LexiconStore::new();
        let err = empty.record_decision(&ranked, decision("gun", Verdict::Accept, Some(5))).unwrap_err();
        assert!(matches!(err, LexiconError::UnknownCategory(_)));
    }

    #[test]
    fn defer_only_logs() {
        let ranked = ranking("weapon", &["gun"]);
        let mut s = store();
        s.record_decision(&ranked, decision("gun", Verdict::Defer, None)).unwrap();
        assert!(s.entry("weapon", "gun").is_none());
        assert_eq!(s.decisions().len(), 1);
    }

    #[test]
    fn ratings_parse_and_flag_zeros() {
        let import =
            parse_ratings("# w\nM-16\tweapon\tjudge1\t0\nM-16\tweapon\tjudge2\t0\t5\ngun\tweapon\tjudge1\t5\n")
                .unwrap();
        assert_eq!(import.ratings.len(), 3);
        let flagged: Vec<_> = import.needing_override().collect();
        assert_eq!(flagged.len(), 1);
        assert_eq!(flagged[0].word, "m-16");
        assert_eq!(import.ratings[1].effective(), Some(5));
    }

    #[test]
    fn ratings_errors_carry_line_numbers() {
        let err = parse_ratings("gun\tweapon\tj1\t5\ngun\tweapon\tj2\t7\n").unwrap_err();
        assert!(matches!(err, LexiconError::RatingsFormat { line: 2, .. }), "{err}");
        let err = parse_ratings("gun\tweapon\tj1\n").unwrap_err();
        assert!(matches!(err, LexiconError::RatingsFormat { line: 1, .. }));
        let err = parse_ratings("gun\tweapon\tj1\t4\t5\n").unwrap_err();
        assert!(err.to_string().contains("only allowed on a 0"));
    }

    #[test]
    fn duplicate_ratings_last_wins() {
        let import = parse_ratings("gun\tweapon\tj1\t2\ngun\tweapon\tj1\t5\n").unwrap();
        assert_eq!(import.ratings.len(), 1);
        assert_eq!(import.ratings[0].value, 5);
        assert_eq!(import.warnings.len(), 1);
    }

    #[test]
    fn two_judges_two_hundred_words() {
        let mut text = String::new();
        for i in 0..200 {
            for j in ["j1", "j2"] {
                text.push_str(&format!("w{i}\tweapon\t{j}\t3\n"));
            }
        }
        assert_eq!(parse_ratings(&text).unwrap().ratings.len(), 400);
    }

    #[test]
    fn curve_counts_per_step() {
        let words: Vec<String> = (0..40).map(|i| format!("w{i}")).collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let ranked = ranking("weapon", &refs);
        let fives = [0, 5, 19, 22, 39];
        let ratings: Vec<Rating> = (0..40)
            .map(|i| Rating {
                word: format!("w{i}"),
                category: "weapon".into(),
                judge_id: "j1".into(),
                value: if fives.contains(&i) { 5 } else { 1 },
                override_value: None,
            })
            .collect();
        let curve = acquisition_curve(&ranked, &ratings, 5, 20, None).unwrap();
        assert_eq!(
            curve.points,
            [CurvePoint { words_reviewed: 20, count: 3 }, CurvePoint { words_reviewed: 40, count: 5 }]
        );
    }

    #[test]
    fn curve_either_judge_and_zero_handling() {
        let ranked = ranking("weapon", &["a", "b", "c"]);
        let r = |w: &str, j: &str, v: u8, o: Option<u8>| Rating {
            word: w.into(),
            category: "weapon".into(),
            judge_id: j.into(),
            value: v,
            override_value: o,
        };
        let ratings = [r("a", "j1", 2, None), r("a", "j2", 5, None), r("b", "j1", 0, None), r("c", "j1", 0, Some(4))];
        let curve = acquisition_curve(&ranked, &ratings, 4, 1, None).unwrap();
        let counts: Vec<usize> = curve.points.iter().map(|p| p.count).collect();
        assert_eq!(counts, [1, 1, 2]);
        let err = acquisition_curve(&ranked, &ratings[..2], 4, 1, None).unwrap_err();
        assert_eq!(err.to_string(), "unrated words in the plotted prefix: b, c");
    }

    #[test]
    fn saturated_curve() {
        let words: Vec<String> = (0..200).map(|i| format!("w{i}")).collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let ratings: Vec<Rating> = words
            .iter()
            .map(|w| Rating {
                word: w.clone(),
                category: "weapon".into(),
                judge_id: "j".into(),
                value: 2,
                override_value: None,
            })
            .collect();
        let curve = acquisition_curve(&ranking("weapon", &refs), &ratings, 2, 20, None).unwrap();
        assert_eq!(curve.points.len(), 10);
        assert_eq!(curve.points.last().unwrap(), &CurvePoint { words_reviewed: 200, count: 200 });
    }

    #[test]
    fn export_orders_by_word_and_handles_empty() {
        let mut s = store();
        assert_eq!(s.export("weapon", ExportFormat::Tsv).unwrap(), "word\tcategory\trating\tsource\n");
        s.add_manual("weapon", "rifle", 5).unwrap();
        s.add_manual("weapon", "AK-47", 5).unwrap();
        assert_eq!(
            s.export("weapon", ExportFormat::Tsv).unwrap(),
            "word\tcategory\trating\tsource\nAK-47\tweapon\t5\tmanual\nrifle\tweapon\t5\tmanual\n"
        );
        assert!(s.export("weapon", ExportFormat::Structured).unwrap().contains("\"format\": \"seedlex-lexicon\""));
        assert!(matches!(s.export("vehicle", ExportFormat::Tsv), Err(LexiconError::UnknownCategory(_))));
    }

    #[test]
    fn store_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.json");
        let mut s = store();
        s.add_manual("weapon", "gun", 5).unwrap();
        s.save(&path).unwrap();
        assert_eq!(LexiconStore::load(&path).unwrap(), s);
        assert_eq!(LexiconStore::open(&dir.path().join("missing.json")).unwrap(), LexiconStore::new());
    }

    #[test]
    fn shuffle_is_seeded_and_clamped() {
        let words: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let ranked = ranking("weapon", &refs);
        let a = shuffle_for_review(&ranked, 10, 7);
        assert_eq!(a, shuffle_for_review(&ranked, 10, 7));
        assert_eq!(shuffle_for_review(&ranked, 1, 7).len(), 1);
        let big = shuffle_for_review(&ranked, 50, 7);
        assert!(big.clamped);
        assert_eq!(big.len(), 10);
        for (i, w) in a.words().iter().enumerate() {
            assert_eq!(&ranked.words[a.true_rank(i).unwrap()].word, w);
        }
    }

    #[test]
    fn review_order_skips_original_seeds_by_request() {
        let mut ranked = ranking("weapon", &["a", "b", "c", "d"]);
        ranked.words[0].flags.was_original_seed = true;
        ranked.words[2].flags.was_original_seed = true;
        let hidden = review_order(&ranked, 2, None, false);
        assert_eq!(hidden.words(), ["b", "d"]);
        assert_eq!((hidden.true_rank(0), hidden.true_rank(1)), (Some(1), Some(3)));
        assert!(!hidden.clamped);
        assert!(review_order(&ranked, 3, Some(1), false).clamped);
        assert_eq!(review_order(&ranked, 4, None, true).words(), ["a", "b", "c", "d"]);
    }
}
