//! Corpus loading, sentence splitting, tokenization, and the frequency and
//! inverted sentence indexes built over them.
//!
//! A corpus is a directory of UTF-8 `.txt` files, one document per file.
//! Documents are visited in lexicographic order of their path relative to the
//! corpus root, so sentence ids are stable for a given directory.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::Range;
use std::path::{Path, PathBuf};

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::util::{parse_word_list, write_atomic};

/// Format tag written at the head of a serialized index.
pub const INDEX_FORMAT: &str = "seedlex-index";
pub const INDEX_VERSION: u32 = 1;

/// Abbreviations that do not end a sentence. Matched case-insensitively.
pub const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "gen.", "col.", "lt.", "maj.", "capt.", "sgt.", "cpl.", "adm.", "gov.", "sen.",
    "rep.", "pres.", "prof.", "rev.", "st.", "jr.", "sr.", "co.", "corp.", "inc.", "ltd.", "no.", "nos.", "vs.",
    "etc.", "e.g.", "i.e.", "u.s.", "u.n.", "jan.", "feb.", "mar.", "apr.", "aug.", "sep.", "sept.", "oct.", "nov.",
    "dec.", "mt.", "ft.", "approx.",
];

/// Index of a sentence in [`CorpusIndex::sentences`].
pub type SentenceId = usize;

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read corpus directory {path}: {source}")]
    Directory {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no documents found in {0}")]
    NoDocuments(PathBuf),
    #[error("index cache {path}: {message}")]
    Cache { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizerConfig {
    abbreviations: BTreeSet<String>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig { abbreviations: DEFAULT_ABBREVIATIONS.iter().map(|a| a.to_string()).collect() }
    }
}

impl TokenizerConfig {
    /// A configuration with no abbreviation list at all. Single capital
    /// letters followed by a period are still protected.
    pub fn without_abbreviations() -> Self {
        TokenizerConfig { abbreviations: BTreeSet::new() }
    }

    /// Adds abbreviations from a word-list file body (one per line, `#` comments).
    pub fn extend_abbreviations(&mut self, text: &str) {
        for word in parse_word_list(text) {
            let mut word = word.to_lowercase();
            if !word.ends_with('.') {
                word.push('.');
            }
            self.abbreviations.insert(word);
        }
    }

    pub fn abbreviations(&self) -> impl Iterator<Item = &str> {
        self.abbreviations.iter().map(String::as_str)
    }

    /// True when `word` (including its final period) must not end a sentence.
    pub fn is_abbreviation(&self, word: &str) -> bool {
        if self.abbreviations.contains(&word.to_lowercase()) {
            return true;
        }
        let mut chars = word.chars();
        matches!((chars.next(), chars.next(), chars.next()), (Some(c), Some('.'), None) if c.is_uppercase())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub source_path: PathBuf,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub norm: String,
    pub sent_pos: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, sent_pos: usize) -> Self {
        let surface = surface.into();
        let norm = normalize(&surface);
        Token { surface, norm, sent_pos }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub doc_id: String,
    pub index: usize,
    pub text: String,
    pub tokens: Vec<Token>,
}

/// Matching key for a surface form.
pub fn normalize(surface: &str) -> String {
    surface.to_lowercase()
}

/// Digits with optional sign, thousands commas and decimal points.
pub fn is_number(word: &str) -> bool {
    let body = word.strip_prefix(['+', '-']).unwrap_or(word);
    let bytes = body.as_bytes();
    !bytes.is_empty()
        && bytes[0].is_ascii_digit()
        && bytes[bytes.len() - 1].is_ascii_digit()
        && bytes.iter().all(|b| b.is_ascii_digit() || *b == b',' || *b == b'.')
}

/// Plain digit strings only: `2000` is a number, `2,000` is not.
pub fn is_plain_number(word: &str) -> bool {
    !word.is_empty() && word.bytes().all(|b| b.is_ascii_digit())
}

pub fn is_punctuation(word: &str) -> bool {
    !word.is_empty() && !word.chars().any(char::is_alphanumeric)
}

const TERMINATORS: [char; 3] = ['.', '!', '?'];
const CLOSERS: [char; 7] = ['"', '\'', '\u{201d}', '\u{2019}', ')', ']', '}'];
const OPENERS: [char; 7] = ['"', '\'', '\u{201c}', '\u{2018}', '(', '[', '{'];

/// Splits `text` into sentence byte spans using the default abbreviation list.
pub fn split_sentences(text: &str) -> Vec<Range<usize>> {
    split_sentences_with(text, &TokenizerConfig::default())
}

/// Sentence boundaries fall after `.`, `!` or `?` (plus any closing quotes or
/// brackets) when followed by whitespace and then a capital letter, or by the
/// end of the text. A period ending an abbreviation is never a boundary
/// unless the text ends there. Spans exclude surrounding whitespace.
pub fn split_sentences_with(text: &str, cfg: &TokenizerConfig) -> Vec<Range<usize>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let n = chars.len();
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut word_start = 0;
    let mut i = 0;
    while i < n {
        let c = chars[i].1;
        if c.is_whitespace() {
            word_start = i + 1;
            i += 1;
            continue;
        }
        if start.is_none() {
            start = Some(i);
        }
        if !TERMINATORS.contains(&c) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < n && CLOSERS.contains(&chars[j].1) {
            j += 1;
        }
        let mut k = j;
        while k < n && chars[k].1.is_whitespace() {
            k += 1;
        }
        let boundary = if k == n {
            true
        } else if k == j {
            false
        } else {
            let mut m = k;
            while m < n && OPENERS.contains(&chars[m].1) {
                m += 1;
            }
            let capital_follows = m < n && chars[m].1.is_uppercase();
            capital_follows && !(c == '.' && ends_abbreviation(&chars[word_start..=i], cfg))
        };
        if boundary {
            spans.push(byte_at(start.take().unwrap_or(i))..byte_at(j));
        }
        i = j;
    }
    if let Some(s) = start {
        let end = chars.iter().rev().find(|(_, c)| !c.is_whitespace()).map_or(text.len(), |&(b, c)| b + c.len_utf8());
        spans.push(byte_at(s)..end);
    }
    spans
}

fn ends_abbreviation(word: &[(usize, char)], cfg: &TokenizerConfig) -> bool {
    let word: String = word.iter().map(|&(_, c)| c).skip_while(|c| OPENERS.contains(c)).collect();
    cfg.is_abbreviation(&word)
}

/// Characters that may join two alphanumeric runs into a single token.
fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '_' | '.' | '\'' | '\u{2019}' | '/' | '&' | ',')
}

/// Splits one sentence into tokens.
///
/// Hyphenated and underscore-joined alphanumerics (`AK-47`, `Boeing_727`,
/// `U.S.-made`) stay whole, as do numbers with commas or decimal points.
/// Other punctuation becomes one token per character. A possessive `'s` is
/// split off as its own token.
pub fn tokenize(sentence: &str, cfg: &TokenizerConfig) -> Vec<Token> {
    let mut surfaces = Vec::new();
    for chunk in sentence.split_whitespace() {
        split_chunk(chunk, cfg, &mut surfaces);
    }
    surfaces.into_iter().enumerate().map(|(pos, s)| Token::new(s, pos)).collect()
}

fn split_chunk(chunk: &str, cfg: &TokenizerConfig, out: &mut Vec<String>) {
    let chars: Vec<char> = chunk.chars().collect();
    let Some(first) = chars.iter().position(|c| c.is_alphanumeric()) else {
        out.extend(chars.iter().map(char::to_string));
        return;
    };
    let last = chars.iter().rposition(|c| c.is_alphanumeric()).unwrap_or(first);
    out.extend(chars[..first].iter().map(char::to_string));

    let mut tail_start = last + 1;
    let mut abbreviation = false;
    if chars.get(tail_start) == Some(&'.') {
        let candidate: String = chars[first..=tail_start].iter().collect();
        if cfg.is_abbreviation(&candidate) {
            abbreviation = true;
            tail_start += 1;
        }
    }
    let before = out.len();
    split_core(&chars[first..=last], out);
    if abbreviation && out.len() > before {
        if let Some(tok) = out.last_mut() {
            tok.push('.');
        }
    }
    out.extend(chars[tail_start..].iter().map(char::to_string));
}

/// `core` starts and ends with an alphanumeric character.
fn split_core(core: &[char], out: &mut Vec<String>) {
    let mut buf = String::new();
    let mut i = 0;
    while i < core.len() {
        let c = core[i];
        if c.is_alphanumeric() || (is_joiner(c) && !buf.is_empty() && joins(core, i)) {
            buf.push(c);
        } else {
            if !buf.is_empty() {
                out.push(std::mem::take(&mut buf));
            }
            out.push(c.to_string());
        }
        i += 1;
    }
    if !buf.is_empty() {
        out.push(buf);
    }
    split_possessive(out);
}

fn joins(core: &[char], i: usize) -> bool {
    if core[i] == ',' {
        let digit = |j: usize| core.get(j).is_some_and(|c| c.is_ascii_digit());
        return i > 0 && digit(i - 1) && digit(i + 1);
    }
    core[i + 1..].iter().find(|c| !is_joiner(**c) || **c == ',').is_some_and(|c| c.is_alphanumeric())
}

fn split_possessive(out: &mut Vec<String>) {
    let Some(last) = out.last() else { return };
    for suffix in ["'s", "\u{2019}s", "'S"] {
        if last.len() > suffix.len() && last.ends_with(suffix) {
            let last = out.pop().unwrap_or_default();
            let (word, poss) = last.split_at(last.len() - suffix.len());
            out.push(word.to_string());
            out.push(poss.to_string());
            return;
        }
    }
}

/// Splits and tokenizes one document.
pub fn document_sentences(doc: &Document, cfg: &TokenizerConfig) -> Vec<Sentence> {
    split_sentences_with(&doc.text, cfg)
        .into_iter()
        .map(|span| {
            let text = doc.text[span].to_string();
            let tokens = tokenize(&text, cfg);
            (text, tokens)
        })
        .filter(|(_, tokens)| !tokens.is_empty())
        .enumerate()
        .map(|(index, (text, tokens))| Sentence { doc_id: doc.id.clone(), index, text, tokens })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

/// Which files became documents and which were skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub loaded: usize,
    pub skipped: Vec<SkippedFile>,
}

impl LoadReport {
    /// One line per skipped file (`skip<TAB>path<TAB>reason`) after a summary line.
    pub fn to_log(&self) -> String {
        let mut out = format!("loaded\t{}\nskipped\t{}\n", self.loaded, self.skipped.len());
        for s in &self.skipped {
            let _ = writeln!(out, "skip\t{}\t{}", s.path.display(), s.reason);
        }
        out
    }
}

/// Reads every `.txt` file under `dir`, sorted by relative path.
pub fn load_documents(dir: &Path) -> Result<(Vec<Document>, LoadReport), CorpusError> {
    let meta = std::fs::metadata(dir).map_err(|source| CorpusError::Directory { path: dir.to_path_buf(), source })?;
    if !meta.is_dir() {
        return Err(CorpusError::Directory {
            path: dir.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory"),
        });
    }

    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(dir).follow_links(true) {
        let entry = entry.map_err(|e| CorpusError::Directory { path: dir.to_path_buf(), source: e.into() })?;
        let path = entry.path();
        if entry.file_type().is_file() && path.extension().is_some_and(|e| e == "txt") {
            let rel = path.strip_prefix(dir).unwrap_or(path);
            let id = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
            files.push((id, path.to_path_buf()));
        }
    }
    files.sort();

    let mut report = LoadReport::default();
    let mut docs = Vec::with_capacity(files.len());
    for (id, path) in files {
        let skip = |reason: String| SkippedFile { path: path.clone(), reason };
        match std::fs::read(&path) {
            Err(e) => report.skipped.push(skip(format!("unreadable: {e}"))),
            Ok(bytes) => match String::from_utf8(bytes) {
                Err(_) => report.skipped.push(skip("not valid UTF-8".into())),
                Ok(text) if text.trim().is_empty() => report.skipped.push(skip("empty".into())),
                Ok(text) => docs.push(Document { id, source_path: path, text }),
            },
        }
    }
    for s in &report.skipped {
        warn!("skipping {}: {}", s.path.display(), s.reason);
    }
    report.loaded = docs.len();
    if docs.is_empty() {
        return Err(CorpusError::NoDocuments(dir.to_path_buf()));
    }
    Ok((docs, report))
}

/// Loads and indexes a corpus directory.
///
/// Documents are tokenized in parallel on the current rayon pool; the result
/// does not depend on the pool size.
pub fn load_corpus(dir: &Path, cfg: &TokenizerConfig) -> Result<(CorpusIndex, LoadReport), CorpusError> {
    let (docs, report) = load_documents(dir)?;
    Ok((CorpusIndex::build(&docs, cfg), report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentInfo {
    pub id: String,
    pub source_path: PathBuf,
}

/// Tokenized, sentence-split corpus with token frequencies and an inverted
/// index from normalized word to the sentences containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusIndex {
    content_hash: String,
    documents: Vec<DocumentInfo>,
    sentences: Vec<Sentence>,
    freq: BTreeMap<String, u64>,
    postings: BTreeMap<String, Vec<SentenceId>>,
    display: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    index: CorpusIndex,
}

impl CorpusIndex {
    pub fn build(docs: &[Document], cfg: &TokenizerConfig) -> Self {
        let mut docs: Vec<&Document> = docs.iter().collect();
        docs.sort_by(|a, b| a.id.cmp(&b.id));

        let per_doc: Vec<Vec<Sentence>> = docs.par_iter().map(|d| document_sentences(d, cfg)).collect();
        let sentences: Vec<Sentence> = per_doc.into_iter().flatten().collect();

        let mut freq: BTreeMap<String, u64> = BTreeMap::new();
        let mut postings: BTreeMap<String, Vec<SentenceId>> = BTreeMap::new();
        let mut surfaces: BTreeMap<&str, BTreeMap<&str, u64>> = BTreeMap::new();
        for (id, sentence) in sentences.iter().enumerate() {
            for tok in &sentence.tokens {
                *freq.entry(tok.norm.clone()).or_default() += 1;
                let list = postings.entry(tok.norm.clone()).or_default();
                if list.last() != Some(&id) {
                    list.push(id);
                }
                *surfaces.entry(&tok.norm).or_default().entry(&tok.surface).or_default() += 1;
            }
        }
        // most frequent surface; BTreeMap order makes the tie-break lexicographic
        let display = surfaces
            .into_iter()
            .map(|(norm, forms)| {
                let best = forms
                    .iter()
                    .fold(None::<(&str, u64)>, |best, (&s, &n)| match best {
                        Some((_, bn)) if bn >= n => best,
                        _ => Some((s, n)),
                    })
                    .map_or(norm, |(s, _)| s);
                (norm.to_string(), best.to_string())
            })
            .collect();

        let mut hasher = Sha256::new();
        for d in &docs {
            hasher.update(d.id.as_bytes());
            hasher.update([0]);
            hasher.update(d.text.as_bytes());
            hasher.update([0]);
        }
        let content_hash = hex(&hasher.finalize());

        CorpusIndex {
            content_hash,
            documents: docs
                .iter()
                .map(|d| DocumentInfo { id: d.id.clone(), source_path: d.source_path.clone() })
                .collect(),
            sentences,
            freq,
            postings,
            display,
        }
    }

    /// Builds an index from in-memory texts; ids are assigned `doc0000`, `doc0001`, ...
    pub fn from_texts<S: AsRef<str>>(texts: &[S], cfg: &TokenizerConfig) -> Self {
        let docs: Vec<Document> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document {
                id: format!("doc{i:04}"),
                source_path: PathBuf::new(),
                text: t.as_ref().to_string(),
            })
            .collect();
        Self::build(&docs, cfg)
    }

    /// SHA-256 over document ids and contents, in document order.
    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }

    pub fn documents(&self) -> &[DocumentInfo] {
        &self.documents
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn sentence(&self, id: SentenceId) -> &Sentence {
        &self.sentences[id]
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn frequencies(&self) -> &BTreeMap<String, u64> {
        &self.freq
    }

    /// Total occurrences of `norm` in the corpus; 0 when absent.
    pub fn corpus_frequency(&self, norm: &str) -> u64 {
        self.freq.get(norm).copied().unwrap_or(0)
    }

    pub fn postings(&self, norm: &str) -> &[SentenceId] {
        self.postings.get(norm).map_or(&[], Vec::as_slice)
    }

    /// Most frequent surface form of `norm`, or `norm` itself if unseen.
    pub fn display_form<'a>(&'a self, norm: &'a str) -> &'a str {
        self.display.get(norm).map_or(norm, String::as_str)
    }

    /// Sentences containing at least one of `words`, in corpus order, each once.
    pub fn sentences_containing<'w, I>(&self, words: I) -> Vec<SentenceId>
    where
        I: IntoIterator<Item = &'w str>,
    {
        let ids: BTreeSet<SentenceId> = words.into_iter().flat_map(|w| self.postings(w).iter().copied()).collect();
        ids.into_iter().collect()
    }

    pub fn to_cache_bytes(&self) -> Vec<u8> {
        let file = CacheFile { format: INDEX_FORMAT.to_string(), version: INDEX_VERSION, index: self.clone() };
        let mut bytes = serde_json::to_vec(&file).expect("index serializes");
        bytes.push(b'\n');
        bytes
    }

    pub fn save_cache(&self, path: &Path) -> Result<(), CorpusError> {
        write_atomic(path, &self.to_cache_bytes())?;
        Ok(())
    }

    pub fn load_cache(path: &Path) -> Result<Self, CorpusError> {
        let bytes = std::fs::read(path)?;
        let cache_err = |message: String| CorpusError::Cache { path: path.to_path_buf(), message };
        let file: CacheFile = serde_json::from_slice(&bytes).map_err(|e| cache_err(e.to_string()))?;
        if file.format != INDEX_FORMAT {
            return Err(cache_err(format!("unexpected format {:?}", file.format)));
        }
        if file.version != INDEX_VERSION {
            return Err(cache_err(format!("unsupported version {}", file.version)));
        }
        Ok(file.index)
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(bytes.len() * 2), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}
