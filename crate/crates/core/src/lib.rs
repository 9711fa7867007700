//! Build domain-specific semantic lexicons from a raw text corpus and a
//! handful of seed words per category.
//!
//! The modules, in pipeline order:
//!
//! * [`corpus`] loads a directory of text files, splits sentences, tokenizes
//!   and indexes them.
//! * [`parser`] tags tokens from a part-of-speech dictionary and chunks each
//!   sentence into simple noun, verb and prepositional phrases.
//! * [`bootstrap`] collects the nearest noun on either side of every seed
//!   head noun, scores words by how often they occur in those windows
//!   relative to the whole corpus, and iteratively grows the seed list.
//! * [`manifest`] names a run and writes its ranking files.
//! * [`lexicon`] stores reviewer decisions and judge ratings and computes
//!   cumulative acquisition curves over a ranking.
//!
//! ```
//! use seedlex::{run_bootstrap, BootstrapConfig, CorpusIndex, PosLexicon, SeedList, TokenizerConfig};
//!
//! let index = CorpusIndex::from_texts(&["I bought an AK-47 gun and an M-16 rifle."], &TokenizerConfig::default());
//! let cfg = BootstrapConfig { iterations: 1, min_corpus_freq: 0, ..BootstrapConfig::default() };
//! let ranked = run_bootstrap(&index, SeedList::new("weapon", ["gun", "rifle"]), &PosLexicon::demo(), &cfg).unwrap();
//! assert_eq!(ranked.words[0].display, "M-16");
//! assert_eq!(ranked.words[0].score.to_string(), "2.000000");
//! ```

pub mod bootstrap;
pub mod corpus;
pub mod lexicon;
pub mod manifest;
pub mod parser;
pub mod util;

pub use bootstrap::{
    run_bootstrap, run_bootstrap_with, BootstrapConfig, BootstrapError, ContextWindow, NumberFilter, RankedList,
    RunStatus, Score, ScoredWord, SeedList,
};
pub use corpus::{load_corpus, CorpusError, CorpusIndex, LoadReport, Sentence, Token, TokenizerConfig};
pub use lexicon::{AcquisitionCurve, LexiconError, LexiconStore, Rating, ReviewDecision, Verdict};
pub use parser::{ChunkedSentence, PosLexicon, Tag};

// The guide's chapters are compiled as doctests so their snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/parsing.md")]
    mod parsing {}
    #[doc = include_str!("../../../book/src/bootstrapping.md")]
    mod bootstrapping {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
}
