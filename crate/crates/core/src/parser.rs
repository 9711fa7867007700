//! Dictionary-based part-of-speech tagging and flat phrase chunking.
//!
//! Tagging is a plain dictionary lookup: a known word receives the first tag
//! listed for it, an unknown word is tagged as a noun. Chunking groups the
//! tagged tokens into simple noun, verb and prepositional phrases. There is
//! no attachment or clause structure.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{is_number, is_punctuation, CorpusIndex, SentenceId, Token};

/// Small general-purpose lexicon bundled with the crate.
pub const DEMO_LEXICON: &str = include_str!("../data/demo.lexicon.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Noun,
    Verb,
    Adjective,
    Determiner,
    Pronoun,
    Preposition,
    Adverb,
    Conjunction,
    Number,
    Punctuation,
    Other,
}

impl Tag {
    pub const ALL: [Tag; 11] = [
        Tag::Noun,
        Tag::Verb,
        Tag::Adjective,
        Tag::Determiner,
        Tag::Pronoun,
        Tag::Preposition,
        Tag::Adverb,
        Tag::Conjunction,
        Tag::Number,
        Tag::Punctuation,
        Tag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Noun => "noun",
            Tag::Verb => "verb",
            Tag::Adjective => "adjective",
            Tag::Determiner => "determiner",
            Tag::Pronoun => "pronoun",
            Tag::Preposition => "preposition",
            Tag::Adverb => "adverb",
            Tag::Conjunction => "conjunction",
            Tag::Number => "number",
            Tag::Punctuation => "punctuation",
            Tag::Other => "other",
        }
    }

    /// Tags that may appear inside a simple noun phrase.
    fn is_nominal_part(self) -> bool {
        matches!(self, Tag::Determiner | Tag::Adjective | Tag::Number | Tag::Noun)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "noun" | "n" => Tag::Noun,
            "verb" | "v" => Tag::Verb,
            "adjective" | "adj" => Tag::Adjective,
            "determiner" | "det" => Tag::Determiner,
            "pronoun" | "pron" => Tag::Pronoun,
            "preposition" | "prep" => Tag::Preposition,
            "adverb" | "adv" => Tag::Adverb,
            "conjunction" | "conj" => Tag::Conjunction,
            "number" | "num" => Tag::Number,
            "punctuation" | "punct" => Tag::Punctuation,
            "other" => Tag::Other,
            other => return Err(format!("unknown tag {other:?}")),
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },
    #[error("head_noun called on a {0:?} chunk")]
    NotNounPhrase(ChunkKind),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Word → possible tags, most frequent first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PosLexicon {
    entries: HashMap<String, Vec<Tag>>,
}

/// A lexicon plus the non-fatal problems seen while reading it.
#[derive(Debug, Clone)]
pub struct LoadedLexicon {
    pub lexicon: PosLexicon,
    pub warnings: Vec<String>,
}

impl PosLexicon {
    pub fn demo() -> Self {
        Self::parse(DEMO_LEXICON).expect("bundled lexicon parses").lexicon
    }

    pub fn load(path: &Path) -> Result<LoadedLexicon, ParseError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses `word<TAB>tag[,tag...]` lines. Later duplicates are ignored with a warning.
    pub fn parse(text: &str) -> Result<LoadedLexicon, ParseError> {
        let mut entries: HashMap<String, Vec<Tag>> = HashMap::new();
        let mut warnings = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (word, tags) = line
                .split_once('\t')
                .ok_or_else(|| ParseError::Lexicon { line: line_no, message: "expected word<TAB>tags".into() })?;
            let word = word.trim();
            if word.is_empty() {
                return Err(ParseError::Lexicon { line: line_no, message: "empty word".into() });
            }
            let tags = tags
                .split(',')
                .map(|t| t.parse::<Tag>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|message| ParseError::Lexicon { line: line_no, message })?;
            let key = crate::corpus::normalize(word);
            if entries.contains_key(&key) {
                warnings.push(format!("line {line_no}: duplicate entry for {word:?} ignored"));
                continue;
            }
            entries.insert(key, tags);
        }
        for w in &warnings {
            log::warn!("lexicon {w}");
        }
        Ok(LoadedLexicon { lexicon: PosLexicon { entries }, warnings })
    }

    pub fn insert(&mut self, word: &str, tags: Vec<Tag>) {
        self.entries.insert(crate::corpus::normalize(word), tags);
    }

    pub fn tags(&self, norm: &str) -> Option<&[Tag]> {
        self.entries.get(norm).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub token: Token,
    pub tag: Tag,
}

pub fn tag_token(token: &Token, lex: &PosLexicon) -> Tag {
    if is_punctuation(&token.surface) {
        Tag::Punctuation
    } else if is_number(&token.surface) {
        Tag::Number
    } else {
        lex.tags(&token.norm).and_then(|tags| tags.first().copied()).unwrap_or(Tag::Noun)
    }
}

pub fn tag_tokens(tokens: &[Token], lex: &PosLexicon) -> Vec<TaggedToken> {
    tokens.iter().map(|t| TaggedToken { token: t.clone(), tag: tag_token(t, lex) }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChunkKind {
    #[serde(rename = "NP")]
    NounPhrase,
    #[serde(rename = "VP")]
    VerbPhrase,
    #[serde(rename = "PP")]
    PrepPhrase,
    #[serde(rename = "OTHER")]
    Other,
}

impl ChunkKind {
    pub fn label(self) -> &'static str {
        match self {
            ChunkKind::NounPhrase => "NP",
            ChunkKind::VerbPhrase => "VP",
            ChunkKind::PrepPhrase => "PP",
            ChunkKind::Other => "OTHER",
        }
    }
}

/// A contiguous token range `start..end` of a sentence.
///
/// A prepositional phrase spans only its preposition; `object` is the index
/// (within the sentence's chunk list) of the noun phrase that follows it, so
/// that noun phrase remains a chunk of its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub kind: ChunkKind,
    pub start: usize,
    pub end: usize,
    /// Absolute token position of the head noun (noun phrases only).
    pub head: Option<usize>,
    pub object: Option<usize>,
}

impl Chunk {
    pub fn span(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkedSentence {
    /// Corpus sentence this came from; 0 for free-standing token lists.
    pub sentence: SentenceId,
    pub tokens: Vec<TaggedToken>,
    pub chunks: Vec<Chunk>,
}

impl ChunkedSentence {
    /// Positions of tokens that head a noun phrase.
    pub fn heads(&self) -> impl Iterator<Item = usize> + '_ {
        self.chunks.iter().filter_map(|c| c.head)
    }

    pub fn head_noun(&self, chunk: &Chunk) -> Result<&TaggedToken, ParseError> {
        head_noun(chunk, &self.tokens)
    }

    /// Bracketed rendering, e.g. `NP[the stallion] OTHER[,] NP[a white *Arabian*]`
    /// with the head noun starred.
    pub fn render(&self) -> String {
        self.chunks
            .iter()
            .map(|c| {
                let words: Vec<String> = c
                    .span()
                    .map(|i| {
                        let s = &self.tokens[i].token.surface;
                        if c.head == Some(i) {
                            format!("*{s}*")
                        } else {
                            s.clone()
                        }
                    })
                    .collect();
                format!("{}[{}]", c.kind.label(), words.join(" "))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Segments a tagged sentence into chunks.
///
/// * NP: a run of determiners, adjectives, numbers and nouns holding at least
///   one noun; a determiner that follows a noun or number opens a new NP.
///   The head is the rightmost noun.
/// * VP: a maximal run of verbs and adverbs.
/// * PP: a preposition immediately followed by an NP.
/// * OTHER: each remaining token on its own.
pub fn chunk(tagged: Vec<TaggedToken>) -> ChunkedSentence {
    let n = tagged.len();
    let mut chunks: Vec<Chunk> = Vec::new();
    let mut i = 0;
    while i < n {
        let tag = tagged[i].tag;
        if tag.is_nominal_part() {
            let mut j = i + 1;
            while j < n && tagged[j].tag.is_nominal_part() {
                let splits = tagged[j].tag == Tag::Determiner && matches!(tagged[j - 1].tag, Tag::Noun | Tag::Number);
                if splits {
                    break;
                }
                j += 1;
            }
            match (i..j).rev().find(|&k| tagged[k].tag == Tag::Noun) {
                Some(head) => {
                    chunks.push(Chunk { kind: ChunkKind::NounPhrase, start: i, end: j, head: Some(head), object: None })
                }
                None => chunks.extend((i..j).map(other)),
            }
            i = j;
        } else if matches!(tag, Tag::Verb | Tag::Adverb) {
            let mut j = i + 1;
            while j < n && matches!(tagged[j].tag, Tag::Verb | Tag::Adverb) {
                j += 1;
            }
            chunks.push(Chunk { kind: ChunkKind::VerbPhrase, start: i, end: j, head: None, object: None });
            i = j;
        } else {
            chunks.push(other(i));
            i += 1;
        }
    }

    for k in 0..chunks.len() {
        let c = &chunks[k];
        let is_prep = c.kind == ChunkKind::Other && tagged[c.start].tag == Tag::Preposition;
        if is_prep && chunks.get(k + 1).is_some_and(|next| next.kind == ChunkKind::NounPhrase) {
            chunks[k].kind = ChunkKind::PrepPhrase;
            chunks[k].object = Some(k + 1);
        }
    }

    ChunkedSentence { sentence: 0, tokens: tagged, chunks }
}

fn other(i: usize) -> Chunk {
    Chunk { kind: ChunkKind::Other, start: i, end: i + 1, head: None, object: None }
}

/// The rightmost noun-tagged token of a noun phrase.
pub fn head_noun<'a>(c: &Chunk, tokens: &'a [TaggedToken]) -> Result<&'a TaggedToken, ParseError> {
    if c.kind != ChunkKind::NounPhrase {
        return Err(ParseError::NotNounPhrase(c.kind));
    }
    c.span().rev().map(|i| &tokens[i]).find(|t| t.tag == Tag::Noun).ok_or(ParseError::NotNounPhrase(c.kind))
}

/// Tags and chunks a token list in one step.
pub fn parse_tokens(tokens: &[Token], lex: &PosLexicon) -> ChunkedSentence {
    chunk(tag_tokens(tokens, lex))
}

/// Tags and chunks one sentence of a corpus index.
pub fn parse_sentence(index: &CorpusIndex, id: SentenceId, lex: &PosLexicon) -> ChunkedSentence {
    let mut cs = parse_tokens(&index.sentence(id).tokens, lex);
    cs.sentence = id;
    cs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{tokenize, TokenizerConfig};

    fn parse(text: &str) -> ChunkedSentence {
        parse_tokens(&tokenize(text, &TokenizerConfig::default()), &PosLexicon::demo())
    }

    #[test]
    fn unknown_words_are_nouns() {
        let lex = PosLexicon::demo();
        assert_eq!(tag_token(&Token::new("Zzyzx", 0), &lex), Tag::Noun);
        assert_eq!(tag_token(&Token::new("the", 0), &lex), Tag::Determiner);
        assert_eq!(tag_token(&Token::new("2,000", 0), &lex), Tag::Number);
        assert_eq!(tag_token(&Token::new(",", 0), &lex), Tag::Punctuation);
    }

    #[test]
    fn first_listed_tag_wins() {
        let loaded = PosLexicon::parse("fire\tverb,noun\nfire\tnoun\n").unwrap();
        assert_eq!(loaded.warnings.len(), 1);
        assert_eq!(tag_token(&Token::new("Fire", 0), &loaded.lexicon), Tag::Verb);
    }

    #[test]
    fn lexicon_errors_name_the_line() {
        let err = PosLexicon::parse("# c\ngun\tnoun\nrifle noun\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = PosLexicon::parse("gun\tthing\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn appositive_is_two_noun_phrases() {
        assert_eq!(
            parse("the stallion , a white Arabian").render(),
            "NP[the *stallion*] OTHER[,] NP[a white *Arabian*]"
        );
    }

    #[test]
    fn weapons_sentence_chunks() {
        assert_eq!(
            parse("I bought an AK-47 gun and an M-16 rifle").render(),
            "NP[*I*] VP[bought] NP[an AK-47 *gun*] OTHER[and] NP[an M-16 *rifle*]"
        );
    }

    #[test]
    fn all_verb_sentence() {
        let cs = parse("was fired");
        assert_eq!(cs.render(), "VP[was fired]");
        assert_eq!(cs.heads().count(), 0);
    }

    #[test]
    fn prepositional_phrase_keeps_object_np() {
        let cs = parse("troops with rifles");
        assert_eq!(cs.render(), "NP[*troops*] PP[with] NP[*rifles*]");
        assert_eq!(cs.chunks[1].object, Some(2));
    }

    #[test]
    fn determiner_after_noun_starts_new_np() {
        assert_eq!(parse("gave the soldiers the rifles").render(), "VP[gave] NP[the *soldiers*] NP[the *rifles*]");
    }

    #[test]
    fn head_noun_rules() {
        let cs = parse("an AK-47 gun");
        assert_eq!(cs.head_noun(&cs.chunks[0]).unwrap().token.surface, "gun");
        let cs = parse("tuna fish");
        assert_eq!(cs.head_noun(&cs.chunks[0]).unwrap().token.surface, "fish");
        let cs = parse("oil");
        assert_eq!(cs.head_noun(&cs.chunks[0]).unwrap().token.surface, "oil");
    }

    #[test]
    fn head_noun_rejects_other_chunks() {
        let cs = parse("was fired");
        assert!(matches!(cs.head_noun(&cs.chunks[0]), Err(ParseError::NotNounPhrase(ChunkKind::VerbPhrase))));
    }

    #[test]
    fn number_only_run_is_not_an_np() {
        assert_eq!(parse("fired 2,000 .").render(), "VP[fired] OTHER[2,000] OTHER[.]");
    }

    #[test]
    fn tag_names_round_trip() {
        for tag in Tag::ALL {
            assert_eq!(tag.as_str().parse::<Tag>().unwrap(), tag);
        }
    }
}
