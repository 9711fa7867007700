//! Synthetic corpora for property and acceptance tests.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seedlex::bootstrap::SeedFlags;
use seedlex::{BootstrapConfig, NumberFilter, RankedList, Rating, RunStatus, Score, ScoredWord, SeedList};

pub const PLANTED: [&str; 12] = [
    "rifle", "pistol", "grenade", "mortar", "carbine", "revolver", "bazooka", "musket", "cannon", "howitzer",
    "shotgun", "crossbow",
];

pub const PLANTED_SEEDS: [&str; 5] = ["rifle", "pistol", "grenade", "mortar", "carbine"];

const DISTRACTORS: [&str; 16] = [
    "village", "river", "mayor", "church", "market", "school", "road", "farmer", "teacher", "doctor", "bridge",
    "house", "morning", "week", "city", "festival",
];

const VERBS: [&str; 8] = ["saw", "found", "carried", "seized", "bought", "sold", "hid", "used"];
const ADJECTIVES: [&str; 4] = ["old", "new", "small", "heavy"];

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn sentence(words: &[String]) -> String {
    let mut out = capitalize(&words[0]);
    for w in &words[1..] {
        if w == "," || w == "." {
            out.push_str(w);
        } else {
            out.push(' ');
            out.push_str(w);
        }
    }
    out
}

/// Pseudo-words for background narrative; each is rare enough to fall
/// under the default frequency cut.
fn rare_nouns() -> Vec<String> {
    let onsets = ["b", "d", "f", "g", "k", "l", "m", "p", "s", "t", "v", "z"];
    let nuclei = ["a", "e", "i", "o", "u"];
    let codas = ["ran", "mel", "dok", "sin", "tup", "ler"];
    let mut out = Vec::new();
    for o in onsets {
        for n in nuclei {
            for c in codas {
                out.push(format!("{o}{n}{c}"));
            }
        }
    }
    out
}

/// Documents in which the twelve planted words cluster in conjunctions,
/// lists, appositives and compounds. Background text mixes frequent
/// distractor nouns (which touch a planted word only occasionally) with
/// multi-noun narrative over a large pool of rare words.
pub fn planted_corpus(seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rare = rare_nouns();
    let mut docs = Vec::new();
    for _ in 0..30 {
        let mut sents = Vec::new();
        for _ in 0..14 {
            let p = |rng: &mut ChaCha8Rng| PLANTED.choose(rng).unwrap().to_string();
            let d = |rng: &mut ChaCha8Rng| DISTRACTORS.choose(rng).unwrap().to_string();
            let r = |rng: &mut ChaCha8Rng| rare.choose(rng).unwrap().to_string();
            let v = |rng: &mut ChaCha8Rng| VERBS.choose(rng).unwrap().to_string();
            let a = |rng: &mut ChaCha8Rng| ADJECTIVES.choose(rng).unwrap().to_string();
            let words: Vec<String> = match rng.random_range(0..12) {
                // conjunction
                0 => vec![
                    "they".into(),
                    v(&mut rng),
                    "a".into(),
                    p(&mut rng),
                    "and".into(),
                    "a".into(),
                    p(&mut rng),
                    ".".into(),
                ],
                // list
                1 => vec![
                    "they".into(),
                    v(&mut rng),
                    p(&mut rng),
                    ",".into(),
                    p(&mut rng),
                    ",".into(),
                    "and".into(),
                    p(&mut rng),
                    ".".into(),
                ],
                // appositive
                2 => vec![
                    "the".into(),
                    p(&mut rng),
                    ",".into(),
                    "a".into(),
                    a(&mut rng),
                    p(&mut rng),
                    ",".into(),
                    "was".into(),
                    "found".into(),
                    ".".into(),
                ],
                // nominal compound
                3 => vec!["a".into(), p(&mut rng), p(&mut rng), "was".into(), v(&mut rng), ".".into()],
                // a frequent distractor next to a planted word
                4 => vec!["the".into(), d(&mut rng), v(&mut rng), "a".into(), p(&mut rng), ".".into()],
                5 | 6 => vec!["they".into(), v(&mut rng), "the".into(), d(&mut rng), ".".into()],
                _ => vec![
                    "the".into(),
                    r(&mut rng),
                    v(&mut rng),
                    "the".into(),
                    r(&mut rng),
                    "near".into(),
                    "the".into(),
                    r(&mut rng),
                    ".".into(),
                ],
            };
            sents.push(sentence(&words));
        }
        docs.push(sents.join(" "));
    }
    docs
}

/// A small random corpus over a mixed vocabulary, plus seeds and a config,
/// for oracle-equivalence checks.
pub struct RandomCase {
    pub texts: Vec<String>,
    pub seeds: Vec<String>,
    pub config: BootstrapConfig,
}

pub fn random_case(seed: u64) -> RandomCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_nouns = rng.random_range(6..30);
    let nouns: Vec<String> = (0..n_nouns).map(|i| format!("n{i}")).collect();
    let fillers = [
        "the", "a", "big", "old", "saw", "bought", "with", "of", "and", ",", "very", "2,000", "17", "3.5", "he",
        "Those",
    ];
    let n_sents = rng.random_range(1..=200);
    let mut texts = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for _ in 0..n_sents {
        let len = rng.random_range(1..12);
        let mut words = Vec::new();
        for _ in 0..len {
            let w = if rng.random_bool(0.5) {
                let n = nouns.choose(&mut rng).unwrap().clone();
                if rng.random_bool(0.1) {
                    n.to_uppercase()
                } else {
                    n
                }
            } else {
                fillers.choose(&mut rng).unwrap().to_string()
            };
            words.push(w);
        }
        words.push(".".into());
        current.push(sentence(&words));
        if rng.random_bool(0.1) {
            texts.push(current.join(" "));
            current.clear();
        }
    }
    if !current.is_empty() {
        texts.push(current.join(" "));
    }
    let n_seeds = rng.random_range(1..=5).min(nouns.len());
    let seeds = nouns.choose_multiple(&mut rng, n_seeds).cloned().collect();
    let mut config = BootstrapConfig {
        iterations: rng.random_range(1..=8),
        promote_per_iteration: rng.random_range(0..=5),
        min_corpus_freq: rng.random_range(0..=5),
        number_filter: if rng.random_bool(0.5) { NumberFilter::Strict } else { NumberFilter::PaperFaithful },
        freq_nouns_only: rng.random_bool(0.2),
        ..BootstrapConfig::default()
    };
    if rng.random_bool(0.3) {
        config.stoplist.insert(nouns[0].clone());
    }
    RandomCase { texts, seeds, config }
}

/// Two judges rate every word; zeros sometimes carry an override.
pub fn random_ratings(seed: u64, category: &str, words: &[String]) -> Vec<Rating> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for w in words {
        for judge in ["j1", "j2"] {
            let value = rng.random_range(0..=5);
            let override_value = (value == 0 && rng.random_bool(0.5)).then(|| rng.random_range(1..=5));
            out.push(Rating {
                word: w.clone(),
                category: category.into(),
                judge_id: judge.into(),
                value,
                override_value,
            });
        }
    }
    out
}

/// A ranking with the given words in order and placeholder statistics.
pub fn ranking_of(category: &str, words: &[String]) -> RankedList {
    RankedList {
        run_id: "run-test".into(),
        category: category.into(),
        status: RunStatus::Completed,
        config: BootstrapConfig::default(),
        seeds: SeedList::new(category, ["seed"]),
        iterations: Vec::new(),
        words: words
            .iter()
            .map(|w| ScoredWord {
                word: w.clone(),
                display: w.clone(),
                window_count: 1,
                corpus_freq: 6,
                score: Score::new(1, 6),
                flags: SeedFlags::default(),
            })
            .collect(),
    }
}
