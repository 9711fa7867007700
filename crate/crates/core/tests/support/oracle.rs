//! Naive reimplementation of the bootstrapping loop.
//!
//! Shares only tokenization and dictionary tagging with the library. Head
//! detection, sentence selection, frequency counting, window extraction,
//! scoring, filtering, sorting and decimal rendering are all redone here
//! with linear scans and no indexes.

use regex::Regex;
use seedlex::corpus::normalize;
use seedlex::parser::tag_token;
use seedlex::{BootstrapConfig, CorpusIndex, NumberFilter, PosLexicon, Rating, Tag};

pub struct OracleRun {
    pub tsv: String,
    pub promoted: Vec<Vec<String>>,
    pub terminated_early: bool,
}

struct Tagged {
    norm: String,
    surface: String,
    tag: Tag,
}

fn is_head(sent: &[Tagged], i: usize) -> bool {
    if sent[i].tag != Tag::Noun {
        return false;
    }
    let nominal = |t: Tag| matches!(t, Tag::Determiner | Tag::Adjective | Tag::Number | Tag::Noun);
    let mut j = i + 1;
    while j < sent.len() {
        let t = sent[j].tag;
        if !nominal(t) {
            break;
        }
        if t == Tag::Determiner && matches!(sent[j - 1].tag, Tag::Noun | Tag::Number) {
            break;
        }
        if t == Tag::Noun {
            return false;
        }
        j += 1;
    }
    true
}

fn is_filler(t: Tag) -> bool {
    t == Tag::Noun || t == Tag::Number
}

/// `num / den` to six places, rounding half up, by long division.
fn decimal6(num: u64, den: u64) -> String {
    let int = num / den;
    let mut rem = num % den;
    let mut digits = Vec::new();
    for _ in 0..7 {
        rem *= 10;
        digits.push((rem / den) as u8);
        rem %= den;
    }
    // seventh digit decides rounding; ties round up
    let round_up = digits[6] >= 5;
    digits.truncate(6);
    let mut int = int;
    if round_up {
        let mut k = 5usize;
        loop {
            if digits[k] == 9 {
                digits[k] = 0;
                if k == 0 {
                    int += 1;
                    break;
                }
                k -= 1;
            } else {
                digits[k] += 1;
                break;
            }
        }
    }
    let frac: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
    format!("{int}.{frac}")
}

pub fn naive_bootstrap(
    index: &CorpusIndex,
    category: &str,
    seeds: &[&str],
    lex: &PosLexicon,
    cfg: &BootstrapConfig,
) -> OracleRun {
    let strict = Regex::new(r"^[+-]?[0-9]([0-9,.]*[0-9])?$").unwrap();
    let plain = Regex::new(r"^[0-9]+$").unwrap();

    let corpus: Vec<Vec<Tagged>> = index
        .sentences()
        .iter()
        .map(|s| {
            s.tokens
                .iter()
                .map(|t| Tagged { norm: t.norm.clone(), surface: t.surface.clone(), tag: tag_token(t, lex) })
                .collect()
        })
        .collect();

    let freq = |w: &str| -> u64 {
        let mut n = 0;
        for sent in &corpus {
            for t in sent {
                if t.norm == w && (!cfg.freq_nouns_only || is_filler(t.tag)) {
                    n += 1;
                }
            }
        }
        n
    };
    let display = |w: &str| -> String {
        let mut forms: Vec<(String, u64)> = Vec::new();
        for sent in &corpus {
            for t in sent.iter().filter(|t| t.norm == w) {
                match forms.iter_mut().find(|(s, _)| *s == t.surface) {
                    Some(f) => f.1 += 1,
                    None => forms.push((t.surface.clone(), 1)),
                }
            }
        }
        let mut best: Option<(String, u64)> = None;
        for (s, n) in forms {
            let better = match &best {
                None => true,
                Some((bs, bn)) => n > *bn || (n == *bn && s < *bs),
            };
            if better {
                best = Some((s, n));
            }
        }
        best.map(|b| b.0).unwrap_or_else(|| w.to_string())
    };

    let mut original: Vec<String> = Vec::new();
    for s in seeds {
        let s = normalize(s);
        if !original.contains(&s) {
            original.push(s);
        }
    }
    let mut promoted: Vec<String> = Vec::new();
    let mut log = Vec::new();
    let mut last: Vec<(String, u64, u64)> = Vec::new();
    let mut terminated_early = false;

    for _ in 0..cfg.iterations {
        let is_seed =
            |w: &str, promoted: &Vec<String>| original.iter().any(|s| s == w) || promoted.iter().any(|s| s == w);
        let mut counts: Vec<(String, u64)> = Vec::new();
        let mut bump = |w: &str| match counts.iter_mut().find(|(x, _)| x == w) {
            Some(c) => c.1 += 1,
            None => counts.push((w.to_string(), 1)),
        };
        let mut windows = 0;
        for sent in &corpus {
            if !sent.iter().any(|t| is_seed(&t.norm, &promoted)) {
                continue;
            }
            for i in 0..sent.len() {
                if !is_head(sent, i) || !is_seed(&sent[i].norm, &promoted) {
                    continue;
                }
                windows += 1;
                if let Some(l) = (0..i).rev().find(|&j| is_filler(sent[j].tag)) {
                    bump(&sent[l].norm);
                }
                if let Some(r) = (i + 1..sent.len()).find(|&j| is_filler(sent[j].tag)) {
                    bump(&sent[r].norm);
                }
            }
        }
        if windows == 0 {
            terminated_early = true;
            break;
        }

        let mut cands: Vec<(String, u64, u64)> = Vec::new();
        for (w, c) in counts {
            let f = freq(&w);
            assert!(f > 0, "oracle saw a window word with zero frequency: {w}");
            let is_num = match cfg.number_filter {
                NumberFilter::Strict => strict.is_match(&w),
                NumberFilter::PaperFaithful => plain.is_match(&w),
            };
            if cfg.stoplist.contains(&w) || is_num || f <= cfg.min_corpus_freq {
                continue;
            }
            cands.push((w, c, f));
        }
        // selection sort
        for i in 0..cands.len() {
            let mut best = i;
            for j in i + 1..cands.len() {
                let (a, b) = (&cands[j], &cands[best]);
                let lhs = a.1 as u128 * b.2 as u128;
                let rhs = b.1 as u128 * a.2 as u128;
                let before = lhs > rhs || (lhs == rhs && (a.2 > b.2 || (a.2 == b.2 && a.0 < b.0)));
                if before {
                    best = j;
                }
            }
            cands.swap(i, best);
        }

        let mut added = Vec::new();
        for (w, _, _) in &cands {
            if added.len() == cfg.promote_per_iteration {
                break;
            }
            if !is_seed(w, &promoted) {
                promoted.push(w.clone());
                added.push(w.clone());
            }
        }
        log.push(added);
        last = cands;
    }

    let mut tsv = format!("# seedlex-ranking v1 run_id= category={category}\n");
    tsv.push_str("rank\tword\tscore\twindow_count\tcorpus_freq\tseed_flag\n");
    for (i, (w, c, f)) in last.iter().enumerate() {
        let flag = if original.contains(w) {
            "original"
        } else if promoted.contains(w) {
            "promoted"
        } else {
            "-"
        };
        tsv.push_str(&format!("{}\t{}\t{}\t{}\t{}\t{}\n", i + 1, display(w), decimal6(*c, *f), c, f, flag));
    }
    OracleRun { tsv, promoted: log, terminated_early }
}

#[test]
fn decimal_rendering() {
    assert_eq!(decimal6(2, 1), "2.000000");
    assert_eq!(decimal6(2, 3), "0.666667");
    assert_eq!(decimal6(1, 128), "0.007813");
    assert_eq!(decimal6(1999999, 2000000), "1.000000");
}

/// Acquisition curve by recounting each prefix from scratch: a word counts
/// when any judge's rating, after an override of a zero, reaches `threshold`.
/// `None` when some word in the prefix has no rating at all.
pub fn brute_force_curve(
    words: &[String],
    ratings: &[Rating],
    threshold: u8,
    step: usize,
) -> Option<Vec<(usize, usize)>> {
    let rated = |w: &String| ratings.iter().any(|r| &r.word == w);
    if !words.iter().all(rated) {
        return None;
    }
    let accepted = |w: &String| {
        ratings.iter().any(|r| {
            let v = if r.value == 0 { r.override_value.unwrap_or(0) } else { r.value };
            &r.word == w && v != 0 && v >= threshold
        })
    };
    let mut points = Vec::new();
    let mut k = step;
    while k <= words.len() {
        points.push((k, words[..k].iter().filter(|w| accepted(w)).count()));
        k += step;
    }
    Some(points)
}
