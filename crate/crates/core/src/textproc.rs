//! Tokenization, sentence splitting, the declarative-sentence filter and
//! n-gram counting.
//!
//! Every function here is pure. Tokens are lowercase runs of letters, digits
//! and apostrophes; URLs are dropped and the `#`/`@` prefix of tags falls away
//! with the other separators, leaving the tag body as an ordinary token.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A single normalized word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Token(String);

impl Token {
    /// Wraps `text` without normalizing it. Use [`tokenize`] for raw text.
    pub fn new(text: impl Into<String>) -> Self {
        Token(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when every character is alphabetic.
    pub fn is_alphabetic(&self) -> bool {
        self.0.chars().all(char::is_alphabetic)
    }

    pub fn is_ascii(&self) -> bool {
        self.0.is_ascii()
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Token {
    fn from(s: &str) -> Self {
        Token(s.to_string())
    }
}

/// Reduces a word to its stem. Implemented outside this crate.
pub trait Stemmer: Send + Sync {
    fn stem(&self, word: &str) -> String;
}

/// Optional token filters. Both are off by default.
#[derive(Clone, Default)]
pub struct TokenizerConfig {
    pub stopwords: Option<Arc<BTreeSet<String>>>,
    pub stemmer: Option<Arc<dyn Stemmer>>,
}

impl fmt::Debug for TokenizerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TokenizerConfig")
            .field("stopwords", &self.stopwords.as_ref().map(|s| s.len()))
            .field("stemmer", &self.stemmer.is_some())
            .finish()
    }
}

const STOPWORDS: &str = include_str!("stopwords.txt");

/// The bundled English stopword list (147 words).
pub fn default_stopwords() -> BTreeSet<String> {
    parse_stopwords(STOPWORDS)
}

/// Parses a stopword list: one word per line, `#` starts a comment.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn is_url(chunk: &str) -> bool {
    let lower = chunk.trim_start_matches(|c: char| !c.is_alphanumeric());
    let head: String = lower.chars().take(8).flat_map(char::to_lowercase).collect();
    head.starts_with("http://") || head.starts_with("https://")
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

/// Splits raw text into normalized tokens.
pub fn tokenize(raw: &str, cfg: &TokenizerConfig) -> Vec<Token> {
    let mut out = Vec::new();
    for chunk in raw.split_whitespace() {
        if is_url(chunk) {
            continue;
        }
        let lowered: String = chunk
            .chars()
            .map(|c| if c == '\u{2019}' { '\'' } else { c })
            .flat_map(char::to_lowercase)
            .collect();
        for piece in lowered.split(|c: char| !is_token_char(c)) {
            let word = piece.trim_matches('\'');
            if word.is_empty() {
                continue;
            }
            if let Some(stop) = &cfg.stopwords {
                if stop.contains(word) {
                    continue;
                }
            }
            let word = match &cfg.stemmer {
                Some(stemmer) => stemmer.stem(word),
                None => word.to_string(),
            };
            if !word.is_empty() {
                out.push(Token(word));
            }
        }
    }
    out
}

/// Multiset of n-grams of a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramCounts {
    order: usize,
    counts: BTreeMap<Vec<Token>, u32>,
    total: u32,
}

impl NGramCounts {
    /// An empty table of the given order.
    pub fn empty(order: usize) -> Self {
        assert!(order >= 1, "n-gram order must be at least 1");
        NGramCounts {
            order,
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    /// Builds a table from explicit counts, dropping zero entries.
    pub fn from_counts<I>(order: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Token>, u32)>,
    {
        let mut table = NGramCounts::empty(order);
        for (gram, count) in entries {
            if gram.len() != order {
                return Err(Error::OrderMismatch {
                    left: order,
                    right: gram.len(),
                });
            }
            table.add(gram, count);
        }
        Ok(table)
    }

    fn add(&mut self, gram: Vec<Token>, count: u32) {
        if count == 0 {
            return;
        }
        *self.counts.entry(gram).or_insert(0) += count;
        self.total += count;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Count of one n-gram, 0 when absent.
    pub fn get(&self, gram: &[Token]) -> u32 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Token], u32)> + '_ {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Number of distinct n-grams.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Adds every occurrence of `other` into `self`.
    pub fn merge(&mut self, other: &NGramCounts) -> Result<()> {
        if other.order != self.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        for (gram, count) in other.iter() {
            self.add(gram.to_vec(), count);
        }
        Ok(())
    }

    /// Sum of several tables of the same order.
    pub fn sum<'a, I>(order: usize, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a NGramCounts>,
    {
        let mut acc = NGramCounts::empty(order);
        for part in parts {
            acc.merge(part)?;
        }
        Ok(acc)
    }
}

/// Counts every contiguous window of `order` tokens.
///
/// # Panics
///
/// Panics if `order` is 0.
pub fn ngram_counts(tokens: &[Token], order: usize) -> NGramCounts {
    let mut table = NGramCounts::empty(order);
    if tokens.len() >= order {
        for window in tokens.windows(order) {
            table.add(window.to_vec(), 1);
        }
    }
    table
}

/// Replaces `…` and runs of two or more periods by a single period.
pub fn normalize_ellipses(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\u{2026}' => {
                out.push('.');
                while matches!(chars.peek(), Some('.') | Some('\u{2026}')) {
                    chars.next();
                }
            }
            '.' if matches!(chars.peek(), Some('.') | Some('\u{2026}')) => {
                out.push('.');
                while matches!(chars.peek(), Some('.') | Some('\u{2026}')) {
                    chars.next();
                }
            }
            _ => out.push(c),
        }
    }
    out
}

const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "gen", "gov", "sen", "rep", "lt", "col",
    "capt", "sgt", "mt", "no", "vs", "inc", "ltd", "co", "corp", "jan", "feb", "mar", "apr", "jun",
    "jul", "aug", "sep", "sept", "oct", "nov", "dec", "e.g", "i.e", "approx", "dept", "est", "fig",
];

fn is_closing(c: char) -> bool {
    matches!(
        c,
        '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}' | '\u{bb}'
    )
}

fn is_opening(c: char) -> bool {
    matches!(
        c,
        '"' | '\'' | '(' | '[' | '\u{201c}' | '\u{2018}' | '\u{ab}'
    )
}

/// True when the word ending right before a period is an abbreviation or an
/// initial, so the period does not end the sentence.
fn is_abbreviation(word: &str) -> bool {
    let word = word.trim_start_matches(|c: char| is_opening(c) || c == '(');
    if word.is_empty() {
        return false;
    }
    let mut letters = word.chars().filter(|c| c.is_alphabetic());
    let first = letters.next();
    // Initials: "J." and dotted acronyms such as "U.S." (word excludes the final period).
    if word.chars().count() == 1 && first.is_some_and(char::is_uppercase) {
        return true;
    }
    if word.contains('.')
        && word
            .split('.')
            .all(|part| part.chars().count() == 1 && part.chars().all(char::is_alphabetic))
    {
        return true;
    }
    let lower = word.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
}

/// Splits a text body into sentences.
///
/// A boundary is a run of `.`, `!` or `?` (optionally followed by closing
/// quotes or brackets) that is followed by whitespace and an uppercase
/// letter, or by the end of the text. Periods after known abbreviations and
/// initials are not boundaries.
pub fn split_sentences(body: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = body.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !matches!(c, '.' | '!' | '?') {
            i += 1;
            continue;
        }
        let mut j = i;
        let mut only_period = true;
        while j < chars.len() && matches!(chars[j].1, '.' | '!' | '?') {
            only_period &= chars[j].1 == '.';
            j += 1;
        }
        while j < chars.len() && is_closing(chars[j].1) {
            j += 1;
        }
        let end = chars.get(j).map_or(body.len(), |&(p, _)| p);
        let boundary = if j == chars.len() {
            true
        } else if chars[j].1.is_whitespace() {
            let mut k = j;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            while k < chars.len() && is_opening(chars[k].1) {
                k += 1;
            }
            k == chars.len() || chars[k].1.is_uppercase()
        } else {
            false
        };
        let guarded = boundary && only_period && j - i == 1 && j < chars.len() && {
            let word_start = body[..pos].rfind(char::is_whitespace).map_or(0, |w| w + 1);
            is_abbreviation(&body[word_start..pos])
        };
        if boundary && !guarded {
            let sentence = body[start..end].trim();
            if !sentence.is_empty() {
                out.push(sentence.to_string());
            }
            start = end;
        }
        i = j.max(i + 1);
    }
    let tail = body[start..].trim();
    if !tail.is_empty() {
        out.push(tail.to_string());
    }
    out
}

/// Stable identifier of a candidate sentence within one cluster. Smaller ids
/// come first in document order and win every tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SentenceId(pub u32);

impl fmt::Display for SentenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Where a candidate sentence comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Document,
    Tweet,
}

/// One candidate summary sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub id: SentenceId,
    pub origin: Origin,
    /// Identifier of the document or tweet the sentence was taken from.
    pub source: String,
    pub raw: String,
    pub tokens: Vec<Token>,
    pub word_length: usize,
    pub declarative: bool,
}

impl SentenceRecord {
    /// Tokenizes `raw` and evaluates the declarative filter.
    pub fn new(
        id: SentenceId,
        origin: Origin,
        source: impl Into<String>,
        raw: impl Into<String>,
        cfg: &TokenizerConfig,
    ) -> Self {
        let raw = raw.into();
        let tokens = tokenize(&raw, cfg);
        Self::with_tokens(id, origin, source, raw, tokens)
    }

    /// Uses tokens produced elsewhere (for example cleaned tweet tokens).
    pub fn with_tokens(
        id: SentenceId,
        origin: Origin,
        source: impl Into<String>,
        raw: impl Into<String>,
        tokens: Vec<Token>,
    ) -> Self {
        let mut record = SentenceRecord {
            id,
            origin,
            source: source.into(),
            raw: raw.into(),
            word_length: tokens.len(),
            tokens,
            declarative: false,
        };
        record.declarative = is_declarative(&record);
        record
    }
}

/// Minimum token count of a declarative sentence.
pub const MIN_DECLARATIVE_TOKENS: usize = 5;

/// Statement-form heuristic used to admit candidate summary sentences.
///
/// Rejects questions, exclamations, text without a final period, sentences
/// under five tokens, and sentences where more than half of the tokens are
/// not purely alphabetic.
pub fn is_declarative(s: &SentenceRecord) -> bool {
    let normalized = normalize_ellipses(s.raw.trim());
    let stripped = normalized.trim_end_matches(|c: char| is_closing(c) || c.is_whitespace());
    if stripped.ends_with('?') || stripped.ends_with('!') || !stripped.ends_with('.') {
        return false;
    }
    if s.tokens.len() < MIN_DECLARATIVE_TOKENS {
        return false;
    }
    let non_alpha = s.tokens.iter().filter(|t| !t.is_alphabetic()).count();
    // non_alpha / len > 1/2
    2 * non_alpha <= s.tokens.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn toks(words: &[&str]) -> Vec<Token> {
        words.iter().map(|w| Token::from(*w)).collect()
    }

    fn tok(raw: &str) -> Vec<String> {
        tokenize(raw, &TokenizerConfig::default())
            .into_iter()
            .map(|t| t.0)
            .collect()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tok("Police have released a sketch"),
            ["police", "have", "released", "a", "sketch"]
        );
        assert!(tok("").is_empty());
        assert_eq!(
            tok("How #GreeceCrisis drowned an industry http://t.co/FXGTUY3IBq"),
            ["how", "greececrisis", "drowned", "an", "industry"]
        );
    }

    #[test]
    fn tokenize_keeps_apostrophes_and_tag_bodies() {
        assert_eq!(tok("Don't @georgikantchev"), ["don't", "georgikantchev"]);
        assert_eq!(tok("Greece\u{2019}s fish"), ["greece's", "fish"]);
        assert_eq!(tok("'quoted' (HTTPS://x.y/z)"), ["quoted"]);
        assert_eq!(
            tok("state-of-the-art 3.5%"),
            ["state", "of", "the", "art", "3", "5"]
        );
    }

    #[test]
    fn tokenize_filters() {
        struct Chop;
        impl Stemmer for Chop {
            fn stem(&self, word: &str) -> String {
                word.trim_end_matches('s').to_string()
            }
        }
        let cfg = TokenizerConfig {
            stopwords: Some(Arc::new(default_stopwords())),
            stemmer: Some(Arc::new(Chop)),
        };
        let out: Vec<String> = tokenize("The cats are on the mats", &cfg)
            .into_iter()
            .map(|t| t.0)
            .collect();
        assert_eq!(out, ["cat", "mat"]);
    }

    #[test]
    fn ngram_examples() {
        let t = ngram_counts(&toks(&["a", "b", "a", "b"]), 2);
        assert_eq!(t.total(), 3);
        assert_eq!(t.get(&toks(&["a", "b"])), 2);
        assert_eq!(t.get(&toks(&["b", "a"])), 1);
        assert_eq!(t.distinct(), 2);

        let t = ngram_counts(&toks(&["a"]), 2);
        assert_eq!(t.total(), 0);
        assert!(t.is_empty());

        let t = ngram_counts(&toks(&["a", "a", "a"]), 1);
        assert_eq!(t.total(), 3);
        assert_eq!(t.get(&toks(&["a"])), 3);
    }

    #[test]
    fn from_counts_rejects_wrong_width() {
        let err = NGramCounts::from_counts(2, vec![(toks(&["a"]), 1)]).unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 2, right: 1 });
        let t = NGramCounts::from_counts(1, vec![(toks(&["a"]), 0)]).unwrap();
        assert_eq!(t.distinct(), 0);
    }

    #[test]
    fn merge_checks_order() {
        let mut a = ngram_counts(&toks(&["x", "y"]), 1);
        let b = ngram_counts(&toks(&["x", "y"]), 2);
        assert!(a.merge(&b).is_err());
        a.merge(&ngram_counts(&toks(&["x"]), 1)).unwrap();
        assert_eq!(a.get(&toks(&["x"])), 2);
        assert_eq!(a.total(), 3);
    }

    #[test]
    fn split_examples() {
        assert_eq!(
            split_sentences("A man left. He ran."),
            ["A man left.", "He ran."]
        );
        assert_eq!(split_sentences("He met Dr. Smith."), ["He met Dr. Smith."]);
        assert!(split_sentences("").is_empty());
        assert!(split_sentences("   ").is_empty());
    }

    #[test]
    fn split_guards() {
        assert_eq!(
            split_sentences("The U.S. Senate voted. J. R. Smith agreed!  Why? \"Because.\" Done"),
            [
                "The U.S. Senate voted.",
                "J. R. Smith agreed!",
                "Why?",
                "\"Because.\"",
                "Done"
            ]
        );
        assert_eq!(
            split_sentences("Pi is 3.14 today. ok."),
            ["Pi is 3.14 today. ok."]
        );
        assert_eq!(
            split_sentences("Wait... What happened?"),
            ["Wait...", "What happened?"]
        );
    }

    #[test]
    fn ellipses() {
        assert_eq!(normalize_ellipses("familiar..."), "familiar.");
        assert_eq!(normalize_ellipses("so\u{2026} yes.."), "so. yes.");
        assert_eq!(normalize_ellipses("a.b"), "a.b");
    }

    fn sentence(raw: &str) -> SentenceRecord {
        SentenceRecord::new(
            SentenceId(0),
            Origin::Document,
            "d",
            raw,
            &TokenizerConfig::default(),
        )
    }

    #[test]
    fn declarative_examples() {
        assert!(sentence("Hmm, this face looks a bit familiar...").declarative);
        assert!(!sentence("Who did this?").declarative);
        assert!(
            !sentence("A fish tale: How #GreeceCrisis drowned an industry and a way of life")
                .declarative
        );
        assert!(!sentence("They did it anyway!").declarative);
        assert!(!sentence("Too short here.").declarative);
        assert!(!sentence("In 2015 1 2 3 4 happened.").declarative);
        assert!(sentence("He said \"the plan will work.\"").declarative);
    }

    fn word() -> impl Strategy<Value = String> {
        proptest::string::string_regex("[A-Za-z0-9'#@.,!?:;é-]{1,8}").unwrap()
    }

    proptest! {
        #[test]
        fn tokenize_is_idempotent(words in proptest::collection::vec(word(), 0..12)) {
            let raw = words.join(" ");
            let once = tokenize(&raw, &TokenizerConfig::default());
            let joined = once.iter().map(Token::as_str).collect::<Vec<_>>().join(" ");
            let twice = tokenize(&joined, &TokenizerConfig::default());
            prop_assert_eq!(&once, &twice);
            for t in &once {
                prop_assert!(!t.as_str().is_empty());
                prop_assert!(!t.as_str().chars().any(|c| c.is_uppercase() || c.is_whitespace()));
            }
        }

        #[test]
        fn ngram_totals(words in proptest::collection::vec("[abc]", 0..20), order in 1usize..4) {
            let tokens: Vec<Token> = words.iter().map(|w| Token::from(w.as_str())).collect();
            let t = ngram_counts(&tokens, order);
            let sum: u32 = t.iter().map(|(_, c)| c).sum();
            prop_assert_eq!(sum, t.total());
            prop_assert!(t.iter().all(|(g, c)| c > 0 && g.len() == order));
            if tokens.len() >= order {
                prop_assert_eq!(t.total() as usize + order - 1, tokens.len());
            } else {
                prop_assert_eq!(t.total(), 0);
            }
        }

        #[test]
        fn split_preserves_text(body in "[A-Za-z .!?\"']{0,60}") {
            let parts = split_sentences(&body);
            prop_assert!(parts.iter().all(|p| !p.is_empty()));
            let kept: String = parts.concat().chars().filter(|c| !c.is_whitespace()).collect();
            let orig: String = body.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(kept, orig);
        }
    }
}
