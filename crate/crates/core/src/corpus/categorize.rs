use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{DocumentRecord, TweetRecord};
use crate::defaults::ABSTRACTION_OVERLAP;

/// How a linked tweet relates to the text of the documents it links to.
/// Variants are listed in priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TweetType {
    /// The tweet is a contiguous span of a document sentence.
    Extraction,
    /// Every tweet token occurs in one document sentence, with multiplicity.
    Compression,
    /// Most tweet word types occur in one document, spread over sentences.
    Abstraction,
    Other,
}

impl TweetType {
    pub const ALL: [TweetType; 4] = [
        TweetType::Extraction,
        TweetType::Compression,
        TweetType::Abstraction,
        TweetType::Other,
    ];
}

/// Per-type tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCounts {
    pub extraction: usize,
    pub compression: usize,
    pub abstraction: usize,
    pub other: usize,
}

impl TypeCounts {
    pub fn add(&mut self, t: TweetType) {
        *self.slot(t) += 1;
    }

    pub fn get(&self, t: TweetType) -> usize {
        match t {
            TweetType::Extraction => self.extraction,
            TweetType::Compression => self.compression,
            TweetType::Abstraction => self.abstraction,
            TweetType::Other => self.other,
        }
    }

    fn slot(&mut self, t: TweetType) -> &mut usize {
        match t {
            TweetType::Extraction => &mut self.extraction,
            TweetType::Compression => &mut self.compression,
            TweetType::Abstraction => &mut self.abstraction,
            TweetType::Other => &mut self.other,
        }
    }

    pub fn total(&self) -> usize {
        self.extraction + self.compression + self.abstraction + self.other
    }

    pub fn merge(&mut self, other: &TypeCounts) {
        for t in TweetType::ALL {
            *self.slot(t) += other.get(t);
        }
    }

    /// Share of `t` among all tallied tweets, 0 when empty.
    pub fn fraction(&self, t: TweetType) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.get(t) as f64 / n as f64,
        }
    }
}

/// `bangkok's` and `bangkok` compare equal.
fn normalize(token: &str) -> &str {
    token
        .strip_suffix("'s")
        .filter(|s| !s.is_empty())
        .unwrap_or(token)
}

fn words<'a>(tokens: impl IntoIterator<Item = &'a crate::textproc::Token>) -> Vec<&'a str> {
    tokens.into_iter().map(|t| normalize(t.as_str())).collect()
}

fn multiset<'a>(words: &[&'a str]) -> BTreeMap<&'a str, usize> {
    let mut m = BTreeMap::new();
    for w in words {
        *m.entry(*w).or_insert(0) += 1;
    }
    m
}

fn contains_span(sentence: &[&str], tweet: &[&str]) -> bool {
    sentence.windows(tweet.len()).any(|w| w == tweet)
}

fn contains_multiset(sentence: &BTreeMap<&str, usize>, tweet: &BTreeMap<&str, usize>) -> bool {
    tweet
        .iter()
        .all(|(w, n)| sentence.get(w).is_some_and(|m| m >= n))
}

fn categorize_against(tweet: &[&str], doc: &DocumentRecord) -> TweetType {
    let sentences: Vec<Vec<&str>> = doc.sentences.iter().map(|s| words(&s.tokens)).collect();
    if sentences.iter().any(|s| contains_span(s, tweet)) {
        return TweetType::Extraction;
    }
    let wanted = multiset(tweet);
    let bags: Vec<BTreeMap<&str, usize>> = sentences.iter().map(|s| multiset(s)).collect();
    if bags.iter().any(|b| contains_multiset(b, &wanted)) {
        return TweetType::Compression;
    }
    let types: BTreeSet<&str> = tweet.iter().copied().collect();
    let matched: BTreeSet<&str> = types
        .iter()
        .copied()
        .filter(|w| bags.iter().any(|b| b.contains_key(w)))
        .collect();
    let (p, q) = ABSTRACTION_OVERLAP;
    // matched / types > p / q, and no single sentence holds every match
    let overlap = matched.len() as u64 * q > types.len() as u64 * p;
    let spread = !bags
        .iter()
        .any(|b| matched.iter().all(|w| b.contains_key(w)));
    if overlap && spread {
        TweetType::Abstraction
    } else {
        TweetType::Other
    }
}

/// Types a tweet against the documents of its cluster, keeping the
/// highest-priority type reached by any single document.
pub fn categorize_tweet(tweet: &TweetRecord, docs: &[DocumentRecord]) -> TweetType {
    let tokens = words(&tweet.tokens);
    if tokens.is_empty() {
        return TweetType::Other;
    }
    docs.iter()
        .map(|d| categorize_against(&tokens, d))
        .min()
        .unwrap_or(TweetType::Other)
}
