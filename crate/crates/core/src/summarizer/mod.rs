//! Supervised sentence-saliency summarizer used to compare reference sets.
//!
//! Sentences are labeled with their ROUGE-2 recall against the references,
//! described by three features (mean cluster term frequency, length and
//! stopword ratio), fitted with [`train`] and assembled greedily under a word
//! budget with a redundancy guard.

mod regression;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::corpus::{ClusterData, Similarity};
use crate::defaults::REDUNDANCY_THRESHOLD;
use crate::rouge::rouge_n_multi;
use crate::textproc::{ngram_counts, NGramCounts, SentenceId, SentenceRecord, Token};
use crate::{Error, Result};

pub use regression::{train, RegressionModel, Scaler, TrainConfig, FEATURES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Mean cluster-level count of the sentence's tokens.
    pub tf_mean: f64,
    pub length: usize,
    /// Share of stopword tokens, in `[0, 1]`.
    pub stop_ratio: f64,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; FEATURES] {
        [self.tf_mean, self.length as f64, self.stop_ratio]
    }
}

/// Raw term counts over every document sentence of a cluster.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermTable(BTreeMap<String, u64>);

impl TermTable {
    pub fn from_cluster(cluster: &ClusterData) -> Self {
        Self::from_sentences(cluster.documents.iter().flat_map(|d| &d.sentences))
    }

    pub fn from_sentences<'a>(sentences: impl IntoIterator<Item = &'a SentenceRecord>) -> Self {
        let mut table = BTreeMap::new();
        for s in sentences {
            for t in &s.tokens {
                *table.entry(t.as_str().to_string()).or_insert(0) += 1;
            }
        }
        TermTable(table)
    }

    pub fn get(&self, term: &str) -> u64 {
        self.0.get(term).copied().unwrap_or(0)
    }
}

/// ROUGE-2 recall of each sentence against `references`, in input order.
pub fn label_sentences(
    sentences: &[SentenceRecord],
    references: &[NGramCounts],
) -> Result<Vec<(SentenceId, BigRational)>> {
    sentences
        .iter()
        .map(|s| {
            let score = rouge_n_multi(&ngram_counts(&s.tokens, 2), references)?;
            Ok((s.id, score.into_inner()))
        })
        .collect()
}

pub fn extract_features(
    sentence: &SentenceRecord,
    table: &TermTable,
    stopwords: &BTreeSet<String>,
) -> Result<FeatureVector> {
    let n = sentence.tokens.len();
    if n == 0 {
        return Err(Error::EmptySentence);
    }
    let tf: u64 = sentence.tokens.iter().map(|t| table.get(t.as_str())).sum();
    let stops = sentence
        .tokens
        .iter()
        .filter(|t| stopwords.contains(t.as_str()))
        .count();
    Ok(FeatureVector {
        tf_mean: tf as f64 / n as f64,
        length: n,
        stop_ratio: stops as f64 / n as f64,
    })
}

fn unigram_similarity(a: &BTreeMap<&str, u64>, b: &BTreeMap<&str, u64>) -> Similarity {
    let norm = |v: &BTreeMap<&str, u64>| v.values().map(|c| c * c).sum();
    Similarity {
        dot: a.iter().filter_map(|(w, x)| b.get(w).map(|y| x * y)).sum(),
        left: norm(a),
        right: norm(b),
    }
}

fn bag(tokens: &[Token]) -> BTreeMap<&str, u64> {
    let mut m = BTreeMap::new();
    for t in tokens {
        *m.entry(t.as_str()).or_insert(0) += 1;
    }
    m
}

/// Greedy selection by descending score (smaller id first on ties).
///
/// A sentence is added when it fits the remaining budget and its unigram
/// cosine with the text selected so far is below the redundancy threshold.
/// Returns the chosen ids in ascending order.
pub fn select_by_scores(
    sentences: &[SentenceRecord],
    scores: &[f64],
    budget: usize,
) -> Vec<SentenceId> {
    let mut ranked: Vec<usize> = (0..sentences.len())
        .filter(|&i| sentences[i].word_length > 0)
        .collect();
    ranked.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(sentences[a].id.cmp(&sentences[b].id))
    });
    let mut chosen = Vec::new();
    let mut selected_bag: BTreeMap<&str, u64> = BTreeMap::new();
    let mut room = budget;
    for i in ranked {
        let s = &sentences[i];
        if s.word_length > room {
            continue;
        }
        let own = bag(&s.tokens);
        if !selected_bag.is_empty()
            && unigram_similarity(&own, &selected_bag).value() >= REDUNDANCY_THRESHOLD
        {
            continue;
        }
        for (w, c) in own {
            *selected_bag.entry(w).or_insert(0) += c;
        }
        room -= s.word_length;
        chosen.push(s.id);
    }
    chosen.sort();
    chosen
}

/// Scores every candidate with `model` and assembles a summary of at most
/// `budget` tokens.
pub fn summarize(
    model: &RegressionModel,
    sentences: &[SentenceRecord],
    table: &TermTable,
    stopwords: &BTreeSet<String>,
    budget: usize,
) -> Vec<SentenceId> {
    let usable: Vec<SentenceRecord> = sentences
        .iter()
        .filter(|s| !s.tokens.is_empty())
        .cloned()
        .collect();
    let scores: Vec<f64> = usable
        .iter()
        .map(|s| match extract_features(s, table, stopwords) {
            Ok(f) => model.predict(&f),
            Err(_) => f64::NEG_INFINITY,
        })
        .collect();
    select_by_scores(&usable, &scores, budget)
}
