//! From raw tweets and news documents to clusters with reference summaries.
//!
//! Stages, in pipeline order:
//! 1. [`preprocess_tweets`] drops retweets, non-ASCII tokens, short tweets
//!    and duplicates.
//! 2. [`cluster_documents`] groups same-day documents by shared hashtags of
//!    their linked tweets, attaches hashtag-less documents by TF cosine and
//!    filters small clusters.
//! 3. [`categorize_tweet`] types each linked tweet against the documents.
//! 4. [`generate_reference`] runs the exact oracle over document and tweet
//!    sentences with the linked tweets as references.

mod categorize;
mod cluster;
mod reference;
mod tweets;

use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::textproc::{
    normalize_ellipses, split_sentences, Origin, SentenceId, SentenceRecord, TokenizerConfig,
};
use crate::{Error, Result};

pub use categorize::{categorize_tweet, TweetType, TypeCounts};
pub use cluster::{
    cluster_documents, filter_clusters, tf_cosine, Cluster, ClusterConfig, ClusterFilter,
    Similarity,
};
pub use reference::{
    candidate_sentences, generate_reference, reference_problem, ReferenceSummary, SummarySentence,
};
pub use tweets::{preprocess_tweets, TweetRecord};

/// A news article reduced to its main body, split into sentences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub id: String,
    pub url: String,
    pub date: NaiveDate,
    pub title: String,
    /// Body sentences; ids are positions within the document.
    pub sentences: Vec<SentenceRecord>,
}

impl DocumentRecord {
    /// Splits and tokenizes `body`. Fails when the body has no sentence.
    pub fn new(
        id: impl Into<String>,
        url: impl Into<String>,
        date: NaiveDate,
        title: impl Into<String>,
        body: &str,
        cfg: &TokenizerConfig,
    ) -> Result<Self> {
        let id = id.into();
        let sentences: Vec<SentenceRecord> = split_sentences(&normalize_ellipses(body))
            .into_iter()
            .enumerate()
            .map(|(i, raw)| {
                SentenceRecord::new(SentenceId(i as u32), Origin::Document, id.clone(), raw, cfg)
            })
            .collect();
        if sentences.is_empty() {
            return Err(Error::InvalidConfig(alloc::format!(
                "document {id} has an empty body"
            )));
        }
        Ok(DocumentRecord {
            id,
            url: url.into(),
            date,
            title: title.into(),
            sentences,
        })
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(|s| s.word_length).sum()
    }
}

/// A cluster together with its documents and linked tweets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterData {
    pub key: String,
    pub date: NaiveDate,
    pub documents: Vec<DocumentRecord>,
    pub tweets: Vec<TweetRecord>,
}

impl ClusterData {
    /// Collects the records of `cluster`, documents in id order and tweets
    /// in input order.
    pub fn gather(cluster: &Cluster, documents: &[DocumentRecord], tweets: &[TweetRecord]) -> Self {
        let mut docs: Vec<DocumentRecord> = documents
            .iter()
            .filter(|d| cluster.document_ids.contains(&d.id))
            .cloned()
            .collect();
        docs.sort_by(|a, b| a.id.cmp(&b.id));
        let tweets = tweets
            .iter()
            .filter(|t| cluster.tweet_ids.contains(&t.id))
            .cloned()
            .collect();
        ClusterData {
            key: cluster.key.clone(),
            date: cluster.date,
            documents: docs,
            tweets,
        }
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    /// Document sentences renumbered consecutively across the cluster.
    pub fn document_sentences(&self) -> Vec<SentenceRecord> {
        let mut next = 0u32;
        let mut out = Vec::new();
        for doc in &self.documents {
            for s in &doc.sentences {
                let mut s = s.clone();
                s.id = SentenceId(next);
                next += 1;
                out.push(s);
            }
        }
        out
    }
}
