use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{categorize_tweet, ClusterData, TweetType};
use crate::oracle::{
    build_problem, solve_exact, Lambda, OracleProblem, OracleSolution, SolverConfig, TweetReference,
};
use crate::textproc::{Origin, SentenceId, SentenceRecord};
use crate::Result;

/// One sentence of a reference summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummarySentence {
    pub id: SentenceId,
    pub origin: Origin,
    pub source: String,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct ReferenceSummary {
    pub solution: OracleSolution,
    /// Selected sentences in id order: document sentences, then tweets.
    pub sentences: Vec<SummarySentence>,
}

impl ReferenceSummary {
    /// Share of summary sentences taken from tweets, 0 for an empty summary.
    pub fn tweet_fraction(&self) -> f64 {
        if self.sentences.is_empty() {
            return 0.0;
        }
        let tweets = self
            .sentences
            .iter()
            .filter(|s| s.origin == Origin::Tweet)
            .count();
        tweets as f64 / self.sentences.len() as f64
    }

    pub fn word_length(&self, problem: &OracleProblem) -> usize {
        problem.length_of(&self.solution.selected)
    }
}

/// Candidate sentences of a cluster: declarative document sentences, then
/// declarative tweets of any type but [`TweetType::Other`].
///
/// Ids number every document sentence first (documents in id order), then
/// every tweet, whether or not the record passes the filters, so they stay
/// stable when the filters change.
pub fn candidate_sentences(cluster: &ClusterData) -> Vec<SentenceRecord> {
    let mut out: Vec<SentenceRecord> = cluster
        .document_sentences()
        .into_iter()
        .filter(|s| s.declarative)
        .collect();
    let offset = cluster.sentence_count() as u32;
    for (i, tweet) in cluster.tweets.iter().enumerate() {
        let record = SentenceRecord::with_tokens(
            SentenceId(offset + i as u32),
            Origin::Tweet,
            tweet.id.clone(),
            tweet.display_text(),
            tweet.tokens.clone(),
        );
        if record.declarative && categorize_tweet(tweet, &cluster.documents) != TweetType::Other {
            out.push(record);
        }
    }
    out
}

/// The oracle instance of a cluster with every linked tweet as a reference.
pub fn reference_problem(
    cluster: &ClusterData,
    lambda: Lambda,
    budget: usize,
) -> Result<OracleProblem> {
    let references = cluster
        .tweets
        .iter()
        .map(|t| TweetReference::from_tokens(t.id.clone(), &t.tokens))
        .collect();
    build_problem(candidate_sentences(cluster), references, budget, lambda)
}

/// Builds the ROUGE-optimal reference summary of a cluster.
pub fn generate_reference(
    cluster: &ClusterData,
    lambda: Lambda,
    budget: usize,
    config: &SolverConfig,
) -> Result<ReferenceSummary> {
    let problem = reference_problem(cluster, lambda, budget)?;
    let solution = solve_exact(&problem, config)?;
    let sentences = solution
        .selected
        .iter()
        .filter_map(|&id| problem.sentence(id))
        .map(|s| SummarySentence {
            id: s.id(),
            origin: s.record.origin,
            source: s.record.source.clone(),
            text: s.record.raw.clone(),
        })
        .collect();
    Ok(ReferenceSummary {
        solution,
        sentences,
    })
}
