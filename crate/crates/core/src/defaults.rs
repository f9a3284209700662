//! Default constants of the reference-generation pipeline.

/// Maximum summary length, in tokens.
pub const BUDGET: usize = 100;
/// Numerator and denominator of the ROUGE-1 weight in the combined objective.
pub const LAMBDA: (u64, u64) = (1, 10_000);
/// A hashtag-less document joins a cluster only above this TF cosine.
pub const CLUSTER_THRESHOLD: (u64, u64) = (1, 2);
pub const MIN_CLUSTER_DOCS: usize = 3;
pub const MIN_CLUSTER_TWEETS: usize = 8;
pub const MIN_TWEET_TOKENS: usize = 5;
/// Fraction of tweet token types that must occur in the cluster for Abstraction.
pub const ABSTRACTION_OVERLAP: (u64, u64) = (4, 5);
/// Greedy summary assembly skips sentences at or above this cosine to the summary.
pub const REDUNDANCY_THRESHOLD: f64 = 0.7;
/// Hashtags that do not identify an event.
pub const GENERAL_HASHTAGS: &[&str] = &["thisweek", "icymi"];
