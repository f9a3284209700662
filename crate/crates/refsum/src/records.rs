//! Serialized forms of solver and summarizer results.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use refsum_core::corpus::{SummarySentence, TypeCounts};
use refsum_core::oracle::{OracleProblem, OracleSolution};
use refsum_core::rouge::{format_percent, RougeScore};
use refsum_core::textproc::SentenceId;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact score with its percentage rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Score {
    /// `numerator/denominator`, or an integer.
    pub exact: String,
    /// Percent with four decimals.
    pub percent: String,
}

impl Score {
    pub fn new(value: &BigRational) -> Self {
        Score {
            exact: value.to_string(),
            percent: format_percent(value),
        }
    }

    pub fn value(&self) -> Result<BigRational> {
        BigRational::from_str(&self.exact)
            .map_err(|_| Error::Serialize(format!("bad score {:?}", self.exact)))
    }
}

impl From<&RougeScore> for Score {
    fn from(s: &RougeScore) -> Self {
        Score::new(s.value())
    }
}

/// Exact mean of scores, zero for none.
pub fn mean(values: &[BigRational]) -> BigRational {
    if values.is_empty() {
        return BigRational::from_integer(BigInt::from(0));
    }
    values.iter().sum::<BigRational>() / BigInt::from(values.len())
}

/// A solved oracle instance with the selected sentence texts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub key: String,
    pub solver: String,
    pub lambda: String,
    pub budget: usize,
    pub selected: Vec<SentenceId>,
    /// Selected sentences in document order.
    pub sentences: Vec<SummarySentence>,
    pub words: usize,
    pub objective: Score,
    pub rouge1: Score,
    pub rouge2: Score,
    pub optimal: bool,
    pub nodes_explored: u64,
}

impl SolutionRecord {
    pub fn new(
        key: &str,
        solver: &str,
        problem: &OracleProblem,
        solution: &OracleSolution,
    ) -> Self {
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
        SolutionRecord {
            key: key.to_string(),
            solver: solver.to_string(),
            lambda: problem.lambda().to_string(),
            budget: problem.budget(),
            selected: solution.selected.clone(),
            sentences,
            words: problem.length_of(&solution.selected),
            objective: Score::new(&solution.objective),
            rouge1: (&solution.rouge1).into(),
            rouge2: (&solution.rouge2).into(),
            optimal: solution.optimal,
            nodes_explored: solution.nodes_explored,
        }
    }
}

/// The reference summary of one cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRecord {
    pub key: String,
    pub date: chrono::NaiveDate,
    pub summary: SolutionRecord,
    pub tweet_fraction: f64,
    pub tweet_types: TypeCounts,
}

/// Upper bounds and greedy baselines of one cluster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub key: String,
    pub ub1: SolutionRecord,
    pub ub2: SolutionRecord,
    pub ub_comb: SolutionRecord,
    pub ga1: SolutionRecord,
    pub ga2: SolutionRecord,
    /// `None` when the instance is too large to enumerate.
    pub guard_holds: Option<bool>,
}

impl ComparisonRecord {
    pub fn rows(&self) -> [(&'static str, &SolutionRecord); 5] {
        [
            ("UB-1", &self.ub1),
            ("UB-2", &self.ub2),
            ("UB-Comb", &self.ub_comb),
            ("GA-1", &self.ga1),
            ("GA-2", &self.ga2),
        ]
    }
}

/// A summarizer output with its scores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub key: String,
    pub selected: Vec<SentenceId>,
    pub sentences: Vec<SummarySentence>,
    pub words: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub key: String,
    /// Against the cluster's linked tweets.
    pub tweets_rouge1: Score,
    pub tweets_rouge2: Score,
    /// Against the cluster's reference summary.
    pub reference_rouge1: Score,
    pub reference_rouge2: Score,
}
