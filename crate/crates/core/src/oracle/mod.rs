//! Budgeted ROUGE maximization over candidate sentences.
//!
//! Given candidate sentences and a set of linked tweets used as references,
//! the program selects sentences with total length at most `L` maximizing
//!
//! ```text
//! (1 - λ) · (1/K₂) Σᵢ w₂ᵢ Σ_b min(nᵢ(b), n_S(b))  +  λ · (1/K₁) Σᵢ w₁ᵢ Σ_u min(nᵢ(u), n_S(u))
//! ```
//!
//! where `n_S` sums the n-gram counts of the selected sentences and `wₒᵢ` is
//! the reciprocal of reference `i`'s order-`o` n-gram total. The per-n-gram
//! gain is `min(demand, supply)`; because the objective maximizes it, the
//! two upper bounds `gain ≤ demand` and `gain ≤ supply` already force
//! equality at the optimum and no disjunctive constraint is needed. The
//! solvers therefore work directly on the clipped counts.
//!
//! Solvers:
//! * [`solve_exact`] branch-and-bound with an admissible knapsack bound.
//! * [`solve_greedy`] the greedy baseline for one ROUGE order.
//! * [`solve_auxiliary_encoding`] the absolute-value encoding, single reference.
//! * [`brute_force`] exhaustive enumeration for small instances.
//!
//! Every solution reports its scores recomputed from the selected set via
//! [`crate::rouge`].

mod aux;
mod brute;
mod compiled;
mod exact;
mod greedy;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rouge::{rouge_n_multi, ReferenceWeight, RougeScore};
use crate::textproc::{ngram_counts, NGramCounts, SentenceId, SentenceRecord, Token};
use crate::{Error, Result};

pub use aux::solve_auxiliary_encoding;
pub use brute::{brute_force, combination_guard, CombinationGuard, MAX_BRUTE_FORCE_SENTENCES};
pub use exact::solve_exact;
pub use greedy::solve_greedy;

/// Trade-off between ROUGE-2 (weight `1 - λ`) and ROUGE-1 (weight `λ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lambda {
    numer: u64,
    denom: u64,
}

impl Lambda {
    /// Pure ROUGE-2.
    pub const ROUGE2: Lambda = Lambda { numer: 0, denom: 1 };
    /// Pure ROUGE-1.
    pub const ROUGE1: Lambda = Lambda { numer: 1, denom: 1 };

    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 || numer > denom {
            return Err(Error::InvalidConfig(alloc::format!(
                "lambda {numer}/{denom} is not in [0, 1]"
            )));
        }
        let g = num_integer::gcd(numer, denom);
        Ok(Lambda {
            numer: numer / g,
            denom: denom / g,
        })
    }

    /// Parses a plain decimal such as `0.0001` or a fraction such as `1/3`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::InvalidConfig(alloc::format!("cannot parse lambda {text:?}"));
        if let Some((n, d)) = text.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return Lambda::new(n, d);
        }
        let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
        if whole.is_empty() && frac.is_empty()
            || !whole.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let denom = 10u64.pow(frac.len() as u32);
        let whole: u64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let numer = whole
            .checked_mul(denom)
            .and_then(|w| w.checked_add(frac))
            .ok_or_else(bad)?;
        Lambda::new(numer, denom)
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer), BigInt::from(self.denom))
    }

    pub fn to_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl Default for Lambda {
    fn default() -> Self {
        let (n, d) = crate::defaults::LAMBDA;
        Lambda { numer: n, denom: d }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

/// One linked tweet used as a reference, with its n-gram tables and weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetReference {
    pub id: String,
    pub unigrams: NGramCounts,
    pub bigrams: NGramCounts,
    /// `None` when the tweet has no n-grams of that order.
    pub unigram_weight: Option<ReferenceWeight>,
    pub bigram_weight: Option<ReferenceWeight>,
}

impl TweetReference {
    pub fn from_tokens(id: impl Into<String>, tokens: &[Token]) -> Self {
        let unigrams = ngram_counts(tokens, 1);
        let bigrams = ngram_counts(tokens, 2);
        TweetReference {
            id: id.into(),
            unigram_weight: ReferenceWeight::for_reference(&unigrams).ok(),
            bigram_weight: ReferenceWeight::for_reference(&bigrams).ok(),
            unigrams,
            bigrams,
        }
    }

    pub fn counts(&self, order: usize) -> &NGramCounts {
        match order {
            1 => &self.unigrams,
            _ => &self.bigrams,
        }
    }
}

/// A candidate sentence with its n-gram tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSentence {
    pub record: SentenceRecord,
    pub unigrams: NGramCounts,
    pub bigrams: NGramCounts,
}

impl ProblemSentence {
    pub fn new(record: SentenceRecord) -> Self {
        ProblemSentence {
            unigrams: ngram_counts(&record.tokens, 1),
            bigrams: ngram_counts(&record.tokens, 2),
            record,
        }
    }

    pub fn id(&self) -> SentenceId {
        self.record.id
    }

    pub fn len(&self) -> usize {
        self.record.word_length
    }

    pub fn is_empty(&self) -> bool {
        self.record.word_length == 0
    }

    pub fn counts(&self, order: usize) -> &NGramCounts {
        match order {
            1 => &self.unigrams,
            _ => &self.bigrams,
        }
    }
}

/// A complete instance: candidates, references, length budget and λ.
#[derive(Debug, Clone)]
pub struct OracleProblem {
    sentences: Vec<ProblemSentence>,
    references: Vec<TweetReference>,
    budget: usize,
    lambda: Lambda,
}

/// Assembles a problem. Sentences without tokens are dropped; references
/// with no n-grams of an order only leave that order's average.
pub fn build_problem(
    sentences: Vec<SentenceRecord>,
    tweets: Vec<TweetReference>,
    budget: usize,
    lambda: Lambda,
) -> Result<OracleProblem> {
    let mut seen = BTreeSet::new();
    for s in &sentences {
        if !seen.insert(s.id) {
            return Err(Error::InvalidConfig(alloc::format!(
                "duplicate sentence id {}",
                s.id
            )));
        }
    }
    let mut sentences: Vec<ProblemSentence> = sentences
        .into_iter()
        .filter(|s| s.word_length > 0)
        .map(ProblemSentence::new)
        .collect();
    sentences.sort_by_key(ProblemSentence::id);
    for t in &tweets {
        if t.unigram_weight.is_none() {
            log::warn!("reference {} has no tokens and is ignored", t.id);
        } else if t.bigram_weight.is_none() {
            log::warn!(
                "reference {} has no bigrams and is left out of ROUGE-2",
                t.id
            );
        }
    }
    let references: Vec<TweetReference> = tweets
        .into_iter()
        .filter(|t| t.unigram_weight.is_some())
        .collect();
    if sentences.is_empty() || references.is_empty() {
        return Err(Error::EmptyProblem);
    }
    Ok(OracleProblem {
        sentences,
        references,
        budget,
        lambda,
    })
}

/// Scores of one selection, all recomputed through [`crate::rouge`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub objective: BigRational,
    pub rouge1: RougeScore,
    pub rouge2: RougeScore,
}

impl OracleProblem {
    pub fn sentences(&self) -> &[ProblemSentence] {
        &self.sentences
    }

    pub fn references(&self) -> &[TweetReference] {
        &self.references
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_lambda(mut self, lambda: Lambda) -> Self {
        self.lambda = lambda;
        self
    }

    /// Keeps only the references whose ids satisfy `keep`.
    pub fn restrict_references(mut self, keep: impl Fn(&str) -> bool) -> Result<Self> {
        self.references.retain(|r| keep(&r.id));
        if self.references.is_empty() {
            return Err(Error::EmptyProblem);
        }
        Ok(self)
    }

    pub fn sentence(&self, id: SentenceId) -> Option<&ProblemSentence> {
        self.sentences
            .binary_search_by_key(&id, ProblemSentence::id)
            .ok()
            .map(|i| &self.sentences[i])
    }

    /// References that take part in the order-`order` average.
    pub fn references_of_order(&self, order: usize) -> Vec<NGramCounts> {
        self.references
            .iter()
            .map(|r| r.counts(order))
            .filter(|c| !c.is_empty())
            .cloned()
            .collect()
    }

    /// Total length of the given sentences.
    pub fn length_of(&self, selected: &[SentenceId]) -> usize {
        selected
            .iter()
            .filter_map(|&id| self.sentence(id))
            .map(ProblemSentence::len)
            .sum()
    }

    /// ROUGE-1, ROUGE-2 and the λ-combined objective of a selection.
    pub fn evaluate(&self, selected: &[SentenceId]) -> Result<Evaluation> {
        let chosen: Vec<&ProblemSentence> = selected
            .iter()
            .filter_map(|&id| self.sentence(id))
            .collect();
        let score = |order: usize| -> Result<RougeScore> {
            let refs = self.references_of_order(order);
            if refs.is_empty() {
                return Ok(RougeScore::zero());
            }
            let candidate = NGramCounts::sum(order, chosen.iter().map(|s| s.counts(order)))?;
            rouge_n_multi(&candidate, &refs)
        };
        let rouge1 = score(1)?;
        let rouge2 = score(2)?;
        let lambda = self.lambda.to_ratio();
        let objective = (BigRational::one() - &lambda) * rouge2.value() + lambda * rouge1.value();
        Ok(Evaluation {
            objective,
            rouge1,
            rouge2,
        })
    }

    pub(crate) fn solution(
        &self,
        mut selected: Vec<SentenceId>,
        optimal: bool,
        nodes: u64,
    ) -> Result<OracleSolution> {
        selected.sort();
        selected.dedup();
        let eval = self.evaluate(&selected)?;
        Ok(OracleSolution {
            selected,
            objective: eval.objective,
            rouge1: eval.rouge1,
            rouge2: eval.rouge2,
            optimal,
            nodes_explored: nodes,
        })
    }
}

/// A selection with its recomputed scores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    /// Selected sentence ids in ascending order.
    pub selected: Vec<SentenceId>,
    pub objective: BigRational,
    pub rouge1: RougeScore,
    pub rouge2: RougeScore,
    /// True only when the search proved no better selection exists.
    pub optimal: bool,
    pub nodes_explored: u64,
}

impl OracleSolution {
    pub fn objective_f64(&self) -> f64 {
        self.objective.to_f64().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }
}

impl Default for OracleSolution {
    fn default() -> Self {
        OracleSolution {
            selected: Vec::new(),
            objective: BigRational::zero(),
            rouge1: RougeScore::zero(),
            rouge2: RougeScore::zero(),
            optimal: false,
            nodes_explored: 0,
        }
    }
}

/// Static order in which the exact search branches on sentences.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchOrder {
    /// Highest marginal gain per word at the root first.
    #[default]
    ByLengthDensity,
    ByInputOrder,
}

/// Search limits of the exact solvers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Wall-clock limit in seconds, 0 for none. Needs the `std` feature.
    pub time_limit: f64,
    /// Maximum number of search nodes, 0 for none.
    pub node_limit: u64,
    pub branch_order: BranchOrder,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.time_limit >= 0.0) || !self.time_limit.is_finite() {
            return Err(Error::InvalidConfig(alloc::format!(
                "time limit {} must be a non-negative number",
                self.time_limit
            )));
        }
        Ok(())
    }
}

/// Which ROUGE order the greedy baseline maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Rouge1,
    Rouge2,
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use alloc::vec;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(Lambda::parse("0.0001").unwrap(), Lambda::default());
        assert_eq!(Lambda::parse("0").unwrap(), Lambda::ROUGE2);
        assert_eq!(Lambda::parse("1").unwrap(), Lambda::ROUGE1);
        assert_eq!(Lambda::parse("1.0").unwrap(), Lambda::ROUGE1);
        assert_eq!(Lambda::parse("2/4").unwrap(), Lambda::new(1, 2).unwrap());
        assert!(Lambda::parse("1.5").is_err());
        assert!(Lambda::parse("-0.1").is_err());
        assert!(Lambda::parse("").is_err());
        assert!(Lambda::parse("abc").is_err());
    }

    #[test]
    fn build_drops_empty_and_rejects_empty_problems() {
        let p = problem(&["a b c", ""], &["a b"], 10, Lambda::ROUGE2);
        assert_eq!(p.sentences().len(), 1);
        let err = build_problem(
            vec![],
            vec![TweetReference::from_tokens("t", &words("a b"))],
            5,
            Lambda::ROUGE2,
        )
        .unwrap_err();
        assert_eq!(err, Error::EmptyProblem);
        let err = build_problem(
            vec![sentence(0, "a b")],
            vec![TweetReference::from_tokens("t", &[])],
            5,
            Lambda::ROUGE2,
        )
        .unwrap_err();
        assert_eq!(err, Error::EmptyProblem);
        let err = build_problem(
            vec![sentence(0, "a b"), sentence(0, "c d")],
            vec![],
            5,
            Lambda::ROUGE2,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn weights_are_exact_reciprocals() {
        let t = TweetReference::from_tokens("t", &words("a b c d"));
        assert_eq!(t.unigram_weight.as_ref().unwrap().value(), &ratio(1, 4));
        assert_eq!(t.bigram_weight.as_ref().unwrap().value(), &ratio(1, 3));
        let single = TweetReference::from_tokens("s", &words("a"));
        assert!(single.bigram_weight.is_none());
    }

    #[test]
    fn lambda_endpoints_reduce_to_single_orders() {
        let p = problem(&["a b c", "c d"], &["a b c d", "d e"], 10, Lambda::ROUGE2);
        let sel = [SentenceId(0)];
        let e = p.evaluate(&sel).unwrap();
        assert_eq!(e.objective, e.rouge2.value().clone());
        let e1 = p
            .clone()
            .with_lambda(Lambda::ROUGE1)
            .evaluate(&sel)
            .unwrap();
        assert_eq!(e1.objective, e1.rouge1.value().clone());
        let ec = p.with_lambda(Lambda::default()).evaluate(&sel).unwrap();
        let l = ratio(1, 10_000);
        assert_eq!(
            ec.objective,
            (ratio(1, 1) - &l) * e.rouge2.value() + l * e.rouge1.value()
        );
        // a b c vs {a b c d, d e}: R2 = (2/3 + 0)/2, R1 = (3/4 + 0)/2
        assert_eq!(e.rouge2.value(), &ratio(1, 3));
        assert_eq!(e1.rouge1.value(), &ratio(3, 8));
    }

    #[test]
    fn one_token_reference_only_counts_for_rouge1() {
        let p = problem(&["a b"], &["a b", "c"], 10, Lambda::ROUGE2);
        let e = p.evaluate(&[SentenceId(0)]).unwrap();
        assert_eq!(e.rouge2.value(), &ratio(1, 1));
        assert_eq!(e.rouge1.value(), &ratio(1, 2));
    }
}
