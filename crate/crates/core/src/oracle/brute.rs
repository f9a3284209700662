//! Exhaustive enumeration, the test oracle for the other solvers.
//!
//! Deliberately shares no code with the search routines: n-grams are
//! interned here, gains are recomputed per reference for every subset, and
//! the objective is accumulated with big integers over a common
//! denominator.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use num_rational::BigRational;

use super::{Lambda, OracleProblem, OracleSolution};
use crate::textproc::{SentenceId, Token};
use crate::{Error, Result};

/// Largest instance [`brute_force`] accepts.
pub const MAX_BRUTE_FORCE_SENTENCES: usize = 20;

struct Term {
    coefficient: BigInt,
    /// `(key, demand)`
    demand: Vec<(usize, u32)>,
}

/// The objective of one λ over a common denominator, evaluated per subset.
struct Enumerator {
    terms: Vec<Term>,
    supplies: Vec<Vec<(usize, u32)>>,
    lengths: Vec<usize>,
    /// Scaled value `v` stands for `v / denominator`.
    denominator: BigInt,
    supply: Vec<u32>,
}

impl Enumerator {
    fn new(problem: &OracleProblem, lambda: Lambda) -> Result<Self> {
        let n = problem.sentences().len();
        if n > MAX_BRUTE_FORCE_SENTENCES {
            return Err(Error::InstanceTooLarge {
                sentences: n,
                max: MAX_BRUTE_FORCE_SENTENCES,
            });
        }
        let mut keys: BTreeMap<(usize, Vec<Token>), usize> = BTreeMap::new();
        let mut raw_terms: Vec<(BigInt, BigInt, Vec<(usize, u32)>)> = Vec::new();
        for (order, alpha) in [
            (1usize, lambda.numer()),
            (2, lambda.denom() - lambda.numer()),
        ] {
            let refs = problem.references_of_order(order);
            for r in &refs {
                let demand = r
                    .iter()
                    .map(|(gram, count)| {
                        let next = keys.len();
                        (*keys.entry((order, gram.to_vec())).or_insert(next), count)
                    })
                    .collect();
                // alpha / (denom * K * total)
                let den = BigInt::from(lambda.denom())
                    * BigInt::from(refs.len())
                    * BigInt::from(r.total());
                raw_terms.push((BigInt::from(alpha), den, demand));
            }
        }
        let denominator = raw_terms
            .iter()
            .fold(BigInt::one(), |acc, (_, den, _)| acc.lcm(den));
        let terms: Vec<Term> = raw_terms
            .into_iter()
            .map(|(num, den, demand)| Term {
                coefficient: &denominator / den * num,
                demand,
            })
            .collect();

        let supplies = problem
            .sentences()
            .iter()
            .map(|s| {
                let mut v = Vec::new();
                for order in [1usize, 2] {
                    for (gram, count) in s.counts(order).iter() {
                        if let Some(&k) = keys.get(&(order, gram.to_vec())) {
                            v.push((k, count));
                        }
                    }
                }
                v
            })
            .collect();
        Ok(Enumerator {
            terms,
            supplies,
            lengths: problem.sentences().iter().map(|s| s.len()).collect(),
            denominator,
            supply: vec![0; keys.len()],
        })
    }

    fn subsets(&self) -> core::ops::Range<u32> {
        0..(1u32 << self.lengths.len())
    }

    fn length(&self, mask: u32) -> usize {
        (0..self.lengths.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.lengths[i])
            .sum()
    }

    fn value(&mut self, mask: u32) -> BigInt {
        self.supply.iter_mut().for_each(|c| *c = 0);
        for i in (0..self.lengths.len()).filter(|i| mask >> i & 1 == 1) {
            for &(k, c) in &self.supplies[i] {
                self.supply[k] += c;
            }
        }
        let supply = &self.supply;
        self.terms
            .iter()
            .map(|t| {
                let gain: u64 = t
                    .demand
                    .iter()
                    .map(|&(k, d)| u64::from(d.min(supply[k])))
                    .sum();
                &t.coefficient * BigInt::from(gain)
            })
            .sum()
    }
}

/// Enumerates every subset within the budget and returns the best one.
/// Among equal objectives the lexicographically smallest id list wins.
pub fn brute_force(problem: &OracleProblem) -> Result<OracleSolution> {
    let mut e = Enumerator::new(problem, problem.lambda())?;
    let n = problem.sentences().len();
    let mut best_value = BigInt::zero();
    let mut best_ids: Vec<SentenceId> = Vec::new();
    let mut evaluated = 0u64;
    for mask in e.subsets() {
        if e.length(mask) > problem.budget() {
            continue;
        }
        evaluated += 1;
        let value = e.value(mask);
        let ids: Vec<SentenceId> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| problem.sentences()[i].id())
            .collect();
        if value > best_value || (value == best_value && ids < best_ids) {
            best_value = value;
            best_ids = ids;
        }
    }
    problem.solution(best_ids, true, evaluated)
}

/// Whether a small λ provably leaves the ROUGE-2 optimum unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationGuard {
    /// Largest minus smallest ROUGE-1 over feasible selections.
    pub rouge1_spread: BigRational,
    /// Best ROUGE-2 minus the next lower attainable ROUGE-2, `None` when
    /// every feasible selection has the same ROUGE-2.
    pub rouge2_gap: Option<BigRational>,
    /// `λ · spread < (1 − λ) · gap`, or no gap at all.
    pub holds: bool,
}

/// Checks, by enumeration, that the combined objective at the problem's λ
/// only breaks ties among ROUGE-2 optimal selections.
///
/// Any selection below the ROUGE-2 optimum loses at least `(1 − λ) · gap` on
/// the ROUGE-2 term and gains at most `λ · spread` on the ROUGE-1 term, so
/// when the guard holds every combined optimum is also ROUGE-2 optimal and,
/// among those, ROUGE-1 maximal.
pub fn combination_guard(problem: &OracleProblem) -> Result<CombinationGuard> {
    let mut r1 = Enumerator::new(problem, Lambda::ROUGE1)?;
    let mut r2 = Enumerator::new(problem, Lambda::ROUGE2)?;
    let mut r1_range: Option<(BigInt, BigInt)> = None;
    let mut r2_values: Vec<BigInt> = Vec::new();
    for mask in r1.subsets() {
        if r1.length(mask) > problem.budget() {
            continue;
        }
        let v1 = r1.value(mask);
        r1_range = Some(match r1_range {
            None => (v1.clone(), v1),
            Some((lo, hi)) => (lo.min(v1.clone()), hi.max(v1)),
        });
        r2_values.push(r2.value(mask));
    }
    r2_values.sort();
    r2_values.dedup();
    let (lo, hi) = r1_range.unwrap_or_default();
    let rouge1_spread = BigRational::new(hi - lo, r1.denominator.clone());
    let rouge2_gap = match r2_values.as_slice() {
        [.., below, top] => Some(BigRational::new(top - below, r2.denominator.clone())),
        _ => None,
    };
    let lambda = problem.lambda().to_ratio();
    let holds = match &rouge2_gap {
        None => true,
        Some(gap) => &lambda * &rouge1_spread < (BigRational::one() - &lambda) * gap,
    };
    Ok(CombinationGuard {
        rouge1_spread,
        rouge2_gap,
        holds,
    })
}
