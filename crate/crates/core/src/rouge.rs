//! Multi-reference ROUGE-N recall in exact rational arithmetic.
//!
//! For one reference, the score is the clipped n-gram overlap divided by the
//! reference's n-gram total. Several references are averaged with equal
//! weight. Scores stay rational so that two summaries reaching the same
//! upper bound compare equal without any tolerance.

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::textproc::NGramCounts;
use crate::{Error, Result};

/// A recall score in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RougeScore(BigRational);

impl RougeScore {
    pub fn zero() -> Self {
        RougeScore(BigRational::zero())
    }

    /// `numer / denom`; the caller guarantees the ratio lies in `[0, 1]`.
    pub fn from_ratio(numer: u64, denom: u64) -> Self {
        debug_assert!(denom > 0 && numer <= denom);
        RougeScore(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// Score scaled to a percentage with four decimals, e.g. `34.7400`.
    pub fn percent(&self) -> String {
        format_percent(&self.0)
    }
}

impl fmt::Display for RougeScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Formats `value * 100` with four decimals, rounding half away from zero.
pub fn format_percent(value: &BigRational) -> String {
    let scaled = value * BigRational::from_integer(BigInt::from(1_000_000));
    let rounded = scaled.round().to_integer();
    let negative = rounded < BigInt::zero();
    let abs = if negative { -rounded } else { rounded };
    let whole = &abs / BigInt::from(10_000);
    let frac = (&abs % BigInt::from(10_000)).to_u32().unwrap_or(0);
    alloc::format!("{}{}.{:04}", if negative { "-" } else { "" }, whole, frac)
}

/// Reciprocal of a reference's n-gram total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceWeight(BigRational);

impl ReferenceWeight {
    pub fn for_reference(reference: &NGramCounts) -> Result<Self> {
        if reference.total() == 0 {
            return Err(Error::EmptyReference);
        }
        Ok(ReferenceWeight(BigRational::new(
            BigInt::from(1),
            BigInt::from(reference.total()),
        )))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

/// Clipped overlap `sum_b min(n_ref(b), n_cand(b))`.
pub fn gain(candidate: &NGramCounts, reference: &NGramCounts) -> Result<u64> {
    if candidate.order() != reference.order() {
        return Err(Error::OrderMismatch {
            left: candidate.order(),
            right: reference.order(),
        });
    }
    // Walk the smaller table.
    let (small, large) = if candidate.distinct() <= reference.distinct() {
        (candidate, reference)
    } else {
        (reference, candidate)
    };
    Ok(small
        .iter()
        .map(|(gram, count)| u64::from(count.min(large.get(gram))))
        .sum())
}

/// ROUGE-N recall of `candidate` against one reference.
pub fn rouge_n_single(candidate: &NGramCounts, reference: &NGramCounts) -> Result<RougeScore> {
    let overlap = gain(candidate, reference)?;
    if reference.total() == 0 {
        return Err(Error::EmptyReference);
    }
    Ok(RougeScore::from_ratio(
        overlap,
        u64::from(reference.total()),
    ))
}

/// ROUGE-N recall averaged over references.
pub fn rouge_n_multi(candidate: &NGramCounts, references: &[NGramCounts]) -> Result<RougeScore> {
    if references.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let mut sum = BigRational::zero();
    for reference in references {
        let weight = ReferenceWeight::for_reference(reference)?;
        let overlap = gain(candidate, reference)?;
        sum += weight.value() * BigInt::from(overlap);
    }
    Ok(RougeScore(sum / BigInt::from(references.len())))
}
