//! Integer form of the objective used by the search routines.
//!
//! Each reference `i` of order `o` contributes `αₒ / (Kₒ · Tₒᵢ)` per covered
//! n-gram, with `α₂ = 1 - λ` and `α₁ = λ`. Multiplying by the least common
//! multiple `L` of the reduced denominators turns every coefficient into an
//! integer, so `L · objective` is an exact `u128`.
//!
//! For a single n-gram the scaled value of supplying `c` copies is
//! `Σᵢ Wᵢ · min(nᵢ, c)`, a concave non-decreasing step function. It is
//! tabulated once per n-gram for `c = 0..=max nᵢ` and is flat afterwards.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Lambda, OracleProblem};
use crate::textproc::Token;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Item {
    pub len: usize,
    /// `(key, count)` pairs restricted to n-grams that occur in some reference.
    pub grams: Vec<(u32, u32)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    /// `objective = value / scale`.
    pub scale: u128,
    tables: Vec<Vec<u128>>,
    pub items: Vec<Item>,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Compiled {
    pub fn new(problem: &OracleProblem, lambda: Lambda) -> Result<Self> {
        let d = u128::from(lambda.denom());
        let n = u128::from(lambda.numer());
        let alphas = [(1usize, n), (2usize, d - n)];

        // (order, reference) -> reduced coefficient numerator / denominator
        let mut coefficients: Vec<(usize, usize, u128, u128)> = Vec::new();
        for &(order, alpha) in &alphas {
            if alpha == 0 {
                continue;
            }
            let participating: Vec<usize> = problem
                .references()
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.counts(order).is_empty())
                .map(|(i, _)| i)
                .collect();
            let k = participating.len() as u128;
            for i in participating {
                let total = u128::from(problem.references()[i].counts(order).total());
                let den = d
                    .checked_mul(k)
                    .and_then(|x| x.checked_mul(total))
                    .ok_or(Error::ScaleOverflow)?;
                let g = gcd(alpha, den);
                coefficients.push((order, i, alpha / g, den / g));
            }
        }
        let mut scale: u128 = 1;
        for &(_, _, _, den) in &coefficients {
            scale = (scale / gcd(scale, den))
                .checked_mul(den)
                .ok_or(Error::ScaleOverflow)?;
        }
        let weights: BTreeMap<(usize, usize), u128> = coefficients
            .iter()
            .map(|&(o, i, num, den)| ((o, i), scale / den * num))
            .collect();

        // Intern every reference n-gram and collect its (weight, demand) list.
        let mut keys: BTreeMap<(usize, &[Token]), u32> = BTreeMap::new();
        let mut demands: Vec<Vec<(u128, u32)>> = Vec::new();
        for (&(order, i), &w) in &weights {
            for (gram, count) in problem.references()[i].counts(order).iter() {
                let next = keys.len() as u32;
                let key = *keys.entry((order, gram)).or_insert(next);
                if key as usize == demands.len() {
                    demands.push(Vec::new());
                }
                demands[key as usize].push((w, count));
            }
        }
        let tables = demands
            .iter()
            .map(|ds| {
                let max = ds.iter().map(|&(_, c)| c).max().unwrap_or(0);
                (0..=max)
                    .map(|c| ds.iter().map(|&(w, n)| w * u128::from(n.min(c))).sum())
                    .collect()
            })
            .collect();

        let items: Vec<Item> = problem
            .sentences()
            .iter()
            .map(|s| {
                let mut grams = Vec::new();
                for order in [1usize, 2] {
                    for (gram, count) in s.counts(order).iter() {
                        if let Some(&key) = keys.get(&(order, gram)) {
                            grams.push((key, count));
                        }
                    }
                }
                Item {
                    len: s.len(),
                    grams,
                }
            })
            .collect();

        // Bound arithmetic multiplies sums of marginals (at most one `scale`
        // per item) by sentence lengths.
        let max_len = items.iter().map(|i| i.len).max().unwrap_or(0) as u128;
        scale
            .checked_mul(items.len() as u128 + 1)
            .and_then(|x| x.checked_mul(max_len + 1))
            .and_then(|x| x.checked_mul(4))
            .ok_or(Error::ScaleOverflow)?;

        Ok(Compiled {
            scale,
            tables,
            items,
        })
    }

    pub fn key_count(&self) -> usize {
        self.tables.len()
    }

    fn table_value(&self, key: u32, count: u32) -> u128 {
        let table = &self.tables[key as usize];
        table[(count as usize).min(table.len() - 1)]
    }

    /// Scaled objective of the supply vector `counts`.
    pub fn value(&self, counts: &[u32]) -> u128 {
        counts
            .iter()
            .enumerate()
            .map(|(k, &c)| self.table_value(k as u32, c))
            .sum()
    }

    /// Increase of the scaled objective when `item` joins the supply `counts`.
    pub fn marginal(&self, counts: &[u32], item: usize) -> u128 {
        self.items[item]
            .grams
            .iter()
            .map(|&(k, m)| {
                let c = counts[k as usize];
                self.table_value(k, c + m) - self.table_value(k, c)
            })
            .sum()
    }

    pub fn add(&self, counts: &mut [u32], item: usize) {
        for &(k, m) in &self.items[item].grams {
            counts[k as usize] += m;
        }
    }

    pub fn remove(&self, counts: &mut [u32], item: usize) {
        for &(k, m) in &self.items[item].grams {
            counts[k as usize] -= m;
        }
    }

    pub fn empty_counts(&self) -> Vec<u32> {
        vec![0; self.key_count()]
    }
}
