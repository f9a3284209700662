//! Absolute-value encoding of bigram overlap for a single reference.
//!
//! Using `min(a, x) = (x + a − |x − a|) / 2`, each bigram `b` gets an
//! auxiliary variable `C(b) ≥ |n_cnd(b) − n_ref(b)|` and the program
//! maximizes `Σ_b (n_cnd(b) − C(b))`. At any optimum `C(b)` sits at the
//! absolute value, so the objective equals `2 · gain − Σ_b n_ref(b)` and the
//! maximizer coincides with the ROUGE-2 maximizer. The formulation has no
//! averaging over several references, hence the single-reference restriction.
//!
//! The search here keeps `C(b)` explicitly and branches in input order with
//! a fractional knapsack bound over standalone improvements, all in signed
//! integers.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{OracleProblem, OracleSolution, SolverConfig};
use crate::textproc::Token;
use crate::{Error, Result};

struct Encoding {
    reference: Vec<i64>,
    /// per sentence: length and `(bigram, count)` over every bigram it has
    sentences: Vec<(usize, Vec<(usize, i64)>)>,
}

struct State {
    candidate: Vec<i64>,
    /// auxiliary `C(b) = |n_cnd(b) − n_ref(b)|`
    aux: Vec<i64>,
}

impl State {
    fn objective(&self) -> i64 {
        self.candidate
            .iter()
            .zip(&self.aux)
            .map(|(c, a)| c - a)
            .sum()
    }

    fn apply(&mut self, enc: &Encoding, item: usize, sign: i64) {
        for &(b, m) in &enc.sentences[item].1 {
            self.candidate[b] += sign * m;
            self.aux[b] = (self.candidate[b] - enc.reference[b]).abs();
        }
    }

    /// Objective change if `item` were added.
    fn improvement(&self, enc: &Encoding, item: usize) -> i64 {
        enc.sentences[item]
            .1
            .iter()
            .map(|&(b, m)| {
                let before = self.candidate[b] - self.aux[b];
                let after_c = self.candidate[b] + m;
                let after = after_c - (after_c - enc.reference[b]).abs();
                after - before
            })
            .sum()
    }
}

struct Search<'a> {
    enc: &'a Encoding,
    state: State,
    chosen: Vec<usize>,
    best: (i64, Vec<usize>),
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl Search<'_> {
    fn visit(&mut self, next: usize, room: usize) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.node_limit > 0 && self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        let value = self.state.objective();
        if value > self.best.0 {
            self.best = (value, self.chosen.clone());
        }
        // (item, length, improvement) for undecided sentences that fit and help
        let mut open: Vec<(usize, usize, i64)> = (next..self.enc.sentences.len())
            .filter(|&i| self.enc.sentences[i].0 <= room)
            .map(|i| {
                (
                    i,
                    self.enc.sentences[i].0,
                    self.state.improvement(self.enc, i),
                )
            })
            .filter(|&(_, _, d)| d > 0)
            .collect();
        let Some(&(first, len, _)) = open.first() else {
            return;
        };
        if !self.bound_exceeds(&mut open, room, value) {
            return;
        }
        self.state.apply(self.enc, first, 1);
        self.chosen.push(first);
        self.visit(first + 1, room - len);
        self.chosen.pop();
        self.state.apply(self.enc, first, -1);
        self.visit(first + 1, room);
    }

    fn bound_exceeds(&self, open: &mut [(usize, usize, i64)], room: usize, value: i64) -> bool {
        // The objective can never exceed the reference bigram total.
        let ceiling: i64 = self.enc.reference.iter().sum();
        if ceiling <= self.best.0 {
            return false;
        }
        open.sort_by(|a, b| (b.2 * a.1 as i64).cmp(&(a.2 * b.1 as i64)));
        let best = i128::from(self.best.0);
        let mut room = room;
        let mut acc = i128::from(value);
        for &(_, len, d) in open.iter() {
            if len <= room {
                room -= len;
                acc += i128::from(d);
            } else {
                let len = len as i128;
                return acc * len + i128::from(d) * room as i128 > best * len;
            }
        }
        acc > best
    }
}

/// Maximizes ROUGE-2 against the problem's only reference through the
/// auxiliary-variable encoding.
pub fn solve_auxiliary_encoding(
    problem: &OracleProblem,
    config: &SolverConfig,
) -> Result<OracleSolution> {
    config.validate()?;
    if problem.references().len() != 1 {
        return Err(Error::UnsupportedEncoding {
            references: problem.references().len(),
        });
    }
    let reference = &problem.references()[0].bigrams;
    fn intern<'a>(gram: &'a [Token], keys: &mut BTreeMap<&'a [Token], usize>) -> usize {
        let next = keys.len();
        *keys.entry(gram).or_insert(next)
    }
    let mut keys: BTreeMap<&[Token], usize> = BTreeMap::new();
    let mut ref_entries = Vec::new();
    for (gram, count) in reference.iter() {
        ref_entries.push((intern(gram, &mut keys), i64::from(count)));
    }
    let mut sentences = Vec::new();
    for s in problem.sentences() {
        let grams = s
            .bigrams
            .iter()
            .map(|(gram, count)| (intern(gram, &mut keys), i64::from(count)))
            .collect();
        sentences.push((s.len(), grams));
    }
    let mut reference_vec = vec![0i64; keys.len()];
    for (k, c) in ref_entries {
        reference_vec[k] = c;
    }
    let enc = Encoding {
        reference: reference_vec,
        sentences,
    };
    let candidate = vec![0i64; keys.len()];
    let aux = enc.reference.clone();
    let state = State { candidate, aux };
    let start = state.objective();
    let mut search = Search {
        enc: &enc,
        state,
        chosen: Vec::new(),
        best: (start, Vec::new()),
        nodes: 0,
        node_limit: config.node_limit,
        aborted: false,
    };
    search.visit(0, problem.budget());
    let ids = search
        .best
        .1
        .iter()
        .map(|&i| problem.sentences()[i].id())
        .collect();
    problem.solution(ids, !search.aborted, search.nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::testutil::*;
    use crate::oracle::{brute_force, solve_exact, Lambda};
    use crate::textproc::SentenceId;

    #[test]
    fn identity_instance() {
        let p = problem(&["x y", "a b c d"], &["a b c d"], 10, Lambda::ROUGE2);
        let a = solve_auxiliary_encoding(&p, &SolverConfig::default()).unwrap();
        let e = solve_exact(&p, &SolverConfig::default()).unwrap();
        assert_eq!(a.selected, [SentenceId(1)]);
        assert_eq!(a.selected, e.selected);
    }

    #[test]
    fn zero_budget() {
        let p = problem(&["a b"], &["a b"], 0, Lambda::ROUGE2);
        let a = solve_auxiliary_encoding(&p, &SolverConfig::default()).unwrap();
        assert!(a.selected.is_empty());
    }

    #[test]
    fn rejects_several_references() {
        let p = problem(&["a b"], &["a b", "b c"], 5, Lambda::ROUGE2);
        assert_eq!(
            solve_auxiliary_encoding(&p, &SolverConfig::default()).unwrap_err(),
            Error::UnsupportedEncoding { references: 2 }
        );
    }

    #[test]
    fn agrees_with_exact_and_brute_force() {
        for seed in 0..20 {
            let p = random_problem(500 + seed, 10, 1, 12, 15, Lambda::ROUGE2);
            let a = solve_auxiliary_encoding(&p, &SolverConfig::default()).unwrap();
            let e = solve_exact(&p, &SolverConfig::default()).unwrap();
            let b = brute_force(&p).unwrap();
            assert_eq!(a.rouge2, e.rouge2, "seed {seed}");
            assert_eq!(a.rouge2, b.rouge2, "seed {seed}");
            assert!(p.length_of(&a.selected) <= p.budget());
        }
    }
}
