//! Exact branch-and-bound over the sentence selection variables.
//!
//! # Admissible bound
//!
//! Let `S` be the sentences fixed at a node, `r` the remaining budget and
//! `R` the undecided sentences that still fit in `r`. Write `f` for the
//! scaled objective and `δ(s) = f(S ∪ {s}) − f(S)`.
//!
//! `f` is a non-negative combination of `min(demand, supply)` terms, each a
//! concave non-decreasing function of the supply of one n-gram, so `f` is
//! monotone and submodular. Submodularity gives, for every feasible
//! completion `T ⊆ R`,
//!
//! ```text
//! f(S ∪ T) − f(S) ≤ Σ_{s ∈ T} δ(s),      with Σ_{s ∈ T} |s| ≤ r.
//! ```
//!
//! The right-hand side is a 0/1 knapsack whose LP relaxation (sentences may
//! be taken fractionally, greedily by `δ(s) / |s|`) is an upper bound on it.
//! Monotonicity adds a second cap, `f(S ∪ T) − f(S) ≤ f(S ∪ R) − f(S)`, the
//! gain of supplying every remaining sentence at once with each n-gram's
//! contribution capped at the reference demand. The node bound is `f(S)`
//! plus the smaller of the two, so it is never below the best completion
//! and pruning never discards a strictly better selection.
//!
//! All comparisons use exact integers. A sentence with `δ(s) = 0` can be
//! dropped for the whole subtree since marginals only shrink as `S` grows,
//! and a sentence longer than `r` never fits again below the node.

use alloc::vec::Vec;

use super::compiled::Compiled;
use super::{BranchOrder, OracleProblem, OracleSolution, SolverConfig};
use crate::Result;

#[derive(Debug, Clone, Copy)]
struct Open {
    item: usize,
    len: usize,
    delta: u128,
}

struct Deadline {
    #[cfg(feature = "std")]
    end: Option<std::time::Instant>,
}

impl Deadline {
    fn new(seconds: f64) -> Self {
        #[cfg(feature = "std")]
        {
            let end = (seconds > 0.0)
                .then(|| std::time::Instant::now() + std::time::Duration::from_secs_f64(seconds));
            Deadline { end }
        }
        #[cfg(not(feature = "std"))]
        {
            let _ = seconds;
            Deadline {}
        }
    }

    fn expired(&self) -> bool {
        #[cfg(feature = "std")]
        {
            self.end.is_some_and(|end| std::time::Instant::now() >= end)
        }
        #[cfg(not(feature = "std"))]
        {
            false
        }
    }
}

struct Search<'a> {
    compiled: &'a Compiled,
    counts: Vec<u32>,
    chosen: Vec<usize>,
    best_value: u128,
    best: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    deadline: Deadline,
    aborted: bool,
}

/// `a.delta / a.len > b.delta / b.len`
fn denser(a: &Open, b: &Open) -> core::cmp::Ordering {
    let lhs = a.delta * b.len as u128;
    let rhs = b.delta * a.len as u128;
    rhs.cmp(&lhs)
}

impl Search<'_> {
    fn node(&mut self, open: Vec<Open>, remaining: usize, value: u128) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if (self.node_limit > 0 && self.nodes > self.node_limit)
            || (self.nodes % 256 == 0 && self.deadline.expired())
        {
            self.aborted = true;
            return;
        }
        if value > self.best_value {
            self.best_value = value;
            self.best = self.chosen.clone();
        }
        if open.is_empty() || !self.may_improve(&open, remaining, value) {
            return;
        }

        let first = open[0];
        self.compiled.add(&mut self.counts, first.item);
        self.chosen.push(first.item);
        let left = remaining - first.len;
        let included: Vec<Open> = open[1..]
            .iter()
            .filter(|o| o.len <= left)
            .map(|o| Open {
                delta: self.compiled.marginal(&self.counts, o.item),
                ..*o
            })
            .filter(|o| o.delta > 0)
            .collect();
        self.node(included, left, value + first.delta);
        self.chosen.pop();
        self.compiled.remove(&mut self.counts, first.item);

        self.node(open[1..].to_vec(), remaining, value);
    }

    /// True when the node bound strictly exceeds the incumbent.
    fn may_improve(&mut self, open: &[Open], remaining: usize, value: u128) -> bool {
        let best = self.best_value;

        let base = self.compiled.value(&self.counts);
        for o in open {
            self.compiled.add(&mut self.counts, o.item);
        }
        let all = self.compiled.value(&self.counts);
        for o in open {
            self.compiled.remove(&mut self.counts, o.item);
        }
        if value + (all - base) <= best {
            return false;
        }

        let mut sorted = open.to_vec();
        sorted.sort_by(denser);
        let mut room = remaining;
        let mut full = value;
        for o in &sorted {
            if o.len <= room {
                room -= o.len;
                full += o.delta;
                if full > best {
                    return true;
                }
            } else {
                // full + delta * room / len > best
                let len = o.len as u128;
                return full * len + o.delta * room as u128 > best * len;
            }
        }
        full > best
    }
}

/// Solves the selection program exactly.
///
/// When the search finishes within the configured limits the solution is
/// flagged optimal; otherwise the best selection found so far is returned
/// with `optimal = false`.
pub fn solve_exact(problem: &OracleProblem, config: &SolverConfig) -> Result<OracleSolution> {
    config.validate()?;
    let compiled = Compiled::new(problem, problem.lambda())?;
    let budget = problem.budget();
    let empty = compiled.empty_counts();

    let mut open: Vec<Open> = compiled
        .items
        .iter()
        .enumerate()
        .filter(|(_, it)| it.len <= budget)
        .map(|(item, it)| Open {
            item,
            len: it.len,
            delta: compiled.marginal(&empty, item),
        })
        .filter(|o| o.delta > 0)
        .collect();
    if config.branch_order == BranchOrder::ByLengthDensity {
        open.sort_by(denser);
    }

    let (best_value, best) = density_greedy(&compiled, &open, budget);
    let mut search = Search {
        compiled: &compiled,
        counts: empty,
        chosen: Vec::new(),
        best_value,
        best,
        nodes: 0,
        node_limit: config.node_limit,
        deadline: Deadline::new(config.time_limit),
        aborted: false,
    };
    search.node(open, budget, 0);

    let ids = search
        .best
        .iter()
        .map(|&i| problem.sentences()[i].id())
        .collect();
    let solution = problem.solution(ids, !search.aborted, search.nodes)?;
    debug_assert_eq!(
        solution.objective,
        num_rational::BigRational::new(search.best_value.into(), compiled.scale.into())
    );
    Ok(solution)
}

/// Starting incumbent: repeatedly take the fitting sentence with the highest
/// marginal gain per word.
fn density_greedy(compiled: &Compiled, open: &[Open], budget: usize) -> (u128, Vec<usize>) {
    let mut counts = compiled.empty_counts();
    let mut room = budget;
    let mut chosen = Vec::new();
    let mut pool: Vec<Open> = open.to_vec();
    let mut value = 0u128;
    loop {
        let mut best: Option<Open> = None;
        for o in pool.iter().filter(|o| o.len <= room) {
            let cand = Open {
                delta: compiled.marginal(&counts, o.item),
                ..*o
            };
            if cand.delta == 0 {
                continue;
            }
            if best.map_or(true, |b| denser(&cand, &b).is_lt()) {
                best = Some(cand);
            }
        }
        let Some(pick) = best else { break };
        compiled.add(&mut counts, pick.item);
        value += pick.delta;
        room -= pick.len;
        chosen.push(pick.item);
        pool.retain(|o| o.item != pick.item);
    }
    (value, chosen)
}
