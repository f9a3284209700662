use alloc::vec::Vec;

use super::compiled::Compiled;
use super::{Lambda, Metric, OracleProblem, OracleSolution};
use crate::Result;

/// Greedy baseline: repeatedly adds the fitting sentence with the largest
/// increase of the chosen ROUGE order, until nothing fits or nothing helps.
/// Ties go to the smaller sentence id. Never flagged optimal.
pub fn solve_greedy(problem: &OracleProblem, metric: Metric) -> Result<OracleSolution> {
    let lambda = match metric {
        Metric::Rouge1 => Lambda::ROUGE1,
        Metric::Rouge2 => Lambda::ROUGE2,
    };
    let compiled = Compiled::new(problem, lambda)?;
    let mut counts = compiled.empty_counts();
    let mut room = problem.budget();
    let mut taken = alloc::vec![false; compiled.items.len()];
    let mut chosen = Vec::new();
    let mut steps = 0u64;
    loop {
        steps += 1;
        // Items are sorted by id, so a strict comparison keeps the smallest id.
        let mut best: Option<(usize, u128)> = None;
        for (i, item) in compiled.items.iter().enumerate() {
            if taken[i] || item.len > room {
                continue;
            }
            let gain = compiled.marginal(&counts, i);
            if gain > 0 && best.map_or(true, |(_, g)| gain > g) {
                best = Some((i, gain));
            }
        }
        let Some((pick, _)) = best else { break };
        taken[pick] = true;
        room -= compiled.items[pick].len;
        compiled.add(&mut counts, pick);
        chosen.push(problem.sentences()[pick].id());
    }
    problem.solution(chosen, false, steps)
}
