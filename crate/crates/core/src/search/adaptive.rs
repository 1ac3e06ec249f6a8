//! Adaptive constructive search: start from the empty set and add one
//! candidate haplotype at a time. Improving insertions are always kept;
//! worsening ones are kept with probability exp(-delta/T) under a geometric
//! cooling schedule. When |H| exceeds the cardinality cap, the least useful
//! haplotypes are dropped and construction resumes on the smaller set.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::init::InitKind;
use crate::model::{Haplotype, Instance};
use crate::neighborhood::{apply_insert, generate_candidate_set, undo_set_edit_on, MoveApplication};
use crate::solution::{CostWeights, IncompleteSolution, Solution};

use super::{SearchParams, SearchReport, TraceRow};

/// Probability of keeping an insertion that worsens the objective by
/// `delta` at temperature `t`. exp(0) = 1: zero-delta insertions are always
/// kept.
pub fn acceptance_probability(delta: f64, t: f64) -> f64 {
    (-delta / t).exp().min(1.0)
}

pub fn adaptive_solve(
    instance: &Arc<Instance>,
    weights: &CostWeights,
    params: &SearchParams,
) -> Result<SearchReport> {
    params.validate()?;
    if params.init.is_some_and(|k| k != InitKind::Empty) {
        return Err(Error::InvalidParam(
            "adaptive construction always starts from the empty set".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let deadline = params.deadline();
    let mut sol = IncompleteSolution::empty(instance.clone());

    let w1 = params.w1;
    let w2 = params.w2_for(instance);
    let objective = CostWeights::new(w1, w2, 0.0);
    let max_card = params.max_card_for(instance);
    let mut temperature = params.t0;

    let mut best_feasible: Option<(IncompleteSolution, usize)> = None;
    let mut best_any: Option<(IncompleteSolution, (usize, usize))> = None;
    let mut trace = params.trace.then(Vec::new);
    let mut iterations = 0u64;

    for attempt in 0..params.max_iters {
        if deadline.expired() {
            break;
        }
        iterations = attempt + 1;

        let cand = generate_candidate_set(&sol, params.cand_policy, params.cand_size, &mut rng)?;
        if !cand.haps.is_empty() {
            let pick = cand.haps[rng.random_range(0..cand.haps.len())].clone();
            if let MoveApplication::Applied(receipt) = apply_insert(&mut sol, &pick) {
                let delta = receipt.after().total(&objective) - receipt.before().total(&objective);
                let keep = delta < 0.0
                    || rng.random::<f64>() < acceptance_probability(delta, temperature);
                if !keep {
                    undo_set_edit_on(&mut sol, receipt);
                }
            }
            temperature *= params.cooling;
        }

        // construction may overshoot by one before the cap triggers
        if sol.len() > max_card {
            let q = params
                .delete_batch
                .unwrap_or_else(|| (sol.len() / 10).max(1));
            delete_least_useful(&mut sol, q, &mut rng);
        }

        let cv = sol.cost_vector();
        if cv.f2 == 0 && best_feasible.as_ref().is_none_or(|(_, f1)| cv.f1 < *f1) {
            best_feasible = Some((sol.clone(), cv.f1));
        }
        if best_any.as_ref().is_none_or(|(_, key)| (cv.f2, cv.f1) < *key) {
            best_any = Some((sol.clone(), (cv.f2, cv.f1)));
        }
        if let Some(t) = trace.as_mut() {
            t.push(TraceRow::of(attempt + 1, &Solution::Incomplete(sol.clone()), weights));
        }
    }

    let best = best_feasible
        .map(|(s, _)| s)
        .or_else(|| best_any.map(|(s, _)| s))
        .unwrap_or(sol);
    let mut report =
        SearchReport::finish(Solution::Incomplete(best), weights, iterations, params.seed);
    report.final_w2 = Some(w2);
    report.trace = trace;
    Ok(report)
}

/// Removes the `q` least useful members: fewest genotypes currently using
/// them in a resolution, then fewest compatibilities, then a seeded random
/// key.
pub(crate) fn delete_least_useful<R: Rng>(sol: &mut IncompleteSolution, q: usize, rng: &mut R) {
    let instance = sol.instance().clone();
    let mut ranked: Vec<(u32, u32, u64, Haplotype)> = sol
        .snapshot()
        .into_iter()
        .map(|h| {
            let uses = sol.use_count(&h);
            let compat = instance.compatible_count(&h);
            (uses, compat, rng.random::<u64>(), h)
        })
        .collect();
    ranked.sort();
    for (_, _, _, h) in ranked.into_iter().take(q) {
        sol.remove(&h);
    }
}
