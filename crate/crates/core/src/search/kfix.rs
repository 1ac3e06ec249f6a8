//! Iterative cardinality fixing: obtain a feasible haplotype set, then
//! repeatedly ask for one haplotype fewer, solving each level as a pure
//! feasibility problem (minimize f2 over states with exactly k members).
//! When a level cannot be satisfied within its stagnation budget, the last
//! feasible solution wins.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::init::InitKind;
use crate::model::Instance;
use crate::neighborhood::{
    apply_delete_insert, generate_candidate_set, undo_set_edit_on, DeleteInsertMove,
    MoveApplication,
};
use crate::solution::{CostWeights, Representation, Solution};

use super::adaptive::delete_least_useful;
use super::{build_init, descent, NeighborhoodKind, SearchParams, SearchReport, TraceRow};

pub fn kfix_solve(
    instance: &Arc<Instance>,
    weights: &CostWeights,
    params: &SearchParams,
) -> Result<SearchReport> {
    params.validate()?;
    if params.init.is_some_and(|k| k == InitKind::Empty) {
        return Err(Error::InvalidParam(
            "cardinality fixing needs a feasible initial solution".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let deadline = params.deadline();
    let init = build_init(instance, Representation::Incomplete, params, InitKind::Clark, &mut rng)?;
    let mut sol = init;
    debug_assert!(sol.is_feasible());

    let f2_only = CostWeights::new(0.0, 1.0, 0.0);
    let mut last_feasible = sol.as_incomplete().expect("incomplete").clone();
    let mut trace = params.trace.then(Vec::new);
    let mut iterations = 0u64;
    let mut k = last_feasible.len().saturating_sub(1);

    'levels: while k >= 1 && iterations < params.max_iters && !deadline.expired() {
        shrink_to(&mut sol, k, &mut rng);

        let mut rounds = 0u64;
        loop {
            let mut budget = params.max_iters - iterations;
            let outcome = descent(
                &mut sol,
                NeighborhoodKind::FixedSize,
                &f2_only,
                params,
                &mut rng,
                &deadline,
                &mut budget,
            );
            iterations += outcome.applied + 1;
            debug_assert_eq!(sol.cost_vector().f1, k);

            if let Some(t) = trace.as_mut() {
                t.push(TraceRow::of(iterations, &sol, weights));
            }
            if sol.cost_vector().f2 == 0 {
                last_feasible = sol.as_incomplete().expect("incomplete").clone();
                k -= 1;
                continue 'levels;
            }
            rounds += 1;
            if rounds >= params.stagnation
                || iterations >= params.max_iters
                || deadline.expired()
            {
                break 'levels;
            }
            perturb_swaps(&mut sol, params, &mut rng);
        }
    }

    let mut report = SearchReport::finish(
        Solution::Incomplete(last_feasible),
        weights,
        iterations,
        params.seed,
    );
    report.k_reached = Some(report.best_h);
    report.trace = trace;
    Ok(report)
}

fn shrink_to<R: Rng>(sol: &mut Solution, k: usize, rng: &mut R) {
    let inc = match sol {
        Solution::Incomplete(inc) => inc,
        Solution::Complete(_) => unreachable!("incomplete representation required"),
    };
    let excess = inc.len().saturating_sub(k);
    if excess > 0 {
        delete_least_useful(inc, excess, rng);
    }
}

/// Random size-preserving swaps to escape an f2 plateau.
fn perturb_swaps<R: Rng>(sol: &mut Solution, params: &SearchParams, rng: &mut R) {
    let inc = match sol {
        Solution::Incomplete(inc) => inc,
        Solution::Complete(_) => unreachable!("incomplete representation required"),
    };
    let Ok(cand) = generate_candidate_set(inc, params.cand_policy, params.cand_size, rng) else {
        return;
    };
    for _ in 0..params.perturb_moves {
        let members = inc.snapshot();
        if members.is_empty() {
            return;
        }
        let avail: Vec<_> = cand.haps.iter().filter(|h| !inc.contains(h)).cloned().collect();
        if avail.is_empty() {
            return;
        }
        let del = members[rng.random_range(0..members.len())].clone();
        let ins = avail[rng.random_range(0..avail.len())].clone();
        if let MoveApplication::Applied(r) =
            apply_delete_insert(inc, &DeleteInsertMove { delete: del, insert: ins })
        {
            // keep the cardinality exact
            if r.delta().0 != 0 {
                undo_set_edit_on(inc, r);
            }
        }
    }
}
