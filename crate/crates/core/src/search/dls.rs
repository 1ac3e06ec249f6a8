//! Dynamic local search over the incomplete representation: descent on the
//! penalized objective w1*f1 + w2*f2, with w2 adapted by a shifting penalty
//! after every round.
//!
//! The neighborhood is the composite one (flips, deletions, insertions from
//! a candidate set): deletions let the search shed haplotypes once the
//! penalty is low, insertions restore feasibility once it has grown.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::init::InitKind;
use crate::model::Instance;
use crate::solution::{CostWeights, IncompleteSolution, Representation, Solution};

use super::{
    build_init, descent, NeighborhoodKind, SearchParams, SearchReport, ShiftingPenalty,
    TraceRow,
};

pub fn dls_solve(
    instance: &Arc<Instance>,
    weights: &CostWeights,
    params: &SearchParams,
) -> Result<SearchReport> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let deadline = params.deadline();
    let mut sol = build_init(instance, Representation::Incomplete, params, InitKind::Clark, &mut rng)?;

    let mut penalty = ShiftingPenalty::from_params(params, instance);
    let mut best_feasible: Option<(IncompleteSolution, usize)> = None;
    // lexicographic (f2, f1) fallback when no feasible state is ever seen
    let mut best_any: Option<(IncompleteSolution, (usize, usize))> = None;
    let mut trace = params.trace.then(Vec::new);
    let mut iterations = 0u64;
    let mut unbounded = u64::MAX;

    for iter in 0..params.max_iters {
        if deadline.expired() {
            break;
        }
        iterations = iter + 1;

        let dls_weights = CostWeights::new(penalty.w1, penalty.w2, 0.0);
        descent(
            &mut sol,
            NeighborhoodKind::Composite,
            &dls_weights,
            params,
            &mut rng,
            &deadline,
            &mut unbounded,
        );

        let inc = sol.as_incomplete().expect("incomplete representation");
        let cv = inc.cost_vector();
        let feasible = cv.f2 == 0;
        if feasible && best_feasible.as_ref().is_none_or(|(_, f1)| cv.f1 < *f1) {
            best_feasible = Some((inc.clone(), cv.f1));
        }
        if best_any.as_ref().is_none_or(|(_, key)| (cv.f2, cv.f1) < *key) {
            best_any = Some((inc.clone(), (cv.f2, cv.f1)));
        }

        penalty.observe(feasible, &mut rng);
        if let Some(t) = trace.as_mut() {
            t.push(TraceRow::of(iter + 1, &sol, weights));
        }
    }

    let best = best_feasible
        .map(|(s, _)| s)
        .or_else(|| best_any.map(|(s, _)| s))
        .unwrap_or_else(|| {
            sol.as_incomplete().expect("incomplete representation").clone()
        });
    let mut report =
        SearchReport::finish(Solution::Incomplete(best), weights, iterations, params.seed);
    report.final_w2 = Some(penalty.w2);
    report.trace = trace;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(seed: u64, iters: u64) -> SearchParams {
        SearchParams { seed, max_iters: iters, ..Default::default() }
    }

    #[test]
    fn homozygous_instance_is_immediate() {
        let inst = Instance::from_rows(&["00"]).unwrap();
        let report =
            dls_solve(&inst, &CostWeights::incomplete_default(1), &params(1, 20)).unwrap();
        assert!(report.feasible);
        assert_eq!(report.best_h, 1);
    }

    #[test]
    fn incompatible_pair_instance() {
        let inst = Instance::from_rows(&["20", "02"]).unwrap();
        let report =
            dls_solve(&inst, &CostWeights::incomplete_default(2), &params(5, 100)).unwrap();
        assert!(report.feasible);
        assert_eq!(report.best_h, 3);
    }

    #[test]
    fn zero_penalty_degenerates_to_cardinality_minimization() {
        // with w2 frozen at 0 the objective is w1*|H|; descent deletes
        // everything and the empty set comes back flagged infeasible
        let inst = Instance::from_rows(&["22"]).unwrap();
        let mut p = params(2, 5);
        p.w2_init = Some(0.0);
        let report = dls_solve(&inst, &CostWeights::incomplete_default(1), &p).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.best_h, 0);
        assert_eq!(report.final_w2, Some(0.0));
    }

    #[test]
    fn penalty_weight_stays_positive() {
        let inst = Instance::from_rows(&["0212", "2210"]).unwrap();
        let report =
            dls_solve(&inst, &CostWeights::incomplete_default(2), &params(3, 200)).unwrap();
        assert!(report.final_w2.unwrap() > 0.0);
        assert!(report.feasible);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let inst = Instance::from_rows(&["2210", "1220", "0022"]).unwrap();
        let run = || {
            dls_solve(&inst, &CostWeights::incomplete_default(3), &params(17, 150))
                .unwrap()
                .fingerprint()
        };
        assert_eq!(run(), run());
    }
}
