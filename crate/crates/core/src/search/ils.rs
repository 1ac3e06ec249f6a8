//! Two-neighborhood iterated local search: 1-Hamming descent to a local
//! optimum, then a perturbation phase over the delete/insert neighborhood
//! (pair re-draws in the complete representation), descent again, and an
//! acceptance decision against the incumbent.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::init::InitKind;
use crate::model::Instance;
use crate::neighborhood::{
    apply_delete_insert, generate_candidate_set, undo_set_edit_on, DeleteInsertMove,
    MoveApplication,
};
use crate::solution::{CostWeights, Representation, Solution};

use super::{
    build_init, descent, Acceptance, NeighborhoodKind, SearchParams, SearchReport,
    TraceRow, EPS,
};

pub fn ils_solve(
    instance: &Arc<Instance>,
    rep: Representation,
    weights: &CostWeights,
    params: &SearchParams,
) -> Result<SearchReport> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let deadline = params.deadline();
    let default_init = match rep {
        Representation::Complete => InitKind::Trivial,
        Representation::Incomplete => InitKind::Clark,
    };
    let mut cur = build_init(instance, rep, params, default_init, &mut rng)?;

    let mut unbounded = u64::MAX;
    descent(
        &mut cur,
        NeighborhoodKind::Hamming1,
        weights,
        params,
        &mut rng,
        &deadline,
        &mut unbounded,
    );

    let mut accepted = cur.clone();
    let mut accepted_f = accepted.total_cost(weights);
    let mut best = accepted.clone();
    let mut best_f = accepted_f;
    let mut rejections = 0u64;
    let mut trace = params.trace.then(Vec::new);
    let mut iterations = 0u64;

    for iter in 0..params.max_iters {
        if deadline.expired() {
            break;
        }
        iterations = iter + 1;

        perturb(&mut cur, weights, params, &mut rng);
        descent(
            &mut cur,
            NeighborhoodKind::Hamming1,
            weights,
            params,
            &mut rng,
            &deadline,
            &mut unbounded,
        );

        let candidate_f = cur.total_cost(weights);
        if candidate_f < best_f - EPS {
            best = cur.clone();
            best_f = candidate_f;
        }

        let accept = match params.acceptance {
            Acceptance::NonWorsening => candidate_f <= accepted_f + EPS,
            Acceptance::Improving => candidate_f < accepted_f - EPS,
            Acceptance::Always => true,
        };
        if accept {
            accepted = cur.clone();
            accepted_f = candidate_f;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= params.restart_after {
                accepted = best.clone();
                accepted_f = best_f;
                rejections = 0;
            }
            cur = accepted.clone();
        }

        if let Some(t) = trace.as_mut() {
            t.push(TraceRow::of(iter + 1, &accepted, weights));
        }
    }

    let mut report = SearchReport::finish(best, weights, iterations, params.seed);
    report.trace = trace;
    Ok(report)
}

/// Perturbation phase. Incomplete representation: a fixed number of
/// delete/insert moves, first-improvement from a fresh candidate set,
/// falling back to a random swap when nothing improves. Complete
/// representation: re-draw random resolving pairs for random genotypes with
/// heterozygosity >= 2.
fn perturb<R: Rng>(sol: &mut Solution, w: &CostWeights, params: &SearchParams, rng: &mut R) {
    match sol {
        Solution::Incomplete(inc) => {
            let Ok(cand) =
                generate_candidate_set(inc, params.cand_policy, params.cand_size, rng)
            else {
                return;
            };
            for _ in 0..params.perturb_moves {
                let members = inc.snapshot();
                if members.is_empty() {
                    let avail: Vec<_> =
                        cand.haps.iter().filter(|h| !inc.contains(h)).cloned().collect();
                    if avail.is_empty() {
                        return;
                    }
                    let pick = avail[rng.random_range(0..avail.len())].clone();
                    inc.insert(pick);
                    continue;
                }
                let mut applied = false;
                'scan: for del in &members {
                    if !inc.contains(del) {
                        continue;
                    }
                    for ins in &cand.haps {
                        if inc.contains(ins) {
                            continue;
                        }
                        let mv = DeleteInsertMove { delete: del.clone(), insert: ins.clone() };
                        if let MoveApplication::Applied(r) = apply_delete_insert(inc, &mv) {
                            if r.after().total(w) + EPS < r.before().total(w) {
                                applied = true;
                                break 'scan;
                            }
                            undo_set_edit_on(inc, r);
                        }
                    }
                }
                if !applied {
                    // random walk step to leave the attractor
                    let del = members[rng.random_range(0..members.len())].clone();
                    let avail: Vec<_> =
                        cand.haps.iter().filter(|h| !inc.contains(h)).cloned().collect();
                    if avail.is_empty() {
                        return;
                    }
                    let ins = avail[rng.random_range(0..avail.len())].clone();
                    let _ = apply_delete_insert(inc, &DeleteInsertMove { delete: del, insert: ins });
                }
            }
        }
        Solution::Complete(c) => {
            let instance = c.instance().clone();
            let movable: Vec<usize> = (0..instance.n())
                .filter(|&g| instance.genotype(g).het_count() >= 2)
                .collect();
            if movable.is_empty() {
                return;
            }
            for _ in 0..params.perturb_moves {
                let g = movable[rng.random_range(0..movable.len())];
                let geno = instance.genotype(g);
                let mut rep = geno.min_compatible_hap();
                for &site in geno.het_sites().iter().skip(1) {
                    if rng.random_bool(0.5) {
                        rep.flip(site);
                    }
                }
                c.set_pair(g, rep).expect("compatible by construction");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(seed: u64, iters: u64) -> SearchParams {
        SearchParams { seed, max_iters: iters, ..Default::default() }
    }

    #[test]
    fn single_heterozygous_genotype_needs_two() {
        let inst = Instance::from_rows(&["0212"]).unwrap();
        let report = ils_solve(
            &inst,
            Representation::Complete,
            &CostWeights::complete_default(),
            &params(3, 50),
        )
        .unwrap();
        assert_eq!(report.best_h, 2);
        assert!(report.feasible);
    }

    #[test]
    fn incompatible_genotypes_need_three() {
        let inst = Instance::from_rows(&["20", "02"]).unwrap();
        let report = ils_solve(
            &inst,
            Representation::Complete,
            &CostWeights::complete_default(),
            &params(3, 50),
        )
        .unwrap();
        assert_eq!(report.best_h, 3);
    }

    #[test]
    fn worked_instance_reaches_seven_or_better() {
        let inst =
            Instance::from_rows(&["2210212", "2112110", "1212122", "1222122", "1202201"]).unwrap();
        let report = ils_solve(
            &inst,
            Representation::Complete,
            &CostWeights::complete_default(),
            &params(7, 2_000),
        )
        .unwrap();
        assert!(report.feasible);
        assert!(report.best_h <= 7, "got {}", report.best_h);
    }

    #[test]
    fn incomplete_representation_runs() {
        let inst = Instance::from_rows(&["0212", "0202"]).unwrap();
        let report = ils_solve(
            &inst,
            Representation::Incomplete,
            &CostWeights::incomplete_default(2),
            &params(11, 200),
        )
        .unwrap();
        assert!(report.feasible);
        assert!(report.best_h <= 4);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let inst = Instance::from_rows(&["2210", "1220", "0022"]).unwrap();
        let run = || {
            ils_solve(
                &inst,
                Representation::Complete,
                &CostWeights::complete_default(),
                &params(99, 300),
            )
            .unwrap()
        };
        assert_eq!(run().fingerprint(), run().fingerprint());
    }

    #[test]
    fn incumbent_best_matches_trace_minimum() {
        let inst = Instance::from_rows(&["2222", "0202", "1212"]).unwrap();
        let mut p = params(5, 200);
        p.trace = true;
        let report = ils_solve(
            &inst,
            Representation::Complete,
            &CostWeights::complete_default(),
            &p,
        )
        .unwrap();
        let trace = report.trace.as_ref().unwrap();
        let min_f = trace.iter().map(|r| r.f).fold(f64::INFINITY, f64::min);
        assert!(report.best_f <= min_f + EPS);
    }
}
