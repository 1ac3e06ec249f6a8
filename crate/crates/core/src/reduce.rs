//! Haplotype cardinality reduction on complete solutions.
//!
//! A reduction step re-resolves a target genotype through a donor haplotype
//! that already resolves some other genotype, replacing the target's current
//! pair ⟨h',k'⟩ with ⟨donor, complement⟩. The change in |H| is bounded by
//! the sharing structure of the replaced pair: if neither h' nor k' is
//! shared the bound is -1, if exactly one is shared it is 0, otherwise +1 —
//! one less in each case when the new complement is already in the set. The
//! bound is conservative; the measured delta is always recorded.

use crate::error::{Error, Result};
use crate::model::Haplotype;
use crate::solution::CompleteSolution;

/// A candidate re-resolution of one genotype through a shared haplotype.
#[derive(Clone, Debug)]
pub struct ReductionStep {
    /// Genotype whose pair is replaced.
    pub target: usize,
    /// Haplotype taking over the resolution; must currently resolve some
    /// other genotype and not be part of the target's pair.
    pub donor: Haplotype,
    /// The target's current pair.
    pub replaced: (Haplotype, Haplotype),
    /// ⟨donor, complement⟩ after the step.
    pub new_pair: (Haplotype, Haplotype),
    /// Upper bound on the change of |H|.
    pub predicted: i32,
}

/// A step that was applied, with its measured effect.
#[derive(Clone, Debug)]
pub struct AppliedStep {
    pub target: usize,
    pub donor: Haplotype,
    pub predicted: i32,
    pub actual: i32,
    /// |H| after the step.
    pub distinct_after: usize,
}

/// How `reduce` explores zero-delta steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducePolicy {
    /// Apply predicted-improving steps only.
    Greedy,
    /// Additionally try zero-delta steps that unlock an improving step.
    Lookahead1,
}

impl std::str::FromStr for ReducePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(ReducePolicy::Greedy),
            "lookahead1" => Ok(ReducePolicy::Lookahead1),
            _ => Err(Error::InvalidParam(format!(
                "unknown reduce policy {s:?} (expected greedy|lookahead1)"
            ))),
        }
    }
}

/// Ids of genotypes whose assigned pair contains h, ascending. Empty when h
/// is unused.
pub fn sharing_set(solution: &CompleteSolution, h: &Haplotype) -> Vec<usize> {
    (0..solution.instance().n())
        .filter(|&g| {
            let (a, b) = solution.pair(g);
            a == *h || b == *h
        })
        .collect()
}

/// Upper bound on the change of |H| when replacing a pair whose members are
/// shared by `a` and `b` genotypes respectively (both counts include the
/// target itself). `new_hap_exists` says whether the incoming complement is
/// already in the set.
pub fn predict_delta(a: usize, b: usize, new_hap_exists: bool) -> i32 {
    debug_assert!(a >= 1 && b >= 1);
    let base = if a == 1 && b == 1 {
        -1
    } else if a == 1 || b == 1 {
        0
    } else {
        1
    };
    base - i32::from(new_hap_exists)
}

/// Builds and validates a reduction step for (target, donor).
pub fn propose_step(
    solution: &CompleteSolution,
    target: usize,
    donor: &Haplotype,
) -> Result<ReductionStep> {
    let instance = solution.instance().clone();
    if target >= instance.n() {
        return Err(Error::UnknownGenotype { id: target + 1 });
    }
    let (h_old, k_old) = solution.pair(target);
    if *donor == h_old || *donor == k_old {
        return Err(Error::InvalidMove(format!(
            "donor {donor} already resolves genotype g{}",
            target + 1
        )));
    }
    let donors_genotypes = sharing_set(solution, donor);
    if donors_genotypes.is_empty() {
        return Err(Error::InvalidMove(format!(
            "donor {donor} does not resolve any genotype"
        )));
    }
    let complement = instance.genotype(target).complement(donor)?;
    let a = sharing_set(solution, &h_old).len();
    let b = sharing_set(solution, &k_old).len();
    let new_exists = solution.contains_hap(&complement);
    Ok(ReductionStep {
        target,
        donor: donor.clone(),
        replaced: (h_old, k_old),
        new_pair: (donor.clone(), complement),
        predicted: predict_delta(a, b, new_exists),
    })
}

/// Applies a validated step; the solution stays feasible and the measured
/// delta never exceeds the predicted bound. The solution is untouched when
/// the step no longer matches its current state.
pub fn apply_reduction(solution: &mut CompleteSolution, step: &ReductionStep) -> Result<AppliedStep> {
    // revalidate against the current state
    let fresh = propose_step(solution, step.target, &step.donor)?;
    if fresh.replaced != step.replaced {
        return Err(Error::InvalidMove(format!(
            "genotype g{}'s pair changed since the step was proposed",
            step.target + 1
        )));
    }
    let before = solution.distinct_count();
    solution
        .set_pair(step.target, step.donor.clone())
        .expect("donor compatibility was validated");
    let after = solution.distinct_count();
    let actual = after as i32 - before as i32;
    debug_assert!(actual <= fresh.predicted, "conservative bound violated");
    Ok(AppliedStep {
        target: step.target,
        donor: step.donor.clone(),
        predicted: fresh.predicted,
        actual,
        distinct_after: after,
    })
}

/// Enumerates candidate steps in a fixed order: targets by id, donors by
/// decreasing sharing-set size with lexicographic tiebreak.
fn candidate_steps(solution: &CompleteSolution) -> Vec<ReductionStep> {
    let instance = solution.instance().clone();
    let mut donors: Vec<(usize, Haplotype)> = solution
        .distinct_haplotypes()
        .into_iter()
        .map(|h| (sharing_set(solution, &h).len(), h))
        .collect();
    donors.sort_by(|(sa, ha), (sb, hb)| sb.cmp(sa).then_with(|| ha.cmp(hb)));

    let mut steps = Vec::new();
    for target in 0..instance.n() {
        let (h_old, k_old) = solution.pair(target);
        for (_, donor) in &donors {
            if *donor == h_old || *donor == k_old {
                continue;
            }
            if !instance
                .genotype(target)
                .compatible_hap(donor)
                .expect("uniform length")
            {
                continue;
            }
            let step = propose_step(solution, target, donor).expect("candidate is valid");
            steps.push(step);
        }
    }
    steps
}

/// Greedily applies predicted-improving steps until none remains; with
/// `Lookahead1`, zero-delta steps are kept when they unlock an improving
/// step. Never increases |H|; the result is a fixpoint of the procedure.
pub fn reduce(solution: &mut CompleteSolution, policy: ReducePolicy) -> Vec<AppliedStep> {
    let mut log = Vec::new();
    loop {
        let steps = candidate_steps(solution);
        if let Some(step) = steps.iter().find(|s| s.predicted <= -1) {
            log.push(apply_reduction(solution, step).expect("freshly enumerated step applies"));
            continue;
        }
        if policy == ReducePolicy::Lookahead1 {
            let mut advanced = false;
            for step in steps.iter().filter(|s| s.predicted == 0) {
                let undo_rep = solution.rep(step.target).clone();
                let applied =
                    apply_reduction(solution, step).expect("freshly enumerated step applies");
                if applied.actual <= -1
                    || candidate_steps(solution).iter().any(|s| s.predicted <= -1)
                {
                    log.push(applied);
                    advanced = true;
                    break;
                }
                solution
                    .set_pair(step.target, undo_rep)
                    .expect("restoring the previous pair");
            }
            if advanced {
                continue;
            }
        }
        break;
    }
    log
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Instance;
    use std::sync::Arc;

    fn h(s: &str) -> Haplotype {
        Haplotype::parse(s).unwrap()
    }

    fn appendix_instance() -> Arc<Instance> {
        Instance::from_rows(&["2210212", "2112110", "1212122", "1222122", "1202201"]).unwrap()
    }

    /// 8 distinct haplotypes; g3's pair (d, e) is unshared and a is shared
    /// by g1, g2 and g4.
    fn start_unshared_g3(instance: &Arc<Instance>) -> CompleteSolution {
        let pairs = vec![
            (h("1110110"), h("0010011")), // g1: a, b'
            (h("0111110"), h("1110110")), // g2: c, a
            (h("1111101"), h("1010110")), // g3: d, e
            (h("1110110"), h("1001101")), // g4: a, s
            (h("1101101"), h("1000001")), // g5: f, q
        ];
        CompleteSolution::from_pairs(instance.clone(), &pairs).unwrap()
    }

    /// 8 distinct haplotypes; d is shared between g3 and g4, g4's second
    /// member (1000110) is unshared.
    fn start_shared_d(instance: &Arc<Instance>) -> CompleteSolution {
        let pairs = vec![
            (h("1110110"), h("0010011")), // g1: a, b'
            (h("0111110"), h("1110110")), // g2: c, a
            (h("1111101"), h("1010110")), // g3: d, e
            (h("1111101"), h("1000110")), // g4: d, x
            (h("1101101"), h("1000001")), // g5: f, q
        ];
        CompleteSolution::from_pairs(instance.clone(), &pairs).unwrap()
    }

    #[test]
    fn sharing_sets() {
        let inst = appendix_instance();
        let sol = start_unshared_g3(&inst);
        assert_eq!(sharing_set(&sol, &h("1110110")), vec![0, 1, 3]); // a
        assert_eq!(sharing_set(&sol, &h("1111101")), vec![2]); // d
        assert_eq!(sharing_set(&sol, &h("1000001")), vec![4]); // q
        assert_eq!(sharing_set(&sol, &h("1111111")), Vec::<usize>::new());

        let shared = start_shared_d(&inst);
        assert_eq!(sharing_set(&shared, &h("1101101")), vec![4]); // f
        assert_eq!(sharing_set(&shared, &h("1111101")), vec![2, 3]); // d
    }

    #[test]
    fn predicted_delta_cases() {
        assert_eq!(predict_delta(1, 1, false), -1);
        assert_eq!(predict_delta(2, 1, false), 0);
        assert_eq!(predict_delta(1, 2, false), 0);
        assert_eq!(predict_delta(2, 2, false), 1);
        assert_eq!(predict_delta(2, 2, true), 0);
        assert_eq!(predict_delta(1, 1, true), -2);
    }

    #[test]
    fn reduction_of_g3_drops_one_haplotype() {
        let inst = appendix_instance();
        let mut sol = start_unshared_g3(&inst);
        let step = propose_step(&sol, 2, &h("1110110")).unwrap();
        assert_eq!(step.predicted, -1);
        assert_eq!(step.new_pair.1, h("1011101")); // r
        let applied = apply_reduction(&mut sol, &step).unwrap();
        assert_eq!(applied.actual, -1);
        assert_eq!(sol.distinct_count(), 7);
        assert!(sol.contains_hap(&h("1011101")));
        assert_eq!(sol.cost_vector(), sol.recompute_cost());
    }

    #[test]
    fn reduction_of_g4_keeps_cardinality() {
        let inst = appendix_instance();
        let mut sol = start_shared_d(&inst);
        // resolving g4 through a replaces (d, x): d stays via g3, x leaves,
        // and the new complement s enters
        let step = propose_step(&sol, 3, &h("1110110")).unwrap();
        assert_eq!(step.predicted, 0);
        assert_eq!(step.new_pair.1, h("1001101")); // s
        let applied = apply_reduction(&mut sol, &step).unwrap();
        assert_eq!(applied.actual, 0);
        assert_eq!(sol.distinct_count(), 8);
        assert!(sol.contains_hap(&h("1001101")));
    }

    #[test]
    fn degenerate_step_is_rejected() {
        let inst = appendix_instance();
        let sol = start_unshared_g3(&inst);
        // donor is already part of g1's pair
        assert!(propose_step(&sol, 0, &h("1110110")).is_err());
        // donor not used anywhere
        assert!(propose_step(&sol, 0, &h("0110011")).is_err());
    }

    #[test]
    fn stale_step_is_rejected() {
        let inst = appendix_instance();
        let mut sol = start_unshared_g3(&inst);
        let step = propose_step(&sol, 2, &h("1110110")).unwrap();
        apply_reduction(&mut sol, &step).unwrap();
        let err = apply_reduction(&mut sol, &step).unwrap_err();
        assert!(matches!(err, Error::InvalidMove(_)));
    }

    #[test]
    fn greedy_reduce_reaches_fixpoint() {
        let inst = appendix_instance();
        let mut sol = start_unshared_g3(&inst);
        let before = sol.distinct_count();
        let log = reduce(&mut sol, ReducePolicy::Greedy);
        assert!(!log.is_empty());
        assert!(sol.distinct_count() < before);
        assert!(log.iter().all(|s| s.actual <= s.predicted));
        // feasibility preserved
        assert_eq!(sol.cost_vector().f2, 0);
        assert_eq!(sol.cost_vector(), sol.recompute_cost());
        // re-running is the identity
        let again = reduce(&mut sol, ReducePolicy::Greedy);
        assert!(again.is_empty());
    }

    #[test]
    fn single_genotype_instance_is_unreducible() {
        let inst = Instance::from_rows(&["0212"]).unwrap();
        let mut sol =
            CompleteSolution::from_reps(inst, vec![h("0010")]).unwrap();
        let log = reduce(&mut sol, ReducePolicy::Greedy);
        assert!(log.is_empty());
        assert_eq!(sol.distinct_count(), 2);
    }

    #[test]
    fn all_shared_solution_is_a_greedy_fixpoint() {
        // two identical genotypes resolved identically: both members shared
        let inst = Instance::from_rows(&["0212", "0212"]).unwrap();
        let mut sol =
            CompleteSolution::from_reps(inst, vec![h("0010"), h("0010")]).unwrap();
        let log = reduce(&mut sol, ReducePolicy::Greedy);
        assert!(log.is_empty());
        assert_eq!(sol.distinct_count(), 2);
    }

    #[test]
    fn lookahead_never_worsens() {
        let inst = appendix_instance();
        let mut greedy_sol = start_shared_d(&inst);
        reduce(&mut greedy_sol, ReducePolicy::Greedy);
        let mut look_sol = start_shared_d(&inst);
        reduce(&mut look_sol, ReducePolicy::Lookahead1);
        assert!(look_sol.distinct_count() <= greedy_sol.distinct_count());
        assert_eq!(look_sol.cost_vector().f2, 0);
    }
}
