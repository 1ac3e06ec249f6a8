//! Initial-solution builders: random complete resolution, a Clark-style
//! greedy construction, and the empty haplotype set.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Haplotype, Instance};
use crate::solution::{CompleteSolution, IncompleteSolution, Representation, Solution};

/// Which initializer a run starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    Trivial,
    Clark,
    Empty,
}

impl std::str::FromStr for InitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(InitKind::Trivial),
            "clark" => Ok(InitKind::Clark),
            "empty" => Ok(InitKind::Empty),
            _ => Err(Error::InvalidParam(format!(
                "unknown initializer {s:?} (expected trivial|clark|empty)"
            ))),
        }
    }
}

impl std::fmt::Display for InitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InitKind::Trivial => "trivial",
            InitKind::Clark => "clark",
            InitKind::Empty => "empty",
        })
    }
}

impl InitKind {
    /// Builds an initial solution in the requested representation. The
    /// empty initializer exists only for the incomplete representation.
    pub fn build<R: Rng>(
        self,
        instance: &Arc<Instance>,
        rep: Representation,
        rng: &mut R,
    ) -> Result<Solution> {
        match (self, rep) {
            (InitKind::Trivial, Representation::Complete) => {
                Ok(Solution::Complete(trivial_complete_init(instance, rng)))
            }
            (InitKind::Trivial, Representation::Incomplete) => Ok(Solution::Incomplete(
                trivial_complete_init(instance, rng).to_incomplete(),
            )),
            (InitKind::Clark, Representation::Complete) => {
                Ok(Solution::Complete(greedy_clark_init(instance)))
            }
            (InitKind::Clark, Representation::Incomplete) => Ok(Solution::Incomplete(
                greedy_clark_init(instance).to_incomplete(),
            )),
            (InitKind::Empty, Representation::Incomplete) => {
                Ok(Solution::Incomplete(empty_init(instance)))
            }
            (InitKind::Empty, Representation::Complete) => Err(Error::InvalidParam(
                "the empty initializer requires the incomplete representation".into(),
            )),
        }
    }
}

/// Resolves each genotype by a uniformly random pair among its 2^(l-1)
/// options. Feasible by construction.
pub fn trivial_complete_init<R: Rng>(instance: &Arc<Instance>, rng: &mut R) -> CompleteSolution {
    let reps = instance
        .genotypes()
        .iter()
        .map(|g| {
            // fixing the first heterozygous site to 0 enumerates exactly one
            // representative per unordered pair; the remaining l-1 bits are free
            let mut rep = g.min_compatible_hap();
            for &site in g.het_sites().iter().skip(1) {
                if rng.random_bool(0.5) {
                    rep.flip(site);
                }
            }
            rep
        })
        .collect();
    CompleteSolution::from_reps(instance.clone(), reps).expect("constructed pairs are valid")
}

/// Deterministic greedy construction. Seed phase: genotypes with at most one
/// heterozygous site have a unique pair. Inference phase: repeatedly resolve
/// an unresolved genotype through a known compatible haplotype, preferring
/// haplotypes compatible with many genotypes (lexicographic tiebreak), and
/// add the new complement to the known set. Fallback: remaining genotypes
/// get the resolving pair whose larger member is lexicographically smallest.
pub fn greedy_clark_init(instance: &Arc<Instance>) -> CompleteSolution {
    let n = instance.n();
    let mut reps: Vec<Option<Haplotype>> = vec![None; n];
    let mut known: Vec<Haplotype> = Vec::new();

    let learn = |known: &mut Vec<Haplotype>, h: Haplotype| {
        if !known.contains(&h) {
            known.push(h);
        }
    };

    for (i, g) in instance.genotypes().iter().enumerate() {
        if g.het_count() <= 1 {
            let rep = g.min_compatible_hap();
            let partner = g.complement(&rep).expect("own haplotype is compatible");
            learn(&mut known, rep.clone());
            learn(&mut known, partner);
            reps[i] = Some(rep);
        }
    }

    loop {
        let mut best: Option<(u32, Haplotype, usize)> = None;
        for (i, g) in instance.genotypes().iter().enumerate() {
            if reps[i].is_some() {
                continue;
            }
            for h in &known {
                if !g.compatible_hap(h).expect("uniform length") {
                    continue;
                }
                let score = instance.compatible_count(h);
                let better = match &best {
                    None => true,
                    Some((bs, bh, _)) => score > *bs || (score == *bs && h < bh),
                };
                if better {
                    best = Some((score, h.clone(), i));
                }
            }
        }
        let Some((_, h, i)) = best else { break };
        let partner = instance.genotype(i).complement(&h).expect("compatible");
        learn(&mut known, partner.clone());
        reps[i] = Some(if h <= partner { h } else { partner });
    }

    for (i, g) in instance.genotypes().iter().enumerate() {
        if reps[i].is_none() {
            // smallest haplotype that is the larger of its pair: 1 at the
            // first heterozygous site, 0 at the others
            let mut larger = g.min_compatible_hap();
            if let Some(&first) = g.het_sites().first() {
                larger.flip(first);
            }
            let rep = g.complement(&larger).expect("compatible");
            reps[i] = Some(rep.min(larger));
        }
    }

    let reps = reps.into_iter().map(|r| r.expect("all resolved")).collect();
    CompleteSolution::from_reps(instance.clone(), reps).expect("constructed pairs are valid")
}

/// The empty haplotype set: |H| = 0, f2 = n.
pub fn empty_init(instance: &Arc<Instance>) -> IncompleteSolution {
    IncompleteSolution::empty(instance.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h(s: &str) -> Haplotype {
        Haplotype::parse(s).unwrap()
    }

    #[test]
    fn trivial_on_homozygous_instance_is_forced() {
        let inst = Instance::from_rows(&["00"]).unwrap();
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sol = trivial_complete_init(&inst, &mut rng);
            assert_eq!(sol.pair(0), (h("00"), h("00")));
        }
    }

    #[test]
    fn trivial_picks_a_valid_pair() {
        let inst = Instance::from_rows(&["0212"]).unwrap();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sol = trivial_complete_init(&inst, &mut rng);
            let (a, b) = sol.pair(0);
            // one of the two unordered pairs resolving (0212)
            let expected = [
                (h("0010"), h("0111")),
                (h("0011"), h("0110")),
            ];
            assert!(expected.contains(&(a, b)));
        }
    }

    #[test]
    fn trivial_respects_2n_bound() {
        let inst = Instance::from_rows(&["2222", "0202", "1122"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sol = trivial_complete_init(&inst, &mut rng);
        assert!(sol.distinct_count() <= 2 * inst.n());
        assert_eq!(sol.cost_vector().f2, 0);
    }

    #[test]
    fn clark_reuses_seed_haplotypes() {
        let inst = Instance::from_rows(&["01", "02"]).unwrap();
        let sol = greedy_clark_init(&inst);
        assert_eq!(sol.distinct_count(), 2);
        assert_eq!(sol.pair(0), (h("01"), h("01")));
        assert_eq!(sol.pair(1), (h("00"), h("01")));
    }

    #[test]
    fn clark_on_all_homozygous_instance() {
        let inst = Instance::from_rows(&["00", "11", "00"]).unwrap();
        let sol = greedy_clark_init(&inst);
        assert_eq!(sol.distinct_count(), 2);
        for i in 0..3 {
            let (a, b) = sol.pair(i);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn clark_fallback_pair() {
        let inst = Instance::from_rows(&["22"]).unwrap();
        let sol = greedy_clark_init(&inst);
        assert_eq!(sol.pair(0), (h("01"), h("10")));
    }

    #[test]
    fn clark_is_deterministic() {
        let inst =
            Instance::from_rows(&["2210212", "2112110", "1212122", "1222122", "1202201"]).unwrap();
        let a = greedy_clark_init(&inst);
        let b = greedy_clark_init(&inst);
        assert_eq!(a, b);
        assert_eq!(a.cost_vector(), a.recompute_cost());
    }

    #[test]
    fn empty_init_costs() {
        let inst =
            Instance::from_rows(&["2210212", "2112110", "1212122", "1222122", "1202201"]).unwrap();
        let sol = empty_init(&inst);
        assert_eq!(sol.len(), 0);
        assert_eq!(sol.cost_vector().f2, 5);
        assert!(sol.resolved_genotypes().is_empty());
    }

    #[test]
    fn empty_requires_incomplete_representation() {
        let inst = Instance::from_rows(&["00"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(InitKind::Empty
            .build(&inst, Representation::Complete, &mut rng)
            .is_err());
        assert!(InitKind::Empty
            .build(&inst, Representation::Incomplete, &mut rng)
            .is_ok());
    }
}
