//! Exhaustive branch-and-bound solver for small instances.
//!
//! Enumerates per-genotype pair choices, pruning branches whose running
//! distinct-haplotype count cannot beat the incumbent. Ground truth for the
//! metaheuristics on desk-scale instances; refuses instances whose
//! resolution-state product exceeds a configurable limit.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::init::greedy_clark_init;
use crate::model::{Haplotype, Instance};
use crate::solution::CompleteSolution;

#[derive(Clone, Copy, Debug)]
pub struct ExactLimits {
    /// Refuse instances whose product of per-genotype pair counts exceeds
    /// this.
    pub max_states: u128,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits { max_states: 10_000_000 }
    }
}

#[derive(Clone, Debug)]
pub struct ExactResult {
    /// Minimum number of distinct haplotypes over all complete resolutions.
    pub optimum: usize,
    pub witness: CompleteSolution,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

struct Search<'a> {
    instance: &'a Arc<Instance>,
    /// Genotype ids, most heterozygous first.
    order: Vec<usize>,
    /// Multiset of haplotypes used by the partial assignment.
    counts: HashMap<Haplotype, u32>,
    distinct: usize,
    chosen: Vec<Haplotype>,
    best: usize,
    best_reps: Vec<Haplotype>,
    nodes: u64,
}

impl Search<'_> {
    fn add(&mut self, h: &Haplotype) {
        let c = self.counts.entry(h.clone()).or_insert(0);
        if *c == 0 {
            self.distinct += 1;
        }
        *c += 1;
    }

    fn remove(&mut self, h: &Haplotype) {
        let c = self.counts.get_mut(h).expect("haplotype in multiset");
        *c -= 1;
        if *c == 0 {
            self.distinct -= 1;
        }
    }

    fn descend(&mut self, depth: usize) {
        self.nodes += 1;
        if self.distinct >= self.best {
            return;
        }
        let Some(&g_id) = self.order.get(depth) else {
            self.best = self.distinct;
            let mut reps = vec![None; self.instance.n()];
            for (d, rep) in self.chosen.iter().enumerate() {
                reps[self.order[d]] = Some(rep.clone());
            }
            self.best_reps = reps.into_iter().map(|r| r.expect("full assignment")).collect();
            return;
        };

        let g = self.instance.genotype(g_id);
        let het = g.het_sites();
        let free = het.iter().skip(1).copied().collect::<Vec<_>>();
        let mut pairs: Vec<(u32, Haplotype, Haplotype)> = Vec::new();
        for assign in 0u64..(1 << free.len()) {
            let mut rep = g.min_compatible_hap();
            for (bit, &site) in free.iter().enumerate() {
                if assign >> bit & 1 == 1 {
                    rep.flip(site);
                }
            }
            let partner = g.complement(&rep).expect("compatible");
            let new_haps = if rep == partner {
                u32::from(!self.counts.contains_key(&rep))
            } else {
                u32::from(!self.counts.contains_key(&rep))
                    + u32::from(!self.counts.contains_key(&partner))
            };
            pairs.push((new_haps, rep, partner));
        }
        // try choices that reuse existing haplotypes first
        pairs.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

        for (_, rep, partner) in pairs {
            self.add(&rep);
            self.add(&partner);
            self.chosen.push(rep.clone());
            self.descend(depth + 1);
            self.chosen.pop();
            self.remove(&partner);
            self.remove(&rep);
        }
    }
}

/// Computes the exact pure-parsimony optimum and one witness solution.
/// Deterministic and seed-independent.
pub fn exact_min_haplotypes(
    instance: &Arc<Instance>,
    limits: &ExactLimits,
) -> Result<ExactResult> {
    let states = instance.resolution_state_count();
    if states > limits.max_states {
        return Err(Error::TooManyStates {
            states,
            limit: limits.max_states,
        });
    }

    // greedy construction gives the initial incumbent
    let incumbent = greedy_clark_init(instance);
    let mut order: Vec<usize> = (0..instance.n()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(instance.genotype(i).het_count()));

    let mut search = Search {
        instance,
        order,
        counts: HashMap::new(),
        distinct: 0,
        chosen: Vec::new(),
        best: incumbent.distinct_count(),
        best_reps: (0..instance.n())
            .map(|i| incumbent.rep(i).clone())
            .collect(),
        nodes: 0,
    };
    search.descend(0);

    let witness = CompleteSolution::from_reps(instance.clone(), search.best_reps)?;
    debug_assert_eq!(witness.distinct_count(), search.best);
    Ok(ExactResult {
        optimum: search.best,
        witness,
        nodes: search.nodes,
    })
}

/// True iff every genotype is resolved by its assigned pair. Mismatched
/// lengths or a wrong pair count simply yield false.
pub fn verify_solution(instance: &Instance, pairs: &[(Haplotype, Haplotype)]) -> bool {
    pairs.len() == instance.n()
        && pairs
            .iter()
            .enumerate()
            .all(|(i, (h, k))| instance.genotype(i).resolved_by(h, k).unwrap_or(false))
}
