//! Search-space representations and the cost function.
//!
//! Two representations: `CompleteSolution` keeps one resolving pair per
//! genotype (always feasible, stored as the lexicographically smaller
//! representative), `IncompleteSolution` is a set of distinct haplotypes
//! where feasibility is a cost component.
//!
//! Cost components: f1 = |H|, f2 = number of unresolved genotypes,
//! f3 = total compatibility count over H (to be maximized, folded into
//! f3' = n|H| - f3), combined as F = a1*f1 + a2*f2 + a3*f3'.
//!
//! Both solution types maintain f1/f2/f3 incrementally under moves; the
//! standalone functions at the bottom recompute everything from scratch and
//! serve as the test oracle.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::model::{Haplotype, Instance};

/// Weights of the combined cost F = alpha1*f1 + alpha2*f2 + alpha3*f3'.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostWeights {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl CostWeights {
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Self {
        CostWeights { alpha1, alpha2, alpha3 }
    }

    /// Defaults for the complete representation, where f2 is always zero.
    pub fn complete_default() -> Self {
        CostWeights::new(1.0, 0.0, 0.01)
    }

    /// Defaults for the incomplete representation: the feasibility term must
    /// dominate the others, so alpha2 scales with the instance size.
    pub fn incomplete_default(n: usize) -> Self {
        CostWeights::new(1.0, 4.0 * n as f64, 0.01)
    }
}

/// Integer cost components of a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostVector {
    pub f1: usize,
    pub f2: usize,
    pub f3: usize,
    /// Number of genotypes of the instance (for f3').
    pub n: usize,
}

impl CostVector {
    pub fn f3_prime(&self) -> usize {
        self.n * self.f1 - self.f3
    }

    pub fn total(&self, w: &CostWeights) -> f64 {
        w.alpha1 * self.f1 as f64 + w.alpha2 * self.f2 as f64 + w.alpha3 * self.f3_prime() as f64
    }

    pub fn feasible(&self) -> bool {
        self.f2 == 0
    }
}

/// Which search-space representation a solver state uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Complete,
    Incomplete,
}

impl std::str::FromStr for Representation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(Representation::Complete),
            "incomplete" => Ok(Representation::Incomplete),
            _ => Err(Error::InvalidParam(format!(
                "unknown representation {s:?} (expected complete|incomplete)"
            ))),
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Complete => "complete",
            Representation::Incomplete => "incomplete",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct HapUse {
    /// Multiset multiplicity over all assigned pairs.
    uses: u32,
    /// |compatible_set(h)| on the instance.
    compat: u32,
}

/// A fully resolved state: one canonical representative haplotype per
/// genotype (the partner is its complement, and rep <= partner
/// lexicographically). Feasible by construction.
#[derive(Clone)]
pub struct CompleteSolution {
    instance: Arc<Instance>,
    reps: Vec<Haplotype>,
    haps: IndexMap<Haplotype, HapUse>,
    f3: usize,
}

impl CompleteSolution {
    /// Builds from one compatible haplotype per genotype; each is
    /// canonicalized against its complement.
    pub fn from_reps(instance: Arc<Instance>, reps: Vec<Haplotype>) -> Result<Self> {
        if reps.len() != instance.n() {
            return Err(Error::InvalidParam(format!(
                "expected {} representatives, got {}",
                instance.n(),
                reps.len()
            )));
        }
        let mut sol = CompleteSolution {
            instance: instance.clone(),
            reps: Vec::with_capacity(reps.len()),
            haps: IndexMap::new(),
            f3: 0,
        };
        for (i, rep) in reps.into_iter().enumerate() {
            let partner = instance.genotype(i).complement(&rep)?;
            let canonical = if rep <= partner { rep } else { partner };
            let other = instance.genotype(i).complement(&canonical)?;
            sol.add_use(canonical.clone());
            sol.add_use(other);
            sol.reps.push(canonical);
        }
        Ok(sol)
    }

    /// Builds from explicit pairs, validating that each pair resolves its
    /// genotype.
    pub fn from_pairs(instance: Arc<Instance>, pairs: &[(Haplotype, Haplotype)]) -> Result<Self> {
        if pairs.len() != instance.n() {
            return Err(Error::InvalidParam(format!(
                "expected {} pairs, got {}",
                instance.n(),
                pairs.len()
            )));
        }
        for (i, (h, k)) in pairs.iter().enumerate() {
            if !instance.genotype(i).resolved_by(h, k)? {
                return Err(Error::Unresolved { genotype: i + 1 });
            }
        }
        let reps = pairs.iter().map(|(h, k)| h.min(k).clone()).collect();
        CompleteSolution::from_reps(instance, reps)
    }

    pub fn instance(&self) -> &Arc<Instance> {
        &self.instance
    }

    pub fn rep(&self, genotype: usize) -> &Haplotype {
        &self.reps[genotype]
    }

    /// The assigned pair, canonical order (rep first).
    pub fn pair(&self, genotype: usize) -> (Haplotype, Haplotype) {
        let rep = self.reps[genotype].clone();
        let partner = self
            .instance
            .genotype(genotype)
            .complement(&rep)
            .expect("stored representative is compatible");
        (rep, partner)
    }

    /// Re-resolves one genotype through the given compatible haplotype.
    /// Returns the previous representative (for undo).
    pub fn set_pair(&mut self, genotype: usize, hap: Haplotype) -> Result<Haplotype> {
        if genotype >= self.reps.len() {
            return Err(Error::UnknownGenotype { id: genotype + 1 });
        }
        let partner = self.instance.genotype(genotype).complement(&hap)?;
        let (canonical, other) = if hap <= partner {
            (hap, partner)
        } else {
            (partner, hap)
        };
        let old_rep = self.reps[genotype].clone();
        let old_partner = self
            .instance
            .genotype(genotype)
            .complement(&old_rep)
            .expect("stored representative is compatible");
        self.remove_use(&old_rep);
        self.remove_use(&old_partner);
        self.add_use(canonical.clone());
        self.add_use(other);
        self.reps[genotype] = canonical;
        Ok(old_rep)
    }

    fn add_use(&mut self, h: Haplotype) {
        match self.haps.get_mut(&h) {
            Some(entry) => entry.uses += 1,
            None => {
                let compat = self.instance.compatible_count(&h);
                self.f3 += compat as usize;
                self.haps.insert(h, HapUse { uses: 1, compat });
            }
        }
    }

    fn remove_use(&mut self, h: &Haplotype) {
        let entry = self.haps.get_mut(h).expect("haplotype in use");
        entry.uses -= 1;
        if entry.uses == 0 {
            let compat = entry.compat;
            self.f3 -= compat as usize;
            self.haps.shift_remove(h);
        }
    }

    /// Distinct haplotypes used across all pairs, sorted.
    pub fn distinct_haplotypes(&self) -> Vec<Haplotype> {
        let mut haps: Vec<Haplotype> = self.haps.keys().cloned().collect();
        haps.sort();
        haps
    }

    pub fn contains_hap(&self, h: &Haplotype) -> bool {
        self.haps.contains_key(h)
    }

    pub fn distinct_count(&self) -> usize {
        self.haps.len()
    }

    pub fn cost_vector(&self) -> CostVector {
        CostVector {
            f1: self.haps.len(),
            f2: 0,
            f3: self.f3,
            n: self.instance.n(),
        }
    }

    /// Full recomputation of the cost vector, for cross-checking the
    /// incremental bookkeeping.
    pub fn recompute_cost(&self) -> CostVector {
        let haps = self.distinct_haplotypes();
        CostVector {
            f1: f1(&haps),
            f2: f2(&haps, &self.instance),
            f3: f3(&haps, &self.instance),
            n: self.instance.n(),
        }
    }

    /// Forgets the pair assignment and keeps the distinct haplotype set.
    pub fn to_incomplete(&self) -> IncompleteSolution {
        let mut sol = IncompleteSolution::empty(self.instance.clone());
        for h in self.haps.keys() {
            sol.insert(h.clone());
        }
        sol
    }
}

impl PartialEq for CompleteSolution {
    fn eq(&self, other: &Self) -> bool {
        self.reps == other.reps
    }
}

impl fmt::Debug for CompleteSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CompleteSolution(|H|={}", self.haps.len())?;
        for (i, rep) in self.reps.iter().enumerate() {
            write!(f, ", g{}={}", i + 1, rep)?;
        }
        write!(f, ")")
    }
}

/// Outcome of inserting a haplotype into an incomplete solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    AlreadyPresent,
    /// Rejected: the haplotype is compatible with no genotype, so it can
    /// never take part in a resolution.
    NoCompatibleGenotype,
}

/// A set of distinct haplotypes; genotype resolution is only potential.
///
/// Members are kept in insertion order so neighborhood enumeration is
/// deterministic. Per-genotype resolution support and per-haplotype
/// compatibility counts are maintained incrementally.
#[derive(Clone)]
pub struct IncompleteSolution {
    instance: Arc<Instance>,
    haps: IndexMap<Haplotype, u32>,
    /// Per genotype: number of members h with h compatible and complement
    /// present (a self-complement counts once).
    support: Vec<u32>,
    resolved: usize,
    f3: usize,
}

impl IncompleteSolution {
    pub fn empty(instance: Arc<Instance>) -> Self {
        let n = instance.n();
        IncompleteSolution {
            instance,
            haps: IndexMap::new(),
            support: vec![0; n],
            resolved: 0,
            f3: 0,
        }
    }

    pub fn from_haps<I: IntoIterator<Item = Haplotype>>(
        instance: Arc<Instance>,
        haps: I,
    ) -> Result<Self> {
        let mut sol = IncompleteSolution::empty(instance);
        for h in haps {
            if sol.insert(h.clone()) == InsertOutcome::NoCompatibleGenotype {
                return Err(Error::InvalidParam(format!(
                    "haplotype {h} is compatible with no genotype"
                )));
            }
        }
        Ok(sol)
    }

    pub fn instance(&self) -> &Arc<Instance> {
        &self.instance
    }

    pub fn len(&self) -> usize {
        self.haps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.haps.is_empty()
    }

    pub fn contains(&self, h: &Haplotype) -> bool {
        self.haps.contains_key(h)
    }

    /// Members in insertion order.
    pub fn members(&self) -> impl Iterator<Item = &Haplotype> {
        self.haps.keys()
    }

    pub fn snapshot(&self) -> Vec<Haplotype> {
        self.haps.keys().cloned().collect()
    }

    pub fn insert(&mut self, h: Haplotype) -> InsertOutcome {
        if self.haps.contains_key(&h) {
            return InsertOutcome::AlreadyPresent;
        }
        let compat_set = self.instance.compatible_set(&h);
        if compat_set.is_empty() {
            return InsertOutcome::NoCompatibleGenotype;
        }
        for &g in &compat_set {
            let partner = self
                .instance
                .genotype(g)
                .complement(&h)
                .expect("compatible by construction");
            let gained = if partner == h {
                1
            } else if self.haps.contains_key(&partner) {
                2
            } else {
                0
            };
            if gained > 0 {
                if self.support[g] == 0 {
                    self.resolved += 1;
                }
                self.support[g] += gained;
            }
        }
        self.f3 += compat_set.len();
        self.haps.insert(h, compat_set.len() as u32);
        InsertOutcome::Inserted
    }

    pub fn remove(&mut self, h: &Haplotype) -> bool {
        let Some(&compat) = self.haps.get(h) else {
            return false;
        };
        for g in self.instance.compatible_set(h) {
            let partner = self
                .instance
                .genotype(g)
                .complement(h)
                .expect("compatible by construction");
            let lost = if partner == *h {
                1
            } else if self.haps.contains_key(&partner) {
                2
            } else {
                0
            };
            if lost > 0 {
                self.support[g] -= lost;
                if self.support[g] == 0 {
                    self.resolved -= 1;
                }
            }
        }
        self.f3 -= compat as usize;
        self.haps.shift_remove(h);
        true
    }

    pub fn is_resolved(&self, genotype: usize) -> bool {
        self.support[genotype] > 0
    }

    /// Ids of resolved genotypes, ascending.
    pub fn resolved_genotypes(&self) -> Vec<usize> {
        (0..self.support.len())
            .filter(|&g| self.support[g] > 0)
            .collect()
    }

    /// Ids of unresolved genotypes, ascending.
    pub fn unresolved_genotypes(&self) -> Vec<usize> {
        (0..self.support.len())
            .filter(|&g| self.support[g] == 0)
            .collect()
    }

    /// Number of genotypes whose current resolution can use h (h compatible
    /// and complement present).
    pub fn use_count(&self, h: &Haplotype) -> u32 {
        if !self.haps.contains_key(h) {
            return 0;
        }
        let mut count = 0;
        for g in self.instance.compatible_set(h) {
            let partner = self
                .instance
                .genotype(g)
                .complement(h)
                .expect("compatible by construction");
            if partner == *h || self.haps.contains_key(&partner) {
                count += 1;
            }
        }
        count
    }

    pub fn cost_vector(&self) -> CostVector {
        CostVector {
            f1: self.haps.len(),
            f2: self.instance.n() - self.resolved,
            f3: self.f3,
            n: self.instance.n(),
        }
    }

    /// Full recomputation, for cross-checking the incremental bookkeeping.
    pub fn recompute_cost(&self) -> CostVector {
        let haps = self.snapshot();
        CostVector {
            f1: f1(&haps),
            f2: f2(&haps, &self.instance),
            f3: f3(&haps, &self.instance),
            n: self.instance.n(),
        }
    }

    /// For each genotype, the resolving pair with the lexicographically
    /// smallest first member, if any.
    pub fn resolving_pairs(&self) -> Vec<Option<(Haplotype, Haplotype)>> {
        let mut sorted = self.snapshot();
        sorted.sort();
        (0..self.instance.n())
            .map(|g| {
                let geno = self.instance.genotype(g);
                for h in &sorted {
                    if geno.compatible_hap(h).expect("uniform length") {
                        let partner = geno.complement(h).expect("compatible");
                        if partner == *h || self.contains(&partner) {
                            return Some((h.clone(), partner));
                        }
                    }
                }
                None
            })
            .collect()
    }
}

impl PartialEq for IncompleteSolution {
    fn eq(&self, other: &Self) -> bool {
        self.haps.len() == other.haps.len()
            && self.haps.keys().all(|h| other.haps.contains_key(h))
    }
}

impl fmt::Debug for IncompleteSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut haps = self.snapshot();
        haps.sort();
        write!(f, "IncompleteSolution(|H|={}, f2={} {{", haps.len(), self.cost_vector().f2)?;
        for h in haps {
            write!(f, " {h}")?;
        }
        write!(f, " }})")
    }
}

/// A state in either representation.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Complete(CompleteSolution),
    Incomplete(IncompleteSolution),
}

impl Solution {
    pub fn representation(&self) -> Representation {
        match self {
            Solution::Complete(_) => Representation::Complete,
            Solution::Incomplete(_) => Representation::Incomplete,
        }
    }

    pub fn instance(&self) -> &Arc<Instance> {
        match self {
            Solution::Complete(s) => s.instance(),
            Solution::Incomplete(s) => s.instance(),
        }
    }

    pub fn cost_vector(&self) -> CostVector {
        match self {
            Solution::Complete(s) => s.cost_vector(),
            Solution::Incomplete(s) => s.cost_vector(),
        }
    }

    pub fn recompute_cost(&self) -> CostVector {
        match self {
            Solution::Complete(s) => s.recompute_cost(),
            Solution::Incomplete(s) => s.recompute_cost(),
        }
    }

    pub fn total_cost(&self, w: &CostWeights) -> f64 {
        self.cost_vector().total(w)
    }

    pub fn is_feasible(&self) -> bool {
        self.cost_vector().feasible()
    }

    /// Per-genotype resolving pairs; always present for the complete
    /// representation.
    pub fn resolving_pairs(&self) -> Vec<Option<(Haplotype, Haplotype)>> {
        match self {
            Solution::Complete(s) => (0..s.instance().n()).map(|g| Some(s.pair(g))).collect(),
            Solution::Incomplete(s) => s.resolving_pairs(),
        }
    }

    pub fn as_complete(&self) -> Option<&CompleteSolution> {
        match self {
            Solution::Complete(s) => Some(s),
            Solution::Incomplete(_) => None,
        }
    }

    pub fn as_incomplete(&self) -> Option<&IncompleteSolution> {
        match self {
            Solution::Incomplete(s) => Some(s),
            Solution::Complete(_) => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Standalone cost functions over an explicit haplotype set. These recompute
// from first principles and act as the oracle for the incremental caches.
// ---------------------------------------------------------------------------

/// f1 = |H| (distinct members).
pub fn f1(haps: &[Haplotype]) -> usize {
    haps.iter().collect::<HashSet<_>>().len()
}

/// Ids of genotypes resolved from H: some h in H is compatible and its
/// complement is also in H.
pub fn resolved_genotypes(haps: &[Haplotype], instance: &Instance) -> Vec<usize> {
    let set: HashSet<&Haplotype> = haps.iter().collect();
    (0..instance.n())
        .filter(|&g| {
            let geno = instance.genotype(g);
            haps.iter().any(|h| {
                geno.compatible_hap(h).unwrap_or(false)
                    && geno
                        .complement(h)
                        .map(|partner| set.contains(&partner))
                        .unwrap_or(false)
            })
        })
        .collect()
}

/// f2 = number of genotypes not resolved from H.
pub fn f2(haps: &[Haplotype], instance: &Instance) -> usize {
    instance.n() - resolved_genotypes(haps, instance).len()
}

/// f3 = sum over distinct h in H of |compatible_set(h)|.
pub fn f3(haps: &[Haplotype], instance: &Instance) -> usize {
    let set: HashSet<&Haplotype> = haps.iter().collect();
    set.iter()
        .map(|h| instance.compatible_count(h) as usize)
        .sum()
}

/// f3' = n|H| - f3; non-negative since n|H| bounds f3.
pub fn f3_prime(haps: &[Haplotype], instance: &Instance) -> usize {
    instance.n() * f1(haps) - f3(haps, instance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> Haplotype {
        Haplotype::parse(s).unwrap()
    }

    fn appendix_instance() -> Arc<Instance> {
        Instance::from_rows(&["2210212", "2112110", "1212122", "1222122", "1202201"]).unwrap()
    }

    fn appendix_solution(instance: &Arc<Instance>) -> CompleteSolution {
        // 8 distinct haplotypes; g3's pair (d, e) is unshared, so resolving
        // g3 through a drops both and introduces one new haplotype
        let pairs = vec![
            (h("1110110"), h("0010011")), // a, b'
            (h("0111110"), h("1110110")), // c, a
            (h("1111101"), h("1010110")), // d, e
            (h("1110110"), h("1001101")), // a, s
            (h("1101101"), h("1000001")), // f, q
        ];
        CompleteSolution::from_pairs(instance.clone(), &pairs).unwrap()
    }

    #[test]
    fn appendix_distinct_haplotypes() {
        let inst = appendix_instance();
        let sol = appendix_solution(&inst);
        assert_eq!(sol.distinct_count(), 8);
        assert_eq!(sol.cost_vector().f1, 8);
        assert_eq!(sol.cost_vector().f2, 0);
    }

    #[test]
    fn single_homozygous_genotype() {
        let inst = Instance::from_rows(&["00"]).unwrap();
        let sol = CompleteSolution::from_pairs(inst, &[(h("00"), h("00"))]).unwrap();
        assert_eq!(sol.distinct_haplotypes(), vec![h("00")]);
    }

    #[test]
    fn duplicate_genotypes_share_haplotypes() {
        let inst = Instance::from_rows(&["0212", "0212"]).unwrap();
        let sol = CompleteSolution::from_reps(inst, vec![h("0010"), h("0010")]).unwrap();
        assert_eq!(sol.distinct_count(), 2);
    }

    #[test]
    fn from_pairs_rejects_non_resolving() {
        let inst = appendix_instance();
        // (1110110) with (0010010) leaves g1's site 7 heterozygosity broken
        let pairs = vec![
            (h("1110110"), h("0010010")),
            (h("0111110"), h("1110110")),
            (h("1111101"), h("1010110")),
            (h("1110110"), h("1001101")),
            (h("1101101"), h("1000001")),
        ];
        let err = CompleteSolution::from_pairs(inst, &pairs).unwrap_err();
        assert!(matches!(err, Error::Unresolved { genotype: 1 }));
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let inst = Instance::from_rows(&["0212"]).unwrap();
        let a = CompleteSolution::from_reps(inst.clone(), vec![h("0110")]).unwrap();
        let b = CompleteSolution::from_reps(inst.clone(), vec![h("0011")]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rep(0), &h("0011"));
        let again = CompleteSolution::from_reps(inst, vec![a.rep(0).clone()]).unwrap();
        assert_eq!(a, again);
    }

    #[test]
    fn set_pair_updates_costs() {
        let inst = appendix_instance();
        let mut sol = appendix_solution(&inst);
        // re-resolve g3 through a: the appendix reduction step
        let old = sol.set_pair(2, h("1110110")).unwrap();
        assert_eq!(old, h("1010110")); // canonical rep of (d, e) is e
        assert_eq!(sol.distinct_count(), 7);
        assert!(sol.contains_hap(&h("1011101")));
        assert_eq!(sol.cost_vector(), sol.recompute_cost());
        // undo restores the cost exactly
        sol.set_pair(2, old).unwrap();
        assert_eq!(sol.distinct_count(), 8);
        assert_eq!(sol.cost_vector(), sol.recompute_cost());
    }

    #[test]
    fn resolved_genotypes_examples() {
        let single = Instance::from_rows(&["22"]).unwrap();
        assert_eq!(resolved_genotypes(&[h("01"), h("10")], &single), vec![0]);
        assert!(resolved_genotypes(&[h("01")], &single).is_empty());

        let inst = appendix_instance();
        assert_eq!(
            resolved_genotypes(&[h("1110110"), h("0010011")], &inst),
            vec![0]
        );
    }

    #[test]
    fn f2_examples() {
        let inst = appendix_instance();
        assert_eq!(f2(&[], &inst), 5);
        let sol = appendix_solution(&inst);
        assert_eq!(f2(&sol.distinct_haplotypes(), &inst), 0);

        let two = Instance::from_rows(&["22", "00"]).unwrap();
        assert_eq!(f2(&[h("01")], &two), 2);
    }

    #[test]
    fn f3_examples() {
        let inst = appendix_instance();
        assert_eq!(f3(&[h("1110110")], &inst), 4);
        assert_eq!(f3(&[], &inst), 0);
        assert_eq!(f3(&[h("1101101"), h("1000001")], &inst), 3);
    }

    #[test]
    fn f3_prime_examples() {
        let inst = appendix_instance();
        assert_eq!(f3_prime(&[h("1110110")], &inst), 1);
        assert_eq!(f3_prime(&[], &inst), 0);
        assert_eq!(f3_prime(&[h("1101101"), h("1000001")], &inst), 7);
    }

    #[test]
    fn total_cost_examples() {
        let inst = appendix_instance();
        let sol = Solution::Complete(appendix_solution(&inst));
        assert_eq!(sol.total_cost(&CostWeights::new(1.0, 0.0, 0.0)), 8.0);
        assert_eq!(sol.total_cost(&CostWeights::new(0.0, 0.0, 0.0)), 0.0);

        let empty = Solution::Incomplete(IncompleteSolution::empty(inst));
        assert_eq!(empty.total_cost(&CostWeights::new(1.0, 1.0, 1.0)), 5.0);
    }

    #[test]
    fn incremental_matches_recompute_on_inserts_and_removes() {
        let inst = appendix_instance();
        let mut sol = IncompleteSolution::empty(inst);
        for s in ["1110110", "0010011", "1101101", "1000001", "1011101"] {
            assert_eq!(sol.insert(h(s)), InsertOutcome::Inserted);
            assert_eq!(sol.cost_vector(), sol.recompute_cost());
        }
        assert_eq!(sol.insert(h("1110110")), InsertOutcome::AlreadyPresent);
        for s in ["1101101", "0010011"] {
            assert!(sol.remove(&h(s)));
            assert_eq!(sol.cost_vector(), sol.recompute_cost());
        }
        assert!(!sol.remove(&h("0010011")));
    }

    #[test]
    fn insert_rejects_haplotype_with_no_compatible_genotype() {
        let inst = Instance::from_rows(&["00", "01"]).unwrap();
        let mut sol = IncompleteSolution::empty(inst);
        assert_eq!(sol.insert(h("10")), InsertOutcome::NoCompatibleGenotype);
        assert!(sol.is_empty());
    }

    #[test]
    fn self_complement_support() {
        let inst = Instance::from_rows(&["00"]).unwrap();
        let mut sol = IncompleteSolution::empty(inst);
        sol.insert(h("00"));
        assert!(sol.is_resolved(0));
        assert_eq!(sol.cost_vector().f2, 0);
        assert_eq!(sol.use_count(&h("00")), 1);
        sol.remove(&h("00"));
        assert_eq!(sol.cost_vector().f2, 1);
    }

    #[test]
    fn resolving_pairs_pick_lex_smallest() {
        let inst = Instance::from_rows(&["22"]).unwrap();
        let sol =
            IncompleteSolution::from_haps(inst, [h("10"), h("01"), h("00"), h("11")]).unwrap();
        let pairs = sol.resolving_pairs();
        assert_eq!(pairs[0], Some((h("00"), h("11"))));
    }

    #[test]
    fn complete_to_incomplete_keeps_distinct_set() {
        let inst = appendix_instance();
        let sol = appendix_solution(&inst);
        let inc = sol.to_incomplete();
        assert_eq!(inc.len(), 8);
        assert_eq!(inc.cost_vector().f2, 0);
        assert_eq!(inc.cost_vector(), inc.recompute_cost());
    }
}
