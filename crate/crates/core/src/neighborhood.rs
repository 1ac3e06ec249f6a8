//! Move generators and move application.
//!
//! Two neighborhoods: 1-Hamming flips (one site of one haplotype) and
//! deletion/insertion (swap a solution member for a candidate haplotype).
//! Moves are enumerated in a fixed order — member insertion order crossed
//! with site order — so first-improvement search is deterministic under a
//! fixed seed. Application returns a receipt carrying the cost delta and
//! enough state to undo the move exactly.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Genotype, Haplotype};
use crate::solution::{CostVector, IncompleteSolution, InsertOutcome, Solution};

/// What a 1-Hamming flip acts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlipTarget {
    /// A member of an incomplete solution's haplotype set.
    Member(Haplotype),
    /// The representative of genotype i in a complete solution.
    Rep(usize),
}

/// Flip one site of one haplotype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipMove {
    pub target: FlipTarget,
    /// 0-based site index.
    pub site: usize,
}

/// Swap one member out for one candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeleteInsertMove {
    pub delete: Haplotype,
    pub insert: Haplotype,
}

/// How candidate haplotypes are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidatePolicy {
    /// Complements of random members w.r.t. random compatible genotypes,
    /// plus uniform random compatible haplotypes.
    Random,
    /// Complements targeting currently unresolved genotypes, ranked by
    /// compatibility count.
    Heuristic,
    /// Half heuristic, half random.
    Mixed,
}

impl std::str::FromStr for CandidatePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(CandidatePolicy::Random),
            "heuristic" => Ok(CandidatePolicy::Heuristic),
            "mixed" => Ok(CandidatePolicy::Mixed),
            _ => Err(Error::InvalidParam(format!(
                "unknown candidate policy {s:?} (expected random|heuristic|mixed)"
            ))),
        }
    }
}

impl std::fmt::Display for CandidatePolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CandidatePolicy::Random => "random",
            CandidatePolicy::Heuristic => "heuristic",
            CandidatePolicy::Mixed => "mixed",
        })
    }
}

/// A bounded pool of insertable haplotypes, none of which are current
/// members.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub haps: Vec<Haplotype>,
    pub policy: CandidatePolicy,
    pub target_size: usize,
}

/// Every (haplotype, site) flip: |H|*m moves for an incomplete solution in
/// member order, n*m for a complete one in genotype order. Flips at
/// homozygous sites of a complete representation are yielded but rejected
/// at application time.
pub fn hamming1_neighbors(s: &Solution) -> Box<dyn Iterator<Item = FlipMove> + '_> {
    let m = s.instance().m();
    match s {
        Solution::Incomplete(inc) => Box::new(inc.snapshot().into_iter().flat_map(move |h| {
            (0..m).map(move |site| FlipMove {
                target: FlipTarget::Member(h.clone()),
                site,
            })
        })),
        Solution::Complete(c) => {
            let n = c.instance().n();
            Box::new((0..n).flat_map(move |g| {
                (0..m).map(move |site| FlipMove {
                    target: FlipTarget::Rep(g),
                    site,
                })
            }))
        }
    }
}

/// All |H|*|C| (delete, insert) pairs, member order crossed with candidate
/// order.
pub fn deletion_insertion_neighbors<'a>(
    s: &'a IncompleteSolution,
    c: &'a CandidateSet,
) -> impl Iterator<Item = DeleteInsertMove> + 'a {
    s.members().flat_map(move |del| {
        c.haps.iter().map(move |ins| DeleteInsertMove {
            delete: del.clone(),
            insert: ins.clone(),
        })
    })
}

/// Result of trying to apply a move.
#[derive(Debug)]
pub enum MoveApplication {
    Applied(MoveReceipt),
    /// The move is structurally rejected (homozygous-site flip on a complete
    /// representation, stale target, or a flip that would leave a haplotype
    /// compatible with nothing).
    Infeasible,
}

impl MoveApplication {
    pub fn receipt(self) -> Option<MoveReceipt> {
        match self {
            MoveApplication::Applied(r) => Some(r),
            MoveApplication::Infeasible => None,
        }
    }
}

/// Undo token plus the cost delta of an applied move.
#[derive(Debug)]
pub struct MoveReceipt {
    before: CostVector,
    after: CostVector,
    kind: ReceiptKind,
}

#[derive(Debug)]
enum ReceiptKind {
    /// Incomplete-set edit: `removed` left the set, `inserted` entered it
    /// (None when the flip merged into an existing member or the insert was
    /// already present).
    SetEdit {
        removed: Option<Haplotype>,
        inserted: Option<Haplotype>,
    },
    /// Complete-representation pair change.
    RepSet { genotype: usize, old_rep: Haplotype },
}

impl MoveReceipt {
    pub fn before(&self) -> CostVector {
        self.before
    }

    pub fn after(&self) -> CostVector {
        self.after
    }

    /// (df1, df2, df3) of the applied move.
    pub fn delta(&self) -> (i64, i64, i64) {
        (
            self.after.f1 as i64 - self.before.f1 as i64,
            self.after.f2 as i64 - self.before.f2 as i64,
            self.after.f3 as i64 - self.before.f3 as i64,
        )
    }
}

/// Applies a 1-Hamming flip. In the incomplete representation the bit is
/// flipped (merging with an equal member shrinks H); in the complete
/// representation the flip is valid only at a heterozygous site of the
/// genotype, and the pair is re-canonicalized.
pub fn apply_flip(s: &mut Solution, mv: &FlipMove) -> MoveApplication {
    let before = s.cost_vector();
    match (s, &mv.target) {
        (Solution::Incomplete(inc), FlipTarget::Member(h)) => {
            if !inc.contains(h) {
                return MoveApplication::Infeasible;
            }
            let new = h.flipped(mv.site);
            inc.remove(h);
            let inserted = match inc.insert(new.clone()) {
                InsertOutcome::Inserted => Some(new),
                InsertOutcome::AlreadyPresent => None,
                InsertOutcome::NoCompatibleGenotype => {
                    inc.insert(h.clone());
                    return MoveApplication::Infeasible;
                }
            };
            let after = inc.cost_vector();
            MoveApplication::Applied(MoveReceipt {
                before,
                after,
                kind: ReceiptKind::SetEdit {
                    removed: Some(h.clone()),
                    inserted,
                },
            })
        }
        (Solution::Complete(c), FlipTarget::Rep(g)) => {
            let instance = c.instance().clone();
            if instance.genotype(*g).value(mv.site) != 2 {
                return MoveApplication::Infeasible;
            }
            let new_rep = c.rep(*g).flipped(mv.site);
            let old_rep = c.set_pair(*g, new_rep).expect("heterozygous flip keeps compatibility");
            let after = c.cost_vector();
            MoveApplication::Applied(MoveReceipt {
                before,
                after,
                kind: ReceiptKind::RepSet {
                    genotype: *g,
                    old_rep,
                },
            })
        }
        _ => MoveApplication::Infeasible,
    }
}

/// Applies a delete/insert swap on an incomplete solution. |H| is preserved
/// unless the inserted haplotype merges with an existing member.
pub fn apply_delete_insert(s: &mut IncompleteSolution, mv: &DeleteInsertMove) -> MoveApplication {
    if !s.contains(&mv.delete) || mv.delete == mv.insert {
        return MoveApplication::Infeasible;
    }
    let before = s.cost_vector();
    s.remove(&mv.delete);
    let inserted = match s.insert(mv.insert.clone()) {
        InsertOutcome::Inserted => Some(mv.insert.clone()),
        InsertOutcome::AlreadyPresent => None,
        InsertOutcome::NoCompatibleGenotype => {
            s.insert(mv.delete.clone());
            return MoveApplication::Infeasible;
        }
    };
    let after = s.cost_vector();
    MoveApplication::Applied(MoveReceipt {
        before,
        after,
        kind: ReceiptKind::SetEdit {
            removed: Some(mv.delete.clone()),
            inserted,
        },
    })
}

/// Applies a bare insertion (used by constructive search).
pub fn apply_insert(s: &mut IncompleteSolution, h: &Haplotype) -> MoveApplication {
    let before = s.cost_vector();
    match s.insert(h.clone()) {
        InsertOutcome::Inserted => {
            let after = s.cost_vector();
            MoveApplication::Applied(MoveReceipt {
                before,
                after,
                kind: ReceiptKind::SetEdit {
                    removed: None,
                    inserted: Some(h.clone()),
                },
            })
        }
        _ => MoveApplication::Infeasible,
    }
}

/// Applies a bare deletion.
pub fn apply_delete(s: &mut IncompleteSolution, h: &Haplotype) -> MoveApplication {
    let before = s.cost_vector();
    if !s.remove(h) {
        return MoveApplication::Infeasible;
    }
    let after = s.cost_vector();
    MoveApplication::Applied(MoveReceipt {
        before,
        after,
        kind: ReceiptKind::SetEdit {
            removed: Some(h.clone()),
            inserted: None,
        },
    })
}

/// Reverts an applied move; restores the haplotype set (or pair assignment)
/// and therefore all derived cost caches exactly.
pub fn undo_move(s: &mut Solution, receipt: MoveReceipt) {
    match (s, receipt.kind) {
        (Solution::Incomplete(inc), ReceiptKind::SetEdit { removed, inserted }) => {
            undo_set_edit(inc, removed, inserted);
        }
        (Solution::Complete(c), ReceiptKind::RepSet { genotype, old_rep }) => {
            c.set_pair(genotype, old_rep).expect("undo restores a previously valid pair");
        }
        _ => panic!("receipt does not match solution representation"),
    }
}

/// Reverts a set edit on an incomplete solution.
pub fn undo_set_edit_on(s: &mut IncompleteSolution, receipt: MoveReceipt) {
    match receipt.kind {
        ReceiptKind::SetEdit { removed, inserted } => undo_set_edit(s, removed, inserted),
        ReceiptKind::RepSet { .. } => panic!("receipt does not match solution representation"),
    }
}

fn undo_set_edit(s: &mut IncompleteSolution, removed: Option<Haplotype>, inserted: Option<Haplotype>) {
    if let Some(ins) = inserted {
        s.remove(&ins);
    }
    if let Some(rem) = removed {
        let outcome = s.insert(rem);
        debug_assert_eq!(outcome, InsertOutcome::Inserted);
    }
}

/// A uniformly random haplotype compatible with g.
pub fn random_compatible_hap<R: Rng>(g: &Genotype, rng: &mut R) -> Haplotype {
    let mut h = g.min_compatible_hap();
    for site in g.het_sites() {
        if rng.random_bool(0.5) {
            h.flip(site);
        }
    }
    h
}

/// Builds a candidate set of up to `size` haplotypes not currently in the
/// solution. Regenerate freely: with the same solution state, inputs and
/// rng state the result is reproducible.
pub fn generate_candidate_set<R: Rng>(
    s: &IncompleteSolution,
    policy: CandidatePolicy,
    size: usize,
    rng: &mut R,
) -> Result<CandidateSet> {
    if size == 0 {
        return Err(Error::InvalidParam("candidate set size must be >= 1".into()));
    }
    let mut haps: Vec<Haplotype> = Vec::with_capacity(size);
    match policy {
        CandidatePolicy::Heuristic => fill_heuristic(s, size, &mut haps, rng),
        CandidatePolicy::Random => fill_random(s, size, &mut haps, rng),
        CandidatePolicy::Mixed => {
            fill_heuristic(s, size.div_ceil(2), &mut haps, rng);
            fill_random(s, size, &mut haps, rng);
        }
    }
    Ok(CandidateSet {
        haps,
        policy,
        target_size: size,
    })
}

/// Complements that would resolve currently unresolved genotypes, ranked by
/// compatibility count (descending, lexicographic tiebreak). For unresolved
/// genotypes with no compatible member, a random compatible haplotype stands
/// in. When everything is resolved, complements of members against their
/// compatible genotypes are proposed instead.
fn fill_heuristic<R: Rng>(
    s: &IncompleteSolution,
    want: usize,
    out: &mut Vec<Haplotype>,
    rng: &mut R,
) {
    let instance = s.instance().clone();
    let mut scored: Vec<(u32, Haplotype)> = Vec::new();
    let push = |scored: &mut Vec<(u32, Haplotype)>, s: &IncompleteSolution, h: Haplotype| {
        if !s.contains(&h) && !scored.iter().any(|(_, x)| *x == h) {
            let compat = instance.compatible_count(&h);
            if compat > 0 {
                scored.push((compat, h));
            }
        }
    };

    let unresolved = s.unresolved_genotypes();
    if unresolved.is_empty() {
        for h in s.members() {
            for g in instance.compatible_set(h) {
                let partner = instance.genotype(g).complement(h).expect("compatible");
                push(&mut scored, s, partner);
            }
        }
    } else {
        for &g in &unresolved {
            let geno = instance.genotype(g);
            let mut have_member = false;
            for h in s.snapshot() {
                if geno.compatible_hap(&h).expect("uniform length") {
                    have_member = true;
                    push(&mut scored, s, geno.complement(&h).expect("compatible"));
                }
            }
            if !have_member {
                push(&mut scored, s, random_compatible_hap(geno, rng));
            }
        }
    }

    scored.sort_by(|(ca, ha), (cb, hb)| cb.cmp(ca).then_with(|| ha.cmp(hb)));
    for (_, h) in scored {
        if out.len() >= want {
            break;
        }
        if !out.contains(&h) {
            out.push(h);
        }
    }
}

/// Random complements of members plus uniform random compatible haplotypes,
/// alternating, until `want` candidates or the attempt budget runs out.
fn fill_random<R: Rng>(
    s: &IncompleteSolution,
    want: usize,
    out: &mut Vec<Haplotype>,
    rng: &mut R,
) {
    let instance = s.instance().clone();
    let members = s.snapshot();
    let mut attempts = 0usize;
    let max_attempts = want.saturating_mul(20).max(40);
    while out.len() < want && attempts < max_attempts {
        attempts += 1;
        let cand = if !members.is_empty() && attempts % 2 == 0 {
            let h = &members[rng.random_range(0..members.len())];
            let compat = instance.compatible_set(h);
            if compat.is_empty() {
                continue;
            }
            let g = compat[rng.random_range(0..compat.len())];
            instance.genotype(g).complement(h).expect("compatible")
        } else {
            let g = rng.random_range(0..instance.n());
            random_compatible_hap(instance.genotype(g), rng)
        };
        if !s.contains(&cand) && !out.contains(&cand) {
            out.push(cand);
        }
    }
}
