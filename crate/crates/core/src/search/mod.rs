//! Metaheuristic engines and their shared machinery.
//!
//! All engines minimize the weighted cost F over one of the two solution
//! representations, are fully deterministic for a fixed (instance, params,
//! seed) triple as long as no wall-clock limit is set, and report the best
//! state seen together with enough bookkeeping to re-verify it.

mod adaptive;
mod dls;
mod ils;
mod kfix;

pub use adaptive::adaptive_solve;
pub use dls::dls_solve;
pub use ils::ils_solve;
pub use kfix::kfix_solve;

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::init::InitKind;
use crate::model::{Haplotype, Instance};
use crate::neighborhood::{
    apply_delete, apply_delete_insert, apply_flip, apply_insert, generate_candidate_set,
    undo_move, undo_set_edit_on, CandidatePolicy, DeleteInsertMove, FlipMove, FlipTarget,
    MoveApplication, MoveReceipt,
};
use crate::seed::derive_seed;
use crate::solution::{CostWeights, IncompleteSolution, Representation, Solution};

/// Strict-improvement tolerance for f64 cost comparisons.
pub(crate) const EPS: f64 = 1e-9;

/// Which engine to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Ils,
    Dls,
    Adaptive,
    KFix,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ils" => Ok(Algorithm::Ils),
            "dls" => Ok(Algorithm::Dls),
            "adaptive" => Ok(Algorithm::Adaptive),
            "kfix" => Ok(Algorithm::KFix),
            _ => Err(Error::InvalidParam(format!(
                "unknown algorithm {s:?} (expected ils|dls|adaptive|kfix)"
            ))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Ils => "ils",
            Algorithm::Dls => "dls",
            Algorithm::Adaptive => "adaptive",
            Algorithm::KFix => "kfix",
        })
    }
}

impl Algorithm {
    /// The representation an engine runs on when none is requested.
    pub fn default_representation(self) -> Representation {
        match self {
            Algorithm::Ils => Representation::Complete,
            _ => Representation::Incomplete,
        }
    }
}

/// Neighborhoods local search can walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborhoodKind {
    /// Single-site flips.
    Hamming1,
    /// Swap one member for one candidate.
    DeleteInsert,
    /// Flips plus bare deletions plus insertions from a candidate set
    /// (incomplete representation; collapses to flips on a complete one).
    Composite,
    /// Flips and swaps that keep |H| constant (no merges).
    FixedSize,
}

/// How iterated local search treats a new local optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Acceptance {
    /// Accept when not worse than the incumbent (default).
    NonWorsening,
    /// Accept only strict improvements.
    Improving,
    /// Always accept.
    Always,
}

impl std::str::FromStr for Acceptance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "non-worsening" => Ok(Acceptance::NonWorsening),
            "improving" => Ok(Acceptance::Improving),
            "always" => Ok(Acceptance::Always),
            _ => Err(Error::InvalidParam(format!(
                "unknown acceptance mode {s:?} (expected non-worsening|improving|always)"
            ))),
        }
    }
}

/// Tunables shared by all engines. `None` fields derive instance-dependent
/// defaults at run time.
#[derive(Clone, Debug)]
pub struct SearchParams {
    /// Engine iteration budget: outer loops for ils/dls, insertion attempts
    /// for adaptive, descent steps for kfix, applied moves for bare local
    /// search.
    pub max_iters: u64,
    /// Wall-clock limit in seconds. Runs with a time limit are not
    /// reproducible.
    pub time_limit: Option<f64>,
    pub seed: u64,
    /// Stagnation window: tabu iterations without improvement, and kfix
    /// perturbation rounds per cardinality level.
    pub stagnation: u64,
    /// Enables the tabu variant of local search.
    pub tabu_tenure: Option<usize>,
    pub acceptance: Acceptance,
    /// ILS: restart to the incumbent best after this many rejections.
    pub restart_after: u64,
    /// K: feasible-streak length triggering a penalty decrease.
    pub feasible_streak: u64,
    /// Penalty factor range; draws are uniform in [gamma_lo, gamma_hi].
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    /// Dynamic-penalty weights (dls/adaptive objective w1*f1 + w2*f2).
    pub w1: f64,
    /// Initial w2; default 4n so feasibility dominates.
    pub w2_init: Option<f64>,
    /// Adaptive: cap on |H| before a deletion round; default 2n.
    pub max_card: Option<usize>,
    /// Adaptive: haplotypes removed per deletion round; default
    /// max(1, |H|/10).
    pub delete_batch: Option<usize>,
    /// Adaptive acceptance temperature schedule: p = exp(-delta/T),
    /// T <- cooling * T per insertion attempt.
    pub t0: f64,
    pub cooling: f64,
    pub cand_size: usize,
    pub cand_policy: CandidatePolicy,
    /// Accepted delete/insert moves per ILS perturbation phase.
    pub perturb_moves: u32,
    /// Initial-solution builder; default depends on the engine.
    pub init: Option<InitKind>,
    /// Collect a per-iteration trace.
    pub trace: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            max_iters: 10_000,
            time_limit: None,
            seed: 1,
            stagnation: 100,
            tabu_tenure: None,
            acceptance: Acceptance::NonWorsening,
            restart_after: 20,
            feasible_streak: 10,
            gamma_lo: 1.05,
            gamma_hi: 1.2,
            w1: 1.0,
            w2_init: None,
            max_card: None,
            delete_batch: None,
            t0: 2.0,
            cooling: 0.995,
            cand_size: 50,
            cand_policy: CandidatePolicy::Mixed,
            perturb_moves: 5,
            init: None,
            trace: false,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParam(msg.into()));
        if self.gamma_lo <= 1.0 {
            return bad("gamma_lo must be > 1");
        }
        if self.gamma_hi < self.gamma_lo {
            return bad("gamma_hi must be >= gamma_lo");
        }
        if self.w1 <= 0.0 {
            return bad("w1 must be positive");
        }
        if self.w2_init.is_some_and(|w| w < 0.0) {
            return bad("w2 must be non-negative");
        }
        if self.t0 <= 0.0 {
            return bad("t0 must be positive");
        }
        if !(self.cooling > 0.0 && self.cooling <= 1.0) {
            return bad("cooling factor must be in (0, 1]");
        }
        if self.cand_size == 0 {
            return bad("candidate set size must be >= 1");
        }
        if self.stagnation == 0 {
            return bad("stagnation window must be >= 1");
        }
        if self.feasible_streak == 0 {
            return bad("feasible streak length must be >= 1");
        }
        if self.perturb_moves == 0 {
            return bad("perturbation move count must be >= 1");
        }
        if self.time_limit.is_some_and(|t| t <= 0.0) {
            return bad("time limit must be positive");
        }
        if self.max_card.is_some_and(|c| c == 0) {
            return bad("max cardinality must be >= 1");
        }
        if self.delete_batch.is_some_and(|q| q == 0) {
            return bad("deletion batch must be >= 1");
        }
        if self.tabu_tenure.is_some_and(|t| t == 0) {
            return bad("tabu tenure must be >= 1");
        }
        Ok(())
    }

    pub(crate) fn w2_for(&self, instance: &Instance) -> f64 {
        self.w2_init.unwrap_or(4.0 * instance.n() as f64)
    }

    pub(crate) fn max_card_for(&self, instance: &Instance) -> usize {
        self.max_card.unwrap_or(2 * instance.n())
    }

    pub(crate) fn deadline(&self) -> Deadline {
        Deadline::new(self.time_limit)
    }
}

/// One trace line per engine iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iter: u64,
    pub f: f64,
    pub f1: usize,
    pub f2: usize,
    pub f3p: usize,
    pub feasible: bool,
}

impl TraceRow {
    pub(crate) fn of(iter: u64, sol: &Solution, w: &CostWeights) -> Self {
        let cv = sol.cost_vector();
        TraceRow {
            iter,
            f: cv.total(w),
            f1: cv.f1,
            f2: cv.f2,
            f3p: cv.f3_prime(),
            feasible: cv.feasible(),
        }
    }
}

/// Outcome of an engine run. Fully deterministic for a fixed (instance,
/// params, seed) when no time limit is set.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub best: Solution,
    /// F of `best` under the run's cost weights, recomputed from scratch.
    pub best_f: f64,
    /// Distinct haplotypes of `best`.
    pub best_h: usize,
    pub feasible: bool,
    pub iterations: u64,
    pub seed: u64,
    /// Final dynamic penalty weight (dls/adaptive).
    pub final_w2: Option<f64>,
    /// Last cardinality proven feasible (kfix).
    pub k_reached: Option<usize>,
    pub trace: Option<Vec<TraceRow>>,
}

impl SearchReport {
    pub(crate) fn finish(best: Solution, weights: &CostWeights, iterations: u64, seed: u64) -> Self {
        let recomputed = best.recompute_cost();
        debug_assert_eq!(recomputed, best.cost_vector(), "incremental cost drifted");
        SearchReport {
            best_f: recomputed.total(weights),
            best_h: recomputed.f1,
            feasible: recomputed.f2 == 0,
            best,
            iterations,
            seed,
            final_w2: None,
            k_reached: None,
            trace: None,
        }
    }

    /// Deterministic projection of the report, for equality checks.
    pub fn fingerprint(&self) -> String {
        let pairs = self
            .best
            .resolving_pairs()
            .into_iter()
            .map(|p| match p {
                Some((h, k)) => format!("{h}/{k}"),
                None => "-".into(),
            })
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "f={} h={} feasible={} iters={} seed={} w2={:?} k={:?} pairs={pairs}",
            self.best_f,
            self.best_h,
            self.feasible,
            self.iterations,
            self.seed,
            self.final_w2,
            self.k_reached
        )
    }
}

/// Shifting-penalty state for the dynamic objective w1*f1 + w2*f2. After
/// `k` consecutive feasible observations w2 shrinks by a random factor in
/// [lo, hi] and the streak restarts; every infeasible observation grows w2
/// by a comparable factor.
#[derive(Clone, Debug)]
pub struct ShiftingPenalty {
    pub w1: f64,
    pub w2: f64,
    streak: u64,
    k: u64,
    lo: f64,
    hi: f64,
}

/// What a penalty update did.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightEvent {
    Decreased(f64),
    Increased(f64),
    Unchanged,
}

impl ShiftingPenalty {
    pub fn new(w1: f64, w2: f64, k: u64, lo: f64, hi: f64) -> Self {
        ShiftingPenalty { w1, w2, streak: 0, k, lo, hi }
    }

    pub fn from_params(params: &SearchParams, instance: &Instance) -> Self {
        ShiftingPenalty::new(
            params.w1,
            params.w2_for(instance),
            params.feasible_streak,
            params.gamma_lo,
            params.gamma_hi,
        )
    }

    pub fn streak(&self) -> u64 {
        self.streak
    }

    pub fn observe<R: Rng>(&mut self, feasible: bool, rng: &mut R) -> WeightEvent {
        if feasible {
            self.streak += 1;
            if self.streak >= self.k {
                let gamma = rng.random_range(self.lo..=self.hi);
                self.w2 /= gamma;
                self.streak = 0;
                WeightEvent::Decreased(gamma)
            } else {
                WeightEvent::Unchanged
            }
        } else {
            self.streak = 0;
            let gamma = rng.random_range(self.lo..=self.hi);
            self.w2 *= gamma;
            WeightEvent::Increased(gamma)
        }
    }
}

/// Wall-clock cutoff; absent by default.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Deadline(Option<Instant>);

impl Deadline {
    pub(crate) fn new(limit_secs: Option<f64>) -> Self {
        Deadline(limit_secs.map(|s| Instant::now() + std::time::Duration::from_secs_f64(s)))
    }

    #[inline]
    pub(crate) fn expired(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

pub(crate) struct DescentOutcome {
    pub applied: u64,
    #[allow(dead_code)]
    pub sweeps: u64,
}

fn improving(receipt: &MoveReceipt, w: &CostWeights) -> bool {
    receipt.after().total(w) + EPS < receipt.before().total(w)
}

/// First-improvement descent: repeated sweeps over the neighborhood in its
/// canonical order, applying every strictly improving move, until a full
/// sweep finds none (stagnation), the move budget is spent, or the deadline
/// passes.
pub(crate) fn descent<R: Rng>(
    sol: &mut Solution,
    kind: NeighborhoodKind,
    w: &CostWeights,
    params: &SearchParams,
    rng: &mut R,
    deadline: &Deadline,
    move_budget: &mut u64,
) -> DescentOutcome {
    let mut out = DescentOutcome { applied: 0, sweeps: 0 };
    while *move_budget > 0 && !deadline.expired() {
        out.sweeps += 1;
        if !sweep(sol, kind, w, params, rng, deadline, move_budget, &mut out.applied) {
            break;
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn sweep<R: Rng>(
    sol: &mut Solution,
    kind: NeighborhoodKind,
    w: &CostWeights,
    params: &SearchParams,
    rng: &mut R,
    deadline: &Deadline,
    move_budget: &mut u64,
    applied: &mut u64,
) -> bool {
    let mut improved = false;
    let m = sol.instance().m();
    let fixed_size = kind == NeighborhoodKind::FixedSize;

    macro_rules! spent {
        () => {
            *move_budget == 0 || deadline.expired()
        };
    }

    match sol.representation() {
        Representation::Complete => {
            let n = sol.instance().n();
            for g in 0..n {
                if spent!() {
                    return improved;
                }
                for site in 0..m {
                    let mv = FlipMove { target: FlipTarget::Rep(g), site };
                    if let MoveApplication::Applied(r) = apply_flip(sol, &mv) {
                        if improving(&r, w) {
                            *applied += 1;
                            *move_budget -= 1;
                            improved = true;
                        } else {
                            undo_move(sol, r);
                        }
                    }
                }
            }
        }
        Representation::Incomplete => {
            if kind != NeighborhoodKind::DeleteInsert {
                for h in as_incomplete(sol).snapshot() {
                    if spent!() {
                        return improved;
                    }
                    for site in 0..m {
                        let mv = FlipMove { target: FlipTarget::Member(h.clone()), site };
                        if let MoveApplication::Applied(r) = apply_flip(sol, &mv) {
                            if fixed_size && r.delta().0 != 0 {
                                undo_move(sol, r);
                            } else if improving(&r, w) {
                                *applied += 1;
                                *move_budget -= 1;
                                improved = true;
                            } else {
                                undo_move(sol, r);
                            }
                        }
                    }
                }
            }

            if kind == NeighborhoodKind::Composite {
                let inc = as_incomplete_mut(sol);
                for h in inc.snapshot() {
                    if spent!() {
                        return improved;
                    }
                    if let MoveApplication::Applied(r) = apply_delete(inc, &h) {
                        if improving(&r, w) {
                            *applied += 1;
                            *move_budget -= 1;
                            improved = true;
                        } else {
                            undo_set_edit_on(inc, r);
                        }
                    }
                }
                let cand = generate_candidate_set(inc, params.cand_policy, params.cand_size, rng)
                    .expect("validated candidate size");
                for z in cand.haps {
                    if spent!() {
                        return improved;
                    }
                    if let MoveApplication::Applied(r) = apply_insert(inc, &z) {
                        if improving(&r, w) {
                            *applied += 1;
                            *move_budget -= 1;
                            improved = true;
                        } else {
                            undo_set_edit_on(inc, r);
                        }
                    }
                }
            }

            if kind == NeighborhoodKind::DeleteInsert || kind == NeighborhoodKind::FixedSize {
                let inc = as_incomplete_mut(sol);
                let cand = generate_candidate_set(inc, params.cand_policy, params.cand_size, rng)
                    .expect("validated candidate size");
                for del in inc.snapshot() {
                    if spent!() {
                        return improved;
                    }
                    if !inc.contains(&del) {
                        continue;
                    }
                    for ins in &cand.haps {
                        if inc.contains(ins) {
                            continue;
                        }
                        let mv = DeleteInsertMove { delete: del.clone(), insert: ins.clone() };
                        if let MoveApplication::Applied(r) = apply_delete_insert(inc, &mv) {
                            if fixed_size && r.delta().0 != 0 {
                                undo_set_edit_on(inc, r);
                            } else if improving(&r, w) {
                                *applied += 1;
                                *move_budget -= 1;
                                improved = true;
                                break; // the deleted member is gone
                            } else {
                                undo_set_edit_on(inc, r);
                            }
                        }
                    }
                }
            }
        }
    }
    improved
}

fn as_incomplete(sol: &Solution) -> &IncompleteSolution {
    sol.as_incomplete().expect("incomplete representation required")
}

fn as_incomplete_mut(sol: &mut Solution) -> &mut IncompleteSolution {
    match sol {
        Solution::Incomplete(inc) => inc,
        Solution::Complete(_) => unreachable!("incomplete representation required"),
    }
}

/// Local search entry point: first-improvement descent by default, or the
/// tabu variant when a tenure is configured. `params.max_iters` bounds the
/// number of applied moves; a zero budget returns the input unchanged.
pub fn local_search(
    sol: &mut Solution,
    kind: NeighborhoodKind,
    weights: &CostWeights,
    params: &SearchParams,
) -> Result<u64> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let deadline = params.deadline();
    let mut budget = params.max_iters;
    let applied = match params.tabu_tenure {
        None => descent(sol, kind, weights, params, &mut rng, &deadline, &mut budget).applied,
        Some(tenure) => {
            tabu_search(sol, kind, weights, params, tenure, &mut rng, &deadline, &mut budget)
        }
    };
    Ok(applied)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum TabuKey {
    MemberFlip(Haplotype, usize),
    RepFlip(usize, usize),
    Insert(Haplotype),
}

#[derive(Clone, Debug)]
enum TabuMove {
    Flip(FlipMove),
    Swap(DeleteInsertMove),
}

/// Tabu key of the move that would revert `mv`.
fn reverse_key(mv: &TabuMove) -> TabuKey {
    match mv {
        TabuMove::Flip(FlipMove { target: FlipTarget::Member(h), site }) => {
            TabuKey::MemberFlip(h.flipped(*site), *site)
        }
        TabuMove::Flip(FlipMove { target: FlipTarget::Rep(g), site }) => TabuKey::RepFlip(*g, *site),
        TabuMove::Swap(s) => TabuKey::Insert(s.delete.clone()),
    }
}

fn apply_tabu_move(sol: &mut Solution, mv: &TabuMove) -> MoveApplication {
    match mv {
        TabuMove::Flip(f) => apply_flip(sol, f),
        TabuMove::Swap(s) => apply_delete_insert(as_incomplete_mut(sol), s),
    }
}

fn enumerate_tabu_moves<R: Rng>(sol: &Solution, params: &SearchParams, rng: &mut R) -> Vec<TabuMove> {
    let m = sol.instance().m();
    match sol {
        Solution::Complete(c) => (0..c.instance().n())
            .flat_map(|g| {
                (0..m).map(move |site| TabuMove::Flip(FlipMove { target: FlipTarget::Rep(g), site }))
            })
            .collect(),
        Solution::Incomplete(inc) => {
            let mut moves: Vec<TabuMove> = inc
                .snapshot()
                .into_iter()
                .flat_map(|h| {
                    (0..m).map(move |site| {
                        TabuMove::Flip(FlipMove { target: FlipTarget::Member(h.clone()), site })
                    })
                })
                .collect();
            if let Ok(cand) = generate_candidate_set(inc, params.cand_policy, params.cand_size, rng)
            {
                for del in inc.snapshot() {
                    for ins in &cand.haps {
                        moves.push(TabuMove::Swap(DeleteInsertMove {
                            delete: del.clone(),
                            insert: ins.clone(),
                        }));
                    }
                }
            }
            moves
        }
    }
}

/// Best-admissible-move search with a recency tabu list and aspiration on
/// the incumbent best. Stops after `params.stagnation` iterations without
/// improving the best, on budget exhaustion, or at the deadline. Writes the
/// best state found back into `sol`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn tabu_search<R: Rng>(
    sol: &mut Solution,
    kind: NeighborhoodKind,
    w: &CostWeights,
    params: &SearchParams,
    tenure: usize,
    rng: &mut R,
    deadline: &Deadline,
    move_budget: &mut u64,
) -> u64 {
    let mut tabu: HashMap<TabuKey, u64> = HashMap::new();
    let mut best = sol.clone();
    let mut best_f = sol.total_cost(w);
    let mut applied = 0u64;
    let mut iter = 0u64;
    let mut no_improve = 0u64;

    while no_improve < params.stagnation && *move_budget > 0 && !deadline.expired() {
        iter += 1;
        let mut chosen: Option<(f64, TabuMove)> = None;
        for mv in enumerate_tabu_moves(sol, params, rng) {
            let MoveApplication::Applied(receipt) = apply_tabu_move(sol, &mv) else {
                continue;
            };
            if kind == NeighborhoodKind::FixedSize && receipt.delta().0 != 0 {
                undo_move(sol, receipt);
                continue;
            }
            let f = receipt.after().total(w);
            undo_move(sol, receipt);

            let is_tabu = tabu.get(&reverse_key(&mv)).is_some_and(|&until| iter <= until);
            if is_tabu && !(f + EPS < best_f) {
                continue;
            }
            if chosen.as_ref().is_none_or(|(bf, _)| f + EPS < *bf) {
                chosen = Some((f, mv));
            }
        }

        let Some((_, mv)) = chosen else { break };
        if matches!(apply_tabu_move(sol, &mv), MoveApplication::Infeasible) {
            break;
        }
        applied += 1;
        *move_budget -= 1;
        tabu.insert(reverse_key(&mv), iter + tenure as u64);

        let f = sol.total_cost(w);
        if f + EPS < best_f {
            best = sol.clone();
            best_f = f;
            no_improve = 0;
        } else {
            no_improve += 1;
        }
    }

    *sol = best;
    applied
}

/// Runs one engine once.
pub fn solve(
    instance: &Arc<Instance>,
    algo: Algorithm,
    rep: Representation,
    weights: &CostWeights,
    params: &SearchParams,
) -> Result<SearchReport> {
    match algo {
        Algorithm::Ils => ils_solve(instance, rep, weights, params),
        Algorithm::Dls => {
            require_incomplete(algo, rep)?;
            dls_solve(instance, weights, params)
        }
        Algorithm::Adaptive => {
            require_incomplete(algo, rep)?;
            adaptive_solve(instance, weights, params)
        }
        Algorithm::KFix => {
            require_incomplete(algo, rep)?;
            kfix_solve(instance, weights, params)
        }
    }
}

fn require_incomplete(algo: Algorithm, rep: Representation) -> Result<()> {
    if rep != Representation::Incomplete {
        return Err(Error::InvalidParam(format!(
            "{algo} requires the incomplete representation"
        )));
    }
    Ok(())
}

/// Builds the engine's initial solution.
pub(crate) fn build_init<R: Rng>(
    instance: &Arc<Instance>,
    rep: Representation,
    params: &SearchParams,
    default_kind: InitKind,
    rng: &mut R,
) -> Result<Solution> {
    params.init.unwrap_or(default_kind).build(instance, rep, rng)
}

/// Runs `restarts` independent engine instances with seeds derived from the
/// master seed and merges by best F (restart order breaks ties). Parallel
/// execution yields an identical result because the merge order is fixed.
pub fn solve_with_restarts(
    instance: &Arc<Instance>,
    algo: Algorithm,
    rep: Representation,
    weights: &CostWeights,
    params: &SearchParams,
    restarts: u32,
    parallel: bool,
) -> Result<SearchReport> {
    params.validate()?;
    let restarts = restarts.max(1);
    let run_one = |i: u32| -> Result<SearchReport> {
        let mut p = params.clone();
        p.seed = derive_seed(params.seed, i as u64);
        solve(instance, algo, rep, weights, &p)
    };

    let reports: Vec<Result<SearchReport>> = if parallel && restarts > 1 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..restarts).map(|i| scope.spawn(move || run_one(i))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("restart thread panicked"))
                .collect()
        })
    } else {
        (0..restarts).map(run_one).collect()
    };

    let mut merged: Option<SearchReport> = None;
    let mut total_iters = 0u64;
    for report in reports {
        let report = report?;
        total_iters += report.iterations;
        let take = match &merged {
            None => true,
            Some(cur) => report.best_f + EPS < cur.best_f,
        };
        if take {
            merged = Some(report);
        }
    }
    let mut merged = merged.expect("at least one restart");
    merged.iterations = total_iters;
    merged.seed = params.seed;
    Ok(merged)
}
