//! Exhaustive and randomized search over small grounds.
//!
//! Candidates are the tuples satisfying clause (i). A system is a sequence of
//! distinct candidates, and appending candidate `c` is legal exactly when the
//! cross clause holds between every earlier tuple and `c`: the skew clause
//! only constrains `i < j`, so checking the new last index suffices. Weak and
//! Bollobás clauses are symmetric in `i, j`, so for them only increasing
//! index sequences are explored.

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{integer, BigRational, Field, ProbabilityVector};
use crate::error::{Error, Result};
use crate::subspace::{Decomposition, Subspace, Vector};
use crate::system::{Partition, SetSystem, SetTuple, SubspaceSystem, SubspaceTuple, System, TupleSystem};
use crate::verify::{self, cross_holds, Condition};
use crate::weight::{self, FunctionalKind};

/// Default exhaustive guards; `allow_large` lifts them.
pub const DEFAULT_MAX_SET_GROUND: usize = 6;
pub const DEFAULT_MAX_GF2_DIMENSION: usize = 4;
pub const DEFAULT_MAX_CANDIDATES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ground {
    Set { n: usize },
    Subspace { n: usize, field: Field },
}

impl Ground {
    pub fn n(&self) -> usize {
        match *self {
            Ground::Set { n } | Ground::Subspace { n, .. } => n,
        }
    }

    fn is_prime_field(&self) -> bool {
        matches!(self, Ground::Subspace { field, .. } if field.is_prime_field())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    MaxM,
    MaxWeight(FunctionalKind),
    /// Maximize a weight whose inequality no theorem licenses on this ground
    /// and condition, looking for values above 1.
    Counterexample(FunctionalKind),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchProblem {
    pub ground: Ground,
    pub d: usize,
    pub condition: Condition,
    pub objective: Objective,
    /// Keep only candidates with exactly these coordinate sizes.
    pub sizes: Option<Vec<usize>>,
    pub node_budget: u64,
    /// Prune with a licensed weight bound when one applies.
    pub prune: bool,
    pub allow_large: bool,
}

impl SearchProblem {
    pub fn new(ground: Ground, d: usize, condition: Condition, objective: Objective) -> Self {
        Self {
            ground,
            d,
            condition,
            objective,
            sizes: None,
            node_budget: 1_000_000,
            prune: false,
            allow_large: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// `m` for max-m, `ω` otherwise.
    pub best_value: BigRational,
    pub witness: System,
    pub nodes: u64,
    /// The search covered the whole space, so `best_value` is optimal.
    pub exhaustive: bool,
    /// Whether a weight bound was actually used for pruning.
    pub pruned: bool,
    pub candidates: usize,
    pub field_caveat: bool,
}

fn guard(ground: Ground, d: usize, allow_large: bool) -> Result<()> {
    if d == 0 {
        return Err(Error::Shape("arity must be positive".into()));
    }
    match ground {
        Ground::Set { n } => {
            if n > crate::system::MAX_SET_GROUND {
                return Err(Error::GroundTooLarge(n));
            }
            if !allow_large && n > DEFAULT_MAX_SET_GROUND {
                return Err(Error::EnumerationTooLarge(format!(
                    "set ground n = {n} exceeds the default guard {DEFAULT_MAX_SET_GROUND}"
                )));
            }
        }
        Ground::Subspace { n, field } => {
            let Field::Prime(p) = field else {
                return Err(Error::EnumerationTooLarge(
                    "subspaces over the rationals cannot be enumerated".into(),
                ));
            };
            if !allow_large {
                let limit = match p {
                    2 => DEFAULT_MAX_GF2_DIMENSION,
                    3 => 3,
                    _ => 2,
                };
                if n > limit {
                    return Err(Error::EnumerationTooLarge(format!(
                        "GF({p}) dimension {n} exceeds the default guard {limit}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Every subspace of `F_p^n`, one per reduced row echelon form, ordered by
/// dimension and then by rows.
pub fn all_subspaces(n: usize, field: Field) -> Result<Vec<Subspace>> {
    let Field::Prime(p) = field else {
        return Err(Error::EnumerationTooLarge("subspaces over the rationals".into()));
    };
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            // Free positions: row r, columns after its pivot that are not pivots.
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| {
                    let pivots = &pivots;
                    (pivots[r] + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
                })
                .collect();
            let count = (p as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
            if count > 1 << 24 {
                return Err(Error::EnumerationTooLarge(format!("GF({p})^{n} has too many subspaces")));
            }
            for code in 0..count {
                let mut rows: Vec<Vector> = (0..k)
                    .map(|r| {
                        let mut row = vec![BigRational::zero(); n];
                        row[pivots[r]] = BigRational::one();
                        row
                    })
                    .collect();
                let mut rest = code;
                for &(r, c) in &free {
                    rows[r][c] = integer((rest % p as u128) as u64);
                    rest /= p as u128;
                }
                out.push(Subspace::canonicalize(n, field, rows)?);
            }
        }
    }
    out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All clause-(i) tuples on the ground, as one (unvalidated) system whose
/// tuple order is the canonical candidate order.
///
/// Sets: each element gets a label in `0..=d` (0 = uncovered, `ℓ` = part
/// `ℓ`), and label vectors are counted in lexicographic order with element 1
/// most significant. Subspaces: tuples of subspaces from [`all_subspaces`] in
/// lexicographic index order.
pub fn enumerate_candidates(ground: Ground, d: usize, allow_large: bool) -> Result<System> {
    guard(ground, d, allow_large)?;
    match ground {
        Ground::Set { n } => {
            let base = d as u64 + 1;
            let total = base
                .checked_pow(n as u32)
                .filter(|&t| allow_large || t as usize <= 1 << 20)
                .ok_or_else(|| Error::EnumerationTooLarge(format!("{base}^{n} candidates")))?;
            let tuples = (0..total)
                .map(|code| {
                    let mut parts = vec![0u64; d];
                    let mut rest = code;
                    for element in (0..n).rev() {
                        let label = (rest % base) as usize;
                        if label > 0 {
                            parts[label - 1] |= 1 << element;
                        }
                        rest /= base;
                    }
                    SetTuple::from_masks(parts)
                })
                .collect();
            Ok(System::Set(SetSystem::new(n, d, tuples, None)?))
        }
        Ground::Subspace { n, field } => {
            let subspaces = all_subspaces(n, field)?;
            let s = subspaces.len();
            let total = (s as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
            if !allow_large && total > 1 << 22 {
                return Err(Error::EnumerationTooLarge(format!("{s}^{d} subspace tuples")));
            }
            let mut tuples = Vec::new();
            for code in 0..total {
                let mut idx = vec![0usize; d];
                let mut rest = code;
                for slot in idx.iter_mut().rev() {
                    *slot = (rest % s as u128) as usize;
                    rest /= s as u128;
                }
                let dims: usize = idx.iter().map(|&i| subspaces[i].dim()).sum();
                if dims > n {
                    continue;
                }
                let parts: Vec<Subspace> = idx.iter().map(|&i| subspaces[i].clone()).collect();
                let span = parts
                    .iter()
                    .try_fold(Subspace::zero(n, field), |acc, x| acc.sum(x))?;
                if span.dim() == dims {
                    tuples.push(SubspaceTuple::new(parts));
                }
            }
            Ok(System::Subspace(SubspaceSystem::new(n, field, d, tuples, None)?))
        }
    }
}

/// The bound a theorem guarantees for `kind` under `condition` on this ground,
/// if any. Nothing is licensed over `GF(p)`.
pub fn licensed_bound(ground: Ground, d: usize, condition: Condition, kind: &FunctionalKind) -> Option<BigRational> {
    if ground.is_prime_field() {
        return None;
    }
    let set = matches!(ground, Ground::Set { .. });
    let one = BigRational::one();
    match (kind, condition) {
        (FunctionalKind::Bollobas, Condition::Bollobas) if set && d == 2 => Some(one),
        (FunctionalKind::Yue, Condition::Skew | Condition::Bollobas) if d == 2 => Some(one),
        (FunctionalKind::HegedusFrankl, Condition::Skew | Condition::Bollobas) if d == 2 => {
            Some(integer(ground.n() as u64 + 1))
        }
        (FunctionalKind::Tuza(p), Condition::Skew | Condition::Bollobas) if p.len() == d => Some(one),
        (FunctionalKind::Tuza(p), Condition::Weak) if set && p.len() == d => Some(one),
        _ => None,
    }
}

/// The functional used to prune max-m searches.
fn pruning_functional(problem: &SearchProblem) -> Option<FunctionalKind> {
    let d = problem.d;
    let kind = match problem.condition {
        Condition::Bollobas if matches!(problem.ground, Ground::Set { .. }) => FunctionalKind::Bollobas,
        Condition::Skew | Condition::Bollobas if d == 2 => FunctionalKind::Yue,
        _ => FunctionalKind::Tuza(ProbabilityVector::uniform(d).ok()?),
    };
    let bound = licensed_bound(problem.ground, d, problem.condition, &kind)?;
    (bound == BigRational::one()).then_some(kind)
}

struct Pool<'a> {
    sys: &'a dyn TupleSystem,
    condition: Condition,
    memo: Vec<u8>,
    c: usize,
}

impl Pool<'_> {
    /// Whether `b` may come after `a`.
    fn follows(&mut self, a: usize, b: usize) -> Result<bool> {
        if a == b {
            return Ok(false);
        }
        let slot = a * self.c + b;
        if self.memo[slot] == 0 {
            let mut ok = cross_holds(self.sys, self.condition, a, b)?;
            if ok && self.condition == Condition::Bollobas {
                ok = cross_holds(self.sys, self.condition, b, a)?;
            }
            self.memo[slot] = if ok { 2 } else { 1 };
        }
        Ok(self.memo[slot] == 2)
    }
}

struct Dfs<'a> {
    pool: Pool<'a>,
    ordered: bool,
    /// Objective contribution of each candidate.
    value: Vec<BigRational>,
    /// Licensed weight of each candidate, when pruning max-m.
    prune_weight: Option<Vec<BigRational>>,
    prune_weight_sum: bool,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: BigRational,
    best_seq: Vec<usize>,
}

impl Dfs<'_> {
    fn run(&mut self, seq: &mut Vec<usize>, allowed: Vec<usize>, value: BigRational, weight: BigRational) -> Result<()> {
        if self.nodes >= self.budget {
            self.exhausted = true;
            return Ok(());
        }
        self.nodes += 1;
        if value > self.best {
            self.best = value.clone();
            self.best_seq = seq.clone();
        }
        if allowed.is_empty() {
            return Ok(());
        }
        if self.prune_weight_sum {
            let rest: BigRational = allowed.iter().map(|&c| &self.value[c]).sum();
            if &value + rest <= self.best {
                return Ok(());
            }
        }
        if let Some(w) = &self.prune_weight {
            let w_min = allowed.iter().map(|&c| &w[c]).min().expect("non-empty");
            let slack = (BigRational::one() - &weight) / w_min;
            let more = slack.floor().to_integer().to_usize().unwrap_or(usize::MAX).min(allowed.len());
            if integer(seq.len() + more) <= self.best {
                return Ok(());
            }
        }
        for (pos, &c) in allowed.iter().enumerate() {
            let rest = if self.ordered { &allowed[..] } else { &allowed[pos + 1..] };
            let mut next = Vec::with_capacity(rest.len());
            for &x in rest {
                if self.pool.follows(c, x)? {
                    next.push(x);
                }
            }
            let w = match &self.prune_weight {
                Some(pw) => &weight + &pw[c],
                None => weight.clone(),
            };
            seq.push(c);
            self.run(seq, next, &value + &self.value[c], w)?;
            seq.pop();
            if self.exhausted {
                return Ok(());
            }
        }
        Ok(())
    }
}

fn select(pool: &System, indices: &[usize]) -> Result<System> {
    Ok(match pool {
        System::Set(s) => System::Set(SetSystem::new(
            s.n(),
            s.d(),
            indices.iter().map(|&i| s.tuples()[i].clone()).collect(),
            None,
        )?),
        System::Subspace(s) => System::Subspace(SubspaceSystem::new(
            s.n(),
            s.field(),
            s.d(),
            indices.iter().map(|&i| s.tuples()[i].clone()).collect(),
            None,
        )?),
    })
}

/// Depth-first search for the best system under the problem's objective.
pub fn search_max(problem: &SearchProblem) -> Result<SearchResult> {
    let pool = enumerate_candidates(problem.ground, problem.d, problem.allow_large)?;
    search_in_pool(problem, &pool)
}

pub(crate) fn search_in_pool(problem: &SearchProblem, pool: &System) -> Result<SearchResult> {
    if problem.node_budget == 0 {
        return Err(Error::Shape("node budget must be positive".into()));
    }
    if let Objective::Counterexample(kind) = &problem.objective {
        if licensed_bound(problem.ground, problem.d, problem.condition, kind).is_some() {
            return Err(Error::NotLicensed(format!(
                "{} is already bounded by a theorem for {} systems on this ground",
                kind.name(),
                problem.condition
            )));
        }
    }
    let sys = pool.as_tuples();
    let keep: Vec<usize> = (0..sys.len())
        .filter(|&c| problem.sizes.as_ref().is_none_or(|s| *s == sys.sizes(c)))
        .collect();
    if !problem.allow_large && keep.len() > DEFAULT_MAX_CANDIDATES {
        return Err(Error::EnumerationTooLarge(format!("{} candidates", keep.len())));
    }
    let pool = select(pool, &keep)?;
    let sys = pool.as_tuples();
    let c = sys.len();
    let weights_of = |kind: &FunctionalKind| -> Result<Vec<BigRational>> {
        weight::check_shape(sys, kind)?;
        (0..c).map(|i| weight::term(sys, kind, i)).collect()
    };
    let (value, prune_weight, prune_weight_sum) = match &problem.objective {
        Objective::MaxM => {
            let pw = if problem.prune {
                pruning_functional(problem).map(|k| weights_of(&k)).transpose()?
            } else {
                None
            };
            (vec![BigRational::one(); c], pw, false)
        }
        Objective::MaxWeight(kind) | Objective::Counterexample(kind) => (weights_of(kind)?, None, problem.prune),
    };
    let pruned = prune_weight.is_some() || prune_weight_sum;
    let mut dfs = Dfs {
        pool: Pool {
            sys,
            condition: problem.condition,
            memo: vec![0; c * c],
            c,
        },
        ordered: problem.condition == Condition::Skew,
        value,
        prune_weight,
        prune_weight_sum,
        budget: problem.node_budget,
        nodes: 0,
        exhausted: false,
        best: BigRational::zero(),
        best_seq: Vec::new(),
    };
    // Candidates failing clause (i) never reach the pool, so every candidate
    // is a legal one-tuple system.
    dfs.run(&mut Vec::new(), (0..c).collect(), BigRational::zero(), BigRational::zero())?;
    let witness = select(&pool, &dfs.best_seq)?;
    debug_assert!(verify::check(&witness, problem.condition)?.verdict);
    Ok(SearchResult {
        best_value: dfs.best,
        witness,
        nodes: dfs.nodes,
        exhaustive: !dfs.exhausted,
        pruned,
        candidates: c,
        field_caveat: problem.ground.is_prime_field(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub ground: Ground,
    pub d: usize,
    pub condition: Condition,
    pub m: usize,
    /// Partition blocks (sets) or coordinate blocks of a decomposition
    /// (subspaces), 1-based.
    pub blocks: Option<Vec<Vec<usize>>>,
}

fn random_entry(field: Field, rng: &mut ChaCha8Rng) -> BigRational {
    match field {
        Field::Rational => integer(rng.gen_range(-2i64..=2)),
        Field::Prime(p) => integer(rng.gen_range(0..p)),
    }
}

/// A random clause-(i) tuple whose parts split along the blocks, so it is
/// decomposition-compatible by construction.
fn random_subspace_tuple(n: usize, field: Field, d: usize, blocks: &[Subspace], rng: &mut ChaCha8Rng) -> Result<SubspaceTuple> {
    let mut parts: Vec<Vec<Vector>> = vec![Vec::new(); d];
    for block in blocks {
        let mut order: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut budget = block.dim();
        for &part in &order {
            let k = rng.gen_range(0..=budget);
            budget -= k;
            for _ in 0..k {
                let mut v = vec![BigRational::zero(); n];
                for row in block.rows() {
                    let c = random_entry(field, rng);
                    for (x, r) in v.iter_mut().zip(row) {
                        *x = field.add(x, &field.mul(&c, r));
                    }
                }
                parts[part].push(v);
            }
        }
    }
    let parts = parts
        .into_iter()
        .map(|rows| Subspace::canonicalize(n, field, rows))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubspaceTuple::new(parts))
}

fn random_set_tuple(n: usize, d: usize, rng: &mut ChaCha8Rng) -> SetTuple {
    let mut parts = vec![0u64; d];
    for element in 0..n {
        let label = rng.gen_range(0..=d);
        if label > 0 {
            parts[label - 1] |= 1 << element;
        }
    }
    SetTuple::from_masks(parts)
}

fn proposals(m: usize) -> usize {
    40 * m + 100
}

/// Greedily inserts random tuples at random positions while the condition keeps
/// holding, until it has `target` tuples or the proposal budget runs out.
/// Subspace proposals respect the attached decomposition.
pub fn extend_random(system: &System, condition: Condition, target: usize, seed: u64) -> Result<System> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = system.clone();
    let mut attempts = proposals(target);
    while current.len() < target && attempts > 0 {
        attempts -= 1;
        let pos = rng.gen_range(0..=current.len());
        let candidate = match &current {
            System::Set(s) => {
                let mut tuples = s.tuples().to_vec();
                tuples.insert(pos, random_set_tuple(s.n(), s.d(), &mut rng));
                System::Set(SetSystem::new(s.n(), s.d(), tuples, s.partition().cloned())?)
            }
            System::Subspace(s) => {
                let blocks = match s.decomposition() {
                    Some(dec) => dec.blocks().to_vec(),
                    None => vec![Subspace::full(s.n(), s.field())],
                };
                let t = random_subspace_tuple(s.n(), s.field(), s.d(), &blocks, &mut rng)?;
                let mut tuples = s.tuples().to_vec();
                tuples.insert(pos, t);
                System::Subspace(SubspaceSystem::new(s.n(), s.field(), s.d(), tuples, s.decomposition().cloned())?)
            }
        };
        let sys = candidate.as_tuples();
        let mut ok = sys.is_independent(pos)?;
        for k in 0..sys.len() {
            if !ok {
                break;
            }
            let (i, j) = match k.cmp(&pos) {
                std::cmp::Ordering::Less => (k, pos),
                std::cmp::Ordering::Greater => (pos, k),
                std::cmp::Ordering::Equal => continue,
            };
            ok = cross_holds(sys, condition, i, j)?
                && (condition != Condition::Bollobas || cross_holds(sys, condition, j, i)?);
        }
        if ok {
            current = candidate;
        }
    }
    Ok(current)
}

/// A seeded random system verified under `spec.condition`, with at most
/// `spec.m` tuples.
pub fn random_valid_system(spec: &RandomSpec, seed: u64) -> Result<System> {
    if spec.d == 0 {
        return Err(Error::Shape("arity must be positive".into()));
    }
    let empty = match spec.ground {
        Ground::Set { n } => {
            let partition = spec.blocks.as_ref().map(|b| Partition::new(n, b)).transpose()?;
            System::Set(SetSystem::new(n, spec.d, Vec::new(), partition)?)
        }
        Ground::Subspace { n, field } => {
            let decomposition = spec
                .blocks
                .as_ref()
                .map(|blocks| {
                    Partition::new(n, blocks)?;
                    Decomposition::new(
                        n,
                        field,
                        blocks
                            .iter()
                            .map(|b| Subspace::coordinate(n, field, b.iter().map(|x| x - 1)))
                            .collect(),
                    )
                })
                .transpose()?;
            System::Subspace(SubspaceSystem::new(n, field, spec.d, Vec::new(), decomposition)?)
        }
    };
    extend_random(&empty, spec.condition, spec.m, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExplorationMode {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureFinding {
    pub mode: ExplorationMode,
    pub result: SearchResult,
    /// The best weak system found has Tuza weight above 1. Over `GF(p)` this
    /// is a finding about that field only.
    pub exceeds_one: bool,
}

/// Looks for weak subspace d-tuple systems with large Tuza weight: DFS over
/// all candidates for `GF(p)`, `budget` seeded random systems over the
/// rationals.
pub fn explore_weak_subspace_conjecture(
    n: usize,
    d: usize,
    p: &ProbabilityVector,
    field: Field,
    budget: u64,
    seed: u64,
) -> Result<ConjectureFinding> {
    if p.len() != d {
        return Err(Error::ArityMismatch { expected: d, found: p.len() });
    }
    let kind = FunctionalKind::Tuza(p.clone());
    let ground = Ground::Subspace { n, field };
    let (mode, result) = if field.is_prime_field() {
        let mut problem = SearchProblem::new(ground, d, Condition::Weak, Objective::MaxWeight(kind));
        problem.node_budget = budget.max(1);
        problem.prune = true;
        (ExplorationMode::Exhaustive, search_max(&problem)?)
    } else {
        let spec = RandomSpec {
            ground,
            d,
            condition: Condition::Weak,
            m: d.pow(n as u32) + 2,
            blocks: None,
        };
        let mut best = BigRational::zero();
        let mut witness = random_valid_system(&RandomSpec { m: 0, ..spec.clone() }, seed)?;
        for trial in 0..budget {
            let sys = random_valid_system(&spec, seed.wrapping_add(trial))?;
            let w = weight::omega(&sys, &kind)?;
            if w > best {
                best = w;
                witness = sys;
            }
        }
        (
            ExplorationMode::Randomized,
            SearchResult {
                best_value: best,
                witness,
                nodes: budget,
                exhaustive: false,
                pruned: false,
                candidates: 0,
                field_caveat: false,
            },
        )
    };
    let exceeds_one = result.best_value > BigRational::one();
    Ok(ConjectureFinding {
        mode,
        result,
        exceeds_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check;

    fn set_pairs_problem(n: usize, condition: Condition) -> SearchProblem {
        SearchProblem::new(Ground::Set { n }, 2, condition, Objective::MaxM)
    }

    #[test]
    fn set_candidates() {
        let c = enumerate_candidates(Ground::Set { n: 1 }, 2, false).unwrap();
        let System::Set(s) = c else { unreachable!() };
        let expected = SetSystem::pairs(1, &[(vec![], vec![]), (vec![1], vec![]), (vec![], vec![1])]).unwrap();
        assert_eq!(s.tuples(), expected.tuples());
        assert_eq!(enumerate_candidates(Ground::Set { n: 2 }, 2, false).unwrap().len(), 9);
        assert!(matches!(
            enumerate_candidates(Ground::Set { n: 7 }, 2, false),
            Err(Error::EnumerationTooLarge(_))
        ));
        assert!(enumerate_candidates(Ground::Set { n: 7 }, 1, true).is_ok());
    }

    /// Independent count of clause-(i) pairs of subspaces of `GF(2)^2`,
    /// listing each subspace as its set of vectors.
    fn gf2_plane_pair_oracle() -> usize {
        let vectors = [(0u8, 0u8), (1, 0), (0, 1), (1, 1)];
        let zero = vec![(0, 0)];
        let mut subspaces = vec![zero.clone()];
        for &v in &vectors[1..] {
            subspaces.push(vec![(0, 0), v]);
        }
        subspaces.push(vectors.to_vec());
        let dim = |s: &Vec<(u8, u8)>| s.len().trailing_zeros() as usize;
        let mut count = 0;
        for a in &subspaces {
            for b in &subspaces {
                let meet = a.iter().filter(|v| b.contains(v)).count();
                if meet == 1 && dim(a) + dim(b) <= 2 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn gf2_candidates() {
        let f = Field::Prime(2);
        assert_eq!(all_subspaces(2, f).unwrap().len(), 5);
        assert_eq!(all_subspaces(3, f).unwrap().len(), 16);
        assert_eq!(all_subspaces(2, Field::Prime(3)).unwrap().len(), 6);
        let c = enumerate_candidates(Ground::Subspace { n: 2, field: f }, 2, false).unwrap();
        assert_eq!(gf2_plane_pair_oracle(), 15);
        assert_eq!(c.len(), 15);
    }

    #[test]
    fn max_m_examples() {
        let r = search_max(&set_pairs_problem(2, Condition::Skew)).unwrap();
        assert_eq!(r.best_value, integer(4));
        assert!(r.exhaustive);
        assert!(check(&r.witness, Condition::Skew).unwrap().verdict);

        let mut uniform = set_pairs_problem(2, Condition::Skew);
        uniform.sizes = Some(vec![1, 1]);
        assert_eq!(search_max(&uniform).unwrap().best_value, integer(2));

        let r = search_max(&set_pairs_problem(1, Condition::Weak)).unwrap();
        assert_eq!(r.best_value, integer(2));
        assert!(check(&r.witness, Condition::Weak).unwrap().verdict);
    }

    #[test]
    fn pruning_agrees() {
        for n in 0..=2 {
            for condition in [Condition::Skew, Condition::Weak, Condition::Bollobas] {
                let plain = search_max(&set_pairs_problem(n, condition)).unwrap();
                let mut p = set_pairs_problem(n, condition);
                p.prune = true;
                let pruned = search_max(&p).unwrap();
                assert_eq!(plain.best_value, pruned.best_value, "n={n} {condition}");
                assert!(pruned.pruned);
                assert!(pruned.nodes <= plain.nodes);
            }
        }
    }

    #[test]
    fn order_invariance() {
        let problem = set_pairs_problem(2, Condition::Skew);
        let pool = enumerate_candidates(problem.ground, 2, false).unwrap();
        let reversed = search_in_pool(&problem, &pool.reversed()).unwrap();
        assert_eq!(reversed.best_value, search_max(&problem).unwrap().best_value);
    }

    #[test]
    fn budget_exhaustion() {
        let mut p = set_pairs_problem(2, Condition::Skew);
        p.node_budget = 3;
        let r = search_max(&p).unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.nodes, 3);
        assert!(check(&r.witness, Condition::Skew).unwrap().verdict);
    }

    #[test]
    fn counterexample_needs_unlicensed_inequality() {
        let p = SearchProblem::new(Ground::Set { n: 2 }, 2, Condition::Skew, Objective::Counterexample(FunctionalKind::Yue));
        assert!(matches!(search_max(&p), Err(Error::NotLicensed(_))));
    }

    #[test]
    fn random_systems() {
        let spec = RandomSpec {
            ground: Ground::Set { n: 4 },
            d: 2,
            condition: Condition::Skew,
            m: 6,
            blocks: None,
        };
        let a = random_valid_system(&spec, 7).unwrap();
        assert_eq!(a, random_valid_system(&spec, 7).unwrap());
        assert!(a.len() <= 6);
        assert!(check(&a, Condition::Skew).unwrap().verdict);
        let System::Set(s) = &a else { unreachable!() };
        assert!(check(&System::Subspace(crate::system::embed(s)), Condition::Skew).unwrap().verdict);

        let empty = random_valid_system(&RandomSpec { m: 0, ..spec }, 1).unwrap();
        assert!(empty.is_empty());
        assert_eq!(weight::omega(&empty, &FunctionalKind::Yue).unwrap(), BigRational::zero());

        let sub = random_valid_system(
            &RandomSpec {
                ground: Ground::Subspace { n: 3, field: Field::Rational },
                d: 2,
                condition: Condition::Skew,
                m: 5,
                blocks: Some(vec![vec![1], vec![2, 3]]),
            },
            3,
        )
        .unwrap();
        assert!(check(&sub, Condition::Skew).unwrap().verdict);
        let System::Subspace(s) = &sub else { unreachable!() };
        assert!(s.is_decomposition_compatible().unwrap());
    }

    #[test]
    fn conjecture_explorer_small() {
        let p: ProbabilityVector = "1/3,2/3".parse().unwrap();
        for field in [Field::Prime(2), Field::Prime(3)] {
            let f = explore_weak_subspace_conjecture(1, 2, &p, field, 100_000, 0).unwrap();
            assert_eq!(f.mode, ExplorationMode::Exhaustive);
            assert!(f.result.exhaustive);
            assert_eq!(f.result.best_value, BigRational::one());
            assert!(!f.exceeds_one);
            assert!(f.result.field_caveat);
        }
        let f = explore_weak_subspace_conjecture(1, 2, &p, Field::Rational, 20, 0).unwrap();
        assert_eq!(f.mode, ExplorationMode::Randomized);
        assert!(f.result.best_value <= BigRational::one());
    }
}
