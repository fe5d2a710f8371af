//! Weight-invariant fill-up, saturation to fullness, and type-class
//! certification of full systems.
//!
//! A fill-up step replaces one non-full tuple by the tuples obtained from it
//! by adding a fresh element (or vector) to each coordinate in turn. Each
//! step leaves the tracked weights unchanged and raises the potential by an
//! exact amount, so repeating it terminates in a system of full tuples whose
//! type classes can be counted against binomial and multinomial bounds.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::{multinomial, uint_to_rational, BigRational, ProbabilityVector};
use crate::error::{Error, Result};
use crate::subspace::{extension_vector, Subspace, Vector};
use crate::system::{elements_of, SetSystem, SetTuple, SubspaceSystem, SubspaceTuple, System, TupleSystem, TypeVector};
use crate::verify::{self, Condition};
use crate::weight::{self, check_flavor, pair_potential_term, yue_term, Flavor, FunctionalKind};

/// What was added to the replaced tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    /// A ground element, 1-based.
    Element(usize),
    Vector(Vector),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillUpStep {
    /// 0-based index of the replaced tuple.
    pub index: usize,
    /// 0-based block, for decomposed pair steps.
    pub block: Option<usize>,
    pub extension: Extension,
    /// Number of tuples that took its place (2 for pairs, d for tuples).
    pub replacements: usize,
    pub omega_before: Vec<BigRational>,
    pub omega_after: Vec<BigRational>,
    pub phi_before: BigUint,
    pub phi_after: BigUint,
    /// The increment the potential must show for this step.
    pub expected_phi_increment: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationTrace {
    pub flavor: Flavor,
    pub tracked: Vec<FunctionalKind>,
    pub initial_omega: Vec<BigRational>,
    pub initial_phi: BigUint,
    pub phi_bound: BigUint,
    pub steps: Vec<FillUpStep>,
    pub final_system: System,
}

impl SaturationTrace {
    pub fn omega_constant(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.omega_before == self.initial_omega && s.omega_after == self.initial_omega)
    }

    pub fn phi_increments_exact(&self) -> bool {
        let mut prev = &self.initial_phi;
        for s in &self.steps {
            if &s.phi_before != prev || s.phi_after != &s.phi_before + &s.expected_phi_increment {
                return false;
            }
            prev = &s.phi_after;
        }
        true
    }

    pub fn phi_strictly_increasing(&self) -> bool {
        self.steps.iter().all(|s| s.phi_after > s.phi_before)
    }

    pub fn within_bound(&self) -> bool {
        BigUint::from(self.steps.len()) <= self.phi_bound
            && self.steps.iter().all(|s| s.phi_after <= self.phi_bound)
    }
}

/// Order in which a decomposed pair's two replacements are inserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InsertionOrder {
    /// `(A ⊕ ⟨x⟩, B)` then `(A, B ⊕ ⟨x⟩)`; preserves skewness.
    #[default]
    ExtendFirstComponentFirst,
    /// The opposite order; kept for regression checks only.
    ExtendSecondComponentFirst,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SaturationOptions {
    /// Re-verify the licensing condition after every step.
    pub reverify: bool,
}

fn require(system: &System, condition: Condition) -> Result<()> {
    let report = verify::check(system, condition)?;
    if !report.verdict {
        return Err(Error::NotLicensed(format!(
            "fill-up requires a {condition} system (first violation: {:?})",
            report.first_violation
        )));
    }
    Ok(())
}

fn set_step(system: &SetSystem, i: usize, x: usize) -> Result<SetSystem> {
    system.check_index(i)?;
    if x == 0 || x > system.n() {
        return Err(Error::ElementOutOfRange {
            element: x,
            n: system.n(),
        });
    }
    let bit = 1u64 << (x - 1);
    let old = &system.tuples()[i];
    if old.union() & bit != 0 {
        return Err(Error::AlreadyCovered { index: i, element: x });
    }
    let new: Vec<SetTuple> = (0..system.d())
        .map(|l| {
            let mut parts = old.parts().to_vec();
            parts[l] |= bit;
            SetTuple::from_masks(parts)
        })
        .collect();
    if system.tuples().iter().any(|t| new.contains(t)) {
        return Err(Error::DuplicateTuple { index: i });
    }
    Ok(system.replace_tuple(i, new))
}

/// Replaces tuple `i` (0-based) by the `d` tuples that add ground element `x`
/// (1-based) to each coordinate, in coordinate order.
pub fn fill_up_set_tuple(system: &SetSystem, i: usize, x: usize) -> Result<SetSystem> {
    require(&System::Set(system.clone()), Condition::Weak)?;
    set_step(system, i, x)
}

fn require_pair_context(system: &SubspaceSystem) -> Result<()> {
    if system.d() != 2 {
        return Err(Error::Shape("pair fill-up needs a pair system".into()));
    }
    if system.decomposition().is_none() {
        return Err(Error::MissingContext);
    }
    Ok(())
}

fn pair_step(system: &SubspaceSystem, i: usize, k: usize, order: InsertionOrder) -> Result<(SubspaceSystem, Vector)> {
    system.check_index(i)?;
    let dec = system.decomposition().ok_or(Error::MissingContext)?;
    let block = dec
        .blocks()
        .get(k)
        .ok_or_else(|| Error::Shape(format!("block {k} out of range")))?;
    let t = &system.tuples()[i];
    let (a, b) = (&t.parts()[0], &t.parts()[1]);
    let covered = a.component(block)?.sum(&b.component(block)?)?;
    let x = extension_vector(block, &covered)?.ok_or(Error::AlreadyFull {
        index: i,
        block: Some(k),
    })?;
    let first = SubspaceTuple::new(vec![a.with_vector(&x)?, b.clone()]);
    let second = SubspaceTuple::new(vec![a.clone(), b.with_vector(&x)?]);
    let new = match order {
        InsertionOrder::ExtendFirstComponentFirst => vec![first, second],
        InsertionOrder::ExtendSecondComponentFirst => vec![second, first],
    };
    Ok((system.replace_tuple(i, new), x))
}

/// Pair fill-up in block `k` (0-based) with an explicit insertion order and
/// no pre- or post-verification.
pub fn fill_up_subspace_pair_ordered(
    system: &SubspaceSystem,
    i: usize,
    k: usize,
    order: InsertionOrder,
) -> Result<SubspaceSystem> {
    require_pair_context(system)?;
    Ok(pair_step(system, i, k, order)?.0)
}

/// Replaces pair `i` by `(A ⊕ ⟨x⟩, B)` and `(A, B ⊕ ⟨x⟩)`, where `x` is the
/// first basis vector of block `k` outside `(A ∩ V_k) ⊕ (B ∩ V_k)`.
pub fn fill_up_subspace_pair(system: &SubspaceSystem, i: usize, k: usize) -> Result<SubspaceSystem> {
    require_pair_context(system)?;
    if let Some(bad) = system.first_incompatible()? {
        return Err(Error::NotCompatible(bad + 1));
    }
    require(&System::Subspace(system.clone()), Condition::Skew)?;
    let (out, _) = pair_step(system, i, k, InsertionOrder::default())?;
    let report = verify::check(&System::Subspace(out.clone()), Condition::Skew)?;
    if !report.verdict {
        return Err(Error::InvariantBroken(format!(
            "pair fill-up broke skewness at {:?}",
            report.first_violation
        )));
    }
    Ok(out)
}

fn tuple_span(t: &SubspaceTuple, n: usize, system: &SubspaceSystem) -> Result<Subspace> {
    t.parts()
        .iter()
        .try_fold(Subspace::zero(n, system.field()), |acc, s| acc.sum(s))
}

fn tuple_step(system: &SubspaceSystem, i: usize) -> Result<(SubspaceSystem, Vector)> {
    system.check_index(i)?;
    let n = system.n();
    let t = &system.tuples()[i];
    let span = tuple_span(t, n, system)?;
    let x = extension_vector(&Subspace::full(n, system.field()), &span)?
        .ok_or(Error::AlreadyFull { index: i, block: None })?;
    let new = (0..system.d())
        .map(|l| {
            let mut parts = t.parts().to_vec();
            parts[l] = parts[l].with_vector(&x)?;
            Ok(SubspaceTuple::new(parts))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((system.replace_tuple(i, new), x))
}

/// Replaces tuple `i` by the `d` tuples adding `⟨x⟩` to each coordinate, with
/// `x` the first standard basis vector outside the tuple's span.
pub fn fill_up_subspace_tuple(system: &SubspaceSystem, i: usize) -> Result<SubspaceSystem> {
    require(&System::Subspace(system.clone()), Condition::Skew)?;
    Ok(tuple_step(system, i)?.0)
}

fn set_is_full(system: &SetSystem, i: usize) -> bool {
    system.tuples()[i].union() == system.ground_mask()
}

fn tuple_is_full(system: &SubspaceSystem, i: usize) -> Result<bool> {
    Ok(tuple_span(&system.tuples()[i], system.n(), system)?.is_full())
}

/// Functionals whose value a saturation of this flavor keeps fixed.
pub fn default_tracked(system: &System, flavor: Flavor) -> Vec<FunctionalKind> {
    let d = system.arity();
    let mut out = Vec::new();
    if let Ok(p) = ProbabilityVector::uniform(d) {
        if flavor != Flavor::Pair {
            out.push(FunctionalKind::Tuza(p));
        }
    }
    if d == 2 {
        out.push(FunctionalKind::Yue);
        if system.as_tuples().context_sizes().is_some() {
            out.push(FunctionalKind::PartitionedYue);
        }
    }
    out
}

fn precondition(system: &System, flavor: Flavor) -> Result<()> {
    check_flavor(system, flavor)?;
    match (flavor, system) {
        (Flavor::Set, _) => require(system, Condition::Weak),
        (Flavor::Pair, System::Subspace(s)) => {
            if let Some(bad) = s.first_incompatible()? {
                return Err(Error::NotCompatible(bad + 1));
            }
            require(system, Condition::Skew)
        }
        (Flavor::Tuple, _) => {
            if !verify::check(system, Condition::Skew)?.verdict {
                return Err(Error::NotLicensed(
                    "subspace tuple saturation needs a skew system; weak subspace systems have no \
                     uniform counting bound to certify against"
                        .into(),
                ));
            }
            Ok(())
        }
        _ => unreachable!("flavor checked"),
    }
}

struct Next {
    index: usize,
    block: Option<usize>,
}

fn next_step(system: &System, flavor: Flavor, from: usize) -> Result<Option<Next>> {
    for i in from..system.len() {
        match (flavor, system) {
            (Flavor::Set, System::Set(s)) => {
                if !set_is_full(s, i) {
                    return Ok(Some(Next { index: i, block: None }));
                }
            }
            (Flavor::Pair, System::Subspace(s)) => {
                let deficits = weight::block_deficits(s, i)?;
                if let Some(k) = deficits.iter().position(|&d| d > 0) {
                    return Ok(Some(Next { index: i, block: Some(k) }));
                }
            }
            (Flavor::Tuple, System::Subspace(s)) => {
                if !tuple_is_full(s, i)? {
                    return Ok(Some(Next { index: i, block: None }));
                }
            }
            _ => unreachable!("flavor checked"),
        }
    }
    Ok(None)
}

fn potential_term(system: &System, flavor: Flavor, i: usize) -> Result<BigUint> {
    match (flavor, system) {
        (Flavor::Pair, System::Subspace(s)) => pair_potential_term(s, i),
        _ => Ok(BigUint::from(system.as_tuples().sizes(i).iter().sum::<usize>())),
    }
}

fn terms(system: &System, tracked: &[FunctionalKind], range: std::ops::Range<usize>) -> Result<Vec<BigRational>> {
    tracked
        .iter()
        .map(|kind| {
            let mut total = BigRational::zero();
            for i in range.clone() {
                total += weight::term(system.as_tuples(), kind, i)?;
            }
            Ok(total)
        })
        .collect()
}

/// Exact potential increase of one fill-up step replacing a tuple whose
/// potential term is `old` by `replacements` tuples.
///
/// Pairs: `3·∏_j 2^{n_j − d_j}`. Size-sum flavors: each of the `d` new tuples
/// has size `s + 1`, so the increase is `d(s + 1) − s = (d − 1)s + d`, which
/// equals `d` only when the replaced tuple is empty.
pub fn expected_increment(flavor: Flavor, old: &BigUint, replacements: usize) -> BigUint {
    match flavor {
        Flavor::Pair => old * 3u32,
        _ => old * (replacements - 1) + replacements,
    }
}

/// Saturates with the default tracked functionals for the flavor.
pub fn saturate(system: &System, flavor: Flavor) -> Result<SaturationTrace> {
    saturate_with(system, flavor, &default_tracked(system, flavor), SaturationOptions::default())
}

/// Repeats fill-up on the lowest non-full tuple (then lowest deficient block)
/// until every tuple is full, recording `ω` for each tracked functional and
/// the potential around every step.
pub fn saturate_with(
    system: &System,
    flavor: Flavor,
    tracked: &[FunctionalKind],
    options: SaturationOptions,
) -> Result<SaturationTrace> {
    precondition(system, flavor)?;
    let condition = match (flavor, system) {
        (Flavor::Set, _) => Condition::Weak,
        _ => Condition::Skew,
    };
    let initial_omega = tracked
        .iter()
        .map(|k| weight::omega(system, k))
        .collect::<Result<Vec<_>>>()?;
    let initial_phi = weight::phi(system, flavor)?;
    let phi_bound = weight::phi_upper_bound(system, flavor)?;

    let mut current = system.clone();
    let mut omega = initial_omega.clone();
    let mut phi = initial_phi.clone();
    let mut steps = Vec::new();
    let mut cursor = 0;
    while let Some(next) = next_step(&current, flavor, cursor)? {
        let i = next.index;
        cursor = i;
        let old_terms = terms(&current, tracked, i..i + 1)?;
        let old_phi_term = potential_term(&current, flavor, i)?;
        let (updated, extension, replacements) = match (&current, flavor) {
            (System::Set(s), Flavor::Set) => {
                let x = elements_of(s.ground_mask() & !s.tuples()[i].union())[0];
                (System::Set(set_step(s, i, x)?), Extension::Element(x), s.d())
            }
            (System::Subspace(s), Flavor::Pair) => {
                let k = next.block.expect("pair steps carry a block");
                let (out, x) = pair_step(s, i, k, InsertionOrder::default())?;
                (System::Subspace(out), Extension::Vector(x), 2)
            }
            (System::Subspace(s), Flavor::Tuple) => {
                let (out, x) = tuple_step(s, i)?;
                (System::Subspace(out), Extension::Vector(x), s.d())
            }
            _ => unreachable!("flavor checked"),
        };
        let new_terms = terms(&updated, tracked, i..i + replacements)?;
        let mut new_phi_terms = BigUint::zero();
        for j in i..i + replacements {
            new_phi_terms += potential_term(&updated, flavor, j)?;
        }
        let omega_after: Vec<BigRational> = omega
            .iter()
            .zip(old_terms.iter().zip(&new_terms))
            .map(|(w, (old, new))| w - old + new)
            .collect();
        let phi_after = &phi - &old_phi_term + &new_phi_terms;
        let expected_phi_increment = expected_increment(flavor, &old_phi_term, replacements);
        if options.reverify && !verify::check(&updated, condition)?.verdict {
            return Err(Error::InvariantBroken(format!(
                "fill-up of tuple {} broke the {condition} condition",
                i + 1
            )));
        }
        steps.push(FillUpStep {
            index: i,
            block: next.block,
            extension,
            replacements,
            omega_before: omega.clone(),
            omega_after: omega_after.clone(),
            phi_before: phi.clone(),
            phi_after: phi_after.clone(),
            expected_phi_increment,
        });
        if BigUint::from(steps.len()) > phi_bound {
            return Err(Error::InvariantBroken("saturation exceeded the potential bound".into()));
        }
        current = updated;
        omega = omega_after;
        phi = phi_after;
    }

    // The running values were maintained incrementally; recompute them once
    // from scratch on the final system.
    let final_omega = tracked
        .iter()
        .map(|k| weight::omega(&current, k))
        .collect::<Result<Vec<_>>>()?;
    if final_omega != omega || weight::phi(&current, flavor)? != phi {
        return Err(Error::InvariantBroken("incremental weights drifted from recomputed values".into()));
    }
    Ok(SaturationTrace {
        flavor,
        tracked: tracked.to_vec(),
        initial_omega,
        initial_phi,
        phi_bound,
        steps,
        final_system: current,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeClass {
    pub profile: TypeVector,
    /// 1-based indices.
    pub members: Vec<usize>,
    pub bound: BigUint,
    /// Per-member weight of this class.
    pub weight: BigRational,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullSystemCertificate {
    pub functional: FunctionalKind,
    pub classes: Vec<TypeClass>,
    pub omega: BigRational,
    /// `Σ_classes bound · weight`, an upper estimate for `ω`.
    pub chain_value: BigRational,
    pub bound: BigRational,
    pub holds: bool,
    pub field_caveat: bool,
}

/// Groups a full system into type classes, checks each class against its
/// counting bound, and closes the chain `ω ≤ Σ bound·weight ≤ 1`.
///
/// Supported functionals: `tuza` (classes by coordinate sizes, multinomial
/// bounds), `yue` (single block) and `partitioned-yue` (per-block classes,
/// `∏_k C(n_k, a_k)` bounds).
pub fn certify_full_system(system: &System, functional: &FunctionalKind) -> Result<FullSystemCertificate> {
    let sys = system.as_tuples();
    let d = sys.arity();
    let partitioned = match functional {
        FunctionalKind::Tuza(p) => {
            if p.len() != d {
                return Err(Error::ArityMismatch { expected: d, found: p.len() });
            }
            false
        }
        FunctionalKind::Yue | FunctionalKind::PartitionedYue => {
            if d != 2 {
                return Err(Error::Shape("yue certification needs a pair system".into()));
            }
            *functional == FunctionalKind::PartitionedYue
        }
        other => {
            return Err(Error::Shape(format!("no type-class argument for {}", other.name())));
        }
    };
    let needed = match (functional, system) {
        (FunctionalKind::Tuza(_), System::Set(_)) => Condition::Weak,
        _ => Condition::Skew,
    };
    require(system, needed)?;
    if partitioned {
        if sys.context_sizes().is_none() {
            return Err(Error::MissingContext);
        }
        if let System::Subspace(s) = system {
            if let Some(bad) = s.first_incompatible()? {
                return Err(Error::NotCompatible(bad + 1));
            }
        }
    }

    let n = sys.ground();
    let block_sizes = if partitioned {
        sys.context_sizes().expect("checked")
    } else {
        vec![n]
    };
    let mut classes: BTreeMap<TypeVector, Vec<usize>> = BTreeMap::new();
    for i in 0..sys.len() {
        let profile = if partitioned {
            sys.profile(i)?
        } else {
            TypeVector(vec![sys.sizes(i)])
        };
        // Clause (i) holds, so coordinate sizes add up to the covered size.
        let full = profile
            .0
            .iter()
            .zip(&block_sizes)
            .all(|(block, &n_k)| block.iter().sum::<usize>() == n_k);
        if !full {
            return Err(Error::Shape(format!("tuple {} is not full", i + 1)));
        }
        classes.entry(profile).or_default().push(i + 1);
    }

    let class_weight = |profile: &TypeVector| -> BigRational {
        match functional {
            FunctionalKind::Tuza(p) => p.monomial(&profile.0[0]),
            _ => profile.0.iter().map(|ab| yue_term(ab[0], ab[1])).product(),
        }
    };
    let caveat = system.is_prime_field();
    let mut out = Vec::with_capacity(classes.len());
    let mut omega = BigRational::zero();
    let mut chain_value = BigRational::zero();
    for (profile, members) in classes {
        let bound: BigUint = profile
            .0
            .iter()
            .map(|block| multinomial(&block.iter().map(|&a| a as u64).collect::<Vec<_>>()))
            .product();
        let weight = class_weight(&profile);
        let within_bound = verify::fits(members.len(), &bound);
        if !within_bound && !caveat {
            return Err(Error::ClassBoundViolated {
                profile: profile.to_string(),
                count: members.len(),
                bound: bound.to_string(),
            });
        }
        omega += &weight * BigRational::from_integer(members.len().into());
        chain_value += &weight * uint_to_rational(&bound);
        out.push(TypeClass {
            profile,
            members,
            bound,
            weight,
            within_bound,
        });
    }
    let one = BigRational::from_integer(1.into());
    let holds = out.iter().all(|c| c.within_bound) && omega <= chain_value && chain_value <= one;
    Ok(FullSystemCertificate {
        functional: functional.clone(),
        classes: out,
        omega,
        chain_value,
        bound: one,
        holds,
        field_caveat: caveat,
    })
}
