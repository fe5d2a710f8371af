//! Ordered systems of d-tuples of sets or subspaces.
//!
//! Tuple order is part of a system's value: skew conditions only look at
//! `i < j`. Pair systems are plain `d = 2` systems.

use std::fmt;

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::subspace::{Decomposition, Subspace};

/// Maximum ground size for set systems (subsets are `u64` bitmasks).
pub const MAX_SET_GROUND: usize = 64;

fn mask_of(elements: &[usize], n: usize) -> Result<u64> {
    let mut mask = 0u64;
    for &x in elements {
        if x == 0 || x > n {
            return Err(Error::ElementOutOfRange { element: x, n });
        }
        mask |= 1 << (x - 1);
    }
    Ok(mask)
}

/// Sorted 1-based elements of a bitmask.
pub fn elements_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A d-tuple of subsets of `[n]`, stored as bitmasks (bit `p-1` is element `p`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetTuple(Vec<u64>);

impl SetTuple {
    pub fn from_masks(parts: Vec<u64>) -> Self {
        Self(parts)
    }

    pub fn from_elements(parts: &[Vec<usize>], n: usize) -> Result<Self> {
        parts
            .iter()
            .map(|p| mask_of(p, n))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.0.iter().map(|m| m.count_ones() as usize).collect()
    }

    pub fn union(&self) -> u64 {
        self.0.iter().fold(0, |acc, m| acc | m)
    }

    pub fn is_disjoint(&self) -> bool {
        let mut seen = 0u64;
        for &m in &self.0 {
            if seen & m != 0 {
                return false;
            }
            seen |= m;
        }
        true
    }

    pub fn elements(&self) -> Vec<Vec<usize>> {
        self.0.iter().map(|&m| elements_of(m)).collect()
    }
}

impl fmt::Display for SetTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .elements()
            .iter()
            .map(|e| {
                let inner: Vec<String> = e.iter().map(usize::to_string).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Ordered blocks `X_1..X_r` partitioning `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<u64>,
}

impl Partition {
    pub fn new(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n > MAX_SET_GROUND {
            return Err(Error::GroundTooLarge(n));
        }
        let mut seen = 0u64;
        let mut masks = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mask = mask_of(block, n)?;
            if mask.count_ones() as usize != block.len() || seen & mask != 0 {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            seen |= mask;
            masks.push(mask);
        }
        if seen != full_mask(n) {
            return Err(Error::InvalidPartition("blocks do not cover the ground set".into()));
        }
        Ok(Self { n, blocks: masks })
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|m| m.count_ones() as usize).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetSystem {
    n: usize,
    d: usize,
    tuples: Vec<SetTuple>,
    partition: Option<Partition>,
}

impl SetSystem {
    pub fn new(n: usize, d: usize, tuples: Vec<SetTuple>, partition: Option<Partition>) -> Result<Self> {
        if n > MAX_SET_GROUND {
            return Err(Error::GroundTooLarge(n));
        }
        let ground = full_mask(n);
        for t in &tuples {
            if t.arity() != d {
                return Err(Error::ArityMismatch {
                    expected: d,
                    found: t.arity(),
                });
            }
            if let Some(&bad) = t.parts().iter().find(|&&m| m & !ground != 0) {
                return Err(Error::ElementOutOfRange {
                    element: (64 - (bad & !ground).leading_zeros()) as usize,
                    n,
                });
            }
        }
        if let Some(p) = &partition {
            if p.n != n {
                return Err(Error::InvalidPartition(format!(
                    "partition of [{}] attached to a system on [{n}]",
                    p.n
                )));
            }
        }
        Ok(Self {
            n,
            d,
            tuples,
            partition,
        })
    }

    /// Pair system from 1-based element lists.
    pub fn pairs(n: usize, pairs: &[(Vec<usize>, Vec<usize>)]) -> Result<Self> {
        let tuples = pairs
            .iter()
            .map(|(a, b)| SetTuple::from_elements(&[a.clone(), b.clone()], n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, 2, tuples, None)
    }

    pub fn with_partition(self, partition: Option<Partition>) -> Result<Self> {
        Self::new(self.n, self.d, self.tuples, partition)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tuples(&self) -> &[SetTuple] {
        &self.tuples
    }

    pub fn partition(&self) -> Option<&Partition> {
        self.partition.as_ref()
    }

    pub fn ground_mask(&self) -> u64 {
        full_mask(self.n)
    }

    pub(crate) fn replace_tuple(&self, index: usize, with: Vec<SetTuple>) -> Self {
        let mut tuples = self.tuples.clone();
        tuples.splice(index..=index, with);
        Self {
            tuples,
            ..self.clone()
        }
    }

    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.tuples.reverse();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceTuple(Vec<Subspace>);

impl SubspaceTuple {
    pub fn new(parts: Vec<Subspace>) -> Self {
        Self(parts)
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.0.iter().map(Subspace::dim).collect()
    }
}

impl fmt::Display for SubspaceTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Subspace::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceSystem {
    n: usize,
    field: Field,
    d: usize,
    tuples: Vec<SubspaceTuple>,
    decomposition: Option<Decomposition>,
}

impl SubspaceSystem {
    pub fn new(
        n: usize,
        field: Field,
        d: usize,
        tuples: Vec<SubspaceTuple>,
        decomposition: Option<Decomposition>,
    ) -> Result<Self> {
        for t in &tuples {
            if t.arity() != d {
                return Err(Error::ArityMismatch {
                    expected: d,
                    found: t.arity(),
                });
            }
            for s in t.parts() {
                if s.ambient() != n {
                    return Err(Error::AmbientMismatch(n, s.ambient()));
                }
                if s.field() != field {
                    return Err(Error::FieldMismatch(field, s.field()));
                }
            }
        }
        if let Some(dec) = &decomposition {
            if dec.ambient() != n {
                return Err(Error::AmbientMismatch(n, dec.ambient()));
            }
            if dec.field() != field {
                return Err(Error::FieldMismatch(field, dec.field()));
            }
        }
        Ok(Self {
            n,
            field,
            d,
            tuples,
            decomposition,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tuples(&self) -> &[SubspaceTuple] {
        &self.tuples
    }

    pub fn decomposition(&self) -> Option<&Decomposition> {
        self.decomposition.as_ref()
    }

    pub fn with_decomposition(self, decomposition: Option<Decomposition>) -> Result<Self> {
        Self::new(self.n, self.field, self.d, self.tuples, decomposition)
    }

    pub(crate) fn replace_tuple(&self, index: usize, with: Vec<SubspaceTuple>) -> Self {
        let mut tuples = self.tuples.clone();
        tuples.splice(index..=index, with);
        Self {
            tuples,
            ..self.clone()
        }
    }

    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.tuples.reverse();
        out
    }

    /// True iff every subspace equals the direct sum of its components.
    pub fn is_decomposition_compatible(&self) -> Result<bool> {
        Ok(self.first_incompatible()?.is_none())
    }

    pub(crate) fn first_incompatible(&self) -> Result<Option<usize>> {
        let dec = self.decomposition.as_ref().ok_or(Error::MissingContext)?;
        for (i, t) in self.tuples.iter().enumerate() {
            for s in t.parts() {
                let mut total = 0;
                for block in dec.blocks() {
                    total += s.component(block)?.dim();
                }
                if total != s.dim() {
                    return Ok(Some(i));
                }
            }
        }
        Ok(None)
    }
}

/// Per-tuple size profile, indexed `[block][coordinate]`. Without a
/// partition/decomposition there is a single block covering the ground.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeVector(pub Vec<Vec<usize>>);

impl TypeVector {
    /// Coordinate totals across blocks.
    pub fn totals(&self) -> Vec<usize> {
        let d = self.0.first().map_or(0, Vec::len);
        (0..d).map(|l| self.0.iter().map(|b| b[l]).sum()).collect()
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .0
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(usize::to_string).collect();
                format!("({})", inner.join(","))
            })
            .collect();
        write!(f, "({})", blocks.join(","))
    }
}

/// The operations every verifier, weight and search routine needs, shared
/// by set and subspace systems.
pub trait TupleSystem {
    fn len(&self) -> usize;
    fn arity(&self) -> usize;
    /// `n`: ground size or ambient dimension.
    fn ground(&self) -> usize;
    /// `None` for set systems.
    fn scalar_field(&self) -> Option<Field>;
    /// Clause (i): pairwise disjoint parts, or dimension additivity.
    fn is_independent(&self, i: usize) -> Result<bool>;
    /// Whether part `p` of tuple `i` meets part `q` of tuple `j` nontrivially.
    fn meets(&self, i: usize, p: usize, j: usize, q: usize) -> Result<bool>;
    /// `|A_i^(ℓ)|` or `dim A_i^(ℓ)` for each coordinate.
    fn sizes(&self, i: usize) -> Vec<usize>;
    /// Block sizes `n_k` of the attached context, if any.
    fn context_sizes(&self) -> Option<Vec<usize>>;
    /// Profile split by the attached context (single block when none).
    fn profile(&self, i: usize) -> Result<TypeVector>;
    fn tuples_equal(&self, i: usize, j: usize) -> bool;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }
}

impl TupleSystem for SetSystem {
    fn len(&self) -> usize {
        self.tuples.len()
    }

    fn arity(&self) -> usize {
        self.d
    }

    fn ground(&self) -> usize {
        self.n
    }

    fn scalar_field(&self) -> Option<Field> {
        None
    }

    fn is_independent(&self, i: usize) -> Result<bool> {
        self.check_index(i)?;
        Ok(self.tuples[i].is_disjoint())
    }

    fn meets(&self, i: usize, p: usize, j: usize, q: usize) -> Result<bool> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.tuples[i].0[p] & self.tuples[j].0[q] != 0)
    }

    fn sizes(&self, i: usize) -> Vec<usize> {
        self.tuples[i].sizes()
    }

    fn context_sizes(&self) -> Option<Vec<usize>> {
        self.partition.as_ref().map(Partition::block_sizes)
    }

    fn profile(&self, i: usize) -> Result<TypeVector> {
        self.check_index(i)?;
        let t = &self.tuples[i];
        Ok(match &self.partition {
            Some(p) => TypeVector(
                p.blocks
                    .iter()
                    .map(|&b| t.0.iter().map(|m| (m & b).count_ones() as usize).collect())
                    .collect(),
            ),
            None => TypeVector(vec![t.sizes()]),
        })
    }

    fn tuples_equal(&self, i: usize, j: usize) -> bool {
        self.tuples[i] == self.tuples[j]
    }
}

impl TupleSystem for SubspaceSystem {
    fn len(&self) -> usize {
        self.tuples.len()
    }

    fn arity(&self) -> usize {
        self.d
    }

    fn ground(&self) -> usize {
        self.n
    }

    fn scalar_field(&self) -> Option<Field> {
        Some(self.field)
    }

    fn is_independent(&self, i: usize) -> Result<bool> {
        self.check_index(i)?;
        crate::subspace::is_direct_sum(self.tuples[i].parts())
    }

    fn meets(&self, i: usize, p: usize, j: usize, q: usize) -> Result<bool> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.tuples[i].0[p].meets(&self.tuples[j].0[q])
    }

    fn sizes(&self, i: usize) -> Vec<usize> {
        self.tuples[i].dims()
    }

    fn context_sizes(&self) -> Option<Vec<usize>> {
        self.decomposition.as_ref().map(Decomposition::block_dims)
    }

    fn profile(&self, i: usize) -> Result<TypeVector> {
        self.check_index(i)?;
        let t = &self.tuples[i];
        match &self.decomposition {
            Some(dec) => {
                let mut blocks = Vec::with_capacity(dec.blocks().len());
                for block in dec.blocks() {
                    blocks.push(
                        t.0.iter()
                            .map(|s| s.component(block).map(|c| c.dim()))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                Ok(TypeVector(blocks))
            }
            None => Ok(TypeVector(vec![t.dims()])),
        }
    }

    fn tuples_equal(&self, i: usize, j: usize) -> bool {
        self.tuples[i] == self.tuples[j]
    }
}

/// Either kind of system; the unit of exchange for documents and the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum System {
    Set(SetSystem),
    Subspace(SubspaceSystem),
}

impl System {
    pub fn as_tuples(&self) -> &dyn TupleSystem {
        match self {
            System::Set(s) => s,
            System::Subspace(s) => s,
        }
    }

    pub fn len(&self) -> usize {
        self.as_tuples().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arity(&self) -> usize {
        self.as_tuples().arity()
    }

    pub fn ground(&self) -> usize {
        self.as_tuples().ground()
    }

    pub fn profile(&self, i: usize) -> Result<TypeVector> {
        self.as_tuples().profile(i)
    }

    pub fn reversed(&self) -> Self {
        match self {
            System::Set(s) => System::Set(s.reversed()),
            System::Subspace(s) => System::Subspace(s.reversed()),
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, System::Subspace(s) if s.field().is_prime_field())
    }
}

impl From<SetSystem> for System {
    fn from(s: SetSystem) -> Self {
        System::Set(s)
    }
}

impl From<SubspaceSystem> for System {
    fn from(s: SubspaceSystem) -> Self {
        System::Subspace(s)
    }
}

/// Coordinate embedding: subset `S` of `[n]` maps to `span{e_p : p ∈ S}` in
/// `Q^n`, partition blocks to coordinate blocks. Order is preserved.
pub fn embed(system: &SetSystem) -> SubspaceSystem {
    let n = system.n;
    let field = Field::Rational;
    let coordinate = |mask: u64| Subspace::coordinate(n, field, elements_of(mask).into_iter().map(|p| p - 1));
    let tuples = system
        .tuples
        .iter()
        .map(|t| SubspaceTuple(t.0.iter().map(|&m| coordinate(m)).collect()))
        .collect();
    let decomposition = system.partition.as_ref().map(|p| {
        Decomposition::new(n, field, p.blocks.iter().map(|&b| coordinate(b)).collect())
            .expect("a partition embeds as a direct sum")
    });
    SubspaceSystem {
        n,
        field,
        d: system.d,
        tuples,
        decomposition,
    }
}
