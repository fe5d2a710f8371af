//! Exact subspaces of `F^n` for `F` the rationals or a prime field.
//!
//! A [`Subspace`] stores its basis in reduced row echelon form, so two values
//! are equal exactly when they span the same space.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{BigRational, Field};
use crate::error::{Error, Result};

pub type Vector = Vec<BigRational>;

/// Reduces `rows` in place to RREF over `field` and returns the pivot columns.
/// Zero rows are removed.
fn reduce(field: Field, rows: &mut Vec<Vector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let Some(found) = (top..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(top, found);
        let inv = field.inv(&rows[top][col]).expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[top].iter_mut() {
                *x = field.mul(x, &inv);
            }
        }
        let (head, tail) = rows.split_at_mut(top);
        let (pivot_row, tail) = tail.split_first_mut().expect("pivot row");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            let factor = row[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(pivot_row.iter()).skip(col) {
                *x = field.sub(x, &field.mul(&factor, p));
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    pivots
}

/// Rank of an arbitrary list of vectors.
pub fn rank(field: Field, rows: &[Vector], ncols: usize) -> usize {
    let mut rows = rows.to_vec();
    reduce(field, &mut rows, ncols).len()
}

/// Basis of `{x : M x = 0}` for `M` given by its rows.
pub fn kernel(field: Field, matrix: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut rows = matrix.to_vec();
    let pivots = reduce(field, &mut rows, ncols);
    let free = (0..ncols).filter(|c| !pivots.contains(c));
    free.map(|f| {
        let mut v = vec![BigRational::zero(); ncols];
        v[f] = BigRational::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            if !row[f].is_zero() {
                v[p] = field.sub(&BigRational::zero(), &row[f]);
            }
        }
        v
    })
    .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    field: Field,
    rows: Vec<Vector>,
}

impl Subspace {
    /// Row space of `rows`, canonicalized. Entries are first mapped into the
    /// field (a no-op over the rationals).
    pub fn canonicalize(ambient: usize, field: Field, rows: Vec<Vector>) -> Result<Self> {
        let mut mapped = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != ambient {
                return Err(Error::VectorLength {
                    len: row.len(),
                    ambient,
                });
            }
            mapped.push(
                row.iter()
                    .map(|x| field.element(x))
                    .collect::<Result<Vector>>()?,
            );
        }
        reduce(field, &mut mapped, ambient);
        Ok(Self {
            ambient,
            field,
            rows: mapped,
        })
    }

    pub fn zero(ambient: usize, field: Field) -> Self {
        Self {
            ambient,
            field,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize, field: Field) -> Self {
        Self::coordinate(ambient, field, 0..ambient)
    }

    /// `span{e_p : p in coords}` with 0-based coordinates.
    pub fn coordinate(ambient: usize, field: Field, coords: impl IntoIterator<Item = usize>) -> Self {
        let mut coords: Vec<usize> = coords.into_iter().filter(|&c| c < ambient).collect();
        coords.sort_unstable();
        coords.dedup();
        let rows = coords.into_iter().map(|c| unit(ambient, c)).collect();
        Self {
            ambient,
            field,
            rows,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        reduce(self.field, &mut rows, self.ambient);
        Ok(Self {
            rows,
            ..self.clone()
        })
    }

    /// `U ∩ W` from the left kernel of the stacked bases: every `c` with
    /// `c_U·U = c_W·W` yields the common vector `c_U·U`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient, self.field));
        }
        let a = self.dim();
        let ncols = a + other.dim();
        // Columns of [U; W]^T are the basis vectors.
        let transposed: Vec<Vector> = (0..self.ambient)
            .map(|col| {
                self.rows
                    .iter()
                    .chain(other.rows.iter())
                    .map(|row| row[col].clone())
                    .collect()
            })
            .collect();
        let field = self.field;
        let vectors = kernel(field, &transposed, ncols)
            .into_iter()
            .map(|c| {
                let mut v = vec![BigRational::zero(); self.ambient];
                for (coef, row) in c[..a].iter().zip(&self.rows) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (x, r) in v.iter_mut().zip(row) {
                        *x = field.add(x, &field.mul(coef, r));
                    }
                }
                v
            })
            .collect();
        Self::canonicalize(self.ambient, field, vectors)
    }

    /// Whether `dim(U ∩ W) > 0`, decided by rank without building the
    /// intersection.
    pub fn meets(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(false);
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(rank(self.field, &rows, self.ambient) < self.dim() + other.dim())
    }

    pub fn contains(&self, v: &[BigRational]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::VectorLength {
                len: v.len(),
                ambient: self.ambient,
            });
        }
        let field = self.field;
        let mut rest = v
            .iter()
            .map(|x| field.element(x))
            .collect::<Result<Vector>>()?;
        for row in &self.rows {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let factor = rest[pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, r) in rest.iter_mut().zip(row) {
                *x = field.sub(x, &field.mul(&factor, r));
            }
        }
        Ok(rest.iter().all(Zero::is_zero))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        for row in &other.rows {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `U ∩ V_k`, the part of `U` living in a decomposition block.
    pub fn component(&self, block: &Subspace) -> Result<Subspace> {
        self.intersection(block)
    }

    pub fn with_vector(&self, v: &[BigRational]) -> Result<Subspace> {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        Self::canonicalize(self.ambient, self.field, rows)
    }
}

fn unit(ambient: usize, coord: usize) -> Vector {
    let mut v = vec![BigRational::zero(); ambient];
    v[coord] = BigRational::one();
    v
}

/// True iff `dim(Σ parts) = Σ dim(parts)`.
pub fn is_direct_sum(parts: &[Subspace]) -> Result<bool> {
    let Some(first) = parts.first() else {
        return Ok(true);
    };
    let mut rows = Vec::new();
    for part in parts {
        first.check_compatible(part)?;
        rows.extend(part.rows.iter().cloned());
    }
    Ok(rank(first.field, &rows, first.ambient) == rows.len())
}

/// The first canonical basis row of `block` outside `inner`, or `None` when
/// `inner = block`. Fails unless `inner ⊆ block`.
pub fn extension_vector(block: &Subspace, inner: &Subspace) -> Result<Option<Vector>> {
    if !block.contains_subspace(inner)? {
        return Err(Error::NotContained);
    }
    for row in &block.rows {
        if !inner.contains(row)? {
            return Ok(Some(row.clone()));
        }
    }
    Ok(None)
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                let entries: Vec<String> = row.iter().map(|x| self.field.format_scalar(x)).collect();
                format!("({})", entries.join(","))
            })
            .collect();
        write!(f, "span{{{}}}", rows.join(", "))
    }
}

/// `V = V_1 ⊕ … ⊕ V_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    ambient: usize,
    field: Field,
    blocks: Vec<Subspace>,
}

impl Decomposition {
    pub fn new(ambient: usize, field: Field, blocks: Vec<Subspace>) -> Result<Self> {
        for block in &blocks {
            if block.ambient != ambient {
                return Err(Error::AmbientMismatch(ambient, block.ambient));
            }
            if block.field != field {
                return Err(Error::FieldMismatch(field, block.field));
            }
        }
        let total: usize = blocks.iter().map(Subspace::dim).sum();
        if total != ambient || !is_direct_sum(&blocks)? {
            return Err(Error::InvalidDecomposition(format!(
                "blocks of dimensions {:?} do not form a direct sum of the {ambient}-dimensional space",
                blocks.iter().map(Subspace::dim).collect::<Vec<_>>()
            )));
        }
        Ok(Self {
            ambient,
            field,
            blocks,
        })
    }

    /// The trivial decomposition with a single block.
    pub fn whole(ambient: usize, field: Field) -> Self {
        Self {
            ambient,
            field,
            blocks: vec![Subspace::full(ambient, field)],
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn blocks(&self) -> &[Subspace] {
        &self.blocks
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Subspace::dim).collect()
    }
}
