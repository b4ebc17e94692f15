use crate::error::{Error, Result};
use crate::gf::{Field, Matrix, Subspace};
use std::collections::HashMap;

/// A set of distinct k-subspaces (blocks) of GF(q)^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingCode {
    field: &'static Field,
    n: usize,
    k: usize,
    blocks: Vec<Subspace>,
}

impl PackingCode {
    /// Checks dimensions and distinctness; the position of the first repeated
    /// block is reported.
    pub fn new(field: &'static Field, n: usize, k: usize, blocks: Vec<Subspace>) -> Result<PackingCode> {
        if k > n {
            return Err(Error::InvalidParams(format!("block dimension {k} exceeds ambient {n}")));
        }
        let mut seen = HashMap::with_capacity(blocks.len());
        for (i, b) in blocks.iter().enumerate() {
            if b.field().order() != field.order() {
                return Err(Error::FieldMismatch(b.field().order(), field.order()));
            }
            if b.ambient() != n {
                return Err(Error::AmbientMismatch(b.ambient(), n));
            }
            if b.dim() != k {
                return Err(Error::InvalidParams(format!("block {i} has dimension {} instead of {k}", b.dim())));
            }
            if seen.insert(b, i).is_some() {
                return Err(Error::DuplicateBlock(i));
            }
        }
        Ok(PackingCode { field, n, k, blocks })
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn block_dim(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Subspace] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn into_blocks(self) -> Vec<Subspace> {
        self.blocks
    }

    /// Orthogonal complements of all blocks. Turns a covering code for
    /// B_q(n,k,delta;alpha) into a packing for A_q(n,n-k,n-k-delta+1;alpha-1)
    /// and back.
    pub fn dual(&self) -> PackingCode {
        let blocks = self.blocks.iter().map(Subspace::dual).collect();
        PackingCode { field: self.field, n: self.n, k: self.n - self.k, blocks }
    }

    /// Places every block in the last coordinates of GF(q)^(n + zeros).
    pub fn pad_front(&self, zeros: usize) -> PackingCode {
        let blocks = self.blocks.iter().map(|b| pad_front(b, zeros)).collect();
        PackingCode { field: self.field, n: self.n + zeros, k: self.k, blocks }
    }

    /// Union of two codes over the same ambient space and block dimension.
    pub fn union(&self, other: &PackingCode) -> Result<PackingCode> {
        if other.n != self.n {
            return Err(Error::AmbientMismatch(other.n, self.n));
        }
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        PackingCode::new(self.field, self.n, self.k, blocks)
    }
}

pub(crate) fn pad_front(b: &Subspace, zeros: usize) -> Subspace {
    let basis = b.basis();
    let m = Matrix::zeros(b.field(), basis.rows(), zeros).hstack(basis).expect("row counts agree");
    Subspace::from_basis(&m).expect("padding keeps full rank")
}
