use super::{Elem, Field, Matrix};
use crate::error::{Error, Result};
use std::fmt;

/// A subspace of GF(q)^n, stored as its unique reduced row-echelon basis.
/// Two subspaces are equal exactly when their bases are identical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.dim(), self.ambient(), self.basis)
    }
}

impl Subspace {
    /// Row space of an arbitrary matrix.
    pub fn from_matrix(m: &Matrix) -> Subspace {
        let (r, rank) = m.rref();
        Subspace { basis: r.top_rows(rank) }
    }

    /// Row space of `m`, which must have full row rank.
    pub fn from_basis(m: &Matrix) -> Result<Subspace> {
        let s = Subspace::from_matrix(m);
        if s.dim() != m.rows() {
            return Err(Error::InvalidParams(format!(
                "basis has {} rows but rank {}",
                m.rows(),
                s.dim()
            )));
        }
        Ok(s)
    }

    /// Wraps a matrix already known to be a full-rank RREF.
    pub(crate) fn from_rref_unchecked(basis: Matrix) -> Subspace {
        debug_assert!(basis.is_rref() && basis.nonzero_prefix() == basis.rows());
        Subspace { basis }
    }

    pub fn zero(field: &'static Field, n: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(field, 0, n) }
    }

    pub fn full(field: &'static Field, n: usize) -> Subspace {
        Subspace { basis: Matrix::identity(field, n) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> &'static Field {
        self.basis.field()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.pivots()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch(self.ambient(), other.ambient()));
        }
        if self.field().order() != other.field().order() {
            return Err(Error::FieldMismatch(self.field().order(), other.field().order()));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_matrix(&Matrix::vstack(&[&self.basis, &other.basis])?))
    }

    /// Orthogonal complement with respect to the standard dot product.
    pub fn dual(&self) -> Subspace {
        let f = self.field();
        let n = self.ambient();
        let pivots = self.pivots();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut m = Matrix::zeros(f, free.len(), n);
        for (row, &j) in free.iter().enumerate() {
            m.set(row, j, 1);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(row, p, f.neg(self.basis.get(i, j)));
            }
        }
        Subspace::from_matrix(&m)
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.dim() == self.dim())
    }

    pub fn contains_vector(&self, v: &[Elem]) -> Result<bool> {
        let row = Matrix::from_rows(self.field(), self.ambient(), &[v.to_vec()])?;
        Ok(Matrix::vstack(&[&self.basis, &row])?.rank() == self.dim())
    }

    /// All `t`-dimensional subspaces of `self`, in the order induced by the
    /// Grassmannian enumeration of coefficient matrices.
    pub fn subspaces(&self, t: usize) -> Result<impl Iterator<Item = Subspace> + '_> {
        let coords = enumerate_subspaces(self.field(), self.dim(), t)?;
        Ok(coords.map(move |c| {
            let m = c.basis.mul(&self.basis).expect("shapes agree");
            Subspace::from_matrix(&m)
        }))
    }

    /// Text encoding: one line per basis row, one base-q digit per coordinate.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.dim() {
            for c in 0..self.ambient() {
                out.push(digit_char(self.basis.get(r, c)));
            }
            out.push('\n');
        }
        out
    }

    /// Parses lines produced by [`Subspace::to_text`]. Any full-rank basis
    /// is accepted and canonicalized.
    pub fn parse_rows(field: &'static Field, n: usize, lines: &[&str]) -> Result<Subspace> {
        let mut rows = Vec::with_capacity(lines.len());
        for (i, line) in lines.iter().enumerate() {
            let digits: Vec<char> = line.trim().chars().collect();
            if digits.len() != n {
                return Err(Error::Parse { line: i + 1, msg: format!("expected {n} digits, found {}", digits.len()) });
            }
            let row = digits
                .iter()
                .map(|&ch| match ch.to_digit(36) {
                    Some(d) if d < field.order() => Ok(d as Elem),
                    _ => Err(Error::Parse { line: i + 1, msg: format!("'{ch}' is not a digit in base {}", field.order()) }),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let m = Matrix::from_rows(field, n, &rows)?;
        Subspace::from_basis(&m)
    }
}

fn digit_char(d: Elem) -> char {
    std::char::from_digit(d as u32, 36).expect("field elements below 36 have a digit")
}

/// Dimension of `U_1 + ... + U_r`: the rank of the stacked bases.
pub fn span_dim(subspaces: &[&Subspace]) -> Result<usize> {
    let Some(first) = subspaces.first() else {
        return Ok(0);
    };
    for s in subspaces {
        first.check_ambient(s)?;
    }
    let parts: Vec<&Matrix> = subspaces.iter().map(|s| &s.basis).collect();
    Ok(Matrix::vstack(&parts)?.rank())
}

/// `d_S(U, V) = 2 dim(U + V) - dim U - dim V`.
pub fn subspace_distance(u: &Subspace, v: &Subspace) -> Result<usize> {
    let s = span_dim(&[u, v])?;
    Ok(2 * s - u.dim() - v.dim())
}

/// All `k`-subspaces of GF(q)^n in canonical RREF.
///
/// Pivot sets are visited in colexicographic order; within a pivot set the
/// free entries (row-major) run as a base-q counter whose first entry is the
/// most significant digit.
pub fn enumerate_subspaces(field: &'static Field, n: usize, k: usize) -> Result<Grassmannian> {
    if k > n {
        return Err(Error::InvalidParams(format!("k = {k} exceeds n = {n}")));
    }
    let mut g = Grassmannian { field, n, k, pivots: (0..k).collect(), free: Vec::new(), digits: Vec::new(), done: false };
    g.reset_free();
    Ok(g)
}

#[derive(Debug, Clone)]
pub struct Grassmannian {
    field: &'static Field,
    n: usize,
    k: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<Elem>,
    done: bool,
}

impl Grassmannian {
    fn reset_free(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((i, c));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn next_pivots(&mut self) -> bool {
        let k = self.k;
        for i in 0..k {
            let limit = if i + 1 < k { self.pivots[i + 1] } else { self.n };
            if self.pivots[i] + 1 < limit {
                self.pivots[i] += 1;
                for j in 0..i {
                    self.pivots[j] = j;
                }
                return true;
            }
        }
        false
    }

    fn advance(&mut self) {
        let q = self.field.order();
        for d in self.digits.iter_mut().rev() {
            if (*d as u32) + 1 < q {
                *d += 1;
                return;
            }
            *d = 0;
        }
        if self.next_pivots() {
            self.reset_free();
        } else {
            self.done = true;
        }
    }
}

impl Iterator for Grassmannian {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let mut m = Matrix::zeros(self.field, self.k, self.n);
        for (i, &p) in self.pivots.iter().enumerate() {
            m.set(i, p, 1);
        }
        for (&(r, c), &d) in self.free.iter().zip(&self.digits) {
            m.set(r, c, d);
        }
        self.advance();
        Some(Subspace::from_rref_unchecked(m))
    }
}
