use super::{Elem, Field};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Row storage. GF(2) rows are bit-packed into 64-bit words; every other
/// field keeps one byte per entry. Bits beyond `cols` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Storage {
    Packed { words: usize, bits: Vec<u64> },
    Dense(Vec<Elem>),
}

/// A dense `rows x cols` matrix over a finite field.
#[derive(Clone)]
pub struct Matrix {
    field: &'static Field,
    rows: usize,
    cols: usize,
    data: Storage,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl PartialOrd for Matrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Matrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.order(), self.rows, self.cols)
            .cmp(&(other.field.order(), other.rows, other.cols))
            .then_with(|| self.data.cmp(&other.data))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<GF({})>[", self.field.order())?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: &'static Field, rows: usize, cols: usize) -> Matrix {
        let data = if field.is_binary() {
            let words = cols.div_ceil(64);
            Storage::Packed { words, bits: vec![0; rows * words] }
        } else {
            Storage::Dense(vec![0; rows * cols])
        };
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: &'static Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from explicit rows; every row must have `cols` entries.
    pub fn from_rows(field: &'static Field, cols: usize, rows: &[Vec<Elem>]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(rows.len(), cols, 1, row.len()));
            }
            for (c, &v) in row.iter().enumerate() {
                if v as u32 >= field.order() {
                    return Err(Error::InvalidParams(format!("entry {v} is not an element of GF({})", field.order())));
                }
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    pub fn from_fn(field: &'static Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> &'static Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        debug_assert!(r < self.rows && c < self.cols);
        match &self.data {
            Storage::Packed { words, bits } => ((bits[r * words + c / 64] >> (c % 64)) & 1) as Elem,
            Storage::Dense(v) => v[r * self.cols + c],
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: Elem) {
        debug_assert!(r < self.rows && c < self.cols);
        debug_assert!((value as u32) < self.field.order());
        match &mut self.data {
            Storage::Packed { words, bits } => {
                let w = &mut bits[r * *words + c / 64];
                let mask = 1u64 << (c % 64);
                if value & 1 == 1 {
                    *w |= mask;
                } else {
                    *w &= !mask;
                }
            }
            Storage::Dense(v) => v[r * self.cols + c] = value,
        }
    }

    pub fn row(&self, r: usize) -> Vec<Elem> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Storage::Packed { bits, .. } => bits.iter().all(|&w| w == 0),
            Storage::Dense(v) => v.iter().all(|&x| x == 0),
        }
    }

    fn is_zero_row(&self, r: usize) -> bool {
        match &self.data {
            Storage::Packed { words, bits } => bits[r * words..(r + 1) * words].iter().all(|&w| w == 0),
            Storage::Dense(v) => v[r * self.cols..(r + 1) * self.cols].iter().all(|&x| x == 0),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        match &mut self.data {
            Storage::Packed { words, bits } => {
                for w in 0..*words {
                    bits.swap(a * *words + w, b * *words + w);
                }
            }
            Storage::Dense(v) => {
                for c in 0..self.cols {
                    v.swap(a * self.cols + c, b * self.cols + c);
                }
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: Elem) {
        if s == 1 {
            return;
        }
        let f = self.field;
        if let Storage::Dense(v) = &mut self.data {
            for x in &mut v[r * self.cols..(r + 1) * self.cols] {
                *x = f.mul(*x, s);
            }
        }
    }

    /// row[dst] += s * row[src]
    fn add_scaled_row(&mut self, dst: usize, src: usize, s: Elem) {
        if s == 0 {
            return;
        }
        let f = self.field;
        match &mut self.data {
            Storage::Packed { words, bits } => {
                for w in 0..*words {
                    let x = bits[src * *words + w];
                    bits[dst * *words + w] ^= x;
                }
            }
            Storage::Dense(v) => {
                let cols = self.cols;
                for c in 0..cols {
                    let x = v[src * cols + c];
                    if x != 0 {
                        v[dst * cols + c] = f.add(v[dst * cols + c], f.mul(s, x));
                    }
                }
            }
        }
    }

    /// Reduced row-echelon form and rank. Zero rows are moved to the bottom;
    /// the shape is unchanged.
    pub fn rref(&self) -> (Matrix, usize) {
        let mut m = self.clone();
        let rank = m.rref_in_place();
        (m, rank)
    }

    fn rref_in_place(&mut self) -> usize {
        let f = self.field;
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(r) = (pivot_row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(r, pivot_row);
            let lead = self.get(pivot_row, col);
            self.scale_row(pivot_row, f.inv(lead));
            for other in 0..self.rows {
                if other != pivot_row {
                    let c = self.get(other, col);
                    if c != 0 {
                        self.add_scaled_row(other, pivot_row, f.neg(c));
                    }
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Pivot columns, assuming `self` is in RREF.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.rows)
            .filter_map(|r| (0..self.cols).find(|&c| self.get(r, c) != 0))
            .collect()
    }

    pub fn is_rref(&self) -> bool {
        let mut last: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..self.rows {
            match (0..self.cols).find(|&c| self.get(r, c) != 0) {
                None => seen_zero = true,
                Some(p) => {
                    if seen_zero || last.is_some_and(|l| p <= l) || self.get(r, p) != 1 {
                        return false;
                    }
                    if (0..self.rows).any(|o| o != r && self.get(o, p) != 0) {
                        return false;
                    }
                    last = Some(p);
                }
            }
        }
        true
    }

    /// First `n` rows.
    pub fn top_rows(&self, n: usize) -> Matrix {
        assert!(n <= self.rows);
        let mut out = Matrix::zeros(self.field, n, self.cols);
        match (&mut out.data, &self.data) {
            (Storage::Packed { words, bits }, Storage::Packed { bits: src, .. }) => {
                bits.copy_from_slice(&src[..n * *words]);
            }
            (Storage::Dense(dst), Storage::Dense(src)) => dst.copy_from_slice(&src[..n * self.cols]),
            _ => unreachable!(),
        }
        out
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field.order() != other.field.order() {
            return Err(Error::FieldMismatch(self.field.order(), other.field.order()));
        }
        Ok(())
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix> {
        let first = parts.first().ok_or_else(|| Error::InvalidParams("vstack of nothing".into()))?;
        let cols = first.cols;
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(first.field, rows, cols);
        let mut at = 0;
        for m in parts {
            first.check_field(m)?;
            if m.cols != cols {
                return Err(Error::ShapeMismatch(first.rows, cols, m.rows, m.cols));
            }
            match (&mut out.data, &m.data) {
                (Storage::Packed { words, bits }, Storage::Packed { bits: src, .. }) => {
                    bits[at * *words..(at + m.rows) * *words].copy_from_slice(src);
                }
                (Storage::Dense(dst), Storage::Dense(src)) => {
                    dst[at * cols..(at + m.rows) * cols].copy_from_slice(src);
                }
                _ => unreachable!(),
            }
            at += m.rows;
        }
        Ok(out)
    }

    /// Side-by-side concatenation `[self | right]`.
    pub fn hstack(&self, right: &Matrix) -> Result<Matrix> {
        self.check_field(right)?;
        if self.rows != right.rows {
            return Err(Error::ShapeMismatch(self.rows, self.cols, right.rows, right.cols));
        }
        Ok(Matrix::from_fn(self.field, self.rows, self.cols + right.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                right.get(r, c - self.cols)
            }
        }))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let mut out = self.clone();
        match (&mut out.data, &other.data) {
            (Storage::Packed { bits, .. }, Storage::Packed { bits: src, .. }) => {
                bits.iter_mut().zip(src).for_each(|(a, b)| *a ^= b);
            }
            (Storage::Dense(dst), Storage::Dense(src)) => {
                dst.iter_mut().zip(src).for_each(|(a, &b)| *a = self.field.add(*a, b));
            }
            _ => unreachable!(),
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, s: Elem) -> Matrix {
        let f = self.field;
        Matrix::from_fn(f, self.rows, self.cols, |r, c| f.mul(s, self.get(r, c)))
    }

    pub fn mul(&self, right: &Matrix) -> Result<Matrix> {
        self.check_field(right)?;
        if self.cols != right.rows {
            return Err(Error::ShapeMismatch(self.rows, self.cols, right.rows, right.cols));
        }
        let f = self.field;
        Ok(Matrix::from_fn(f, self.rows, right.cols, |r, c| {
            (0..self.cols).fold(0, |acc, i| f.add(acc, f.mul(self.get(r, i), right.get(i, c))))
        }))
    }

    /// Number of leading rows that are nonzero, used after `rref`.
    pub(crate) fn nonzero_prefix(&self) -> usize {
        (0..self.rows).take_while(|&r| !self.is_zero_row(r)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u32) -> &'static Field {
        Field::get(q).unwrap()
    }

    #[test]
    fn identity_is_already_reduced() {
        for q in [2, 3, 4] {
            let id = Matrix::identity(gf(q), 4);
            let (r, rank) = id.rref();
            assert_eq!(r, id);
            assert_eq!(rank, 4);
        }
    }

    #[test]
    fn duplicate_rows_collapse() {
        let m = Matrix::from_rows(gf(2), 2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let (r, rank) = m.rref();
        assert_eq!(rank, 1);
        assert_eq!(r.to_rows(), vec![vec![1, 1], vec![0, 0]]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = Matrix::zeros(gf(3), 3, 5);
        assert_eq!(m.rref(), (m.clone(), 0));
    }

    #[test]
    fn packed_rows_wider_than_a_word() {
        let f = gf(2);
        let mut m = Matrix::zeros(f, 3, 130);
        m.set(0, 129, 1);
        m.set(1, 129, 1);
        m.set(1, 64, 1);
        m.set(2, 0, 1);
        let (r, rank) = m.rref();
        assert_eq!(rank, 3);
        assert!(r.is_rref());
        assert_eq!(r.pivots(), vec![0, 64, 129]);
    }

    #[test]
    fn shape_errors() {
        let a = Matrix::zeros(gf(2), 2, 3);
        let b = Matrix::zeros(gf(2), 3, 2);
        assert!(a.sub(&b).is_err());
        assert!(Matrix::vstack(&[&a, &b]).is_err());
        let c = Matrix::zeros(gf(3), 2, 3);
        assert!(matches!(a.add(&c), Err(Error::FieldMismatch(2, 3))));
    }

    fn arb_matrix(q: u32, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(0..q as u8, rows * cols)
            .prop_map(move |v| Matrix::from_fn(gf(q), rows, cols, |r, c| v[r * cols + c]))
    }

    /// Row-space membership oracle: v lies in the row space of `m` iff
    /// some coefficient vector reproduces it (brute force over q^rows).
    fn in_row_space(m: &Matrix, v: &[Elem]) -> bool {
        let f = m.field();
        let q = f.order() as usize;
        let rows = m.rows();
        (0..q.pow(rows as u32)).any(|idx| {
            let coeffs: Vec<Elem> = (0..rows).map(|i| ((idx / q.pow(i as u32)) % q) as Elem).collect();
            (0..m.cols()).all(|c| {
                let s = (0..rows).fold(0, |acc, r| f.add(acc, f.mul(coeffs[r], m.get(r, c))));
                s == v[c]
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent_and_preserves_row_space(m in arb_matrix(3, 3, 5)) {
            let (r, rank) = m.rref();
            prop_assert!(r.is_rref());
            prop_assert_eq!(r.rref(), (r.clone(), rank));
            prop_assert_eq!(r.nonzero_prefix(), rank);
            for row in 0..m.rows() {
                prop_assert!(in_row_space(&r, &m.row(row)));
            }
            for row in 0..rank {
                prop_assert!(in_row_space(&m, &r.row(row)));
            }
        }

        #[test]
        fn packed_and_generic_arithmetic_agree(m in arb_matrix(2, 4, 7)) {
            // the same matrix over GF(4) restricted to {0,1} reduces identically
            let wide = Matrix::from_fn(gf(4), 4, 7, |r, c| m.get(r, c));
            let (a, ra) = m.rref();
            let (b, rb) = wide.rref();
            prop_assert_eq!(ra, rb);
            prop_assert_eq!(a.to_rows(), b.to_rows());
        }

        #[test]
        fn transpose_preserves_rank(m in arb_matrix(4, 3, 5)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
