//! Gabidulin MRD codes, their translate families, rank distance and lifting.

use crate::error::{Error, Result};
use crate::gf::poly::ExtField;
use crate::gf::{Elem, Field, Matrix, Subspace};
use crate::qcalc::q_pow_u128;

/// An affine F_q-linear set of `rows x cols` matrices: `offset + span(generators)`.
///
/// Gabidulin codes also carry the extra generators of their distance
/// `delta - 1` supercode, which index the cosets used by translate families.
#[derive(Debug, Clone)]
pub struct RankCode {
    field: &'static Field,
    rows: usize,
    cols: usize,
    delta: usize,
    generators: Vec<Matrix>,
    offset: Matrix,
    coset_generators: Vec<Matrix>,
}

/// `sum d_l * gens[l]` where d_l are the base-q digits of `index`, least
/// significant first.
fn combine(field: &'static Field, rows: usize, cols: usize, gens: &[Matrix], mut index: u128) -> Matrix {
    let q = field.order() as u128;
    let mut acc = Matrix::zeros(field, rows, cols);
    for g in gens {
        let d = (index % q) as Elem;
        index /= q;
        if d != 0 {
            acc = acc.add(&g.scale(d)).expect("generator shapes agree");
        }
    }
    acc
}

/// Matrix with row j equal to the coordinates of `f(g_j)`, g_j = x^j.
fn evaluation_matrix(ext: &ExtField, rows: usize, f: impl Fn(&[Elem]) -> Vec<Elem>) -> Matrix {
    let evals: Vec<Vec<Elem>> = (0..rows).map(|j| f(&ext.basis(j))).collect();
    Matrix::from_fn(ext.base(), rows, ext.degree(), |r, c| evals[r][c])
}

/// Linear Gabidulin code of `k x m` matrices over GF(q) with minimum rank
/// distance `delta`: evaluations of linearized polynomials of q-degree at
/// most `min(k,m) - delta` at `min(k,m)` independent points of GF(q^max(k,m)).
pub fn gabidulin(k: usize, m: usize, delta: usize, q: u32) -> Result<RankCode> {
    let field = Field::get(q)?;
    let (a, b) = (k.min(m), k.max(m));
    if delta == 0 || delta > a {
        return Err(Error::InvalidParams(format!("need 1 <= delta <= min(k,m) = {a}, got {delta}")));
    }
    let ext = ExtField::new(field, b);
    // f(x) = beta * x^(q^i)
    let monomial = |i: usize, l: usize| {
        let beta = ext.basis(l);
        evaluation_matrix(&ext, a, |g| ext.mul(&beta, &ext.frobenius(g, i)))
    };
    let top = a - delta;
    let mut generators = Vec::new();
    for i in 0..=top {
        for l in 0..b {
            generators.push(monomial(i, l));
        }
    }
    let coset_generators = if delta >= 2 { (0..b).map(|l| monomial(top + 1, l)).collect() } else { Vec::new() };
    let orient = |v: Vec<Matrix>| -> Vec<Matrix> {
        if k > m {
            v.iter().map(Matrix::transpose).collect()
        } else {
            v
        }
    };
    Ok(RankCode {
        field,
        rows: k,
        cols: m,
        delta,
        generators: orient(generators),
        offset: Matrix::zeros(field, k, m),
        coset_generators: orient(coset_generators),
    })
}

impl RankCode {
    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Designed minimum rank distance.
    pub fn min_distance(&self) -> usize {
        self.delta
    }

    /// Dimension over GF(q).
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn is_linear(&self) -> bool {
        self.offset.is_zero()
    }

    pub fn offset(&self) -> &Matrix {
        &self.offset
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn size(&self) -> Result<u128> {
        q_pow_u128(self.field.order(), self.dimension() as u32)
    }

    /// Codeword number `index` for `0 <= index < size`.
    pub fn codeword(&self, index: u128) -> Matrix {
        let lin = combine(self.field, self.rows, self.cols, &self.generators, index);
        lin.add(&self.offset).expect("offset shape agrees")
    }

    pub fn codewords(&self) -> Result<impl Iterator<Item = Matrix> + '_> {
        let size = self.size()?;
        Ok((0..size).map(move |i| self.codeword(i)))
    }

    /// Number of cosets of this code inside its distance `delta - 1` supercode.
    pub fn coset_count(&self) -> Result<u128> {
        q_pow_u128(self.field.order(), self.coset_generators.len() as u32)
    }

    pub fn coset_representative(&self, index: u128) -> Matrix {
        combine(self.field, self.rows, self.cols, &self.coset_generators, index)
    }

    /// `self + offset`.
    pub fn translate(&self, offset: &Matrix) -> Result<RankCode> {
        let mut out = self.clone();
        out.offset = self.offset.add(offset)?;
        Ok(out)
    }
}

/// `alpha - 1` pairwise disjoint translates of a linear code. Any two
/// codewords of the union differ by a nonzero supercode word, so the union
/// has rank distance at least `delta - 1`.
#[derive(Debug, Clone)]
pub struct TranslateFamily {
    base: RankCode,
    members: Vec<RankCode>,
    union_distance: usize,
}

pub fn translate_family(base: &RankCode, alpha: u64) -> Result<TranslateFamily> {
    if !base.is_linear() {
        return Err(Error::InvalidParams("translate family needs a linear base code".into()));
    }
    if base.delta < 2 {
        return Err(Error::NotApplicable("distance 1 codes are the full space and have no proper translates".into()));
    }
    let count = alpha.checked_sub(1).filter(|&c| c >= 1).ok_or_else(|| {
        Error::InvalidParams(format!("alpha must be at least 2, got {alpha}"))
    })? as u128;
    let cosets = base.coset_count()?;
    if count > cosets {
        return Err(Error::InvalidParams(format!(
            "alpha - 1 = {count} exceeds the {cosets} available translates"
        )));
    }
    let members = (0..count)
        .map(|i| base.translate(&base.coset_representative(i)))
        .collect::<Result<Vec<_>>>()?;
    let union_distance = if count == 1 { base.delta } else { base.delta - 1 };
    Ok(TranslateFamily { base: base.clone(), members, union_distance })
}

impl TranslateFamily {
    pub fn base(&self) -> &RankCode {
        &self.base
    }

    pub fn members(&self) -> &[RankCode] {
        &self.members
    }

    /// Guaranteed minimum rank distance of the union: `delta` for a single
    /// translate, `delta - 1` otherwise.
    pub fn union_distance(&self) -> usize {
        self.union_distance
    }

    pub fn size(&self) -> Result<u128> {
        Ok(self.base.size()? * self.members.len() as u128)
    }

    /// Codewords of all members, member by member.
    pub fn codewords(&self) -> Result<Vec<Matrix>> {
        let mut out = Vec::new();
        for m in &self.members {
            out.extend(m.codewords()?);
        }
        Ok(out)
    }
}

/// `rank(A - B)`.
pub fn rank_distance(a: &Matrix, b: &Matrix) -> Result<usize> {
    Ok(a.sub(b)?.rank())
}

/// Row space of `[I_k | A]` in GF(q)^(k+m).
pub fn lift(a: &Matrix) -> Subspace {
    let id = Matrix::identity(a.field(), a.rows());
    let m = id.hstack(a).expect("row counts agree");
    Subspace::from_rref_unchecked(m)
}
