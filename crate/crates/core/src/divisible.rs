//! Admissible lengths of q^r-divisible codes and the reduction operator that
//! sharpens the Johnson bound.
//!
//! A q^r-divisible code of length `len` exists iff `len` is a non-negative
//! integer combination of `q^i * [r+1-i choose 1]_q` for `0 <= i <= r`.
//! Membership in that numerical semigroup is decided with a shortest-path
//! table over residues modulo the smallest generator `q^r`.

use crate::error::{Error, Result};
use crate::gf::{enumerate_subspaces, Elem, Field, Subspace};
use crate::qcalc::{q_int_u128, q_pow_u128};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

/// Residue tables larger than this are refused.
const MAX_RESIDUES: u128 = 1 << 24;

/// The generators `q^i * [r+1-i]_q`, i = 0..=r.
pub fn summands(q: u32, r: u32) -> Result<Vec<u128>> {
    (0..=r)
        .map(|i| {
            let a = q_pow_u128(q, i)?;
            let b = q_int_u128(r + 1 - i, q)?;
            a.checked_mul(b).ok_or(Error::Overflow("divisible summand"))
        })
        .collect()
}

/// Smallest representable length in every residue class modulo `q^r`.
#[derive(Debug)]
struct ResidueTable {
    modulus: u128,
    least: Vec<u128>,
}

impl ResidueTable {
    fn build(q: u32, r: u32) -> Result<ResidueTable> {
        let gens = summands(q, r)?;
        let modulus = q_pow_u128(q, r)?;
        if modulus > MAX_RESIDUES {
            return Err(Error::SizeCap { what: "divisibility residue table", count: modulus, cap: MAX_RESIDUES });
        }
        let m = modulus as usize;
        let mut least = vec![u128::MAX; m];
        least[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u128, 0usize)));
        while let Some(Reverse((d, res))) = heap.pop() {
            if d > least[res] {
                continue;
            }
            for &g in &gens {
                let nd = d + g;
                let nr = ((res as u128 + g) % modulus) as usize;
                if nd < least[nr] {
                    least[nr] = nd;
                    heap.push(Reverse((nd, nr)));
                }
            }
        }
        Ok(ResidueTable { modulus, least })
    }

    fn contains(&self, len: u128) -> bool {
        len >= self.least[(len % self.modulus) as usize]
    }
}

fn table(q: u32, r: u32) -> Result<Arc<ResidueTable>> {
    static TABLES: OnceLock<RwLock<HashMap<(u32, u32), Arc<ResidueTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = tables.read().unwrap().get(&(q, r)) {
        return Ok(t.clone());
    }
    let built = Arc::new(ResidueTable::build(q, r)?);
    Ok(tables.write().unwrap().entry((q, r)).or_insert(built).clone())
}

/// Whether a q^r-divisible code of length `len` exists. Length 0 always does.
pub fn divisible_length_feasible(len: u128, q: u32, r: u32) -> Result<bool> {
    Ok(table(q, r)?.contains(len))
}

/// Largest `b` such that `a - b * [k]_q` is a non-negative admissible length
/// of a q^(k-1)-divisible code, or `None` when the downward scan of at most
/// `10 * [k]_q` steps finds no such `b`.
pub fn reduce_quotient(a: u128, k: u32, q: u32) -> Result<Option<u128>> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("reduction needs k >= 2, got {k}")));
    }
    let step = q_int_u128(k, q)?;
    let t = table(q, k - 1)?;
    let top = a / step;
    let max_steps = step.saturating_mul(10);
    let mut b = top;
    for _ in 0..=max_steps {
        if t.contains(a - b * step) {
            return Ok(Some(b));
        }
        if b == 0 {
            break;
        }
        b -= 1;
    }
    Ok(None)
}

/// A multiset of points (1-subspaces) of GF(q)^n, stored as a weight per
/// point in Grassmannian enumeration order.
#[derive(Debug, Clone)]
pub struct PointMultiset {
    field: &'static Field,
    n: usize,
    points: Vec<Subspace>,
    weights: Vec<u64>,
}

impl PointMultiset {
    /// Points covered by the blocks, each counted once per containing block.
    pub fn from_blocks(blocks: &[Subspace]) -> Result<PointMultiset> {
        let first = blocks.first().ok_or(Error::EmptyCode)?;
        let field = first.field();
        let n = first.ambient();
        let points: Vec<Subspace> = enumerate_subspaces(field, n, 1)?.collect();
        let index: HashMap<&Subspace, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut weights = vec![0u64; points.len()];
        for b in blocks {
            if b.ambient() != n {
                return Err(Error::AmbientMismatch(n, b.ambient()));
            }
            for p in b.subspaces(1)? {
                weights[index[&p]] += 1;
            }
        }
        Ok(PointMultiset { field, n, points, weights })
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Subspace] {
        &self.points
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, point: &Subspace) -> u64 {
        self.points.iter().position(|p| p == point).map_or(0, |i| self.weights[i])
    }

    pub fn cardinality(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// The lambda-complement: weight `lambda - w(P)` on every point.
    pub fn complement(&self, lambda: u64) -> Result<PointMultiset> {
        if self.max_weight() > lambda {
            return Err(Error::InvalidParams(format!(
                "point multiplicity {} exceeds lambda = {lambda}",
                self.max_weight()
            )));
        }
        Ok(PointMultiset { weights: self.weights.iter().map(|w| lambda - w).collect(), ..self.clone() })
    }

    /// `|P ∩ H|` for the hyperplane `H = { x : <normal, x> = 0 }`.
    pub fn hyperplane_count(&self, normal: &[Elem]) -> u64 {
        let f = self.field;
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(p, _)| {
                let dot = (0..self.n).fold(0, |acc, c| f.add(acc, f.mul(normal[c], p.basis().get(0, c))));
                dot == 0
            })
            .map(|(_, &w)| w)
            .sum()
    }

    /// Checks `|P| ≡ |P ∩ H| (mod modulus)` for every hyperplane `H`.
    pub fn hyperplane_congruence(&self, modulus: u64) -> bool {
        let total = self.cardinality();
        self.points.iter().all(|h| {
            let normal = h.basis().row(0);
            (total - self.hyperplane_count(&normal)) % modulus == 0
        })
    }
}
