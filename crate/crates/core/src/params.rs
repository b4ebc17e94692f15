use crate::error::{Error, Result};
use crate::gf::Field;
use crate::qcalc::gaussian_binomial_u128;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Parameters `(q, n, k, t, lambda)` of a subspace packing: k-subspaces of
/// GF(q)^n such that every t-subspace lies in at most `lambda` of them.
///
/// `t = 0` is accepted; it is the base case of the Johnson recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PackingParams {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub t: u32,
    pub lambda: u64,
}

impl PackingParams {
    pub fn new(q: u32, n: u32, k: u32, t: u32, lambda: u64) -> Result<PackingParams> {
        Field::get(q)?;
        if !(t <= k && k <= n) {
            return Err(Error::InvalidParams(format!("need t <= k <= n, got n={n} k={k} t={t}")));
        }
        if lambda == 0 {
            return Err(Error::InvalidParams("lambda must be at least 1".into()));
        }
        Ok(PackingParams { q, n, k, t, lambda })
    }

    pub fn field(&self) -> &'static Field {
        Field::get(self.q).expect("validated on construction")
    }

    /// Number of candidate blocks, `[n choose k]_q`.
    pub fn block_count(&self) -> Result<u128> {
        gaussian_binomial_u128(self.n, self.k, self.q)
    }

    /// `[n-t choose k-t]_q`: how many blocks contain a fixed t-subspace.
    pub fn blocks_through_t_subspace(&self) -> Result<u128> {
        gaussian_binomial_u128(self.n - self.t, self.k - self.t, self.q)
    }

    /// True when `lambda < [n-t choose k-t]_q`, i.e. the coverage constraint
    /// can actually bind. Otherwise every block may be taken.
    pub fn is_nontrivial(&self) -> Result<bool> {
        Ok((self.lambda as u128) < self.blocks_through_t_subspace()?)
    }

    pub fn with(&self, n: u32, k: u32, t: u32) -> PackingParams {
        PackingParams { n, k, t, ..*self }
    }
}

impl fmt::Display for PackingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}({},{},{};{})", self.q, self.n, self.k, self.t, self.lambda)
    }
}

/// Parameters `(q, n, k, delta, alpha)` of a covering Grassmannian code:
/// k-subspaces of GF(q)^n such that any `alpha` of them span at least
/// `k + delta` dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoveringParams {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub delta: u32,
    pub alpha: u64,
}

impl CoveringParams {
    pub fn new(q: u32, n: u32, k: u32, delta: u32, alpha: u64) -> Result<CoveringParams> {
        Field::get(q)?;
        if k > n {
            return Err(Error::InvalidParams(format!("need k <= n, got n={n} k={k}")));
        }
        if delta == 0 {
            return Err(Error::InvalidParams("delta must be at least 1".into()));
        }
        if alpha < 2 {
            return Err(Error::InvalidParams("alpha must be at least 2".into()));
        }
        Ok(CoveringParams { q, n, k, delta, alpha })
    }

    pub fn field(&self) -> &'static Field {
        Field::get(self.q).expect("validated on construction")
    }

    pub fn with_n(&self, n: u32) -> CoveringParams {
        CoveringParams { n, ..*self }
    }
}

impl fmt::Display for CoveringParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{}({},{},{};{})", self.q, self.n, self.k, self.delta, self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PackingParams::new(2, 6, 4, 3, 2).is_ok());
        assert!(PackingParams::new(2, 6, 4, 5, 2).is_err());
        assert!(PackingParams::new(2, 3, 4, 1, 2).is_err());
        assert!(PackingParams::new(6, 6, 4, 3, 2).is_err());
        assert!(PackingParams::new(2, 6, 4, 3, 0).is_err());
        assert!(CoveringParams::new(2, 6, 2, 0, 3).is_err());
        assert!(CoveringParams::new(2, 6, 2, 2, 1).is_err());
    }

    #[test]
    fn nontriviality() {
        let p = PackingParams::new(2, 6, 4, 3, 2).unwrap();
        assert!(p.is_nontrivial().unwrap());
        let all = PackingParams::new(2, 6, 4, 3, 7).unwrap();
        assert!(!all.is_nontrivial().unwrap());
        assert!(PackingParams::new(2, 6, 4, 3, 6).unwrap().is_nontrivial().unwrap());
        assert!(!PackingParams::new(2, 6, 5, 5, 1).unwrap().is_nontrivial().unwrap());
        assert_eq!(p.to_string(), "A_2(6,4,3;2)");
    }
}
