//! Gaussian binomial coefficients and q-integers in exact arithmetic.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// `[n choose k]_q`, the number of k-subspaces of GF(q)^n. Zero when k > n.
pub fn gaussian_binomial(n: u32, k: u32, q: u32) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    num / den
}

/// `[n choose 1]_q = (q^n - 1)/(q - 1)`.
pub fn q_int(n: u32, q: u32) -> BigUint {
    gaussian_binomial(n, 1, q)
}

/// Machine-word variant of [`gaussian_binomial`] for the bound engine.
pub fn gaussian_binomial_u128(n: u32, k: u32, q: u32) -> Result<u128> {
    gaussian_binomial(n, k, q).to_u128().ok_or(Error::Overflow("Gaussian binomial"))
}

pub fn q_int_u128(n: u32, q: u32) -> Result<u128> {
    gaussian_binomial_u128(n, 1, q)
}

/// `q^e` as `u128`.
pub fn q_pow_u128(q: u32, e: u32) -> Result<u128> {
    (q as u128).checked_pow(e).ok_or(Error::Overflow("power of q"))
}
