//! Closed-form upper bounds on A_q(n,k,t;lambda). Recursive bounds take the
//! reduced-parameter value from a [`BoundOracle`].

use super::BoundOracle;
use crate::divisible::reduce_quotient;
use crate::error::{Error, Result};
use crate::params::PackingParams;
use crate::qcalc::{gaussian_binomial_u128 as qbin, q_int_u128, q_pow_u128};
use num_integer::Roots;

fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::Overflow("bound arithmetic"))
}

/// Value of A for t = 0: the zero subspace lies in every block.
fn t_zero(q: u32, n: u32, k: u32, lambda: u64) -> Result<u128> {
    Ok((lambda as u128).min(qbin(n, k, q)?))
}

/// Upper bound for the Johnson recursion target (n-1, k-1, t-1; lambda).
fn reduced_upper(p: &PackingParams, inner: &dyn BoundOracle) -> Result<u128> {
    if p.t == 1 {
        t_zero(p.q, p.n - 1, p.k - 1, p.lambda)
    } else {
        inner.upper(&p.with(p.n - 1, p.k - 1, p.t - 1))
    }
}

/// `floor(lambda [n;t] / [k;t])`, capped by the number of distinct blocks.
pub fn packing_bound(p: &PackingParams) -> Result<u128> {
    let all = qbin(p.n, p.k, p.q)?;
    let num = mul(p.lambda as u128, qbin(p.n, p.t, p.q)?)?;
    Ok((num / qbin(p.k, p.t, p.q)?).min(all))
}

fn johnson_numerator(p: &PackingParams, inner: &dyn BoundOracle) -> Result<u128> {
    if p.t == 0 || p.k == 0 {
        return Err(Error::NotApplicable("Johnson bound needs t >= 1 and k >= 1".into()));
    }
    mul(q_int_u128(p.n, p.q)?, reduced_upper(p, inner)?)
}

/// `floor([n;1] U(n-1,k-1,t-1;lambda) / [k;1])`.
pub fn johnson_classic(p: &PackingParams, inner: &dyn BoundOracle) -> Result<u128> {
    let a = johnson_numerator(p, inner)?;
    Ok(a / q_int_u128(p.k, p.q)?)
}

/// The Johnson bound sharpened by the admissible lengths of
/// q^(k-1)-divisible codes. Falls back to the classic value when the
/// reduction finds nothing.
pub fn johnson_improved(p: &PackingParams, inner: &dyn BoundOracle) -> Result<u128> {
    if p.k < 2 {
        return Err(Error::NotApplicable("divisibility reduction needs k >= 2".into()));
    }
    let a = johnson_numerator(p, inner)?;
    match reduce_quotient(a, p.k, p.q)? {
        Some(b) => Ok(b),
        None => Ok(a / q_int_u128(p.k, p.q)?),
    }
}

/// Packing bound inside a hyperplane combined with the averaging argument
/// over hyperplanes:
///
/// `max_{0 <= x <= U(n-1,k,t)} min{ x + floor((lambda [n-1;t] - x [k;t]) / [k-1;t]),
///                                  floor(x (q^n - 1) / (q^(n-k) - 1)) }`
///
/// An `x` with negative numerator cannot be the largest hyperplane count and
/// is skipped.
pub fn combination_bound(p: &PackingParams, inner: &dyn BoundOracle) -> Result<u128> {
    if !(1 <= p.t && p.t < p.k && p.k < p.n) {
        return Err(Error::NotApplicable("combination bound needs 1 <= t < k < n".into()));
    }
    if !p.is_nontrivial()? && (p.lambda as u128) > p.blocks_through_t_subspace()? {
        return Err(Error::NotApplicable("lambda exceeds [n-t;k-t]".into()));
    }
    let x_max = inner.upper(&p.with(p.n - 1, p.k, p.t))?;
    let terms = CombinationTerms::new(p)?;
    terms.maximize(x_max)
}

pub(crate) struct CombinationTerms {
    budget: u128,
    per_inside: u128,
    per_outside: u128,
    ratio_num: u128,
    ratio_den: u128,
}

impl CombinationTerms {
    pub(crate) fn new(p: &PackingParams) -> Result<CombinationTerms> {
        Ok(CombinationTerms {
            budget: mul(p.lambda as u128, qbin(p.n - 1, p.t, p.q)?)?,
            per_inside: qbin(p.k, p.t, p.q)?,
            per_outside: qbin(p.k - 1, p.t, p.q)?,
            ratio_num: q_pow_u128(p.q, p.n)? - 1,
            ratio_den: q_pow_u128(p.q, p.n - p.k)? - 1,
        })
    }

    /// First arm; `None` stands for minus infinity.
    pub(crate) fn inside(&self, x: u128) -> Option<u128> {
        let used = x.checked_mul(self.per_inside)?;
        let rest = self.budget.checked_sub(used)?;
        Some(x + rest / self.per_outside)
    }

    pub(crate) fn averaging(&self, x: u128) -> Result<u128> {
        Ok(mul(x, self.ratio_num)? / self.ratio_den)
    }

    pub(crate) fn value(&self, x: u128) -> Result<Option<u128>> {
        Ok(self.inside(x).map(|a| Ok::<_, Error>(a.min(self.averaging(x)?))).transpose()?)
    }

    /// The first arm is strictly decreasing and the second non-decreasing,
    /// so the maximum of the minimum sits at the crossing point.
    fn maximize(&self, x_max: u128) -> Result<u128> {
        // largest x in [0, x_max] with averaging(x) <= inside(x)
        let below = |x: u128| -> Result<bool> {
            Ok(match self.inside(x) {
                Some(a) => self.averaging(x)? <= a,
                None => false,
            })
        };
        let (mut lo, mut hi) = (0u128, x_max);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if below(mid)? {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let mut best = self.value(lo)?.unwrap_or(0);
        if lo < x_max {
            if let Some(v) = self.value(lo + 1)? {
                best = best.max(v);
            }
        }
        Ok(best)
    }
}

/// Inputs of the counting inequality: `sum a_i = mu0`, `sum i a_i = mu1 c`,
/// `sum i(i-1) a_i <= mu2 c`, evaluated at the integer `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InequalityInputs {
    pub mu0: u128,
    pub mu1: u128,
    pub mu2: u128,
    pub m: u128,
}

/// `floor(m (m+1) mu0 / (2 m mu1 - mu2))`.
pub fn inequality_bound_cap(inp: InequalityInputs) -> Result<u128> {
    let InequalityInputs { mu0, mu1, mu2, m } = inp;
    if m == 0 || mu1 == 0 {
        return Err(Error::InvalidParams("need m >= 1 and mu1 >= 1".into()));
    }
    let lhs = mul(mul(2, m)?, mu1)?;
    if lhs <= mu2 {
        return Err(Error::InvalidParams(format!("2 m mu1 = {lhs} must exceed mu2 = {mu2}")));
    }
    Ok(mul(mul(m, m + 1)?, mu0)? / (lhs - mu2))
}

fn isqrt_ceil(x: u128) -> u128 {
    let s = x.sqrt();
    if s * s < x {
        s + 1
    } else {
        s
    }
}

/// The integer m closest to the real minimizer of the inequality cap,
/// rounded up: `ceil((mu2 + sqrt(mu2^2 + mu2)) / (2 mu1))`.
pub fn optimal_m(mu1: u128, mu2: u128) -> Result<u128> {
    let disc = mul(mu2, mu2)?.checked_add(mu2).ok_or(Error::Overflow("discriminant"))?;
    Ok((mu2 + isqrt_ceil(disc)).div_ceil(2 * mu1).max(1))
}

/// Quadratic bound for A_q(n, n-2, n-3; 2) via hyperplane counting:
/// mu0 = [n;1], mu1 = q + 1, mu2 = [n-2;1].
pub fn quadratic_bound(p: &PackingParams) -> Result<u128> {
    if !(p.lambda == 2 && p.n >= 4 && p.k == p.n - 2 && p.t == p.n - 3) {
        return Err(Error::NotApplicable("quadratic bound covers A_q(n,n-2,n-3;2) only".into()));
    }
    let mu0 = q_int_u128(p.n, p.q)?;
    let mu1 = p.q as u128 + 1;
    let mu2 = q_int_u128(p.n - 2, p.q)?;
    let centre = optimal_m(mu1, mu2)?;
    let mut best: Option<u128> = None;
    for m in centre.saturating_sub(1)..=centre + 1 {
        if m == 0 || 2 * m * mu1 <= mu2 {
            continue;
        }
        let v = inequality_bound_cap(InequalityInputs { mu0, mu1, mu2, m })?;
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    best.ok_or_else(|| Error::NotApplicable("no admissible m".into()))
}
