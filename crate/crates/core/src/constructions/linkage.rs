//! Lower bounds on B_q(n,k,delta;alpha) from the lifted-MRD and linkage
//! constructions, as a memoized plan that the block builders replay.

use crate::error::{Error, Result};
use crate::params::{CoveringParams, PackingParams};
use crate::qcalc::{gaussian_binomial_u128 as qbin, q_pow_u128};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// How the best known linkage code for a parameter point is assembled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LinkagePlan {
    /// Too few blocks for any alpha of them to exist: `count` arbitrary blocks.
    Few { count: u128 },
    /// delta = 1: any two distinct blocks already span k+1 dimensions.
    AllBlocks { count: u128 },
    /// Lifted translates of an MRD code, `[I_k | A]`.
    Lifted { translates: u128, count: u128 },
    /// `[v | A]` with v from the inner code on n-t coordinates, plus an
    /// optional appendix supported on the last t+k-delta coordinates.
    Linked {
        t: u32,
        translates: u128,
        inner: Box<LinkagePlan>,
        appendix: Option<Box<LinkagePlan>>,
        count: u128,
    },
}

impl LinkagePlan {
    pub fn size(&self) -> u128 {
        match self {
            LinkagePlan::Few { count }
            | LinkagePlan::AllBlocks { count }
            | LinkagePlan::Lifted { count, .. }
            | LinkagePlan::Linked { count, .. } => *count,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            LinkagePlan::Few { count } => format!("{count} arbitrary blocks"),
            LinkagePlan::AllBlocks { count } => format!("all {count} blocks"),
            LinkagePlan::Lifted { translates, count } => {
                format!("lifted MRD, {translates} translate(s), {count} blocks")
            }
            LinkagePlan::Linked { t, translates, inner, appendix, count } => {
                let mut s = format!("linkage t={t}, {translates} translate(s) over [{}]", inner.describe());
                if let Some(a) = appendix {
                    s.push_str(&format!(" + appendix [{}]", a.describe()));
                }
                s.push_str(&format!(", {count} blocks"));
                s
            }
        }
    }
}

fn checked(v: Option<u128>) -> Result<u128> {
    v.ok_or(Error::Overflow("linkage size"))
}

/// Number of usable translates: alpha-1, limited by the number of cosets of
/// the MRD code inside its distance delta-1 supercode.
pub fn translate_count(alpha: u64, rows: u32, cols: u32, q: u32) -> Result<u128> {
    let cosets = q_pow_u128(q, rows.max(cols))?;
    Ok(((alpha - 1) as u128).min(cosets))
}

/// Size of a linear MRD code of k x m matrices with minimum rank distance delta.
pub fn mrd_size(k: u32, m: u32, delta: u32, q: u32) -> Result<u128> {
    let (lo, hi) = (k.min(m), k.max(m));
    if delta == 0 || delta > lo {
        return Err(Error::InvalidParams(format!("MRD distance {delta} needs 1 <= delta <= {lo}")));
    }
    q_pow_u128(q, hi * (lo - delta + 1))
}

type Key = (u32, u32, u32, u32, u64);

fn cache() -> &'static RwLock<HashMap<Key, Arc<LinkagePlan>>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<LinkagePlan>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Best linkage plan for B_q(n,k,delta;alpha). Case 1 is tried whenever
/// k + delta <= n; the recursive cases maximize over every admissible t.
pub fn linkage_plan(c: &CoveringParams) -> Result<Arc<LinkagePlan>> {
    let key = (c.q, c.n, c.k, c.delta, c.alpha);
    if let Some(p) = cache().read().unwrap().get(&key) {
        return Ok(p.clone());
    }
    let plan = Arc::new(compute_plan(c)?);
    cache().write().unwrap().insert(key, plan.clone());
    Ok(plan)
}

fn compute_plan(c: &CoveringParams) -> Result<LinkagePlan> {
    let CoveringParams { q, n, k, delta, alpha } = *c;
    let all = qbin(n, k, q)?;
    let few = LinkagePlan::Few { count: ((alpha - 1) as u128).min(all) };
    if n < k + delta || k == 0 {
        return Ok(few);
    }
    if delta == 1 {
        return Ok(LinkagePlan::AllBlocks { count: all });
    }
    if delta > k {
        return Ok(few);
    }
    let mut best = lifted_plan(c)?;
    if best.size() < few.size() {
        best = few;
    }
    if n >= k + 2 * delta {
        for t in delta..=n - k - delta {
            let cand = linked_plan(c, t)?;
            if cand.size() > best.size() {
                best = cand;
            }
        }
    }
    Ok(best)
}

/// Lifted translates of a k x (n-k) MRD code. Needs delta <= k and
/// k + delta <= n.
pub fn lifted_plan(c: &CoveringParams) -> Result<LinkagePlan> {
    let CoveringParams { q, n, k, delta, alpha } = *c;
    if delta < 2 || delta > k || n < k + delta {
        return Err(Error::NotApplicable(format!("lifted MRD needs 2 <= delta <= k and n >= k + delta, got {c}")));
    }
    let translates = translate_count(alpha, k, n - k, q)?;
    let count = checked(translates.checked_mul(mrd_size(k, n - k, delta, q)?))?;
    Ok(LinkagePlan::Lifted { translates, count })
}

/// The linkage step for a fixed t: needs n >= k + 2 delta and
/// delta <= t <= n-k-delta. An appendix is added when t >= k.
pub fn linked_plan(c: &CoveringParams, t: u32) -> Result<LinkagePlan> {
    let CoveringParams { q, n, k, delta, alpha } = *c;
    if delta < 2 || delta > k || n < k + 2 * delta || t < delta || t > n - k - delta {
        return Err(Error::NotApplicable(format!(
            "linkage with t={t} needs 2 <= delta <= k, n >= k + 2 delta and delta <= t <= n-k-delta, got {c}"
        )));
    }
    let inner = linkage_plan(&c.with_n(n - t))?;
    let translates = translate_count(alpha, k, t, q)?;
    let per = checked(translates.checked_mul(mrd_size(k, t, delta, q)?))?;
    let main = checked(per.checked_mul(inner.size()))?;
    let (appendix, count) = if t >= k {
        let app = linkage_plan(&c.with_n(t + k - delta))?;
        let total = checked(main.checked_add(app.size()))?;
        (Some(Box::new((*app).clone())), total)
    } else {
        (None, main)
    };
    Ok(LinkagePlan::Linked { t, translates, inner: Box::new((*inner).clone()), appendix, count })
}

/// Best linkage step over all admissible t.
pub fn best_linked_plan(c: &CoveringParams) -> Result<LinkagePlan> {
    let mut best: Option<LinkagePlan> = None;
    if c.n >= c.k + 2 * c.delta {
        for t in c.delta..=c.n - c.k - c.delta {
            if let Ok(p) = linked_plan(c, t) {
                if best.as_ref().is_none_or(|b| p.size() > b.size()) {
                    best = Some(p);
                }
            }
        }
    }
    best.ok_or_else(|| Error::NotApplicable(format!("no admissible linkage step for {c}")))
}

/// Lower bound on B_q(n,k,delta;alpha).
pub fn linkage_lower(c: &CoveringParams) -> Result<u128> {
    Ok(linkage_plan(c)?.size())
}

/// Packing parameters to their covering counterpart:
/// A_q(n,k,t;lambda) = B_q(n, n-k, k-t+1; lambda+1).
pub fn dualize_packing(p: &PackingParams) -> CoveringParams {
    CoveringParams { q: p.q, n: p.n, k: p.n - p.k, delta: p.k - p.t + 1, alpha: p.lambda + 1 }
}

/// B_q(n,k,delta;alpha) = A_q(n, n-k, n-k-delta+1; alpha-1). Fails when
/// n-k-delta+1 would be negative.
pub fn dualize_covering(c: &CoveringParams) -> Result<PackingParams> {
    let k = c.n - c.k;
    if c.delta > k + 1 {
        return Err(Error::InvalidParams(format!("{c} has no packing dual: delta > n-k+1")));
    }
    PackingParams::new(c.q, c.n, k, k + 1 - c.delta, c.alpha - 1)
}

/// Lower bound on A_q(n,k,t;lambda) via the dual linkage plan.
pub fn packing_lower(p: &PackingParams) -> Result<u128> {
    linkage_lower(&dualize_packing(p))
}
