use super::code::PackingCode;
use super::linkage::{mrd_size, translate_count, LinkagePlan};
use crate::error::{Error, Result};
use crate::gf::{enumerate_subspaces, Matrix, Subspace};
use crate::oracle::{verify_covering, CoveringCheck};
use crate::params::CoveringParams;
use crate::rankmetric::{gabidulin, lift, translate_family};
use rayon::prelude::*;

/// Default limit on the number of blocks a construction may materialize.
pub const DEFAULT_MAX_BLOCKS: u128 = 5_000_000;

fn cap(count: u128, max_blocks: u128) -> Result<()> {
    if count > max_blocks {
        return Err(Error::SizeCap { what: "construction", count, cap: max_blocks });
    }
    Ok(())
}

/// Codewords of `alpha - 1` (at most the coset count) translates of a
/// `rows x cols` Gabidulin code with distance delta.
fn translate_words(c: &CoveringParams, rows: u32, cols: u32) -> Result<Vec<Matrix>> {
    let base = gabidulin(rows as usize, cols as usize, c.delta as usize, c.q)?;
    let count = translate_count(c.alpha, rows, cols, c.q)?;
    translate_family(&base, count as u64 + 1)?.codewords()
}

/// Lifted MRD translates: `[I_k | A]` for A in the union of min(alpha-1,
/// q^max(k,n-k)) translates of a k x (n-k) Gabidulin code of distance delta.
/// Requires 2 <= delta <= k and k + delta <= n.
pub fn construction_1(c: &CoveringParams) -> Result<PackingCode> {
    let CoveringParams { n, k, delta, .. } = *c;
    if delta < 2 {
        return Err(Error::NotApplicable("delta = 1: every set of distinct blocks qualifies; use all blocks".into()));
    }
    if delta > k || n < k + delta {
        return Err(Error::InvalidParams(format!("lifted MRD needs delta <= k and k + delta <= n, got {c}")));
    }
    let words = translate_words(c, k, n - k)?;
    let blocks = words.par_iter().map(lift).collect();
    PackingCode::new(c.field(), n as usize, k as usize, blocks)
}

fn check_inner(c: &CoveringParams, inner: &PackingCode, n_inner: u32, force: bool) -> Result<()> {
    if inner.ambient() != n_inner as usize || inner.block_dim() != c.k as usize {
        return Err(Error::InvalidParams(format!(
            "inner code must consist of {}-subspaces of GF({})^{n_inner}",
            c.k, c.q
        )));
    }
    if !force {
        let report = verify_covering(inner, c.delta as usize, c.alpha as usize, &CoveringCheck::default())?;
        if !report.valid || report.probabilistic {
            return Err(Error::InvalidParams("inner code is not a verified covering code; pass force to skip".into()));
        }
    }
    Ok(())
}

/// `[v | A]` for every inner block v (on n-t coordinates) and every A in
/// the translate union of a k x t Gabidulin code.
fn linked_blocks(c: &CoveringParams, t: u32, inner: &PackingCode) -> Result<Vec<Subspace>> {
    let words = translate_words(c, c.k, t)?;
    Ok(inner
        .blocks()
        .par_iter()
        .flat_map_iter(|v| {
            words.iter().map(move |a| {
                let m = v.basis().hstack(a).expect("row counts agree");
                Subspace::from_basis(&m).expect("[v | A] has full rank")
            })
        })
        .collect())
}

/// Linkage with t < k: `(alpha-1) q^(k(t-delta+1)) |inner|` blocks.
/// Needs n >= k + 2 delta and delta <= t <= n-k-delta. Unless `force` is
/// set, the inner code is verified first.
pub fn construction_2(c: &CoveringParams, t: u32, inner: &PackingCode, force: bool) -> Result<PackingCode> {
    let CoveringParams { n, k, delta, .. } = *c;
    if delta < 2 || delta > k || n < k + 2 * delta || t < delta || t > n - k - delta || t >= k {
        return Err(Error::InvalidParams(format!(
            "construction 2 needs 2 <= delta <= k, n >= k + 2 delta, delta <= t <= n-k-delta, t < k; got {c}, t={t}"
        )));
    }
    check_inner(c, inner, n - t, force)?;
    PackingCode::new(c.field(), n as usize, k as usize, linked_blocks(c, t, inner)?)
}

/// Linkage with t >= k plus an appendix: blocks of a covering code on the
/// last t+k-delta coordinates, given in ambient dimension n.
pub fn construction_3(
    c: &CoveringParams,
    t: u32,
    inner: &PackingCode,
    appendix: &PackingCode,
    force: bool,
) -> Result<PackingCode> {
    let CoveringParams { n, k, delta, .. } = *c;
    if delta < 2 || delta > k || n < k + 2 * delta || t < k || t > n - k - delta {
        return Err(Error::InvalidParams(format!(
            "construction 3 needs 2 <= delta <= k, n >= k + 2 delta, k <= t <= n-k-delta; got {c}, t={t}"
        )));
    }
    check_inner(c, inner, n - t, force)?;
    if appendix.ambient() != n as usize || appendix.block_dim() != k as usize {
        return Err(Error::InvalidParams(format!("appendix must consist of {k}-subspaces of GF({})^{n}", c.q)));
    }
    let zeros = (n - (t + k - delta)) as usize;
    for (i, b) in appendix.blocks().iter().enumerate() {
        if b.pivots().first().is_some_and(|&p| p < zeros) {
            return Err(Error::InvalidParams(format!(
                "appendix block {i} is not supported on the last {} coordinates",
                t + k - delta
            )));
        }
    }
    if !force {
        let short = PackingCode::new(
            c.field(),
            (t + k - delta) as usize,
            k as usize,
            appendix.blocks().iter().map(|b| drop_front(b, zeros)).collect(),
        )?;
        check_inner(c, &short, t + k - delta, false)?;
    }
    let mut blocks = linked_blocks(c, t, inner)?;
    blocks.extend(appendix.blocks().iter().cloned());
    PackingCode::new(c.field(), n as usize, k as usize, blocks)
}

fn drop_front(b: &Subspace, zeros: usize) -> Subspace {
    let basis = b.basis();
    let m = Matrix::from_fn(b.field(), basis.rows(), basis.cols() - zeros, |r, col| basis.get(r, col + zeros));
    Subspace::from_rref_unchecked(m)
}

/// Materializes a linkage plan as an explicit covering code.
pub fn build_plan(c: &CoveringParams, plan: &LinkagePlan, max_blocks: u128) -> Result<PackingCode> {
    cap(plan.size(), max_blocks)?;
    let field = c.field();
    let (n, k) = (c.n as usize, c.k as usize);
    match plan {
        LinkagePlan::Few { count } | LinkagePlan::AllBlocks { count } => {
            let blocks = enumerate_subspaces(field, n, k)?.take(*count as usize).collect();
            PackingCode::new(field, n, k, blocks)
        }
        LinkagePlan::Lifted { .. } => construction_1(c),
        LinkagePlan::Linked { t, inner, appendix, .. } => {
            let inner_code = build_plan(&c.with_n(c.n - t), inner, max_blocks)?;
            match appendix {
                None => construction_2(c, *t, &inner_code, true),
                Some(app) => {
                    let short = c.with_n(t + c.k - c.delta);
                    let app_code = build_plan(&short, app, max_blocks)?.pad_front((c.n - short.n) as usize);
                    construction_3(c, *t, &inner_code, &app_code, true)
                }
            }
        }
    }
}

/// The size the closed formulas predict for construction 1.
pub fn construction_1_size(c: &CoveringParams) -> Result<u128> {
    let tr = translate_count(c.alpha, c.k, c.n - c.k, c.q)?;
    tr.checked_mul(mrd_size(c.k, c.n - c.k, c.delta, c.q)?).ok_or(Error::Overflow("construction size"))
}
