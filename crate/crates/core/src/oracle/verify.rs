use crate::constructions::PackingCode;
use crate::error::{Error, Result};
use crate::gf::Subspace;
use crate::qcalc::gaussian_binomial_u128;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Check {
    Packing { t: usize, lambda: u64 },
    Covering { delta: usize, alpha: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// The most covered t-subspace, one basis row per string.
    Subspace(Vec<String>),
    /// Block indices of the alpha-subset with the smallest span.
    Blocks(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub check: Check,
    pub valid: bool,
    /// Packing: highest coverage of a t-subspace. Covering: smallest span
    /// dimension of a checked alpha-subset (absent with fewer than alpha blocks).
    pub extreme: Option<usize>,
    pub witness: Option<Witness>,
    /// Packing only: `histogram[i]` t-subspaces lie in exactly i blocks.
    pub histogram: Vec<u128>,
    /// Covering only: alpha-subsets examined or proven fine by pruning.
    pub checked: u128,
    pub total: u128,
    pub probabilistic: bool,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.check {
            Check::Packing { t, lambda } => writeln!(f, "check: packing t={t} lambda={lambda}")?,
            Check::Covering { delta, alpha } => writeln!(f, "check: covering delta={delta} alpha={alpha}")?,
        }
        writeln!(f, "valid: {}", self.valid)?;
        match (&self.check, self.extreme) {
            (Check::Packing { .. }, Some(v)) => writeln!(f, "max coverage: {v}")?,
            (Check::Covering { .. }, Some(v)) => writeln!(f, "min span: {v}")?,
            _ => {}
        }
        match &self.witness {
            Some(Witness::Subspace(rows)) => writeln!(f, "witness: {}", rows.join(" "))?,
            Some(Witness::Blocks(ix)) => {
                let s: Vec<String> = ix.iter().map(|i| i.to_string()).collect();
                writeln!(f, "witness blocks: {}", s.join(" "))?
            }
            None => {}
        }
        if !self.histogram.is_empty() {
            let s: Vec<String> = self.histogram.iter().enumerate().map(|(i, a)| format!("a{i}={a}")).collect();
            writeln!(f, "histogram: {}", s.join(" "))?;
        }
        if let Check::Covering { .. } = self.check {
            let how = if self.probabilistic { "sampled" } else { "exhaustive" };
            writeln!(f, "subsets: {} of {} ({how})", self.checked, self.total)?;
        }
        Ok(())
    }
}

/// Counts, for every t-subspace inside some block, how many blocks contain it.
/// Works per block, so the cost scales with the code rather than [n;t]_q.
pub fn coverage_counts(code: &PackingCode, t: usize) -> Result<HashMap<Subspace, u64>> {
    if t > code.block_dim() {
        return Err(Error::InvalidParams(format!("t = {t} exceeds block dimension {}", code.block_dim())));
    }
    let merged = code
        .blocks()
        .par_iter()
        .map(|b| -> Result<HashMap<Subspace, u64>> {
            let mut m = HashMap::new();
            for s in b.subspaces(t)? {
                *m.entry(s).or_insert(0) += 1;
            }
            Ok(m)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            let (mut big, small) = if a.len() >= b.len() { (std::mem::take(&mut a), b) } else { (b, a) };
            for (k, v) in small {
                *big.entry(k).or_insert(0) += v;
            }
            Ok(big)
        })?;
    Ok(merged)
}

/// Checks that every t-subspace lies in at most lambda blocks.
pub fn verify_packing(code: &PackingCode, t: usize, lambda: u64) -> Result<VerifyReport> {
    let counts = coverage_counts(code, t)?;
    let total = gaussian_binomial_u128(code.ambient() as u32, t as u32, code.field().order())?;
    let worst = counts.iter().max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)));
    let max = worst.map_or(0, |(_, &c)| c);
    let mut histogram = vec![0u128; max as usize + 1];
    for &c in counts.values() {
        histogram[c as usize] += 1;
    }
    histogram[0] = total - counts.len() as u128;
    let witness = worst.map(|(s, _)| Witness::Subspace(s.to_text().lines().map(str::to_string).collect()));
    Ok(VerifyReport {
        check: Check::Packing { t, lambda },
        valid: max <= lambda,
        extreme: Some(max as usize),
        witness,
        histogram,
        checked: 0,
        total,
        probabilistic: false,
    })
}

/// Options for [`verify_covering`].
#[derive(Debug, Clone)]
pub struct CoveringCheck {
    /// Exhaustive search when the number of alpha-subsets is at most this.
    pub budget: u128,
    /// Random subsets drawn otherwise.
    pub samples: u64,
    pub seed: u64,
}

impl Default for CoveringCheck {
    fn default() -> Self {
        CoveringCheck { budget: 10_000_000, samples: 200_000, seed: 0 }
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

struct MinSearch<'a> {
    blocks: &'a [Subspace],
    alpha: usize,
    best: usize,
    witness: Vec<usize>,
    path: Vec<usize>,
    leaves: u128,
}

impl MinSearch<'_> {
    /// Subsets extending `path` whose span cannot beat the best found so
    /// far are skipped: the span of a prefix bounds every extension.
    fn run(&mut self, prefix: &Subspace, next: usize) {
        if self.path.len() == self.alpha {
            self.leaves += 1;
            if prefix.dim() < self.best {
                self.best = prefix.dim();
                self.witness = self.path.clone();
            }
            return;
        }
        if prefix.dim() >= self.best {
            return;
        }
        let need = self.alpha - self.path.len();
        for i in next..=self.blocks.len() - need {
            let s = prefix.sum(&self.blocks[i]).expect("ambient checked");
            self.path.push(i);
            self.run(&s, i + 1);
            self.path.pop();
        }
    }
}

/// Checks that every alpha blocks span at least k + delta dimensions.
/// Exhaustive (and exact about the minimum span) when the number of subsets
/// fits the budget, otherwise a seeded random sample flagged probabilistic.
pub fn verify_covering(code: &PackingCode, delta: usize, alpha: usize, opts: &CoveringCheck) -> Result<VerifyReport> {
    if alpha == 0 {
        return Err(Error::InvalidParams("alpha must be positive".into()));
    }
    let need = code.block_dim() + delta;
    let blocks = code.blocks();
    let total_big = binomial(blocks.len(), alpha);
    let total = total_big.to_u128().unwrap_or(u128::MAX);
    let check = Check::Covering { delta, alpha };
    if blocks.len() < alpha {
        return Ok(VerifyReport {
            check,
            valid: true,
            extreme: None,
            witness: None,
            histogram: Vec::new(),
            checked: 0,
            total: 0,
            probabilistic: false,
        });
    }
    let zero = Subspace::zero(code.field(), code.ambient());
    let (min, witness, probabilistic, checked) = if total <= opts.budget {
        let per_first: Vec<(usize, Vec<usize>)> = (0..=blocks.len() - alpha)
            .into_par_iter()
            .map(|first| {
                let mut s = MinSearch {
                    blocks,
                    alpha,
                    best: usize::MAX,
                    witness: Vec::new(),
                    path: vec![first],
                    leaves: 0,
                };
                s.run(&blocks[first], first + 1);
                (s.best, s.witness)
            })
            .collect();
        let (best, w) = per_first.into_iter().min_by_key(|(b, _)| *b).expect("at least one subset");
        (best, w, false, total)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut best = usize::MAX;
        let mut wit = Vec::new();
        for _ in 0..opts.samples {
            let mut idx = sample(&mut rng, blocks.len(), alpha).into_vec();
            idx.sort_unstable();
            let mut s = zero.clone();
            for &i in &idx {
                s = s.sum(&blocks[i])?;
            }
            if s.dim() < best {
                best = s.dim();
                wit = idx;
            }
        }
        (best, wit, true, opts.samples as u128)
    };
    Ok(VerifyReport {
        check,
        valid: min >= need,
        extreme: Some(min),
        witness: Some(Witness::Blocks(witness)),
        histogram: Vec::new(),
        checked,
        total,
        probabilistic,
    })
}
