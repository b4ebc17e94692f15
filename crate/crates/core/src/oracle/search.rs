use crate::bounds::BoundEngine;
use crate::constructions::PackingCode;
use crate::error::{Error, Result};
use crate::gf::poly::ExtField;
use crate::gf::{enumerate_subspaces, Matrix, Subspace};
use crate::params::PackingParams;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// Candidate blocks and, for each, the indices of the t-subspaces it contains.
pub struct Incidence {
    pub blocks: Vec<Subspace>,
    pub contains: Vec<Vec<u32>>,
    pub t_count: usize,
}

/// Refuses more than this many candidate blocks.
pub const MAX_CANDIDATES: u128 = 2_000_000;

impl Incidence {
    pub fn build(p: &PackingParams) -> Result<Incidence> {
        let count = p.block_count()?;
        if count > MAX_CANDIDATES {
            return Err(Error::SizeCap { what: "candidate blocks", count, cap: MAX_CANDIDATES });
        }
        let field = p.field();
        let (n, k, t) = (p.n as usize, p.k as usize, p.t as usize);
        let index: HashMap<Subspace, u32> =
            enumerate_subspaces(field, n, t)?.enumerate().map(|(i, s)| (s, i as u32)).collect();
        let blocks: Vec<Subspace> = enumerate_subspaces(field, n, k)?.collect();
        let contains = blocks
            .par_iter()
            .map(|b| -> Result<Vec<u32>> {
                let mut v: Vec<u32> = b.subspaces(t)?.map(|s| index[&s]).collect();
                v.sort_unstable();
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Incidence { blocks, contains, t_count: index.len() })
    }

    fn fits(&self, cov: &[u64], i: usize, lambda: u64) -> bool {
        self.contains[i].iter().all(|&j| cov[j as usize] < lambda)
    }

    fn apply(&self, cov: &mut [u64], i: usize, add: bool) {
        for &j in &self.contains[i] {
            if add {
                cov[j as usize] += 1;
            } else {
                cov[j as usize] -= 1;
            }
        }
    }

    fn code(&self, p: &PackingParams, chosen: &[usize]) -> Result<PackingCode> {
        let blocks = chosen.iter().map(|&i| self.blocks[i].clone()).collect();
        PackingCode::new(p.field(), p.n as usize, p.k as usize, blocks)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub value: usize,
    #[serde(skip)]
    pub witness: PackingCode,
    /// False when the node budget ran out before optimality was proven.
    pub complete: bool,
    pub nodes: u64,
}

struct Bnb<'a> {
    inc: &'a Incidence,
    /// Blocks through each t-subspace.
    through: Vec<Vec<u32>>,
    lambda: u64,
    per_block: u64,
    cutoff: usize,
    budget: u64,
    nodes: u64,
    cov: Vec<u64>,
    excluded: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    exhausted: bool,
}

impl Bnb<'_> {
    fn done(&self) -> bool {
        self.exhausted || self.best.len() >= self.cutoff
    }

    fn add(&mut self, i: usize) {
        self.inc.apply(&mut self.cov, i, true);
        self.excluded[i] = true;
        self.chosen.push(i);
    }

    fn remove(&mut self) {
        let i = self.chosen.pop().expect("nonempty");
        self.inc.apply(&mut self.cov, i, false);
        self.excluded[i] = false;
    }

    fn addable(&self, i: usize) -> bool {
        !self.excluded[i] && self.inc.fits(&self.cov, i, self.lambda)
    }

    // Branches on the t-subspace with the fewest addable blocks among those
    // whose slack is smaller than that count: one child per block through it
    // (earlier siblings excluded) plus one child where none is added.
    fn run(&mut self) {
        if self.done() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
            if self.done() {
                return;
            }
        }
        let addable: Vec<bool> = (0..self.inc.blocks.len()).map(|i| self.addable(i)).collect();
        let total = addable.iter().filter(|&&a| a).count();
        if self.chosen.len() + total <= self.best.len() {
            return;
        }
        let mut capacity = 0u64;
        let mut pick: Option<(usize, usize)> = None;
        for (j, blocks) in self.through.iter().enumerate() {
            let open = blocks.iter().filter(|&&b| addable[b as usize]).count();
            let slack = self.lambda - self.cov[j];
            capacity += slack.min(open as u64);
            if open as u64 > slack && pick.map_or(true, |(_, c)| open < c) {
                pick = Some((j, open));
            }
        }
        if self.chosen.len() + (capacity / self.per_block) as usize <= self.best.len() {
            return;
        }
        let Some((j, _)) = pick else {
            // no constraint binds: every addable block fits at once
            let before = self.chosen.len();
            for i in (0..addable.len()).filter(|&i| addable[i]) {
                self.add(i);
            }
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            while self.chosen.len() > before {
                self.remove();
            }
            return;
        };
        let branch: Vec<usize> = self.through[j].iter().map(|&b| b as usize).filter(|&b| addable[b]).collect();
        let mut shut = Vec::new();
        for &b in &branch {
            if self.addable(b) {
                self.add(b);
                self.run();
                self.remove();
            }
            self.excluded[b] = true;
            shut.push(b);
            if self.done() {
                break;
            }
        }
        if !self.done() {
            self.run();
        }
        for b in shut {
            self.excluded[b] = false;
        }
    }
}

/// Exact A_q(n,k,t;lambda) by branch and bound over all candidate blocks.
/// The first block is fixed (GL(n,q) acts transitively on k-subspaces), a
/// greedy run seeds the incumbent and the engine's upper bound stops the
/// search as soon as it is met. Past `budget` nodes the best code found so
/// far is returned with `complete = false`.
pub fn exhaustive_max(p: &PackingParams, budget: u64, engine: &BoundEngine) -> Result<SearchOutcome> {
    let inc = Incidence::build(p)?;
    let upper = engine.best_upper(p)?.upper;
    let cutoff = usize::try_from(upper).unwrap_or(usize::MAX);
    let per_block = inc.contains.first().map_or(1, |v| v.len().max(1) as u64);
    let mut through = vec![Vec::new(); inc.t_count];
    for (b, ts) in inc.contains.iter().enumerate() {
        for &j in ts {
            through[j as usize].push(b as u32);
        }
    }
    let mut seed = greedy_on(&inc, p, 0, 16);
    let cyclic = cyclic_seed(&inc, p)?;
    if cyclic.len() > seed.len() {
        seed = cyclic;
    }
    let mut s = Bnb {
        inc: &inc,
        through,
        lambda: p.lambda,
        per_block,
        cutoff,
        budget,
        nodes: 0,
        cov: vec![0; inc.t_count],
        excluded: vec![false; inc.blocks.len()],
        chosen: Vec::new(),
        best: seed,
        exhausted: false,
    };
    if !inc.blocks.is_empty() && !s.done() {
        s.add(0);
        s.run();
    }
    let complete = !s.exhausted;
    let mut best = s.best;
    best.sort_unstable();
    Ok(SearchOutcome { value: best.len(), witness: inc.code(p, &best)?, complete, nodes: s.nodes })
}

fn greedy_on(inc: &Incidence, p: &PackingParams, seed: u64, passes: u32) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..inc.blocks.len()).collect();
    for pass in 0..passes.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(pass as u64));
        order.shuffle(&mut rng);
        let mut cov = vec![0u64; inc.t_count];
        let mut chosen = Vec::new();
        for &i in &order {
            if inc.fits(&cov, i, p.lambda) {
                inc.apply(&mut cov, i, true);
                chosen.push(i);
            }
        }
        if chosen.len() > best.len() {
            best = chosen;
        }
    }
    best.sort_unstable();
    best
}

/// Largest union of orbits under v -> v*x in GF(q^n) that is still a packing,
/// found by a small include/exclude search over the orbits.
fn cyclic_seed(inc: &Incidence, p: &PackingParams) -> Result<Vec<usize>> {
    let n = p.n as usize;
    let ext = ExtField::new(p.field(), n);
    let x = if n > 1 { ext.basis(1) } else { ext.basis(0) };
    let rows: Vec<Vec<_>> = (0..n).map(|i| ext.mul(&ext.basis(i), &x)).collect();
    let m = Matrix::from_rows(p.field(), n, &rows)?;
    let pos: HashMap<&Subspace, usize> = inc.blocks.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut orbit_of = vec![usize::MAX; inc.blocks.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..inc.blocks.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let mut orbit = vec![start];
        orbit_of[start] = orbits.len();
        let mut cur = inc.blocks[start].clone();
        loop {
            cur = Subspace::from_matrix(&cur.basis().mul(&m)?);
            let i = pos[&cur];
            if i == start {
                break;
            }
            orbit_of[i] = orbits.len();
            orbit.push(i);
        }
        orbits.push(orbit);
    }
    // orbits that are packings on their own, largest first
    let mut usable: Vec<Vec<usize>> = orbits
        .into_iter()
        .filter(|o| {
            let mut cov = vec![0u64; inc.t_count];
            o.iter().all(|&i| {
                let ok = inc.fits(&cov, i, p.lambda);
                inc.apply(&mut cov, i, true);
                ok
            })
        })
        .collect();
    usable.sort_by_key(|o| std::cmp::Reverse(o.len()));
    let mut search = OrbitSearch { inc, orbits: &usable, lambda: p.lambda, nodes: 0, cov: vec![0; inc.t_count], chosen: Vec::new(), best: Vec::new() };
    search.run(0, usable.iter().map(Vec::len).sum());
    let mut best: Vec<usize> = search.best.iter().flat_map(|&o| usable[o].iter().copied()).collect();
    best.sort_unstable();
    Ok(best)
}

struct OrbitSearch<'a> {
    inc: &'a Incidence,
    orbits: &'a [Vec<usize>],
    lambda: u64,
    nodes: u32,
    cov: Vec<u64>,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl OrbitSearch<'_> {
    const NODE_LIMIT: u32 = 100_000;

    fn size(&self, set: &[usize]) -> usize {
        set.iter().map(|&o| self.orbits[o].len()).sum()
    }

    fn run(&mut self, next: usize, rest: usize) {
        self.nodes += 1;
        let have = self.size(&self.chosen);
        if have > self.size(&self.best) {
            self.best = self.chosen.clone();
        }
        if next == self.orbits.len() || have + rest <= self.size(&self.best) || self.nodes > Self::NODE_LIMIT {
            return;
        }
        let orbit = &self.orbits[next];
        let fits = {
            let mut cov = self.cov.clone();
            orbit.iter().all(|&i| {
                let ok = self.inc.fits(&cov, i, self.lambda);
                self.inc.apply(&mut cov, i, true);
                ok
            })
        };
        if fits {
            for &i in orbit {
                self.inc.apply(&mut self.cov, i, true);
            }
            self.chosen.push(next);
            self.run(next + 1, rest - orbit.len());
            self.chosen.pop();
            for &i in orbit {
                self.inc.apply(&mut self.cov, i, false);
            }
        }
        self.run(next + 1, rest - orbit.len());
    }
}

/// Best of `passes` randomized greedy runs; each run scans the blocks in a
/// seeded random order and keeps every block that still fits, so the result
/// is a maximal packing. Deterministic for a given seed.
pub fn greedy_lower(p: &PackingParams, seed: u64, passes: u32) -> Result<PackingCode> {
    let inc = Incidence::build(p)?;
    let chosen = greedy_on(&inc, p, seed, passes);
    inc.code(p, &chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::verify_packing;

    fn pp(n: u32, k: u32, t: u32, lambda: u64) -> PackingParams {
        PackingParams::new(2, n, k, t, lambda).unwrap()
    }

    #[test]
    fn spread_and_all_blocks() {
        let e = BoundEngine::new();
        let r = exhaustive_max(&pp(4, 2, 1, 1), 1_000_000, &e).unwrap();
        assert_eq!(r.value, 5);
        assert!(r.complete);
        assert!(verify_packing(&r.witness, 1, 1).unwrap().valid);
        let r = exhaustive_max(&pp(4, 2, 2, 1), 1_000_000, &e).unwrap();
        assert_eq!(r.value, 35);
    }

    /// Plain enumeration of all subsets for tiny instances.
    fn brute_force(p: &PackingParams) -> usize {
        let inc = Incidence::build(p).unwrap();
        let n = inc.blocks.len();
        assert!(n <= 20);
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let mut cov = vec![0u64; inc.t_count];
            let mut ok = true;
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    for &j in &inc.contains[i] {
                        cov[j as usize] += 1;
                        ok &= cov[j as usize] <= p.lambda;
                    }
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn matches_brute_force_on_tiny_cases() {
        // no upper-bound shortcut: an engine with only the trivial method
        let weak = BoundEngine::with_parts(crate::bounds::MethodRegistry::select(&["trivial"]).unwrap(), None);
        for (q, n, k, t, lambda) in [(2u32, 3u32, 1u32, 1u32, 1u64), (2, 3, 2, 1, 1), (2, 3, 2, 1, 2), (3, 3, 2, 1, 1), (2, 4, 1, 1, 1), (2, 4, 3, 2, 1), (2, 4, 3, 1, 3)] {
            let p = PackingParams::new(q, n, k, t, lambda).unwrap();
            let r = exhaustive_max(&p, u64::MAX, &weak).unwrap();
            assert!(r.complete);
            assert_eq!(r.value, brute_force(&p), "{p}");
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let weak = BoundEngine::with_parts(crate::bounds::MethodRegistry::select(&["trivial"]).unwrap(), None);
        let r = exhaustive_max(&pp(5, 3, 2, 2), 50, &weak).unwrap();
        assert!(!r.complete);
        assert!(verify_packing(&r.witness, 2, 2).unwrap().valid);
    }

    #[test]
    fn cyclic_seed_reaches_singer_orbit() {
        // one orbit of lines under a Singer cycle puts every point on 3 lines
        let p = pp(5, 2, 1, 3);
        let inc = Incidence::build(&p).unwrap();
        let seed = cyclic_seed(&inc, &p).unwrap();
        assert_eq!(seed.len(), 31);
        assert!(verify_packing(&inc.code(&p, &seed).unwrap(), 1, 3).unwrap().valid);
        let r = exhaustive_max(&p, 1000, &BoundEngine::new()).unwrap();
        assert_eq!((r.value, r.complete), (31, true));
    }

    #[test]
    fn greedy_is_valid_maximal_and_reproducible() {
        let p = pp(5, 2, 1, 2);
        let a = greedy_lower(&p, 11, 3).unwrap();
        assert_eq!(a, greedy_lower(&p, 11, 3).unwrap());
        assert!(verify_packing(&a, 1, 2).unwrap().valid);
        let inc = Incidence::build(&p).unwrap();
        let mut cov = vec![0u64; inc.t_count];
        let chosen: Vec<usize> = (0..inc.blocks.len()).filter(|&i| a.blocks().contains(&inc.blocks[i])).collect();
        for &i in &chosen {
            inc.apply(&mut cov, i, true);
        }
        for i in 0..inc.blocks.len() {
            if !chosen.contains(&i) {
                assert!(!inc.fits(&cov, i, 2), "block {i} could still be added");
            }
        }
    }
}
