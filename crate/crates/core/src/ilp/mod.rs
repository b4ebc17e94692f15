//! The integer program whose optimum is A_q(n,k,t;lambda): one binary
//! variable per k-subspace, one row per t-subspace, optionally strengthened by
//! one row per i-subspace for 1 <= i < t.

mod formats;

pub use formats::{parse_lp, parse_mps, writer, writer_names, IlpWriter, LinearModel, LpWriter, MpsWriter, Sense};

use crate::bounds::{BoundEngine, BoundOracle};
use crate::constructions::PackingCode;
use crate::error::{Error, Result};
use crate::gf::{enumerate_subspaces, Subspace};
use crate::params::PackingParams;
use crate::qcalc::gaussian_binomial_u128;
use rayon::prelude::*;
use std::collections::HashMap;

pub const DEFAULT_SIZE_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Blocks through a t-subspace.
    Coverage,
    /// Blocks through an i-subspace, bounded by A_q(n-i,k-i,t-i;lambda).
    Strengthen { i: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub kind: RowKind,
    /// Variable indices with coefficient 1, increasing.
    pub vars: Vec<u32>,
    pub rhs: u128,
}

#[derive(Debug, Clone)]
pub struct IlpModel {
    pub params: PackingParams,
    /// Variable `x{i}` is block `i` in enumeration order.
    pub blocks: Vec<Subspace>,
    pub rows: Vec<Row>,
}

/// Row and column counts a model would have, without building it.
pub fn model_size(p: &PackingParams, strengthen: bool) -> Result<(u128, u128)> {
    let vars = gaussian_binomial_u128(p.n, p.k, p.q)?;
    let mut rows = gaussian_binomial_u128(p.n, p.t, p.q)?;
    if strengthen {
        for i in 1..p.t {
            rows += gaussian_binomial_u128(p.n, i, p.q)?;
        }
    }
    Ok((vars, rows))
}

/// Blocks through each i-subspace, indexed by the i-subspace's enumeration position.
fn rows_through(p: &PackingParams, blocks: &[Subspace], i: u32) -> Result<Vec<Vec<u32>>> {
    let field = p.field();
    let index: HashMap<Subspace, u32> =
        enumerate_subspaces(field, p.n as usize, i as usize)?.enumerate().map(|(j, s)| (s, j as u32)).collect();
    let per_block: Vec<Vec<u32>> = blocks
        .par_iter()
        .map(|b| -> Result<Vec<u32>> { Ok(b.subspaces(i as usize)?.map(|s| index[&s]).collect()) })
        .collect::<Result<_>>()?;
    let mut rows = vec![Vec::new(); index.len()];
    for (v, subs) in per_block.iter().enumerate() {
        for &s in subs {
            rows[s as usize].push(v as u32);
        }
    }
    Ok(rows)
}

/// Builds the model. Strengthening rows take their right-hand sides from
/// `engine`. Fails with a size-cap error when variables or rows exceed `cap`.
pub fn build_model(p: &PackingParams, strengthen: bool, engine: &BoundEngine, cap: u128) -> Result<IlpModel> {
    let (vars, rows) = model_size(p, strengthen)?;
    if vars > cap {
        return Err(Error::SizeCap { what: "ILP variables", count: vars, cap });
    }
    if rows > cap {
        return Err(Error::SizeCap { what: "ILP rows", count: rows, cap });
    }
    let blocks: Vec<Subspace> = enumerate_subspaces(p.field(), p.n as usize, p.k as usize)?.collect();
    let mut out = Vec::new();
    for (j, vars) in rows_through(p, &blocks, p.t)?.into_iter().enumerate() {
        out.push(Row { name: format!("c{j}"), kind: RowKind::Coverage, vars, rhs: p.lambda as u128 });
    }
    if strengthen {
        let mut s = 0;
        for i in 1..p.t {
            let rhs = engine.upper(&p.with(p.n - i, p.k - i, p.t - i))?;
            for vars in rows_through(p, &blocks, i)? {
                out.push(Row { name: format!("s{s}"), kind: RowKind::Strengthen { i }, vars, rhs });
                s += 1;
            }
        }
    }
    Ok(IlpModel { params: *p, blocks, rows: out })
}

impl IlpModel {
    pub fn variable_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn coverage_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.kind == RowKind::Coverage).count()
    }

    /// Companion index: one line `x{i} <basis rows joined by commas>` per variable.
    pub fn index_text(&self) -> String {
        let mut s = String::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let text = b.to_text();
            let enc: Vec<&str> = text.lines().map(str::trim).collect();
            s.push_str(&format!("x{i} {}\n", enc.join(",")));
        }
        s
    }

    /// Variable indices of the blocks of `code`.
    pub fn assignment_of(&self, code: &PackingCode) -> Result<Vec<usize>> {
        let pos: HashMap<&Subspace, usize> = self.blocks.iter().enumerate().map(|(i, b)| (b, i)).collect();
        code.blocks()
            .iter()
            .map(|b| pos.get(b).copied().ok_or_else(|| Error::InvalidParams("block is not a model variable".into())))
            .collect()
    }

    /// Names of the rows violated when exactly the variables in `chosen` are 1.
    pub fn violated_rows(&self, chosen: &[usize]) -> Vec<&str> {
        let mut on = vec![false; self.blocks.len()];
        for &i in chosen {
            on[i] = true;
        }
        self.rows
            .iter()
            .filter(|r| r.vars.iter().filter(|&&v| on[v as usize]).count() as u128 > r.rhs)
            .map(|r| r.name.as_str())
            .collect()
    }

    /// The model in the normalized form both parsers produce.
    pub fn to_linear(&self) -> LinearModel {
        let var = |i: u32| format!("x{i}");
        LinearModel {
            sense: Sense::Maximize,
            objective: (0..self.blocks.len() as u32).map(|i| (var(i), 1)).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| (r.name.clone(), (r.vars.iter().map(|&v| (var(v), 1)).collect(), r.rhs as i128)))
                .collect(),
            binaries: (0..self.blocks.len() as u32).map(var).collect(),
        }
    }
}
