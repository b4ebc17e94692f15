//! Bound tables for A_q(n,k,t;lambda) over 2 <= k <= n-1, 1 <= t <= k.

use crate::bounds::{BoundEngine, KnownValues, Side};
use crate::error::Result;
use crate::params::PackingParams;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub k: u32,
    pub t: u32,
    pub lower: u128,
    pub upper: u128,
    /// Methods attaining the lower bound.
    pub lower_by: Vec<String>,
    /// Methods attaining the upper bound.
    pub upper_by: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub q: u32,
    pub n: u32,
    pub lambda: u64,
    pub cells: Vec<TableCell>,
}

pub fn generate(engine: &BoundEngine, q: u32, n: u32, lambda: u64) -> Result<Table> {
    let coords: Vec<(u32, u32)> = (2..n).flat_map(|k| (1..=k).map(move |t| (k, t))).collect();
    let cells = coords
        .par_iter()
        .map(|&(k, t)| -> Result<TableCell> {
            let r = engine.best_upper(&PackingParams::new(q, n, k, t, lambda)?)?;
            let by = |side: Side, v: u128| -> Vec<String> {
                r.provenance.iter().filter(|e| e.side == side && e.value == v).map(|e| e.method.clone()).collect()
            };
            Ok(TableCell { k, t, lower: r.lower, upper: r.upper, lower_by: by(Side::Lower, r.lower), upper_by: by(Side::Upper, r.upper) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { q, n, lambda, cells })
}

impl Table {
    pub fn cell(&self, k: u32, t: u32) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.k == k && c.t == t)
    }

    /// Text grid with rows k and columns t. Each cell shows its interval and
    /// a tag per side naming the methods behind it; the legend follows.
    pub fn render(&self) -> String {
        let names: BTreeSet<&str> = self
            .cells
            .iter()
            .flat_map(|c| c.lower_by.iter().chain(&c.upper_by).map(String::as_str))
            .collect();
        let names: Vec<&str> = names.into_iter().collect();
        let tag = |list: &[String]| -> String {
            list.iter().map(|m| (b'a' + names.iter().position(|n| n == m).unwrap() as u8) as char).collect()
        };
        let text = |c: &TableCell| {
            let value = if c.lower == c.upper { c.lower.to_string() } else { format!("{}-{}", c.lower, c.upper) };
            format!("{value} [{}/{}]", tag(&c.lower_by), tag(&c.upper_by))
        };
        let width = self.cells.iter().map(|c| text(c).len()).max().unwrap_or(1).max(3);
        let mut s = format!("Bounds for A_{}({},k,t;{})\n", self.q, self.n, self.lambda);
        s.push_str(&format!("{:>4} |", "k\\t"));
        for t in 1..self.n.saturating_sub(1) {
            s.push_str(&format!(" {t:>width$}"));
        }
        s.push('\n');
        for k in 2..self.n {
            s.push_str(&format!("{k:>4} |"));
            for t in 1..=k {
                let c = self.cell(k, t).expect("generated");
                s.push_str(&format!(" {:>width$}", text(c)));
            }
            s.push('\n');
        }
        s.push_str("\n[lower/upper] sources:\n");
        for (i, m) in names.iter().enumerate() {
            s.push_str(&format!("  {} {m}\n", (b'a' + i as u8) as char));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellComparison {
    pub k: u32,
    pub t: u32,
    pub lower: u128,
    pub upper: u128,
    pub fixture_lower: u128,
    pub fixture_upper: u128,
    /// The intervals intersect: our upper is at least the fixture's lower and
    /// our lower at most the fixture's upper.
    pub sound: bool,
    pub same_interval: bool,
}

/// Registry tag of the printed table for ambient dimension n.
pub fn fixture_source(n: u32) -> String {
    format!("table-n{n}")
}

/// Compares every cell against the fixture entries tagged for this table.
/// Cells without a fixture are skipped.
pub fn compare(table: &Table, fixtures: &KnownValues) -> Vec<CellComparison> {
    let source = fixture_source(table.n);
    table
        .cells
        .iter()
        .filter_map(|c| {
            let p = PackingParams::new(table.q, table.n, c.k, c.t, table.lambda).ok()?;
            let f = fixtures.get(&p).filter(|e| e.source == source)?;
            Some(CellComparison {
                k: c.k,
                t: c.t,
                lower: c.lower,
                upper: c.upper,
                fixture_lower: f.lower,
                fixture_upper: f.upper,
                sound: c.upper >= f.lower && c.lower <= f.upper,
                same_interval: c.lower == f.lower && c.upper == f.upper,
            })
        })
        .collect()
}
