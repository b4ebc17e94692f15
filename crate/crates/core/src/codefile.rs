//! Plain-text code files:
//!
//! ```text
//! # GF(4) = GF(2)[x]/(x^2+x+1)
//! 4 4 2 2
//!
//! 1000
//! 0100
//!
//! 0010
//! 0001
//! ```
//!
//! `#` lines are comments. The header is `q n k count`; each block is k rows of
//! n base-q digits, blocks separated by blank lines.

use crate::constructions::PackingCode;
use crate::error::{Error, Result};
use crate::gf::{Field, Subspace};

/// Digits are 0-9 then a-z.
pub const MAX_TEXT_ORDER: u32 = 36;

pub fn write_code(code: &PackingCode) -> Result<String> {
    let f = code.field();
    if f.order() > MAX_TEXT_ORDER {
        return Err(Error::InvalidParams(format!("GF({}) has no single-digit text encoding", f.order())));
    }
    let mut s = format!("# {}\n{} {} {} {}\n", f.describe(), f.order(), code.ambient(), code.block_dim(), code.len());
    for b in code.blocks() {
        s.push('\n');
        s.push_str(&b.to_text());
    }
    Ok(s)
}

fn header_field(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("header is missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what} '{tok}'") })
}

pub fn read_code(text: &str) -> Result<PackingCode> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.starts_with('#'));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::Parse { line: 1, msg: "missing header".into() })?;
    let mut toks = header.split_whitespace();
    let q = header_field(hline, toks.next(), "q")?;
    let n = header_field(hline, toks.next(), "n")?;
    let k = header_field(hline, toks.next(), "k")?;
    let count = header_field(hline, toks.next(), "block count")?;
    if toks.next().is_some() {
        return Err(Error::Parse { line: hline, msg: "header has more than four fields".into() });
    }
    let field = Field::get(u32::try_from(q).map_err(|_| Error::InvalidField(u32::MAX))?)?;
    if k > n {
        return Err(Error::Parse { line: hline, msg: format!("block dimension {k} exceeds ambient {n}") });
    }

    // group non-blank lines into blocks, remembering where each starts
    let mut groups: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut open = false;
    for (no, l) in lines {
        if l.is_empty() {
            open = false;
        } else if open {
            groups.last_mut().expect("open group").1.push(l);
        } else {
            groups.push((no, vec![l]));
            open = true;
        }
    }
    if k == 0 {
        if !groups.is_empty() {
            return Err(Error::Parse { line: groups[0].0, msg: "0-dimensional blocks have no rows".into() });
        }
        if count > 1 {
            return Err(Error::Parse { line: hline, msg: "only one 0-dimensional block exists".into() });
        }
        return PackingCode::new(field, n, 0, vec![Subspace::zero(field, n); count]);
    }
    if groups.len() != count {
        return Err(Error::Parse { line: hline, msg: format!("header announces {count} blocks, file has {}", groups.len()) });
    }
    let mut blocks = Vec::with_capacity(count);
    for (start, rows) in &groups {
        if rows.len() != k {
            return Err(Error::Parse { line: *start, msg: format!("block has {} rows, expected {k}", rows.len()) });
        }
        let b = Subspace::parse_rows(field, n, rows).map_err(|e| match e {
            Error::Parse { line, msg } => Error::Parse { line: start + line - 1, msg },
            Error::InvalidParams(msg) => Error::Parse { line: *start, msg },
            other => other,
        })?;
        blocks.push(b);
    }
    PackingCode::new(field, n, k, blocks).map_err(|e| match e {
        Error::DuplicateBlock(i) => Error::Parse { line: groups[i].0, msg: format!("block {} repeats an earlier block", i + 1) },
        other => other,
    })
}
