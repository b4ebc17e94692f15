use super::IlpModel;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// A 0/1 program with `<=` rows, in a form where two emissions of the same
/// model compare equal regardless of file format or term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearModel {
    pub sense: Sense,
    pub objective: BTreeMap<String, i64>,
    /// Row name to (coefficients, right-hand side).
    pub rows: BTreeMap<String, (BTreeMap<String, i64>, i128)>,
    pub binaries: BTreeSet<String>,
}

pub trait IlpWriter: Send + Sync {
    fn name(&self) -> &'static str;
    fn extension(&self) -> &'static str;
    fn write(&self, model: &IlpModel) -> Result<String>;
    fn parse(&self, text: &str) -> Result<LinearModel>;
}

pub struct LpWriter;
pub struct MpsWriter;

static WRITERS: [&dyn IlpWriter; 2] = [&LpWriter, &MpsWriter];

pub fn writer(name: &str) -> Result<&'static dyn IlpWriter> {
    WRITERS
        .iter()
        .copied()
        .find(|w| w.name() == name)
        .ok_or_else(|| Error::UnknownName { kind: "ILP format", name: name.to_string() })
}

pub fn writer_names() -> Vec<&'static str> {
    WRITERS.iter().map(|w| w.name()).collect()
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

const TERMS_PER_LINE: usize = 10;

fn push_sum(out: &mut String, vars: impl Iterator<Item = String>) {
    for (i, v) in vars.enumerate() {
        if i > 0 {
            out.push_str(if i % TERMS_PER_LINE == 0 { "\n   + " } else { " + " });
        }
        out.push_str(&v);
    }
}

impl IlpWriter for LpWriter {
    fn name(&self) -> &'static str {
        "lp"
    }

    fn extension(&self) -> &'static str {
        "lp"
    }

    fn write(&self, m: &IlpModel) -> Result<String> {
        let nv = m.blocks.len();
        let mut s = format!("\\ {}\nMaximize\n obj: ", m.params);
        push_sum(&mut s, (0..nv).map(|i| format!("x{i}")));
        s.push_str("\nSubject To\n");
        for r in &m.rows {
            s.push_str(&format!(" {}: ", r.name));
            if r.vars.is_empty() {
                s.push_str("0 x0");
            }
            push_sum(&mut s, r.vars.iter().map(|v| format!("x{v}")));
            s.push_str(&format!(" <= {}\n", r.rhs));
        }
        s.push_str("Binary\n");
        for chunk in (0..nv).collect::<Vec<_>>().chunks(TERMS_PER_LINE) {
            let names: Vec<String> = chunk.iter().map(|i| format!("x{i}")).collect();
            s.push_str(&format!(" {}\n", names.join(" ")));
        }
        s.push_str("End\n");
        Ok(s)
    }

    fn parse(&self, text: &str) -> Result<LinearModel> {
        parse_lp(text)
    }
}

#[derive(PartialEq)]
enum LpSection {
    Start,
    Objective,
    Constraints,
    Bounds,
    Binary,
    End,
}

/// Linear expression accumulated token by token.
#[derive(Default)]
struct Expr {
    terms: BTreeMap<String, i64>,
    sign: i64,
    coef: Option<i64>,
}

impl Expr {
    fn new() -> Expr {
        Expr { sign: 1, ..Default::default() }
    }

    fn token(&mut self, tok: &str, line: usize) -> Result<()> {
        match tok {
            "+" => self.sign = 1,
            "-" => self.sign = -self.sign,
            _ => {
                if let Ok(c) = tok.parse::<i64>() {
                    self.coef = Some(c);
                } else {
                    let (neg, name) = match tok.strip_prefix('-') {
                        Some(rest) => (-1, rest),
                        None => (1, tok.strip_prefix('+').unwrap_or(tok)),
                    };
                    if name.is_empty() || !name.chars().next().is_some_and(char::is_alphabetic) {
                        return Err(perr(line, format!("unexpected token '{tok}'")));
                    }
                    *self.terms.entry(name.to_string()).or_insert(0) += neg * self.sign * self.coef.unwrap_or(1);
                    self.sign = 1;
                    self.coef = None;
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> BTreeMap<String, i64> {
        self.terms.into_iter().filter(|(_, c)| *c != 0).collect()
    }
}

/// Reads the subset of CPLEX LP this crate writes: one objective, `<=` rows,
/// a Binary section. Term and row order are irrelevant.
pub fn parse_lp(text: &str) -> Result<LinearModel> {
    let mut sense = None;
    let mut section = LpSection::Start;
    let mut objective = Expr::new();
    let mut rows = BTreeMap::new();
    let mut binaries = BTreeSet::new();
    let mut current: Option<(String, Expr)> = None;
    let mut pending_rhs: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('\\').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let lower = body.to_ascii_lowercase();
        let keyword = match lower.as_str() {
            "maximize" | "maximise" | "max" => Some((LpSection::Objective, Some(Sense::Maximize))),
            "minimize" | "minimise" | "min" => Some((LpSection::Objective, Some(Sense::Minimize))),
            "subject to" | "such that" | "st" | "s.t." => Some((LpSection::Constraints, None)),
            "bounds" => Some((LpSection::Bounds, None)),
            "binary" | "binaries" | "bin" => Some((LpSection::Binary, None)),
            "end" => Some((LpSection::End, None)),
            _ => None,
        };
        if let Some((next, s)) = keyword {
            if current.is_some() {
                return Err(perr(line, "constraint without right-hand side"));
            }
            if s.is_some() {
                sense = s;
            }
            section = next;
            continue;
        }
        match section {
            LpSection::Start => return Err(perr(line, "expected an objective sense")),
            LpSection::End => return Err(perr(line, "text after End")),
            LpSection::Bounds => {}
            LpSection::Binary => binaries.extend(body.split_whitespace().map(str::to_string)),
            LpSection::Objective => {
                for tok in body.split_whitespace() {
                    if tok.ends_with(':') {
                        continue;
                    }
                    objective.token(tok, line)?;
                }
            }
            LpSection::Constraints => {
                for tok in body.split_whitespace() {
                    if let Some(name) = pending_rhs.take() {
                        let rhs: i128 = tok.parse().map_err(|_| perr(line, format!("bad right-hand side '{tok}'")))?;
                        let (_, expr) = current.take().expect("row in progress");
                        if rows.insert(name.clone(), (expr.finish(), rhs)).is_some() {
                            return Err(perr(line, format!("duplicate row '{name}'")));
                        }
                        continue;
                    }
                    if let Some(name) = tok.strip_suffix(':') {
                        if current.is_some() {
                            return Err(perr(line, "constraint without right-hand side"));
                        }
                        current = Some((name.to_string(), Expr::new()));
                        continue;
                    }
                    let Some((name, expr)) = current.as_mut() else {
                        return Err(perr(line, "unnamed constraint"));
                    };
                    match tok {
                        "<=" | "=<" => pending_rhs = Some(name.clone()),
                        ">=" | "=>" | "=" | "<" | ">" => {
                            return Err(perr(line, format!("only <= rows are supported, found '{tok}'")))
                        }
                        _ => expr.token(tok, line)?,
                    }
                }
            }
        }
    }
    if current.is_some() {
        return Err(perr(text.lines().count(), "constraint without right-hand side"));
    }
    let sense = sense.ok_or_else(|| perr(0, "no objective"))?;
    Ok(LinearModel { sense, objective: objective.finish(), rows, binaries })
}

fn mps_line(fields: [&str; 6]) -> String {
    let [a, b, c, d, e, f] = fields;
    format!(" {a:<2} {b:<8}  {c:<8}  {d:<12}   {e:<8}  {f:<12}").trim_end().to_string() + "\n"
}

impl IlpWriter for MpsWriter {
    fn name(&self) -> &'static str {
        "mps"
    }

    fn extension(&self) -> &'static str {
        "mps"
    }

    fn write(&self, m: &IlpModel) -> Result<String> {
        let nv = m.blocks.len();
        let too_long = |s: &str| s.len() > 8;
        if too_long(&format!("x{}", nv.saturating_sub(1))) || m.rows.iter().any(|r| too_long(&r.name)) {
            return Err(Error::InvalidParams("names exceed the 8 characters of fixed MPS".into()));
        }
        let mut cols: Vec<Vec<&str>> = vec![Vec::new(); nv];
        for r in &m.rows {
            for &v in &r.vars {
                cols[v as usize].push(&r.name);
            }
        }
        let p = m.params;
        let mut s = format!("* {p}\nNAME          A{}_{}_{}_{}_{}\nOBJSENSE\n    MAX\nROWS\n N  obj\n", p.q, p.n, p.k, p.t, p.lambda);
        for r in &m.rows {
            s.push_str(&format!(" L  {}\n", r.name));
        }
        s.push_str("COLUMNS\n");
        s.push_str(&mps_line(["", "MARKER", "'MARKER'", "", "'INTORG'", ""]));
        for (i, rows) in cols.iter().enumerate() {
            let x = format!("x{i}");
            let entries: Vec<&str> = std::iter::once("obj").chain(rows.iter().copied()).collect();
            for pair in entries.chunks(2) {
                let second = pair.get(1).copied().unwrap_or("");
                s.push_str(&mps_line(["", &x, pair[0], "1", second, if second.is_empty() { "" } else { "1" }]));
            }
        }
        s.push_str(&mps_line(["", "MARKER", "'MARKER'", "", "'INTEND'", ""]));
        s.push_str("RHS\n");
        for r in &m.rows {
            s.push_str(&mps_line(["", "RHS", &r.name, &r.rhs.to_string(), "", ""]));
        }
        s.push_str("BOUNDS\n");
        for i in 0..nv {
            s.push_str(&mps_line(["UP", "BND", &format!("x{i}"), "1", "", ""]));
        }
        s.push_str("ENDATA\n");
        Ok(s)
    }

    fn parse(&self, text: &str) -> Result<LinearModel> {
        parse_mps(text)
    }
}

/// Reads MPS (fixed or free spacing, since names never contain blanks).
/// Integer columns with upper bound 1, and BV columns, count as binary.
pub fn parse_mps(text: &str) -> Result<LinearModel> {
    let mut section = String::new();
    let mut sense = Sense::Minimize;
    let mut obj_row: Option<String> = None;
    let mut row_kind: BTreeMap<String, char> = BTreeMap::new();
    let mut objective = BTreeMap::new();
    let mut rows: BTreeMap<String, (BTreeMap<String, i64>, i128)> = BTreeMap::new();
    let mut integer = BTreeSet::new();
    let mut upper_one = BTreeSet::new();
    let mut binaries = BTreeSet::new();
    let mut in_int = false;
    let mut ended = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.starts_with('*') || raw.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = f[0].to_ascii_uppercase();
            match section.as_str() {
                "OBJSENSE" if f.len() > 1 => sense = mps_sense(f[1], line)?,
                "ENDATA" => ended = true,
                "NAME" | "OBJSENSE" | "ROWS" | "COLUMNS" | "RHS" | "BOUNDS" => {}
                other => return Err(perr(line, format!("unsupported section {other}"))),
            }
            continue;
        }
        let number = |s: &str| s.parse::<f64>().map_err(|_| perr(line, format!("bad number '{s}'")));
        let int = |v: f64| -> Result<i64> {
            if v.fract() == 0.0 && v.abs() < 9e15 {
                Ok(v as i64)
            } else {
                Err(perr(line, format!("non-integer value {v}")))
            }
        };
        match section.as_str() {
            "OBJSENSE" => sense = mps_sense(f[0], line)?,
            "ROWS" => {
                let [kind, name] = f[..] else { return Err(perr(line, "expected row type and name")) };
                match kind {
                    "N" if obj_row.is_none() => obj_row = Some(name.to_string()),
                    "N" => {}
                    "L" => {
                        rows.insert(name.to_string(), (BTreeMap::new(), 0));
                    }
                    _ => return Err(perr(line, format!("only L rows are supported, found {kind}"))),
                }
                row_kind.insert(name.to_string(), kind.chars().next().unwrap_or('?'));
            }
            "COLUMNS" => {
                if f.get(1) == Some(&"'MARKER'") {
                    match f.get(2) {
                        Some(&"'INTORG'") => in_int = true,
                        Some(&"'INTEND'") => in_int = false,
                        _ => return Err(perr(line, "bad marker")),
                    }
                    continue;
                }
                if f.len() != 3 && f.len() != 5 {
                    return Err(perr(line, "expected column, row, value [row, value]"));
                }
                let col = f[0].to_string();
                if in_int {
                    integer.insert(col.clone());
                }
                for pair in f[1..].chunks(2) {
                    let v = int(number(pair[1])?)?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        *objective.entry(col.clone()).or_insert(0) += v;
                    } else if let Some((coefs, _)) = rows.get_mut(pair[0]) {
                        *coefs.entry(col.clone()).or_insert(0) += v;
                    } else if row_kind.get(pair[0]) != Some(&'N') {
                        return Err(perr(line, format!("unknown row '{}'", pair[0])));
                    }
                }
            }
            "RHS" => {
                for pair in f[1..].chunks(2) {
                    if pair.len() < 2 {
                        return Err(perr(line, "expected row and value"));
                    }
                    let v = int(number(pair[1])?)?;
                    match rows.get_mut(pair[0]) {
                        Some(r) => r.1 = v as i128,
                        None if row_kind.contains_key(pair[0]) => {}
                        None => return Err(perr(line, format!("unknown row '{}'", pair[0]))),
                    }
                }
            }
            "BOUNDS" => match f[..] {
                ["BV", _, col] | ["BV", _, col, _] => {
                    binaries.insert(col.to_string());
                }
                ["UP", _, col, v] if number(v)? == 1.0 => {
                    upper_one.insert(col.to_string());
                }
                _ => {}
            },
            _ => return Err(perr(line, "data outside a section")),
        }
    }
    if !ended {
        return Err(perr(text.lines().count(), "missing ENDATA"));
    }
    binaries.extend(integer.intersection(&upper_one).cloned());
    for (coefs, _) in rows.values_mut() {
        coefs.retain(|_, c| *c != 0);
    }
    objective.retain(|_, c| *c != 0);
    Ok(LinearModel { sense, objective, rows, binaries })
}

fn mps_sense(s: &str, line: usize) -> Result<Sense> {
    match s.to_ascii_uppercase().as_str() {
        "MAX" | "MAXIMIZE" => Ok(Sense::Maximize),
        "MIN" | "MINIMIZE" => Ok(Sense::Minimize),
        other => Err(perr(line, format!("unknown objective sense {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundEngine;
    use crate::ilp::{build_model, DEFAULT_SIZE_CAP};
    use crate::params::PackingParams;

    fn model(n: u32, k: u32, t: u32, lambda: u64, strengthen: bool) -> IlpModel {
        let p = PackingParams::new(2, n, k, t, lambda).unwrap();
        build_model(&p, strengthen, &BoundEngine::new(), DEFAULT_SIZE_CAP).unwrap()
    }

    #[test]
    fn lp_skeleton() {
        let m = model(4, 2, 1, 1, false);
        let text = LpWriter.write(&m).unwrap();
        assert!(text.contains("Maximize\n"));
        assert!(text.contains("Subject To\n"));
        assert!(text.contains("Binary\n"));
        assert_eq!(text.matches("<= 1\n").count(), 15);
        assert!(text.lines().all(|l| l.len() < 200));
    }

    #[test]
    fn both_formats_round_trip() {
        for m in [model(4, 2, 1, 1, false), model(5, 3, 2, 2, true), model(4, 2, 2, 1, false)] {
            let want = m.to_linear();
            for w in WRITERS {
                let text = w.write(&m).unwrap();
                assert_eq!(w.parse(&text).unwrap(), want, "{}", w.name());
            }
        }
    }

    #[test]
    fn mps_columns_are_fixed_width() {
        let text = MpsWriter.write(&model(3, 1, 1, 1, false)).unwrap();
        assert!(text.contains("OBJSENSE\n    MAX\n"));
        let line = text.lines().find(|l| l.starts_with("    x0 ")).unwrap();
        assert_eq!(&line[4..6], "x0");
        assert_eq!(&line[14..17], "obj");
        assert_eq!(&line[24..25], "1");
        assert_eq!(&line[39..41], "c0");
    }

    #[test]
    fn lp_parser_accepts_spacing_and_coefficients() {
        let text = "\\ comment\nMAXIMIZE\n obj: 2 x1 + x2\nsubject to\n r: x1 + 3 x2\n  - x3 <= 4\nBOUNDS\nBINARIES\n x1 x2 x3\nEND\n";
        let m = parse_lp(text).unwrap();
        assert_eq!(m.objective["x1"], 2);
        assert_eq!(m.rows["r"].0["x3"], -1);
        assert_eq!(m.rows["r"].0["x2"], 3);
        assert_eq!(m.rows["r"].1, 4);
        assert!(parse_lp("Maximize\n o: x\nSubject To\n r: x >= 1\nEnd\n").is_err());
        assert!(matches!(parse_lp("Maximize\n o: x\nSubject To\n r: x +\nEnd\n"), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn unknown_writer() {
        assert_eq!(writer_names(), vec!["lp", "mps"]);
        assert!(writer("mps").is_ok());
        assert!(matches!(writer("gms"), Err(Error::UnknownName { .. })));
    }
}
