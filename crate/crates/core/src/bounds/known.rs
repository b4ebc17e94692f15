use crate::error::{Error, Result};
use crate::params::PackingParams;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::OnceLock;

const BUNDLED: &str = include_str!("../../data/known_values.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnownEntry {
    pub params: PackingParams,
    pub lower: u128,
    pub upper: u128,
    pub source: String,
}

/// Registry of exact values and published bounds, one record per line:
/// `q n k t lambda lower upper source-tag`. Blank lines and `#` comments
/// are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnownValues {
    entries: BTreeMap<PackingParams, KnownEntry>,
}

impl KnownValues {
    pub fn parse(text: &str) -> Result<KnownValues> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 8 {
                return Err(err(format!("expected 8 fields, found {}", fields.len())));
            }
            let num = |j: usize| -> Result<u128> {
                fields[j].parse::<u128>().map_err(|e| err(format!("field {}: {e}", j + 1)))
            };
            let small = |j: usize| -> Result<u32> {
                u32::try_from(num(j)?).map_err(|_| err(format!("field {} out of range", j + 1)))
            };
            let lambda = u64::try_from(num(4)?).map_err(|_| err("lambda out of range".into()))?;
            let params = PackingParams::new(small(0)?, small(1)?, small(2)?, small(3)?, lambda)
                .map_err(|e| err(e.to_string()))?;
            let (lower, upper) = (num(5)?, num(6)?);
            if lower > upper {
                return Err(err(format!("lower {lower} exceeds upper {upper}")));
            }
            let entry = KnownEntry { params, lower, upper, source: fields[7].to_string() };
            if entries.insert(params, entry).is_some() {
                return Err(err(format!("duplicate entry for {params}")));
            }
        }
        Ok(KnownValues { entries })
    }

    /// The registry shipped with the library.
    pub fn bundled() -> &'static KnownValues {
        static REG: OnceLock<KnownValues> = OnceLock::new();
        REG.get_or_init(|| KnownValues::parse(BUNDLED).expect("bundled registry parses"))
    }

    pub fn get(&self, p: &PackingParams) -> Option<&KnownEntry> {
        self.entries.get(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &KnownEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries whose source tag is in `sources`.
    pub fn with_sources(&self, sources: &[&str]) -> KnownValues {
        let entries = self
            .entries
            .iter()
            .filter(|(_, e)| sources.contains(&e.source.as_str()))
            .map(|(k, e)| (*k, e.clone()))
            .collect();
        KnownValues { entries }
    }

    pub fn insert(&mut self, entry: KnownEntry) {
        self.entries.insert(entry.params, entry);
    }
}
