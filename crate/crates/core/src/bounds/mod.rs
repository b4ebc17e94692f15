//! Upper-bound engine for A_q(n,k,t;lambda): the minimum over registered
//! methods, with memoized recursion on reduced parameters.

mod formulas;
mod known;
mod methods;

pub use formulas::{
    combination_bound, inequality_bound_cap, johnson_classic, johnson_improved, optimal_m, packing_bound,
    quadratic_bound, InequalityInputs,
};
pub use known::{KnownEntry, KnownValues};
pub use methods::{MethodRegistry, UpperBoundMethod};

use crate::constructions::packing_lower;
use crate::error::{Error, Result};
use crate::params::PackingParams;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::RwLock;

/// Source of upper bounds for the reduced parameters a recursive bound needs.
pub trait BoundOracle {
    fn upper(&self, p: &PackingParams) -> Result<u128>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub method: String,
    pub side: Side,
    pub value: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    pub params: PackingParams,
    pub lower: u128,
    pub upper: u128,
    pub provenance: Vec<Evidence>,
}

impl BoundResult {
    /// Value reported by `method` on the given side.
    pub fn value_of(&self, method: &str, side: Side) -> Option<u128> {
        self.provenance.iter().find(|e| e.method == method && e.side == side).map(|e| e.value)
    }

    /// Upper-bound methods attaining the final upper bound.
    pub fn upper_attained_by(&self) -> Vec<&str> {
        self.provenance
            .iter()
            .filter(|e| e.side == Side::Upper && e.value == self.upper)
            .map(|e| e.method.as_str())
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

pub struct BoundEngine {
    methods: MethodRegistry,
    known: Option<KnownValues>,
    memo: RwLock<HashMap<PackingParams, u128>>,
}

impl Default for BoundEngine {
    fn default() -> Self {
        BoundEngine::new()
    }
}

impl BoundEngine {
    /// All standard methods plus the bundled registry of known values.
    pub fn new() -> BoundEngine {
        BoundEngine::with_parts(MethodRegistry::standard(), Some(KnownValues::bundled().clone()))
    }

    /// All standard methods, no registry: every number is derived here.
    pub fn without_registry() -> BoundEngine {
        BoundEngine::with_parts(MethodRegistry::standard(), None)
    }

    pub fn with_parts(methods: MethodRegistry, known: Option<KnownValues>) -> BoundEngine {
        BoundEngine { methods, known, memo: RwLock::new(HashMap::new()) }
    }

    pub fn methods(&self) -> &MethodRegistry {
        &self.methods
    }

    pub fn known(&self) -> Option<&KnownValues> {
        self.known.as_ref()
    }

    /// Lower and upper bound with per-method provenance.
    pub fn best_upper(&self, p: &PackingParams) -> Result<BoundResult> {
        let provenance = self.evidence(p, true)?;
        let upper = provenance.iter().filter(|e| e.side == Side::Upper).map(|e| e.value).min();
        let lower = provenance.iter().filter(|e| e.side == Side::Lower).map(|e| e.value).max();
        let (lower, upper) = (lower.unwrap_or(0), upper.expect("trivial cap always present"));
        if lower > upper {
            return Err(Error::Inconsistent { params: p.to_string(), lower, upper });
        }
        self.memo.write().unwrap().insert(*p, upper);
        Ok(BoundResult { params: *p, lower, upper, provenance })
    }

    pub fn lower(&self, p: &PackingParams) -> Result<u128> {
        Ok(self.best_upper(p)?.lower)
    }

    fn evidence(&self, p: &PackingParams, with_lower: bool) -> Result<Vec<Evidence>> {
        let mut out = Vec::new();
        let mut push = |method: &str, side: Side, value: u128| {
            out.push(Evidence { method: method.to_string(), side, value });
        };
        let all = p.block_count()?;
        if p.t == 0 {
            let v = (p.lambda as u128).min(all);
            push("exact", Side::Upper, v);
            push("exact", Side::Lower, v);
            return Ok(out);
        }
        if !p.is_nontrivial()? {
            push("trivial", Side::Upper, all);
            push("all-blocks", Side::Lower, all);
            return Ok(out);
        }
        let mut have_trivial = false;
        for m in self.methods.iter() {
            match m.evaluate(p, self) {
                Ok(v) => {
                    have_trivial |= m.name() == "trivial";
                    push(m.name(), Side::Upper, v);
                }
                Err(Error::NotApplicable(_)) | Err(Error::Overflow(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if !have_trivial {
            push("trivial", Side::Upper, all);
        }
        let known = self.known.as_ref().and_then(|k| k.get(p));
        if let Some(e) = known {
            push("registry", Side::Upper, e.upper);
        }
        if with_lower {
            if let Some(e) = known {
                push("registry", Side::Lower, e.lower);
            }
            push("lambda-blocks", Side::Lower, (p.lambda as u128).min(all));
            match packing_lower(p) {
                Ok(v) => push("linkage", Side::Lower, v),
                Err(Error::Overflow(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

impl BoundOracle for BoundEngine {
    fn upper(&self, p: &PackingParams) -> Result<u128> {
        if let Some(v) = self.memo.read().unwrap().get(p) {
            return Ok(*v);
        }
        let v = self
            .evidence(p, false)?
            .iter()
            .filter(|e| e.side == Side::Upper)
            .map(|e| e.value)
            .min()
            .expect("trivial cap always present");
        self.memo.write().unwrap().insert(*p, v);
        Ok(v)
    }
}
