use super::build::{build_plan, construction_1, construction_1_size};
use super::code::PackingCode;
use super::linkage::{best_linked_plan, dualize_packing, linkage_plan, linked_plan};
use crate::error::{Error, Result};
use crate::params::{CoveringParams, PackingParams};
use std::sync::Arc;

/// What a construction is asked to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Covering(CoveringParams),
    Packing(PackingParams),
}

#[derive(Debug, Clone)]
pub struct Request {
    pub target: Target,
    /// Linkage split point; the best admissible one when absent.
    pub t: Option<u32>,
    pub max_blocks: u128,
}

#[derive(Debug, Clone)]
pub struct Constructed {
    pub target: Target,
    pub code: PackingCode,
    /// Size the closed formula predicts.
    pub formula: u128,
    pub plan: String,
}

pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, req: &Request) -> Result<Constructed>;
}

fn covering(name: &str, req: &Request) -> Result<CoveringParams> {
    match req.target {
        Target::Covering(c) => Ok(c),
        Target::Packing(_) => Err(Error::NotApplicable(format!("{name} builds covering codes"))),
    }
}

pub struct LiftedMrd;
pub struct Linkage;
pub struct DualLinkage;

impl Construction for LiftedMrd {
    fn name(&self) -> &'static str {
        "lifted-mrd"
    }

    fn summary(&self) -> &'static str {
        "lifted translates of a Gabidulin code (covering)"
    }

    fn build(&self, req: &Request) -> Result<Constructed> {
        let c = covering(self.name(), req)?;
        let formula = construction_1_size(&c)?;
        if formula > req.max_blocks {
            return Err(Error::SizeCap { what: "construction", count: formula, cap: req.max_blocks });
        }
        let code = construction_1(&c)?;
        Ok(Constructed { target: req.target, code, formula, plan: "lifted MRD".into() })
    }
}

impl Construction for Linkage {
    fn name(&self) -> &'static str {
        "linkage"
    }

    fn summary(&self) -> &'static str {
        "one linkage step over a recursively built shorter code (covering)"
    }

    fn build(&self, req: &Request) -> Result<Constructed> {
        let c = covering(self.name(), req)?;
        let plan = match req.t {
            Some(t) => linked_plan(&c, t)?,
            None => best_linked_plan(&c)?,
        };
        let code = build_plan(&c, &plan, req.max_blocks)?;
        Ok(Constructed { target: req.target, code, formula: plan.size(), plan: plan.describe() })
    }
}

impl Construction for DualLinkage {
    fn name(&self) -> &'static str {
        "dual-linkage"
    }

    fn summary(&self) -> &'static str {
        "orthogonal complements of the best covering plan (packing)"
    }

    fn build(&self, req: &Request) -> Result<Constructed> {
        let p = match req.target {
            Target::Packing(p) => p,
            Target::Covering(_) => return Err(Error::NotApplicable("dual-linkage builds packings".into())),
        };
        let c = dualize_packing(&p);
        let plan = linkage_plan(&c)?;
        let code = build_plan(&c, &plan, req.max_blocks)?.dual();
        Ok(Constructed { target: req.target, code, formula: plan.size(), plan: format!("dual of {}", plan.describe()) })
    }
}

#[derive(Clone)]
pub struct ConstructionRegistry {
    entries: Vec<Arc<dyn Construction>>,
}

impl Default for ConstructionRegistry {
    fn default() -> Self {
        ConstructionRegistry::standard()
    }
}

impl ConstructionRegistry {
    pub fn empty() -> ConstructionRegistry {
        ConstructionRegistry { entries: Vec::new() }
    }

    pub fn standard() -> ConstructionRegistry {
        let mut r = ConstructionRegistry::empty();
        r.register(Arc::new(LiftedMrd));
        r.register(Arc::new(Linkage));
        r.register(Arc::new(DualLinkage));
        r
    }

    /// Adds `c`, replacing any construction with the same name.
    pub fn register(&mut self, c: Arc<dyn Construction>) {
        self.entries.retain(|e| e.name() != c.name());
        self.entries.push(c);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Construction>> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .cloned()
            .ok_or_else(|| Error::UnknownName { kind: "construction", name: name.to_string() })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn Construction>> {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::DEFAULT_MAX_BLOCKS;
    use crate::oracle::{verify_covering, verify_packing, CoveringCheck};

    fn req(target: Target, t: Option<u32>) -> Request {
        Request { target, t, max_blocks: DEFAULT_MAX_BLOCKS }
    }

    fn cov(n: u32, k: u32, delta: u32, alpha: u64) -> Target {
        Target::Covering(CoveringParams::new(2, n, k, delta, alpha).unwrap())
    }

    #[test]
    fn names_and_lookup() {
        let r = ConstructionRegistry::standard();
        assert_eq!(r.names(), vec!["lifted-mrd", "linkage", "dual-linkage"]);
        assert!(matches!(r.get("echelon-ferrers"), Err(Error::UnknownName { .. })));
    }

    #[test]
    fn sizes_follow_formulas() {
        let r = ConstructionRegistry::standard();
        let out = r.get("lifted-mrd").unwrap().build(&req(cov(4, 2, 2, 2), None)).unwrap();
        assert_eq!((out.code.len(), out.formula), (4, 4));
        let check = CoveringCheck { budget: 1 << 40, ..Default::default() };
        assert!(verify_covering(&out.code, 2, 2, &check).unwrap().valid);

        let out = r.get("linkage").unwrap().build(&req(cov(7, 3, 2, 2), None)).unwrap();
        assert_eq!((out.code.len(), out.formula), (64, 64));
        let out = r.get("linkage").unwrap().build(&req(cov(7, 3, 2, 2), Some(2))).unwrap();
        assert_eq!(out.code.len(), 64);

        let p = PackingParams::new(2, 6, 2, 1, 2).unwrap();
        let out = r.get("dual-linkage").unwrap().build(&req(Target::Packing(p), None)).unwrap();
        assert_eq!((out.code.len(), out.formula), (32, 32));
        assert_eq!(out.code.block_dim(), 2);
        assert!(verify_packing(&out.code, 1, 2).unwrap().valid);
    }

    #[test]
    fn wrong_target_kind() {
        let r = ConstructionRegistry::standard();
        let p = Target::Packing(PackingParams::new(2, 6, 2, 1, 2).unwrap());
        assert!(matches!(r.get("linkage").unwrap().build(&req(p, None)), Err(Error::NotApplicable(_))));
        assert!(matches!(r.get("dual-linkage").unwrap().build(&req(cov(4, 2, 2, 2), None)), Err(Error::NotApplicable(_))));
        let small = Request { target: cov(7, 3, 2, 2), t: None, max_blocks: 10 };
        assert!(matches!(r.get("linkage").unwrap().build(&small), Err(Error::SizeCap { .. })));
    }
}
