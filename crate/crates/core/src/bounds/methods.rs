use super::formulas;
use super::BoundOracle;
use crate::error::{Error, Result};
use crate::params::PackingParams;
use std::sync::Arc;

/// One upper bound on A_q(n,k,t;lambda). Methods that do not cover a
/// parameter point return [`Error::NotApplicable`].
pub trait UpperBoundMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, p: &PackingParams, inner: &dyn BoundOracle) -> Result<u128>;
}

struct Trivial;
struct Packing;
struct ClassicJohnson;
struct ImprovedJohnson;
struct Combination;
struct Quadratic;

impl UpperBoundMethod for Trivial {
    fn name(&self) -> &'static str {
        "trivial"
    }
    fn evaluate(&self, p: &PackingParams, _: &dyn BoundOracle) -> Result<u128> {
        p.block_count()
    }
}

impl UpperBoundMethod for Packing {
    fn name(&self) -> &'static str {
        "packing"
    }
    fn evaluate(&self, p: &PackingParams, _: &dyn BoundOracle) -> Result<u128> {
        formulas::packing_bound(p)
    }
}

impl UpperBoundMethod for ClassicJohnson {
    fn name(&self) -> &'static str {
        "classic-johnson"
    }
    fn evaluate(&self, p: &PackingParams, inner: &dyn BoundOracle) -> Result<u128> {
        formulas::johnson_classic(p, inner)
    }
}

impl UpperBoundMethod for ImprovedJohnson {
    fn name(&self) -> &'static str {
        "improved-johnson"
    }
    fn evaluate(&self, p: &PackingParams, inner: &dyn BoundOracle) -> Result<u128> {
        formulas::johnson_improved(p, inner)
    }
}

impl UpperBoundMethod for Combination {
    fn name(&self) -> &'static str {
        "combination"
    }
    fn evaluate(&self, p: &PackingParams, inner: &dyn BoundOracle) -> Result<u128> {
        formulas::combination_bound(p, inner)
    }
}

impl UpperBoundMethod for Quadratic {
    fn name(&self) -> &'static str {
        "quadratic"
    }
    fn evaluate(&self, p: &PackingParams, _: &dyn BoundOracle) -> Result<u128> {
        formulas::quadratic_bound(p)
    }
}

/// Named upper-bound methods, evaluated in registration order.
#[derive(Clone)]
pub struct MethodRegistry {
    methods: Vec<Arc<dyn UpperBoundMethod>>,
}

impl MethodRegistry {
    pub fn empty() -> MethodRegistry {
        MethodRegistry { methods: Vec::new() }
    }

    pub fn standard() -> MethodRegistry {
        let mut r = MethodRegistry::empty();
        r.register(Arc::new(Trivial));
        r.register(Arc::new(Packing));
        r.register(Arc::new(ClassicJohnson));
        r.register(Arc::new(ImprovedJohnson));
        r.register(Arc::new(Combination));
        r.register(Arc::new(Quadratic));
        r
    }

    /// Adds a method, replacing any existing one with the same name.
    pub fn register(&mut self, m: Arc<dyn UpperBoundMethod>) {
        match self.methods.iter().position(|x| x.name() == m.name()) {
            Some(i) => self.methods[i] = m,
            None => self.methods.push(m),
        }
    }

    /// The standard methods restricted to `names`.
    pub fn select(names: &[&str]) -> Result<MethodRegistry> {
        let all = MethodRegistry::standard();
        let mut r = MethodRegistry::empty();
        for name in names {
            let m = all.get(name).ok_or_else(|| Error::UnknownName { kind: "bound method", name: name.to_string() })?;
            r.register(m);
        }
        Ok(r)
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn UpperBoundMethod>> {
        self.methods.iter().find(|m| m.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.iter().map(|m| m.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn UpperBoundMethod>> {
        self.methods.iter()
    }
}

impl Default for MethodRegistry {
    fn default() -> Self {
        MethodRegistry::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_names_and_selection() {
        let r = MethodRegistry::standard();
        assert_eq!(
            r.names(),
            ["trivial", "packing", "classic-johnson", "improved-johnson", "combination", "quadratic"]
        );
        let s = MethodRegistry::select(&["quadratic", "packing"]).unwrap();
        assert_eq!(s.names(), ["quadratic", "packing"]);
        assert!(matches!(MethodRegistry::select(&["bogus"]), Err(Error::UnknownName { .. })));
    }
}
