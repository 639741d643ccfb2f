//! Named relation families behind a common trait, so that callers can pick
//! a relation set by name at runtime.
//!
//! ```
//! use invbraid::coxeter::preset;
//! use invbraid::families::{FamilyParams, Registry};
//!
//! let sys = preset("A", 3, "id").unwrap();
//! let reg = Registry::builtin();
//! let rels = reg.get("hat").unwrap().relations(&sys, &FamilyParams::default()).unwrap();
//! assert_eq!(rels.len(), 5);
//! ```

use crate::coxeter::TwistedSystem;
use crate::engine::canonicalize;
use crate::error::{Error, Result};
use crate::involutions::{
    braid_relations, exceptional_relations, generalized_relations, half_braid_relations,
    hat_relations, mixed_relations, InvolutionTable, WordRelation,
};

/// Inputs shared by all families.
#[derive(Clone, Debug, Default)]
pub struct FamilyParams {
    /// Length bound for families that enumerate group elements or
    /// twisted involutions. Required for infinite groups.
    pub bound: Option<usize>,
}

impl FamilyParams {
    fn bound_for(&self, sys: &TwistedSystem, what: &'static str) -> Result<Option<usize>> {
        match self.bound {
            Some(b) => Ok(Some(b)),
            None if sys.is_finite_type() => Ok(None),
            None => Err(Error::Unbounded(what)),
        }
    }
}

pub trait RelationFamily: Send + Sync {
    /// Registry key, as accepted on the command line.
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    /// The relations of this family, in canonical order.
    fn relations(&self, sys: &TwistedSystem, params: &FamilyParams) -> Result<Vec<WordRelation>>;
}

struct Braid;
struct HalfBraid;
struct Exceptional;
struct Mixed;
struct Generalized;
struct Hat;
struct HatPlus;

impl RelationFamily for Braid {
    fn name(&self) -> &'static str {
        "braid"
    }
    fn summary(&self) -> &'static str {
        "ordinary braid relations, applied anywhere"
    }
    fn relations(&self, sys: &TwistedSystem, _: &FamilyParams) -> Result<Vec<WordRelation>> {
        Ok(braid_relations(sys))
    }
}

impl RelationFamily for HalfBraid {
    fn name(&self) -> &'static str {
        "half-braid"
    }
    fn summary(&self) -> &'static str {
        "prefix relations of length m_*(s,t) < m(s,t)"
    }
    fn relations(&self, sys: &TwistedSystem, _: &FamilyParams) -> Result<Vec<WordRelation>> {
        Ok(half_braid_relations(sys))
    }
}

impl RelationFamily for Exceptional {
    fn name(&self) -> &'static str {
        "exceptional"
    }
    fn summary(&self) -> &'static str {
        "diagram-pattern relations for 2A3, B3, H3 and D4 subgraphs"
    }
    fn relations(&self, sys: &TwistedSystem, _: &FamilyParams) -> Result<Vec<WordRelation>> {
        Ok(exceptional_relations(sys))
    }
}

impl RelationFamily for Mixed {
    fn name(&self) -> &'static str {
        "mixed"
    }
    fn summary(&self) -> &'static str {
        "braid relations plus whole-word relations for Hecke words"
    }
    fn relations(&self, sys: &TwistedSystem, params: &FamilyParams) -> Result<Vec<WordRelation>> {
        let bound = params
            .bound_for(sys, "mixed relations")?
            .unwrap_or(usize::MAX);
        mixed_relations(sys, bound)
    }
}

impl RelationFamily for Generalized {
    fn name(&self) -> &'static str {
        "generalized"
    }
    fn summary(&self) -> &'static str {
        "generalized half-braid relations over every involution word"
    }
    fn relations(&self, sys: &TwistedSystem, params: &FamilyParams) -> Result<Vec<WordRelation>> {
        let table = InvolutionTable::new(sys, params.bound_for(sys, "generalized relations")?)?;
        Ok(generalized_relations(&table))
    }
}

impl RelationFamily for Hat {
    fn name(&self) -> &'static str {
        "hat"
    }
    fn summary(&self) -> &'static str {
        "braid and half-braid relations"
    }
    fn relations(&self, sys: &TwistedSystem, _: &FamilyParams) -> Result<Vec<WordRelation>> {
        let mut out = hat_relations(sys);
        canonicalize(sys, &mut out);
        Ok(out)
    }
}

impl RelationFamily for HatPlus {
    fn name(&self) -> &'static str {
        "hat-plus"
    }
    fn summary(&self) -> &'static str {
        "braid, half-braid and exceptional relations"
    }
    fn relations(&self, sys: &TwistedSystem, _: &FamilyParams) -> Result<Vec<WordRelation>> {
        let mut out = hat_relations(sys);
        out.extend(exceptional_relations(sys));
        canonicalize(sys, &mut out);
        Ok(out)
    }
}

pub struct Registry {
    families: Vec<Box<dyn RelationFamily>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            families: Vec::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Braid));
        r.register(Box::new(HalfBraid));
        r.register(Box::new(Exceptional));
        r.register(Box::new(Mixed));
        r.register(Box::new(Generalized));
        r.register(Box::new(Hat));
        r.register(Box::new(HatPlus));
        r
    }

    /// Adds a family, replacing any existing one with the same name.
    pub fn register(&mut self, family: Box<dyn RelationFamily>) {
        self.families.retain(|f| f.name() != family.name());
        self.families.push(family);
    }

    pub fn get(&self, name: &str) -> Option<&dyn RelationFamily> {
        self.families
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.families.iter().map(|f| f.name())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn RelationFamily> {
        self.families.iter().map(|f| f.as_ref())
    }

    /// Union of the named families, canonicalized. Names may be separated
    /// by commas or `+`.
    pub fn resolve(
        &self,
        spec: &str,
        sys: &TwistedSystem,
        params: &FamilyParams,
    ) -> Result<Vec<WordRelation>> {
        let mut out = Vec::new();
        for name in spec
            .split([',', '+'])
            .map(str::trim)
            .filter(|n| !n.is_empty())
        {
            let fam = self.get(name).ok_or_else(|| {
                let known: Vec<&str> = self.names().collect();
                Error::Parse(format!(
                    "unknown relation family {name:?}; known: {}",
                    known.join(", ")
                ))
            })?;
            out.extend(fam.relations(sys, params)?);
        }
        canonicalize(sys, &mut out);
        Ok(out)
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::preset;

    #[test]
    fn names_are_unique_and_resolvable() {
        let reg = Registry::builtin();
        let names: Vec<_> = reg.names().collect();
        assert_eq!(
            names,
            [
                "braid",
                "half-braid",
                "exceptional",
                "mixed",
                "generalized",
                "hat",
                "hat-plus"
            ]
        );
        let sys = preset("B", 3, "id").unwrap();
        let p = FamilyParams::default();
        let plus = reg.resolve("hat-plus", &sys, &p).unwrap();
        let parts = reg
            .resolve("braid, half-braid+exceptional", &sys, &p)
            .unwrap();
        assert_eq!(plus, parts);
        assert!(reg.resolve("nope", &sys, &p).is_err());
    }

    #[test]
    fn affine_needs_bound() {
        let reg = Registry::builtin();
        let sys = preset("~A", 2, "id").unwrap();
        assert!(matches!(
            reg.get("generalized")
                .unwrap()
                .relations(&sys, &FamilyParams::default()),
            Err(Error::Unbounded(_))
        ));
        let p = FamilyParams { bound: Some(3) };
        assert!(!reg
            .get("generalized")
            .unwrap()
            .relations(&sys, &p)
            .unwrap()
            .is_empty());
    }
}
