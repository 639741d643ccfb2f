//! Bounded systems, parabolic configurations and bounded embeddings, plus the
//! shipped catalog of configurations and covering cases for the classical
//! affine families.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coxeter::{preset, Gen, TwistedSystem};
use crate::engine::{build_forest, extract_relations, EngineConfig, Forest};
use crate::error::{Error, Result};
use crate::involutions::{Mode, WordRelation};

/// A twisted system with a window J such that J = J* and J together with
/// its boundary is all of S.
#[derive(Clone, Debug)]
pub struct BoundedSystem {
    pub system: TwistedSystem,
    pub j: BTreeSet<Gen>,
}

impl BoundedSystem {
    pub fn new(system: TwistedSystem, j: BTreeSet<Gen>) -> Result<Self> {
        if j.iter().any(|&s| s >= system.rank()) {
            return Err(Error::InvalidSystem(
                "window J contains an unknown generator".into(),
            ));
        }
        if j.iter().any(|&s| !j.contains(&system.star(s))) {
            return Err(Error::InvalidSystem(
                "window J is not stable under the twist".into(),
            ));
        }
        let mut closure: BTreeSet<Gen> = system.boundary(&j);
        closure.extend(j.iter().copied());
        if closure.len() != system.rank() {
            return Err(Error::InvalidSystem(
                "J together with its boundary must be all of S".into(),
            ));
        }
        Ok(Self { system, j })
    }

    pub fn boundary(&self) -> BTreeSet<Gen> {
        self.system.boundary(&self.j)
    }
}

/// A bounded system with a pair {s,t}; the forest is not built yet.
#[derive(Clone, Debug)]
pub struct ConfigSpec {
    pub name: String,
    pub bounded: BoundedSystem,
    pub s: Gen,
    pub t: Gen,
}

/// A configuration whose forest has been built and checked.
#[derive(Clone, Debug)]
pub struct ParabolicConfig {
    pub spec: ConfigSpec,
    pub forest: Forest,
    /// Forest vertices violating the window conditions.
    pub violations: Vec<usize>,
}

impl ParabolicConfig {
    pub fn is_parabolic(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn relations(&self) -> Vec<WordRelation> {
        extract_relations(&self.spec.bounded.system, &self.forest)
    }
}

/// Builds the forest of the whole system and checks that every vertex
/// domain K has ∂K ∪ K ⊆ J and σ(V_K) ⊆ V_J.
pub fn is_parabolic_config(spec: &ConfigSpec, cfg: &EngineConfig) -> Result<ParabolicConfig> {
    let sys = &spec.bounded.system;
    let j = &spec.bounded.j;
    let forest = build_forest(sys, spec.s, spec.t, cfg)?;
    let violations = forest
        .vertices
        .iter()
        .filter(|v| {
            let k = v.system.domain();
            let inside = k.is_subset(j) && sys.boundary(&k).is_subset(j);
            !(inside && v.system.sigma.image_within(j))
        })
        .map(|v| v.id)
        .collect();
    Ok(ParabolicConfig {
        spec: spec.clone(),
        forest,
        violations,
    })
}

/// A generator map S → S′ that extends to a bounded embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub map: Vec<Gen>,
}

impl Embedding {
    pub fn apply(&self, sys_target: &TwistedSystem, rel: &WordRelation) -> WordRelation {
        let map = |w: &[Gen]| w.iter().map(|&g| self.map[g]).collect::<Vec<_>>();
        WordRelation::new(sys_target, map(&rel.left), map(&rel.right), rel.mode)
    }
}

/// Backtracking search for an injective, m-preserving, twist-equivariant
/// map with φ(∂J) = ∂φ(J) and {φ(s), φ(t)} = {s′, t′}. The image order is
/// not constrained; the target may be reordered to match.
pub fn find_bounded_embedding(
    spec: &ConfigSpec,
    target: &TwistedSystem,
    s2: Gen,
    t2: Gen,
) -> Option<Embedding> {
    [(s2, t2), (t2, s2)]
        .into_iter()
        .find_map(|(a, b)| search_embedding(spec, target, a, b))
}

fn search_embedding(
    spec: &ConfigSpec,
    target: &TwistedSystem,
    s2: Gen,
    t2: Gen,
) -> Option<Embedding> {
    let src = &spec.bounded.system;
    if src.rank() > target.rank() {
        return None;
    }
    // Visit generators breadth-first from s so adjacency prunes early.
    let mut order = vec![spec.s];
    let mut seen: BTreeSet<Gen> = order.iter().copied().collect();
    let mut k = 0;
    loop {
        while k < order.len() {
            let a = order[k];
            k += 1;
            for b in src.gens() {
                if src.m(a, b) > 2 && seen.insert(b) {
                    order.push(b);
                }
            }
        }
        match src.gens().find(|g| !seen.contains(g)) {
            Some(g) => {
                seen.insert(g);
                order.push(g);
            }
            None => break,
        }
    }
    let mut map = vec![usize::MAX; src.rank()];
    let mut used = vec![false; target.rank()];
    let fixed = [(spec.s, s2), (spec.t, t2)];
    let mut st = Search {
        src,
        target,
        spec,
        order: &order,
        fixed: &fixed,
        map: &mut map,
        used: &mut used,
    };
    st.go(0).then_some(Embedding { map })
}

struct Search<'a> {
    src: &'a TwistedSystem,
    target: &'a TwistedSystem,
    spec: &'a ConfigSpec,
    order: &'a [Gen],
    fixed: &'a [(Gen, Gen)],
    map: &'a mut Vec<Gen>,
    used: &'a mut Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self, a: Gen, x: Gen) -> bool {
        if self.used[x] {
            return false;
        }
        for b in self.src.gens() {
            let y = self.map[b];
            if y != usize::MAX && self.target.m(x, y) != self.src.m(a, b) {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, a: Gen, x: Gen) -> Option<Vec<Gen>> {
        // Assign a ↦ x and a* ↦ x⋄ together.
        let (a2, x2) = (self.src.star(a), self.target.star(x));
        if !self.consistent(a, x) {
            return None;
        }
        self.map[a] = x;
        self.used[x] = true;
        let mut done = vec![a];
        if a2 != a {
            if x2 == x || self.map[a2] != usize::MAX || !self.consistent(a2, x2) {
                self.unassign(&done);
                return None;
            }
            self.map[a2] = x2;
            self.used[x2] = true;
            done.push(a2);
        } else if x2 != x {
            self.unassign(&done);
            return None;
        }
        Some(done)
    }

    fn unassign(&mut self, gens: &[Gen]) {
        for &g in gens {
            self.used[self.map[g]] = false;
            self.map[g] = usize::MAX;
        }
    }

    fn go(&mut self, k: usize) -> bool {
        if k == 0 {
            let fixed = self.fixed.to_vec();
            let mut undo = Vec::new();
            for (a, x) in fixed {
                if self.map[a] == x {
                    continue;
                }
                if self.map[a] != usize::MAX {
                    self.unassign(&undo);
                    return false;
                }
                match self.assign(a, x) {
                    Some(d) => undo.extend(d),
                    None => {
                        self.unassign(&undo);
                        return false;
                    }
                }
            }
            if self.go(1) {
                return true;
            }
            self.unassign(&undo);
            return false;
        }
        let Some(&a) = self.order.iter().find(|&&g| self.map[g] == usize::MAX) else {
            return self.boundary_ok();
        };
        for x in self.target.gens() {
            if let Some(done) = self.assign(a, x) {
                if self.go(k + 1) {
                    return true;
                }
                self.unassign(&done);
            }
        }
        false
    }

    fn boundary_ok(&self) -> bool {
        let image: BTreeSet<Gen> = self.spec.bounded.j.iter().map(|&g| self.map[g]).collect();
        let mapped: BTreeSet<Gen> = self
            .spec
            .bounded
            .boundary()
            .iter()
            .map(|&g| self.map[g])
            .collect();
        self.target.boundary(&image) == mapped
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverEntry {
    pub pair: (Gen, Gen),
    pub config: Option<String>,
    pub embedding: Option<Embedding>,
}

/// For each pair with 2 < m < ∞, the first configuration that embeds onto it.
pub fn covering_report(target: &TwistedSystem, catalog: &[ConfigSpec]) -> Vec<CoverEntry> {
    use rayon::prelude::*;
    if target.rank() <= 2 {
        return Vec::new();
    }
    crate::engine::relevant_pairs(target)
        .into_par_iter()
        .map(|(a, b)| {
            for c in catalog {
                if let Some(e) = find_bounded_embedding(c, target, a, b) {
                    return CoverEntry {
                        pair: (a, b),
                        config: Some(c.name.clone()),
                        embedding: Some(e),
                    };
                }
            }
            CoverEntry {
                pair: (a, b),
                config: None,
                embedding: None,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Deserialize)]
struct Window {
    #[serde(default)]
    ranks: Option<Vec<usize>>,
    j: [usize; 2],
}

#[derive(Clone, Debug, Deserialize)]
struct FamilyEntry {
    prefix: String,
    #[serde(default)]
    prime: bool,
    #[serde(rename = "type")]
    kind: String,
    twist: String,
    ranks: [Option<usize>; 2],
    pair: [String; 2],
    windows: Vec<Window>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct TableRow {
    pub config: String,
    pub relation: [String; 2],
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CoveringCase {
    pub case: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub twist: String,
    pub rank_above: usize,
    #[serde(default)]
    pub parity: Option<String>,
    pub configurations: Vec<String>,
    #[serde(default)]
    pub odd: Vec<String>,
    #[serde(default)]
    pub even: Vec<String>,
}

impl CoveringCase {
    /// Configuration names used at rank n.
    pub fn configurations_for(&self, n: usize) -> Vec<String> {
        let mut out = self.configurations.clone();
        out.extend(if n % 2 == 1 {
            self.odd.clone()
        } else {
            self.even.clone()
        });
        out
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Catalog {
    pub version: u32,
    families: Vec<FamilyEntry>,
    pub table: Vec<TableRow>,
    pub coverings: Vec<CoveringCase>,
}

const CATALOG: &str = include_str!("../data/catalog.json");

impl Catalog {
    pub fn builtin() -> Self {
        serde_json::from_str(CATALOG).expect("shipped catalog parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn covering_case(&self, case: &str) -> Option<&CoveringCase> {
        self.coverings.iter().find(|c| c.case == case)
    }

    /// Instantiates a configuration by name: `B5`, `2A9`, `D7'`,
    /// `2(A8xA8)`, `2(D7xD7)'`.
    pub fn config(&self, name: &str) -> Result<ConfigSpec> {
        let bad = || Error::Catalog(format!("unknown configuration {name:?}"));
        let (body, prime) = match name.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (name, false),
        };
        let (prefix, rank) =
            if let Some(inner) = body.strip_prefix("2(").and_then(|b| b.strip_suffix(')')) {
                let (l, r) = inner.split_once('x').ok_or_else(bad)?;
                if l != r {
                    return Err(bad());
                }
                let letter = &l[..1];
                (
                    format!("2({letter}x{letter})"),
                    l[1..].parse::<usize>().map_err(|_| bad())?,
                )
            } else {
                let end = if body.starts_with('2') { 2 } else { 1 };
                if body.len() <= end || !body.as_bytes()[end - 1].is_ascii_alphabetic() {
                    return Err(bad());
                }
                (
                    body[..end].to_string(),
                    body[end..].parse::<usize>().map_err(|_| bad())?,
                )
            };
        let fam = self
            .families
            .iter()
            .find(|f| f.prefix == prefix && f.prime == prime)
            .ok_or_else(bad)?;
        let [lo, hi] = fam.ranks;
        if lo.is_some_and(|l| rank < l) || hi.is_some_and(|h| rank > h) {
            return Err(Error::Catalog(format!(
                "{name}: rank {rank} is outside the catalogued range"
            )));
        }
        let window = fam
            .windows
            .iter()
            .find(|w| w.ranks.as_ref().is_none_or(|r| r.contains(&rank)))
            .ok_or_else(bad)?;
        let sys = preset(&fam.kind, rank, &fam.twist)?.with_name(name);
        let mut j = BTreeSet::new();
        for k in window.j[0]..=window.j[1] {
            let g = sys.gen(&k.to_string())?;
            j.insert(g);
            j.insert(sys.star(g));
        }
        let bounded = BoundedSystem::new(sys.clone(), j)?;
        Ok(ConfigSpec {
            name: name.to_string(),
            bounded,
            s: sys.gen(&fam.pair[0])?,
            t: sys.gen(&fam.pair[1])?,
        })
    }

    /// The tabulated relation for a configuration, as a prefix relation.
    pub fn table_relation(&self, name: &str) -> Result<Option<WordRelation>> {
        let Some(row) = self.table.iter().find(|r| r.config == name) else {
            return Ok(None);
        };
        let spec = self.config(name)?;
        let sys = &spec.bounded.system;
        let l = sys.parse_word(&row.relation[0])?;
        let r = sys.parse_word(&row.relation[1])?;
        Ok(Some(WordRelation::new(sys, l, r, Mode::Prefix)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_names_resolve() {
        let cat = Catalog::builtin();
        let b5 = cat.config("B5").unwrap();
        assert_eq!(b5.bounded.j.len(), 4);
        assert_eq!(b5.bounded.system.label(b5.s), "4");
        assert_eq!(cat.config("D8").unwrap().bounded.j.len(), 7);
        assert!(cat.config("A9").is_err());
        let p = cat.config("2(A8xA8)").unwrap();
        assert_eq!(p.bounded.system.rank(), 16);
        assert_eq!(p.bounded.j.len(), 12);
        let d = cat.config("2D7'").unwrap();
        assert_eq!(d.bounded.system.label(d.s), "5");
        assert!(cat.config("A4").is_err());
        assert!(cat.config("D8'").is_err());
        assert!(cat.config("2D5").is_err());
        assert_eq!(cat.config("2A9").unwrap().bounded.j.len(), 7);
        assert_eq!(cat.config("2A16").unwrap().bounded.j.len(), 12);
    }

    #[test]
    fn bounded_system_checks() {
        let sys = preset("A", 4, "id").unwrap();
        assert!(BoundedSystem::new(sys.clone(), [0, 1].into_iter().collect()).is_err());
        assert!(BoundedSystem::new(sys.clone(), [1, 2].into_iter().collect()).is_ok());
        let rev = preset("A", 5, "reverse").unwrap();
        assert!(BoundedSystem::new(rev.clone(), [1, 2].into_iter().collect()).is_err());
        assert!(BoundedSystem::new(rev, [1, 2, 3].into_iter().collect()).is_ok());
    }

    #[test]
    fn embeddings_into_affine_a() {
        let cat = Catalog::builtin();
        let a8 = cat.config("A8").unwrap();
        let target = preset("~A", 10, "id").unwrap();
        for (s, t) in [(0, 1), (10, 0), (5, 6)] {
            let e = find_bounded_embedding(&a8, &target, s, t).expect("embedding exists");
            let mut img = e.map.clone();
            img.sort();
            img.dedup();
            assert_eq!(img.len(), 8);
        }
        assert!(find_bounded_embedding(&a8, &preset("A", 5, "id").unwrap(), 2, 3).is_none());
        assert!(covering_report(&target, &[a8])
            .iter()
            .all(|c| c.config.is_some()));
        assert!(covering_report(&preset("A", 2, "id").unwrap(), &[]).is_empty());
    }
}
