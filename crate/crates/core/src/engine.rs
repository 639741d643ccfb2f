//! The forest pipeline: expansion of a boundary step into constant systems,
//! descent elimination, forest construction for a pair {s,t}, and the
//! extraction and minimization of the induced relations.

mod periodic;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::Serialize;

pub use periodic::{bullet, detect_periodicity, PeriodicWitness, Poly};

use crate::braidsys::{format_column, BraidSystem};
use crate::coxeter::{Gen, TwistedSystem};
use crate::error::{Error, Result};
use crate::feasibility::{Constraint, Solutions};
use crate::involutions::{hat_relations, Theta, WordRelation};
use crate::numfield::{FieldElement, LinearPoly, INFINITY};
use crate::rewriting::{implies, RelationIndex};

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Iterations allowed in descent elimination.
    pub budget: usize,
    /// Largest period p tried; `None` means 4|S|.
    pub max_period: Option<usize>,
    /// Largest repetition count q tried.
    pub max_repeats: usize,
    /// Vertices allowed in one expansion tree.
    pub tree_limit: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            budget: 200,
            max_period: None,
            max_repeats: 8,
            tree_limit: 100_000,
        }
    }
}

impl EngineConfig {
    fn max_p(&self, sys: &TwistedSystem) -> usize {
        self.max_period.unwrap_or(4 * sys.rank())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafTag {
    Constant,
    Invalid,
    Redundant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DescentKind {
    Unconditional,
    Conditional,
    /// No descent; split on a column whose sign is still undetermined.
    Column,
}

/// How an inner vertex of an expansion tree was split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Split {
    Solutions {
        count: usize,
    },
    Descent {
        generator: Gen,
        descent: DescentKind,
    },
}

#[derive(Clone, Debug)]
pub struct SystemTree {
    pub system: BraidSystem,
    pub leaf: Option<LeafTag>,
    pub split: Option<Split>,
    pub children: Vec<SystemTree>,
}

impl SystemTree {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(SystemTree::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(SystemTree::depth)
            .max()
            .unwrap_or(0)
    }

    /// Constant leaves in depth-first order.
    pub fn constant_leaves(&self) -> Vec<&BraidSystem> {
        let mut out = Vec::new();
        self.collect_constant(&mut out);
        out
    }

    fn collect_constant<'a>(&'a self, out: &mut Vec<&'a BraidSystem>) {
        if self.leaf == Some(LeafTag::Constant) {
            out.push(&self.system);
        }
        for c in &self.children {
            c.collect_constant(out);
        }
    }
}

fn feasible_with(b: &BraidSystem, extra: &[Constraint]) -> bool {
    b.branches().into_iter().any(|mut cs| {
        cs.extend(extra.iter().cloned());
        cs.is_feasible()
    })
}

fn column_sign_feasible(b: &BraidSystem, col: &[LinearPoly], sign: i64) -> bool {
    let f = FieldElement::from_int(sign);
    let sum = col.iter().fold(LinearPoly::zero(), |acc, p| &acc + p);
    let mut extra: Vec<Constraint> = col.iter().map(|p| Constraint::ge(p.scale(&f))).collect();
    extra.push(Constraint::gt(sum.scale(&f)));
    feasible_with(b, &extra)
}

/// What the constraints say about the column of `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ColumnState {
    Unconditional,
    Conditional,
    /// Sign not yet forced either way.
    Open,
    /// Already constrained to be ≥ 0; ascending adds nothing.
    Settled,
}

fn column_state(b: &BraidSystem, s: Gen) -> ColumnState {
    let col = b.sigma.column(s).expect("s in domain");
    let mut conditional = false;
    let mut settled = true;
    for p in col {
        if let Some(c) = p.as_constant() {
            if c.sign() < 0 {
                return ColumnState::Unconditional;
            }
            conditional |= c.is_zero();
            continue;
        }
        if !feasible_with(b, &[Constraint::ge(p.clone())]) {
            return ColumnState::Unconditional;
        }
        conditional = conditional || !feasible_with(b, &[Constraint::gt(p.clone())]);
        settled = settled && !feasible_with(b, &[Constraint::lt(p.clone())]);
    }
    if !column_sign_feasible(b, col, 1) {
        return ColumnState::Unconditional;
    }
    match (settled, conditional) {
        (true, _) => ColumnState::Settled,
        (false, true) => ColumnState::Conditional,
        (false, false) => ColumnState::Open,
    }
}

fn choose_split(sys: &TwistedSystem, b: &BraidSystem) -> Option<(Gen, DescentKind)> {
    let mut domain: Vec<Gen> = b.domain().into_iter().collect();
    sys.sort_gens(&mut domain);
    let states: Vec<(Gen, ColumnState)> = domain.iter().map(|&s| (s, column_state(b, s))).collect();
    let first = |want| states.iter().find(|(_, st)| *st == want).map(|&(s, _)| s);
    first(ColumnState::Unconditional)
        .map(|s| (s, DescentKind::Unconditional))
        .or_else(|| first(ColumnState::Conditional).map(|s| (s, DescentKind::Conditional)))
        .or_else(|| first(ColumnState::Open).map(|s| (s, DescentKind::Column)))
}

/// Finite solution set over all |det| branches, or `None` if infinite.
fn finite_solutions(b: &BraidSystem) -> Option<Vec<crate::numfield::Assignment>> {
    let mut out = Vec::new();
    for cs in b.branches() {
        match cs.solutions_if_finite() {
            Solutions::Finite(v) => out.extend(v),
            Solutions::Infinite => return None,
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// The tree of braid systems rooted at b0↓r.
pub fn expand_tree(
    sys: &TwistedSystem,
    b0: &BraidSystem,
    r: Gen,
    cfg: &EngineConfig,
) -> Result<SystemTree> {
    let root = b0.down(sys, r)?;
    let count = AtomicUsize::new(0);
    expand_vertex(sys, root, cfg, &count)
}

fn expand_vertex(
    sys: &TwistedSystem,
    b: BraidSystem,
    cfg: &EngineConfig,
    count: &AtomicUsize,
) -> Result<SystemTree> {
    if count.fetch_add(1, AtomicOrdering::Relaxed) >= cfg.tree_limit {
        return Err(Error::NonFiniteTree(format!(
            "more than {} vertices; last vertex:\n{}",
            cfg.tree_limit,
            b.display(sys)
        )));
    }
    let leaf = |b: BraidSystem, tag| {
        Ok(SystemTree {
            system: b,
            leaf: Some(tag),
            split: None,
            children: vec![],
        })
    };
    if b.is_constant() {
        return leaf(b, LeafTag::Constant);
    }
    if !b.is_valid(sys) {
        return leaf(b, LeafTag::Invalid);
    }
    if b.is_redundant(sys) {
        return leaf(b, LeafTag::Redundant);
    }
    let (split, kids) = if let Some(sols) = finite_solutions(&b) {
        let kids = sols
            .iter()
            .map(|psi| b.substitute(psi))
            .collect::<Result<Vec<_>>>()?;
        (Split::Solutions { count: kids.len() }, kids)
    } else {
        let Some((s, kind)) = choose_split(sys, &b) else {
            return Err(Error::NonFiniteTree(format!(
                "no descent to split on at\n{}",
                b.display(sys)
            )));
        };
        let mut kids = Vec::with_capacity(3);
        if kind != DescentKind::Unconditional {
            kids.push(b.asc(s));
        }
        kids.push(b.des(sys, s));
        kids.push(b.hdes(sys, s));
        (
            Split::Descent {
                generator: s,
                descent: kind,
            },
            kids,
        )
    };
    let children = kids
        .into_iter()
        .map(|k| expand_vertex(sys, k, cfg, count))
        .collect::<Result<Vec<_>>>()?;
    Ok(SystemTree {
        system: b,
        leaf: None,
        split: Some(split),
        children,
    })
}

/// Why descent elimination stopped without output.
#[derive(Clone, Debug)]
pub enum Elimination {
    Output { system: BraidSystem, steps: usize },
    Invalid { step: usize },
    Redundant { step: usize },
    Periodic(PeriodicWitness),
}

impl Elimination {
    pub fn output(self) -> Option<BraidSystem> {
        match self {
            Elimination::Output { system, .. } => Some(system),
            _ => None,
        }
    }
}

/// Repeatedly removes the least descent until the system is invalid,
/// redundant, descent-periodic, or has no descents.
pub fn eliminate_descents(
    sys: &TwistedSystem,
    b: &BraidSystem,
    cfg: &EngineConfig,
) -> Result<Elimination> {
    if !b.is_constant() {
        return Err(Error::Precondition(
            "descent elimination needs a constant system".into(),
        ));
    }
    let max_p = cfg.max_p(sys);
    let mut history = vec![b.clone()];
    loop {
        let i = history.len() - 1;
        let cur = &history[i];
        if !cur.is_valid(sys) {
            return Ok(Elimination::Invalid { step: i });
        }
        if cur.is_redundant(sys) {
            return Ok(Elimination::Redundant { step: i });
        }
        if let Some(w) = detect_periodicity(sys, &history, max_p, cfg.max_repeats) {
            return Ok(Elimination::Periodic(w));
        }
        let mut des: Vec<Gen> = cur.descent_set().into_iter().collect();
        if des.is_empty() {
            return Ok(Elimination::Output {
                system: history.pop().unwrap(),
                steps: i,
            });
        }
        if i >= cfg.budget {
            return Err(Error::Budget { budget: cfg.budget });
        }
        sys.sort_gens(&mut des);
        let r = des[0];
        let next = if cur.sigma.column_is(r, sys.star(r), -1) {
            cur.des(sys, r)
        } else {
            cur.hdes(sys, r)
        };
        // The added constraints hold by construction.
        let next = next.substitute(&Default::default())?;
        history.push(next);
    }
}

/// Outcome counts for the expansion trees and eliminations under one vertex.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct VertexStats {
    pub tree_vertices: usize,
    pub constant_leaves: usize,
    pub invalid: usize,
    pub redundant: usize,
    pub periodic: usize,
    pub outputs: usize,
}

impl VertexStats {
    fn add(&mut self, o: &VertexStats) {
        self.tree_vertices += o.tree_vertices;
        self.constant_leaves += o.constant_leaves;
        self.invalid += o.invalid;
        self.redundant += o.redundant;
        self.periodic += o.periodic;
        self.outputs += o.outputs;
    }
}

#[derive(Clone, Debug)]
pub struct ForestVertex {
    pub id: usize,
    pub parent: Option<usize>,
    /// The boundary generator whose expansion produced this vertex.
    pub via: Option<Gen>,
    pub system: BraidSystem,
    pub children: Vec<usize>,
    pub trivial: bool,
    pub stats: VertexStats,
}

#[derive(Clone, Debug)]
pub struct Forest {
    pub s: Gen,
    pub t: Gen,
    pub roots: Vec<usize>,
    pub vertices: Vec<ForestVertex>,
}

impl Forest {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &ForestVertex> {
        self.vertices.iter().filter(|v| v.children.is_empty())
    }
}

/// Canonical order on braid systems: words first, then σ.
pub fn cmp_systems(sys: &TwistedSystem, a: &BraidSystem, b: &BraidSystem) -> Ordering {
    sys.cmp_words(&a.left, &b.left)
        .then_with(|| sys.cmp_words(&a.right, &b.right))
        .then_with(|| sigma_key(sys, a).cmp(&sigma_key(sys, b)))
}

fn sigma_key(sys: &TwistedSystem, b: &BraidSystem) -> Vec<String> {
    b.domain()
        .into_iter()
        .map(|s| format_column(sys, b.sigma.column(s).unwrap()))
        .collect()
}

type Children = (Vec<(Gen, BraidSystem)>, VertexStats);

/// Children of a forest vertex, with the boundary generator that produced
/// each, in canonical order.
fn forest_children(sys: &TwistedSystem, b: &BraidSystem, cfg: &EngineConfig) -> Result<Children> {
    let mut boundary: Vec<Gen> = sys.boundary(&b.domain()).into_iter().collect();
    sys.sort_gens(&mut boundary);
    let per_r: Vec<Result<Children>> = boundary
        .par_iter()
        .map(|&r| {
            let tree = expand_tree(sys, b, r, cfg)?;
            let mut stats = VertexStats {
                tree_vertices: tree.size(),
                ..Default::default()
            };
            let leaves = tree.constant_leaves();
            stats.constant_leaves = leaves.len();
            let results: Vec<Result<Elimination>> = leaves
                .par_iter()
                .map(|l| eliminate_descents(sys, l, cfg))
                .collect();
            let mut out = Vec::new();
            for e in results {
                match e? {
                    Elimination::Output { system, .. } => {
                        stats.outputs += 1;
                        out.push((r, system));
                    }
                    Elimination::Invalid { .. } => stats.invalid += 1,
                    Elimination::Redundant { .. } => stats.redundant += 1,
                    Elimination::Periodic(_) => stats.periodic += 1,
                }
            }
            Ok((out, stats))
        })
        .collect();
    let mut all = Vec::new();
    let mut stats = VertexStats::default();
    for res in per_r {
        let (out, st) = res?;
        stats.add(&st);
        all.extend(out);
    }
    all.sort_by(|(r1, b1), (r2, b2)| {
        sys.ord(*r1)
            .cmp(&sys.ord(*r2))
            .then_with(|| cmp_systems(sys, b1, b2))
    });
    let mut seen = BTreeSet::new();
    all.retain(|(_, b)| seen.insert(format!("{:?}", (&b.left, &b.right, sigma_key(sys, b)))));
    Ok((all, stats))
}

struct Subtree {
    via: Option<Gen>,
    system: BraidSystem,
    stats: VertexStats,
    children: Vec<Subtree>,
}

fn build_subtree(
    sys: &TwistedSystem,
    via: Option<Gen>,
    b: BraidSystem,
    cfg: &EngineConfig,
) -> Result<Subtree> {
    if sys.boundary(&b.domain()).is_empty() {
        return Ok(Subtree {
            via,
            system: b,
            stats: VertexStats::default(),
            children: vec![],
        });
    }
    let (kids, stats) = forest_children(sys, &b, cfg)?;
    let children = kids
        .into_par_iter()
        .map(|(r, k)| build_subtree(sys, Some(r), k, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subtree {
        via,
        system: b,
        stats,
        children,
    })
}

/// The two root systems for {s,t}, identity shape first.
pub fn forest_roots(sys: &TwistedSystem, s: Gen, t: Gen) -> Result<Vec<BraidSystem>> {
    [Theta::Identity, Theta::Swap]
        .iter()
        .map(|&th| BraidSystem::root(sys, s, t, th))
        .collect()
}

/// The forest of constant braid systems for the pair {s,t}.
pub fn build_forest(sys: &TwistedSystem, s: Gen, t: Gen, cfg: &EngineConfig) -> Result<Forest> {
    let m = sys.m(s, t);
    if s == t || m <= 2 || m == INFINITY {
        return Err(Error::Precondition(format!(
            "forest needs 2 < m({},{}) < ∞",
            sys.label(s),
            sys.label(t)
        )));
    }
    let subtrees = forest_roots(sys, s, t)?
        .into_par_iter()
        .map(|b| build_subtree(sys, None, b, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut forest = Forest {
        s,
        t,
        roots: vec![],
        vertices: vec![],
    };
    for st in subtrees {
        let id = flatten(sys, st, None, &mut forest.vertices);
        forest.roots.push(id);
    }
    Ok(forest)
}

fn flatten(
    sys: &TwistedSystem,
    st: Subtree,
    parent: Option<usize>,
    out: &mut Vec<ForestVertex>,
) -> usize {
    let id = out.len();
    let trivial = st.system.is_trivial(sys);
    out.push(ForestVertex {
        id,
        parent,
        via: st.via,
        system: st.system,
        children: vec![],
        trivial,
        stats: st.stats,
    });
    for c in st.children {
        let cid = flatten(sys, c, Some(id), out);
        out[id].children.push(cid);
    }
    id
}

/// The prefix relations of the trivial vertices, in canonical order.
pub fn extract_relations(sys: &TwistedSystem, forest: &Forest) -> Vec<WordRelation> {
    let mut out: Vec<WordRelation> = forest
        .vertices
        .iter()
        .filter(|v| v.trivial)
        .map(|v| v.system.relation(sys))
        .collect();
    canonicalize(sys, &mut out);
    out
}

pub fn canonicalize(sys: &TwistedSystem, rels: &mut Vec<WordRelation>) {
    rels.sort_by(|a, b| a.cmp_in(sys, b));
    rels.dedup();
}

/// The pairs {s,t} with 2 < m(s,t) < ∞, s before t in the generator order.
pub fn relevant_pairs(sys: &TwistedSystem) -> Vec<(Gen, Gen)> {
    let order = sys.order();
    let mut out = Vec::new();
    for (i, &s) in order.iter().enumerate() {
        for &t in &order[i + 1..] {
            let m = sys.m(s, t);
            if m > 2 && m != INFINITY {
                out.push((s, t));
            }
        }
    }
    out
}

/// Forests for every relevant pair, in pair order.
pub fn build_all_forests(sys: &TwistedSystem, cfg: &EngineConfig) -> Result<Vec<Forest>> {
    relevant_pairs(sys)
        .into_par_iter()
        .map(|(s, t)| build_forest(sys, s, t, cfg))
        .collect()
}

fn same_relation(a: &WordRelation, b: &WordRelation) -> bool {
    a.mode == b.mode
        && ((a.left == b.left && a.right == b.right) || (a.left == b.right && a.right == b.left))
}

/// Greedy minimal subset: walking backwards through the canonical order, a
/// relation is dropped when the hat relations together with the other kept
/// ones imply it at the given depth, so earlier representatives survive.
/// Relations already in the hat set never survive.
pub fn minimize(
    sys: &TwistedSystem,
    rels: &[WordRelation],
    depth: usize,
) -> Result<Vec<WordRelation>> {
    let base = hat_relations(sys);
    let mut kept: Vec<WordRelation> = rels.to_vec();
    canonicalize(sys, &mut kept);
    kept.retain(|r| !base.iter().any(|b| same_relation(b, r)));
    for i in (0..kept.len()).rev() {
        let mut index = RelationIndex::new(&base);
        for (k, r) in kept.iter().enumerate() {
            if k != i {
                index.insert(r);
            }
        }
        if implies(sys, &index, &kept[i], depth)?.holds {
            kept.remove(i);
        }
    }
    Ok(kept)
}

/// Mutual bounded implication of two relation sets over the hat relations.
pub fn equivalent_over_hat(
    sys: &TwistedSystem,
    a: &[WordRelation],
    b: &[WordRelation],
    depth: usize,
) -> Result<bool> {
    let base = hat_relations(sys);
    for (from, to) in [(a, b), (b, a)] {
        let mut index = RelationIndex::new(&base);
        for r in from {
            index.insert(r);
        }
        for r in to {
            if !implies(sys, &index, r, depth)?.holds {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All relations induced by the forests.
pub fn union_relations(sys: &TwistedSystem, forests: &[Forest]) -> Vec<WordRelation> {
    let mut out: Vec<WordRelation> = forests
        .iter()
        .flat_map(|f| extract_relations(sys, f))
        .collect();
    canonicalize(sys, &mut out);
    out
}
