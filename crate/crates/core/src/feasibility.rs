//! Exact feasibility of affine-linear constraint systems over the ordered
//! field: Gaussian elimination on equalities, Fourier–Motzkin on the
//! inequalities (tracking strictness), and disequalities checked last.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numfield::{Assignment, FieldElement, LinearPoly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Lt => "<",
        }
    }
}

/// One constraint. `Cmp` compares a polynomial with zero; `NonZero` says the
/// vector of polynomials is not identically zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    Cmp { poly: LinearPoly, rel: Relation },
    NonZero(Vec<LinearPoly>),
}

impl Constraint {
    /// Canonical form: `≤`/`<` become `≥`/`>` by negation, inequalities are
    /// scaled by a positive factor so the leading coefficient is ±1, and
    /// equalities are made monic.
    pub fn cmp(poly: LinearPoly, rel: Relation) -> Self {
        let (poly, rel) = match rel {
            Relation::Le => (-&poly, Relation::Ge),
            Relation::Lt => (-&poly, Relation::Gt),
            r => (poly, r),
        };
        let poly = match rel {
            Relation::Eq => match poly.terms().values().next().cloned() {
                Some(lead) => poly.scale(&lead.inverse().unwrap()),
                None => poly.normalized(),
            },
            _ => poly.normalized(),
        };
        Constraint::Cmp { poly, rel }
    }

    pub fn eq(poly: LinearPoly) -> Self {
        Self::cmp(poly, Relation::Eq)
    }

    pub fn ge(poly: LinearPoly) -> Self {
        Self::cmp(poly, Relation::Ge)
    }

    pub fn gt(poly: LinearPoly) -> Self {
        Self::cmp(poly, Relation::Gt)
    }

    pub fn le(poly: LinearPoly) -> Self {
        Self::cmp(poly, Relation::Le)
    }

    pub fn lt(poly: LinearPoly) -> Self {
        Self::cmp(poly, Relation::Lt)
    }

    pub fn non_zero(v: Vec<LinearPoly>) -> Self {
        Constraint::NonZero(v)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        match self {
            Constraint::Cmp { poly, .. } => poly.vars().collect(),
            Constraint::NonZero(v) => v.iter().flat_map(|p| p.vars()).collect(),
        }
    }

    pub fn substitute(&self, at: &BTreeMap<Var, LinearPoly>) -> Self {
        match self {
            Constraint::Cmp { poly, rel } => Self::cmp(poly.substitute(at), *rel),
            Constraint::NonZero(v) => {
                Constraint::NonZero(v.iter().map(|p| p.substitute(at)).collect())
            }
        }
    }

    /// Truth value when the constraint has no variables left.
    pub fn constant_truth(&self) -> Option<bool> {
        match self {
            Constraint::Cmp { poly, rel } => {
                let s = poly.as_constant()?.sign();
                Some(match rel {
                    Relation::Eq => s == 0,
                    Relation::Ge => s >= 0,
                    Relation::Gt => s > 0,
                    Relation::Le => s <= 0,
                    Relation::Lt => s < 0,
                })
            }
            Constraint::NonZero(v) => {
                let mut any = false;
                for p in v {
                    match p.as_constant() {
                        Some(c) if c.is_zero() => {}
                        Some(_) => any = true,
                        None => return None,
                    }
                }
                Some(any)
            }
        }
    }

    pub fn holds_at(&self, at: &Assignment) -> Option<bool> {
        let total: BTreeMap<Var, LinearPoly> = at
            .iter()
            .map(|(v, c)| (*v, LinearPoly::constant(c.clone())))
            .collect();
        self.substitute(&total).constant_truth()
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Cmp { poly, rel } => write!(f, "{poly} {} 0", rel.symbol()),
            Constraint::NonZero(v) => {
                let parts: Vec<String> = v.iter().map(|p| p.to_string()).collect();
                write!(f, "[{}] != 0", parts.join(", "))
            }
        }
    }
}

/// A conjunction of constraints, kept free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConstraintSystem {
    constraints: Vec<Constraint>,
}

/// Outcome of [`ConstraintSystem::solutions_if_finite`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solutions {
    Finite(Vec<Assignment>),
    Infinite,
}

impl ConstraintSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_constraints(cs: impl IntoIterator<Item = Constraint>) -> Self {
        let mut out = Self::new();
        for c in cs {
            out.push(c);
        }
        out
    }

    /// Adds `c` unless it is already present or trivially true.
    pub fn push(&mut self, c: Constraint) {
        if c.constant_truth() == Some(true) || self.constraints.contains(&c) {
            return;
        }
        self.constraints.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Constraint>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn with(&self, c: Constraint) -> Self {
        let mut out = self.clone();
        out.push(c);
        out
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.constraints.iter().flat_map(|c| c.vars()).collect()
    }

    /// Applies `at`, dropping constraints that become trivially true.
    pub fn substitute(&self, at: &BTreeMap<Var, LinearPoly>) -> Self {
        Self::from_constraints(self.constraints.iter().map(|c| c.substitute(at)))
    }

    pub fn is_feasible(&self) -> bool {
        let Some(red) = Reduced::new(self) else {
            return false;
        };
        red.feasible()
    }

    /// True iff `self ∪ ¬extra` is infeasible.
    pub fn entails(&self, extra: &Constraint) -> bool {
        negations(extra)
            .into_iter()
            .all(|branch| !self.extended(branch).is_feasible())
    }

    fn extended(&self, more: Vec<Constraint>) -> Self {
        let mut out = self.clone();
        out.extend(more);
        out
    }

    /// The feasible points when there are finitely many (at most one, by
    /// convexity), or `Infinite`.
    pub fn solutions_if_finite(&self) -> Solutions {
        let Some(mut red) = Reduced::new(self) else {
            return Solutions::Finite(Vec::new());
        };
        if !red.feasible() {
            return Solutions::Finite(Vec::new());
        }
        // Promote implied equalities until none are left.
        loop {
            let mut found = None;
            for (p, strict) in &red.ineqs {
                if !strict && !p.is_constant() && !red.with_ineq(p.clone(), true).fm_feasible() {
                    found = Some(p.clone());
                    break;
                }
            }
            match found {
                Some(p) => match red.add_equality(p) {
                    Some(r) => red = r,
                    None => return Solutions::Finite(Vec::new()),
                },
                None => break,
            }
        }
        let free: BTreeSet<Var> = self
            .variables()
            .into_iter()
            .filter(|v| !red.subst.contains_key(v))
            .collect();
        if !free.is_empty() {
            return Solutions::Infinite;
        }
        let point: Assignment = red
            .subst
            .iter()
            .map(|(v, p)| (*v, p.as_constant().cloned().expect("fully determined")))
            .collect();
        if self
            .constraints
            .iter()
            .all(|c| c.holds_at(&point) == Some(true))
        {
            Solutions::Finite(vec![point])
        } else {
            Solutions::Finite(Vec::new())
        }
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

/// Branches whose union is the negation of `c`.
fn negations(c: &Constraint) -> Vec<Vec<Constraint>> {
    match c {
        Constraint::Cmp { poly, rel } => match rel {
            Relation::Eq => vec![
                vec![Constraint::gt(poly.clone())],
                vec![Constraint::lt(poly.clone())],
            ],
            Relation::Ge => vec![vec![Constraint::lt(poly.clone())]],
            Relation::Gt => vec![vec![Constraint::le(poly.clone())]],
            Relation::Le => vec![vec![Constraint::gt(poly.clone())]],
            Relation::Lt => vec![vec![Constraint::ge(poly.clone())]],
        },
        Constraint::NonZero(v) => vec![v.iter().map(|p| Constraint::eq(p.clone())).collect()],
    }
}

/// A system after eliminating its equalities: a substitution for the pivot
/// variables, the remaining inequalities `p ≥ 0` / `p > 0`, and the
/// disequalities.
#[derive(Clone)]
struct Reduced {
    subst: BTreeMap<Var, LinearPoly>,
    ineqs: Vec<(LinearPoly, bool)>,
    nonzero: Vec<Vec<LinearPoly>>,
}

impl Reduced {
    fn new(cs: &ConstraintSystem) -> Option<Self> {
        let mut red = Reduced {
            subst: BTreeMap::new(),
            ineqs: Vec::new(),
            nonzero: Vec::new(),
        };
        for c in cs.constraints() {
            if let Constraint::Cmp {
                poly,
                rel: Relation::Eq,
            } = c
            {
                red = red.add_equality(poly.clone())?;
            }
        }
        for c in cs.constraints() {
            match c {
                Constraint::Cmp {
                    rel: Relation::Eq, ..
                } => {}
                Constraint::Cmp { poly, rel } => {
                    let (p, strict) = match rel {
                        Relation::Ge => (poly.clone(), false),
                        Relation::Gt => (poly.clone(), true),
                        Relation::Le => (-poly, false),
                        Relation::Lt => (-poly, true),
                        Relation::Eq => unreachable!(),
                    };
                    red.ineqs.push((p.substitute(&red.subst), strict));
                }
                Constraint::NonZero(v) => red
                    .nonzero
                    .push(v.iter().map(|p| p.substitute(&red.subst)).collect()),
            }
        }
        Some(red)
    }

    /// Adds `p = 0`; `None` if it is inconsistent with the substitution.
    fn add_equality(&self, p: LinearPoly) -> Option<Self> {
        let p = p.substitute(&self.subst);
        if let Some(c) = p.as_constant() {
            return if c.is_zero() {
                Some(self.clone())
            } else {
                None
            };
        }
        let (&v, a) = p.terms().iter().next().unwrap();
        // v = -(p - a·v)/a
        let mut rest = p.clone();
        rest.add_term(v, &-a);
        let expr = rest.scale(&(-a).inverse().unwrap());
        let single: BTreeMap<Var, LinearPoly> = [(v, expr.clone())].into_iter().collect();
        let mut subst: BTreeMap<Var, LinearPoly> = self
            .subst
            .iter()
            .map(|(k, e)| (*k, e.substitute(&single)))
            .collect();
        subst.insert(v, expr);
        Some(Reduced {
            subst,
            ineqs: self
                .ineqs
                .iter()
                .map(|(q, s)| (q.substitute(&single), *s))
                .collect(),
            nonzero: self
                .nonzero
                .iter()
                .map(|vec| vec.iter().map(|q| q.substitute(&single)).collect())
                .collect(),
        })
    }

    fn with_ineq(&self, p: LinearPoly, strict: bool) -> Self {
        let mut out = self.clone();
        out.ineqs.push((p, strict));
        out
    }

    fn fm_feasible(&self) -> bool {
        fourier_motzkin(self.ineqs.clone())
    }

    fn feasible(&self) -> bool {
        if !self.fm_feasible() {
            return false;
        }
        // A convex set with points off each of finitely many affine subspaces
        // has points off their union.
        self.nonzero.iter().all(|v| {
            v.iter().any(|p| match p.as_constant() {
                Some(c) => !c.is_zero(),
                None => {
                    self.with_ineq(p.clone(), true).fm_feasible()
                        || self.with_ineq(-p, true).fm_feasible()
                }
            })
        })
    }
}

/// Keeps the tightest bound per linear part; `None` on a false constant.
fn tighten(ineqs: Vec<(LinearPoly, bool)>) -> Option<Vec<(LinearPoly, bool)>> {
    let mut best: HashMap<LinearPoly, (FieldElement, bool)> = HashMap::new();
    for (p, strict) in ineqs {
        let p = p.normalized();
        if let Some(c) = p.as_constant() {
            let ok = if strict { c.sign() > 0 } else { c.sign() >= 0 };
            if !ok {
                return None;
            }
            continue;
        }
        let lin = p.linear_part();
        let c = p.constant_part().clone();
        match best.get_mut(&lin) {
            Some((c0, s0)) => match c.cmp(c0) {
                std::cmp::Ordering::Less => *c0 = c,
                std::cmp::Ordering::Equal => *s0 |= strict,
                std::cmp::Ordering::Greater => {}
            },
            None => {
                best.insert(lin, (c, strict));
            }
        }
    }
    let mut out: Vec<(LinearPoly, bool)> = best
        .into_iter()
        .map(|(mut lin, (c, s))| {
            lin.add_constant(&c);
            (lin, s)
        })
        .collect();
    out.sort();
    Some(out)
}

/// Decides whether `p ≥ 0` (or `p > 0` when strict) holds simultaneously.
fn fourier_motzkin(ineqs: Vec<(LinearPoly, bool)>) -> bool {
    let Some(mut cur) = tighten(ineqs) else {
        return false;
    };
    loop {
        if cur.is_empty() {
            return true;
        }
        // Eliminate the variable producing the fewest new rows.
        let vars: BTreeSet<Var> = cur.iter().flat_map(|(p, _)| p.vars()).collect();
        let v = *vars
            .iter()
            .min_by_key(|&&v| {
                let pos = cur.iter().filter(|(p, _)| p.coeff(v).sign() > 0).count();
                let neg = cur.iter().filter(|(p, _)| p.coeff(v).sign() < 0).count();
                pos * neg
            })
            .unwrap();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = Vec::new();
        for (p, s) in cur {
            let c = p.coeff(v);
            match c.sign() {
                0 => next.push((p, s)),
                1 => pos.push((p.scale(&c.inverse().unwrap()), s)),
                _ => neg.push((p.scale(&(-&c).inverse().unwrap()), s)),
            }
        }
        for (p, sp) in &pos {
            for (q, sq) in &neg {
                next.push((p + q, *sp || *sq));
            }
        }
        match tighten(next) {
            Some(n) => cur = n,
            None => return false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: Var) -> LinearPoly {
        LinearPoly::var(v)
    }

    fn k(n: i64, d: i64) -> LinearPoly {
        LinearPoly::constant(FieldElement::from_ratio(n, d))
    }

    fn worked_example(abs_branch: i64) -> ConstraintSystem {
        // 0 ≤ x1,x2,x3; 0 = 1/2 + x1/2 - x2 + x3/2; 0 = -x1 + x2/2; x3 = ±1
        let half = FieldElement::from_ratio(1, 2);
        let mut cs = ConstraintSystem::new();
        for v in 1..=3 {
            cs.push(Constraint::ge(x(v)));
        }
        cs.push(Constraint::eq(
            &(&(&k(1, 2) + &(&x(1) * &half)) - &x(2)) + &(&x(3) * &half),
        ));
        cs.push(Constraint::eq(&(&x(2) * &half) - &x(1)));
        cs.push(Constraint::eq(&x(3) - &k(abs_branch, 1)));
        cs
    }

    #[test]
    fn trivial_systems() {
        let cs = ConstraintSystem::from_constraints([
            Constraint::ge(x(0)),
            Constraint::le(&x(0) + &k(1, 1)),
        ]);
        assert!(!cs.is_feasible());
        assert!(ConstraintSystem::new().is_feasible());
        assert_eq!(
            ConstraintSystem::from_constraints([Constraint::ge(x(0))]).solutions_if_finite(),
            Solutions::Infinite
        );
    }

    #[test]
    fn worked_example_has_one_point() {
        let cs = worked_example(1);
        assert!(cs.is_feasible());
        let expect: Assignment = [
            (1, FieldElement::from_ratio(2, 3)),
            (2, FieldElement::from_ratio(4, 3)),
            (3, FieldElement::one()),
        ]
        .into_iter()
        .collect();
        assert_eq!(cs.solutions_if_finite(), Solutions::Finite(vec![expect]));
        assert_eq!(
            worked_example(-1).solutions_if_finite(),
            Solutions::Finite(vec![])
        );
        assert!(cs.entails(&Constraint::eq(
            &x(2) - &(&x(1) * &FieldElement::from_int(2))
        )));
    }

    #[test]
    fn entailment() {
        let cs = ConstraintSystem::from_constraints([Constraint::eq(&x(0) - &k(1, 1))]);
        assert!(cs.entails(&Constraint::gt(x(0))));
        let cs = ConstraintSystem::from_constraints([Constraint::ge(x(0))]);
        assert!(!cs.entails(&Constraint::gt(x(0))));
    }

    #[test]
    fn strictness_propagates() {
        // x > 0, y > x, y ≤ 0 is infeasible only because of strictness.
        let cs = ConstraintSystem::from_constraints([
            Constraint::gt(x(0)),
            Constraint::gt(&x(1) - &x(0)),
            Constraint::le(x(1)),
        ]);
        assert!(!cs.is_feasible());
        let cs = ConstraintSystem::from_constraints([
            Constraint::ge(x(0)),
            Constraint::ge(&x(1) - &x(0)),
            Constraint::le(x(1)),
        ]);
        assert_eq!(
            cs.solutions_if_finite(),
            Solutions::Finite(vec![[(0, FieldElement::zero()), (1, FieldElement::zero())]
                .into_iter()
                .collect()])
        );
    }

    #[test]
    fn disequalities() {
        // 0 ≤ x ≤ 1 with x ≠ 0 is feasible; with x ≤ 0 it is not.
        let base = ConstraintSystem::from_constraints([
            Constraint::ge(x(0)),
            Constraint::le(&x(0) - &k(1, 1)),
        ]);
        assert!(base.with(Constraint::non_zero(vec![x(0)])).is_feasible());
        let pinned =
            ConstraintSystem::from_constraints([Constraint::ge(x(0)), Constraint::le(x(0))]);
        assert!(!pinned.with(Constraint::non_zero(vec![x(0)])).is_feasible());
        assert!(pinned
            .with(Constraint::non_zero(vec![x(0), k(1, 1)]))
            .is_feasible());
    }

    #[test]
    fn surd_coefficients() {
        // √2·x ≥ 1 and x ≤ 7/10 is infeasible since 1/√2 > 0.7.
        let r2 = FieldElement::surd(crate::numfield::Rational::from_integer(1.into()), 2).unwrap();
        let cs = ConstraintSystem::from_constraints([
            Constraint::ge(&(&x(0) * &r2) - &k(1, 1)),
            Constraint::le(&x(0) - &k(7, 10)),
        ]);
        assert!(!cs.is_feasible());
        let cs = ConstraintSystem::from_constraints([
            Constraint::ge(&(&x(0) * &r2) - &k(1, 1)),
            Constraint::le(&x(0) - &k(3, 4)),
        ]);
        assert!(cs.is_feasible());
    }
}
