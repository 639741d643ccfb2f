//! Braid systems: a pair of words, a symbolic linear map σ from the span of
//! the domain roots into V ⊗ F[x], and affine-linear constraints on the
//! variables. Includes the five operations and the predicates used by the
//! tree and forest algorithms.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::coxeter::{Gen, GroupElement, Side, TwistedSystem, Word};
use crate::error::{Error, Result};
use crate::feasibility::{Constraint, ConstraintSystem};
use crate::involutions::{
    alternating_ending, alternating_starting, braid_relations, m_theta, Mode, Theta, WordRelation,
};
use crate::numfield::{Assignment, FieldElement, LinearPoly, INFINITY};
use crate::rewriting::{involution_of, RelationIndex};

/// Coordinates of a vector in the simple-root basis.
pub type Column = Vec<LinearPoly>;

/// σ on V_J, stored column by column; `None` outside the domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicMap {
    cols: Vec<Option<Column>>,
}

fn unit(n: usize, u: Gen) -> Column {
    (0..n)
        .map(|i| {
            LinearPoly::constant(if i == u {
                FieldElement::one()
            } else {
                FieldElement::zero()
            })
        })
        .collect()
}

fn constant_of(col: &Column) -> Option<Vec<FieldElement>> {
    col.iter().map(|p| p.as_constant().cloned()).collect()
}

/// Sign of a constant vector: 1 if nonzero with nonnegative entries, -1 if
/// nonzero with nonpositive entries, 0 otherwise.
pub fn vector_sign(v: &[FieldElement]) -> i8 {
    let mut pos = false;
    let mut neg = false;
    for c in v {
        match c.sign() {
            1 => pos = true,
            -1 => neg = true,
            _ => {}
        }
    }
    match (pos, neg) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

impl SymbolicMap {
    pub fn empty(n: usize) -> Self {
        Self {
            cols: vec![None; n],
        }
    }

    /// The map α_s ↦ α_{image(s)} on the listed generators.
    pub fn permutation(n: usize, images: &[(Gen, Gen)]) -> Self {
        let mut out = Self::empty(n);
        for &(s, u) in images {
            out.cols[s] = Some(unit(n, u));
        }
        out
    }

    /// The restriction of a group element to V_J.
    pub fn restriction(w: &GroupElement, domain: &BTreeSet<Gen>) -> Self {
        let n = w.rank();
        let mut out = Self::empty(n);
        for &s in domain {
            out.cols[s] = Some(w.column(s).into_iter().map(LinearPoly::constant).collect());
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn domain(&self) -> BTreeSet<Gen> {
        (0..self.cols.len())
            .filter(|&s| self.cols[s].is_some())
            .collect()
    }

    pub fn contains(&self, s: Gen) -> bool {
        self.cols.get(s).is_some_and(|c| c.is_some())
    }

    pub fn column(&self, s: Gen) -> Option<&Column> {
        self.cols.get(s).and_then(|c| c.as_ref())
    }

    pub fn set_column(&mut self, s: Gen, col: Column) {
        self.cols[s] = Some(col);
    }

    pub fn constant_column(&self, s: Gen) -> Option<Vec<FieldElement>> {
        self.column(s).and_then(constant_of)
    }

    pub fn is_constant(&self) -> bool {
        self.cols
            .iter()
            .flatten()
            .all(|c| c.iter().all(|p| p.is_constant()))
    }

    pub fn is_identity(&self) -> bool {
        let n = self.rank();
        self.cols
            .iter()
            .enumerate()
            .all(|(s, c)| c.as_ref().is_none_or(|c| *c == unit(n, s)))
    }

    /// Whether σα_s equals ±α_u exactly.
    pub fn column_is(&self, s: Gen, u: Gen, sign: i64) -> bool {
        let Some(col) = self.column(s) else {
            return false;
        };
        let want = FieldElement::from_int(sign);
        col.iter().enumerate().all(|(i, p)| match p.as_constant() {
            Some(c) if i == u => *c == want,
            Some(c) => c.is_zero(),
            None => false,
        })
    }

    /// u·σ: the reflection in α_u applied to every column.
    pub fn reflect_left(&self, sys: &TwistedSystem, u: Gen) -> Self {
        let n = self.rank();
        let cols = self
            .cols
            .iter()
            .map(|c| {
                c.as_ref().map(|col| {
                    let mut acc = col[u].clone();
                    for t in 0..n {
                        let k = sys.two_form(u, t);
                        if !k.is_zero() && !col[t].is_zero() {
                            acc = &acc - &col[t].scale(k);
                        }
                    }
                    let mut out = col.clone();
                    out[u] = acc;
                    out
                })
            })
            .collect();
        Self { cols }
    }

    /// σ·r restricted to V_J, for r in the domain.
    pub fn reflect_right(&self, sys: &TwistedSystem, r: Gen) -> Self {
        let col_r = self
            .column(r)
            .expect("reflection generator lies in the domain")
            .clone();
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(s, c)| {
                c.as_ref().map(|col| {
                    if s == r {
                        col.iter().map(|p| -p).collect()
                    } else {
                        let k = sys.two_form(r, s);
                        if k.is_zero() {
                            col.clone()
                        } else {
                            col.iter()
                                .zip(&col_r)
                                .map(|(a, b)| a - &b.scale(k))
                                .collect()
                        }
                    }
                })
            })
            .collect();
        Self { cols }
    }

    pub fn substitute(&self, at: &Assignment) -> Self {
        let total = as_substitution(at);
        Self {
            cols: self
                .cols
                .iter()
                .map(|c| {
                    c.as_ref()
                        .map(|col| col.iter().map(|p| p.substitute(&total)).collect())
                })
                .collect(),
        }
    }

    /// Whether every column lies in V_J.
    pub fn image_within(&self, j: &BTreeSet<Gen>) -> bool {
        self.cols.iter().flatten().all(|col| {
            col.iter()
                .enumerate()
                .all(|(i, p)| j.contains(&i) || p.is_zero())
        })
    }
}

fn as_substitution(at: &Assignment) -> std::collections::BTreeMap<usize, LinearPoly> {
    at.iter()
        .map(|(v, c)| (*v, LinearPoly::constant(c.clone())))
        .collect()
}

/// Words, σ and constraints. `abs_one` holds polynomials whose absolute
/// value must equal one; they are split into ±1 branches when solving.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidSystem {
    pub left: Word,
    pub right: Word,
    pub sigma: SymbolicMap,
    pub constraints: ConstraintSystem,
    pub abs_one: Vec<LinearPoly>,
}

impl BraidSystem {
    pub fn new(left: Word, right: Word, sigma: SymbolicMap) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::Precondition(
                "braid system words differ in length".into(),
            ));
        }
        Ok(Self {
            left,
            right,
            sigma,
            constraints: ConstraintSystem::new(),
            abs_one: Vec::new(),
        })
    }

    /// The root system for the pair {s,t} and the bijection θ of {s,t}
    /// given by its shape: words (…,t,s) and (…,s,t) of length m_θ(s,t),
    /// σα_s = α_{θ(s)*}, σα_t = α_{θ(t)*}.
    pub fn root(sys: &TwistedSystem, s: Gen, t: Gen, theta: Theta) -> Result<Self> {
        let m = sys.m(s, t);
        if m == INFINITY || s == t {
            return Err(Error::Precondition(
                "root systems need distinct s,t with m(s,t) finite".into(),
            ));
        }
        let len = m_theta(m, theta) as usize;
        let (ts, tt) = match theta {
            Theta::Swap => (t, s),
            _ => (s, t),
        };
        let sigma = SymbolicMap::permutation(sys.rank(), &[(s, sys.star(ts)), (t, sys.star(tt))]);
        Self::new(
            alternating_ending(s, t, len),
            alternating_ending(t, s, len),
            sigma,
        )
    }

    pub fn domain(&self) -> BTreeSet<Gen> {
        self.sigma.domain()
    }

    pub fn is_constant(&self) -> bool {
        self.sigma.is_constant() && self.constraints.is_empty() && self.abs_one.is_empty()
    }

    /// The relation (left, ---) ~ (right, ---).
    pub fn relation(&self, sys: &TwistedSystem) -> WordRelation {
        WordRelation::new(sys, self.left.clone(), self.right.clone(), Mode::Prefix)
    }

    /// One constraint system per choice of signs for the `abs_one` entries.
    pub fn branches(&self) -> Vec<ConstraintSystem> {
        let mut out = vec![self.constraints.clone()];
        for p in &self.abs_one {
            let mut next = Vec::with_capacity(out.len() * 2);
            for cs in &out {
                for sign in [1i64, -1] {
                    let mut q = p.clone();
                    q.add_constant(&FieldElement::from_int(-sign));
                    next.push(cs.with(Constraint::eq(q)));
                }
            }
            out = next;
        }
        out
    }

    /// Operation (1): adjoin r ∈ ∂J with σα_r = -Σ x_s α_s.
    pub fn down(&self, sys: &TwistedSystem, r: Gen) -> Result<Self> {
        if !self.is_constant() {
            return Err(Error::Precondition(
                "down needs a constant braid system".into(),
            ));
        }
        let domain = self.domain();
        if !sys.boundary(&domain).contains(&r) {
            return Err(Error::Precondition(format!(
                "{} is not in the boundary of the domain",
                sys.label(r)
            )));
        }
        let n = sys.rank();
        let col_r: Column = (0..n)
            .map(|s| LinearPoly::term(s, FieldElement::from_int(-1)))
            .collect();
        let mut out = self.clone();
        for s in sys.gens() {
            out.constraints.push(Constraint::ge(LinearPoly::var(s)));
        }
        for &s in &domain {
            let col_s = self.sigma.constant_column(s).unwrap();
            // (σ'α_r, σα_s) - (α_r, α_s) = 0
            let mut p = LinearPoly::constant(-sys.form(r, s));
            for a in 0..n {
                let mut w = FieldElement::zero();
                for (b, cb) in col_s.iter().enumerate() {
                    if !cb.is_zero() {
                        w += &(cb * sys.form(a, b));
                    }
                }
                if !w.is_zero() {
                    p = &p + &col_r[a].scale(&w);
                }
            }
            out.constraints.push(Constraint::eq(p));
        }
        out.sigma.set_column(r, col_r);
        if domain.len() + 1 == n {
            let det = determinant_linear(&out.sigma, r, n);
            let det = match det.terms().values().next() {
                Some(c) if c.sign() < 0 => -&det,
                _ => det,
            };
            out.abs_one.push(det);
        }
        Ok(out)
    }

    /// Operation (2): keep the words and require σα_r ≥ 0.
    pub fn asc(&self, r: Gen) -> Self {
        let mut out = self.clone();
        for p in self.sigma.column(r).expect("r in domain") {
            out.constraints.push(Constraint::ge(p.clone()));
        }
        out
    }

    /// Operation (3): prepend r, σ' = r*σ, require σα_r = -α_{r*}.
    pub fn des(&self, sys: &TwistedSystem, r: Gen) -> Self {
        let rs = sys.star(r);
        let mut out = self.prepended(r);
        for (i, p) in self
            .sigma
            .column(r)
            .expect("r in domain")
            .iter()
            .enumerate()
        {
            let mut q = p.clone();
            if i == rs {
                q.add_constant(&FieldElement::one());
            }
            out.constraints.push(Constraint::eq(q));
        }
        out.sigma = self.sigma.reflect_left(sys, rs);
        out
    }

    /// Operation (4): prepend r, σ' = r*σr, require -α_{r*} ≠ σα_r ≤ 0.
    pub fn hdes(&self, sys: &TwistedSystem, r: Gen) -> Self {
        let rs = sys.star(r);
        let mut out = self.prepended(r);
        let col = self.sigma.column(r).expect("r in domain");
        for p in col {
            out.constraints.push(Constraint::le(p.clone()));
        }
        let shifted: Vec<LinearPoly> = col
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut q = p.clone();
                if i == rs {
                    q.add_constant(&FieldElement::one());
                }
                q
            })
            .collect();
        out.constraints.push(Constraint::non_zero(shifted));
        out.sigma = self.sigma.reflect_right(sys, r).reflect_left(sys, rs);
        out
    }

    fn prepended(&self, r: Gen) -> Self {
        let mut out = self.clone();
        out.left.insert(0, r);
        out.right.insert(0, r);
        out
    }

    /// Operation (5): evaluate at ψ and drop constraints that became true.
    pub fn substitute(&self, psi: &Assignment) -> Result<Self> {
        let total = as_substitution(psi);
        let mut constraints = ConstraintSystem::new();
        for c in self.constraints.constraints() {
            let c = c.substitute(&total);
            match c.constant_truth() {
                Some(true) => {}
                Some(false) => return Err(Error::Precondition(format!("assignment violates {c}"))),
                None => constraints.push(c),
            }
        }
        let mut abs_one = Vec::new();
        for p in &self.abs_one {
            let q = p.substitute(&total);
            match q.as_constant() {
                Some(c) if c.abs().is_one() => {}
                Some(_) => return Err(Error::Precondition("assignment violates |det| = 1".into())),
                None => abs_one.push(q),
            }
        }
        Ok(Self {
            left: self.left.clone(),
            right: self.right.clone(),
            sigma: self.sigma.substitute(psi),
            constraints,
            abs_one,
        })
    }

    /// Both words reduced and some solution makes σ root-preserving.
    pub fn is_valid(&self, sys: &TwistedSystem) -> bool {
        sys.is_reduced(&self.left) && sys.is_reduced(&self.right) && self.has_solution()
    }

    /// Some assignment satisfies the constraints and makes every column a
    /// nonzero vector of one sign.
    pub fn has_solution(&self) -> bool {
        let mut open = Vec::new();
        for s in self.domain() {
            let col = self.sigma.column(s).unwrap();
            match constant_of(col) {
                Some(v) => {
                    if vector_sign(&v) == 0 {
                        return false;
                    }
                }
                None => open.push(col.clone()),
            }
        }
        self.branches().iter().any(|cs| sign_search(cs, &open))
    }

    /// Generators of the domain whose column is a constant negative vector.
    pub fn descent_set(&self) -> BTreeSet<Gen> {
        self.domain()
            .into_iter()
            .filter(|&s| {
                self.sigma
                    .constant_column(s)
                    .is_some_and(|v| vector_sign(&v) < 0)
            })
            .collect()
    }

    /// σ is the identity and both words are involution words of one element.
    pub fn is_trivial(&self, sys: &TwistedSystem) -> bool {
        if !self.sigma.is_identity() || !self.constraints.is_empty() || !self.abs_one.is_empty() {
            return false;
        }
        match (
            involution_of(sys, &self.left),
            involution_of(sys, &self.right),
        ) {
            (Some(a), Some(b)) => a.element == b.element,
            _ => false,
        }
    }

    /// The σ-relations: prefix relations (r,s,…,t,---) ~ (s,r,…,t,---) for
    /// r,s in the domain whose columns are the simple roots α_{θ(r)*},
    /// α_{θ(s)*} with m_θ(r,s) < m(r,s) < ∞, and any t in the domain.
    pub fn sigma_relations(&self, sys: &TwistedSystem) -> Vec<WordRelation> {
        let domain: Vec<Gen> = self.domain().into_iter().collect();
        let mut out = Vec::new();
        for (i, &r) in domain.iter().enumerate() {
            for &s in &domain[i + 1..] {
                let m = sys.m(r, s);
                if m == INFINITY {
                    continue;
                }
                let theta = if self.sigma.column_is(r, sys.star(r), 1)
                    && self.sigma.column_is(s, sys.star(s), 1)
                {
                    Theta::Identity
                } else if self.sigma.column_is(r, sys.star(s), 1)
                    && self.sigma.column_is(s, sys.star(r), 1)
                {
                    Theta::Swap
                } else {
                    continue;
                };
                let mt = m_theta(m, theta);
                if mt >= m {
                    continue;
                }
                for &t in &domain {
                    let mut a = alternating_starting(r, s, mt as usize);
                    let mut b = alternating_starting(s, r, mt as usize);
                    a.push(t);
                    b.push(t);
                    out.push(WordRelation::new(sys, a, b, Mode::Prefix));
                }
            }
        }
        out
    }

    /// Some word σ-equivalent to the left word ends in s′ and some word
    /// σ-equivalent to the right word ends in t′ with s′ = t′ or
    /// m(s,t) < m(s′,t′) < ∞, where s, t end the two words.
    pub fn is_redundant(&self, sys: &TwistedSystem) -> bool {
        let (Some(&s), Some(&t)) = (self.left.last(), self.right.last()) else {
            return false;
        };
        let rels = self.sigma_relations(sys);
        let (Some(ls), Some(rs)) = (
            last_letters(sys, &self.left, &rels),
            last_letters(sys, &self.right, &rels),
        ) else {
            return false;
        };
        let m0 = sys.m(s, t);
        ls.iter().any(|&a| {
            rs.iter().any(|&b| {
                let m = sys.m(a, b);
                a == b || (m != INFINITY && (m0 == INFINITY || m0 < m))
            })
        })
    }

    pub fn display<'a>(&'a self, sys: &'a TwistedSystem) -> SystemDisplay<'a> {
        SystemDisplay { b: self, sys }
    }
}

/// det of the square map whose columns are constant except column `r`,
/// as a linear polynomial (cofactor expansion along column r).
fn determinant_linear(sigma: &SymbolicMap, r: Gen, n: usize) -> LinearPoly {
    let mut out = LinearPoly::zero();
    let col_r = sigma.column(r).unwrap();
    for (t, entry) in col_r.iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let mut m: Vec<Vec<FieldElement>> = (0..n)
            .map(|j| {
                if j == r {
                    (0..n)
                        .map(|i| {
                            if i == t {
                                FieldElement::one()
                            } else {
                                FieldElement::zero()
                            }
                        })
                        .collect()
                } else {
                    sigma.constant_column(j).unwrap()
                }
            })
            .collect();
        let d = determinant(&mut m);
        if !d.is_zero() {
            out = &out + &entry.scale(&d);
        }
    }
    out
}

/// Determinant by Gaussian elimination (the matrix is consumed).
fn determinant(m: &mut [Vec<FieldElement>]) -> FieldElement {
    let n = m.len();
    let mut det = FieldElement::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return FieldElement::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det = &det * &pivot;
        let inv = pivot.inverse().unwrap();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for k in c..n {
                let sub = &f * &m[c][k];
                m[r][k] = &m[r][k] - &sub;
            }
        }
    }
    det
}

/// Depth-first choice of a sign for each open column, pruning on
/// feasibility. A column is ≥ 0 and nonzero iff it is ≥ 0 with positive sum.
fn sign_search(cs: &ConstraintSystem, open: &[Column]) -> bool {
    if !cs.is_feasible() {
        return false;
    }
    let Some((col, rest)) = open.split_first() else {
        return true;
    };
    let sum = col.iter().fold(LinearPoly::zero(), |acc, p| &acc + p);
    for sign in [1i64, -1] {
        let f = FieldElement::from_int(sign);
        let mut next = cs.clone();
        for p in col {
            next.push(Constraint::ge(p.scale(&f)));
        }
        next.push(Constraint::gt(sum.scale(&f)));
        if sign_search(&next, rest) {
            return true;
        }
    }
    false
}

/// Cap on words visited when a σ-class leaves the reduced words.
const WORD_CLASS_LIMIT: usize = 200_000;

/// Last letters over the σ-equivalence class of `word`; `None` if the class
/// could not be explored within the limit.
fn last_letters(
    sys: &TwistedSystem,
    word: &[Gen],
    sigma_rels: &[WordRelation],
) -> Option<BTreeSet<Gen>> {
    if sys.is_reduced(word) {
        if let Some(out) = last_letters_reduced(sys, word, sigma_rels) {
            return Some(out);
        }
    }
    let mut rels = braid_relations(sys);
    rels.extend(sigma_rels.iter().cloned());
    let class = RelationIndex::new(&rels)
        .class(word, WORD_CLASS_LIMIT)
        .ok()?;
    Some(class.iter().filter_map(|w| w.last().copied()).collect())
}

/// The class of a reduced word under braid moves is the set of reduced
/// words of its element, so the search runs over elements; `None` if a
/// σ-relation produces a non-reduced word.
fn last_letters_reduced(
    sys: &TwistedSystem,
    word: &[Gen],
    sigma_rels: &[WordRelation],
) -> Option<BTreeSet<Gen>> {
    let start = sys.element(word);
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = BTreeSet::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(w) = queue.pop_front() {
        out.extend(w.right_descents());
        for rel in sigma_rels {
            for (from, to) in [(&rel.left, &rel.right), (&rel.right, &rel.left)] {
                // Does some reduced word of w begin with `from`?
                let mut u = w.clone();
                let mut ok = true;
                for &g in from {
                    if !u.is_left_descent(g) {
                        ok = false;
                        break;
                    }
                    u = u.mul_gen(sys, g, Side::Left);
                }
                if !ok {
                    continue;
                }
                let v = u.mul_word(sys, to, Side::Left);
                if v.length() != w.length() {
                    return None;
                }
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
    }
    Some(out)
}

/// Writes a polynomial with variables named by generator labels.
pub fn format_poly(sys: &TwistedSystem, p: &LinearPoly) -> String {
    let mut parts: Vec<String> = Vec::new();
    let c = p.constant_part();
    if !c.is_zero() || p.terms().is_empty() {
        parts.push(c.to_string());
    }
    for (v, k) in p.terms() {
        let name = format!("x{}", sys.label(*v));
        parts.push(if k.is_one() {
            name
        } else if (-k).is_one() {
            format!("-{name}")
        } else {
            format!("({k})*{name}")
        });
    }
    parts.join(" + ").replace("+ -", "- ")
}

/// Writes a column as a combination of simple roots.
pub fn format_column(sys: &TwistedSystem, col: &Column) -> String {
    let mut parts = Vec::new();
    for (i, p) in col.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let root = format!("a{}", sys.label(i));
        parts.push(match p.as_constant() {
            Some(c) if c.is_one() => root,
            Some(c) if (-c).is_one() => format!("-{root}"),
            _ => format!("({})*{root}", format_poly(sys, p)),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Writes a constraint with variables named by generator labels.
pub fn format_constraint(sys: &TwistedSystem, c: &Constraint) -> String {
    match c {
        Constraint::Cmp { poly, rel } => format!("{} {} 0", format_poly(sys, poly), rel.symbol()),
        Constraint::NonZero(v) => {
            let parts: Vec<String> = v.iter().map(|p| format_poly(sys, p)).collect();
            format!("[{}] != 0", parts.join(", "))
        }
    }
}

pub struct SystemDisplay<'a> {
    b: &'a BraidSystem,
    sys: &'a TwistedSystem,
}

impl fmt::Display for SystemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (b, sys) = (self.b, self.sys);
        writeln!(f, "s | {}", sys.format_word(&b.left))?;
        writeln!(f, "t | {}", sys.format_word(&b.right))?;
        for s in b.domain() {
            writeln!(
                f,
                "  a{} -> {}",
                sys.label(s),
                format_column(sys, b.sigma.column(s).unwrap())
            )?;
        }
        for c in b.constraints.constraints() {
            writeln!(f, "  {}", format_constraint(sys, c))?;
        }
        for p in &b.abs_one {
            writeln!(f, "  1 = |{}|", format_poly(sys, p))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::preset;
    use crate::feasibility::Solutions;

    fn fe(n: i64, d: i64) -> FieldElement {
        FieldElement::from_ratio(n, d)
    }

    fn consts(v: &[(i64, i64)]) -> Column {
        v.iter()
            .map(|&(n, d)| LinearPoly::constant(fe(n, d)))
            .collect()
    }

    #[test]
    fn roots_of_a3() {
        let sys = preset("A", 3, "id").unwrap();
        let b = BraidSystem::root(&sys, 0, 1, Theta::Identity).unwrap();
        assert_eq!((b.left.clone(), b.right.clone()), (vec![1, 0], vec![0, 1]));
        assert!(b.sigma.is_identity());
        assert!(b.is_trivial(&sys));
        assert!(!b.is_redundant(&sys));
        let b2 = BraidSystem::root(&sys, 0, 1, Theta::Swap).unwrap();
        assert!(b2.sigma.column_is(0, 1, 1) && b2.sigma.column_is(1, 0, 1));
        assert!(!b2.is_trivial(&sys));
        assert!(!b2.is_redundant(&sys));
    }

    #[test]
    fn worked_example_down_step() {
        let sys = preset("A", 3, "id").unwrap();
        let b = BraidSystem::root(&sys, 0, 1, Theta::Identity)
            .unwrap()
            .down(&sys, 2)
            .unwrap();
        let shown: Vec<String> = b
            .constraints
            .constraints()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(shown.len(), 5);
        assert_eq!(b.abs_one.len(), 1);
        assert_eq!(format_poly(&sys, &b.abs_one[0]), "x3");
        let sols: Vec<Assignment> = b
            .branches()
            .iter()
            .flat_map(|cs| match cs.solutions_if_finite() {
                Solutions::Finite(v) => v,
                Solutions::Infinite => panic!("expected finitely many"),
            })
            .collect();
        assert_eq!(sols.len(), 1);
        let leaf = b.substitute(&sols[0]).unwrap();
        assert!(leaf.is_constant());
        assert_eq!(
            leaf.sigma.column(2).unwrap(),
            &consts(&[(-2, 3), (-4, 3), (-1, 1)])
        );
        assert_eq!(leaf.descent_set(), [2].into_iter().collect());
        let b1 = leaf.hdes(&sys, 2);
        assert_eq!(
            (b1.left.clone(), b1.right.clone()),
            (vec![2, 1, 0], vec![2, 0, 1])
        );
        assert_eq!(
            b1.sigma.column(1).unwrap(),
            &consts(&[(-2, 3), (-1, 3), (2, 3)])
        );
        assert_eq!(
            b1.sigma.column(2).unwrap(),
            &consts(&[(2, 3), (4, 3), (1, 3)])
        );
    }

    #[test]
    fn swap_branch_reaches_b2() {
        let sys = preset("A", 3, "id").unwrap();
        let b = BraidSystem::root(&sys, 0, 1, Theta::Swap)
            .unwrap()
            .down(&sys, 2)
            .unwrap();
        let psi: Assignment = [(0, fe(1, 1)), (1, fe(1, 1)), (2, fe(1, 1))]
            .into_iter()
            .collect();
        let leaf = b.substitute(&psi).unwrap();
        assert_eq!(
            leaf.sigma.column(2).unwrap(),
            &consts(&[(-1, 1), (-1, 1), (-1, 1)])
        );
        let b1 = leaf.hdes(&sys, 2);
        assert_eq!(
            b1.sigma.column(0).unwrap(),
            &consts(&[(0, 1), (1, 1), (1, 1)])
        );
        assert_eq!(
            b1.sigma.column(1).unwrap(),
            &consts(&[(0, 1), (-1, 1), (0, 1)])
        );
        assert_eq!(
            b1.sigma.column(2).unwrap(),
            &consts(&[(1, 1), (1, 1), (0, 1)])
        );
        assert!(b1.sigma.column_is(1, 1, -1));
        let b2 = b1.des(&sys, 1);
        assert_eq!(
            (b2.left.clone(), b2.right.clone()),
            (vec![1, 2, 1, 0], vec![1, 2, 0, 1])
        );
        assert!(
            b2.sigma.column_is(0, 2, 1)
                && b2.sigma.column_is(1, 1, 1)
                && b2.sigma.column_is(2, 0, 1)
        );
        let b2 = b2.substitute(&Assignment::new()).unwrap();
        assert!(b2.is_valid(&sys));
        assert!(b2.descent_set().is_empty());
        assert!(!b2.is_redundant(&sys));
        assert!(!b2.is_trivial(&sys));
    }

    #[test]
    fn self_norm_constraint_is_implied_on_the_examples() {
        let sys = preset("A", 3, "id").unwrap();
        for theta in [Theta::Identity, Theta::Swap] {
            let b = BraidSystem::root(&sys, 0, 1, theta)
                .unwrap()
                .down(&sys, 2)
                .unwrap();
            let before: Vec<Solutions> = b
                .branches()
                .iter()
                .map(|cs| cs.solutions_if_finite())
                .collect();
            // (σα_3, σα_3) = 1 is quadratic; check it at the unique point.
            let pts: Vec<Assignment> = before
                .iter()
                .flat_map(|s| match s {
                    Solutions::Finite(v) => v.clone(),
                    Solutions::Infinite => vec![],
                })
                .collect();
            assert_eq!(pts.len(), 1);
            let col: Vec<FieldElement> = (0..3).map(|i| -pts[0][&i].clone()).collect();
            let mut norm = FieldElement::zero();
            for a in 0..3 {
                for c in 0..3 {
                    norm += &(&(&col[a] * &col[c]) * sys.form(a, c));
                }
            }
            assert!(norm.is_one());
        }
    }

    #[test]
    fn invalid_and_redundant_cases() {
        let sys = preset("A", 3, "id").unwrap();
        let id = SymbolicMap::permutation(3, &[(0, 0), (1, 1)]);
        let b = BraidSystem::new(vec![0, 0], vec![1, 1], id.clone()).unwrap();
        assert!(!b.is_valid(&sys));
        let b = BraidSystem::new(vec![1, 0], vec![2, 0], id).unwrap();
        assert!(b.is_redundant(&sys));
        assert!(BraidSystem::new(vec![0], vec![0, 1], SymbolicMap::empty(3)).is_err());
    }

    #[test]
    fn down_rejects_non_boundary() {
        let sys = preset("A", 4, "id").unwrap();
        let b = BraidSystem::root(&sys, 0, 1, Theta::Identity).unwrap();
        assert!(b.down(&sys, 3).is_err());
        let d = b.down(&sys, 2).unwrap();
        assert!(d.abs_one.is_empty());
        assert!(d.down(&sys, 3).is_err());
    }

    #[test]
    fn reflections_match_group_action() {
        let sys = preset("B", 3, "id").unwrap();
        let w = sys.element(&[0, 1, 2, 1]);
        let dom: BTreeSet<Gen> = [0, 1, 2].into_iter().collect();
        let sigma = SymbolicMap::restriction(&w, &dom);
        let left = sigma.reflect_left(&sys, 2);
        assert_eq!(
            left,
            SymbolicMap::restriction(&w.mul_gen(&sys, 2, Side::Left), &dom)
        );
        let right = sigma.reflect_right(&sys, 0);
        assert_eq!(
            right,
            SymbolicMap::restriction(&w.mul_gen(&sys, 0, Side::Right), &dom)
        );
    }
}
