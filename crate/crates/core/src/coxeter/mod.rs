//! Twisted Coxeter systems and their geometric representation.

mod automorphisms;
mod element;
pub mod presets;

pub use automorphisms::standard_automorphisms;
pub use element::{GroupElement, Side};
pub use presets::preset;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::numfield::{make_cos, BondOrder, FieldElement};

/// Index of a generator within its system.
pub type Gen = usize;

/// A finite sequence of generators.
pub type Word = Vec<Gen>;

/// A Coxeter matrix with a diagram involution and a total order on the
/// generators.
#[derive(Clone, Debug)]
pub struct TwistedSystem {
    name: String,
    labels: Vec<String>,
    m: Vec<Vec<BondOrder>>,
    twist: Vec<Gen>,
    order: Vec<Gen>,
    rank_of: Vec<usize>,
    form: Vec<Vec<FieldElement>>,
    two_form: Vec<Vec<FieldElement>>,
}

impl TwistedSystem {
    /// Validates the matrix and twist. `order` lists the generators from
    /// least to greatest; `None` keeps index order.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        m: Vec<Vec<BondOrder>>,
        twist: Vec<Gen>,
        order: Option<Vec<Gen>>,
    ) -> Result<Self> {
        let n = labels.len();
        let bad = |msg: String| Err(Error::InvalidSystem(msg));
        if n == 0 || n > 63 {
            return bad(format!("rank {n} is out of range"));
        }
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return bad("Coxeter matrix has the wrong shape".into());
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != n {
            return bad("generator labels are not distinct".into());
        }
        let mut form = vec![vec![FieldElement::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = m[i][j];
                if v != m[j][i] {
                    return bad(format!("m({},{}) is not symmetric", labels[i], labels[j]));
                }
                if (i == j) != (v == 1) {
                    return bad(format!(
                        "m({},{}) = {v} is not allowed",
                        labels[i], labels[j]
                    ));
                }
                form[i][j] = make_cos(v)?;
            }
        }
        if twist.len() != n || twist.iter().any(|&t| t >= n) {
            return bad("twist has the wrong length".into());
        }
        for i in 0..n {
            if twist[twist[i]] != i {
                return bad("twist is not an involution".into());
            }
            for j in 0..n {
                if m[twist[i]][twist[j]] != m[i][j] {
                    return bad("twist does not preserve the Coxeter matrix".into());
                }
            }
        }
        let order = order.unwrap_or_else(|| (0..n).collect());
        let mut rank_of = vec![usize::MAX; n];
        for (k, &g) in order.iter().enumerate() {
            if g >= n || rank_of[g] != usize::MAX {
                return bad("order is not a permutation of the generators".into());
            }
            rank_of[g] = k;
        }
        if order.len() != n {
            return bad("order is not a permutation of the generators".into());
        }
        let two = FieldElement::from_int(2);
        let two_form = form
            .iter()
            .map(|row| row.iter().map(|x| x * &two).collect())
            .collect();
        Ok(Self {
            name: name.into(),
            labels,
            m,
            twist,
            order,
            rank_of,
            form,
            two_form,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn gens(&self) -> std::ops::Range<Gen> {
        0..self.rank()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: Gen) -> &str {
        &self.labels[g]
    }

    pub fn gen(&self, label: &str) -> Result<Gen> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    pub fn m(&self, s: Gen, t: Gen) -> BondOrder {
        self.m[s][t]
    }

    pub fn matrix(&self) -> &[Vec<BondOrder>] {
        &self.m
    }

    pub fn star(&self, s: Gen) -> Gen {
        self.twist[s]
    }

    pub fn twist(&self) -> &[Gen] {
        &self.twist
    }

    pub fn twist_is_identity(&self) -> bool {
        self.twist.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// (α_s, α_t).
    pub fn form(&self, s: Gen, t: Gen) -> &FieldElement {
        &self.form[s][t]
    }

    /// 2(α_s, α_t).
    pub fn two_form(&self, s: Gen, t: Gen) -> &FieldElement {
        &self.two_form[s][t]
    }

    pub fn order(&self) -> &[Gen] {
        &self.order
    }

    /// Position of `g` in the total order.
    pub fn ord(&self, g: Gen) -> usize {
        self.rank_of[g]
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_order(&self, order: Vec<Gen>) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.labels.clone(),
            self.m.clone(),
            self.twist.clone(),
            Some(order),
        )
    }

    pub fn with_twist(&self, twist: Vec<Gen>) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.labels.clone(),
            self.m.clone(),
            twist,
            Some(self.order.clone()),
        )
    }

    /// Generators sorted by the total order.
    pub fn sort_gens(&self, gens: &mut [Gen]) {
        gens.sort_by_key(|&g| self.rank_of[g]);
    }

    /// Lexicographic comparison of words with respect to the generator order,
    /// shorter words first.
    pub fn cmp_words(&self, a: &[Gen], b: &[Gen]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            a.iter()
                .map(|&g| self.rank_of[g])
                .cmp(b.iter().map(|&g| self.rank_of[g]))
        })
    }

    pub fn sort_words(&self, words: &mut [Word]) {
        words.sort_by(|a, b| self.cmp_words(a, b));
    }

    pub fn format_word(&self, w: &[Gen]) -> String {
        let parts: Vec<&str> = w.iter().map(|&g| self.label(g)).collect();
        format!("({})", parts.join(","))
    }

    /// Parses "1,2,3", "(1,2,3)" or "1 2 3".
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
        trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| self.gen(p))
            .collect()
    }

    /// ∂J: generators outside J joined to J by a bond of order > 2.
    pub fn boundary(&self, j: &BTreeSet<Gen>) -> BTreeSet<Gen> {
        self.gens()
            .filter(|r| !j.contains(r) && j.iter().any(|&s| self.m[*r][s] > 2))
            .collect()
    }

    pub fn is_finite_type(&self) -> bool {
        // Sylvester's criterion on the Gram matrix of the simple roots.
        let n = self.rank();
        let mut a: Vec<Vec<FieldElement>> = self.form.clone();
        for k in 0..n {
            if a[k][k].sign() <= 0 {
                return false;
            }
            let inv = a[k][k].inverse().unwrap();
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] * &inv;
                for j in k..n {
                    let d = &f * &a[k][j];
                    a[i][j] -= &d;
                }
            }
        }
        true
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.rank())
    }

    /// Group product of the letters of `w`.
    pub fn element(&self, w: &[Gen]) -> GroupElement {
        let mut x = self.identity();
        for &s in w {
            x = x.mul_gen(self, s, Side::Right);
        }
        x
    }

    pub fn is_reduced(&self, w: &[Gen]) -> bool {
        let mut x = self.identity();
        for &s in w {
            if x.is_right_descent(s) {
                return false;
            }
            x = x.mul_gen(self, s, Side::Right);
        }
        true
    }

    /// Demazure product of the letters of `w`.
    pub fn demazure_word(&self, w: &[Gen]) -> GroupElement {
        let mut x = self.identity();
        for &s in w {
            if !x.is_right_descent(s) {
                x = x.mul_gen(self, s, Side::Right);
            }
        }
        x
    }

    /// v∘w.
    pub fn demazure(&self, v: &GroupElement, w: &GroupElement) -> GroupElement {
        let mut x = v.clone();
        for s in w.reduced_word(self) {
            if !x.is_right_descent(s) {
                x = x.mul_gen(self, s, Side::Right);
            }
        }
        x
    }

    /// Every element of a finite group, grouped by length.
    pub fn all_elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite_type() {
            return Err(Error::Unbounded("listing all group elements"));
        }
        self.elements_up_to(usize::MAX)
    }

    /// Every element of length at most `bound`, in breadth-first order.
    pub fn elements_up_to(&self, bound: usize) -> Result<Vec<GroupElement>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = vec![self.identity()];
        seen.insert(self.identity());
        let mut frontier = 0;
        while frontier < out.len() {
            let x = out[frontier].clone();
            frontier += 1;
            if x.length() >= bound {
                continue;
            }
            for s in self.gens() {
                if x.is_right_descent(s) {
                    continue;
                }
                let y = x.mul_gen(self, s, Side::Right);
                if seen.insert(y.clone()) {
                    out.push(y);
                }
            }
        }
        Ok(out)
    }

    /// u ≤ w in Bruhat order, via the lifting property.
    pub fn bruhat_le(&self, u: &GroupElement, w: &GroupElement) -> bool {
        let mut u = u.clone();
        let mut w = w.clone();
        loop {
            if u.length() > w.length() {
                return false;
            }
            if w.length() == 0 {
                return u.length() == 0;
            }
            if u.length() == w.length() {
                return u == w;
            }
            let s = self.gens().find(|&s| w.is_right_descent(s)).unwrap();
            if u.is_right_descent(s) {
                u = u.mul_gen(self, s, Side::Right);
            }
            w = w.mul_gen(self, s, Side::Right);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: usize) -> TwistedSystem {
        preset("A", n, "id").unwrap()
    }

    #[test]
    fn reduced_words() {
        let s = a(3);
        assert!(s.is_reduced(&[0, 1, 0]));
        assert!(!s.is_reduced(&[0, 0]));
        assert!(s.is_reduced(&[1, 0, 2, 1, 0]));
        assert!(!s.is_reduced(&[0, 1, 0, 1]));
    }

    #[test]
    fn demazure_examples() {
        let s = a(2);
        let s1 = s.element(&[0]);
        assert_eq!(s.demazure(&s1, &s1), s1);
        let id = s.identity();
        let w = s.element(&[0, 1]);
        assert_eq!(s.demazure(&id, &w), w);
        let v = s.element(&[1, 0]);
        assert_eq!(s.demazure(&w, &v), s.element(&[0, 1, 0]));
    }

    #[test]
    fn finite_type_detection() {
        assert!(a(4).is_finite_type());
        assert!(preset("H", 4, "id").unwrap().is_finite_type());
        assert!(!preset("affine-A", 2, "id").unwrap().is_finite_type());
        assert!(!preset("affine-G", 2, "id").unwrap().is_finite_type());
    }

    #[test]
    fn group_orders() {
        let count = |t: &str, n: usize| preset(t, n, "id").unwrap().all_elements().unwrap().len();
        assert_eq!(count("A", 3), 24);
        assert_eq!(count("B", 3), 48);
        assert_eq!(count("H", 3), 120);
        assert_eq!(count("D", 4), 192);
        assert_eq!(count("G", 2), 12);
    }

    #[test]
    fn bruhat_small_cases() {
        let s = a(2);
        let e = s.identity();
        let w0 = s.element(&[0, 1, 0]);
        for x in s.all_elements().unwrap() {
            assert!(s.bruhat_le(&e, &x));
            assert!(s.bruhat_le(&x, &w0));
        }
        assert!(!s.bruhat_le(&s.element(&[0]), &s.element(&[1])));
        assert!(s.bruhat_le(&s.element(&[1]), &s.element(&[0, 1])));
    }

    #[test]
    fn word_parsing() {
        let s = preset("affine-C", 4, "reverse").unwrap();
        let w = s.parse_word("(2,1,3,2)").unwrap();
        assert_eq!(s.format_word(&w), "(2,1,3,2)");
        assert!(s.parse_word("9").is_err());
    }
}
