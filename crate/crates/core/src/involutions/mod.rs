//! Twisted involutions, involution words and Hecke words.

mod exceptional;
mod hecke;
mod relations;

pub use exceptional::{exceptional_relations, ExceptionalKind, EXCEPTIONAL_PATTERNS};
pub use hecke::{enumerate_hecke_words, reduced_words};
pub use relations::{
    braid_relations, generalized_relations, half_braid_relations, hat_relations, m_theta,
    mixed_relations, Mode, Theta, WordRelation,
};

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::coxeter::{Gen, GroupElement, Side, TwistedSystem, Word};
use crate::error::{Error, Result};
use crate::numfield::{BondOrder, FieldElement, INFINITY};

/// An element w with w* = w⁻¹ together with its hat-length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedInvolution {
    pub element: GroupElement,
    pub hat_length: usize,
}

impl TwistedInvolution {
    pub fn identity(sys: &TwistedSystem) -> Self {
        Self {
            element: sys.identity(),
            hat_length: 0,
        }
    }

    /// The element s*∘…∘s₁*∘s₁∘…∘s_n of an arbitrary word.
    pub fn from_word(sys: &TwistedSystem, word: &[Gen]) -> Self {
        let mut y = Self::identity(sys);
        for &s in word {
            if !y.element.is_right_descent(s) {
                y = y.up(sys, s);
            }
        }
        y
    }

    /// Whether `y·α_s` is exactly ±α_{s*}.
    fn commutes_with(&self, sys: &TwistedSystem, s: Gen, sign: i64) -> bool {
        let target = sys.star(s);
        let unit = FieldElement::from_int(sign);
        (0..sys.rank()).all(|i| {
            let e = self.element.entry(i, s);
            if i == target {
                *e == unit
            } else {
                e.is_zero()
            }
        })
    }

    /// s*∘y∘s for s ∉ Des_R(y).
    pub fn up(&self, sys: &TwistedSystem, s: Gen) -> Self {
        debug_assert!(!self.element.is_right_descent(s));
        let element = if self.commutes_with(sys, s, 1) {
            self.element.mul_gen(sys, s, Side::Right)
        } else {
            self.element
                .mul_gen(sys, s, Side::Right)
                .mul_gen(sys, sys.star(s), Side::Left)
        };
        Self {
            element,
            hat_length: self.hat_length + 1,
        }
    }

    /// The unique v with v < s*∘v∘s = y, for s ∈ Des_R(y).
    pub fn down(&self, sys: &TwistedSystem, s: Gen) -> Self {
        debug_assert!(self.element.is_right_descent(s));
        let element = if self.commutes_with(sys, s, -1) {
            self.element.mul_gen(sys, s, Side::Right)
        } else {
            self.element
                .mul_gen(sys, s, Side::Right)
                .mul_gen(sys, sys.star(s), Side::Left)
        };
        Self {
            element,
            hat_length: self.hat_length - 1,
        }
    }

    /// The up-step when s is an ascent, otherwise the down-step partner.
    pub fn step(&self, sys: &TwistedSystem, s: Gen) -> Self {
        if self.element.is_right_descent(s) {
            self.down(sys, s)
        } else {
            self.up(sys, s)
        }
    }

    pub fn descents(&self) -> Vec<Gen> {
        self.element.right_descents()
    }

    /// θ(s) for θ(w) = (ywy⁻¹)*, when ysy⁻¹ is a simple reflection.
    pub fn theta(&self, sys: &TwistedSystem, s: Gen) -> Option<Gen> {
        let col = self.element.column(s);
        let mut hit = None;
        for (i, c) in col.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if hit.is_some()
                || c.as_rational()
                    .is_none_or(|q| !num_traits::One::is_one(&num_traits::Signed::abs(&q)))
            {
                return None;
            }
            hit = Some(i);
        }
        hit.map(|u| sys.star(u))
    }

    pub fn theta_shape(&self, sys: &TwistedSystem, s: Gen, t: Gen) -> Theta {
        match (self.theta(sys, s), self.theta(sys, t)) {
            (Some(a), Some(b)) if a == s && b == t => Theta::Identity,
            (Some(a), Some(b)) if a == t && b == s => Theta::Swap,
            _ => Theta::Other,
        }
    }
}

/// Case tags of the three-way split for z over y along {s,t}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCase {
    /// z = Δ*yΔ, ℓ(z) = ℓ(y) + 2ℓ(Δ).
    Conjugate,
    /// z = yΔ = Δ*y, ℓ(z) = ℓ(y) + ℓ(Δ).
    Commuting,
    /// ℓ(z) = ℓ(y) + 2ℓ(Δ) − 1.
    Mixed,
}

#[derive(Clone, Debug)]
pub struct PairClassification {
    pub case: PairCase,
    pub theta: Theta,
    pub m_theta: BondOrder,
    pub z: TwistedInvolution,
}

/// The alternating word of length `len` ending in `last`, with `other` as
/// the second letter type.
pub fn alternating_ending(last: Gen, other: Gen, len: usize) -> Word {
    (0..len)
        .map(|i| {
            if (len - 1 - i).is_multiple_of(2) {
                last
            } else {
                other
            }
        })
        .collect()
}

/// The alternating word of length `len` starting with `first`.
pub fn alternating_starting(first: Gen, other: Gen, len: usize) -> Word {
    (0..len)
        .map(|i| if i % 2 == 0 { first } else { other })
        .collect()
}

/// Locates the common z for the two alternating extensions of y.
pub fn classify_pair(
    sys: &TwistedSystem,
    y: &TwistedInvolution,
    s: Gen,
    t: Gen,
) -> Result<PairClassification> {
    let m = sys.m(s, t);
    if s == t || m == INFINITY || y.element.is_right_descent(s) || y.element.is_right_descent(t) {
        return Err(Error::Precondition(format!(
            "classify_pair needs distinct ascents {} and {} with finite m",
            sys.label(s),
            sys.label(t)
        )));
    }
    let theta = y.theta_shape(sys, s, t);
    let mt = m_theta(m, theta);
    let mut z = y.clone();
    for g in alternating_ending(s, t, mt as usize) {
        z = z.up(sys, g);
    }
    let delta = m as usize;
    let grow = z.element.length() - y.element.length();
    let case = if grow == 2 * delta {
        PairCase::Conjugate
    } else if grow == delta {
        PairCase::Commuting
    } else {
        PairCase::Mixed
    };
    Ok(PairClassification {
        case,
        theta,
        m_theta: mt,
        z,
    })
}

/// Involution words of z by memoized recursion on right descents. The
/// result is sorted in the system's canonical word order.
pub fn enumerate_involution_words(sys: &TwistedSystem, z: &TwistedInvolution) -> Vec<Word> {
    let mut memo: HashMap<GroupElement, Arc<Vec<Word>>> = HashMap::new();
    let words = words_rec(sys, z, &mut memo);
    let mut out = (*words).clone();
    sys.sort_words(&mut out);
    out
}

fn words_rec(
    sys: &TwistedSystem,
    z: &TwistedInvolution,
    memo: &mut HashMap<GroupElement, Arc<Vec<Word>>>,
) -> Arc<Vec<Word>> {
    if let Some(w) = memo.get(&z.element) {
        return w.clone();
    }
    let out = if z.hat_length == 0 {
        vec![Vec::new()]
    } else {
        let mut out = Vec::new();
        for s in z.descents() {
            let v = z.down(sys, s);
            for w in words_rec(sys, &v, memo).iter() {
                let mut w = w.clone();
                w.push(s);
                out.push(w);
            }
        }
        out
    };
    let out = Arc::new(out);
    memo.insert(z.element.clone(), out.clone());
    out
}

/// All twisted involutions of hat-length at most `bound`, indexed in
/// breadth-first order from the identity, with lazily computed word sets.
pub struct InvolutionTable {
    sys: TwistedSystem,
    elems: Vec<TwistedInvolution>,
    index: HashMap<GroupElement, usize>,
    up: Vec<Vec<Option<usize>>>,
    down: Vec<Vec<Option<usize>>>,
    words: Vec<OnceLock<Arc<Vec<Word>>>>,
}

impl InvolutionTable {
    /// `bound = None` enumerates everything and is only allowed for finite
    /// groups.
    pub fn new(sys: &TwistedSystem, bound: Option<usize>) -> Result<Self> {
        if bound.is_none() && !sys.is_finite_type() {
            return Err(Error::Unbounded("enumerating twisted involutions"));
        }
        let bound = bound.unwrap_or(usize::MAX);
        let n = sys.rank();
        let mut elems = vec![TwistedInvolution::identity(sys)];
        let mut index = HashMap::new();
        index.insert(elems[0].element.clone(), 0);
        let mut up: Vec<Vec<Option<usize>>> = Vec::new();
        let mut k = 0;
        while k < elems.len() {
            let y = elems[k].clone();
            let mut row = vec![None; n];
            if y.hat_length < bound {
                for s in sys.gens() {
                    if y.element.is_right_descent(s) {
                        continue;
                    }
                    let z = y.up(sys, s);
                    let id = match index.get(&z.element) {
                        Some(&id) => id,
                        None => {
                            let id = elems.len();
                            index.insert(z.element.clone(), id);
                            elems.push(z);
                            id
                        }
                    };
                    row[s] = Some(id);
                }
            }
            up.push(row);
            k += 1;
        }
        let mut down = vec![vec![None; n]; elems.len()];
        for (i, row) in up.iter().enumerate() {
            for (s, target) in row.iter().enumerate() {
                if let Some(j) = target {
                    if elems[*j].element.is_right_descent(s) {
                        down[*j][s] = Some(i);
                    }
                }
            }
        }
        let words = (0..elems.len()).map(|_| OnceLock::new()).collect();
        Ok(Self {
            sys: sys.clone(),
            elems,
            index,
            up,
            down,
            words,
        })
    }

    pub fn system(&self) -> &TwistedSystem {
        &self.sys
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, i: usize) -> &TwistedInvolution {
        &self.elems[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &TwistedInvolution> {
        self.elems.iter()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Index of s*∘y∘s when it lies in the table and s is an ascent.
    pub fn up(&self, i: usize, s: Gen) -> Option<usize> {
        self.up[i][s]
    }

    pub fn down(&self, i: usize, s: Gen) -> Option<usize> {
        self.down[i][s]
    }

    /// Follows a word by up-steps; `None` if it is not an involution word or
    /// leaves the table.
    pub fn follow(&self, word: &[Gen]) -> Option<usize> {
        let mut i = 0;
        for &s in word {
            i = self.up[i][s]?;
        }
        Some(i)
    }

    /// Involution words of element `i`, in the order of discovery.
    pub fn words(&self, i: usize) -> Arc<Vec<Word>> {
        if let Some(w) = self.words[i].get() {
            return w.clone();
        }
        let y = &self.elems[i];
        let out = if y.hat_length == 0 {
            vec![Vec::new()]
        } else {
            let mut out = Vec::new();
            for s in self.sys.gens() {
                if let Some(j) = self.down[i][s] {
                    for w in self.words(j).iter() {
                        let mut w = w.clone();
                        w.push(s);
                        out.push(w);
                    }
                }
            }
            out
        };
        self.words[i].get_or_init(|| Arc::new(out)).clone()
    }

    pub fn words_sorted(&self, i: usize) -> Vec<Word> {
        let mut w = (*self.words(i)).clone();
        self.sys.sort_words(&mut w);
        w
    }

    /// Indices with the given hat length.
    pub fn with_hat_length(&self, h: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.elems.len()).filter(move |&i| self.elems[i].hat_length == h)
    }

    pub fn max_hat_length(&self) -> usize {
        self.elems.iter().map(|y| y.hat_length).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::preset;

    #[test]
    fn longest_element_of_a3() {
        let sys = preset("A", 3, "id").unwrap();
        let z = TwistedInvolution::from_word(&sys, &[0, 2, 1, 0]);
        assert_eq!(z.hat_length, 4);
        assert_eq!(z.element.length(), 6);
        let words: Vec<String> = enumerate_involution_words(&sys, &z)
            .iter()
            .map(|w| sys.format_word(w))
            .collect();
        let mut expected = vec![
            "(1,3,2,1)",
            "(3,1,2,1)",
            "(3,2,1,2)",
            "(2,3,1,2)",
            "(2,1,3,2)",
            "(1,2,3,2)",
            "(1,3,2,3)",
            "(3,1,2,3)",
        ];
        expected.sort();
        let mut got = words.clone();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn a2_swap_up_step() {
        let sys = preset("A", 2, "reverse").unwrap();
        let z = TwistedInvolution::identity(&sys).up(&sys, 0);
        // s₁* ∘ 1 ∘ s₁ = s₂s₁
        assert_eq!(z.element, sys.element(&[1, 0]));
        assert!(z.element.is_twisted_involution(&sys));
    }

    #[test]
    fn a2_word_counts() {
        let sys = preset("A", 2, "id").unwrap();
        let table = InvolutionTable::new(&sys, None).unwrap();
        assert_eq!(table.len(), 4);
        let mut counts: Vec<usize> = (0..table.len()).map(|i| table.words(i).len()).collect();
        counts.sort();
        assert_eq!(counts, vec![1, 1, 1, 2]);
    }

    #[test]
    fn classify_rank_two() {
        let sys = preset("A", 2, "id").unwrap();
        let c = classify_pair(&sys, &TwistedInvolution::identity(&sys), 0, 1).unwrap();
        assert_eq!(c.m_theta, 2);
        assert_eq!(c.z.element, sys.element(&[0, 1, 0]));
        assert_eq!(c.case, PairCase::Commuting);

        let prod = preset("2xA", 1, "swap").unwrap();
        let c = classify_pair(&prod, &TwistedInvolution::identity(&prod), 0, 1).unwrap();
        assert_eq!(c.case, PairCase::Commuting);
        assert_eq!(c.m_theta, 1);
        assert_eq!(c.z.element, prod.element(&[0, 1]));
    }

    #[test]
    fn unbounded_affine_table_is_refused() {
        let sys = preset("affine-A", 2, "id").unwrap();
        assert!(matches!(
            InvolutionTable::new(&sys, None),
            Err(Error::Unbounded(_))
        ));
        assert!(InvolutionTable::new(&sys, Some(4)).is_ok());
    }
}
