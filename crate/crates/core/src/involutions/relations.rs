use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{alternating_ending, alternating_starting, hecke::reduced_words, InvolutionTable};
use crate::coxeter::{Gen, TwistedSystem, Word};
use crate::error::Result;
use crate::numfield::{BondOrder, INFINITY};

/// Where a relation may be applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Replace a factor at any offset.
    Anywhere,
    /// Replace a prefix; the rest of the word is kept.
    Prefix,
    /// Replace the whole word.
    Whole,
}

/// A symmetric relation between two words, stored with `left` not after
/// `right` in the canonical word order of its system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordRelation {
    pub left: Word,
    pub right: Word,
    pub mode: Mode,
}

impl WordRelation {
    pub fn new(sys: &TwistedSystem, a: Word, b: Word, mode: Mode) -> Self {
        if sys.cmp_words(&a, &b) == Ordering::Greater {
            Self {
                left: b,
                right: a,
                mode,
            }
        } else {
            Self {
                left: a,
                right: b,
                mode,
            }
        }
    }

    /// Canonical comparison: mode, then left, then right.
    pub fn cmp_in(&self, sys: &TwistedSystem, other: &Self) -> Ordering {
        self.mode
            .cmp(&other.mode)
            .then_with(|| sys.cmp_words(&self.left, &other.left))
            .then_with(|| sys.cmp_words(&self.right, &other.right))
    }

    pub fn display<'a>(&'a self, sys: &'a TwistedSystem) -> RelationDisplay<'a> {
        RelationDisplay { rel: self, sys }
    }

    /// Relabels the letters through `map`.
    pub fn map_letters(&self, sys: &TwistedSystem, map: impl Fn(Gen) -> Gen) -> Self {
        Self::new(
            sys,
            self.left.iter().map(|&g| map(g)).collect(),
            self.right.iter().map(|&g| map(g)).collect(),
            self.mode,
        )
    }
}

pub struct RelationDisplay<'a> {
    rel: &'a WordRelation,
    sys: &'a TwistedSystem,
}

impl fmt::Display for RelationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |w: &[Gen]| -> String {
            let letters: Vec<&str> = w.iter().map(|&g| self.sys.label(g)).collect();
            let body = letters.join(",");
            let sep = if letters.is_empty() { "" } else { "," };
            match self.rel.mode {
                Mode::Anywhere => format!("(---{sep}{body}{sep}---)"),
                Mode::Prefix => format!("({body}{sep}---)"),
                Mode::Whole => format!("({body})"),
            }
        };
        write!(f, "{} ~ {}", side(&self.rel.left), side(&self.rel.right))
    }
}

/// The shape of θ on a pair {s,t}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theta {
    Identity,
    Swap,
    Other,
}

/// m_θ(s,t) from m(s,t) and the shape of θ.
pub fn m_theta(m: BondOrder, theta: Theta) -> BondOrder {
    if m == INFINITY {
        return INFINITY;
    }
    match (m % 2, theta) {
        (1, Theta::Identity | Theta::Swap) => m.div_ceil(2),
        (0, Theta::Identity) => m / 2 + 1,
        (0, Theta::Swap) => m / 2,
        _ => m,
    }
}

fn pairs(sys: &TwistedSystem) -> impl Iterator<Item = (Gen, Gen)> + '_ {
    sys.gens()
        .flat_map(move |s| (s + 1..sys.rank()).map(move |t| (s, t)))
}

fn sorted(sys: &TwistedSystem, set: BTreeSet<(Mode, Word, Word)>) -> Vec<WordRelation> {
    let mut out: Vec<WordRelation> = set
        .into_iter()
        .map(|(mode, a, b)| WordRelation::new(sys, a, b, mode))
        .collect();
    out.sort_by(|a, b| a.cmp_in(sys, b));
    out.dedup();
    out
}

/// Ordinary braid relations, applicable anywhere.
pub fn braid_relations(sys: &TwistedSystem) -> Vec<WordRelation> {
    let mut out = BTreeSet::new();
    for (s, t) in pairs(sys) {
        let m = sys.m(s, t);
        if m != INFINITY {
            out.insert((
                Mode::Anywhere,
                alternating_starting(s, t, m as usize),
                alternating_starting(t, s, m as usize),
            ));
        }
    }
    sorted(sys, out)
}

/// Prefix relations of length m_*(s,t) whenever that is below m(s,t).
pub fn half_braid_relations(sys: &TwistedSystem) -> Vec<WordRelation> {
    let mut out = BTreeSet::new();
    for (s, t) in pairs(sys) {
        let m = sys.m(s, t);
        if m == INFINITY {
            continue;
        }
        let shape = if sys.star(s) == s && sys.star(t) == t {
            Theta::Identity
        } else if sys.star(s) == t {
            Theta::Swap
        } else {
            Theta::Other
        };
        let mt = m_theta(m, shape);
        if mt < m {
            out.insert((
                Mode::Prefix,
                alternating_starting(s, t, mt as usize),
                alternating_starting(t, s, mt as usize),
            ));
        }
    }
    sorted(sys, out)
}

/// Braid plus half-braid relations.
pub fn hat_relations(sys: &TwistedSystem) -> Vec<WordRelation> {
    let mut out = braid_relations(sys);
    out.extend(half_braid_relations(sys));
    out
}

/// Whole-word relations (alternating block, reduced word of v) for every v
/// of length at most `bound` with s, t not left descents of v, together
/// with the braid relations.
pub fn mixed_relations(sys: &TwistedSystem, bound: usize) -> Result<Vec<WordRelation>> {
    let mut out = BTreeSet::new();
    let elems = sys.elements_up_to(bound)?;
    let tails: Vec<(Vec<Gen>, Vec<Word>)> = elems
        .iter()
        .map(|v| (v.left_descents(), reduced_words(sys, v)))
        .collect();
    for (s, t) in pairs(sys) {
        let m = sys.m(s, t);
        if m == INFINITY {
            continue;
        }
        let shape = if sys.star(s) == s && sys.star(t) == t {
            Theta::Identity
        } else if sys.star(s) == t {
            Theta::Swap
        } else {
            Theta::Other
        };
        let lo = m_theta(m, shape);
        for (desc, words) in &tails {
            if desc.contains(&s) || desc.contains(&t) {
                continue;
            }
            for n in lo..m {
                let n = n as usize;
                for r in words {
                    let cat = |head: Word| -> Word {
                        head.into_iter().chain(r.iter().copied()).collect()
                    };
                    let ts = cat(alternating_starting(t, s, n));
                    let st = cat(alternating_starting(s, t, n));
                    let tt = cat(alternating_starting(t, s, n + 1));
                    let ss = cat(alternating_starting(s, t, n + 1));
                    out.insert((Mode::Whole, ts.clone(), st.clone()));
                    out.insert((Mode::Whole, st, ss));
                    out.insert((Mode::Whole, ts, tt));
                }
            }
        }
    }
    let mut rels = braid_relations(sys);
    rels.extend(sorted(sys, out));
    Ok(rels)
}

/// The generalized half-braid relations (r, …,t,s) ~ (r, …,s,t) for every
/// involution word r of every y in `table` and every pair of ascents s, t of
/// y with m(s,t) finite, the block length being m_θ for θ(w) = (ywy⁻¹)*.
pub fn generalized_relations(table: &InvolutionTable) -> Vec<WordRelation> {
    let sys = table.system();
    let mut out = BTreeSet::new();
    for i in 0..table.len() {
        let y = table.get(i);
        let words = table.words(i);
        for (s, t) in pairs(sys) {
            let m = sys.m(s, t);
            if m == INFINITY || y.element.is_right_descent(s) || y.element.is_right_descent(t) {
                continue;
            }
            let mt = m_theta(m, y.theta_shape(sys, s, t)) as usize;
            let a = alternating_ending(s, t, mt);
            let b = alternating_ending(t, s, mt);
            for r in words.iter() {
                let mut left = r.clone();
                left.extend(&a);
                let mut right = r.clone();
                right.extend(&b);
                out.insert((Mode::Prefix, left, right));
            }
        }
    }
    sorted(sys, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::preset;

    #[test]
    fn m_theta_branches() {
        assert_eq!(m_theta(3, Theta::Identity), 2);
        assert_eq!(m_theta(3, Theta::Swap), 2);
        assert_eq!(m_theta(4, Theta::Swap), 2);
        assert_eq!(m_theta(4, Theta::Identity), 3);
        assert_eq!(m_theta(3, Theta::Other), 3);
        assert_eq!(m_theta(INFINITY, Theta::Identity), INFINITY);
        assert_eq!(m_theta(2, Theta::Swap), 1);
        assert_eq!(m_theta(2, Theta::Identity), 2);
    }

    #[test]
    fn a3_half_braids() {
        let sys = preset("A", 3, "id").unwrap();
        let hb: Vec<String> = half_braid_relations(&sys)
            .iter()
            .map(|r| r.display(&sys).to_string())
            .collect();
        assert_eq!(hb, vec!["(1,2,---) ~ (2,1,---)", "(2,3,---) ~ (3,2,---)"]);
        let b: Vec<String> = braid_relations(&sys)
            .iter()
            .map(|r| r.display(&sys).to_string())
            .collect();
        assert_eq!(
            b,
            vec![
                "(---,1,3,---) ~ (---,3,1,---)",
                "(---,1,2,1,---) ~ (---,2,1,2,---)",
                "(---,2,3,2,---) ~ (---,3,2,3,---)"
            ]
        );
    }

    #[test]
    fn swapped_commuting_pair_gives_length_one_relation() {
        let sys = preset("2xA", 1, "swap").unwrap();
        let hb = half_braid_relations(&sys);
        assert_eq!(hb.len(), 1);
        assert_eq!(hb[0].left, vec![0]);
        assert_eq!(hb[0].right, vec![1]);
    }
}
