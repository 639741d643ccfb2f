//! The exceptional braid relations attached to induced copies of ²A₃, B₃,
//! H₃ and D₄ in a Coxeter diagram.

use std::collections::BTreeSet;

use super::{Mode, WordRelation};
use crate::coxeter::{Gen, TwistedSystem};
use crate::numfield::BondOrder;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExceptionalKind {
    TwistedA3,
    B3,
    H3,
    D4,
}

/// A labeled diagram pattern with its relation, written in role indices.
#[derive(Debug)]
pub struct ExceptionalPattern {
    pub kind: ExceptionalKind,
    pub roles: &'static [&'static str],
    /// Bonds of order > 2; every other pair of roles must commute.
    pub bonds: &'static [(usize, usize, BondOrder)],
    pub left: &'static [usize],
    pub right: &'static [usize],
}

// Roles: x = 0, a = 1, b = 2, c = 3. Outside ²A₃, x is the branch vertex
// and b sits on the heavy bond.
pub static EXCEPTIONAL_PATTERNS: [ExceptionalPattern; 4] = [
    ExceptionalPattern {
        kind: ExceptionalKind::TwistedA3,
        roles: &["x", "a", "b"],
        bonds: &[(1, 0, 3), (0, 2, 3)],
        left: &[0, 1, 2, 0],
        right: &[0, 1, 0, 2],
    },
    ExceptionalPattern {
        kind: ExceptionalKind::B3,
        roles: &["x", "a", "b"],
        bonds: &[(0, 1, 3), (0, 2, 4)],
        left: &[0, 1, 2, 0, 1, 2],
        right: &[1, 2, 0, 1, 2, 0],
    },
    ExceptionalPattern {
        kind: ExceptionalKind::H3,
        roles: &["x", "a", "b"],
        bonds: &[(0, 1, 3), (0, 2, 5)],
        left: &[0, 1, 2, 0, 1, 2, 0, 1, 2],
        right: &[1, 2, 0, 1, 2, 0, 1, 2, 0],
    },
    ExceptionalPattern {
        kind: ExceptionalKind::D4,
        roles: &["x", "a", "b", "c"],
        bonds: &[(0, 1, 3), (0, 2, 3), (0, 3, 3)],
        left: &[0, 1, 2, 3, 0, 1, 2, 3],
        right: &[1, 2, 3, 0, 1, 2, 3, 0],
    },
];

impl ExceptionalPattern {
    fn m(&self, i: usize, j: usize) -> BondOrder {
        if i == j {
            return 1;
        }
        self.bonds
            .iter()
            .find(|&&(a, b, _)| (a, b) == (i, j) || (a, b) == (j, i))
            .map_or(2, |&(_, _, m)| m)
    }

    fn twist_ok(&self, sys: &TwistedSystem, image: &[Gen]) -> bool {
        match self.kind {
            ExceptionalKind::TwistedA3 => {
                sys.star(image[0]) == image[0] && sys.star(image[1]) == image[2]
            }
            _ => image.iter().all(|&g| sys.star(g) == g),
        }
    }

    /// Every injective, label-preserving placement of the pattern as an
    /// induced subgraph satisfying the twist condition.
    pub fn embeddings(&self, sys: &TwistedSystem) -> Vec<Vec<Gen>> {
        let k = self.roles.len();
        let mut out = Vec::new();
        let mut image = Vec::with_capacity(k);
        self.search(sys, &mut image, &mut out);
        out.retain(|img| self.twist_ok(sys, img));
        out
    }

    fn search(&self, sys: &TwistedSystem, image: &mut Vec<Gen>, out: &mut Vec<Vec<Gen>>) {
        let k = image.len();
        if k == self.roles.len() {
            out.push(image.clone());
            return;
        }
        for g in sys.gens() {
            if image.contains(&g) || (0..k).any(|j| sys.m(g, image[j]) != self.m(k, j)) {
                continue;
            }
            image.push(g);
            self.search(sys, image, out);
            image.pop();
        }
    }

    pub fn relation(&self, sys: &TwistedSystem, image: &[Gen]) -> WordRelation {
        WordRelation::new(
            sys,
            self.left.iter().map(|&r| image[r]).collect(),
            self.right.iter().map(|&r| image[r]).collect(),
            Mode::Prefix,
        )
    }
}

/// 𝓑̂⁺: one relation per embedding of each pattern.
pub fn exceptional_relations(sys: &TwistedSystem) -> Vec<WordRelation> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in &EXCEPTIONAL_PATTERNS {
        for img in p.embeddings(sys) {
            let rel = p.relation(sys, &img);
            if seen.insert((rel.left.clone(), rel.right.clone())) {
                out.push(rel);
            }
        }
    }
    out.sort_by(|a, b| a.cmp_in(sys, b));
    out
}
