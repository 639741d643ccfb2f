use std::hash::{Hash, Hasher};

use super::{Gen, TwistedSystem, Word};
use crate::numfield::FieldElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A group element stored as its matrix on the simple-root basis, together
/// with the inverse matrix and the length. Column j of `mat` is wα_j.
#[derive(Clone, Debug)]
pub struct GroupElement {
    n: usize,
    mat: Vec<FieldElement>,
    inv: Vec<FieldElement>,
    length: usize,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

/// Whether a nonzero vector with root-like sign pattern is negative; roots
/// are sign-coherent, so the first nonzero coordinate decides.
fn first_sign<'a>(mut coords: impl Iterator<Item = &'a FieldElement>) -> i8 {
    coords.find(|c| !c.is_zero()).map_or(0, |c| c.sign())
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        let mut mat = vec![FieldElement::zero(); n * n];
        for i in 0..n {
            mat[i * n + i] = FieldElement::one();
        }
        Self {
            n,
            inv: mat.clone(),
            mat,
            length: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// Coefficient of α_i in wα_j.
    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.mat[i * self.n + j]
    }

    pub fn inverse_entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.inv[i * self.n + j]
    }

    /// wα_j as a coordinate vector.
    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.n).map(|i| self.entry(i, j).clone()).collect()
    }

    /// w applied to an arbitrary vector.
    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.n)
            .map(|i| {
                let mut acc = FieldElement::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.entry(i, j).is_zero() {
                        acc += &(self.entry(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            mat: self.inv.clone(),
            inv: self.mat.clone(),
            length: self.length,
        }
    }

    /// ws < w.
    pub fn is_right_descent(&self, s: Gen) -> bool {
        first_sign((0..self.n).map(|i| self.entry(i, s))) < 0
    }

    /// sw < w.
    pub fn is_left_descent(&self, s: Gen) -> bool {
        first_sign((0..self.n).map(|i| self.inverse_entry(i, s))) < 0
    }

    pub fn right_descents(&self) -> Vec<Gen> {
        (0..self.n).filter(|&s| self.is_right_descent(s)).collect()
    }

    pub fn left_descents(&self) -> Vec<Gen> {
        (0..self.n).filter(|&s| self.is_left_descent(s)).collect()
    }

    /// sw or ws.
    pub fn mul_gen(&self, sys: &TwistedSystem, s: Gen, side: Side) -> Self {
        let n = self.n;
        let descent = match side {
            Side::Right => self.is_right_descent(s),
            Side::Left => self.is_left_descent(s),
        };
        let length = if descent {
            self.length - 1
        } else {
            self.length + 1
        };
        let (mat, inv) = match side {
            Side::Right => (col_op(n, &self.mat, sys, s), row_op(n, &self.inv, sys, s)),
            Side::Left => (row_op(n, &self.mat, sys, s), col_op(n, &self.inv, sys, s)),
        };
        Self {
            n,
            mat,
            inv,
            length,
        }
    }

    pub fn mul_word(&self, sys: &TwistedSystem, w: &[Gen], side: Side) -> Self {
        let mut x = self.clone();
        match side {
            Side::Right => {
                for &s in w {
                    x = x.mul_gen(sys, s, Side::Right);
                }
            }
            Side::Left => {
                for &s in w.iter().rev() {
                    x = x.mul_gen(sys, s, Side::Left);
                }
            }
        }
        x
    }

    /// Group product self·other.
    pub fn mul(&self, sys: &TwistedSystem, other: &Self) -> Self {
        self.mul_word(sys, &other.reduced_word(sys), Side::Right)
    }

    /// A reduced word, built by peeling the least right descent in the
    /// system's order.
    pub fn reduced_word(&self, sys: &TwistedSystem) -> Word {
        let mut x = self.clone();
        let mut rev = Vec::with_capacity(self.length);
        while x.length > 0 {
            let s = sys
                .order()
                .iter()
                .copied()
                .find(|&s| x.is_right_descent(s))
                .unwrap();
            rev.push(s);
            x = x.mul_gen(sys, s, Side::Right);
        }
        rev.reverse();
        rev
    }

    /// The image w* under the diagram involution.
    pub fn twisted(&self, sys: &TwistedSystem) -> Self {
        let n = self.n;
        let mut mat = vec![FieldElement::zero(); n * n];
        let mut inv = vec![FieldElement::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                mat[i * n + j] = self.entry(sys.star(i), sys.star(j)).clone();
                inv[i * n + j] = self.inverse_entry(sys.star(i), sys.star(j)).clone();
            }
        }
        Self {
            n,
            mat,
            inv,
            length: self.length,
        }
    }

    /// w* = w⁻¹.
    pub fn is_twisted_involution(&self, sys: &TwistedSystem) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| self.entry(sys.star(i), sys.star(j)) == self.inverse_entry(i, j))
        })
    }

    /// (u, v) under the bilinear form, checked on every pair of columns.
    pub fn preserves_form(&self, sys: &TwistedSystem) -> bool {
        let n = self.n;
        let cols: Vec<Vec<FieldElement>> = (0..n).map(|j| self.column(j)).collect();
        for a in 0..n {
            for b in 0..n {
                let mut acc = FieldElement::zero();
                for i in 0..n {
                    for k in 0..n {
                        if cols[a][i].is_zero() || cols[b][k].is_zero() {
                            continue;
                        }
                        acc += &(&(&cols[a][i] * &cols[b][k]) * sys.form(i, k));
                    }
                }
                if &acc != sys.form(a, b) {
                    return false;
                }
            }
        }
        true
    }
}

/// M ↦ M·s: column j loses 2(α_s,α_j) times column s.
fn col_op(n: usize, m: &[FieldElement], sys: &TwistedSystem, s: Gen) -> Vec<FieldElement> {
    let mut out = m.to_vec();
    for j in 0..n {
        let c = sys.two_form(s, j);
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            let src = &m[i * n + s];
            if !src.is_zero() {
                out[i * n + j] -= &(src * c);
            }
        }
    }
    out
}

/// M ↦ s·M: row s loses Σ_i 2(α_s,α_i) times row i.
fn row_op(n: usize, m: &[FieldElement], sys: &TwistedSystem, s: Gen) -> Vec<FieldElement> {
    let mut out = m.to_vec();
    for j in 0..n {
        let mut acc = FieldElement::zero();
        for i in 0..n {
            let c = sys.two_form(s, i);
            let x = &m[i * n + j];
            if !c.is_zero() && !x.is_zero() {
                acc += &(c * x);
            }
        }
        if !acc.is_zero() {
            out[s * n + j] -= &acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::preset;

    #[test]
    fn a2_descents_and_lengths() {
        let sys = preset("A", 2, "id").unwrap();
        let w = sys.element(&[0, 1, 0]);
        assert_eq!(w.length(), 3);
        assert_eq!(w.right_descents(), vec![0, 1]);
        assert_eq!(w, sys.element(&[1, 0, 1]));
        let id = sys.identity();
        assert!(!id.is_right_descent(0));
        assert!(sys.element(&[0]).is_right_descent(0));
    }

    #[test]
    fn left_and_right_agree_with_inverse() {
        let sys = preset("B", 3, "id").unwrap();
        let w = sys.element(&[0, 1, 2, 1]);
        assert_eq!(
            w.mul_gen(&sys, 0, Side::Left),
            sys.element(&[0, 0, 1, 2, 1])
        );
        assert_eq!(w.inverse(), sys.element(&[1, 2, 1, 0]));
        for s in sys.gens() {
            assert_eq!(w.is_left_descent(s), w.inverse().is_right_descent(s));
        }
    }

    #[test]
    fn affine_words_stay_faithful() {
        let sys = preset("affine-G", 2, "id").unwrap();
        let w = sys.element(&[0, 1, 2, 1, 0, 2, 1]);
        assert_eq!(w.length(), 7);
        assert!(w.preserves_form(&sys));
        assert_eq!(w.mul(&sys, &w.inverse()), sys.identity());
    }
}
