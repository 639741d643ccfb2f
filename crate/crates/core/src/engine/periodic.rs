//! Descent-periodicity: certify that a chain of constant braid systems
//! continues forever with a periodic sequence of minimal descents, using
//! polynomial interpolation of the σ maps along the chain.

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::braidsys::{BraidSystem, SymbolicMap};
use crate::coxeter::{Gen, TwistedSystem};
use crate::numfield::{FieldElement, LinearPoly};

/// Polynomial in one variable n, coefficients from low to high degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<FieldElement>);

/// Give up on root bounds above this; the candidate is then rejected.
const ROOT_BOUND_CAP: u64 = 100_000;

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, n: u64) -> FieldElement {
        let x = FieldElement::from_int(n as i64);
        let mut acc = FieldElement::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    /// The unique polynomial of degree < samples.len() through (k, samples[k]).
    pub fn interpolate(samples: &[FieldElement]) -> Self {
        // Newton divided differences on the nodes 0, 1, ..., q-1.
        let q = samples.len();
        let mut diffs = samples.to_vec();
        let mut newton = Vec::with_capacity(q);
        for k in 0..q {
            newton.push(diffs[0].clone());
            let denom = FieldElement::from_int(k as i64 + 1).inverse().unwrap();
            diffs = diffs
                .windows(2)
                .map(|w| &(&w[1] - &w[0]) * &denom)
                .collect();
        }
        // Expand Σ c_k n(n-1)...(n-k+1).
        let mut out = vec![FieldElement::zero(); q];
        let mut basis = vec![FieldElement::one()];
        for (k, c) in newton.iter().enumerate() {
            for (i, b) in basis.iter().enumerate() {
                out[i] = &out[i] + &(c * b);
            }
            // basis *= (n - k)
            let shift = FieldElement::from_int(-(k as i64));
            let mut next = vec![FieldElement::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] = &next[i + 1] + b;
                next[i] = &next[i] + &(b * &shift);
            }
            basis = next;
        }
        Self::new(out)
    }

    /// Every natural root is at most this (Cauchy's bound); `None` for the
    /// zero polynomial or when the bound is too large to scan.
    pub fn root_bound(&self) -> Option<u64> {
        let lead = self.0.last()?.inverse()?;
        let mut worst = num_rational::BigRational::from_integer(0.into());
        for c in &self.0[..self.0.len() - 1] {
            let r = (c * &lead).abs_upper_bound();
            if r > worst {
                worst = r;
            }
        }
        let ceil = worst.numer().div_ceil(worst.denom());
        let b = ceil.to_u64()? + 1;
        (b <= ROOT_BOUND_CAP).then_some(b)
    }

    /// f(n) ≤ 0 for every natural n. `None` if undecided.
    pub fn nonpositive_on_naturals(&self) -> Option<bool> {
        if self.is_zero() {
            return Some(true);
        }
        if self.0.last().unwrap().sign() > 0 {
            return Some(false);
        }
        let bound = self.root_bound()?;
        Some((0..=bound).all(|n| self.eval(n).sign() <= 0))
    }

    /// Natural roots of a nonzero polynomial. `None` if undecided.
    pub fn natural_roots(&self) -> Option<Vec<u64>> {
        let bound = self.root_bound()?;
        Some((0..=bound).filter(|&n| self.eval(n).is_zero()).collect())
    }
}

/// Certificate returned when a chain is descent-periodic.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicWitness {
    pub p: usize,
    pub q: usize,
    /// r_1, ..., r_p.
    pub cycle: Vec<Gen>,
    /// Index of the chain position i at which the witness was found.
    pub index: usize,
    /// For each j, the columns of λ_j as polynomials in n, indexed by
    /// domain generator then coordinate.
    #[serde(skip)]
    pub interpolants: Vec<Vec<Option<Vec<Poly>>>>,
}

impl PeriodicWitness {
    /// λ_j(n) for j in 1..=p.
    pub fn lambda(&self, j: usize, n: u64) -> SymbolicMap {
        let cols = &self.interpolants[j - 1];
        let mut out = SymbolicMap::empty(cols.len());
        for (s, c) in cols.iter().enumerate() {
            if let Some(polys) = c {
                out.set_column(
                    s,
                    polys
                        .iter()
                        .map(|f| LinearPoly::constant(f.eval(n)))
                        .collect(),
                );
            }
        }
        out
    }
}

/// λ•r: r*λ when λα_r = -α_{r*}, otherwise r*λr.
pub fn bullet(sys: &TwistedSystem, lambda: &SymbolicMap, r: Gen) -> SymbolicMap {
    let rs = sys.star(r);
    if lambda.column_is(r, rs, -1) {
        lambda.reflect_left(sys, rs)
    } else {
        lambda.reflect_right(sys, r).reflect_left(sys, rs)
    }
}

/// Searches (p,q) in lexicographic order with q ≥ 2, pq ≤ i, p ≤ max_p,
/// q ≤ max_q, where `history` holds B_0, ..., B_i.
pub fn detect_periodicity(
    sys: &TwistedSystem,
    history: &[BraidSystem],
    max_p: usize,
    max_q: usize,
) -> Option<PeriodicWitness> {
    let i = history.len().checked_sub(1)?;
    for p in 1..=max_p.min(i / 2) {
        for q in 2..=max_q {
            if p * q > i {
                break;
            }
            if let Some(w) = check_candidate(sys, history, i, p, q) {
                return Some(w);
            }
        }
    }
    None
}

fn check_candidate(
    sys: &TwistedSystem,
    history: &[BraidSystem],
    i: usize,
    p: usize,
    q: usize,
) -> Option<PeriodicWitness> {
    let last = &history[i];
    // Step i: both words begin with (r_p, ..., r_1) repeated q times.
    let block = &last.left[..p];
    for w in [&last.left, &last.right] {
        if w.len() < p * q || (0..p * q).any(|k| w[k] != block[k % p]) {
            return None;
        }
    }
    let cycle: Vec<Gen> = block.iter().rev().copied().collect();
    let rank = sys.rank();
    let domain = last.domain();
    let start = i - p * q;
    let mut interpolants = Vec::with_capacity(p);
    for j in 1..=p {
        let mut cols: Vec<Option<Vec<Poly>>> = vec![None; rank];
        for &s in &domain {
            let samples: Vec<Vec<FieldElement>> = (0..q)
                .map(|n| {
                    history[start + j + n * p]
                        .sigma
                        .constant_column(s)
                        .expect("constant chain")
                })
                .collect();
            cols[s] = Some(
                (0..rank)
                    .map(|t| {
                        Poly::interpolate(&samples.iter().map(|v| v[t].clone()).collect::<Vec<_>>())
                    })
                    .collect(),
            );
        }
        interpolants.push(cols);
    }
    let witness = PeriodicWitness {
        p,
        q,
        cycle,
        index: i,
        interpolants,
    };

    // Step ii.
    for j in 1..=p {
        let beta = witness.cycle[j % p];
        let col = witness.interpolants[j - 1][beta].as_ref()?;
        if !negative_for_all_n(col)? {
            return None;
        }
        let bs = sys.star(beta);
        let shifted: Vec<Poly> = col
            .iter()
            .enumerate()
            .map(|(t, f)| {
                if t == bs {
                    let mut c = f.coeffs().to_vec();
                    if c.is_empty() {
                        c.push(FieldElement::zero());
                    }
                    c[0] = &c[0] + &FieldElement::one();
                    Poly::new(c)
                } else {
                    f.clone()
                }
            })
            .collect();
        if let Some(g) = shifted.iter().find(|g| !g.is_zero()) {
            let roots = g.natural_roots()?;
            if roots
                .iter()
                .any(|&n| shifted.iter().all(|h| h.eval(n).is_zero()))
            {
                return None;
            }
        }
    }

    // Step iii: both sides have degree < q in n, so agreement at q points
    // is a polynomial identity.
    for n in 0..q as u64 {
        if witness.lambda(1, n + 1) != bullet(sys, &witness.lambda(p, n), witness.cycle[0]) {
            return None;
        }
        for j in 2..=p {
            if witness.lambda(j, n + 1)
                != bullet(sys, &witness.lambda(j - 1, n + 1), witness.cycle[j - 1])
            {
                return None;
            }
        }
    }
    Some(witness)
}

/// Whether the vector of polynomials is < 0 (nonzero, all entries ≤ 0) for
/// every natural n. `None` if undecided.
fn negative_for_all_n(col: &[Poly]) -> Option<bool> {
    for f in col {
        if !f.nonpositive_on_naturals()? {
            return Some(false);
        }
    }
    let Some(g) = col.iter().find(|g| !g.is_zero()) else {
        return Some(false);
    };
    let roots = g.natural_roots()?;
    Some(
        !roots
            .iter()
            .any(|&n| col.iter().all(|h| h.eval(n).is_zero())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<FieldElement> {
        v.iter().map(|&k| FieldElement::from_int(k)).collect()
    }

    #[test]
    fn interpolation_reproduces_samples() {
        let s = ints(&[3, -1, 4, 1, -5]);
        let f = Poly::interpolate(&s);
        for (n, v) in s.iter().enumerate() {
            assert_eq!(&f.eval(n as u64), v);
        }
        assert!(f.degree().unwrap() < 5);
        let line = Poly::interpolate(&ints(&[2, 5, 8]));
        assert_eq!(line.coeffs(), &ints(&[2, 3])[..]);
    }

    #[test]
    fn sign_on_naturals() {
        // -(n-2)^2 = -n^2 + 4n - 4 is ≤ 0 everywhere with a root at 2.
        let f = Poly::new(ints(&[-4, 4, -1]));
        assert_eq!(f.nonpositive_on_naturals(), Some(true));
        assert_eq!(f.natural_roots(), Some(vec![2]));
        // -n^2 + 5n - 6 is positive at n = 2.5 only, so still ≤ 0 on ℕ.
        assert_eq!(
            Poly::new(ints(&[-6, 5, -1])).nonpositive_on_naturals(),
            Some(true)
        );
        // -n^2 + 7n - 10 is 2 at n = 3.
        assert_eq!(
            Poly::new(ints(&[-10, 7, -1])).nonpositive_on_naturals(),
            Some(false)
        );
        assert_eq!(Poly::new(ints(&[1])).nonpositive_on_naturals(), Some(false));
    }
}
