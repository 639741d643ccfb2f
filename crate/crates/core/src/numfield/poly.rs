use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::FieldElement;
use crate::error::Error;

/// Variable id. Braid systems use one variable per generator index.
pub type Var = usize;

pub type Assignment = BTreeMap<Var, FieldElement>;

/// Affine-linear polynomial `constant + Σ coeff·x_v` over the field.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LinearPoly {
    constant: FieldElement,
    terms: BTreeMap<Var, FieldElement>,
}

impl LinearPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: FieldElement) -> Self {
        Self {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn var(v: Var) -> Self {
        Self::term(v, FieldElement::one())
    }

    pub fn term(v: Var, coeff: FieldElement) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(v, coeff);
        }
        Self {
            constant: FieldElement::zero(),
            terms,
        }
    }

    pub fn from_parts(
        constant: FieldElement,
        terms: impl IntoIterator<Item = (Var, FieldElement)>,
    ) -> Self {
        let mut p = Self::constant(constant);
        for (v, c) in terms {
            p.add_term(v, &c);
        }
        p
    }

    pub fn constant_part(&self) -> &FieldElement {
        &self.constant
    }

    pub fn terms(&self) -> &BTreeMap<Var, FieldElement> {
        &self.terms
    }

    pub fn coeff(&self, v: Var) -> FieldElement {
        self.terms.get(&v).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn as_constant(&self) -> Option<&FieldElement> {
        self.is_constant().then_some(&self.constant)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, v: Var, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&v) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&v);
        } else {
            self.terms.insert(v, sum);
        }
    }

    pub fn add_constant(&mut self, c: &FieldElement) {
        self.constant += c;
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            constant: &self.constant * c,
            terms: self.terms.iter().map(|(v, k)| (*v, k * c)).collect(),
        }
    }

    /// Substitute every variable and return the resulting field element.
    pub fn eval(&self, at: &Assignment) -> Result<FieldElement, Error> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            let x = at.get(v).ok_or(Error::MissingVariable(*v))?;
            acc += &(c * x);
        }
        Ok(acc)
    }

    /// Substitute the variables present in `at`, leaving the others symbolic.
    pub fn substitute(&self, at: &BTreeMap<Var, LinearPoly>) -> Self {
        let mut out = Self::constant(self.constant.clone());
        for (v, c) in &self.terms {
            match at.get(v) {
                Some(p) => out = &out + &p.scale(c),
                None => out.add_term(*v, c),
            }
        }
        out
    }

    /// Divide through by the absolute value of the leading coefficient (or
    /// of the constant when there are no variables).
    pub fn normalized(&self) -> Self {
        let lead = match self.terms.values().next() {
            Some(c) => c.abs(),
            None if self.constant.is_zero() => return self.clone(),
            None => self.constant.abs(),
        };
        if lead.is_one() {
            return self.clone();
        }
        self.scale(&lead.inverse().unwrap())
    }

    /// The variable part only.
    pub fn linear_part(&self) -> Self {
        Self {
            constant: FieldElement::zero(),
            terms: self.terms.clone(),
        }
    }
}

impl fmt::Debug for LinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.constant.is_zero() || self.terms.is_empty() {
            write!(f, "{}", self.constant)?;
            first = false;
        }
        for (v, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "x{v}")?;
            } else {
                write!(f, "({c})*x{v}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LinearPoly> for &'a LinearPoly {
    type Output = LinearPoly;
    fn add(self, rhs: &LinearPoly) -> LinearPoly {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (v, c) in &rhs.terms {
            out.add_term(*v, c);
        }
        out
    }
}

impl<'a> Sub<&'a LinearPoly> for &'a LinearPoly {
    type Output = LinearPoly;
    fn sub(self, rhs: &LinearPoly) -> LinearPoly {
        self + &(-rhs)
    }
}

impl Neg for &LinearPoly {
    type Output = LinearPoly;
    fn neg(self) -> LinearPoly {
        LinearPoly {
            constant: -&self.constant,
            terms: self.terms.iter().map(|(v, c)| (*v, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a LinearPoly {
    type Output = LinearPoly;
    fn mul(self, rhs: &FieldElement) -> LinearPoly {
        self.scale(rhs)
    }
}

impl From<FieldElement> for LinearPoly {
    fn from(c: FieldElement) -> Self {
        Self::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn fe(n: i64, d: i64) -> FieldElement {
        FieldElement::from_ratio(n, d)
    }

    #[test]
    fn eval_examples() {
        let p = LinearPoly::from_parts(fe(2, 1), [(1, fe(1, 1))]);
        let at: Assignment = [(1, fe(-2, 1))].into();
        assert!(p.eval(&at).unwrap().is_zero());

        let p = LinearPoly::from_parts(fe(1, 2), [(1, fe(1, 2)), (2, fe(-1, 1)), (3, fe(1, 2))]);
        let at: Assignment = [(1, fe(2, 3)), (2, fe(4, 3)), (3, fe(1, 1))].into();
        assert!(p.eval(&at).unwrap().is_zero());

        let r2 = FieldElement::surd(num_rational::BigRational::one(), 2).unwrap();
        let p = LinearPoly::term(1, r2.clone());
        let at: Assignment = [(1, r2)].into();
        assert_eq!(p.eval(&at).unwrap(), fe(2, 1));
    }

    #[test]
    fn missing_variable_is_named() {
        let p = LinearPoly::var(7);
        match p.eval(&Assignment::new()) {
            Err(Error::MissingVariable(7)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = LinearPoly::var(1);
        let q = &p - &p;
        assert!(q.is_zero());
        assert_eq!(q, LinearPoly::zero());
    }

    #[test]
    fn normalize_is_idempotent() {
        let p = LinearPoly::from_parts(fe(3, 1), [(0, fe(-4, 1)), (2, fe(2, 1))]);
        let n = p.normalized();
        assert_eq!(n.coeff(0), fe(-1, 1));
        assert_eq!(n.normalized(), n);
    }
}
