//! Exact arithmetic in the real multiquadratic field Q(√2, √3, √5).
//!
//! Every cosine needed by the geometric representation of a Coxeter system
//! with bond orders in {1, 2, 3, 4, 5, 6, ∞} lives in this field, so all root
//! computations in the crate are exact.

mod poly;

pub use poly::{Assignment, LinearPoly, Var};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::Error;

pub type Rational = BigRational;

/// Bond order of a Coxeter matrix entry; `INFINITY` stands for m(s,t) = ∞.
pub type BondOrder = u32;
pub const INFINITY: BondOrder = u32::MAX;

/// Basis elements are indexed by a 3-bit mask over (√2, √3, √5); the element
/// for mask `b` is the square root of the product of the selected primes.
const PRIMES: [u32; 3] = [2, 3, 5];

/// Serialization order of the basis: 1, √2, √3, √5, √6, √10, √15, √30.
pub const BASIS_ORDER: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

fn radicand(mask: u8) -> u32 {
    PRIMES
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, p)| *p)
        .product()
}

fn surd_name(mask: u8) -> String {
    format!("sqrt{}", radicand(mask))
}

/// An element of Q(√2,√3,√5), stored sparsely as (basis mask, coefficient)
/// pairs sorted by mask with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    terms: SmallVec<[(u8, Rational); 2]>,
}

impl FieldElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = SmallVec::new();
        if !q.is_zero() {
            terms.push((0u8, q));
        }
        Self { terms }
    }

    /// `coeff · √radicand` for a squarefree radicand dividing 30.
    pub fn surd(coeff: Rational, radicand_value: u32) -> Result<Self, Error> {
        let mask = (0u8..8)
            .find(|&m| radicand(m) == radicand_value)
            .ok_or_else(|| Error::Field(format!("√{radicand_value} is not a basis element")))?;
        let mut terms = SmallVec::new();
        if !coeff.is_zero() {
            terms.push((mask, coeff));
        }
        Ok(Self { terms })
    }

    /// Build from coordinates in `BASIS_ORDER`.
    pub fn from_coords(coords: [Rational; 8]) -> Self {
        let mut terms: SmallVec<[(u8, Rational); 2]> = SmallVec::new();
        for (pos, q) in coords.into_iter().enumerate() {
            if !q.is_zero() {
                terms.push((BASIS_ORDER[pos], q));
            }
        }
        terms.sort_by_key(|(m, _)| *m);
        Self { terms }
    }

    /// Coordinates in `BASIS_ORDER`.
    pub fn coords(&self) -> [Rational; 8] {
        let mut out: [Rational; 8] = Default::default();
        for (mask, q) in &self.terms {
            let pos = BASIS_ORDER.iter().position(|b| b == mask).unwrap();
            out[pos] = q.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(0, q)] => Some(q.clone()),
            _ => None,
        }
    }

    fn from_terms_unsorted(mut raw: Vec<(u8, Rational)>) -> Self {
        raw.sort_by_key(|(m, _)| *m);
        let mut terms: SmallVec<[(u8, Rational); 2]> = SmallVec::new();
        for (m, q) in raw {
            match terms.last_mut() {
                Some((lm, lq)) if *lm == m => *lq += q,
                _ => terms.push((m, q)),
            }
        }
        terms.retain(|(_, q)| !q.is_zero());
        Self { terms }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect(),
        }
    }

    /// Galois conjugate flipping the sign of √p for the prime at `bit`.
    fn conjugate(&self, bit: u8) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    if m & (1 << bit) != 0 {
                        (*m, -c)
                    } else {
                        (*m, c.clone())
                    }
                })
                .collect(),
        }
    }

    /// Multiplicative inverse, computed through the tower of conjugates.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational(q.recip()));
        }
        let mut numer = Self::one();
        let mut x = self.clone();
        for bit in 0..3 {
            let c = x.conjugate(bit);
            numer = &numer * &c;
            x = &x * &c;
        }
        let norm = x
            .as_rational()
            .expect("norm of a multiquadratic element is rational");
        Some(numer.scale(&norm.recip()))
    }

    /// Exact sign under the embedding where every surd is positive.
    pub fn sign(&self) -> i8 {
        match self.terms.as_slice() {
            [] => 0,
            [(_, q)] => sign_of(q),
            _ => self.interval_sign(),
        }
    }

    fn interval_sign(&self) -> i8 {
        let mut bits = 24u32;
        loop {
            let (lo, hi) = self.enclose(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// Rational bounds `lo <= self <= hi` with surds approximated to `bits`
    /// binary digits.
    pub fn enclose(&self, bits: u32) -> (Rational, Rational) {
        let scale = BigInt::one() << bits;
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (mask, c) in &self.terms {
            if *mask == 0 {
                lo += c;
                hi += c;
                continue;
            }
            let r = BigInt::from(radicand(*mask));
            let a = (&r * &scale * &scale).sqrt();
            let s_lo = Rational::new(a.clone(), scale.clone());
            let s_hi = Rational::new(a + 1, scale.clone());
            if c.is_positive() {
                lo += c * &s_lo;
                hi += c * &s_hi;
            } else {
                lo += c * &s_hi;
                hi += c * &s_lo;
            }
        }
        (lo, hi)
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// A rational number at least as large as `|self|`.
    pub fn abs_upper_bound(&self) -> Rational {
        let (lo, hi) = self.enclose(16);
        let (lo, hi) = (lo.abs(), hi.abs());
        if lo > hi {
            lo
        } else {
            hi
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64().unwrap_or(f64::NAN) * (radicand(*m) as f64).sqrt())
            .sum()
    }

    /// Coordinates as "p/q" strings in `BASIS_ORDER`.
    pub fn to_strings(&self) -> Vec<String> {
        self.coords()
            .iter()
            .map(|q| format!("{}/{}", q.numer(), q.denom()))
            .collect()
    }

    pub fn from_strings(parts: &[String]) -> Result<Self, Error> {
        if parts.len() != 8 {
            return Err(Error::Parse(format!(
                "field element needs 8 coordinates, got {}",
                parts.len()
            )));
        }
        let mut coords: [Rational; 8] = Default::default();
        for (i, p) in parts.iter().enumerate() {
            coords[i] = parse_rational(p)?;
        }
        Ok(Self::from_coords(coords))
    }
}

pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("malformed rational {text:?}"));
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

fn sign_of(q: &Rational) -> i8 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// −cos(π/m), the value of the bilinear form on two simple roots with bond
/// order m. m = 1 gives the diagonal value 1.
pub fn make_cos(m: BondOrder) -> Result<FieldElement, Error> {
    let q = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
    Ok(match m {
        1 => FieldElement::one(),
        2 => FieldElement::zero(),
        3 => FieldElement::from_ratio(-1, 2),
        4 => FieldElement::surd(q(-1, 2), 2)?,
        5 => &FieldElement::from_ratio(-1, 4) + &FieldElement::surd(q(-1, 4), 5)?,
        6 => FieldElement::surd(q(-1, 2), 3)?,
        INFINITY => FieldElement::from_int(-1),
        other => return Err(Error::UnsupportedBond(other)),
    })
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mask, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if *mask == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", surd_name(*mask))?;
            } else {
                write!(f, "{a}*{}", surd_name(*mask))?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let mut terms: SmallVec<[(u8, Rational); 2]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                terms.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                terms.push(b[j].clone());
                j += 1;
            } else {
                let s = &a[i].1 + &b[j].1;
                if !s.is_zero() {
                    terms.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        FieldElement { terms }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() || rhs.is_zero() {
            return FieldElement::zero();
        }
        if let [(0, q)] = rhs.terms.as_slice() {
            return self.scale(q);
        }
        if let [(0, q)] = self.terms.as_slice() {
            return rhs.scale(q);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let common = radicand(ma & mb);
                let mut c = ca * cb;
                if common != 1 {
                    c *= Rational::from_integer(BigInt::from(common));
                }
                raw.push((ma ^ mb, c));
            }
        }
        FieldElement::from_terms_unsorted(raw)
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &FieldElement) -> FieldElement {
        let inv = rhs.inverse().expect("division by zero in FieldElement");
        self * &inv
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sqrt(n: u32) -> FieldElement {
        FieldElement::surd(Rational::one(), n).unwrap()
    }

    #[test]
    fn cosines() {
        assert_eq!(make_cos(2).unwrap(), FieldElement::zero());
        assert_eq!(make_cos(3).unwrap(), FieldElement::from_ratio(-1, 2));
        assert_eq!(make_cos(4).unwrap(), sqrt(2).scale(&q(-1, 2)));
        assert_eq!(make_cos(INFINITY).unwrap(), FieldElement::from_int(-1));
        assert_eq!(make_cos(1).unwrap(), FieldElement::one());
        assert!(matches!(make_cos(7), Err(Error::UnsupportedBond(7))));
        // 4cos²(π/5) = 2cos(π/5) + 1
        let c = -make_cos(5).unwrap();
        let two_c = &c + &c;
        assert_eq!(&two_c * &two_c, &two_c + &FieldElement::one());
        // 4cos²(π/6) = 3
        let c6 = make_cos(6).unwrap();
        assert_eq!(
            &(&c6 * &c6) * &FieldElement::from_int(4),
            FieldElement::from_int(3)
        );
    }

    #[test]
    fn signs() {
        assert_eq!(FieldElement::zero().sign(), 0);
        // √6 − 2 > 0 since 6 > 4
        assert_eq!((sqrt(6) - FieldElement::from_int(2)).sign(), 1);
        // 7/5 − √2 < 0 since 49/25 < 2
        assert_eq!((FieldElement::from_ratio(7, 5) - sqrt(2)).sign(), -1);
        // √2 + √3 − √10 ≈ 3.146 − 3.162
        assert_eq!((sqrt(2) + sqrt(3) - sqrt(10)).sign(), -1);
    }

    #[test]
    fn surd_products() {
        assert_eq!(&sqrt(2) * &sqrt(2), FieldElement::from_int(2));
        assert_eq!(&sqrt(6) * &sqrt(10), sqrt(15).scale(&q(2, 1)));
        assert_eq!(&sqrt(2) * &sqrt(15), sqrt(30));
    }

    #[test]
    fn inverse_of_mixed_element() {
        let x = FieldElement::one() + sqrt(2) + sqrt(3) + sqrt(5).scale(&q(1, 3));
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        assert!(FieldElement::zero().inverse().is_none());
    }

    #[test]
    fn string_round_trip() {
        let x = sqrt(30).scale(&q(-3, 7)) + FieldElement::from_ratio(1, 2);
        let s = x.to_strings();
        assert_eq!(s[0], "1/2");
        assert_eq!(s[7], "-3/7");
        assert_eq!(FieldElement::from_strings(&s).unwrap(), x);
    }
}
