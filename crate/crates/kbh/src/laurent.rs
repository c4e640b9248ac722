//! Sparse bivariate Laurent polynomials over the Gaussian rationals.
//!
//! Terms are keyed by integer exponent pairs `(e1, e2)`; zero coefficients
//! are never stored, so equality is structural.

use crate::scalar::GaussianRational;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// One of the two chart coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    Z1,
    Z2,
}

impl Var {
    pub const BOTH: [Var; 2] = [Var::Z1, Var::Z2];

    pub fn index(self) -> usize {
        match self {
            Var::Z1 => 0,
            Var::Z2 => 1,
        }
    }

    /// The coordinate function `z1` or `z2` as a polynomial.
    pub fn coordinate(self) -> LaurentPoly {
        match self {
            Var::Z1 => LaurentPoly::var_pow(1, 0),
            Var::Z2 => LaurentPoly::var_pow(0, 1),
        }
    }
}

/// A sparse Laurent polynomial in `z1, z2`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<(i32, i32), GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, 0, GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        LaurentPoly::monomial(0, 0, c)
    }

    pub fn monomial(e1: i32, e2: i32, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((e1, e2), c);
        }
        LaurentPoly { terms }
    }

    /// `z1^e1 * z2^e2` with unit coefficient.
    pub fn var_pow(e1: i32, e2: i32) -> Self {
        LaurentPoly::monomial(e1, e2, GaussianRational::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((i32, i32), GaussianRational)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e1: i32, e2: i32) -> GaussianRational {
        self.terms.get(&(e1, e2)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: (i32, i32), c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Laurent derivative in `var`: `z^e -> e * z^(e-1)`; the `z^0` term dies
    /// and `z^-1` maps to `-z^-2`.
    pub fn partial(&self, var: Var) -> Self {
        let mut out = LaurentPoly::zero();
        for (&(e1, e2), c) in &self.terms {
            let (e, shifted) = match var {
                Var::Z1 => (e1, (e1 - 1, e2)),
                Var::Z2 => (e2, (e1, e2 - 1)),
            };
            if e != 0 {
                out.add_term(shifted, c.scale_int(e as i64));
            }
        }
        out
    }

    /// Substitutes `z_var -> 1/z_var` (exponent negation); an involution and
    /// an algebra automorphism.
    pub fn invert_chart(&self, var: Var) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(e1, e2), c)| {
                    let e = match var {
                        Var::Z1 => (-e1, e2),
                        Var::Z2 => (e1, -e2),
                    };
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Multiplies by the monomial `z1^s1 * z2^s2`.
    pub fn shift(&self, s1: i32, s2: i32) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(e1, e2), c)| ((e1 + s1, e2 + s2), c.clone()))
                .collect(),
        }
    }

    /// Exact division by a single-term polynomial. `None` if `m` is not a
    /// nonzero monomial.
    pub fn div_monomial(&self, m: &LaurentPoly) -> Option<LaurentPoly> {
        let mut it = m.terms.iter();
        let (&(e1, e2), c) = it.next()?;
        if it.next().is_some() {
            return None;
        }
        let inv = c.inverse();
        Some(self.shift(-e1, -e2).scale(&inv))
    }

    /// Exponent bounding box `((min_e1, max_e1), (min_e2, max_e2))`, `None`
    /// when zero.
    pub fn support_box(&self) -> Option<((i32, i32), (i32, i32))> {
        let mut it = self.terms.keys();
        let &(a, b) = it.next()?;
        let mut bx = ((a, a), (b, b));
        for &(e1, e2) in it {
            bx.0 .0 = bx.0 .0.min(e1);
            bx.0 .1 = bx.0 .1.max(e1);
            bx.1 .0 = bx.1 .0.min(e2);
            bx.1 .1 = bx.1 .1.max(e2);
        }
        Some(bx)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&(a1, a2), ca) in &self.terms {
            for (&(b1, b2), cb) in &rhs.terms {
                out.add_term((a1 + b1, a2 + b2), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(e1, e2), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if e1 != 0 {
                write!(f, "*z1^{e1}")?;
            }
            if e2 != 0 {
                write!(f, "*z2^{e2}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn monomial_product() {
        let z1 = LaurentPoly::var_pow(1, 0);
        let z2 = LaurentPoly::var_pow(0, 1);
        assert_eq!(&z1 * &z2, LaurentPoly::var_pow(1, 1));
    }

    #[test]
    fn mul_identity() {
        let a = LaurentPoly::from_terms([((2, -1), q(3)), ((0, 0), q(-1))]);
        assert_eq!(&a * &LaurentPoly::one(), a);
    }

    #[test]
    fn difference_of_inverse_squares() {
        // (1 + z1^-1)(1 - z1^-1) expanded by hand: 1 - z1^-2.
        let p = LaurentPoly::from_terms([((0, 0), q(1)), ((-1, 0), q(1))]);
        let m = LaurentPoly::from_terms([((0, 0), q(1)), ((-1, 0), q(-1))]);
        let expect = LaurentPoly::from_terms([((0, 0), q(1)), ((-2, 0), q(-1))]);
        assert_eq!(&p * &m, expect);
    }

    #[test]
    fn partial_power_rule() {
        // d1(z1^2 z2) = 2 z1 z2
        let a = LaurentPoly::var_pow(2, 1);
        assert_eq!(a.partial(Var::Z1), LaurentPoly::monomial(1, 1, q(2)));
        // d1(z2^3) = 0
        assert_eq!(LaurentPoly::var_pow(0, 3).partial(Var::Z1), LaurentPoly::zero());
        // d1(z1^-1) = -z1^-2
        assert_eq!(
            LaurentPoly::var_pow(-1, 0).partial(Var::Z1),
            LaurentPoly::monomial(-2, 0, q(-1))
        );
    }

    #[test]
    fn invert_chart_involution() {
        let a = LaurentPoly::from_terms([((2, 0), q(1)), ((0, 0), q(5)), ((-3, 1), q(2))]);
        assert_eq!(a.invert_chart(Var::Z1), {
            LaurentPoly::from_terms([((-2, 0), q(1)), ((0, 0), q(5)), ((3, 1), q(2))])
        });
        assert_eq!(a.invert_chart(Var::Z1).invert_chart(Var::Z1), a);
        assert_eq!(LaurentPoly::one().invert_chart(Var::Z2), LaurentPoly::one());
    }

    #[test]
    fn div_monomial_exact() {
        let a = LaurentPoly::from_terms([((2, 1), q(4)), ((1, 3), q(-2))]);
        let m = LaurentPoly::monomial(1, 1, q(2));
        let d = a.div_monomial(&m).unwrap();
        assert_eq!(&d * &m, a);
        assert!(a.div_monomial(&LaurentPoly::zero()).is_none());
    }
}
