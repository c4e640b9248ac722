//! Chartwise holomorphic forms and multivector fields in two variables.
//!
//! Components are indexed by subsets of `{1, 2}` encoded as 2-bit masks
//! (bit 0 for the `z1` slot, bit 1 for the `z2` slot), with the ascending
//! basis order fixed once for the whole crate:
//!
//! * forms: `1, dz1, dz2, dz1^dz2`
//! * multivectors: `1, @1, @2, @1^@2`
//!
//! Iterated contraction nests as `i_{X^Y} = i_X . i_Y`, so
//! `i_{@1^@2}(dz1^dz2) = -1` and `i_{@2^@1}(dz1^dz2) = +1`. These two facts
//! pin every sign downstream and are frozen in tests.

use crate::laurent::{LaurentPoly, Var};
use crate::scalar::GaussianRational;
use std::collections::BTreeMap;
use std::fmt;

pub const MASK_EMPTY: u8 = 0b00;
pub const MASK_Z1: u8 = 0b01;
pub const MASK_Z2: u8 = 0b10;
pub const MASK_TOP: u8 = 0b11;
pub const ALL_MASKS: [u8; 4] = [MASK_EMPTY, MASK_Z1, MASK_Z2, MASK_TOP];

/// Sign of merging the single index `r` (0-based) in front of the ascending
/// word for `mask`: `(-1)^(# indices of mask below r)`.
fn merge_single_sign(r: u8, mask: u8) -> i32 {
    let below = (mask & ((1 << r) - 1)).count_ones();
    if below % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Shuffle sign for concatenating two ascending words, `None` on overlap.
fn merge_masks(a: u8, b: u8) -> Option<(u8, i32)> {
    if a & b != 0 {
        return None;
    }
    let mut sign = 1;
    for r in 0..2u8 {
        if b & (1 << r) != 0 {
            // indices of `a` strictly above r must jump past this one
            let above = (a >> (r + 1)).count_ones();
            if above % 2 == 1 {
                sign = -sign;
            }
        }
    }
    Some((a | b, sign))
}

/// Shared graded component map for forms and multivectors.
#[derive(Clone, PartialEq, Eq, Default)]
struct Graded {
    comps: BTreeMap<u8, LaurentPoly>,
}

impl Graded {
    fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn comp(&self, mask: u8) -> LaurentPoly {
        self.comps.get(&mask).cloned().unwrap_or_default()
    }

    fn add_comp(&mut self, mask: u8, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let cur = self.comps.entry(mask).or_default();
        *cur = &*cur + p;
        if cur.is_zero() {
            self.comps.remove(&mask);
        }
    }

    fn add(&self, rhs: &Graded) -> Graded {
        let mut out = self.clone();
        for (m, p) in &rhs.comps {
            out.add_comp(*m, p);
        }
        out
    }

    fn neg(&self) -> Graded {
        Graded {
            comps: self.comps.iter().map(|(m, p)| (*m, -p)).collect(),
        }
    }

    fn sub(&self, rhs: &Graded) -> Graded {
        self.add(&rhs.neg())
    }

    fn mul_poly(&self, f: &LaurentPoly) -> Graded {
        if f.is_zero() {
            return Graded::default();
        }
        Graded {
            comps: self
                .comps
                .iter()
                .filter_map(|(m, p)| {
                    let q = p * f;
                    (!q.is_zero()).then_some((*m, q))
                })
                .collect(),
        }
    }

    fn scale(&self, c: &GaussianRational) -> Graded {
        self.mul_poly(&LaurentPoly::constant(c.clone()))
    }

    fn homogeneous(&self, k: u32) -> Graded {
        Graded {
            comps: self
                .comps
                .iter()
                .filter(|(m, _)| m.count_ones() == k)
                .map(|(m, p)| (*m, p.clone()))
                .collect(),
        }
    }

    /// Graded exterior product.
    fn wedge(&self, rhs: &Graded) -> Graded {
        let mut out = Graded::default();
        for (&ma, pa) in &self.comps {
            for (&mb, pb) in &rhs.comps {
                if let Some((m, sign)) = merge_masks(ma, mb) {
                    let mut prod = pa * pb;
                    if sign < 0 {
                        prod = -&prod;
                    }
                    out.add_comp(m, &prod);
                }
            }
        }
        out
    }

    /// Left derivative in slot `r`: drops index `r` with sign
    /// `(-1)^(position of r)`. This is `i_{@r}` on forms and the odd partial
    /// used by the Schouten bracket on multivectors.
    fn left_derivative(&self, r: u8) -> Graded {
        let mut out = Graded::default();
        for (&m, p) in &self.comps {
            if m & (1 << r) != 0 {
                let sign = merge_single_sign(r, m & ((1 << r) - 1));
                let reduced = m & !(1 << r);
                let q = if sign < 0 { -p } else { p.clone() };
                out.add_comp(reduced, &q);
            }
        }
        out
    }

    /// Componentwise Laurent derivative of the coefficients.
    fn coeff_partial(&self, var: Var) -> Graded {
        let mut out = Graded::default();
        for (&m, p) in &self.comps {
            out.add_comp(m, &p.partial(var));
        }
        out
    }
}

/// A holomorphic differential form with Laurent coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PolyForm(Graded);

/// A holomorphic multivector field with Laurent coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PolyVector(Graded);

impl PolyForm {
    pub fn zero() -> Self {
        PolyForm::default()
    }

    pub fn function(p: LaurentPoly) -> Self {
        PolyForm::from_component(MASK_EMPTY, p)
    }

    pub fn from_component(mask: u8, p: LaurentPoly) -> Self {
        let mut g = Graded::default();
        g.add_comp(mask, &p);
        PolyForm(g)
    }

    /// `dz1` or `dz2`.
    pub fn dz(var: Var) -> Self {
        PolyForm::from_component(1 << var.index() as u8, LaurentPoly::one())
    }

    pub fn one_form(c1: LaurentPoly, c2: LaurentPoly) -> Self {
        let mut g = Graded::default();
        g.add_comp(MASK_Z1, &c1);
        g.add_comp(MASK_Z2, &c2);
        PolyForm(g)
    }

    pub fn top_form(p: LaurentPoly) -> Self {
        PolyForm::from_component(MASK_TOP, p)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn component(&self, mask: u8) -> LaurentPoly {
        self.0.comp(mask)
    }

    pub fn components(&self) -> impl Iterator<Item = (u8, &LaurentPoly)> {
        self.0.comps.iter().map(|(m, p)| (*m, p))
    }

    pub fn add(&self, rhs: &PolyForm) -> PolyForm {
        PolyForm(self.0.add(&rhs.0))
    }

    pub fn sub(&self, rhs: &PolyForm) -> PolyForm {
        PolyForm(self.0.sub(&rhs.0))
    }

    pub fn neg(&self) -> PolyForm {
        PolyForm(self.0.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> PolyForm {
        PolyForm(self.0.scale(c))
    }

    pub fn mul_poly(&self, f: &LaurentPoly) -> PolyForm {
        PolyForm(self.0.mul_poly(f))
    }

    pub fn homogeneous(&self, k: u32) -> PolyForm {
        PolyForm(self.0.homogeneous(k))
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.0.comps.keys().all(|m| m.count_ones() == k)
    }

    pub fn wedge(&self, rhs: &PolyForm) -> PolyForm {
        PolyForm(self.0.wedge(&rhs.0))
    }

    /// The holomorphic exterior differential: `d(f dz_S) = sum_r d_r f dz_r ^ dz_S`.
    pub fn partial(&self) -> PolyForm {
        let mut out = Graded::default();
        for (&m, p) in &self.0.comps {
            for var in Var::BOTH {
                let r = var.index() as u8;
                if m & (1 << r) == 0 {
                    let dp = p.partial(var);
                    if dp.is_zero() {
                        continue;
                    }
                    let sign = merge_single_sign(r, m);
                    let q = if sign < 0 { -&dp } else { dp };
                    out.add_comp(m | (1 << r), &q);
                }
            }
        }
        PolyForm(out)
    }

    /// Applies `z_var -> 1/z_var` to every coefficient (chart transition on
    /// the coefficient level only; the `dz` legs are handled by windows).
    pub fn invert_chart_coeffs(&self, var: Var) -> PolyForm {
        PolyForm(Graded {
            comps: self
                .0
                .comps
                .iter()
                .map(|(m, p)| (*m, p.invert_chart(var)))
                .collect(),
        })
    }
}

impl PolyVector {
    pub fn zero() -> Self {
        PolyVector::default()
    }

    pub fn function(p: LaurentPoly) -> Self {
        PolyVector::from_component(MASK_EMPTY, p)
    }

    pub fn from_component(mask: u8, p: LaurentPoly) -> Self {
        let mut g = Graded::default();
        g.add_comp(mask, &p);
        PolyVector(g)
    }

    /// `@1` or `@2` (the coordinate vector fields).
    pub fn basis(var: Var) -> Self {
        PolyVector::from_component(1 << var.index() as u8, LaurentPoly::one())
    }

    pub fn one_vector(c1: LaurentPoly, c2: LaurentPoly) -> Self {
        let mut g = Graded::default();
        g.add_comp(MASK_Z1, &c1);
        g.add_comp(MASK_Z2, &c2);
        PolyVector(g)
    }

    /// Top multivector expressed against the ascending basis `@1^@2`.
    pub fn top_ascending(p: LaurentPoly) -> Self {
        PolyVector::from_component(MASK_TOP, p)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn component(&self, mask: u8) -> LaurentPoly {
        self.0.comp(mask)
    }

    pub fn components(&self) -> impl Iterator<Item = (u8, &LaurentPoly)> {
        self.0.comps.iter().map(|(m, p)| (*m, p))
    }

    pub fn add(&self, rhs: &PolyVector) -> PolyVector {
        PolyVector(self.0.add(&rhs.0))
    }

    pub fn sub(&self, rhs: &PolyVector) -> PolyVector {
        PolyVector(self.0.sub(&rhs.0))
    }

    pub fn neg(&self) -> PolyVector {
        PolyVector(self.0.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> PolyVector {
        PolyVector(self.0.scale(c))
    }

    pub fn mul_poly(&self, f: &LaurentPoly) -> PolyVector {
        PolyVector(self.0.mul_poly(f))
    }

    pub fn homogeneous(&self, k: u32) -> PolyVector {
        PolyVector(self.0.homogeneous(k))
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.0.comps.keys().all(|m| m.count_ones() == k)
    }

    pub fn wedge(&self, rhs: &PolyVector) -> PolyVector {
        PolyVector(self.0.wedge(&rhs.0))
    }

    /// Degrees occurring with a nonzero component.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.0.comps.keys().map(|m| m.count_ones()).collect();
        ds.dedup();
        ds
    }

    /// Applies the vector field (degree-1 part) to a function.
    pub fn apply_to(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for var in Var::BOTH {
            let c = self.0.comp(1 << var.index() as u8);
            out = &out + &(&c * &f.partial(var));
        }
        out
    }

    /// Odd right derivative (used by the Schouten bracket): drops index `r`
    /// with sign `(-1)^(# indices above r)`.
    pub(crate) fn theta_derivative_right(&self, r: u8) -> PolyVector {
        let mut out = Graded::default();
        for (&m, p) in &self.0.comps {
            if m & (1 << r) != 0 {
                let above = (m >> (r + 1)).count_ones();
                let reduced = m & !(1 << r);
                let q = if above % 2 == 1 { -p } else { p.clone() };
                out.add_comp(reduced, &q);
            }
        }
        PolyVector(out)
    }

    /// Componentwise coefficient derivative.
    pub(crate) fn coeff_partial(&self, var: Var) -> PolyVector {
        PolyVector(self.0.coeff_partial(var))
    }
}

/// Interior product `i_V a` with the nesting `i_{X^Y} = i_X . i_Y`; the
/// degree-zero part of `V` acts by multiplication.
pub fn interior(v: &PolyVector, a: &PolyForm) -> PolyForm {
    let mut out = Graded::default();
    for (&mask, coeff) in &v.0.comps {
        let mut acc = a.0.clone();
        // innermost factor of the wedge word contracts first
        for r in (0..2u8).rev() {
            if mask & (1 << r) != 0 {
                acc = acc.left_derivative(r);
            }
        }
        out = out.add(&acc.mul_poly(coeff));
    }
    PolyForm(out)
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_graded(&self.0, f, ["1", "dz1", "dz2", "dz1^dz2"])
    }
}

impl fmt::Debug for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_graded(&self.0, f, ["1", "@1", "@2", "@1^@2"])
    }
}

fn fmt_graded(g: &Graded, f: &mut fmt::Formatter<'_>, names: [&str; 4]) -> fmt::Result {
    if g.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (&m, p) in &g.comps {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        write!(f, "[{p}] {}", names[m as usize])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(e1: i32, e2: i32) -> LaurentPoly {
        LaurentPoly::var_pow(e1, e2)
    }

    #[test]
    fn wedge_alternation() {
        let dz1 = PolyForm::dz(Var::Z1);
        let dz2 = PolyForm::dz(Var::Z2);
        assert_eq!(dz1.wedge(&dz1), PolyForm::zero());
        assert_eq!(dz1.wedge(&dz2), PolyForm::top_form(LaurentPoly::one()));
        assert_eq!(dz2.wedge(&dz1), PolyForm::top_form(LaurentPoly::one()).neg());
    }

    #[test]
    fn wedge_bilinearity() {
        // (f dz1) ^ (g dz2) = fg dz1^dz2
        let f = lp(2, 0);
        let g = lp(0, -1);
        let a = PolyForm::from_component(MASK_Z1, f.clone());
        let b = PolyForm::from_component(MASK_Z2, g.clone());
        assert_eq!(a.wedge(&b), PolyForm::top_form(&f * &g));
    }

    #[test]
    fn graded_commutativity() {
        let a = PolyForm::one_form(lp(1, 0), lp(0, 2));
        let b = PolyForm::one_form(lp(-1, 1), lp(2, 0));
        // two odd forms anticommute
        assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        let f = PolyForm::function(lp(1, 1));
        assert_eq!(f.wedge(&a), a.wedge(&f));
    }

    #[test]
    fn interior_dual_pairing() {
        let v = PolyVector::basis(Var::Z1);
        assert_eq!(
            interior(&v, &PolyForm::dz(Var::Z1)),
            PolyForm::function(LaurentPoly::one())
        );
        assert_eq!(interior(&v, &PolyForm::dz(Var::Z2)), PolyForm::zero());
    }

    #[test]
    fn interior_nesting_convention_frozen() {
        let top = PolyForm::top_form(LaurentPoly::one());
        // i_{@1^@2}(dz1^dz2) = -1 with ascending storage,
        // hence i_{@2^@1}(dz1^dz2) = +1.
        let asc = PolyVector::top_ascending(LaurentPoly::one());
        assert_eq!(
            interior(&asc, &top),
            PolyForm::function(LaurentPoly::constant(GaussianRational::from_int(-1)))
        );
    }

    #[test]
    fn interior_degree_underflow() {
        let v = PolyVector::top_ascending(lp(1, 1));
        let a = PolyForm::from_component(MASK_Z1, lp(0, 1));
        assert_eq!(interior(&v, &a), PolyForm::zero());
    }

    #[test]
    fn partial_of_function() {
        // d(z1 z2) = z2 dz1 + z1 dz2
        let d = PolyForm::function(lp(1, 1)).partial();
        assert_eq!(d, PolyForm::one_form(lp(0, 1), lp(1, 0)));
    }

    #[test]
    fn partial_reorders_with_sign() {
        // d(z2 dz1) = dz2 ^ dz1 * 1 = -dz1^dz2
        let a = PolyForm::from_component(MASK_Z1, lp(0, 1));
        assert_eq!(a.partial(), PolyForm::top_form(LaurentPoly::one()).neg());
    }

    #[test]
    fn partial_squares_to_zero() {
        let a = PolyForm::one_form(lp(3, -2), lp(-1, 4));
        assert_eq!(a.partial().partial(), PolyForm::zero());
        let f = PolyForm::function(lp(2, 2));
        assert_eq!(f.partial().partial(), PolyForm::zero());
    }

    #[test]
    fn top_degree_partial_vanishes() {
        let w = PolyForm::top_form(lp(5, -3));
        assert_eq!(w.partial(), PolyForm::zero());
    }
}
