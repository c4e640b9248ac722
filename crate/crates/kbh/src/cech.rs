//! The Cech model over the four-chart product cover.
//!
//! Opens are indexed `v = 2a + b` for chart pair `(a, b)`, so the fixed
//! total order is `U00 < U01 < U10 < U11`; a simplex is a nonempty subset
//! stored as a 4-bit mask. All sections live in the single global coordinate
//! system of `U00`; regularity on the other charts becomes a monomial window
//! on exponents, with the transitions `dz -> -w^-2 dw`, `@z -> -w^2 @w`
//! supplying the `-2` twist per `dz` leg. Restriction maps are identities on
//! the shared Laurent data, so the Cech differential never truncates; only
//! `delta_pi` can push exponents across the `+-W` boundary.

use crate::calculus::{delta_pi, PoissonBivector};
use crate::forms::PolyForm;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CechError {
    #[error("not a global bivector on CP1xCP1 (support must lie in {{0..2}}^2)")]
    NonGlobalBivector,
    #[error("cochain degrees or windows do not match: {0}")]
    Mismatch(String),
}

/// Number of opens in the cover.
pub const N_OPENS: usize = 4;
/// Masks of all 15 nonempty simplices, grouped by ascending vertex count.
pub fn simplices_of_degree(j: usize) -> Vec<u8> {
    (1u8..16).filter(|m| m.count_ones() as usize == j + 1).collect()
}

/// Chart indices present in the simplex for factor `r` (0 or 1):
/// returns `(has_chart0, has_chart1)`.
pub fn factor_charts(simplex: u8, r: usize) -> (bool, bool) {
    let mut has = (false, false);
    for v in 0..N_OPENS {
        if simplex & (1 << v) != 0 {
            let idx = if r == 0 { v >> 1 } else { v & 1 };
            if idx == 0 {
                has.0 = true;
            } else {
                has.1 = true;
            }
        }
    }
    has
}

/// Exponent range for one factor given the chart pattern and the twist
/// (`-2` per `dz` leg for form sheaves, the bundle degree for `O(a, b)`).
/// `None` when the window is empty.
fn range_for(has: (bool, bool), twist: i32, w: i32) -> Option<(i32, i32)> {
    let (lo, hi) = match has {
        (true, false) => (0, w),
        (false, true) => (-w, twist.min(w)),
        (true, true) => (-w, w),
        (false, false) => unreachable!("empty simplex"),
    };
    (lo <= hi).then_some((lo, hi))
}

/// Radius actually used for sections of `Omega^i` at base radius `w`.
///
/// `delta_pi` lowers the form degree by one and shifts exponents by at most
/// two (one factor of `q`, one derivative), so grading the radius by the form
/// degree makes every `delta_pi` image land exactly inside the next window:
/// the truncated total complex is then an honest complex, `D^2 = 0`
/// everywhere, and no image coefficient is ever dropped.
pub fn graded_radius(w: i32, form_degree: usize) -> i32 {
    w + 2 * (2 - form_degree as i32)
}

/// Per-simplex monomial window for the sheaf `Omega^|S|` with `dz` legs `S`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MonomialWindow {
    pub range1: Option<(i32, i32)>,
    pub range2: Option<(i32, i32)>,
}

impl MonomialWindow {
    pub fn for_form(simplex: u8, s_mask: u8, base_w: i32) -> Self {
        let w = graded_radius(base_w, s_mask.count_ones() as usize);
        let twist = |r: usize| if s_mask & (1 << r) != 0 { -2 } else { 0 };
        MonomialWindow {
            range1: range_for(factor_charts(simplex, 0), twist(0), w),
            range2: range_for(factor_charts(simplex, 1), twist(1), w),
        }
    }

    /// Window for the line bundle `O(a, b)` (no form legs).
    pub fn for_bundle(simplex: u8, a: i32, b: i32, w: i32) -> Self {
        MonomialWindow {
            range1: range_for(factor_charts(simplex, 0), a, w),
            range2: range_for(factor_charts(simplex, 1), b, w),
        }
    }

    pub fn contains(&self, e: (i32, i32)) -> bool {
        match (self.range1, self.range2) {
            (Some((l1, h1)), Some((l2, h2))) => {
                l1 <= e.0 && e.0 <= h1 && l2 <= e.1 && e.1 <= h2
            }
            _ => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.range1.is_none() || self.range2.is_none()
    }

    pub fn len(&self) -> usize {
        match (self.range1, self.range2) {
            (Some((l1, h1)), Some((l2, h2))) => {
                ((h1 - l1 + 1) * (h2 - l2 + 1)) as usize
            }
            _ => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        let r1 = self.range1.unwrap_or((0, -1));
        let r2 = self.range2.unwrap_or((0, -1));
        (r1.0..=r1.1).flat_map(move |e1| (r2.0..=r2.1).map(move |e2| (e1, e2)))
    }
}

/// A Cech cochain of pure bidegree: an assignment of a homogeneous
/// `form_degree`-form to each simplex of size `cech_degree + 1`, each
/// component confined to its monomial window at radius `window`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CechCochain {
    pub cech_degree: usize,
    pub form_degree: usize,
    pub window: i32,
    data: BTreeMap<u8, PolyForm>,
}

impl CechCochain {
    pub fn zero(cech_degree: usize, form_degree: usize, window: i32) -> Self {
        CechCochain {
            cech_degree,
            form_degree,
            window,
            data: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, simplex: u8) -> PolyForm {
        self.data.get(&simplex).cloned().unwrap_or_default()
    }

    pub fn simplices(&self) -> impl Iterator<Item = (u8, &PolyForm)> {
        self.data.iter().map(|(s, f)| (*s, f))
    }

    pub fn add_at(&mut self, simplex: u8, form: &PolyForm) {
        debug_assert_eq!(simplex.count_ones() as usize, self.cech_degree + 1);
        debug_assert!(form.is_homogeneous(self.form_degree as u32));
        let cur = self.data.entry(simplex).or_default();
        *cur = cur.add(form);
        if cur.is_zero() {
            self.data.remove(&simplex);
        }
    }

    pub fn add(&self, rhs: &CechCochain) -> CechCochain {
        debug_assert_eq!(
            (self.cech_degree, self.form_degree, self.window),
            (rhs.cech_degree, rhs.form_degree, rhs.window)
        );
        let mut out = self.clone();
        for (s, f) in rhs.simplices() {
            out.add_at(s, f);
        }
        out
    }

    pub fn neg(&self) -> CechCochain {
        CechCochain {
            cech_degree: self.cech_degree,
            form_degree: self.form_degree,
            window: self.window,
            data: self.data.iter().map(|(s, f)| (*s, f.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &CechCochain) -> CechCochain {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &crate::scalar::GaussianRational) -> CechCochain {
        let mut out = CechCochain::zero(self.cech_degree, self.form_degree, self.window);
        for (s, f) in self.simplices() {
            out.add_at(s, &f.scale(c));
        }
        out
    }

    /// Every stored monomial lies inside its simplex window.
    pub fn within_window(&self) -> bool {
        self.data.iter().all(|(&s, form)| {
            form.components().all(|(mask, poly)| {
                let win = MonomialWindow::for_form(s, mask, self.window);
                poly.terms().all(|(&e, _)| win.contains(e))
            })
        })
    }
}

/// The Cech coboundary: alternating sum of restrictions, which are identity
/// maps on the shared Laurent data. Windows only widen along cofaces, so no
/// truncation can occur here.
pub fn cech_differential(c: &CechCochain) -> CechCochain {
    let mut out = CechCochain::zero(c.cech_degree + 1, c.form_degree, c.window);
    if c.cech_degree + 1 >= N_OPENS {
        return out;
    }
    for (simplex, form) in c.simplices() {
        for v in 0..N_OPENS as u8 {
            if simplex & (1 << v) != 0 {
                continue;
            }
            let coface = simplex | (1 << v);
            // position of v among the ascending vertices of the coface
            let pos = (coface & ((1 << v) - 1)).count_ones();
            let signed = if pos % 2 == 1 { form.neg() } else { form.clone() };
            out.add_at(coface, &signed);
        }
    }
    out
}

/// Simplexwise `delta_pi` in the shared coordinates. Returns the cochain and
/// whether any monomial had to be dropped at a window boundary; with the
/// graded radii this flag stays `false` for any input inside its own window,
/// and a `true` marks an input that was already out of window.
pub fn delta_pi_cochain(
    pi: &PoissonBivector,
    c: &CechCochain,
) -> Result<(CechCochain, bool), CechError> {
    if !pi.is_global() {
        return Err(CechError::NonGlobalBivector);
    }
    if c.form_degree == 0 {
        return Ok((CechCochain::zero(c.cech_degree, 0, c.window), false));
    }
    let mut out = CechCochain::zero(c.cech_degree, c.form_degree - 1, c.window);
    let mut truncated = false;
    for (simplex, form) in c.simplices() {
        let image = delta_pi(pi, form);
        let mut kept = PolyForm::zero();
        for (mask, poly) in image.components() {
            let win = MonomialWindow::for_form(simplex, mask, c.window);
            let mut inside = crate::laurent::LaurentPoly::zero();
            for (&e, coeff) in poly.terms() {
                if win.contains(e) {
                    inside.add_term(e, coeff.clone());
                } else {
                    truncated = true;
                }
            }
            kept = kept.add(&PolyForm::from_component(mask, inside));
        }
        out.add_at(simplex, &kept);
    }
    Ok((out, truncated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{MASK_EMPTY, MASK_TOP, MASK_Z1};
    use crate::laurent::LaurentPoly;

    #[test]
    fn cover_has_fifteen_simplices() {
        let total: usize = (0..4).map(|j| simplices_of_degree(j).len()).sum();
        assert_eq!(total, 15);
        assert_eq!(simplices_of_degree(0).len(), 4);
        assert_eq!(simplices_of_degree(1).len(), 6);
        assert_eq!(simplices_of_degree(2).len(), 4);
        assert_eq!(simplices_of_degree(3).len(), 1);
    }

    #[test]
    fn window_patterns() {
        let w = 4;
        // vertex U00 (mask 1): both factors on chart 0; functions get radius w+4
        let win = MonomialWindow::for_form(0b0001, MASK_EMPTY, w);
        assert_eq!(win.range1, Some((0, 8)));
        assert_eq!(win.range2, Some((0, 8)));
        // vertex U11 (mask 8) with a dz1 leg: factor 1 on chart 1, twisted;
        // one-forms get radius w+2
        let win = MonomialWindow::for_form(0b1000, MASK_Z1, w);
        assert_eq!(win.range1, Some((-6, -2)));
        assert_eq!(win.range2, Some((-6, 0)));
        // mixed edge U00,U11 (mask 9): both factors mixed; top forms at radius w
        let win = MonomialWindow::for_form(0b1001, MASK_TOP, w);
        assert_eq!(win.range1, Some((-4, 4)));
        assert_eq!(win.range2, Some((-4, 4)));
        // too small a window empties the twisted chart-1 range
        let win = MonomialWindow::for_form(0b1000, MASK_TOP, 1);
        assert!(win.is_empty());
    }

    #[test]
    fn constants_glue() {
        // the constant-1 zero-cochain is closed
        let mut c = CechCochain::zero(0, 0, 4);
        for s in simplices_of_degree(0) {
            c.add_at(s, &PolyForm::function(LaurentPoly::one()));
        }
        assert!(cech_differential(&c).is_zero());
    }

    #[test]
    fn coboundary_squares_to_zero() {
        use crate::random::Gen;
        let mut g = Gen::new(11);
        for _ in 0..40 {
            let j = g.range(0, 2);
            let c = random_cochain(&mut g, j, 1, 5);
            assert!(cech_differential(&cech_differential(&c)).is_zero());
        }
    }

    #[test]
    fn delta_pi_cochain_shift_bound() {
        use crate::random::Gen;
        // exponent shift per variable lies in [-1, +2] coming from deg q <= 2
        // and a single derivative
        let mut g = Gen::new(5);
        for _ in 0..60 {
            let pi = g.bivector_full();
            let w = 7;
            let s = 0b1001u8; // fully mixed edge, no truncation in the interior
            let e = (g.range(0, 4) as i32 - 2, g.range(0, 4) as i32 - 2);
            let mask = if g.range(0, 1) == 0 { MASK_TOP } else { MASK_Z1 };
            let mut c = CechCochain::zero(1, mask.count_ones() as usize, w);
            c.add_at(s, &PolyForm::from_component(mask, LaurentPoly::var_pow(e.0, e.1)));
            let (img, _) = delta_pi_cochain(&pi, &c).unwrap();
            for (_, form) in img.simplices() {
                for (_, poly) in form.components() {
                    for (&(e1, e2), _) in poly.terms() {
                        assert!(e1 - e.0 >= -1 && e1 - e.0 <= 2, "shift in z1");
                        assert!(e2 - e.1 >= -1 && e2 - e.1 <= 2, "shift in z2");
                    }
                }
            }
        }
    }

    #[test]
    fn delta_pi_cochain_rejects_non_global() {
        let pi = PoissonBivector::new(LaurentPoly::var_pow(3, 0));
        let c = CechCochain::zero(0, 1, 4);
        assert!(matches!(
            delta_pi_cochain(&pi, &c),
            Err(CechError::NonGlobalBivector)
        ));
    }

    /// Random cochain supported inside the windows.
    pub(crate) fn random_cochain(
        g: &mut crate::random::Gen,
        j: usize,
        i: usize,
        w: i32,
    ) -> CechCochain {
        let mut c = CechCochain::zero(j, i, w);
        for s in simplices_of_degree(j) {
            for mask in 0u8..4 {
                if mask.count_ones() as usize != i {
                    continue;
                }
                let win = MonomialWindow::for_form(s, mask, w);
                let pts: Vec<_> = win.iter().collect();
                if pts.is_empty() {
                    continue;
                }
                for _ in 0..2 {
                    let e = pts[g.range(0, pts.len() - 1)];
                    c.add_at(
                        s,
                        &PolyForm::from_component(
                            mask,
                            crate::laurent::LaurentPoly::monomial(e.0, e.1, g.scalar()),
                        ),
                    );
                }
            }
        }
        c
    }
}
