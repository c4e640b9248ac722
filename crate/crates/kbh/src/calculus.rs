//! The holomorphic Poisson operator calculus on a two-variable chart.
//!
//! Convention stack (fixed once, frozen by golden tests):
//!
//! * `PoissonBivector` stores `q` meaning `pi = q @2^@1`, i.e. `-q` against
//!   the ascending internal basis `@1^@2`.
//! * `pi(a, b) := i_pi(a ^ b)`, so `{z1, z2} = q` and `pi#(dz1) = q @2`.
//! * The Schouten bracket is the odd left-derivative bracket
//!   `[P,Q] = sum_r dP/dth_r ^ dQ/dz_r - (-1)^((p-1)(q-1)) (P <-> Q)`;
//!   it extends the Lie bracket and gives `[pi, f] = -pi#(df)`.
//! * `delta_pi = i_pi d - d i_pi` drops form degree by one; on this chart
//!   `delta_pi(f dz1) = -q d2(f)`.

use crate::forms::{interior, PolyForm, PolyVector, MASK_EMPTY, MASK_TOP, MASK_Z1, MASK_Z2};
use crate::laurent::{LaurentPoly, Var};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("{op} expects homogeneous degree-{expected} input")]
    DegreeMismatch { op: &'static str, expected: u32 },
    #[error("top form must be a single invertible monomial times dz1^dz2")]
    TopFormShape,
}

/// A holomorphic bivector `pi = q(z1, z2) @z2 ^ @z1` in the distinguished
/// chart. It extends to all of the surface exactly when `q` has bidegree at
/// most `(2, 2)`; in two variables every bivector is automatically Poisson.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoissonBivector {
    q: LaurentPoly,
}

impl PoissonBivector {
    pub fn new(q: LaurentPoly) -> Self {
        PoissonBivector { q }
    }

    pub fn zero() -> Self {
        PoissonBivector::new(LaurentPoly::zero())
    }

    pub fn q(&self) -> &LaurentPoly {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    /// Support inside `{0..2} x {0..2}` is exactly the condition for the
    /// bivector to be regular on the whole surface.
    pub fn is_global(&self) -> bool {
        match self.q.support_box() {
            None => true,
            Some(((l1, h1), (l2, h2))) => l1 >= 0 && h1 <= 2 && l2 >= 0 && h2 <= 2,
        }
    }

    /// `q @2^@1` written against the ascending basis `@1^@2`.
    pub fn as_vector(&self) -> PolyVector {
        PolyVector::top_ascending(-&self.q)
    }
}

/// `i_pi a` for the bivector.
pub fn interior_pi(pi: &PoissonBivector, a: &PolyForm) -> PolyForm {
    interior(&pi.as_vector(), a)
}

/// The degree `-1` operator `delta_pi = i_pi d - d i_pi`.
pub fn delta_pi(pi: &PoissonBivector, a: &PolyForm) -> PolyForm {
    interior_pi(pi, &a.partial()).sub(&interior_pi(pi, a).partial())
}

/// Graded Schouten-Nijenhuis bracket of multivector fields.
///
/// The convention is the one the operator suite needs: it extends the Lie
/// bracket of vector fields and the action on functions, `[pi, f] = -pi#(df)`,
/// and it obeys
///
/// * symmetry `[P, Q] = (-1)^(pq) [Q, P]`,
/// * Jacobi `[P,[Q,R]] = (-1)^(p-1) [[P,Q],R] + (-1)^((p-1)(q-1)) [Q,[P,R]]`.
pub fn schouten(p: &PolyVector, q: &PolyVector) -> PolyVector {
    let mut out = PolyVector::zero();
    for dp in 0..=2u32 {
        let pp = p.homogeneous(dp);
        if pp.is_zero() {
            continue;
        }
        for dq in 0..=2u32 {
            let qq = q.homogeneous(dq);
            if qq.is_zero() {
                continue;
            }
            out = out.add(&schouten_homogeneous(&pp, dp, &qq, dq));
        }
    }
    out
}

fn schouten_homogeneous(p: &PolyVector, dp: u32, q: &PolyVector, dq: u32) -> PolyVector {
    // Odd-cotangent form of the bracket with right derivatives, twisted by
    // (-1)^(p-1) to match the sign of the Koszul-Brylinski side.
    let mut t1 = PolyVector::zero();
    let mut t2 = PolyVector::zero();
    for var in Var::BOTH {
        let r = var.index() as u8;
        t1 = t1.add(&p.theta_derivative_right(r).wedge(&q.coeff_partial(var)));
        t2 = t2.add(&q.theta_derivative_right(r).wedge(&p.coeff_partial(var)));
    }
    let eps = (dp as i64 - 1) * (dq as i64 - 1);
    let base = if eps.rem_euclid(2) == 1 {
        t1.add(&t2)
    } else {
        t1.sub(&t2)
    };
    if (dp as i64 - 1).rem_euclid(2) == 1 {
        base.neg()
    } else {
        base
    }
}

/// Lichnerowicz differential `d_pi V = [pi, V]`.
pub fn lichnerowicz(pi: &PoissonBivector, v: &PolyVector) -> PolyVector {
    schouten(&pi.as_vector(), v)
}

/// Anchor `pi#` on one-forms, characterized by `i_{pi# a}(b) = pi(a, b)`.
pub fn pi_sharp(pi: &PoissonBivector, a: &PolyForm) -> Result<PolyVector, CalculusError> {
    if !a.is_homogeneous(1) {
        return Err(CalculusError::DegreeMismatch {
            op: "pi_sharp",
            expected: 1,
        });
    }
    let a1 = a.component(MASK_Z1);
    let a2 = a.component(MASK_Z2);
    Ok(PolyVector::one_vector(
        -&(pi.q() * &a2),
        pi.q() * &a1,
    ))
}

/// Hamiltonian vector field `X_f = pi#(df)`.
pub fn hamiltonian(pi: &PoissonBivector, f: &LaurentPoly) -> PolyVector {
    let df = PolyForm::function(f.clone()).partial();
    pi_sharp(pi, &df).expect("df is homogeneous of degree 1")
}

/// `pi(a, b) := i_pi(a ^ b)` for one-forms.
pub fn pi_pairing(pi: &PoissonBivector, a: &PolyForm, b: &PolyForm) -> LaurentPoly {
    interior_pi(pi, &a.wedge(b)).component(MASK_EMPTY)
}

/// Poisson bracket `{f, g} = pi(df, dg)`.
pub fn poisson_bracket(pi: &PoissonBivector, f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    let df = PolyForm::function(f.clone()).partial();
    let dg = PolyForm::function(g.clone()).partial();
    pi_pairing(pi, &df, &dg)
}

/// Cartan formula `L_V = i_V d + d i_V` for a vector field on forms.
pub fn lie_derivative(v: &PolyVector, a: &PolyForm) -> Result<PolyForm, CalculusError> {
    if !v.is_homogeneous(1) {
        return Err(CalculusError::DegreeMismatch {
            op: "lie_derivative",
            expected: 1,
        });
    }
    Ok(interior(v, &a.partial()).add(&interior(v, a).partial()))
}

/// Koszul bracket of one-forms,
/// `[a, b] = L_{pi# a} b - L_{pi# b} a - d(pi(a, b))`.
pub fn koszul_bracket(
    pi: &PoissonBivector,
    a: &PolyForm,
    b: &PolyForm,
) -> Result<PolyForm, CalculusError> {
    if !a.is_homogeneous(1) || !b.is_homogeneous(1) {
        return Err(CalculusError::DegreeMismatch {
            op: "koszul_bracket",
            expected: 1,
        });
    }
    let va = pi_sharp(pi, a)?;
    let vb = pi_sharp(pi, b)?;
    let l1 = lie_derivative(&va, b)?;
    let l2 = lie_derivative(&vb, a)?;
    let corr = PolyForm::function(pi_pairing(pi, a, b)).partial();
    Ok(l1.sub(&l2).sub(&corr))
}

/// Chain map `tau(V (x) w) = i_V w` for a top form `w`.
pub fn tau(v: &PolyVector, omega: &PolyForm) -> Result<PolyForm, CalculusError> {
    if !omega.is_homogeneous(2) {
        return Err(CalculusError::DegreeMismatch {
            op: "tau",
            expected: 2,
        });
    }
    Ok(interior(v, omega))
}

/// Canonical-module connection: `nabla_{a} w` for a one-form `a` and top
/// form `w`, extended over the `dz` basis by `nabla_{dz_r} = L_{X_{z_r}}`.
pub fn nabla_canonical(
    pi: &PoissonBivector,
    a: &PolyForm,
    omega: &PolyForm,
) -> Result<PolyForm, CalculusError> {
    if !a.is_homogeneous(1) {
        return Err(CalculusError::DegreeMismatch {
            op: "nabla_canonical",
            expected: 1,
        });
    }
    if !omega.is_homogeneous(2) {
        return Err(CalculusError::DegreeMismatch {
            op: "nabla_canonical",
            expected: 2,
        });
    }
    let mut out = PolyForm::zero();
    for var in Var::BOTH {
        let coeff = a.component(1 << var.index() as u8);
        if coeff.is_zero() {
            continue;
        }
        let ham = hamiltonian(pi, &var.coordinate());
        let lie = lie_derivative(&ham, omega)?;
        out = out.add(&lie.mul_poly(&coeff));
    }
    Ok(out)
}

fn top_monomial(omega: &PolyForm) -> Result<LaurentPoly, CalculusError> {
    if !omega.is_homogeneous(2) {
        return Err(CalculusError::TopFormShape);
    }
    let m = omega.component(MASK_TOP);
    if m.num_terms() != 1 {
        return Err(CalculusError::TopFormShape);
    }
    Ok(m)
}

fn divide_top(form: &PolyForm, m: &LaurentPoly) -> LaurentPoly {
    form.component(MASK_TOP)
        .div_monomial(m)
        .expect("monomial division is exact")
}

/// Lie-algebroid differential of the cotangent algebroid with values in the
/// canonical module, on cochains `V (x) w`. Returns `V'` with
/// `d(V (x) w) = V' (x) w`; the top form `w` must be a monomial multiple of
/// `dz1^dz2`.
pub fn d_pi_nabla(
    pi: &PoissonBivector,
    v: &PolyVector,
    omega: &PolyForm,
) -> Result<PolyVector, CalculusError> {
    let m = top_monomial(omega)?;
    let mut out = PolyVector::zero();

    // degree 0 -> 1: (dc)(dz_r) = nabla_{dz_r}(f w)
    let f = v.component(MASK_EMPTY);
    if !f.is_zero() {
        for var in Var::BOTH {
            let val = nabla_canonical(pi, &PolyForm::dz(var), &omega.mul_poly(&f))?;
            out = out.add(&PolyVector::from_component(
                1 << var.index() as u8,
                divide_top(&val, &m),
            ));
        }
    }

    // degree 1 -> 2:
    // (dc)(dz1, dz2) = nabla_{dz1}(c(dz2)) - nabla_{dz2}(c(dz1)) - c([dz1, dz2])
    let v1 = v.homogeneous(1);
    if !v1.is_zero() {
        let eval = |alpha: &PolyForm| -> LaurentPoly { interior(&v1, alpha).component(MASK_EMPTY) };
        let c1 = eval(&PolyForm::dz(Var::Z1));
        let c2 = eval(&PolyForm::dz(Var::Z2));
        let kb = koszul_bracket(pi, &PolyForm::dz(Var::Z1), &PolyForm::dz(Var::Z2))?;
        let val = nabla_canonical(pi, &PolyForm::dz(Var::Z1), &omega.mul_poly(&c2))?
            .sub(&nabla_canonical(pi, &PolyForm::dz(Var::Z2), &omega.mul_poly(&c1))?)
            .sub(&omega.mul_poly(&eval(&kb)));
        // <w @1^@2, dz1^dz2> = -w, so the top coefficient is minus the value.
        out = out.add(&PolyVector::top_ascending(-&divide_top(&val, &m)));
    }

    // degree 2 -> 3 vanishes in two variables.
    Ok(out)
}

/// The vector field `H` with `L_{X_f} w = H(f) w`, for `w` a monomial
/// multiple of `dz1^dz2`.
pub fn modular_field(
    pi: &PoissonBivector,
    omega: &PolyForm,
) -> Result<PolyVector, CalculusError> {
    let m = top_monomial(omega)?;
    let mut comps = [LaurentPoly::zero(), LaurentPoly::zero()];
    for var in Var::BOTH {
        let lie = lie_derivative(&hamiltonian(pi, &var.coordinate()), omega)?;
        comps[var.index()] = divide_top(&lie, &m);
    }
    let h = PolyVector::one_vector(comps[0].clone(), comps[1].clone());
    // Defining identity on a spanning set of coefficient functions.
    for (e1, e2) in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)] {
        let f = LaurentPoly::var_pow(e1, e2);
        let lhs = lie_derivative(&hamiltonian(pi, &f), omega)?;
        let rhs = omega.mul_poly(&h.apply_to(&f));
        assert_eq!(lhs, rhs, "modular field identity must hold");
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    fn lp(e1: i32, e2: i32) -> LaurentPoly {
        LaurentPoly::var_pow(e1, e2)
    }

    fn unit_pi() -> PoissonBivector {
        PoissonBivector::new(LaurentPoly::one())
    }

    #[test]
    fn interior_top_convention_frozen() {
        // i_{@2^@1}(dz1^dz2) = +1 with q = 1.
        let pi = unit_pi();
        let top = PolyForm::top_form(LaurentPoly::one());
        assert_eq!(
            interior_pi(&pi, &top),
            PolyForm::function(LaurentPoly::one())
        );
    }

    #[test]
    fn delta_pi_on_low_degrees() {
        let pi = unit_pi();
        // zero on functions
        assert_eq!(
            delta_pi(&pi, &PolyForm::function(lp(2, 1))),
            PolyForm::zero()
        );
        // frozen sign: delta_pi(f dz1) = -d2(f) for q = 1
        let f = lp(1, 2);
        let a = PolyForm::from_component(MASK_Z1, f.clone());
        let expect = PolyForm::function(-&f.partial(Var::Z2));
        assert_eq!(delta_pi(&pi, &a), expect);
        // pi = 0 kills everything
        let z = PoissonBivector::zero();
        assert_eq!(delta_pi(&z, &a), PolyForm::zero());
    }

    #[test]
    fn delta_pi_squares_to_zero() {
        let pi = PoissonBivector::new(&lp(2, 1) + &lp(0, 0));
        let a = PolyForm::top_form(lp(-1, 3)).add(&PolyForm::one_form(lp(2, -2), lp(1, 1)));
        assert_eq!(delta_pi(&pi, &delta_pi(&pi, &a)), PolyForm::zero());
    }

    #[test]
    fn delta_pi_anticommutes_with_partial() {
        let pi = PoissonBivector::new(&lp(1, 1) + &lp(2, 0));
        let a = PolyForm::one_form(lp(0, 2), lp(-1, 0)).add(&PolyForm::function(lp(1, -1)));
        let lhs = delta_pi(&pi, &a.partial()).add(&delta_pi(&pi, &a).partial());
        assert_eq!(lhs, PolyForm::zero());
    }

    #[test]
    fn pi_sharp_frozen_and_consistent() {
        let pi = unit_pi();
        assert_eq!(
            pi_sharp(&pi, &PolyForm::dz(Var::Z1)).unwrap(),
            PolyVector::basis(Var::Z2)
        );
        // pi#(df) = X_f
        let f = &lp(2, 1) + &lp(0, 2);
        let df = PolyForm::function(f.clone()).partial();
        assert_eq!(pi_sharp(&pi, &df).unwrap(), hamiltonian(&pi, &f));
        // degree guard
        assert!(pi_sharp(&pi, &PolyForm::function(lp(0, 0))).is_err());
    }

    #[test]
    fn poisson_bracket_basics() {
        let q = &lp(1, 1) + &lp(2, 2);
        let pi = PoissonBivector::new(q.clone());
        // {z1, z2} = q, frozen
        assert_eq!(poisson_bracket(&pi, &lp(1, 0), &lp(0, 1)), q);
        // constants are central
        assert_eq!(
            poisson_bracket(&pi, &lp(2, 1), &LaurentPoly::one()),
            LaurentPoly::zero()
        );
        // X_f(g) = {f, g}
        let (f, g) = (lp(1, 2), &lp(2, 0) + &lp(1, 1));
        assert_eq!(
            hamiltonian(&pi, &f).apply_to(&g),
            poisson_bracket(&pi, &f, &g)
        );
    }

    #[test]
    fn schouten_low_degree_cases() {
        let d1 = PolyVector::basis(Var::Z1);
        let d2 = PolyVector::basis(Var::Z2);
        assert_eq!(schouten(&d1, &d2), PolyVector::zero());
        let f = PolyVector::function(lp(3, 1));
        assert_eq!(
            schouten(&d1, &f),
            PolyVector::function(lp(3, 1).partial(Var::Z1))
        );
        // [X, Y] is the usual Lie bracket
        let x = PolyVector::from_component(MASK_Z1, lp(1, 0));
        let y = PolyVector::from_component(MASK_Z2, lp(0, 1));
        let lie = schouten(&x, &y);
        // [z1 @1, z2 @2] = 0 (commuting Euler fields)
        assert_eq!(lie, PolyVector::zero());
    }

    #[test]
    fn schouten_self_bracket_of_bivectors_vanishes() {
        for q in [lp(1, 1), &lp(2, 2) + &lp(0, 1), &lp(2, 0) + &lp(1, 2)] {
            let pi = PoissonBivector::new(q).as_vector();
            assert_eq!(schouten(&pi, &pi), PolyVector::zero());
        }
    }

    #[test]
    fn lichnerowicz_on_functions_matches_minus_anchor() {
        // [pi, f] = -pi#(df), frozen relation for this convention stack.
        let pi = PoissonBivector::new(&lp(1, 1) + &lp(2, 1));
        let f = &lp(1, 0) + &lp(0, 2);
        let lhs = lichnerowicz(&pi, &PolyVector::function(f.clone()));
        let df = PolyForm::function(f).partial();
        assert_eq!(lhs, pi_sharp(&pi, &df).unwrap().neg());
    }

    #[test]
    fn lichnerowicz_squares_to_zero() {
        let pi = PoissonBivector::new(&lp(2, 1) + &lp(1, 0));
        let v = PolyVector::one_vector(lp(1, 1), lp(0, 2)).add(&PolyVector::function(lp(2, 0)));
        assert_eq!(
            lichnerowicz(&pi, &lichnerowicz(&pi, &v)),
            PolyVector::zero()
        );
    }

    #[test]
    fn koszul_bracket_on_exact_forms() {
        // [dz1, dz2] = d{z1, z2} = dq, frozen.
        let q = &lp(2, 1) + &lp(1, 2);
        let pi = PoissonBivector::new(q.clone());
        let kb = koszul_bracket(&pi, &PolyForm::dz(Var::Z1), &PolyForm::dz(Var::Z2)).unwrap();
        assert_eq!(kb, PolyForm::function(q).partial());
        // pi = 0 kills the bracket
        let z = PoissonBivector::zero();
        let kbz = koszul_bracket(&z, &PolyForm::dz(Var::Z1), &PolyForm::dz(Var::Z2)).unwrap();
        assert_eq!(kbz, PolyForm::zero());
    }

    #[test]
    fn lie_derivative_cases() {
        let v = PolyVector::basis(Var::Z1);
        // L_V f = V(f)
        let f = lp(2, 1);
        assert_eq!(
            lie_derivative(&v, &PolyForm::function(f.clone())).unwrap(),
            PolyForm::function(f.partial(Var::Z1))
        );
        // constant-coefficient field annihilates dz1
        assert_eq!(
            lie_derivative(&v, &PolyForm::dz(Var::Z1)).unwrap(),
            PolyForm::zero()
        );
    }

    #[test]
    fn tau_frozen_values() {
        let omega = PolyForm::top_form(LaurentPoly::one());
        // tau(1 (x) w) = w
        assert_eq!(
            tau(&PolyVector::function(LaurentPoly::one()), &omega).unwrap(),
            omega
        );
        // tau(@2^@1 (x) dz1^dz2) = +1, frozen
        let desc_top = PolyVector::top_ascending(LaurentPoly::constant(
            GaussianRational::from_int(-1),
        ));
        assert_eq!(
            tau(&desc_top, &omega).unwrap(),
            PolyForm::function(LaurentPoly::one())
        );
        // degree guard
        assert!(tau(&desc_top, &PolyForm::dz(Var::Z1)).is_err());
    }

    #[test]
    fn nabla_on_exact_one_forms() {
        let pi = PoissonBivector::new(&lp(1, 1) + &lp(0, 0));
        let omega = PolyForm::top_form(lp(1, 0));
        let f = &lp(2, 0) + &lp(1, 1);
        let df = PolyForm::function(f.clone()).partial();
        let lhs = nabla_canonical(&pi, &df, &omega).unwrap();
        let rhs = lie_derivative(&hamiltonian(&pi, &f), &omega).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_pi_nabla_squares_to_zero_on_functions() {
        let pi = PoissonBivector::new(&lp(2, 1) + &lp(1, 0));
        let omega = PolyForm::top_form(LaurentPoly::one());
        let v = PolyVector::function(&lp(1, 1) + &lp(0, 2));
        let once = d_pi_nabla(&pi, &v, &omega).unwrap();
        let twice = d_pi_nabla(&pi, &once, &omega).unwrap();
        assert_eq!(twice, PolyVector::zero());
    }

    #[test]
    fn chain_map_identity_spot_checks() {
        // tau . d = (-1)^(l+1) delta_pi . tau on V (x) dz1^dz2.
        let pi = PoissonBivector::new(&lp(1, 1) + &lp(2, 2));
        let omega = PolyForm::top_form(LaurentPoly::one());
        for (v, l) in [
            (PolyVector::function(lp(1, 1)), 0u32),
            (PolyVector::one_vector(lp(0, 1), lp(2, 0)), 1),
            (PolyVector::top_ascending(lp(1, 0)), 2),
        ] {
            let lhs = tau(&d_pi_nabla(&pi, &v, &omega).unwrap(), &omega).unwrap();
            let rhs = delta_pi(&pi, &tau(&v, &omega).unwrap());
            let rhs = if (l + 1) % 2 == 0 { rhs } else { rhs.neg() };
            assert_eq!(lhs, rhs, "degree {l}");
        }
    }

    #[test]
    fn modular_field_of_constant_structure_vanishes() {
        let pi = unit_pi();
        let omega = PolyForm::top_form(LaurentPoly::one());
        assert_eq!(modular_field(&pi, &omega).unwrap(), PolyVector::zero());
        let z = PoissonBivector::zero();
        assert_eq!(modular_field(&z, &omega).unwrap(), PolyVector::zero());
    }

    #[test]
    fn modular_field_rejects_bad_top_form() {
        let pi = unit_pi();
        let omega = PolyForm::top_form(&lp(0, 0) + &lp(1, 0));
        assert!(matches!(
            modular_field(&pi, &omega),
            Err(CalculusError::TopFormShape)
        ));
    }
}
