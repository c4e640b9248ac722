//! Randomized identity suites for the operator calculus and the Cech engine.
//!
//! Each identity is an exact theorem; a single failure indicates a bug, so
//! the runner records the first counterexample verbatim. Trials are
//! deterministic in `(seed, trial-index)` and independent, hence parallel.

use crate::calculus::{
    self, delta_pi, hamiltonian, koszul_bracket, lichnerowicz, lie_derivative, nabla_canonical,
    pi_pairing, pi_sharp, poisson_bracket, schouten, PoissonBivector,
};
use crate::forms::{interior, PolyForm, PolyVector, MASK_TOP};
use crate::laurent::LaurentPoly;
use crate::random::Gen;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Operators,
    ChainMap,
    Cech,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "operators" => Some(Suite::Operators),
            "chain-map" => Some(Suite::ChainMap),
            "cech" => Some(Suite::Cech),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub outcomes: Vec<IdentityOutcome>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failures == 0)
    }

    pub fn total_failures(&self) -> usize {
        self.outcomes.iter().map(|o| o.failures).sum()
    }
}

fn trial_gen(seed: u64, ident: &str, trial: usize) -> Gen {
    let mut h = 0xcbf29ce484222325u64;
    for b in ident.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100000001b3);
    }
    Gen::new(seed ^ h ^ (trial as u64).wrapping_mul(0x9e3779b97f4a7c15))
}

fn run_identity<F>(name: &'static str, trials: usize, seed: u64, f: F) -> IdentityOutcome
where
    F: Fn(&mut Gen) -> Result<(), String> + Sync,
{
    let results: Vec<Option<String>> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..trials)
                .into_par_iter()
                .map(|t| f(&mut trial_gen(seed, name, t)).err())
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..trials)
                .map(|t| f(&mut trial_gen(seed, name, t)).err())
                .collect()
        }
    };
    let failures = results.iter().filter(|r| r.is_some()).count();
    let counterexample = results.into_iter().flatten().next();
    IdentityOutcome {
        name,
        trials,
        failures,
        counterexample,
    }
}

fn expect_form(lhs: &PolyForm, rhs: &PolyForm, ctx: impl Fn() -> String) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{}\n  lhs = {:?}\n  rhs = {:?}", ctx(), lhs, rhs))
    }
}

fn expect_vector(
    lhs: &PolyVector,
    rhs: &PolyVector,
    ctx: impl Fn() -> String,
) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{}\n  lhs = {:?}\n  rhs = {:?}", ctx(), lhs, rhs))
    }
}

fn expect_poly(
    lhs: &LaurentPoly,
    rhs: &LaurentPoly,
    ctx: impl Fn() -> String,
) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{}\n  lhs = {}\n  rhs = {}", ctx(), lhs, rhs))
    }
}

/// Identities of the chartwise operator calculus.
pub fn operators_suite(trials: usize, seed: u64, max_degree: i32) -> CheckReport {
    let md = max_degree;
    let mut outcomes = Vec::new();

    outcomes.push(run_identity("delta_pi_squared", trials, seed, |g| {
        let pi = g.bivector();
        let a = g.mixed_form(md);
        expect_form(&delta_pi(&pi, &delta_pi(&pi, &a)), &PolyForm::zero(), || {
            format!("pi = {:?}, a = {:?}", pi, a)
        })
    }));

    outcomes.push(run_identity("delta_pi_partial_anticommute", trials, seed, |g| {
        let pi = g.bivector();
        let a = g.mixed_form(md);
        let lhs = delta_pi(&pi, &a.partial()).add(&delta_pi(&pi, &a).partial());
        expect_form(&lhs, &PolyForm::zero(), || format!("pi = {:?}, a = {:?}", pi, a))
    }));

    outcomes.push(run_identity("delta_pi_leibniz_defect", trials, seed, |g| {
        // delta_pi(a^b) = delta_pi(a)^b - a^delta_pi(b) - [a,b] for one-forms
        let pi = g.bivector();
        let a = g.form(1, md);
        let b = g.form(1, md);
        let lhs = delta_pi(&pi, &a.wedge(&b));
        let kb = koszul_bracket(&pi, &a, &b).map_err(|e| e.to_string())?;
        let rhs = delta_pi(&pi, &a)
            .wedge(&b)
            .sub(&a.wedge(&delta_pi(&pi, &b)))
            .sub(&kb);
        expect_form(&lhs, &rhs, || format!("pi = {:?}, a = {:?}, b = {:?}", pi, a, b))
    }));

    outcomes.push(run_identity("koszul_two_formulas_agree", trials, seed, |g| {
        // f1 dg1, f2 dg2 bracket via the structure formula vs the closed form
        let pi = g.bivector();
        let (f1, g1) = (g.poly(md), g.poly(md));
        let (f2, g2) = (g.poly(md), g.poly(md));
        let a = PolyForm::function(g1.clone()).partial().mul_poly(&f1);
        let b = PolyForm::function(g2.clone()).partial().mul_poly(&f2);
        let closed = koszul_bracket(&pi, &a, &b).map_err(|e| e.to_string())?;
        let x1 = hamiltonian(&pi, &g1);
        let x2 = hamiltonian(&pi, &g2);
        let term1 = PolyForm::function(g2.clone())
            .partial()
            .mul_poly(&(&f1 * &x1.apply_to(&f2)));
        let term2 = PolyForm::function(g1.clone())
            .partial()
            .mul_poly(&(&f2 * &x2.apply_to(&f1)));
        let term3 = PolyForm::function(poisson_bracket(&pi, &g1, &g2))
            .partial()
            .mul_poly(&(&f1 * &f2));
        let structural = term1.sub(&term2).add(&term3);
        expect_form(&closed, &structural, || {
            format!("pi = {:?}, f1 = {f1}, g1 = {g1}, f2 = {f2}, g2 = {g2}", pi)
        })
    }));

    outcomes.push(run_identity("lichnerowicz_module_rule", trials, seed, |g| {
        // d_pi(f b) = -(pi# df) ^ b + f d_pi(b)
        let pi = g.bivector();
        let f = g.poly(md);
        let b = g.mixed_vector(md);
        let lhs = lichnerowicz(&pi, &b.mul_poly(&f));
        let df = PolyForm::function(f.clone()).partial();
        let anchor = pi_sharp(&pi, &df).map_err(|e| e.to_string())?;
        let rhs = anchor.wedge(&b).neg().add(&lichnerowicz(&pi, &b).mul_poly(&f));
        expect_vector(&lhs, &rhs, || format!("pi = {:?}, f = {f}, b = {:?}", pi, b))
    }));

    outcomes.push(run_identity("delta_pi_module_rule", trials, seed, |g| {
        // delta_pi(f m) = (pi# df) _| m + f delta_pi(m)
        let pi = g.bivector();
        let f = g.poly(md);
        let m = g.mixed_form(md);
        let lhs = delta_pi(&pi, &m.mul_poly(&f));
        let df = PolyForm::function(f.clone()).partial();
        let anchor = pi_sharp(&pi, &df).map_err(|e| e.to_string())?;
        let rhs = interior(&anchor, &m).add(&delta_pi(&pi, &m).mul_poly(&f));
        expect_form(&lhs, &rhs, || format!("pi = {:?}, f = {f}, m = {:?}", pi, m))
    }));

    outcomes.push(run_identity("schouten_symmetry", trials, seed, |g| {
        let dp = g.range(0, 2) as u32;
        let dq = g.range(0, 2) as u32;
        let p = g.vector(dp, md);
        let q = g.vector(dq, md);
        let lhs = schouten(&p, &q);
        let mut rhs = schouten(&q, &p);
        if (dp * dq) % 2 == 1 {
            rhs = rhs.neg();
        }
        expect_vector(&lhs, &rhs, || format!("p = {:?} (deg {dp}), q = {:?} (deg {dq})", p, q))
    }));

    outcomes.push(run_identity("schouten_jacobi", trials, seed, |g| {
        // [P,[Q,R]] = (-1)^(p-1)[[P,Q],R] + (-1)^((p-1)(q-1))[Q,[P,R]]
        let dp = g.range(0, 2) as u32;
        let dq = g.range(0, 2) as u32;
        let dr = g.range(0, 2) as u32;
        let p = g.vector(dp, md);
        let q = g.vector(dq, md);
        let r = g.vector(dr, md);
        let lhs = schouten(&p, &schouten(&q, &r));
        let mut t1 = schouten(&schouten(&p, &q), &r);
        if (dp as i64 - 1).rem_euclid(2) == 1 {
            t1 = t1.neg();
        }
        let mut t2 = schouten(&q, &schouten(&p, &r));
        if ((dp as i64 - 1) * (dq as i64 - 1)).rem_euclid(2) == 1 {
            t2 = t2.neg();
        }
        expect_vector(&lhs, &t1.add(&t2), || {
            format!("degrees ({dp},{dq},{dr}), p = {:?}, q = {:?}, r = {:?}", p, q, r)
        })
    }));

    outcomes.push(run_identity("bivector_self_bracket", trials, seed, |g| {
        let pi = g.bivector_full().as_vector();
        expect_vector(&schouten(&pi, &pi), &PolyVector::zero(), || format!("pi = {:?}", pi))
    }));

    outcomes.push(run_identity("hamiltonian_consistency", trials, seed, |g| {
        let pi = g.bivector();
        let f = g.poly(md);
        let h = g.poly(md);
        let xf = hamiltonian(&pi, &f);
        expect_poly(&xf.apply_to(&h), &poisson_bracket(&pi, &f, &h), || {
            format!("pi = {:?}, f = {f}, h = {h}", pi)
        })?;
        // antisymmetry
        let lhs = poisson_bracket(&pi, &f, &h);
        let rhs = -&poisson_bracket(&pi, &h, &f);
        expect_poly(&lhs, &rhs, || format!("pi = {:?}, f = {f}, h = {h}", pi))
    }));

    outcomes.push(run_identity("poisson_jacobi", trials, seed, |g| {
        let pi = g.bivector();
        let (f, h, k) = (g.poly(md), g.poly(md), g.poly(md));
        let s1 = poisson_bracket(&pi, &f, &poisson_bracket(&pi, &h, &k));
        let s2 = poisson_bracket(&pi, &h, &poisson_bracket(&pi, &k, &f));
        let s3 = poisson_bracket(&pi, &k, &poisson_bracket(&pi, &f, &h));
        expect_poly(&(&(&s1 + &s2) + &s3), &LaurentPoly::zero(), || {
            format!("pi = {:?}, f = {f}, h = {h}, k = {k}", pi)
        })
    }));

    outcomes.push(run_identity("poisson_leibniz", trials, seed, |g| {
        let pi = g.bivector();
        let (f, h, k) = (g.poly(md), g.poly(md), g.poly(md));
        let lhs = poisson_bracket(&pi, &f, &(&h * &k));
        let rhs = &(&h * &poisson_bracket(&pi, &f, &k)) + &(&poisson_bracket(&pi, &f, &h) * &k);
        expect_poly(&lhs, &rhs, || format!("pi = {:?}, f = {f}, h = {h}, k = {k}", pi))
    }));

    outcomes.push(run_identity("lie_derivative_product_rule", trials, seed, |g| {
        let v = g.vector(1, md);
        let a = g.mixed_form(md);
        let b = g.mixed_form(md);
        let lhs = lie_derivative(&v, &a.wedge(&b)).map_err(|e| e.to_string())?;
        let rhs = lie_derivative(&v, &a)
            .map_err(|e| e.to_string())?
            .wedge(&b)
            .add(&a.wedge(&lie_derivative(&v, &b).map_err(|e| e.to_string())?));
        expect_form(&lhs, &rhs, || format!("v = {:?}, a = {:?}, b = {:?}", v, a, b))
    }));

    outcomes.push(run_identity("anchor_is_bracket_morphism", trials, seed, |g| {
        // pi#[a, b] = [pi# a, pi# b]
        let pi = g.bivector();
        let a = g.form(1, md);
        let b = g.form(1, md);
        let kb = koszul_bracket(&pi, &a, &b).map_err(|e| e.to_string())?;
        let lhs = pi_sharp(&pi, &kb).map_err(|e| e.to_string())?;
        let rhs = schouten(
            &pi_sharp(&pi, &a).map_err(|e| e.to_string())?,
            &pi_sharp(&pi, &b).map_err(|e| e.to_string())?,
        );
        expect_vector(&lhs, &rhs, || format!("pi = {:?}, a = {:?}, b = {:?}", pi, a, b))
    }));

    outcomes.push(run_identity("pi_sharp_defining_relation", trials, seed, |g| {
        // i_{pi# a}(b) = pi(a, b)
        let pi = g.bivector();
        let a = g.form(1, md);
        let b = g.form(1, md);
        let anchor = pi_sharp(&pi, &a).map_err(|e| e.to_string())?;
        let lhs = interior(&anchor, &b);
        let rhs = PolyForm::function(pi_pairing(&pi, &a, &b));
        expect_form(&lhs, &rhs, || format!("pi = {:?}, a = {:?}, b = {:?}", pi, a, b))
    }));

    outcomes.push(run_identity("nabla_on_exact_forms", trials, seed, |g| {
        let pi = g.bivector();
        let f = g.poly(md);
        let omega = PolyForm::top_form(g.poly(md));
        let df = PolyForm::function(f.clone()).partial();
        let lhs = nabla_canonical(&pi, &df, &omega).map_err(|e| e.to_string())?;
        let rhs = lie_derivative(&hamiltonian(&pi, &f), &omega).map_err(|e| e.to_string())?;
        expect_form(&lhs, &rhs, || format!("pi = {:?}, f = {f}, omega = {:?}", pi, omega))
    }));

    outcomes.push(run_identity("nabla_module_leibniz", trials, seed, |g| {
        // nabla_a(h w) = (pi# a)(h) w + h nabla_a(w)
        let pi = g.bivector();
        let a = g.form(1, md);
        let h = g.poly(md);
        let omega = PolyForm::top_form(g.poly(md));
        let lhs = nabla_canonical(&pi, &a, &omega.mul_poly(&h)).map_err(|e| e.to_string())?;
        let anchor = pi_sharp(&pi, &a).map_err(|e| e.to_string())?;
        let rhs = omega
            .mul_poly(&anchor.apply_to(&h))
            .add(&nabla_canonical(&pi, &a, &omega).map_err(|e| e.to_string())?.mul_poly(&h));
        expect_form(&lhs, &rhs, || {
            format!("pi = {:?}, a = {:?}, h = {h}, omega = {:?}", pi, a, omega)
        })
    }));

    outcomes.push(run_identity("lichnerowicz_squared", trials, seed, |g| {
        let pi = g.bivector();
        let v = g.mixed_vector(md);
        let lhs = lichnerowicz(&pi, &lichnerowicz(&pi, &v));
        expect_vector(&lhs, &PolyVector::zero(), || format!("pi = {:?}, v = {:?}", pi, v))
    }));

    outcomes.push(run_identity("modular_field_identity", trials, seed, |g| {
        let pi = g.bivector();
        let omega = PolyForm::top_form(LaurentPoly::monomial(
            g.range(0, 2) as i32 - 1,
            g.range(0, 2) as i32 - 1,
            g.nonzero_scalar(),
        ));
        let h = calculus::modular_field(&pi, &omega).map_err(|e| e.to_string())?;
        let f = g.poly(md);
        let lhs = lie_derivative(&hamiltonian(&pi, &f), &omega).map_err(|e| e.to_string())?;
        let rhs = omega.mul_poly(&h.apply_to(&f));
        expect_form(&lhs, &rhs, || format!("pi = {:?}, omega = {:?}, f = {f}", pi, omega))
    }));

    CheckReport { outcomes }
}

/// The chain-map identity suite for `tau`.
pub fn chain_map_suite(trials: usize, seed: u64, max_degree: i32) -> CheckReport {
    let md = max_degree;
    let mut outcomes = Vec::new();

    for (name, l) in [
        ("tau_chain_map_degree_0", 0u32),
        ("tau_chain_map_degree_1", 1),
        ("tau_chain_map_degree_2", 2),
    ] {
        outcomes.push(run_identity(name, trials, seed, move |g| {
            // tau(d(b (x) w)) = (-1)^(l+1) delta_pi(tau(b (x) w)), w = dz1^dz2
            let pi = g.bivector();
            let b = g.vector(l, md);
            let omega = PolyForm::top_form(LaurentPoly::one());
            let db = calculus::d_pi_nabla(&pi, &b, &omega).map_err(|e| e.to_string())?;
            let lhs = calculus::tau(&db, &omega).map_err(|e| e.to_string())?;
            let rhs = {
                let t = calculus::tau(&b, &omega).map_err(|e| e.to_string())?;
                let d = delta_pi(&pi, &t);
                if (l + 1) % 2 == 0 {
                    d
                } else {
                    d.neg()
                }
            };
            expect_form(&lhs, &rhs, || format!("pi = {:?}, b = {:?} (deg {l})", pi, b))
        }));
    }

    outcomes.push(run_identity("d_pi_nabla_squared", trials, seed, |g| {
        let pi = g.bivector();
        let omega = PolyForm::top_form(LaurentPoly::one());
        let v = g.vector(0, md).add(&g.vector(1, md));
        let once = calculus::d_pi_nabla(&pi, &v, &omega).map_err(|e| e.to_string())?;
        let twice = calculus::d_pi_nabla(&pi, &once, &omega).map_err(|e| e.to_string())?;
        expect_vector(&twice, &PolyVector::zero(), || format!("pi = {:?}, v = {:?}", pi, v))
    }));

    outcomes.push(run_identity("tau_injective_on_basis", trials, seed, |g| {
        // with an invertible top coefficient, tau sends the four basis
        // multivectors to four forms with disjoint (hence independent) supports
        let omega = PolyForm::top_form(LaurentPoly::monomial(0, 0, g.nonzero_scalar()));
        for mask in 0u8..4 {
            let v = PolyVector::from_component(mask, LaurentPoly::one());
            let img = calculus::tau(&v, &omega).map_err(|e| e.to_string())?;
            if img.is_zero() {
                return Err(format!("tau killed basis mask {mask}"));
            }
            if img.component(MASK_TOP ^ mask).is_zero() {
                return Err(format!("tau image of mask {mask} missed its complement"));
            }
        }
        Ok(())
    }));

    CheckReport { outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_suite_clean() {
        let report = operators_suite(60, 42, 3);
        for o in &report.outcomes {
            assert_eq!(
                o.failures, 0,
                "{} failed: {}",
                o.name,
                o.counterexample.as_deref().unwrap_or("")
            );
        }
    }

    #[test]
    fn chain_map_suite_clean() {
        let report = chain_map_suite(60, 7, 3);
        for o in &report.outcomes {
            assert_eq!(
                o.failures, 0,
                "{} failed: {}",
                o.name,
                o.counterexample.as_deref().unwrap_or("")
            );
        }
    }

    #[test]
    fn zero_trials_vacuous_pass() {
        let report = operators_suite(0, 1, 2);
        assert!(report.all_passed());
        assert_eq!(report.total_failures(), 0);
    }
}
