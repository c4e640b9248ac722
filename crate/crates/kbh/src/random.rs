//! Seeded generators for fuzzing the operator identities.
//!
//! Coefficients are kept small (numerators up to 4, denominators up to 3) so
//! counterexamples stay readable and exact arithmetic stays fast.

use crate::calculus::PoissonBivector;
use crate::forms::{PolyForm, PolyVector};
use crate::laurent::LaurentPoly;
use crate::scalar::GaussianRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn scalar(&mut self) -> GaussianRational {
        let re_n = self.rng.gen_range(-4i64..=4);
        let re_d = self.rng.gen_range(1i64..=3);
        let (im_n, im_d) = if self.rng.gen_bool(0.4) {
            (self.rng.gen_range(-4i64..=4), self.rng.gen_range(1i64..=3))
        } else {
            (0, 1)
        };
        GaussianRational::from_parts(re_n, re_d, im_n, im_d)
    }

    pub fn nonzero_scalar(&mut self) -> GaussianRational {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// A few terms with exponents in `[-max_degree, max_degree]^2`.
    pub fn poly(&mut self, max_degree: i32) -> LaurentPoly {
        self.poly_in(-max_degree, max_degree, -max_degree, max_degree)
    }

    pub fn poly_in(&mut self, lo1: i32, hi1: i32, lo2: i32, hi2: i32) -> LaurentPoly {
        let n = self.rng.gen_range(1..=3);
        let mut p = LaurentPoly::zero();
        for _ in 0..n {
            let e1 = self.rng.gen_range(lo1..=hi1);
            let e2 = self.rng.gen_range(lo2..=hi2);
            p.add_term((e1, e2), self.scalar());
        }
        p
    }

    pub fn nonzero_poly(&mut self, max_degree: i32) -> LaurentPoly {
        loop {
            let p = self.poly(max_degree);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A global bivector: `q` supported in `{0..2} x {0..2}`.
    pub fn bivector(&mut self) -> PoissonBivector {
        PoissonBivector::new(self.poly_in(0, 2, 0, 2))
    }

    /// All nine coefficients drawn, never identically zero.
    pub fn bivector_full(&mut self) -> PoissonBivector {
        let mut q = LaurentPoly::zero();
        for e1 in 0..=2 {
            for e2 in 0..=2 {
                q.add_term((e1, e2), self.scalar());
            }
        }
        if q.is_zero() {
            q.add_term((0, 0), GaussianRational::one());
        }
        PoissonBivector::new(q)
    }

    pub fn form(&mut self, degree: u32, max_degree: i32) -> PolyForm {
        let mut f = PolyForm::zero();
        for mask in 0u8..4 {
            if mask.count_ones() == degree {
                f = f.add(&PolyForm::from_component(mask, self.poly(max_degree)));
            }
        }
        f
    }

    pub fn mixed_form(&mut self, max_degree: i32) -> PolyForm {
        let mut f = PolyForm::zero();
        for d in 0..=2 {
            if self.rng.gen_bool(0.7) {
                f = f.add(&self.form(d, max_degree));
            }
        }
        f
    }

    pub fn vector(&mut self, degree: u32, max_degree: i32) -> PolyVector {
        let mut v = PolyVector::zero();
        for mask in 0u8..4 {
            if mask.count_ones() == degree {
                v = v.add(&PolyVector::from_component(mask, self.poly(max_degree)));
            }
        }
        v
    }

    pub fn mixed_vector(&mut self, max_degree: i32) -> PolyVector {
        let mut v = PolyVector::zero();
        for d in 0..=2 {
            if self.rng.gen_bool(0.7) {
                v = v.add(&self.vector(d, max_degree));
            }
        }
        v
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }
}
