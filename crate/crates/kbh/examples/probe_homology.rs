use kbh::calculus::PoissonBivector;
use kbh::laurent::LaurentPoly;
use kbh::matrix::RankMode;
use kbh::random::Gen;
use kbh::total::{homology_dims, TotalComplex};
use std::time::Instant;

fn main() {
    let mode = RankMode::Modular { seed: 17 };
    let cases: Vec<(String, PoissonBivector)> = vec![
        ("zero".into(), PoissonBivector::zero()),
        ("q=1".into(), PoissonBivector::new(LaurentPoly::one())),
        ("q=z1*z2".into(), PoissonBivector::new(LaurentPoly::var_pow(1, 1))),
        ("q=z1^2*z2^2".into(), PoissonBivector::new(LaurentPoly::var_pow(2, 2))),
        ("random7".into(), Gen::new(7).bivector_full()),
        ("random11".into(), Gen::new(11).bivector_full()),
    ];
    for (name, pi) in &cases {
        for w in [4i32, 6] {
            let t0 = Instant::now();
            let tc = TotalComplex::build(pi, w).unwrap();
            let sizes: Vec<usize> = (-2..=3).map(|t| tc.cochain_dim(t)).collect();
            let dims = tc.homology_dims(mode);
            eprintln!(
                "{name:12} W={w}: dims {:?}  sizes {:?}  ({:.2?})",
                dims, sizes, t0.elapsed()
            );
        }
    }
    // full stability run at W=6 for one case
    let t0 = Instant::now();
    let rep = homology_dims(&cases[2].1, 6, mode).unwrap();
    eprintln!(
        "stability W=6 for q=z1*z2: dims {:?} wider {:?} stable {} ({:.2?})",
        rep.dims, rep.dims_wider, rep.stable, t0.elapsed()
    );
}
