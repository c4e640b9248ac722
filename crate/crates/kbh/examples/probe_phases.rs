use kbh::calculus::PoissonBivector;
use kbh::laurent::LaurentPoly;
use kbh::matrix::RankMode;
use kbh::total::TotalComplex;
use std::time::Instant;

fn main() {
    let pi = PoissonBivector::new(LaurentPoly::var_pow(1, 1));
    let w = 4;
    let t0 = Instant::now();
    let tc = TotalComplex::build(&pi, w).unwrap();
    println!("build: {:.2?}", t0.elapsed());
    for t in -2..=2 {
        let t1 = Instant::now();
        let m = tc.differential(t);
        println!(
            "t={t}: assemble {}x{} nnz {} in {:.2?}",
            m.rows(), m.cols(), m.num_entries(), t1.elapsed()
        );
        let t2 = Instant::now();
        let r = m.rank(RankMode::Modular { seed: 17 });
        println!("  modular rank {} in {:.2?}", r, t2.elapsed());
    }
}
