//! Exact computation of Koszul-Brylinski homology for holomorphic Poisson
//! structures on the product of two projective lines.
//!
//! The engine works entirely over the Gaussian rationals. Chartwise operator
//! calculus lives in [`forms`] and [`calculus`]; the global geometry is a
//! Cech model over the four-chart product cover ([`cech`], [`total`]), with
//! regularity of sections encoded as monomial windows in a single global
//! coordinate system. Dimensions come from sparse ranks ([`matrix`],
//! [`modular`]); the homology-level duality pairing is in [`pairing`].
//!
//! With the `parallel` feature (on by default) independent ranks, grid
//! sweeps and fuzz trials run on rayon; disabling the feature yields a fully
//! sequential build with identical results.

pub mod bundles;
pub mod calculus;
pub mod cech;
pub mod check;
pub mod forms;
pub mod laurent;
pub mod matrix;
pub mod modular;
pub mod random;
pub mod scalar;
pub mod total;

pub use calculus::PoissonBivector;
pub use laurent::{LaurentPoly, Var};
pub use matrix::{RankMode, SparseMatrix};
pub use scalar::GaussianRational;
pub use total::{homology_dims, HomologyReport, TotalComplex};
