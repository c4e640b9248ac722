//! The total complex computing Koszul-Brylinski homology.
//!
//! Bidegrees are `(j, i)` = (Cech degree, form degree), totalized along
//! `t = j - i` with differential `D = delta_cech + (-1)^j delta_pi`, so `D`
//! raises `t` by one. The homology `H_k` sits at `t = 2 - k`, the
//! normalization forced by the zero-structure case where
//! `H_k = (+) H^j(Omega^i)` over `j - i = 2 - k`.
//!
//! Cochain spaces are truncated to the monomial window of radius `W`;
//! `delta_pi` images crossing the boundary are dropped, so reported
//! dimensions are accepted only when they agree with the radius-`W+2` run
//! (the `stable` flag).

use crate::calculus::{delta_pi, PoissonBivector};
use crate::cech::{simplices_of_degree, CechCochain, CechError, MonomialWindow};
use crate::forms::PolyForm;
use crate::laurent::LaurentPoly;
use crate::matrix::{RankMode, SparseMatrix};
use std::collections::{BTreeMap, HashMap};

/// Basis of one `(j, i)` bidegree: triples (simplex, dz-mask, exponent).
pub struct BidegreeBasis {
    pub elems: Vec<(u8, u8, (i32, i32))>,
    index: HashMap<(u8, u8, (i32, i32)), u32>,
}

impl BidegreeBasis {
    fn build(j: usize, i: usize, w: i32) -> Self {
        let mut elems = Vec::new();
        for simplex in simplices_of_degree(j) {
            for s_mask in 0u8..4 {
                if s_mask.count_ones() as usize != i {
                    continue;
                }
                let win = MonomialWindow::for_form(simplex, s_mask, w);
                for e in win.iter() {
                    elems.push((simplex, s_mask, e));
                }
            }
        }
        let index = elems
            .iter()
            .enumerate()
            .map(|(k, key)| (*key, k as u32))
            .collect();
        BidegreeBasis { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn index_of(&self, simplex: u8, s_mask: u8, e: (i32, i32)) -> Option<u32> {
        self.index.get(&(simplex, s_mask, e)).copied()
    }
}

/// Bidegrees contributing to total degree `t`, ascending in `j`.
pub fn bidegrees_of(t: i32) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..=3i32 {
        let i = j - t;
        if (0..=2).contains(&i) {
            out.push((j as usize, i as usize));
        }
    }
    out
}

pub struct TotalComplex {
    pub window: i32,
    pi: PoissonBivector,
    bases: BTreeMap<(usize, usize), BidegreeBasis>,
}

impl TotalComplex {
    pub fn build(pi: &PoissonBivector, window: i32) -> Result<Self, CechError> {
        if !pi.is_global() {
            return Err(CechError::NonGlobalBivector);
        }
        let mut bases = BTreeMap::new();
        for j in 0..=3usize {
            for i in 0..=2usize {
                bases.insert((j, i), BidegreeBasis::build(j, i, window));
            }
        }
        Ok(TotalComplex {
            window,
            pi: pi.clone(),
            bases,
        })
    }

    pub fn basis(&self, j: usize, i: usize) -> &BidegreeBasis {
        &self.bases[&(j, i)]
    }

    pub fn cochain_dim(&self, t: i32) -> usize {
        bidegrees_of(t)
            .iter()
            .map(|&(j, i)| self.basis(j, i).len())
            .sum()
    }

    fn offsets(&self, t: i32) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        let mut acc = 0usize;
        for (j, i) in bidegrees_of(t) {
            out.insert((j, i), acc);
            acc += self.basis(j, i).len();
        }
        out
    }

    /// The matrix of `D: C^t -> C^(t+1)`.
    pub fn differential(&self, t: i32) -> SparseMatrix {
        let dom = self.offsets(t);
        let cod = self.offsets(t + 1);
        let rows = self.cochain_dim(t + 1);
        let cols = self.cochain_dim(t);
        let mut m = SparseMatrix::new(rows, cols);
        for (&(j, i), &dom_off) in &dom {
            let basis = self.basis(j, i);
            let columns: Vec<Vec<((u32, u32), crate::scalar::GaussianRational)>> = {
                let build = |(k, &(simplex, s_mask, e)): (usize, &(u8, u8, (i32, i32)))| {
                    self.column_entries(
                        t, j, i, simplex, s_mask, e,
                        (dom_off + k) as u32,
                        &cod,
                    )
                };
                #[cfg(feature = "parallel")]
                {
                    use rayon::prelude::*;
                    basis.elems.par_iter().enumerate().map(build).collect()
                }
                #[cfg(not(feature = "parallel"))]
                {
                    basis.elems.iter().enumerate().map(build).collect()
                }
            };
            for col in columns {
                for ((r, c), v) in col {
                    m.add_to(r, c, v);
                }
            }
        }
        m
    }

    fn column_entries(
        &self,
        _t: i32,
        j: usize,
        i: usize,
        simplex: u8,
        s_mask: u8,
        e: (i32, i32),
        col: u32,
        cod: &BTreeMap<(usize, usize), usize>,
    ) -> Vec<((u32, u32), crate::scalar::GaussianRational)> {
        let mut out = Vec::new();
        // Cech coboundary into (j+1, i); windows only widen, never truncate.
        if let Some(&off) = cod.get(&(j + 1, i)) {
            let target = self.basis(j + 1, i);
            for v in 0..4u8 {
                if simplex & (1 << v) != 0 {
                    continue;
                }
                let coface = simplex | (1 << v);
                let pos = (coface & ((1 << v) - 1)).count_ones();
                let row = target
                    .index_of(coface, s_mask, e)
                    .expect("coface window contains the monomial");
                let sign = if pos % 2 == 1 { -1 } else { 1 };
                out.push((
                    (off as u32 + row, col),
                    crate::scalar::GaussianRational::from_int(sign),
                ));
            }
        }
        // (-1)^j delta_pi into (j, i-1); the graded radii guarantee every
        // image monomial is inside the target window.
        if i >= 1 {
            if let Some(&off) = cod.get(&(j, i - 1)) {
                let target = self.basis(j, i - 1);
                let form = PolyForm::from_component(s_mask, LaurentPoly::var_pow(e.0, e.1));
                let image = delta_pi(&self.pi, &form);
                let j_sign = j % 2 == 1;
                for (mask, poly) in image.components() {
                    for (&te, coeff) in poly.terms() {
                        let row = target
                            .index_of(simplex, mask, te)
                            .expect("delta_pi image stays inside the graded window");
                        let val = if j_sign { -coeff } else { coeff.clone() };
                        out.push(((off as u32 + row, col), val));
                    }
                }
            }
        }
        out
    }

    /// Homology dimensions `H_k`, `k = 0..4`, at this window radius.
    pub fn homology_dims(&self, mode: RankMode) -> [usize; 5] {
        // rank of D_t for t = -2..=2 (D at t = -3 and the map out of C^3 are zero)
        let ranks: Vec<usize> = {
            let ts: Vec<i32> = (-2..=2).collect();
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                ts.par_iter().map(|&t| self.differential(t).rank(mode)).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                ts.iter().map(|&t| self.differential(t).rank(mode)).collect()
            }
        };
        let rank_of = |t: i32| -> usize {
            if (-2..=2).contains(&t) {
                ranks[(t + 2) as usize]
            } else {
                0
            }
        };
        let mut dims = [0usize; 5];
        for k in 0..5 {
            let t = 2 - k as i32;
            dims[k] = self.cochain_dim(t) - rank_of(t) - rank_of(t - 1);
        }
        dims
    }

    /// Per-(form-degree, Cech-degree) block dimensions of the zero-structure
    /// complex; meaningful only for `pi = 0`, where `D` is block diagonal.
    pub fn hodge_block_dims(&self, mode: RankMode) -> [[usize; 3]; 4] {
        assert!(self.pi.is_zero(), "block decomposition requires pi = 0");
        let mut out = [[0usize; 3]; 4];
        for i in 0..=2usize {
            let mut ranks = [0usize; 4];
            for j in 0..=3usize {
                ranks[j] = self.sheaf_differential(j, i).rank(mode);
            }
            for j in 0..=3usize {
                let below = if j == 0 { 0 } else { ranks[j - 1] };
                out[j][i] = self.basis(j, i).len() - ranks[j] - below;
            }
        }
        out
    }

    /// Cech coboundary `C^(j, i) -> C^(j+1, i)` for a single sheaf index.
    fn sheaf_differential(&self, j: usize, i: usize) -> SparseMatrix {
        let dom = self.basis(j, i);
        if j == 3 {
            return SparseMatrix::new(0, dom.len());
        }
        let cod = self.basis(j + 1, i);
        let mut m = SparseMatrix::new(cod.len(), dom.len());
        for (k, &(simplex, s_mask, e)) in dom.elems.iter().enumerate() {
            for v in 0..4u8 {
                if simplex & (1 << v) != 0 {
                    continue;
                }
                let coface = simplex | (1 << v);
                let pos = (coface & ((1 << v) - 1)).count_ones();
                let row = cod.index_of(coface, s_mask, e).expect("coface window");
                let sign = if pos % 2 == 1 { -1 } else { 1 };
                m.add_to(row, k as u32, crate::scalar::GaussianRational::from_int(sign));
            }
        }
        m
    }

    /// Apply `D` to an explicit total cochain given as bidegree components.
    /// Used by tests and the pairing layer; must agree with the matrices.
    pub fn apply_total(
        &self,
        comps: &BTreeMap<(usize, usize), CechCochain>,
    ) -> Result<BTreeMap<(usize, usize), CechCochain>, CechError> {
        let mut out: BTreeMap<(usize, usize), CechCochain> = BTreeMap::new();
        let mut add = |key: (usize, usize), c: CechCochain| {
            if c.is_zero() {
                return;
            }
            match out.entry(key) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().add(&c);
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        };
        for ((j, i), c) in comps {
            let dc = crate::cech::cech_differential(c);
            if !dc.is_zero() {
                add((j + 1, *i), dc);
            }
            if *i >= 1 {
                let (mut dpc, _) = crate::cech::delta_pi_cochain(&self.pi, c)?;
                if j % 2 == 1 {
                    dpc = dpc.neg();
                }
                add((*j, i - 1), dpc);
            }
        }
        Ok(out)
    }
}

/// Result of a stability-checked homology computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub window: i32,
    pub dims: [usize; 5],
    pub dims_wider: [usize; 5],
    pub stable: bool,
}

impl HomologyReport {
    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Koszul-Brylinski homology dimensions with the window-stability check
/// (radius `w` against `w + 2`).
pub fn homology_dims(
    pi: &PoissonBivector,
    w: i32,
    mode: RankMode,
) -> Result<HomologyReport, CechError> {
    let dims_pair: Vec<[usize; 5]> = {
        let windows = [w, w + 2];
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            windows
                .par_iter()
                .map(|&ww| TotalComplex::build(pi, ww).map(|tc| tc.homology_dims(mode)))
                .collect::<Result<_, _>>()?
        }
        #[cfg(not(feature = "parallel"))]
        {
            windows
                .iter()
                .map(|&ww| TotalComplex::build(pi, ww).map(|tc| tc.homology_dims(mode)))
                .collect::<Result<_, _>>()?
        }
    };
    Ok(HomologyReport {
        window: w,
        dims: dims_pair[0],
        dims_wider: dims_pair[1],
        stable: dims_pair[0] == dims_pair[1],
    })
}

/// Euler characteristic of the Koszul-Brylinski homology; `None` while the
/// window is unstable.
pub fn euler_kb(pi: &PoissonBivector, w: i32, mode: RankMode) -> Result<Option<i64>, CechError> {
    let report = homology_dims(pi, w, mode)?;
    Ok(report.stable.then(|| report.euler()))
}
