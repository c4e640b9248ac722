//! Sparse matrices over Q(i): exact rank, modular rank, membership solves.
//!
//! Every dimension reported by the homology engine reduces to `rank` calls on
//! these matrices. Exact mode eliminates over the field Q(i) directly; the
//! modular mode reduces an integer lift modulo random word-size primes (see
//! [`crate::modular`]) and accepts two independently agreeing primes.

use crate::modular;
use crate::scalar::GaussianRational;
use std::collections::BTreeMap;

/// Threshold (in columns) below which `RankMode::Auto` eliminates exactly.
pub const EXACT_COLS_THRESHOLD: usize = 2000;

/// How to compute a rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    /// Exact elimination over Q(i).
    Exact,
    /// Reduction modulo random primes derived from the seed; the rank is
    /// reported once two independent primes agree.
    Modular { seed: u64 },
    /// Exact below [`EXACT_COLS_THRESHOLD`] columns, modular above.
    Auto { seed: u64 },
}

/// A sparse matrix with exact entries; zeros are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(u32, u32), GaussianRational>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::new(n, n);
        for k in 0..n as u32 {
            m.set(k, k, GaussianRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &GaussianRational)> {
        self.entries.iter()
    }

    pub fn get(&self, r: u32, c: u32) -> GaussianRational {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: u32, c: u32, v: GaussianRational) {
        assert!((r as usize) < self.rows && (c as usize) < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: u32, c: u32, v: GaussianRational) {
        let cur = self.get(r, c);
        self.set(r, c, &cur + &v);
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::new(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    /// Rows as sorted sparse vectors; empty rows omitted.
    pub(crate) fn row_lists(&self) -> Vec<Vec<(u32, GaussianRational)>> {
        let mut rows: Vec<Vec<(u32, GaussianRational)>> = vec![Vec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r as usize].push((c, v.clone()));
        }
        rows.retain(|r| !r.is_empty());
        rows
    }

    pub fn rank(&self, mode: RankMode) -> usize {
        match mode {
            RankMode::Exact => self.rank_exact(),
            RankMode::Modular { seed } => modular::rank_modular(self, seed),
            RankMode::Auto { seed } => {
                if self.cols < EXACT_COLS_THRESHOLD {
                    self.rank_exact()
                } else {
                    modular::rank_modular(self, seed)
                }
            }
        }
    }

    fn rank_exact(&self) -> usize {
        let mut rows = self.row_lists();
        let mut rank = 0usize;
        while !rows.is_empty() {
            // Cheapest row first, then its least-populated column.
            let (ri, _) = rows
                .iter()
                .enumerate()
                .min_by_key(|(i, r)| (r.len(), *i))
                .unwrap();
            let pivot = rows.swap_remove(ri);
            let mut col_count: BTreeMap<u32, usize> = BTreeMap::new();
            for row in &rows {
                for (c, _) in row {
                    *col_count.entry(*c).or_insert(0) += 1;
                }
            }
            let (pc, pv) = pivot
                .iter()
                .min_by_key(|(c, _)| (col_count.get(c).copied().unwrap_or(0), *c))
                .map(|(c, v)| (*c, v.clone()))
                .unwrap();
            rank += 1;
            let pinv = pv.inverse();
            for row in rows.iter_mut() {
                if let Some(f) = row_coeff(row, pc) {
                    let factor = &f * &pinv;
                    *row = row_sub_mul(row, &factor, &pivot);
                }
            }
            rows.retain(|r| !r.is_empty());
        }
        rank
    }

    /// Solves `M x = v` exactly; `None` when `v` is outside the column space.
    pub fn solve_membership(&self, v: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        assert_eq!(v.len(), self.rows, "rhs length must match row count");
        // Row echelon on the augmented system, then back-substitution.
        let mut rows: Vec<(Vec<(u32, GaussianRational)>, GaussianRational)> = {
            let mut raw: Vec<Vec<(u32, GaussianRational)>> = vec![Vec::new(); self.rows];
            for (&(r, c), val) in &self.entries {
                raw[r as usize].push((c, val.clone()));
            }
            raw.into_iter().zip(v.iter().cloned()).collect()
        };
        let mut pivots: Vec<(u32, Vec<(u32, GaussianRational)>, GaussianRational)> = Vec::new();
        for (mut row, mut rhs) in rows.drain(..) {
            for (pc, prow, prhs) in &pivots {
                if let Some(f) = row_coeff(&row, *pc) {
                    row = row_sub_mul(&row, &f, prow);
                    rhs = &rhs - &(&f * prhs);
                }
            }
            if let Some((c0, v0)) = row.first().cloned() {
                // Normalize so the leading coefficient is 1.
                let inv = v0.inverse();
                let nrow: Vec<_> = row.iter().map(|(c, v)| (*c, v * &inv)).collect();
                let nrhs = &rhs * &inv;
                pivots.push((c0, nrow, nrhs));
                pivots.sort_by_key(|(c, _, _)| *c);
            } else if !rhs.is_zero() {
                return None;
            }
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (pc, prow, prhs) in pivots.iter().rev() {
            let mut val = prhs.clone();
            for (c, coeff) in prow {
                if c != pc {
                    val = &val - &(coeff * &x[*c as usize]);
                }
            }
            x[*pc as usize] = val;
        }
        // The echelon form above is not fully reduced, so verify.
        if self.apply(&x) == v {
            Some(x)
        } else {
            None
        }
    }

    /// `M x` as a dense vector.
    pub fn apply(&self, x: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![GaussianRational::zero(); self.rows];
        for (&(r, c), v) in &self.entries {
            let xc = &x[c as usize];
            if !xc.is_zero() {
                out[r as usize] = &out[r as usize] + &(v * xc);
            }
        }
        out
    }
}

fn row_coeff(row: &[(u32, GaussianRational)], col: u32) -> Option<GaussianRational> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| row[i].1.clone())
}

/// `row - f * pivot`, both sorted sparse vectors.
fn row_sub_mul(
    row: &[(u32, GaussianRational)],
    f: &GaussianRational,
    pivot: &[(u32, GaussianRational)],
) -> Vec<(u32, GaussianRational)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va - &(f * vb);
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some(_), Some((cb, vb))) => {
                out.push((*cb, -(f * vb)));
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                out.push((*cb, -(f * vb)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn identity_rank() {
        assert_eq!(SparseMatrix::identity(3).rank(RankMode::Exact), 3);
    }

    #[test]
    fn proportional_rows_rank_one() {
        let mut m = SparseMatrix::new(2, 2);
        m.set(0, 0, q(1));
        m.set(0, 1, q(2));
        m.set(1, 0, q(2));
        m.set(1, 1, q(4));
        assert_eq!(m.rank(RankMode::Exact), 1);
    }

    #[test]
    fn membership_identity() {
        let m = SparseMatrix::identity(4);
        let v = vec![q(3), q(-1), q(0), q(7)];
        assert_eq!(m.solve_membership(&v).unwrap(), v);
    }

    #[test]
    fn membership_zero_matrix() {
        let m = SparseMatrix::new(3, 2);
        assert!(m.solve_membership(&[q(0), q(1), q(0)]).is_none());
        assert!(m.solve_membership(&[q(0), q(0), q(0)]).is_some());
    }

    #[test]
    fn membership_constructed_combination() {
        // v = 3*col0 - col1 must be recovered as a valid preimage.
        let mut m = SparseMatrix::new(3, 3);
        m.set(0, 0, q(2));
        m.set(1, 0, q(-1));
        m.set(0, 1, q(1));
        m.set(2, 1, q(5));
        m.set(2, 2, GaussianRational::i());
        let col0 = [q(2), q(-1), q(0)];
        let col1 = [q(1), q(0), q(5)];
        let v: Vec<_> = (0..3)
            .map(|r| &(&q(3) * &col0[r]) - &col1[r])
            .collect();
        let x = m.solve_membership(&v).expect("in span");
        assert_eq!(m.apply(&x), v);
    }
}
