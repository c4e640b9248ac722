//! Rank computation modulo random word-size primes.
//!
//! Entries of a [`SparseMatrix`](crate::matrix::SparseMatrix) are mapped into
//! F_p by clearing denominators entrywise and sending `i` to a square root of
//! `-1` (primes are drawn `p = 1 mod 4` so one exists). The modular rank never
//! exceeds the exact rank; a rank observed under two independent primes is
//! accepted. A prime dividing any denominator aborts that attempt and a fresh
//! prime is drawn.

use crate::matrix::SparseMatrix;
use crate::scalar::GaussianRational;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, ToPrimitive};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BinaryHeap;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, valid for all u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Stream of ~50-bit primes `p = 1 (mod 4)`, deterministic in the seed.
pub struct PrimeStream {
    rng: ChaCha8Rng,
}

impl PrimeStream {
    pub fn new(seed: u64) -> Self {
        PrimeStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_prime(&mut self) -> u64 {
        loop {
            let raw = (self.rng.next_u64() >> 14) | (1 << 49);
            let mut c = raw - raw % 4 + 1;
            for _ in 0..100_000 {
                if is_prime(c) {
                    return c;
                }
                c += 4;
            }
        }
    }
}

/// Square root of -1 modulo `p`, for `p = 1 (mod 4)`.
fn sqrt_minus_one(p: u64) -> u64 {
    let e = (p - 1) / 4;
    for a in 2u64.. {
        let s = pow_mod(a, e, p);
        if mul_mod(s, s, p) == p - 1 {
            return s;
        }
    }
    unreachable!()
}

struct DeniedPrime;

fn reduce_rational(x: &BigRational, p: u64) -> Result<u64, DeniedPrime> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb).to_u64().unwrap();
    if den == 0 {
        return Err(DeniedPrime);
    }
    let num = x.numer().mod_floor(&pb).to_u64().unwrap();
    Ok(mul_mod(num, inv_mod(den, p), p))
}

fn reduce_scalar(x: &GaussianRational, p: u64, root: u64) -> Result<u64, DeniedPrime> {
    let re = reduce_rational(&x.re, p)?;
    let im = reduce_rational(&x.im, p)?;
    Ok((re + mul_mod(im, root, p)) % p)
}

/// Sparse elimination over F_p with Markowitz-style pivoting. Row population
/// per column is tracked exactly; the column-to-rows index may hold stale
/// references which are validated lazily.
struct ModElim {
    p: u64,
    rows: Vec<Option<Vec<(u32, u64)>>>,
    version: Vec<u32>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    heap: BinaryHeap<std::cmp::Reverse<(usize, u32, u32)>>,
}

impl ModElim {
    fn new(p: u64, cols: usize, rows: Vec<Vec<(u32, u64)>>) -> Self {
        let mut e = ModElim {
            p,
            rows: rows.into_iter().map(Some).collect(),
            version: Vec::new(),
            col_rows: vec![Vec::new(); cols],
            col_count: vec![0; cols],
            heap: BinaryHeap::new(),
        };
        e.version = vec![0; e.rows.len()];
        for (rid, row) in e.rows.iter().enumerate() {
            let row = row.as_ref().unwrap();
            for &(c, _) in row {
                e.col_rows[c as usize].push(rid as u32);
                e.col_count[c as usize] += 1;
            }
            e.heap
                .push(std::cmp::Reverse((row.len(), rid as u32, 0)));
        }
        e
    }

    fn rank(mut self) -> usize {
        let mut rank = 0usize;
        while let Some(std::cmp::Reverse((len, rid, ver))) = self.heap.pop() {
            let rid = rid as usize;
            let valid = self.version[rid] == ver
                && self.rows[rid].as_ref().map(|r| r.len()) == Some(len);
            if !valid {
                continue;
            }
            let pivot = self.rows[rid].take().unwrap();
            for &(c, _) in &pivot {
                self.col_count[c as usize] -= 1;
            }
            let (pc, pv) = pivot
                .iter()
                .min_by_key(|(c, _)| (self.col_count[*c as usize], *c))
                .map(|(c, v)| (*c, *v))
                .unwrap();
            rank += 1;
            let pinv = inv_mod(pv, self.p);
            let victims = std::mem::take(&mut self.col_rows[pc as usize]);
            for vid in victims {
                let vid = vid as usize;
                let Some(row) = self.rows[vid].as_ref() else {
                    continue;
                };
                let Ok(idx) = row.binary_search_by_key(&pc, |(c, _)| *c) else {
                    continue;
                };
                let factor = mul_mod(row[idx].1, pinv, self.p);
                let new_row = sub_mul_mod(row, factor, &pivot, self.p);
                // apply_diff settles all column counts for the replacement
                self.apply_diff(vid, &new_row);
                if new_row.is_empty() {
                    self.rows[vid] = None;
                } else {
                    let len = new_row.len();
                    self.rows[vid] = Some(new_row);
                    self.version[vid] += 1;
                    self.heap
                        .push(std::cmp::Reverse((len, vid as u32, self.version[vid])));
                }
            }
        }
        rank
    }

    /// Updates column counts and the column index for a row replacement.
    fn apply_diff(&mut self, rid: usize, new_row: &[(u32, u64)]) {
        let old = self.rows[rid].as_ref().unwrap();
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < new_row.len() {
            match (old.get(i), new_row.get(j)) {
                (Some((a, _)), Some((b, _))) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some((a, _)), Some((b, _))) if a < b => {
                    self.col_count[*a as usize] -= 1;
                    i += 1;
                }
                (Some(_), Some((b, _))) => {
                    self.col_count[*b as usize] += 1;
                    self.col_rows[*b as usize].push(rid as u32);
                    j += 1;
                }
                (Some((a, _)), None) => {
                    self.col_count[*a as usize] -= 1;
                    i += 1;
                }
                (None, Some((b, _))) => {
                    self.col_count[*b as usize] += 1;
                    self.col_rows[*b as usize].push(rid as u32);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
    }
}

fn sub_mul_mod(row: &[(u32, u64)], f: u64, pivot: &[(u32, u64)], p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                let v = (va + p - mul_mod(f, vb, p)) % p;
                if v != 0 {
                    out.push((ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                out.push((ca, va));
                i += 1;
            }
            (Some(_), Some(&(cb, vb))) => {
                out.push((cb, (p - mul_mod(f, vb, p)) % p));
                j += 1;
            }
            (Some(&(ca, va)), None) => {
                out.push((ca, va));
                i += 1;
            }
            (None, Some(&(cb, vb))) => {
                out.push((cb, (p - mul_mod(f, vb, p)) % p));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn rank_mod_prime(m: &SparseMatrix, p: u64) -> Result<usize, DeniedPrime> {
    let root = sqrt_minus_one(p);
    let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); m.rows()];
    for (&(r, c), v) in m.entries() {
        let rv = reduce_scalar(v, p, root)?;
        if rv != 0 {
            rows[r as usize].push((c, rv));
        }
    }
    rows.retain(|r| !r.is_empty());
    Ok(ModElim::new(p, m.cols(), rows).rank())
}

/// Modular rank: the first value confirmed by two independent primes.
pub fn rank_modular(m: &SparseMatrix, seed: u64) -> usize {
    if m.num_entries() == 0 {
        return 0;
    }
    let mut primes = PrimeStream::new(seed);
    let mut seen: Vec<usize> = Vec::new();
    for _ in 0..64 {
        let p = primes.next_prime();
        match rank_mod_prime(m, p) {
            Err(DeniedPrime) => continue,
            Ok(r) => {
                if seen.contains(&r) {
                    return r;
                }
                seen.push(r);
            }
        }
    }
    panic!("modular rank did not stabilize after 64 primes");
}

/// Rank modulo a single explicitly chosen prime (testing hook).
pub fn rank_single_prime(m: &SparseMatrix, p: u64) -> Option<usize> {
    assert!(is_prime(p) && p % 4 == 1, "need a prime p = 1 mod 4");
    rank_mod_prime(m, p).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RankMode;

    #[test]
    fn primes_are_one_mod_four() {
        let mut s = PrimeStream::new(7);
        for _ in 0..5 {
            let p = s.next_prime();
            assert!(is_prime(p));
            assert_eq!(p % 4, 1);
            let r = sqrt_minus_one(p);
            assert_eq!(mul_mod(r, r, p), p - 1);
        }
    }

    #[test]
    fn prime_stream_deterministic() {
        let a: Vec<u64> = {
            let mut s = PrimeStream::new(3);
            (0..4).map(|_| s.next_prime()).collect()
        };
        let b: Vec<u64> = {
            let mut s = PrimeStream::new(3);
            (0..4).map(|_| s.next_prime()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn modular_matches_exact_identity() {
        let m = SparseMatrix::identity(5);
        assert_eq!(m.rank(RankMode::Modular { seed: 1 }), 5);
    }

    #[test]
    fn denominator_retry() {
        // Entry 1/5: the prime 5 is denied, other primes work.
        let mut m = SparseMatrix::new(1, 1);
        m.set(0, 0, GaussianRational::from_ratio(1, 5));
        assert!(rank_single_prime(&m, 5).is_none());
        assert_eq!(m.rank(RankMode::Modular { seed: 0 }), 1);
    }
}
