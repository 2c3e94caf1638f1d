//! Dense and sparse Gaussian elimination over 𝔽ₚ.
//!
//! Dense row reduction is the workhorse; matrices wider than the configured
//! `max_dense_cols` take the sparse path instead. Both are exact.

use std::collections::BTreeMap;

use crate::fp;

/// Dense row-major matrix over 𝔽ₚ.
#[derive(Debug, Clone)]
pub struct MatFp {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl MatFp {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        MatFp {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            debug_assert_eq!(row.len(), c);
            data.extend(row.into_iter().map(|v| v % p));
        }
        MatFp {
            p,
            rows: r,
            cols: c,
            data,
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            let pivot = (lead..self.rows).find(|&r| self.at(r, col) != 0);
            let Some(pr) = pivot else { continue };
            self.swap_rows(lead, pr);
            let inv = fp::inv_mod(self.at(lead, col), p);
            for c in col..self.cols {
                let v = fp::mul_mod(self.at(lead, c), inv, p);
                self.set(lead, c, v);
            }
            for r in 0..self.rows {
                if r != lead {
                    let f = self.at(r, col);
                    if f != 0 {
                        for c in col..self.cols {
                            let v = fp::sub_mod(
                                self.at(r, c),
                                fp::mul_mod(f, self.at(lead, c), p),
                                p,
                            );
                            self.set(r, c, v);
                        }
                    }
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == self.rows {
                break;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank_dense(mut self) -> usize {
        self.rref().len()
    }

    /// Basis of the right kernel `{ x : A x = 0 }`.
    pub fn kernel_basis(mut self) -> Vec<Vec<u64>> {
        let pivots = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = Some(i);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = vec![0u64; self.cols];
            x[free] = 1;
            for (col, pr) in pivot_set.iter().enumerate() {
                if let Some(r) = pr {
                    x[col] = fp::neg_mod(self.at(*r, free), self.p);
                }
            }
            basis.push(x);
        }
        basis
    }
}

/// Rank by sparse elimination; rows as sorted column->value maps.
pub fn sparse_rank(p: u64, rows: Vec<BTreeMap<usize, u64>>) -> usize {
    let mut active: Vec<BTreeMap<usize, u64>> =
        rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut rank = 0usize;
    while !active.is_empty() {
        // pick the shortest row as pivot (Markowitz-lite)
        let (idx, _) = active
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| r.len())
            .expect("nonempty");
        let pivot_row = active.swap_remove(idx);
        let (&col, &val) = pivot_row.iter().next().expect("nonempty row");
        let inv = fp::inv_mod(val, p);
        rank += 1;
        let mut next = Vec::with_capacity(active.len());
        for mut row in active {
            if let Some(&f) = row.get(&col) {
                let scale = fp::mul_mod(f, inv, p);
                for (&c, &v) in &pivot_row {
                    let delta = fp::mul_mod(scale, v, p);
                    let entry = row.entry(c).or_insert(0);
                    *entry = fp::sub_mod(*entry, delta, p);
                    if *entry == 0 {
                        row.remove(&c);
                    }
                }
            }
            if !row.is_empty() {
                next.push(row);
            }
        }
        active = next;
    }
    rank
}

/// Rank with automatic dense/sparse dispatch.
pub fn rank(p: u64, rows: &[Vec<u64>], max_dense_cols: usize) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    if cols == 0 || rows.is_empty() {
        return 0;
    }
    if cols <= max_dense_cols {
        MatFp::from_rows(p, rows.to_vec()).rank_dense()
    } else {
        let sparse = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v % p != 0)
                    .map(|(c, &v)| (c, v % p))
                    .collect()
            })
            .collect();
        sparse_rank(p, sparse)
    }
}

/// A subspace of 𝔽ₚⁿ presented by an explicit (not necessarily echelon) basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub p: u64,
    pub ambient: usize,
    pub basis: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn new(p: u64, ambient: usize, basis: Vec<Vec<u64>>) -> Self {
        debug_assert!(basis.iter().all(|b| b.len() == ambient));
        Subspace { p, ambient, basis }
    }

    pub fn zero(p: u64, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut e = vec![0u64; ambient];
                e[i] = 1;
                e
            })
            .collect();
        Subspace {
            p,
            ambient,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v` in this basis; `None` if `v` is outside.
    pub fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        let k = self.basis.len();
        if k == 0 {
            return v.iter().all(|&x| x % self.p == 0).then(Vec::new);
        }
        // solve basis^T . x = v with an augmented elimination
        let mut aug = MatFp::zeros(self.p, self.ambient, k + 1);
        for (j, b) in self.basis.iter().enumerate() {
            for i in 0..self.ambient {
                aug.set(i, j, b[i]);
            }
        }
        for i in 0..self.ambient {
            aug.set(i, k, v[i] % self.p);
        }
        let pivots = aug.rref();
        // inconsistent if the augmented column is a pivot
        if pivots.contains(&k) {
            return None;
        }
        let mut x = vec![0u64; k];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, k);
        }
        Some(x)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.express(v).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_rank_kernel() {
        let m = MatFp::from_rows(5, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.clone().rank_dense(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        // check A k = 0
        let k = &ker[0];
        let dot1 = (k[0] + 2 * k[1] + 3 * k[2]) % 5;
        let dot2 = (k[1] + k[2]) % 5;
        assert_eq!((dot1, dot2), (0, 0));
    }

    #[test]
    fn sparse_matches_dense() {
        let rows = vec![
            vec![1, 0, 2, 0],
            vec![0, 0, 1, 1],
            vec![2, 0, 4, 0],
            vec![1, 0, 3, 1],
        ];
        let dense = rank(3, &rows, 4096);
        let sparse = rank(3, &rows, 1);
        assert_eq!(dense, sparse);
        assert_eq!(dense, 2);
    }

    #[test]
    fn subspace_membership() {
        let s = Subspace::new(7, 3, vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[1, 1, 2]));
        assert!(!s.contains(&[1, 0, 0]));
        let coords = s.express(&[2, 3, 5]).unwrap();
        assert_eq!(coords, vec![2, 3]);
        let z = Subspace::zero(7, 3);
        assert!(z.contains(&[0, 0, 0]));
        assert!(!z.contains(&[1, 0, 0]));
    }
}
