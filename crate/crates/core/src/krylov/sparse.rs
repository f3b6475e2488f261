//! Compressed sparse rows, reverse Cuthill-McKee ordering and a banded LU with
//! partial pivoting for the volume systems.

use std::collections::VecDeque;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl Csr {
    /// Sums duplicate entries.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { nrows, ncols, row_ptr, col_idx, values }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `alpha * self + beta * other` for matrices with the same shape.
    pub fn linear_combination(&self, alpha: f64, other: &Csr, beta: f64) -> Csr {
        let mut t = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.nrows {
            t.extend(self.row(i).map(|(j, v)| (i, j, alpha * v)));
            t.extend(other.row(i).map(|(j, v)| (i, j, beta * v)));
        }
        Csr::from_triplets(self.nrows, self.ncols, t)
    }

    /// Submatrix on the given row and column index lists.
    pub fn extract(&self, rows: &[usize], cols: &[usize]) -> Csr {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            col_map[c] = k;
        }
        let mut t = Vec::new();
        for (r, &i) in rows.iter().enumerate() {
            for (j, v) in self.row(i) {
                if col_map[j] != usize::MAX {
                    t.push((r, col_map[j], v));
                }
            }
        }
        Csr::from_triplets(rows.len(), cols.len(), t)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.nrows).map(|i| self.row(i).map(|(j, v)| x[j] * v).sum()).collect()
    }

    pub fn matvec_real(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nrows).map(|i| self.row(i).map(|(j, v)| x[j] * v).sum()).collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.matvec_real(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut d = nalgebra::DMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                d[(i, j)] += v;
            }
        }
        d
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let t = Csr::from_triplets(
            self.ncols,
            self.nrows,
            (0..self.nrows).flat_map(|i| self.row(i).map(move |(j, v)| (j, i, v))).collect(),
        );
        let d = self.linear_combination(1.0, &t, -1.0);
        d.values.iter().all(|v| v.abs() <= tol * scale)
    }
}

/// Reverse Cuthill-McKee permutation of a structurally symmetric matrix.
/// `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &Csr) -> Vec<usize> {
    let n = a.nrows;
    let degree: Vec<usize> = (0..n).map(|i| a.row_ptr[i + 1] - a.row_ptr[i]).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).expect("unvisited vertex exists");
        let start = pseudo_peripheral(a, seed, &degree);
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = a.row(v).map(|(j, _)| j).filter(|&j| !visited[j]).collect();
            nbrs.sort_by_key(|&j| (degree[j], j));
            for j in nbrs {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(a: &Csr, start: usize) -> (Vec<usize>, usize) {
    let mut level = vec![usize::MAX; a.nrows];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut last = start;
    while let Some(v) = queue.pop_front() {
        last = v;
        for (j, _) in a.row(v) {
            if level[j] == usize::MAX {
                level[j] = level[v] + 1;
                queue.push_back(j);
            }
        }
    }
    (level, last)
}

fn pseudo_peripheral(a: &Csr, seed: usize, degree: &[usize]) -> usize {
    let mut current = seed;
    let (mut levels, _) = bfs_levels(a, current);
    let mut ecc = levels.iter().filter(|&&l| l != usize::MAX).max().copied().unwrap_or(0);
    for _ in 0..8 {
        let candidate = (0..a.nrows).filter(|&i| levels[i] == ecc).min_by_key(|&i| degree[i]).unwrap_or(current);
        let (cl, _) = bfs_levels(a, candidate);
        let ce = cl.iter().filter(|&&l| l != usize::MAX).max().copied().unwrap_or(0);
        if ce <= ecc {
            break;
        }
        current = candidate;
        levels = cl;
        ecc = ce;
    }
    current
}

/// Lower and upper bandwidth of `a` under the permutation `perm[new] = old`.
pub fn bandwidths(a: &Csr, perm: &[usize]) -> (usize, usize) {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let (mut kl, mut ku) = (0, 0);
    for i in 0..a.nrows {
        for (j, _) in a.row(i) {
            let (r, c) = (inv[i], inv[j]);
            if r > c {
                kl = kl.max(r - c);
            } else {
                ku = ku.max(c - r);
            }
        }
    }
    (kl, ku)
}

/// Banded LU with partial pivoting in LAPACK `gbtrf` column storage, applied to
/// a reverse Cuthill-McKee reordering of a square sparse matrix.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    ab: Vec<f64>,
    ipiv: Vec<usize>,
    /// `perm[new] = old`
    perm: Vec<usize>,
}

impl BandLu {
    pub fn new(a: &Csr) -> Result<Self> {
        if a.nrows != a.ncols {
            return Err(Error::Dimension { expected: a.nrows, got: a.ncols });
        }
        let n = a.nrows;
        let perm = reverse_cuthill_mckee(a);
        let (kl, ku) = bandwidths(a, &perm);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let ld = 2 * kl + ku + 1;
        let mut ab = vec![0.0; ld * n];
        let off = kl + ku;
        for i in 0..n {
            for (j, v) in a.row(i) {
                let (r, c) = (inv[i], inv[j]);
                ab[c * ld + off + r - c] += v;
            }
        }
        let mut ipiv = vec![0; n];
        let scale = a.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let col = &ab[k * ld..(k + 1) * ld];
            let mut p = k;
            let mut best = col[off].abs();
            for i in k + 1..=last {
                let v = col[off + i - k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= 1e-300 * scale.max(1.0) {
                return Err(Error::Singular(k));
            }
            ipiv[k] = p;
            let jmax = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    ab.swap(j * ld + off + k - j, j * ld + off + p - j);
                }
            }
            let pivot = ab[k * ld + off];
            for i in k + 1..=last {
                ab[k * ld + off + i - k] /= pivot;
            }
            for j in k + 1..=jmax {
                let ukj = ab[j * ld + off + k - j];
                if ukj == 0.0 {
                    continue;
                }
                let (left, right) = ab.split_at_mut(j * ld);
                let lcol = &left[k * ld + off + 1..k * ld + off + 1 + (last - k)];
                let base = off + k + 1 - j;
                let ucol = &mut right[base..base + (last - k)];
                for (x, l) in ucol.iter_mut().zip(lcol) {
                    *x -= l * ukj;
                }
            }
        }
        Ok(Self { n, kl, ku, ld, ab, ipiv, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// Solves for `nrhs` right-hand sides stored row-major (`b[i * nrhs + c]`),
    /// indexed by the original unknown numbering.
    pub fn solve_many(&self, b: &[f64], nrhs: usize) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n * nrhs, "rhs size mismatch");
        let mut x = vec![0.0; n * nrhs];
        for (new, &old) in self.perm.iter().enumerate() {
            x[new * nrhs..(new + 1) * nrhs].copy_from_slice(&b[old * nrhs..(old + 1) * nrhs]);
        }
        let off = self.kl + self.ku;
        for k in 0..n {
            let p = self.ipiv[k];
            if p != k {
                for c in 0..nrhs {
                    x.swap(k * nrhs + c, p * nrhs + c);
                }
            }
            let last = (k + self.kl).min(n - 1);
            let (head, tail) = x.split_at_mut((k + 1) * nrhs);
            let xk = &head[k * nrhs..];
            for i in k + 1..=last {
                let l = self.ab[k * self.ld + off + i - k];
                if l == 0.0 {
                    continue;
                }
                let row = &mut tail[(i - k - 1) * nrhs..(i - k) * nrhs];
                for (a, b) in row.iter_mut().zip(xk) {
                    *a -= l * b;
                }
            }
        }
        for k in (0..n).rev() {
            let d = self.ab[k * self.ld + off];
            let (head, tail) = x.split_at_mut(k * nrhs);
            let xk = &mut tail[..nrhs];
            xk.iter_mut().for_each(|v| *v /= d);
            let first = k.saturating_sub(off);
            for i in first..k {
                let u = self.ab[k * self.ld + off + i - k];
                if u == 0.0 {
                    continue;
                }
                let row = &mut head[i * nrhs..(i + 1) * nrhs];
                for (a, b) in row.iter_mut().zip(xk.iter()) {
                    *a -= u * b;
                }
            }
        }
        let mut out = vec![0.0; n * nrhs];
        for (new, &old) in self.perm.iter().enumerate() {
            out[old * nrhs..(old + 1) * nrhs].copy_from_slice(&x[new * nrhs..(new + 1) * nrhs]);
        }
        out
    }

    pub fn solve_real(&self, b: &[f64]) -> Vec<f64> {
        self.solve_many(b, 1)
    }

    pub fn solve_complex(&self, b: &[Complex64]) -> Vec<Complex64> {
        let flat: Vec<f64> = b.iter().flat_map(|z| [z.re, z.im]).collect();
        let x = self.solve_many(&flat, 2);
        x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn laplacian_grid(nx: usize, ny: usize, shift: f64) -> Csr {
        let id = |i: usize, j: usize| i * ny + j;
        let mut t = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                t.push((id(i, j), id(i, j), 4.0 - shift));
                if i + 1 < nx {
                    t.push((id(i, j), id(i + 1, j), -1.0));
                    t.push((id(i + 1, j), id(i, j), -1.0));
                }
                if j + 1 < ny {
                    t.push((id(i, j), id(i, j + 1), -1.0));
                    t.push((id(i, j + 1), id(i, j), -1.0));
                }
            }
        }
        Csr::from_triplets(nx * ny, nx * ny, t)
    }

    #[test]
    fn triplets_are_summed() {
        let a = Csr::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 1, 2.0), (0, 0, 3.0)]);
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.to_dense()[(0, 0)], 4.0);
    }

    #[test]
    fn rcm_reduces_bandwidth_and_is_a_permutation() {
        // shuffled numbering of a long thin grid
        let a = laplacian_grid(40, 5, 0.0);
        let n = a.nrows;
        let mut rng = StdRng::seed_from_u64(9);
        let mut shuffle: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            shuffle.swap(i, rng.gen_range(0..=i));
        }
        let identity: Vec<usize> = (0..n).collect();
        let t: Vec<(usize, usize, f64)> = (0..n)
            .flat_map(|i| a.row(i).map(move |(j, v)| (i, j, v)).collect::<Vec<_>>())
            .map(|(i, j, v)| (shuffle[i], shuffle[j], v))
            .collect();
        let b = Csr::from_triplets(n, n, t);
        let perm = reverse_cuthill_mckee(&b);
        let mut sorted = perm.clone();
        sorted.sort();
        assert_eq!(sorted, identity);
        let (kl, _) = bandwidths(&b, &perm);
        let (kl0, _) = bandwidths(&b, &identity);
        assert!(kl <= 10 && kl < kl0, "{kl} vs {kl0}");
    }

    #[test]
    fn band_lu_solves_indefinite_system() {
        // shifted Laplacian is indefinite and needs pivoting
        let a = laplacian_grid(30, 12, 3.7);
        let n = a.nrows;
        let lu = BandLu::new(&a).unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = a.matvec_real(&x);
        let got = lu.solve_real(&b);
        let err = x.iter().zip(&got).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");

        let dense = a.to_dense();
        let xr = nalgebra::DVector::from_vec(got);
        assert!((&dense * &xr - nalgebra::DVector::from_vec(b)).norm() < 1e-10 * xr.norm());
    }

    #[test]
    fn multi_rhs_matches_single_solves() {
        let a = laplacian_grid(10, 7, 1.1);
        let n = a.nrows;
        let lu = BandLu::new(&a).unwrap();
        let nrhs = 3;
        let b: Vec<f64> = (0..n * nrhs).map(|k| (k as f64).cos()).collect();
        let many = lu.solve_many(&b, nrhs);
        for c in 0..nrhs {
            let col: Vec<f64> = (0..n).map(|i| b[i * nrhs + c]).collect();
            let single = lu.solve_real(&col);
            for i in 0..n {
                assert!((single[i] - many[i * nrhs + c]).abs() < 1e-13);
            }
        }
        let zc: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let xc = lu.solve_complex(&zc);
        let back = a.matvec(&xc);
        for (p, q) in back.iter().zip(&zc) {
            assert!((p - q).norm() < 1e-9);
        }
    }

    #[test]
    fn singular_band_matrix_is_reported() {
        let a = Csr::from_triplets(3, 3, vec![(0, 0, 1.0), (1, 1, 0.0), (2, 2, 1.0)]);
        assert!(matches!(BandLu::new(&a), Err(Error::Singular(_))));
    }

    #[test]
    fn extraction_and_symmetry() {
        let a = laplacian_grid(4, 4, 0.0);
        assert!(a.is_symmetric(1e-15));
        let s = a.extract(&[0, 1, 5], &[1, 5]);
        let d = s.to_dense();
        assert_eq!(d[(0, 0)], -1.0);
        assert_eq!(d[(1, 0)], 4.0);
        assert_eq!(d[(2, 1)], 4.0);
    }
}
