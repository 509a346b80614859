//! Symmetric matrices in variable-band (skyline) storage.
//!
//! Row `i` keeps the lower-triangle entries from column `first[i]` through
//! the diagonal in one contiguous slice. Cholesky fill stays inside this
//! profile, so the factor reuses the same layout.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SkylineMatrix {
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineMatrix {
    /// Zero matrix with the given first-column profile (`first[i] <= i`).
    pub fn zeros(first: Vec<usize>) -> Self {
        let mut start = Vec::with_capacity(first.len() + 1);
        let mut offset = 0;
        for (i, &f) in first.iter().enumerate() {
            assert!(f <= i, "profile entry {f} beyond diagonal {i}");
            start.push(offset);
            offset += i - f + 1;
        }
        start.push(offset);
        Self {
            first,
            start,
            data: vec![0.0; offset],
        }
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Stored lower-triangle entries.
    pub fn profile_len(&self) -> usize {
        self.data.len()
    }

    pub fn first_column(&self, row: usize) -> usize {
        self.first[row]
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[self.start[i]..self.start[i + 1]]
    }

    fn index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        (j >= self.first[i]).then(|| self.start[i] + j - self.first[i])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.index(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `v` at (i, j) and implicitly at (j, i). Panics outside the profile.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .index(i, j)
            .unwrap_or_else(|| panic!("({i}, {j}) outside skyline profile"));
        self.data[k] += v;
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.data[self.start[i + 1] - 1]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for i in 0..self.dim() {
            let f = self.first[i];
            let row = self.row(i);
            let (off, diag) = row.split_at(row.len() - 1);
            let mut acc = diag[0] * x[i];
            for (a, (&v, &xj)) in off.iter().zip(&x[f..i]).enumerate() {
                acc += v * xj;
                y[f + a] += v * x[i];
            }
            y[i] += acc;
        }
        y
    }

    /// x·A·y for symmetric A.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.matvec(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Largest absolute row sum (∞-norm of the full symmetric matrix).
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0; self.dim()];
        for i in 0..self.dim() {
            let f = self.first[i];
            let row = self.row(i);
            for (a, &v) in row.iter().enumerate() {
                let j = f + a;
                sums[i] += v.abs();
                if j != i {
                    sums[j] += v.abs();
                }
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// self + alpha·other; both must share a profile.
    pub fn add_scaled(&self, alpha: f64, other: &SkylineMatrix) -> SkylineMatrix {
        assert_eq!(self.first, other.first, "profiles differ");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
        out
    }

    /// Principal submatrix on the kept (ascending) indices.
    pub fn submatrix(&self, keep: &[usize]) -> SkylineMatrix {
        let first: Vec<usize> = keep
            .iter()
            .enumerate()
            .map(|(r, &i)| keep[..=r].partition_point(|&j| j < self.first[i]))
            .collect();
        let mut out = SkylineMatrix::zeros(first);
        for (r, &i) in keep.iter().enumerate() {
            for c in out.first[r]..=r {
                let k = out.start[r] + c - out.first[r];
                out.data[k] = self.get(i, keep[c]);
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.get(i, j))
    }

    /// In-profile Cholesky factor A = L·Lᵀ.
    pub fn cholesky(&self) -> Result<SkylineCholesky> {
        let mut l = self.clone();
        for i in 0..l.dim() {
            let fi = l.first[i];
            let si = l.start[i];
            for j in fi..i {
                let fj = l.first[j];
                let lo = fi.max(fj);
                let sj = l.start[j];
                let mut dot = 0.0;
                for k in lo..j {
                    dot += l.data[si + k - fi] * l.data[sj + k - fj];
                }
                let ljj = l.data[l.start[j + 1] - 1];
                l.data[si + j - fi] = (l.data[si + j - fi] - dot) / ljj;
            }
            let row = &l.data[si..l.start[i + 1] - 1];
            let sq: f64 = row.iter().map(|v| v * v).sum();
            let d = l.data[l.start[i + 1] - 1] - sq;
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite(i));
            }
            let k = l.start[i + 1] - 1;
            l.data[k] = d.sqrt();
        }
        Ok(SkylineCholesky { factor: l })
    }
}

#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    factor: SkylineMatrix,
}

impl SkylineCholesky {
    /// Solves A·x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.factor;
        let n = l.dim();
        let mut x = b.to_vec();
        // forward: L·z = b
        for i in 0..n {
            let f = l.first[i];
            let row = l.row(i);
            let (off, diag) = row.split_at(row.len() - 1);
            let dot: f64 = off.iter().zip(&x[f..i]).map(|(a, b)| a * b).sum();
            x[i] = (x[i] - dot) / diag[0];
        }
        // backward: Lᵀ·x = z
        for i in (0..n).rev() {
            let f = l.first[i];
            let row = l.row(i);
            let (off, diag) = row.split_at(row.len() - 1);
            x[i] /= diag[0];
            let xi = x[i];
            for (a, &v) in off.iter().enumerate() {
                x[f + a] -= v * xi;
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SkylineMatrix {
        // tridiagonal-plus-one SPD matrix
        let n = 6;
        let first: Vec<usize> = (0..n).map(|i: usize| i.saturating_sub(2)).collect();
        let mut a = SkylineMatrix::zeros(first);
        for i in 0..n {
            a.add(i, i, 4.0 + i as f64);
            if i >= 1 {
                a.add(i, i - 1, -1.0);
            }
            if i >= 2 {
                a.add(i - 2, i, 0.5);
            }
        }
        a
    }

    #[test]
    fn matvec_matches_dense() {
        let a = sample();
        let x: Vec<f64> = (0..6).map(|i| (i as f64 * 0.7).sin()).collect();
        let dense = a.to_dense() * nalgebra::DVector::from_vec(x.clone());
        for (p, q) in a.matvec(&x).iter().zip(dense.iter()) {
            assert!((p - q).abs() < 1e-14);
        }
        assert_eq!(a.to_dense(), a.to_dense().transpose());
    }

    #[test]
    fn cholesky_solves() {
        let a = sample();
        let b: Vec<f64> = (0..6).map(|i| 1.0 + i as f64).collect();
        let x = a.cholesky().unwrap().solve(&b);
        for (p, q) in a.matvec(&x).iter().zip(&b) {
            assert!((p - q).abs() < 1e-13);
        }
    }

    #[test]
    fn indefinite_is_rejected() {
        let mut a = SkylineMatrix::zeros(vec![0, 0]);
        a.add(0, 0, 1.0);
        a.add(1, 0, 2.0);
        a.add(1, 1, 1.0);
        assert_eq!(a.cholesky().unwrap_err(), Error::NotPositiveDefinite(1));
    }

    #[test]
    fn submatrix_extracts_entries() {
        let a = sample();
        let keep = [0, 2, 3, 5];
        let s = a.submatrix(&keep);
        for (r, &i) in keep.iter().enumerate() {
            for (c, &j) in keep.iter().enumerate() {
                assert_eq!(s.get(r, c), a.get(i, j));
            }
        }
    }
}
