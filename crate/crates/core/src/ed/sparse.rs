use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix};
use crate::C64;
use faer::complex_native::c64;
use faer::Mat;

/// Compressed-row complex matrix.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseOperator {
    /// Duplicate `(row, col)` entries are summed; exact zeros are dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside dimension {dim}");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseOperator { dim, row_ptr, cols, vals }.pruned()
    }

    pub fn zero(dim: usize) -> Self {
        SparseOperator { dim, row_ptr: vec![0; dim + 1], cols: vec![], vals: vec![] }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let t = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, C64::new(v, 0.0)))
            .collect();
        Self::from_triplets(values.len(), t)
    }

    fn pruned(self) -> Self {
        if self.vals.iter().all(|v| *v != C64::new(0.0, 0.0)) {
            return self;
        }
        let t = self.entries().filter(|e| e.2 != C64::new(0.0, 0.0)).collect();
        Self::from_triplets(self.dim, t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.cols[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.cols[a..b].binary_search(&c) {
            Ok(k) => self.vals[a + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for r in 0..self.dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[r] = acc;
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        self.apply_into(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = Mat::<c64>::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m.write(r, c, linalg::to_faer(v));
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let t = self.entries().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.dim, t)
    }

    pub fn scaled(&self, s: C64) -> Self {
        let mut out = self.clone();
        for v in out.vals.iter_mut() {
            *v *= s;
        }
        out.pruned()
    }

    /// `self + s * other`
    pub fn add_scaled(&self, other: &Self, s: C64) -> Self {
        assert_eq!(self.dim, other.dim);
        let t = self
            .entries()
            .chain(other.entries().map(|(r, c, v)| (r, c, v * s)))
            .collect();
        Self::from_triplets(self.dim, t)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, C64::new(-1.0, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut t = Vec::new();
        let mut acc: Vec<C64> = vec![C64::new(0.0, 0.0); self.dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.dim];
        for r in 0..self.dim {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            for &c in &touched {
                t.push((r, c, acc[c]));
                acc[c] = C64::new(0.0, 0.0);
                mark[c] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.dim, t)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `[self, diag(q)]` without forming the products.
    pub fn commutator_with_diagonal(&self, q: &[f64]) -> Self {
        let t = self
            .entries()
            .map(|(r, c, v)| (r, c, v * (q[c] - q[r])))
            .collect();
        Self::from_triplets(self.dim, t)
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn ensure_hermitian(&self, tol: f64, context: &str) -> Result<()> {
        let deviation = self.hermiticity_defect();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation, context: context.to_string() });
        }
        Ok(())
    }

    /// Max absolute row sum; an upper bound on the spectral norm of a Hermitian matrix.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn diagonal_values(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }

    pub fn expectation(&self, psi: &[C64]) -> C64 {
        let h = self.apply(psi);
        psi.iter().zip(&h).map(|(a, b)| a.conj() * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let m = SparseOperator::from_triplets(
            3,
            vec![(0, 1, c(1.0, 0.0)), (0, 1, c(2.0, 1.0)), (2, 2, c(0.0, 0.0)), (1, 0, c(3.0, -1.0))],
        );
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 1), c(3.0, 1.0));
        assert!(m.is_hermitian(1e-14));
    }

    #[test]
    fn product_matches_dense() {
        let a = SparseOperator::from_triplets(3, vec![(0, 1, c(1.0, 2.0)), (1, 2, c(-1.0, 0.5)), (2, 0, c(0.3, 0.0))]);
        let b = SparseOperator::from_triplets(3, vec![(1, 1, c(2.0, 0.0)), (2, 1, c(0.0, 1.0)), (0, 2, c(1.0, 1.0))]);
        let p = a.mul(&b).to_dense();
        let q = &a.to_dense() * &b.to_dense();
        assert!(linalg::max_abs_diff(&p, &q) < 1e-14);
        let comm = a.commutator(&b).to_dense();
        assert!(linalg::max_abs_diff(&comm, &linalg::commutator(&a.to_dense(), &b.to_dense())) < 1e-14);
    }

    #[test]
    fn diagonal_commutator_shortcut() {
        let a = SparseOperator::from_triplets(3, vec![(0, 1, c(1.0, 2.0)), (1, 0, c(1.0, -2.0)), (2, 2, c(5.0, 0.0))]);
        let q = [1.0, -2.0, 4.0];
        let direct = a.commutator(&SparseOperator::diagonal(&q));
        let fast = a.commutator_with_diagonal(&q);
        assert!(direct.sub(&fast).max_abs() < 1e-14);
    }
}
