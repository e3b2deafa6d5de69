//! Dense complex linear algebra on top of `faer`.
//!
//! State vectors and sparse values use `num_complex::Complex64`; dense matrices
//! are `faer::Mat<c64>`. The two complex types share a layout but are distinct,
//! so conversions happen at the boundary of this module.

use crate::error::{Error, Result};
use crate::C64;
use faer::complex_native::c64;
use faer::{Col, Mat, Side};

pub type DenseMatrix = Mat<c64>;

#[inline]
pub fn to_faer(z: C64) -> c64 {
    c64::new(z.re, z.im)
}

#[inline]
pub fn from_faer(z: c64) -> C64 {
    C64::new(z.re, z.im)
}

pub fn zeros(n: usize, m: usize) -> DenseMatrix {
    Mat::zeros(n, m)
}

pub fn identity(n: usize) -> DenseMatrix {
    Mat::from_fn(n, n, |i, j| if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) })
}

pub fn from_rows(rows: &[Vec<C64>]) -> DenseMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    Mat::from_fn(n, m, |i, j| to_faer(rows[i][j]))
}

pub fn entry(a: &DenseMatrix, i: usize, j: usize) -> C64 {
    from_faer(a.read(i, j))
}

pub fn column(a: &DenseMatrix, j: usize) -> Vec<C64> {
    (0..a.nrows()).map(|i| from_faer(a.read(i, j))).collect()
}

pub fn matvec(a: &DenseMatrix, v: &[C64]) -> Vec<C64> {
    assert_eq!(a.ncols(), v.len(), "dimension mismatch in matvec");
    let x = Col::<c64>::from_fn(v.len(), |i| to_faer(v[i]));
    let y = a * &x;
    (0..y.nrows()).map(|i| from_faer(y.read(i))).collect()
}

pub fn adjoint(a: &DenseMatrix) -> DenseMatrix {
    a.adjoint().to_owned()
}

pub fn max_abs(a: &DenseMatrix) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a.read(i, j).abs());
        }
    }
    m
}

pub fn sub(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a - b
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    max_abs(&(a - b))
}

/// Largest singular value.
pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    a.singular_values().into_iter().fold(0.0, f64::max)
}

pub fn hermiticity_defect(a: &DenseMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

/// `max |U^dag U - I|`.
pub fn unitarity_defect(u: &DenseMatrix) -> f64 {
    let p = u.adjoint() * u;
    max_abs(&(&p - identity(u.nrows())))
}

pub fn commutator(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a * b - b * a
}

pub struct HermitianEigen {
    /// ascending
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

pub fn hermitian_eigen(a: &DenseMatrix) -> HermitianEigen {
    let e = a.selfadjoint_eigendecomposition(Side::Lower);
    let s = e.s().column_vector();
    let values = (0..a.nrows()).map(|i| s.read(i).re).collect();
    HermitianEigen { values, vectors: e.u().to_owned() }
}

pub fn hermitian_eigenvalues(a: &DenseMatrix) -> Vec<f64> {
    a.selfadjoint_eigenvalues(Side::Lower)
}

/// `exp(-i H t)` from a precomputed eigendecomposition of `H`.
pub fn exp_hermitian(eig: &HermitianEigen, t: f64) -> DenseMatrix {
    let v = &eig.vectors;
    let n = v.nrows();
    let phases: Vec<c64> = eig.values.iter().map(|&e| to_faer(C64::from_polar(1.0, -e * t))).collect();
    let scaled = Mat::from_fn(n, n, |i, j| v.read(i, j) * phases[j]);
    &scaled * v.adjoint()
}

/// `exp(-i H t)` for a dense Hermitian `H`.
pub fn expm_hermitian(h: &DenseMatrix, t: f64) -> DenseMatrix {
    exp_hermitian(&hermitian_eigen(h), t)
}

pub struct UnitaryEigen {
    pub eigenvalues: Vec<C64>,
    pub vectors: DenseMatrix,
}

const CLUSTER_GAP: f64 = 1e-6;
const SCALAR_TOL: f64 = 1e-9;
const MAX_REFINE_DEPTH: usize = 12;

/// Eigendecomposition of a unitary (more generally, normal) matrix with an
/// orthonormal eigenbasis.
///
/// A normal `U` commutes with every Hermitian combination
/// `K = (e^{i phi} U + e^{-i phi} U^dag) / 2`, so the eigenvectors of `K` are
/// eigenvectors of `U` wherever the spectrum of `K` is simple. Clusters of
/// (nearly) coincident `K` eigenvalues are re-split with a different `phi`
/// until `U` acts as a scalar on each cluster.
pub fn unitary_eigen(u: &DenseMatrix) -> Result<UnitaryEigen> {
    let n = u.nrows();
    if n != u.ncols() {
        return Err(Error::invalid("unitary_eigen needs a square matrix"));
    }
    let mut values = Vec::with_capacity(n);
    let mut cols: Vec<Col<c64>> = Vec::with_capacity(n);
    refine(u, None, 0, &mut values, &mut cols)?;
    let vectors = Mat::from_fn(n, n, |i, j| cols[j].read(i));
    Ok(UnitaryEigen { eigenvalues: values, vectors })
}

fn refine_angle(depth: usize) -> f64 {
    // golden-ratio sequence keeps successive angles well separated
    let g = 0.618_033_988_749_894_9;
    std::f64::consts::PI * ((0.37 + depth as f64 * g) % 1.0) * 2.0
}

fn refine(
    u: &DenseMatrix,
    basis: Option<&DenseMatrix>,
    depth: usize,
    values: &mut Vec<C64>,
    cols: &mut Vec<Col<c64>>,
) -> Result<()> {
    let restricted = match basis {
        Some(q) => q.adjoint() * u * q,
        None => u.clone(),
    };
    let m = restricted.nrows();
    let phase = to_faer(C64::from_polar(1.0, refine_angle(depth)));
    // inside a cluster, shift and rescale so that nearby eigenvalues separate
    let (shift, scale) = match basis {
        None => (c64::new(0.0, 0.0), 1.0),
        Some(_) => {
            let mean = (0..m).fold(c64::new(0.0, 0.0), |acc, i| acc + restricted.read(i, i)) * c64::new(1.0 / m as f64, 0.0);
            let mut spread = 0.0f64;
            for j in 0..m {
                for i in 0..m {
                    let d = if i == j { restricted.read(i, j) - mean } else { restricted.read(i, j) };
                    spread = spread.max(d.abs());
                }
            }
            (mean, spread.max(f64::MIN_POSITIVE))
        }
    };
    let k = Mat::from_fn(m, m, |i, j| {
        let (rij, rji) = (restricted.read(i, j), restricted.read(j, i));
        let (rij, rji) = if i == j { (rij - shift, rji - shift) } else { (rij, rji) };
        (rij * phase + rji.conj() * phase.conj()) * c64::new(0.5 / scale, 0.0)
    });
    let eig = hermitian_eigen(&k);
    let w = &eig.vectors;
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && eig.values[end] - eig.values[end - 1] < CLUSTER_GAP {
            end += 1;
        }
        let block = w.as_ref().subcols(start, end - start).to_owned();
        let sub = block.adjoint() * &restricted * &block;
        let size = end - start;
        let mean = (0..size).fold(c64::new(0.0, 0.0), |acc, i| acc + sub.read(i, i)) * c64::new(1.0 / size as f64, 0.0);
        let mut off = 0.0f64;
        for j in 0..size {
            for i in 0..size {
                let target = if i == j { mean } else { c64::new(0.0, 0.0) };
                off = off.max((sub.read(i, j) - target).abs());
            }
        }
        let lifted = match basis {
            Some(q) => q * &block,
            None => block,
        };
        if size == 1 || off < SCALAR_TOL {
            for j in 0..size {
                let diag = if size == 1 { sub.read(0, 0) } else { sub.read(j, j) };
                values.push(from_faer(diag));
                cols.push(lifted.col(j).to_owned());
            }
        } else if depth >= MAX_REFINE_DEPTH {
            return Err(Error::Numerical(format!(
                "unitary eigensolver could not split a cluster of size {size} (residual {off:.2e})"
            )));
        } else {
            refine(u, Some(&lifted), depth + 1, values, cols)?;
        }
        start = end;
    }
    Ok(())
}
