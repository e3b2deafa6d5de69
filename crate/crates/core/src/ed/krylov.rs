//! Lanczos propagation `exp(-i H t) v` for sparse Hermitian `H`.
//!
//! The step length adapts to the a-posteriori error estimate
//! `beta_m |e_m^T exp(-i T_m tau) e_1|`; the accumulated estimate over the whole
//! interval is kept below the requested tolerance.

use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::C64;
use faer::{Mat, Side};

const MAX_KRYLOV_DIM: usize = 40;
const BREAKDOWN: f64 = 1e-13;

#[derive(Debug, Clone, Copy)]
pub struct KrylovOptions {
    /// absolute error allowed for the whole interval (relative to `|v|`)
    pub tol: f64,
    pub max_dim: usize,
    pub max_substeps: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions { tol: 1e-11, max_dim: MAX_KRYLOV_DIM, max_substeps: 1_000_000 }
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

struct Lanczos {
    basis: Vec<Vec<C64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// `beta_m` past the last basis vector; zero on invariant-subspace breakdown
    residual: f64,
}

fn lanczos(h: &SparseOperator, start: &[C64], max_dim: usize) -> Lanczos {
    let n0 = norm(start);
    let mut basis = vec![start.iter().map(|x| x / n0).collect::<Vec<_>>()];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut w = vec![C64::new(0.0, 0.0); start.len()];
    let m_cap = max_dim.min(start.len());
    loop {
        let j = basis.len() - 1;
        h.apply_into(&basis[j], &mut w);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        // full reorthogonalisation, twice
        for _ in 0..2 {
            for q in &basis {
                let p = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= p * qi;
                }
            }
        }
        let b = norm(&w);
        if b < BREAKDOWN * (1.0 + a.abs()) || basis.len() == m_cap {
            return Lanczos { basis, alpha, beta, residual: if basis_len_full(b) { b } else { 0.0 } };
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
}

#[inline]
fn basis_len_full(b: f64) -> bool {
    b >= BREAKDOWN
}

/// `exp(-i T tau) e_1` for the tridiagonal `T` together with the error estimate.
fn small_exp(l: &Lanczos, tau: f64) -> (Vec<C64>, f64) {
    let m = l.alpha.len();
    let t = Mat::<f64>::from_fn(m, m, |i, j| {
        if i == j {
            l.alpha[i]
        } else if i + 1 == j {
            l.beta[i]
        } else if j + 1 == i {
            l.beta[j]
        } else {
            0.0
        }
    });
    let e = t.selfadjoint_eigendecomposition(Side::Lower);
    let s = e.s().column_vector();
    let u = e.u();
    let y: Vec<C64> = (0..m)
        .map(|i| {
            (0..m)
                .map(|k| C64::from_polar(1.0, -s.read(k) * tau) * (u.read(i, k) * u.read(0, k)))
                .sum()
        })
        .collect();
    let err = l.residual * y[m - 1].norm();
    (y, err)
}

/// `exp(-i h t) v`.
pub fn expm_apply(h: &SparseOperator, v: &[C64], t: f64, opts: KrylovOptions) -> Result<Vec<C64>> {
    let mut w = v.to_vec();
    let scale = norm(v);
    if scale == 0.0 || t == 0.0 {
        return Ok(w);
    }
    let total = t.abs();
    let sign = t.signum();
    let hnorm = h.norm_bound().max(1e-300);
    let mut tau = (10.0 / hnorm).min(total);
    let mut done = 0.0;
    let mut steps = 0usize;
    while done < total * (1.0 - 1e-15) {
        let l = lanczos(h, &w, opts.max_dim);
        let wn = norm(&w);
        loop {
            steps += 1;
            if steps > opts.max_substeps {
                return Err(Error::NonConvergence { what: "Krylov propagation", iterations: steps, residual: tau });
            }
            let step = tau.min(total - done);
            let (y, err) = small_exp(&l, sign * step);
            if err * wn <= opts.tol * scale * step / total || l.residual == 0.0 {
                let mut next = vec![C64::new(0.0, 0.0); w.len()];
                for (q, c) in l.basis.iter().zip(&y) {
                    for (ni, qi) in next.iter_mut().zip(q) {
                        *ni += c * qi * wn;
                    }
                }
                w = next;
                done += step;
                tau = if l.residual == 0.0 { total } else { step * 1.3 };
                break;
            }
            tau = step * 0.5;
            if tau < 1e-14 * total {
                return Err(Error::NonConvergence { what: "Krylov step control", iterations: steps, residual: err });
            }
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sparse_hermitian(n: usize, seed: u64) -> SparseOperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, C64::new(rng.gen::<f64>() * 4.0 - 2.0, 0.0)));
            for _ in 0..3 {
                let j = rng.gen_range(0..n);
                if j != i {
                    let v = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                    t.push((i, j, v));
                    t.push((j, i, v.conj()));
                }
            }
        }
        SparseOperator::from_triplets(n, t)
    }

    #[test]
    fn matches_dense_exponential() {
        let h = random_sparse_hermitian(200, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<C64> = (0..200).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        let nv = norm(&v);
        let v: Vec<C64> = v.iter().map(|x| x / nv).collect();
        let dense = linalg::matvec(&linalg::expm_hermitian(&h.to_dense(), 3.7), &v);
        let kry = expm_apply(&h, &v, 3.7, KrylovOptions::default()).unwrap();
        let err = dense.iter().zip(&kry).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert!((norm(&kry) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn backwards_in_time_inverts() {
        let h = random_sparse_hermitian(50, 11);
        let v: Vec<C64> = (0..50).map(|i| C64::new((i as f64).sin(), 0.0)).collect();
        let f = expm_apply(&h, &v, 2.0, KrylovOptions::default()).unwrap();
        let b = expm_apply(&h, &f, -2.0, KrylovOptions::default()).unwrap();
        let err = v.iter().zip(&b).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn tiny_space_breaks_down_exactly() {
        let h = SparseOperator::diagonal(&[1.0, -2.0]);
        let v = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let w = expm_apply(&h, &v, 0.5, KrylovOptions::default()).unwrap();
        assert!((w[0] - C64::from_polar(1.0, -0.5)).norm() < 1e-13);
        assert!((w[1] - C64::from_polar(1.0, 1.0)).norm() < 1e-13);
    }
}
