//! Slow reference constructions on the full tensor-product space.

#![allow(dead_code)]

use floquet_core::hsf::{Boundary, HsfParams};
use floquet_core::scars::XyParams;
use floquet_core::{FockBasis, SparseOperator, C64};

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Row-major dense complex matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<C64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Dense { n, a: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(d: &[C64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { ZERO })
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let n = self.n;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += x * o.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Dense) -> Dense {
        Dense { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, s: C64) -> Dense {
        Dense { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn adjoint(&self) -> Dense {
        Dense::from_fn(self.n, |i, j| self.at(j, i).conj())
    }

    /// Rows and columns picked by `idx`.
    pub fn restrict(&self, idx: &[usize]) -> Dense {
        Dense::from_fn(idx.len(), |i, j| self.at(idx[i], idx[j]))
    }

    pub fn max_diff_sparse(&self, s: &SparseOperator) -> f64 {
        assert_eq!(self.n, s.dim());
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max((self.at(i, j) - s.get(i, j)).norm());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `op` acting on `site` of a chain of `sites` local spaces of size `d`, site 0 least significant.
pub fn site_op(op: &[[C64; 3]; 3], d: usize, site: usize, sites: usize) -> Dense {
    let n = d.pow(sites as u32);
    let stride = d.pow(site as u32);
    Dense::from_fn(n, |i, j| {
        let (li, lj) = ((i / stride) % d, (j / stride) % d);
        if i - li * stride != j - lj * stride {
            return ZERO;
        }
        op[li][lj]
    })
}

pub fn qubit(op: [[f64; 2]; 2]) -> [[C64; 3]; 3] {
    let mut m = [[ZERO; 3]; 3];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = C64::new(op[i][j], 0.0);
        }
    }
    m
}

/// `|1><0|` on a qubit.
pub fn raise(site: usize, sites: usize) -> Dense {
    site_op(&qubit([[0.0, 0.0], [1.0, 0.0]]), 2, site, sites)
}

pub fn number(site: usize, sites: usize) -> Dense {
    site_op(&qubit([[0.0, 0.0], [0.0, 1.0]]), 2, site, sites)
}

pub fn pauli_z(site: usize, sites: usize) -> Dense {
    site_op(&qubit([[-1.0, 0.0], [0.0, 1.0]]), 2, site, sites)
}

pub fn pauli_x(site: usize, sites: usize) -> Dense {
    site_op(&qubit([[0.0, 1.0], [1.0, 0.0]]), 2, site, sites)
}

/// Projector on the ground (empty) state.
pub fn ground(site: usize, sites: usize) -> Dense {
    site_op(&qubit([[1.0, 0.0], [0.0, 0.0]]), 2, site, sites)
}

/// Fermion annihilator with the string `prod_{i<j} (1 - 2 n_i)`.
pub fn annihilate(j: usize, sites: usize) -> Dense {
    let mut c = raise(j, sites).adjoint();
    for i in 0..j {
        c = pauli_z(i, sites).scale(-ONE).mul(&c);
    }
    c
}

/// Indices into the full qubit space of each basis configuration.
pub fn qubit_indices(basis: &FockBasis) -> Vec<usize> {
    basis.states().iter().map(|&s| s as usize).collect()
}

/// Base-3 index of each spin-one configuration.
pub fn trit_indices(basis: &FockBasis) -> Vec<usize> {
    basis
        .states()
        .iter()
        .map(|&s| (0..basis.sites()).rev().fold(0usize, |acc, i| acc * 3 + basis.local(s, i) as usize))
        .collect()
}

/// Entropy of sites `[0, cut)` for a state given on the full product space of local dimension `d`.
pub fn dense_entropy(psi: &[C64], d: usize, sites: usize, cut: usize) -> f64 {
    let da = d.pow(cut as u32);
    let db = d.pow((sites - cut) as u32);
    let rho = Dense::from_fn(da, |a, b| (0..db).map(|r| psi[a + r * da] * psi[b + r * da].conj()).sum());
    hermitian_eigenvalues(&rho).into_iter().filter(|&p| p > 1e-300).map(|p| -p * p.ln()).sum()
}

/// Eigenvalues of a Hermitian matrix by complex Jacobi rotations.
pub fn hermitian_eigenvalues(m: &Dense) -> Vec<f64> {
    let n = m.n;
    let mut a = m.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a.at(i, j).norm_sqr()).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.at(p, q);
                if apq.norm() < 1e-300 {
                    continue;
                }
                let (app, aqq) = (a.at(p, p).re, a.at(q, q).re);
                let phase = apq / apq.norm();
                let theta = 0.5 * (2.0 * apq.norm()).atan2(aqq - app);
                let (c, s) = (theta.cos(), theta.sin());
                // columns p, q of A G and rows of G^dag A G
                for k in 0..n {
                    let (akp, akq) = (a.at(k, p), a.at(k, q));
                    a.a[k * n + p] = akp * c - akq * s * phase.conj();
                    a.a[k * n + q] = akp * s * phase + akq * c;
                }
                for k in 0..n {
                    let (apk, aqk) = (a.at(p, k), a.at(q, k));
                    a.a[p * n + k] = apk * c - aqk * s * phase;
                    a.a[q * n + k] = apk * s * phase.conj() + aqk * c;
                }
            }
        }
    }
    let mut e: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
    e.sort_by(f64::total_cmp);
    e
}

pub fn normalized(v: Vec<C64>) -> Vec<C64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub fn fermion_chain(p: &HsfParams, v: f64, hop: impl Fn(usize) -> Dense) -> Dense {
    let l = p.l;
    let n = 1 << l;
    let bonds: Vec<usize> = match p.bc {
        Boundary::Pbc => (0..l).collect(),
        Boundary::Obc => (0..l - 1).collect(),
    };
    let mut h = Dense::zeros(n);
    for &j in &bonds {
        let k = (j + 1) % l;
        let cdag_c = annihilate(j, l).adjoint().mul(&annihilate(k, l));
        let t = hop(j).mul(&cdag_c).scale(C64::new(-p.j, 0.0));
        h = h.add(&t).add(&t.adjoint());
        h = h.add(&number(j, l).mul(&number(k, l)).scale(C64::new(p.v0 + v, 0.0)));
    }
    for j in 0..l {
        let far = j + 2;
        if far < l || p.bc == Boundary::Pbc {
            h = h.add(&number(j, l).mul(&number(far % l, l)).scale(C64::new(p.v2, 0.0)));
        }
    }
    h
}

/// Diagonal `A_j = n_{j+2} - n_{j-1}` with missing sites empty.
pub fn a_operator(p: &HsfParams, j: usize) -> Vec<i32> {
    let l = p.l as isize;
    let occ = |z: usize, s: isize| -> i32 {
        let s = match p.bc {
            Boundary::Pbc => s.rem_euclid(l),
            Boundary::Obc if s < 0 || s >= l => return 0,
            Boundary::Obc => s,
        };
        ((z >> s) & 1) as i32
    };
    (0..1usize << p.l).map(|z| occ(z, j as isize + 2) - occ(z, j as isize - 1)).collect()
}

pub fn spin_one_raise() -> [[C64; 3]; 3] {
    // (S^x + i S^y)/2 in the (m = -1, 0, +1) basis
    let r = C64::new(std::f64::consts::SQRT_2 / 2.0, 0.0);
    [[ZERO, ZERO, ZERO], [r, ZERO, ZERO], [ZERO, r, ZERO]]
}

pub fn spin_one_z() -> [[C64; 3]; 3] {
    [[-ONE, ZERO, ZERO], [ZERO, ZERO, ZERO], [ZERO, ZERO, ONE]]
}

pub fn xy_reference(p: &XyParams) -> Dense {
    let l = p.l;
    let n = 3usize.pow(l as u32);
    let mut h = Dense::zeros(n);
    for i in 0..l {
        h = h.add(&site_op(&spin_one_z(), 3, i, l).scale(C64::new(-p.b0, 0.0)));
    }
    for i in 0..l - 1 {
        let sp = site_op(&spin_one_raise(), 3, i, l);
        let sm = site_op(&spin_one_raise(), 3, i + 1, l).adjoint();
        let t = sp.mul(&sm).scale(C64::new(-p.j, 0.0));
        h = h.add(&t).add(&t.adjoint());
    }
    h
}

pub fn dressed_raise(j: usize, l: usize, pbc: bool) -> Dense {
    let mut op = raise(j, l);
    let left = if j > 0 { Some(j - 1) } else if pbc { Some(l - 1) } else { None };
    let right = if j + 1 < l { Some(j + 1) } else if pbc { Some(0) } else { None };
    for k in [left, right].into_iter().flatten() {
        op = ground(k, l).mul(&op).mul(&ground(k, l));
    }
    op
}

pub fn pxp_reference(l: usize, omega: f64, lambda: f64, pbc: bool) -> Dense {
    let mut h = Dense::zeros(1 << l);
    for j in 0..l {
        let up = dressed_raise(j, l, pbc);
        h = h.add(&up.add(&up.adjoint()).scale(C64::new(omega, 0.0)));
        h = h.add(&pauli_z(j, l).scale(C64::new(-lambda, 0.0)));
    }
    h
}

/// First-order fermion Hamiltonian with the `A_j`-dependent hopping.
pub fn hf1_reference(p: &HsfParams) -> Dense {
    let g = p.gamma1();
    fermion_chain(p, 0.0, |j| {
        let d: Vec<C64> = a_operator(p, j)
            .into_iter()
            .map(|a| {
                let a2 = (a * a) as f64;
                C64::new(1.0 - a2, 0.0) + C64::from_polar(g.sin() / g, g * a as f64) * a2
            })
            .collect();
        Dense::diag(&d)
    })
}
