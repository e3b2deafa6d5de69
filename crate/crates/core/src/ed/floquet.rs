use super::basis::{Constraint, FockBasis};
use super::krylov::{expm_apply, KrylovOptions};
use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix};
use crate::C64;
use faer::complex_native::c64;
use faer::Mat;

/// Largest dimension for which propagators are stored densely.
pub const DENSE_LIMIT: usize = 4096;
pub const HERMITIAN_TOL: f64 = 1e-12;

/// One step of a stroboscopic propagator.
#[derive(Debug, Clone)]
pub enum Factor {
    Dense(DenseMatrix),
    /// `exp(-i h dt)`, applied with Krylov
    Exp { h: SparseOperator, dt: f64 },
    /// diagonal unitary given by its entries
    Diagonal(Vec<C64>),
    /// `prod_j exp(-i angle sigma^x_j)` on the full spin-1/2 space of `sites` spins
    SiteRotationX { sites: usize, angle: f64 },
}

impl Factor {
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        Ok(match self {
            Factor::Dense(m) => linalg::matvec(m, v),
            Factor::Exp { h, dt } => expm_apply(h, v, *dt, KrylovOptions::default())?,
            Factor::Diagonal(d) => v.iter().zip(d).map(|(a, b)| a * b).collect(),
            Factor::SiteRotationX { sites, angle } => {
                let mut w = v.to_vec();
                rotate_x(&mut w, *sites, *angle);
                w
            }
        })
    }
}

fn rotate_x(w: &mut [C64], sites: usize, angle: f64) {
    let (c, s) = (C64::new(angle.cos(), 0.0), C64::new(0.0, -angle.sin()));
    for j in 0..sites {
        let bit = 1usize << j;
        for a in 0..w.len() {
            if a & bit == 0 {
                let b = a | bit;
                let (x, y) = (w[a], w[b]);
                w[a] = c * x + s * y;
                w[b] = s * x + c * y;
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Dense(DenseMatrix),
    /// `factors[0]` acts first
    Product(Vec<Factor>),
}

/// Single-period propagator `U(T, 0)`.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    dim: usize,
    period: f64,
    repr: Repr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Path {
    /// dense at or below [`DENSE_LIMIT`], action-only above
    #[default]
    Auto,
    Dense,
    ActionOnly,
}

impl FloquetOperator {
    pub fn from_dense(u: DenseMatrix, period: f64) -> Result<Self> {
        if u.nrows() != u.ncols() {
            return Err(Error::invalid("propagator must be square"));
        }
        Ok(FloquetOperator { dim: u.nrows(), period, repr: Repr::Dense(u) })
    }

    /// Composition of factors, `factors[0]` acting first.
    pub fn from_factors(dim: usize, period: f64, factors: Vec<Factor>, path: Path) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::invalid("period must be positive"));
        }
        let op = FloquetOperator { dim, period, repr: Repr::Product(factors) };
        let dense = match path {
            Path::Auto => dim <= DENSE_LIMIT,
            Path::Dense => true,
            Path::ActionOnly => false,
        };
        if dense {
            if dim > DENSE_LIMIT {
                return Err(Error::invalid(format!("dense propagator requested for dim {dim} > {DENSE_LIMIT}")));
            }
            let m = op.to_dense()?;
            return Ok(FloquetOperator { dim, period, repr: Repr::Dense(m) });
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn dense(&self) -> Option<&DenseMatrix> {
        match &self.repr {
            Repr::Dense(m) => Some(m),
            Repr::Product(_) => None,
        }
    }

    pub fn is_dense(&self) -> bool {
        self.dense().is_some()
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::invalid(format!("state has length {} but propagator acts on {}", v.len(), self.dim)));
        }
        match &self.repr {
            Repr::Dense(m) => Ok(linalg::matvec(m, v)),
            Repr::Product(fs) => {
                let mut w = v.to_vec();
                for f in fs {
                    w = f.apply(&w)?;
                }
                let (n0, n1) = (norm(v), norm(&w));
                if (n1 - n0).abs() > 1e-8 * n0.max(1.0) {
                    return Err(Error::BadNorm { norm: n1 / n0 });
                }
                Ok(w)
            }
        }
    }

    /// `U^n v`.
    pub fn apply_n(&self, v: &[C64], n: usize) -> Result<Vec<C64>> {
        let mut w = v.to_vec();
        for _ in 0..n {
            w = self.apply(&w)?;
        }
        Ok(w)
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        match &self.repr {
            Repr::Dense(m) => Ok(m.clone()),
            Repr::Product(fs) => {
                let n = self.dim;
                if n > DENSE_LIMIT {
                    return Err(Error::invalid(format!("dim {n} exceeds the dense limit {DENSE_LIMIT}")));
                }
                let mut acc = linalg::identity(n);
                for f in fs {
                    acc = match f {
                        Factor::Dense(m) => m * &acc,
                        Factor::Exp { h, dt } => &linalg::expm_hermitian(&h.to_dense(), *dt) * &acc,
                        Factor::Diagonal(d) => {
                            Mat::from_fn(n, n, |i, j| acc.read(i, j) * linalg::to_faer(d[i]))
                        }
                        Factor::SiteRotationX { .. } => {
                            let mut out = Mat::<c64>::zeros(n, n);
                            for j in 0..n {
                                let col = f.apply(&linalg::column(&acc, j))?;
                                for (i, z) in col.into_iter().enumerate() {
                                    out.write(i, j, linalg::to_faer(z));
                                }
                            }
                            out
                        }
                    };
                }
                Ok(acc)
            }
        }
    }

    pub fn unitarity_defect(&self) -> Option<f64> {
        self.dense().map(linalg::unitarity_defect)
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn check_hermitian(h: &SparseOperator, what: &str) -> Result<()> {
    h.ensure_hermitian(HERMITIAN_TOL * h.max_abs().max(1.0), what)
}

/// `U(T,0) = exp(-i H_second T/2) exp(-i H_first T/2)`.
pub fn floquet_squarepulse(
    h_first: &SparseOperator,
    h_second: &SparseOperator,
    period: f64,
    path: Path,
) -> Result<FloquetOperator> {
    if h_first.dim() != h_second.dim() {
        return Err(Error::invalid("square-pulse halves act on different spaces"));
    }
    check_hermitian(h_first, "first half-period Hamiltonian")?;
    check_hermitian(h_second, "second half-period Hamiltonian")?;
    let dim = h_first.dim();
    let dense = match path {
        Path::Auto => dim <= DENSE_LIMIT,
        Path::Dense => true,
        Path::ActionOnly => false,
    };
    if dense {
        if dim > DENSE_LIMIT {
            return Err(Error::invalid(format!("dense propagator requested for dim {dim} > {DENSE_LIMIT}")));
        }
        let u1 = linalg::expm_hermitian(&h_first.to_dense(), 0.5 * period);
        let u2 = linalg::expm_hermitian(&h_second.to_dense(), 0.5 * period);
        return FloquetOperator::from_dense(&u2 * &u1, period);
    }
    FloquetOperator::from_factors(
        dim,
        period,
        vec![
            Factor::Exp { h: h_first.clone(), dt: 0.5 * period },
            Factor::Exp { h: h_second.clone(), dt: 0.5 * period },
        ],
        Path::ActionOnly,
    )
}

/// `exp(-i theta K)`; diagonal `K` becomes a phase factor.
pub fn kick_unitary(k: &SparseOperator, theta: f64) -> Result<Factor> {
    check_hermitian(k, "kick generator")?;
    if k.is_diagonal() {
        let d = k.diagonal_values().iter().map(|e| C64::from_polar(1.0, -theta * e.re)).collect();
        return Ok(Factor::Diagonal(d));
    }
    if k.dim() <= DENSE_LIMIT {
        return Ok(Factor::Dense(linalg::expm_hermitian(&k.to_dense(), theta)));
    }
    Ok(Factor::Exp { h: k.clone(), dt: theta })
}

/// `prod_j exp(-i theta sigma^x_j)` applied site-wise; needs the full spin-1/2 basis.
pub fn x_kick(basis: &FockBasis, theta: f64) -> Result<Factor> {
    if basis.constraint() != Constraint::FullSpinHalf {
        return Err(Error::invalid("site-wise x rotation needs the full spin-1/2 basis"));
    }
    Ok(Factor::SiteRotationX { sites: basis.sites(), angle: theta })
}
