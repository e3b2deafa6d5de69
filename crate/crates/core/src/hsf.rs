//! Square-pulse driven spinless fermion chain and its constrained-hopping
//! first-order Floquet Hamiltonian.

use crate::drive::sinc;
use crate::ed::{
    entanglement_entropy, floquet_squarepulse, page_value, quasienergies, Constraint, FloquetOperator, FockBasis,
    Path, SparseOperator,
};
use crate::error::{Error, Result};
use crate::linalg;
use crate::series::TimeSeries;
use crate::C64;
use faer::complex_native::c64;
use faer::Mat;
use std::collections::VecDeque;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Pbc,
    Obc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsfParams {
    pub l: usize,
    pub n: usize,
    pub j: f64,
    pub v0: f64,
    pub v2: f64,
    pub v1: f64,
    pub omega: f64,
    pub bc: Boundary,
}

impl HsfParams {
    /// Half filling, `J = 1`, `V_0 = 1`, `V_2 = 0.5`.
    pub fn new(l: usize, v1: f64, omega: f64, bc: Boundary) -> Result<Self> {
        let p = HsfParams { l, n: l / 2, j: 1.0, v0: 1.0, v2: 0.5, v1, omega, bc };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 4 {
            return Err(Error::invalid(format!("chain needs L >= 4, got {}", self.l)));
        }
        if self.n > self.l {
            return Err(Error::invalid("particle number exceeds L"));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::invalid("omega must be positive"));
        }
        if !(self.v1 >= 0.0 && self.v1.is_finite()) {
            return Err(Error::invalid("V_1 must be >= 0"));
        }
        if ![self.j, self.v0, self.v2].iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("couplings must be finite"));
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// `gamma_1 = V_1 T / 4`
    pub fn gamma1(&self) -> f64 {
        self.v1 * self.period() / 4.0
    }

    pub fn is_special(&self) -> bool {
        let r = self.gamma1() / PI;
        r >= 0.5 && (r - r.round()).abs() < 1e-9
    }

    pub fn basis(&self) -> Result<FockBasis> {
        FockBasis::build(self.l, Constraint::NumberSector(self.n))
    }

    fn bonds(&self) -> Vec<(usize, usize)> {
        let last = match self.bc {
            Boundary::Pbc => self.l,
            Boundary::Obc => self.l - 1,
        };
        (0..last).map(|j| (j, (j + 1) % self.l)).collect()
    }

    /// Site `j + d` or `None` past an open edge.
    fn site(&self, j: usize, d: isize) -> Option<usize> {
        let s = j as isize + d;
        match self.bc {
            Boundary::Pbc => Some(s.rem_euclid(self.l as isize) as usize),
            Boundary::Obc => (0..self.l as isize).contains(&s).then_some(s as usize),
        }
    }
}

#[inline]
fn occ(s: u64, j: usize) -> u64 {
    (s >> j) & 1
}

/// Sign of `c_a^dag c_b` acting on `s` (b occupied, a empty) in site-ordered Jordan-Wigner.
#[inline]
fn hop_sign(s: u64, a: usize, b: usize) -> f64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let between = if hi > lo + 1 { (s >> (lo + 1)) & ((1u64 << (hi - lo - 1)) - 1) } else { 0 };
    if between.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_basis(p: &HsfParams, basis: &FockBasis) -> Result<()> {
    if basis.constraint() != Constraint::NumberSector(p.n) || basis.sites() != p.l {
        return Err(Error::invalid(format!(
            "expected number sector N={} on {} sites, got {} on {}",
            p.n,
            p.l,
            basis.constraint(),
            basis.sites()
        )));
    }
    Ok(())
}

/// `sum_j n_j [(V_0 + v) n_{j+1} + V_2 n_{j+2}]` on one configuration.
fn interaction(p: &HsfParams, s: u64, v: f64) -> f64 {
    let mut e = 0.0;
    for (a, b) in p.bonds() {
        e += (p.v0 + v) * (occ(s, a) * occ(s, b)) as f64;
    }
    for j in 0..p.l {
        if let Some(k) = p.site(j, 2) {
            e += p.v2 * (occ(s, j) * occ(s, k)) as f64;
        }
    }
    e
}

/// Assembles diagonal `diag(s)` plus hopping `-J coef(s, a, b) c_a^dag c_b + h.c.` over all bonds.
fn assemble(
    p: &HsfParams,
    basis: &FockBasis,
    diag: impl Fn(u64) -> f64,
    coef: impl Fn(u64, usize, usize) -> C64,
) -> Result<SparseOperator> {
    let mut t = Vec::with_capacity(basis.dim() * (2 * p.l + 1));
    let bonds = p.bonds();
    for (i, &s) in basis.states().iter().enumerate() {
        t.push((i, i, C64::new(diag(s), 0.0)));
        for &(a, b) in &bonds {
            // c_a^dag c_b and its conjugate c_b^dag c_a
            for (to, from, forward) in [(a, b, true), (b, a, false)] {
                if occ(s, from) == 1 && occ(s, to) == 0 {
                    let s2 = s ^ (1 << from) ^ (1 << to);
                    let r = basis.index(s2).ok_or_else(|| {
                        Error::Numerical(format!("hop left the number sector from {}", basis.bitstring(s)))
                    })?;
                    let c = coef(s, a, b);
                    let c = if forward { c } else { c.conj() };
                    t.push((r, i, c * (-p.j * hop_sign(s, to, from))));
                }
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), t))
}

/// `-J sum (c_j^dag c_{j+1} + h.c.) + sum n_j [(V_0 + v) n_{j+1} + V_2 n_{j+2}]`
pub fn hsf_static_hamiltonian(p: &HsfParams, basis: &FockBasis, v: f64) -> Result<SparseOperator> {
    p.validate()?;
    check_basis(p, basis)?;
    let h = assemble(p, basis, |s| interaction(p, s, v), |_, _, _| C64::new(1.0, 0.0))?;
    h.ensure_hermitian(1e-12, "static fermion chain")?;
    Ok(h)
}

/// `U(T,0) = exp(-i H[+V_1] T/2) exp(-i H[-V_1] T/2)`
pub fn hsf_floquet(p: &HsfParams, basis: &FockBasis, path: Path) -> Result<FloquetOperator> {
    let first = hsf_static_hamiltonian(p, basis, -p.v1)?;
    let second = hsf_static_hamiltonian(p, basis, p.v1)?;
    floquet_squarepulse(&first, &second, p.period(), path)
}

/// `A_j = n_{j+2} - n_{j-1}` for the bond `(j, j+1)`; missing sites count as empty.
fn a_value(p: &HsfParams, s: u64, j: usize) -> i32 {
    let n = |d: isize| p.site(j, d).map_or(0, |k| occ(s, k) as i32);
    n(2) - n(-1)
}

/// `alpha(gamma_1) = sin(gamma_1)/gamma_1 exp(i gamma_1 A)`
pub fn alpha(gamma1: f64, a: i32) -> C64 {
    C64::from_polar(sinc(gamma1), gamma1 * a as f64)
}

/// First-order Floquet Hamiltonian with the `A_j`-dependent constrained hopping.
pub fn hsf_hf1(p: &HsfParams, basis: &FockBasis) -> Result<SparseOperator> {
    p.validate()?;
    check_basis(p, basis)?;
    let g = p.gamma1();
    let h = assemble(
        p,
        basis,
        |s| interaction(p, s, 0.0),
        |s, a, _| {
            let av = a_value(p, s, a);
            if av == 0 {
                C64::new(1.0, 0.0)
            } else {
                alpha(g, av)
            }
        },
    )?;
    h.ensure_hermitian(1e-10, "first-order Floquet Hamiltonian")?;
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conserved {
    /// `sum n_j n_{j+1}`
    Nd,
    /// `sum (-1)^j n_j n_{j+1}`
    NdStaggered,
    N,
}

pub fn conserved_diagonal(p: &HsfParams, basis: &FockBasis, q: Conserved) -> Vec<f64> {
    basis
        .states()
        .iter()
        .map(|&s| match q {
            Conserved::N => s.count_ones() as f64,
            Conserved::Nd => p.bonds().iter().map(|&(a, b)| (occ(s, a) * occ(s, b)) as f64).sum(),
            Conserved::NdStaggered => p
                .bonds()
                .iter()
                .map(|&(a, b)| if a % 2 == 0 { 1.0 } else { -1.0 } * (occ(s, a) * occ(s, b)) as f64)
                .sum(),
        })
        .collect()
}

/// `max |[op, Q]|`
pub fn conservation_check(op: &SparseOperator, p: &HsfParams, basis: &FockBasis, q: Conserved) -> f64 {
    op.commutator_with_diagonal(&conserved_diagonal(p, basis, q)).max_abs()
}

#[derive(Debug, Clone)]
pub struct FragmentDecomposition {
    /// basis indices of each fragment, ascending; fragments ordered by their smallest member
    pub fragments: Vec<Vec<usize>>,
    pub total: usize,
}

impl FragmentDecomposition {
    pub fn count(&self) -> usize {
        self.fragments.len()
    }

    pub fn largest(&self) -> usize {
        self.fragments.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `D_L / D_t`
    pub fn ratio(&self) -> f64 {
        self.largest() as f64 / self.total as f64
    }

    pub fn fragment_of(&self, index: usize) -> Option<usize> {
        self.fragments.iter().position(|f| f.binary_search(&index).is_ok())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.fragments.iter().map(Vec::len).collect()
    }
}

pub const FRAGMENT_THRESHOLD: f64 = 1e-12;

/// Connected components of the graph of off-diagonal entries above `1e-12`.
pub fn fragments(op: &SparseOperator) -> FragmentDecomposition {
    let n = op.dim();
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..n {
        if label[seed] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![seed];
        label[seed] = id;
        queue.push_back(seed);
        while let Some(r) = queue.pop_front() {
            for (c, v) in op.row(r) {
                if c != r && v.norm() > FRAGMENT_THRESHOLD && label[c] == usize::MAX {
                    label[c] = id;
                    members.push(c);
                    queue.push_back(c);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    FragmentDecomposition { fragments: out, total: n }
}

/// Page value of the half chain using the full `2^{L/2}` dimensions.
pub fn half_chain_page(l: usize) -> Result<f64> {
    let da = 1usize << (l / 2);
    page_value(da, 1usize << (l - l / 2))
}

/// `S(nT) / S_p` for a Fock initial state.
pub fn entanglement_run(
    p: &HsfParams,
    basis: &FockBasis,
    initial: u64,
    n_cycles: usize,
    path: Path,
) -> Result<TimeSeries> {
    let u = hsf_floquet(p, basis, path)?;
    let sp = half_chain_page(p.l)?;
    let mut psi = basis.product_state(initial)?;
    let mut out = TimeSeries::new("S_over_Sp", p.period());
    out.push(entanglement_entropy(&psi, basis, p.l / 2)? / sp);
    for _ in 0..n_cycles {
        psi = u.apply(&psi)?;
        let nrm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|z| *z /= nrm);
        out.push(entanglement_entropy(&psi, basis, p.l / 2)? / sp);
    }
    Ok(out)
}

/// Infinite-temperature edge-density autocorrelator from the Floquet spectrum.
pub struct Autocorrelator {
    phases: Vec<f64>,
    /// `M_kl = |<k|n_L|l>|^2`, row-major
    weights: Vec<f64>,
    dim: usize,
    mean_density: f64,
}

impl Autocorrelator {
    pub fn new(p: &HsfParams, basis: &FockBasis) -> Result<Self> {
        let u = hsf_floquet(p, basis, Path::Dense)?;
        let report = quasienergies(&u)?;
        let dim = basis.dim();
        let last = p.l - 1;
        let v = &report.vectors;
        let nl = Mat::from_fn(dim, dim, |i, j| {
            if occ(basis.state(i), last) == 1 {
                v.read(i, j)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        let b = v.adjoint() * &nl;
        let mut weights = vec![0.0; dim * dim];
        for k in 0..dim {
            for l in 0..dim {
                weights[k * dim + l] = crate::linalg::from_faer(b.read(k, l)).norm_sqr();
            }
        }
        let phases = report.quasienergies.iter().map(|e| e * p.period()).collect();
        let mean_density = (0..dim).filter(|&i| occ(basis.state(i), last) == 1).count() as f64 / dim as f64;
        Ok(Autocorrelator { phases, weights, dim, mean_density })
    }

    /// `Tr[n_L(nT) n_L] / dim`
    pub fn value(&self, n: usize) -> f64 {
        let d = self.dim;
        let a: Vec<C64> = self.phases.iter().map(|&ph| C64::from_polar(1.0, -ph * n as f64)).collect();
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d {
            let row = &self.weights[k * d..(k + 1) * d];
            let ma: C64 = row.iter().zip(&a).map(|(w, z)| z * *w).sum();
            acc += a[k].conj() * ma;
        }
        acc.re / d as f64
    }

    /// Value with `<n_L>^2` subtracted.
    pub fn connected(&self, n: usize) -> f64 {
        self.value(n) - self.mean_density * self.mean_density
    }

    pub fn mean_density(&self) -> f64 {
        self.mean_density
    }

    /// First cycle `n <= n_max` with `connected(n) < threshold`.
    pub fn threshold_cycle(&self, threshold: f64, n_max: usize) -> Option<usize> {
        (0..=n_max).find(|&n| self.connected(n) < threshold)
    }
}

/// Both variants of `C_L(nT)` for `n = 0..=n_cycles` (step `stride`).
pub fn autocorrelator(p: &HsfParams, basis: &FockBasis, n_cycles: usize, stride: usize) -> Result<(TimeSeries, TimeSeries)> {
    if p.bc != Boundary::Obc {
        log::warn!("autocorrelator is normally evaluated with open boundaries");
    }
    let ac = Autocorrelator::new(p, basis)?;
    let stride = stride.max(1);
    let mut raw = TimeSeries::new("C_L", p.period() * stride as f64);
    let mut conn = TimeSeries::new("C_L_connected", p.period() * stride as f64);
    for n in (0..=n_cycles).step_by(stride) {
        let v = ac.value(n);
        raw.push(v);
        conn.push(v - ac.mean_density().powi(2));
    }
    Ok((raw, conn))
}

/// Weight of `psi` outside the index set `fragment`.
pub fn leakage(psi: &[C64], fragment: &[usize]) -> f64 {
    let inside: f64 = fragment.iter().map(|&i| psi[i].norm_sqr()).sum();
    let total: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    (total - inside).max(0.0)
}

/// `exp(-i H_F^(1) T)`, dense.
pub fn hf1_propagator(p: &HsfParams, basis: &FockBasis) -> Result<linalg::DenseMatrix> {
    Ok(linalg::expm_hermitian(&hsf_hf1(p, basis)?.to_dense(), p.period()))
}
