//! Driven transverse-field Ising chain in its Jordan-Wigner momentum blocks.
//!
//! Each pair `(k, -k)` with `k > 0` evolves in the two-dimensional space
//! spanned by `|k,-k filled>` and `|k,-k empty>`; `tau_z = +1` on the filled
//! state.

use crate::bessel::bessel_j;
use crate::drive::{DriveKind, DriveProtocol};
use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix};
use crate::series::TimeSeries;
use crate::C64;
use faer::complex_native::c64;
use faer::Mat;
use rayon::prelude::*;
use std::f64::consts::PI;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const TAU_X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
    pub const TAU_Z: Mat2 = Mat2([[ONE, ZERO], [ZERO, C64 { re: -1.0, im: 0.0 }]]);

    /// `b0 I + bx tau_x + bz tau_z`
    pub fn pauli(b0: C64, bx: C64, bz: C64) -> Mat2 {
        Mat2([[b0 + bz, bx], [bx, b0 - bz]])
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let mut r = *self;
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] += o.0[i][j];
            }
        }
        r
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut r = *self;
        r.0.iter_mut().flatten().for_each(|z| *z *= s);
        r
    }

    pub fn adjoint(&self) -> Mat2 {
        let a = &self.0;
        Mat2([[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]])
    }

    pub fn commutator(&self, o: &Mat2) -> Mat2 {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let a = &self.0;
        [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest singular value.
    pub fn norm2(&self) -> f64 {
        let g = self.adjoint().mul(self);
        let tr = 0.5 * (g.0[0][0].re + g.0[1][1].re);
        let det = g.det().re;
        (tr + (tr * tr - det).max(0.0).sqrt()).max(0.0).sqrt()
    }

    /// `exp(-i tau B)` for an arbitrary complex 2x2 `B`.
    pub fn exp_minus_i(b: &Mat2, tau: f64) -> Mat2 {
        let half_tr = (b.0[0][0] + b.0[1][1]) * 0.5;
        let traceless = b.sub(&Mat2::IDENTITY.scale(half_tr));
        // traceless^2 = q^2 I
        let q2 = -traceless.det();
        let q = q2.sqrt();
        let qt = q * tau;
        let (c, s_over_q) = if qt.norm() < 1e-4 {
            let x2 = qt * qt;
            (ONE - x2 * 0.5 + x2 * x2 / 24.0, (ONE - x2 / 6.0 + x2 * x2 / 120.0) * tau)
        } else {
            (qt.cos(), qt.sin() / q)
        };
        let core = Mat2::IDENTITY.scale(c).sub(&traceless.scale(I * s_over_q));
        core.scale((-I * half_tr * tau).exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingChainParams {
    pub l: usize,
    pub j: f64,
    /// cosine protocol carrying `h_1`, `h_s`, `gamma` and the period
    pub drive: DriveProtocol,
    pub a: f64,
}

impl IsingChainParams {
    pub fn new(l: usize, h_s: f64, h_1: f64, gamma: f64, omega: f64) -> Result<Self> {
        let p = IsingChainParams { l, j: 1.0, drive: DriveProtocol::cosine(h_1, h_s, gamma, omega)?, a: 1.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 4 || self.l % 2 != 0 {
            return Err(Error::invalid(format!("Ising chain needs even L >= 4, got {}", self.l)));
        }
        if self.drive.kind != DriveKind::Cosine {
            return Err(Error::invalid("the Ising chain is driven with the cosine protocol"));
        }
        if !(self.j.is_finite() && self.a.is_finite() && self.a > 0.0) {
            return Err(Error::invalid("J and the lattice spacing must be finite, a > 0"));
        }
        Ok(())
    }

    pub fn omega(&self) -> f64 {
        self.drive.omega()
    }

    pub fn period(&self) -> f64 {
        self.drive.period
    }

    pub fn mu(&self) -> f64 {
        4.0 * self.drive.amplitude / self.omega()
    }
}

/// Antiperiodic momenta `(2m+1) pi / L`, `m = 0 .. L/2`.
pub fn momentum_grid(l: usize) -> Result<Vec<f64>> {
    if l == 0 || l % 2 != 0 {
        return Err(Error::invalid(format!("momentum grid needs an even L, got {l}")));
    }
    Ok((0..l / 2).map(|m| (2 * m + 1) as f64 * PI / l as f64).collect())
}

/// `H_k(t) = 2[tau_z (h_0(t) - J cos ka) + tau_x J sin ka]`, `h_0 = h_s + h_1 cos(wt) + i gamma`.
pub fn bloch_hamiltonian(k: f64, t: f64, p: &IsingChainParams) -> Mat2 {
    let h0 = C64::new(p.drive.value(t), p.drive.gamma);
    let ka = k * p.a;
    Mat2::pauli(ZERO, C64::new(2.0 * p.j * ka.sin(), 0.0), (h0 - p.j * ka.cos()) * 2.0)
}

const STEP_CAP: usize = 1 << 22;
const STEP_TOL: f64 = 1e-9;

fn midpoint_product(k: f64, p: &IsingChainParams, n: usize) -> Mat2 {
    let dt = p.period() / n as f64;
    let mut u = Mat2::IDENTITY;
    for s in 0..n {
        let h = bloch_hamiltonian(k, (s as f64 + 0.5) * dt, p);
        u = Mat2::exp_minus_i(&h, dt).mul(&u);
    }
    u
}

/// `U_k(T, 0)`: midpoint exponential products, Richardson-extrapolated in the
/// step size, doubled from `steps` until the extrapolated value moves by less
/// than `1e-9` in every entry.
pub fn evolve_mode_period(k: f64, p: &IsingChainParams, steps: usize) -> Result<Mat2> {
    if steps == 0 {
        return Err(Error::invalid("steps must be >= 1"));
    }
    let mut n = steps;
    let mut coarse = midpoint_product(k, p, n);
    let mut prev: Option<Mat2> = None;
    loop {
        if 2 * n > STEP_CAP {
            let residual = prev.map_or(f64::NAN, |r: Mat2| r.max_abs());
            return Err(Error::NonConvergence { what: "mode propagator step doubling", iterations: n, residual });
        }
        let fine = midpoint_product(k, p, 2 * n);
        let rich = fine.scale(C64::new(4.0 / 3.0, 0.0)).sub(&coarse.scale(C64::new(1.0 / 3.0, 0.0)));
        if let Some(r) = prev {
            if rich.sub(&r).max_abs() < STEP_TOL {
                return Ok(rich);
            }
        }
        prev = Some(rich);
        coarse = fine;
        n *= 2;
    }
}

/// `2[tau_z (h_s - J cos ka + i gamma) + tau_x J_0(mu) J sin ka]`
pub fn hf1_mode(k: f64, p: &IsingChainParams) -> Mat2 {
    let ka = k * p.a;
    let bz = C64::new(p.drive.offset - p.j * ka.cos(), p.drive.gamma) * 2.0;
    let bx = C64::new(2.0 * bessel_j(0, p.mu()) * p.j * ka.sin(), 0.0);
    Mat2::pauli(ZERO, bx, bz)
}

/// Second-order term with both odd-order Bessel series summed until the tail is below `1e-12`
/// (or `n_max` terms, whichever comes later).
pub fn hf2_mode(k: f64, p: &IsingChainParams, n_max: usize) -> Mat2 {
    let ka = k * p.a;
    let mu = p.mu();
    let w = p.omega();
    let j0 = bessel_j(0, mu);
    let mut s = 0.0;
    let mut n = 0usize;
    loop {
        let order = 2 * n + 1;
        let term = bessel_j(order as u32, mu) / (order as f64 * w);
        s += term;
        n += 1;
        let past_argument = order as f64 > mu + 10.0;
        if n >= n_max.max(1) && past_argument && term.abs() < 1e-14 {
            break;
        }
        if order > 200 {
            break;
        }
    }
    let bz = C64::new(-4.0 * ka.sin().powi(2) * j0 * s * p.j, 0.0);
    let bx = C64::new(p.drive.offset - p.j * ka.cos(), p.drive.gamma) * (4.0 * s * p.j * ka.sin());
    Mat2::pauli(ZERO, bx, bz)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// ground state of `H_k(0)` with the dissipative part dropped
    GroundStateAtT0,
    AllDown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdGMode {
    pub k: f64,
    /// amplitudes on (filled, empty)
    pub psi: [C64; 2],
}

impl BdGMode {
    pub fn norm_sqr(&self) -> f64 {
        self.psi[0].norm_sqr() + self.psi[1].norm_sqr()
    }

    pub fn tau_z(&self) -> f64 {
        (self.psi[0].norm_sqr() - self.psi[1].norm_sqr()) / self.norm_sqr()
    }

    fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        self.psi[0] /= n;
        self.psi[1] /= n;
        self
    }
}

pub fn initial_modes(p: &IsingChainParams, initial: InitialState) -> Result<Vec<BdGMode>> {
    let grid = momentum_grid(p.l)?;
    Ok(grid
        .into_iter()
        .map(|k| {
            let psi = match initial {
                InitialState::AllDown => [ZERO, ONE],
                InitialState::GroundStateAtT0 => {
                    let ka = k * p.a;
                    let a = 2.0 * (p.drive.value(0.0) - p.j * ka.cos());
                    let b = 2.0 * p.j * ka.sin();
                    let r = a.hypot(b);
                    // two equivalent forms of the lower eigenvector; keep the better conditioned one
                    let (x, y) = if a >= 0.0 { (-b, a + r) } else { (a - r, b) };
                    let n = x.hypot(y);
                    if n == 0.0 {
                        [ZERO, ONE]
                    } else {
                        [C64::new(x / n, 0.0), C64::new(y / n, 0.0)]
                    }
                }
            };
            BdGMode { k, psi }
        })
        .collect())
}

/// `(2/L) sum_k <tau_z>_k`
pub fn magnetization(modes: &[BdGMode], l: usize) -> f64 {
    2.0 / l as f64 * modes.iter().map(BdGMode::tau_z).sum::<f64>()
}

/// Real-space blocks `G_ij = <c_i^dag c_j>` and `F_ij = <c_i c_j>` on sites `0..la`.
pub fn correlation_matrices(modes: &[BdGMode], l: usize, la: usize) -> (DenseMatrix, DenseMatrix) {
    let lf = l as f64;
    let occ: Vec<(f64, f64, C64)> = modes
        .iter()
        .map(|m| {
            let n = m.norm_sqr();
            (m.k, m.psi[0].norm_sqr() / n, m.psi[1].conj() * m.psi[0] / n)
        })
        .collect();
    let g_of = |d: i64| -> f64 { 2.0 / lf * occ.iter().map(|(k, n, _)| n * (k * d as f64).cos()).sum::<f64>() };
    let f_of = |d: i64| -> C64 {
        occ.iter().map(|(k, _, c)| c * (k * d as f64).sin()).sum::<C64>() * (-2.0 / lf)
    };
    let gd: Vec<f64> = (0..la as i64).map(g_of).collect();
    let fd: Vec<C64> = (0..la as i64).map(f_of).collect();
    let g = Mat::from_fn(la, la, |i, j| c64::new(gd[(i as i64 - j as i64).unsigned_abs() as usize], 0.0));
    let f = Mat::from_fn(la, la, |i, j| {
        let d = i as i64 - j as i64;
        let v = fd[d.unsigned_abs() as usize];
        linalg::to_faer(if d < 0 { -v } else { v })
    });
    (g, f)
}

const SPECTRUM_TOL: f64 = 1e-8;

/// Entropy of a fermionic Gaussian state from its `G` and `F` blocks.
pub fn gaussian_entropy(g: &DenseMatrix, f: &DenseMatrix) -> Result<f64> {
    let n = g.nrows();
    let gamma = Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => {
            let d = if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) };
            d - g.read(j, i)
        }
        (true, false) => f.read(i, j - n),
        (false, true) => f.read(j, i - n).conj(),
        (false, false) => g.read(i - n, j - n),
    });
    let mut s = 0.0;
    for nu in linalg::hermitian_eigenvalues(&gamma) {
        if !(-SPECTRUM_TOL..=1.0 + SPECTRUM_TOL).contains(&nu) {
            return Err(Error::Numerical(format!("correlation eigenvalue {nu} outside [0, 1]")));
        }
        let nu = nu.clamp(0.0, 1.0);
        if nu > 1e-300 {
            s -= nu * nu.ln();
        }
    }
    Ok(s)
}

/// Half-open block `[0, la)` entanglement of the Gaussian state described by `modes`.
pub fn entanglement_entropy(modes: &[BdGMode], l: usize, la: usize) -> Result<f64> {
    if la > l / 2 {
        return Err(Error::invalid(format!("subsystem {la} exceeds L/2 = {}", l / 2)));
    }
    let (g, f) = correlation_matrices(modes, l, la);
    gaussian_entropy(&g, &f)
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub n_cycles: usize,
    pub initial: InitialState,
    /// record `S_{L/2}` every this many cycles (0 disables)
    pub entropy_every: usize,
    pub initial_steps: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { n_cycles: 100, initial: InitialState::GroundStateAtT0, entropy_every: 0, initial_steps: 16 }
    }
}

#[derive(Debug, Clone)]
pub struct IsingRun {
    pub m_z: TimeSeries,
    /// `(cycle, S_{L/2})`
    pub entropy: Vec<(usize, f64)>,
    /// per cycle, mean over modes of `1 - |U psi|^2`
    pub norm_loss: TimeSeries,
    pub modes: Vec<BdGMode>,
}

pub fn mode_propagators(p: &IsingChainParams, steps: usize) -> Result<Vec<Mat2>> {
    momentum_grid(p.l)?
        .par_iter()
        .map(|&k| evolve_mode_period(k, p, steps))
        .collect()
}

pub fn stroboscopic_run(p: &IsingChainParams, opts: &RunOptions) -> Result<IsingRun> {
    p.validate()?;
    if opts.n_cycles == 0 {
        return Err(Error::invalid("n_cycles must be >= 1"));
    }
    let us = mode_propagators(p, opts.initial_steps)?;
    let mut modes = initial_modes(p, opts.initial)?;
    let mut m_z = TimeSeries::new("M_z", p.period());
    let mut norm_loss = TimeSeries::new("norm_loss", p.period());
    let mut entropy = Vec::new();
    m_z.push(magnetization(&modes, p.l));
    norm_loss.push(0.0);
    if opts.entropy_every > 0 {
        entropy.push((0, entanglement_entropy(&modes, p.l, p.l / 2)?));
    }
    for n in 1..=opts.n_cycles {
        let mut loss = 0.0;
        for (m, u) in modes.iter_mut().zip(&us) {
            m.psi = u.apply(m.psi);
            loss += 1.0 - m.norm_sqr();
            *m = m.normalized();
        }
        m_z.push(magnetization(&modes, p.l));
        norm_loss.push(loss / modes.len() as f64);
        if opts.entropy_every > 0 && n % opts.entropy_every == 0 {
            entropy.push((n, entanglement_entropy(&modes, p.l, p.l / 2)?));
        }
    }
    Ok(IsingRun { m_z, entropy, norm_loss, modes })
}

const STEADY_TOL: f64 = 1e-10;
const STEADY_WINDOW: usize = 50;
const STEADY_CAP: usize = 50_000;

/// Evolves every mode until it stops changing (up to phase) over a 50-cycle window.
pub fn steady_state(p: &IsingChainParams, steps: usize) -> Result<Vec<BdGMode>> {
    p.validate()?;
    let us = mode_propagators(p, steps)?;
    let modes = initial_modes(p, InitialState::GroundStateAtT0)?;
    modes
        .into_iter()
        .zip(us)
        .map(|(mut m, u)| {
            let mut cycles = 0;
            loop {
                let before = m;
                for _ in 0..STEADY_WINDOW {
                    m.psi = u.apply(m.psi);
                    m = m.normalized();
                }
                cycles += STEADY_WINDOW;
                let overlap = (before.psi[0].conj() * m.psi[0] + before.psi[1].conj() * m.psi[1]).norm();
                let change = (1.0 - overlap).abs();
                if change < STEADY_TOL {
                    return Ok(m);
                }
                if cycles >= STEADY_CAP {
                    return Err(Error::NonConvergence { what: "non-Hermitian steady state", iterations: cycles, residual: change });
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaFit {
    pub gamma: f64,
    pub omega: f64,
    pub alpha: f64,
    pub intercept: f64,
    /// RMS deviation of the fit
    pub residual: f64,
    pub reliable: bool,
}

pub const ALPHA_RESIDUAL_LIMIT: f64 = 0.05;

/// Fits `S_{L/2} = alpha ln L + c` of the steady state over the given sizes.
pub fn alpha_fit(base: &IsingChainParams, gamma: f64, omega: f64, sizes: &[usize]) -> Result<AlphaFit> {
    if sizes.len() < 2 {
        return Err(Error::invalid("alpha fit needs at least two system sizes"));
    }
    if !(gamma > 0.0) {
        return Err(Error::invalid("alpha scan needs gamma > 0"));
    }
    let mut pts = Vec::with_capacity(sizes.len());
    for &l in sizes {
        let mut p = *base;
        p.l = l;
        p.drive = DriveProtocol::cosine(base.drive.amplitude, base.drive.offset, gamma, omega)?;
        p.validate()?;
        let modes = steady_state(&p, 16)?;
        pts.push(((l as f64).ln(), entanglement_entropy(&modes, l, l / 2)?));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let residual = (pts.iter().map(|p| (p.1 - alpha * p.0 - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(AlphaFit { gamma, omega, alpha, intercept, residual, reliable: residual <= ALPHA_RESIDUAL_LIMIT })
}

/// Row-major over `gammas` then `omegas`.
pub fn alpha_scan(base: &IsingChainParams, gammas: &[f64], omegas: &[f64], sizes: &[usize]) -> Result<Vec<AlphaFit>> {
    let jobs: Vec<(f64, f64)> = gammas.iter().flat_map(|&g| omegas.iter().map(move |&w| (g, w))).collect();
    jobs.par_iter().map(|&(g, w)| alpha_fit(base, g, w, sizes)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drive::special_frequency;
    use proptest::prelude::*;

    fn params(h_s: f64, h_1: f64, gamma: f64, omega: f64) -> IsingChainParams {
        IsingChainParams::new(8, h_s, h_1, gamma, omega).unwrap()
    }

    #[test]
    fn grid() {
        let g = momentum_grid(4).unwrap();
        assert!((g[0] - PI / 4.0).abs() < 1e-15 && (g[1] - 3.0 * PI / 4.0).abs() < 1e-15);
        let g = momentum_grid(8).unwrap();
        assert_eq!(g.len(), 4);
        assert!((g[3] - 7.0 * PI / 8.0).abs() < 1e-15);
        assert!(momentum_grid(7).is_err());
        let g = momentum_grid(500).unwrap();
        assert!((g.len() as f64 * 2.0 / 500.0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_hamiltonian_entries() {
        // h_0 vanishes at t = 0 when h_s = -h_1
        let p = params(-1.0, 1.0, 0.0, 3.0);
        let h = bloch_hamiltonian(PI / 2.0, 0.0, &p);
        assert!(h.get(0, 0).norm() < 1e-15 && h.get(1, 1).norm() < 1e-15);
        assert!((h.get(0, 1) - C64::new(2.0, 0.0)).norm() < 1e-15);
        let h = bloch_hamiltonian(1e-9, 0.0, &p);
        assert!(h.get(0, 1).norm() < 1e-8);
        let p = params(0.3, 1.0, 0.25, 3.0);
        let h = bloch_hamiltonian(0.7, 0.4, &p);
        let anti = h.sub(&h.adjoint()).scale(C64::new(0.5, 0.0));
        assert!(anti.sub(&Mat2::TAU_Z.scale(C64::new(0.0, 0.5))).max_abs() < 1e-15);
    }

    #[test]
    fn static_drive_matches_closed_form() {
        let p = params(0.7, 0.0, 0.0, 2.0);
        let k = 0.9;
        let u = evolve_mode_period(k, &p, 4).unwrap();
        let h = bloch_hamiltonian(k, 0.0, &p);
        // closed-form exponential of a real traceless 2x2 Hermitian matrix
        let (bz, bx) = (h.get(0, 0).re, h.get(0, 1).re);
        let e = bz.hypot(bx);
        let t = p.period();
        let (c, s) = ((e * t).cos(), (e * t).sin() / e);
        let exact = Mat2([
            [C64::new(c, -s * bz), C64::new(0.0, -s * bx)],
            [C64::new(0.0, -s * bx), C64::new(c, s * bz)],
        ]);
        assert!(u.sub(&exact).max_abs() < 1e-9);
    }

    #[test]
    fn unitarity_without_dissipation() {
        let p = params(0.1, 20.0, 0.0, 14.0);
        for k in momentum_grid(8).unwrap() {
            let u = evolve_mode_period(k, &p, 8).unwrap();
            assert!((u.det().norm() - 1.0).abs() < 1e-10);
            assert!(u.adjoint().mul(&u).sub(&Mat2::IDENTITY).max_abs() < 1e-9);
        }
    }

    #[test]
    fn first_order_term_at_special_frequency() {
        let w = special_frequency(DriveKind::Cosine, 20.0, 1).unwrap();
        let p = params(0.1, 20.0, 0.0, w);
        for k in momentum_grid(8).unwrap() {
            let h = hf1_mode(k, &p);
            assert!(h.get(0, 1).norm() < 1e-9);
            assert!(h.commutator(&Mat2::TAU_Z).max_abs() < 1e-9);
        }
        let p = params(0.3, 0.0, 0.0, 5.0);
        let h = hf1_mode(PI / 2.0, &p);
        let want = Mat2::TAU_Z.scale(C64::new(0.6, 0.0)).add(&Mat2::TAU_X.scale(C64::new(2.0, 0.0)));
        assert!(h.sub(&want).max_abs() < 1e-15);
    }

    #[test]
    fn first_order_entries_generic() {
        let p = params(0.1, 20.0, 0.0, 40.0);
        let k: f64 = 1.0;
        let h = hf1_mode(k, &p);
        // mu = 2, J_0(2) = 0.22389077914123567
        let j0 = 0.223_890_779_141_235_67;
        assert!((h.get(0, 0).re - 2.0 * (0.1 - k.cos())).abs() < 1e-14);
        assert!((h.get(0, 1).re - 2.0 * j0 * k.sin()).abs() < 1e-12);
    }

    #[test]
    fn first_order_controls_high_frequency() {
        let k = 1.1;
        let err = |w: f64| {
            let p = params(0.1, 20.0, 0.0, w);
            let u = evolve_mode_period(k, &p, 16).unwrap();
            u.sub(&Mat2::exp_minus_i(&hf1_mode(k, &p), p.period())).norm2()
        };
        let (e200, e400) = (err(200.0), err(400.0));
        assert!(e200 * 200.0 < 5.0);
        assert!(e400 < e200);
    }

    #[test]
    fn second_order_scaling_at_fixed_mu() {
        let k = 1.0;
        let ratio = |w: f64| {
            let p = params(0.1, 5.0 * w / 40.0, 0.0, w);
            hf2_mode(k, &p, 1).norm2() / hf1_mode(k, &p).norm2()
        };
        let r = ratio(400.0) / ratio(200.0);
        assert!((r - 0.5).abs() < 0.1, "{r}");
        let w1 = special_frequency(DriveKind::Cosine, 20.0, 1).unwrap();
        let h2 = hf2_mode(k, &params(0.1, 20.0, 0.0, w1), 1);
        assert!(h2.get(0, 1).norm() > 1e-3);
        let h2 = hf2_mode(k, &params(0.1, 0.0, 0.0, 10.0), 1);
        assert!(h2.max_abs() < 1e-15);
    }

    #[test]
    fn static_ground_state_is_stationary() {
        let p = params(3.0, 0.0, 0.0, 2.0);
        let r = stroboscopic_run(&p, &RunOptions { n_cycles: 50, ..Default::default() }).unwrap();
        assert!(r.m_z.max_departure() < 1e-8);
    }

    #[test]
    fn polarized_state_has_no_entanglement() {
        let p = params(0.1, 1.0, 0.0, 3.0);
        let m = initial_modes(&p, InitialState::AllDown).unwrap();
        assert!(entanglement_entropy(&m, 8, 4).unwrap().abs() < 1e-9);
        assert!((magnetization(&m, 8) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_site_of_half_filled_pair() {
        // one fermion spread over two sites: G = 1/2 everywhere
        let g = Mat::from_fn(1, 1, |_, _| c64::new(0.5, 0.0));
        let f = Mat::from_fn(1, 1, |_, _| c64::new(0.0, 0.0));
        assert!((gaussian_entropy(&g, &f).unwrap() - 2f64.ln()).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn exp_is_unitary_for_hermitian(bx in -5.0f64..5.0, bz in -5.0f64..5.0, b0 in -2.0f64..2.0, t in 0.0f64..3.0) {
            let b = Mat2::pauli(C64::new(b0, 0.0), C64::new(bx, 0.0), C64::new(bz, 0.0));
            let u = Mat2::exp_minus_i(&b, t);
            prop_assert!(u.adjoint().mul(&u).sub(&Mat2::IDENTITY).max_abs() < 1e-12);
            let half = Mat2::exp_minus_i(&b, 0.5 * t);
            prop_assert!(half.mul(&half).sub(&u).max_abs() < 1e-12);
        }

        #[test]
        fn symmetry_commutator_tracks_bessel(k in 0.05f64..3.1, w in 5.0f64..60.0) {
            let p = params(0.1, 20.0, 0.0, w);
            let c = hf1_mode(k, &p).commutator(&Mat2::TAU_Z).max_abs();
            let want = 4.0 * (bessel_j(0, p.mu()) * k.sin()).abs();
            prop_assert!((c - want).abs() < 1e-12);
        }
    }
}
