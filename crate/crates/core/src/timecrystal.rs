//! Kicked Ising chain as a discrete time crystal.

use crate::ed::{Constraint, Factor, FloquetOperator, FockBasis, Path, DENSE_LIMIT};
use crate::error::{Error, Result};
use crate::hsf::Boundary;
use crate::linalg;
use crate::series::TimeSeries;
use crate::C64;
use rayon::prelude::*;
use std::f64::consts::PI;

pub const MAX_SITES: usize = 14;
pub const MELT_WINDOW: usize = 20;
pub const MELT_FRACTION: f64 = 0.5;
pub const MELT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum TcInitial {
    /// all spins up
    Polarized,
    /// `|1010...>`
    Staggered,
    /// site-0-first string of `0`/`1`, `1` meaning up
    Bits(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TcParams {
    pub l: usize,
    pub j: f64,
    pub h_z: f64,
    pub period: f64,
    /// kick angle per site is `(pi/2)(1 - epsilon)`
    pub epsilon: f64,
    pub bc: Boundary,
    pub initial: TcInitial,
}

impl TcParams {
    pub fn new(l: usize, j: f64, h_z: f64, period: f64, epsilon: f64) -> Result<Self> {
        let p = TcParams { l, j, h_z, period, epsilon, bc: Boundary::Obc, initial: TcInitial::Polarized };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 || self.l > MAX_SITES {
            return Err(Error::invalid(format!("time crystal chain needs 2 <= L <= {MAX_SITES}, got {}", self.l)));
        }
        if !(0.0..0.5).contains(&self.epsilon) {
            return Err(Error::invalid(format!("kick error must lie in [0, 0.5), got {}", self.epsilon)));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(Error::invalid("period must be positive"));
        }
        if !(self.j.is_finite() && self.h_z.is_finite()) {
            return Err(Error::invalid("J and h_z must be finite"));
        }
        if let TcInitial::Bits(s) = &self.initial {
            if s.len() != self.l || !s.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::invalid(format!("initial bitstring '{s}' must have {} characters from {{0,1}}", self.l)));
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<FockBasis> {
        FockBasis::build(self.l, Constraint::FullSpinHalf)
    }

    pub fn kick_angle(&self) -> f64 {
        0.5 * PI * (1.0 - self.epsilon)
    }

    fn bonds(&self) -> Vec<(usize, usize)> {
        let mut b: Vec<_> = (0..self.l - 1).map(|i| (i, i + 1)).collect();
        if self.bc == Boundary::Pbc && self.l > 2 {
            b.push((self.l - 1, 0));
        }
        b
    }

    pub fn initial_config(&self) -> Result<u64> {
        self.validate()?;
        Ok(match &self.initial {
            TcInitial::Polarized => (1u64 << self.l) - 1,
            TcInitial::Staggered => (0..self.l).step_by(2).fold(0, |c, j| c | 1 << j),
            TcInitial::Bits(s) => s.chars().enumerate().fold(0, |c, (j, ch)| if ch == '1' { c | 1 << j } else { c }),
        })
    }
}

fn spin(z: u64, j: usize) -> f64 {
    if z >> j & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Diagonal of `H_1 = -J sum sigma^z sigma^z - h_z sum sigma^z`.
pub fn ising_energies(p: &TcParams) -> Vec<f64> {
    let bonds = p.bonds();
    (0..1u64 << p.l)
        .map(|z| {
            let zz: f64 = bonds.iter().map(|&(a, b)| spin(z, a) * spin(z, b)).sum();
            let mz: f64 = (0..p.l).map(|j| spin(z, j)).sum();
            -p.j * zz - p.h_z * mz
        })
        .collect()
}

/// `U(T,0) = X_eps exp(-i H_1 T)`.
pub fn tc_floquet(p: &TcParams, path: Path) -> Result<FloquetOperator> {
    p.validate()?;
    let dim = 1usize << p.l;
    let phases: Vec<C64> = ising_energies(p).iter().map(|e| C64::from_polar(1.0, -e * p.period)).collect();
    FloquetOperator::from_factors(
        dim,
        p.period,
        vec![Factor::Diagonal(phases), Factor::SiteRotationX { sites: p.l, angle: p.kick_angle() }],
        path,
    )
}

/// `(1/L) sum_j sigma^z_j` per configuration.
fn magnetisation_table(l: usize) -> Vec<f64> {
    (0..1u64 << l).map(|z| z.count_ones() as f64 * 2.0 / l as f64 - 1.0).collect()
}

fn magnetisation(psi: &[C64], table: &[f64]) -> f64 {
    psi.iter().zip(table).map(|(a, m)| a.norm_sqr() * m).sum()
}

/// `M(nT)` for n = 0..=n_cycles.
pub fn subharmonic_run(p: &TcParams, n_cycles: usize) -> Result<TimeSeries> {
    let u = tc_floquet(p, Path::ActionOnly)?;
    let basis = p.basis()?;
    let table = magnetisation_table(p.l);
    let mut psi = basis.product_state(p.initial_config()?)?;
    let mut out = TimeSeries::new("M", p.period);
    out.push(magnetisation(&psi, &table));
    for _ in 0..n_cycles {
        psi = u.apply(&psi)?;
        out.push(magnetisation(&psi, &table));
    }
    Ok(out)
}

/// `|(1/W) sum_{m=n}^{n+W-1} (-1)^m M(m)|`; `None` past the end of the series.
pub fn period_two_amplitude(m: &[f64], n: usize, window: usize) -> Option<f64> {
    if window == 0 || n + window > m.len() {
        return None;
    }
    let s: f64 = (n..n + window).map(|k| if k % 2 == 0 { m[k] } else { -m[k] }).sum();
    Some((s / window as f64).abs())
}

/// Frequency in `[0, pi]` (radians per cycle) of the largest DFT component of `x`.
pub fn dominant_frequency(x: &[f64]) -> f64 {
    let n = x.len();
    let mut best = (0.0, 0.0);
    for k in 0..=n / 2 {
        let w = 2.0 * PI * k as f64 / n as f64;
        let z: C64 = x.iter().enumerate().map(|(m, &v)| v * C64::from_polar(1.0, -w * m as f64)).sum();
        if z.norm() > best.1 {
            best = (w, z.norm());
        }
    }
    best.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Melting {
    pub period: f64,
    pub epsilon: f64,
    /// first cycle with period-2 amplitude below half its initial value, or the cap
    pub n_star: usize,
    pub censored: bool,
}

/// Runs until the sliding-window period-2 amplitude falls below half its initial value.
pub fn melting_time(p: &TcParams, cap: usize) -> Result<Melting> {
    let u = tc_floquet(p, Path::ActionOnly)?;
    let basis = p.basis()?;
    let table = magnetisation_table(p.l);
    let mut psi = basis.product_state(p.initial_config()?)?;
    let mut m = vec![magnetisation(&psi, &table)];
    let mut a0 = None;
    let mut n = 0;
    while n <= cap {
        while m.len() < n + MELT_WINDOW {
            psi = u.apply(&psi)?;
            m.push(magnetisation(&psi, &table));
        }
        let a = period_two_amplitude(&m, n, MELT_WINDOW).expect("window filled");
        let a0 = *a0.get_or_insert(a);
        if a0 < 1e-12 {
            return Err(Error::invalid("initial state carries no period-2 signal"));
        }
        if a < MELT_FRACTION * a0 {
            return Ok(Melting { period: p.period, epsilon: p.epsilon, n_star: n, censored: false });
        }
        n += 1;
    }
    Ok(Melting { period: p.period, epsilon: p.epsilon, n_star: cap, censored: true })
}

/// `n*` over the grid `periods x epsilons`, in row-major order.
pub fn melting_scan(base: &TcParams, periods: &[f64], epsilons: &[f64], cap: usize) -> Result<Vec<Melting>> {
    let grid: Vec<(f64, f64)> = periods.iter().flat_map(|&t| epsilons.iter().map(move |&e| (t, e))).collect();
    grid.par_iter()
        .map(|&(t, e)| {
            let p = TcParams { period: t, epsilon: e, ..base.clone() };
            p.validate()?;
            melting_time(&p, cap)
        })
        .collect()
}

/// Least-squares slope of `ln n*` against `1/T`.
pub fn melting_slope(points: &[Melting]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("need at least two points for a slope"));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|m| (1.0 / m.period, (m.n_star.max(1) as f64).ln())).collect();
    let n = xy.len() as f64;
    let (mx, my) = (xy.iter().map(|p| p.0).sum::<f64>() / n, xy.iter().map(|p| p.1).sum::<f64>() / n);
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("all periods coincide"));
    }
    Ok(xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

#[derive(Debug, Clone)]
pub struct CatPair {
    pub config: u64,
    /// quasienergies of `(|z> + |z~>)/sqrt 2` and `(|z> - |z~>)/sqrt 2`
    pub eps_plus: f64,
    pub eps_minus: f64,
}

#[derive(Debug, Clone)]
pub struct CatReport {
    pub pairs: Vec<CatPair>,
    /// largest `|| v - P_cat v ||` over Floquet eigenvectors
    pub max_eigvec_defect: f64,
    /// largest `| |eps_+ - eps_-| - pi/T |`
    pub max_pairing_defect: f64,
}

/// Checks that every Floquet eigenvector of the perfect-kick propagator lies in
/// the span of cat states `(|z> +- |z~>)/sqrt 2` with matching eigenvalue.
pub fn cat_analysis(p: &TcParams) -> Result<CatReport> {
    if p.epsilon != 0.0 || p.h_z != 0.0 {
        return Err(Error::invalid("cat analysis needs epsilon = 0 and h_z = 0"));
    }
    let dim = 1usize << p.l;
    if dim > DENSE_LIMIT {
        return Err(Error::invalid("cat analysis needs the dense path"));
    }
    let u = tc_floquet(p, Path::Dense)?;
    let um = u.dense().expect("dense path");
    let t = p.period;
    let full = (1u64 << p.l) - 1;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // (config, sign, eigenvalue)
    let mut cats: Vec<(u64, f64, C64)> = Vec::new();
    let mut pairs = Vec::new();
    for z in 0..=full {
        let zb = full ^ z;
        if zb < z {
            continue;
        }
        let mut eps = [0.0; 2];
        for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
            let mut c = vec![C64::new(0.0, 0.0); dim];
            c[z as usize] = C64::new(r, 0.0);
            c[zb as usize] = C64::new(sign * r, 0.0);
            let uc = linalg::matvec(um, &c);
            let lam: C64 = c.iter().zip(&uc).map(|(a, b)| a.conj() * b).sum();
            let res = uc.iter().zip(&c).map(|(a, b)| (a - lam * b).norm_sqr()).sum::<f64>().sqrt();
            if res > 1e-8 {
                return Err(Error::Numerical(format!("cat state for z = {z:#b} is not a Floquet eigenvector (residual {res:.2e})")));
            }
            eps[k] = crate::ed::fold_quasienergy(lam, t);
            cats.push((z, sign, lam));
        }
        pairs.push(CatPair { config: z, eps_plus: eps[0], eps_minus: eps[1] });
    }
    let max_pairing_defect = pairs
        .iter()
        .map(|c| {
            let d = (c.eps_plus - c.eps_minus).abs();
            (d - PI / t).abs().min((d - PI / t - 2.0 * PI / t).abs())
        })
        .fold(0.0, f64::max);
    let eig = linalg::unitary_eigen(um)?;
    let mut max_eigvec_defect = 0.0f64;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        let v = linalg::column(&eig.vectors, k);
        let mut proj = vec![C64::new(0.0, 0.0); dim];
        for &(z, sign, mu) in &cats {
            if (mu - lam).norm() > 1e-8 {
                continue;
            }
            let zb = (full ^ z) as usize;
            let amp = (v[z as usize] + sign * v[zb]) * r;
            proj[z as usize] += amp * r;
            proj[zb] += amp * sign * r;
        }
        let d = v.iter().zip(&proj).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        max_eigvec_defect = max_eigvec_defect.max(d);
    }
    Ok(CatReport { pairs, max_eigvec_defect, max_pairing_defect })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_kick_without_coupling_flips() {
        let p = TcParams::new(6, 0.0, 0.0, 1.0, 0.0).unwrap();
        let m = subharmonic_run(&p, 50).unwrap();
        for (n, v) in m.values.iter().enumerate() {
            let want = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn perfect_kick_is_subharmonic() {
        let p = TcParams::new(8, 1.0, 0.0, 1.0, 0.0).unwrap();
        let m = subharmonic_run(&p, 1000).unwrap();
        for (n, v) in m.values.iter().enumerate() {
            let want = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((v - want).abs() < 1e-10);
        }
        assert!((dominant_frequency(&m.values[..1000]) - PI).abs() < 1e-12);
    }

    #[test]
    fn unpolarised_start_has_no_signal() {
        let mut p = TcParams::new(8, 1.0, 0.0, 1.0, 0.0).unwrap();
        p.initial = TcInitial::Staggered;
        let m = subharmonic_run(&p, 200).unwrap();
        for n in 0..=200 - MELT_WINDOW {
            assert!(period_two_amplitude(&m.values, n, MELT_WINDOW).unwrap() < 1e-10);
        }
    }

    #[test]
    fn kick_commutes_with_ising_evolution() {
        let p = TcParams::new(5, 0.8, 0.0, 0.7, 0.0).unwrap();
        let u = tc_floquet(&p, Path::Dense).unwrap().to_dense().unwrap();
        let x = TcParams { j: 0.0, ..p.clone() };
        let x0 = tc_floquet(&x, Path::Dense).unwrap().to_dense().unwrap();
        let u2 = &u * &u;
        assert!(linalg::max_abs(&linalg::commutator(&u2, &x0)) < 1e-10);
        let ising = TcParams { epsilon: 0.0, ..p.clone() };
        let diag: Vec<C64> = ising_energies(&ising).iter().map(|e| C64::from_polar(1.0, -e * p.period)).collect();
        let d = faer::Mat::from_fn(32, 32, |i, j| if i == j { linalg::to_faer(diag[i]) } else { linalg::to_faer(C64::new(0.0, 0.0)) });
        assert!(linalg::max_abs(&linalg::commutator(&x0, &d)) < 1e-10);
    }

    #[test]
    fn field_echoes_over_two_periods() {
        let p = TcParams::new(5, 0.8, 0.37, 0.7, 0.0).unwrap();
        let u = tc_floquet(&p, Path::Dense).unwrap().to_dense().unwrap();
        let x = TcParams { j: 0.0, h_z: 0.0, ..p.clone() };
        let x0 = tc_floquet(&x, Path::Dense).unwrap().to_dense().unwrap();
        assert!(linalg::max_abs(&linalg::commutator(&(&u * &u), &x0)) < 1e-10);
    }

    #[test]
    fn cats_at_four_sites() {
        let p = TcParams::new(4, 1.0, 0.0, 0.9, 0.0).unwrap();
        let r = cat_analysis(&p).unwrap();
        assert_eq!(r.pairs.len(), 8);
        assert!(r.max_eigvec_defect < 1e-8);
        assert!(r.max_pairing_defect < 1e-9);
    }

    #[test]
    fn window_amplitude() {
        let m: Vec<f64> = (0..40).map(|n| if n % 2 == 0 { 0.8 } else { -0.8 }).collect();
        assert!((period_two_amplitude(&m, 3, 20).unwrap() - 0.8).abs() < 1e-15);
        assert!(period_two_amplitude(&m, 30, 20).is_none());
    }

    #[test]
    fn validation() {
        assert!(TcParams::new(15, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(TcParams::new(6, 1.0, 0.0, 1.0, 0.5).is_err());
        let mut p = TcParams::new(4, 1.0, 0.0, 1.0, 0.1).unwrap();
        p.initial = TcInitial::Bits("10".into());
        assert!(p.validate().is_err());
    }
}
