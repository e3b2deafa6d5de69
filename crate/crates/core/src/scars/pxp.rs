//! Rydberg-blockaded PXP chain under a square-pulse detuning.

use crate::ed::{
    entanglement_entropy, floquet_squarepulse, quasienergies, Constraint, EigenReport, FloquetOperator, FockBasis,
    Path, SparseOperator,
};
use crate::error::{Error, Result};
use crate::hsf::Boundary;
use crate::linalg;
use crate::series::TimeSeries;
use crate::C64;
use std::f64::consts::PI;

const HERMITIAN_TOL: f64 = 1e-12;
const SPECIAL_TOL: f64 = 1e-9;
const SERIES_BELOW: f64 = 0.5;

/// Which half of the period carries `lambda = -lambda_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PulseOrder {
    #[default]
    MinusFirst,
    PlusFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PxpParams {
    pub l: usize,
    /// Rabi amplitude `Omega`
    pub omega: f64,
    pub lambda0: f64,
    pub omega_d: f64,
    pub bc: Boundary,
    pub order: PulseOrder,
}

impl PxpParams {
    pub fn new(l: usize, omega: f64, lambda0: f64, omega_d: f64, bc: Boundary) -> Result<Self> {
        let p = PxpParams { l, omega, lambda0, omega_d, bc, order: PulseOrder::default() };
        p.validate()?;
        Ok(p)
    }

    /// Drive frequency at which `lambda_0 T = 4 n pi`.
    pub fn special(l: usize, omega: f64, lambda0: f64, n: usize, bc: Boundary) -> Result<Self> {
        if n == 0 || lambda0 <= 0.0 {
            return Err(Error::invalid("special frequencies need n >= 1 and lambda_0 > 0"));
        }
        PxpParams::new(l, omega, lambda0, lambda0 / (2.0 * n as f64), bc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 4 {
            return Err(Error::invalid(format!("PXP chain needs L >= 4, got {}", self.l)));
        }
        if !(self.omega_d > 0.0 && self.omega_d.is_finite()) {
            return Err(Error::invalid("drive frequency must be positive"));
        }
        if !(self.omega.is_finite() && self.lambda0.is_finite()) {
            return Err(Error::invalid("Omega and lambda_0 must be finite"));
        }
        if self.bc == Boundary::Pbc && self.l % 2 != 0 {
            return Err(Error::invalid("periodic PXP chains need even L"));
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_d
    }

    pub fn is_special(&self) -> bool {
        let r = self.lambda0 * self.period() / (4.0 * PI);
        r >= 1.0 - SPECIAL_TOL && (r - r.round()).abs() < SPECIAL_TOL
    }

    pub fn basis(&self) -> Result<FockBasis> {
        FockBasis::build(self.l, blockade(self.bc))
    }

    fn neighbours(&self, j: usize) -> Option<(usize, usize)> {
        match self.bc {
            Boundary::Pbc => Some(((j + self.l - 1) % self.l, (j + 1) % self.l)),
            Boundary::Obc if j == 0 || j + 1 == self.l => None,
            Boundary::Obc => Some((j - 1, j + 1)),
        }
    }
}

fn blockade(bc: Boundary) -> Constraint {
    match bc {
        Boundary::Pbc => Constraint::BlockadePbc,
        Boundary::Obc => Constraint::BlockadeObc,
    }
}

fn check_blockade(basis: &FockBasis) -> Result<()> {
    match basis.constraint() {
        Constraint::BlockadeObc | Constraint::BlockadePbc => Ok(()),
        c => Err(Error::invalid(format!("PXP needs a blockade basis, got {c}"))),
    }
}

fn check_params_basis(p: &PxpParams, basis: &FockBasis) -> Result<()> {
    p.validate()?;
    check_blockade(basis)?;
    if basis.sites() != p.l || basis.constraint() != blockade(p.bc) {
        return Err(Error::invalid("basis does not match the PXP parameters"));
    }
    Ok(())
}

fn sz(basis: &FockBasis, s: u64, j: usize) -> f64 {
    if basis.local(s, j) == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Projected raising operator `P sigma^+_j P`; the blockade basis supplies the projectors.
pub fn sigma_plus(basis: &FockBasis, j: usize) -> SparseOperator {
    let t = basis
        .states()
        .iter()
        .enumerate()
        .filter(|&(_, &s)| basis.local(s, j) == 0)
        .filter_map(|(c, &s)| basis.index(basis.with_local(s, j, 1)).map(|r| (r, c, C64::new(1.0, 0.0))))
        .collect();
    SparseOperator::from_triplets(basis.dim(), t)
}

/// `sum_j (-lambda sigma^z_j + Omega P sigma^x_j P)`.
pub fn pxp_hamiltonian(omega: f64, lambda: f64, basis: &FockBasis) -> Result<SparseOperator> {
    check_blockade(basis)?;
    let l = basis.sites();
    let mut t = Vec::new();
    for (c, &s) in basis.states().iter().enumerate() {
        let z: f64 = (0..l).map(|j| sz(basis, s, j)).sum();
        t.push((c, c, C64::new(-lambda * z, 0.0)));
        for j in 0..l {
            if let Some(r) = basis.index(s ^ (1 << j)) {
                t.push((r, c, C64::new(omega, 0.0)));
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), t))
}

/// Exact one-period propagator. The detuning enters as `-(lambda/2) sigma^z`,
/// i.e. a unit splitting per `lambda`, so that `lambda_0 T = 4 n pi` are the
/// points where the first-order hopping vanishes.
pub fn pxp_floquet(p: &PxpParams, basis: &FockBasis, path: Path) -> Result<FloquetOperator> {
    check_params_basis(p, basis)?;
    let minus = pxp_hamiltonian(p.omega, -0.5 * p.lambda0, basis)?;
    let plus = pxp_hamiltonian(p.omega, 0.5 * p.lambda0, basis)?;
    match p.order {
        PulseOrder::MinusFirst => floquet_squarepulse(&minus, &plus, p.period(), path),
        PulseOrder::PlusFirst => floquet_squarepulse(&plus, &minus, p.period(), path),
    }
}

/// `sum_j (c sigma~+_j + h.c.)`
fn dressed_flip(basis: &FockBasis, c: C64) -> SparseOperator {
    let mut t = Vec::new();
    for (col, &s) in basis.states().iter().enumerate() {
        for j in 0..basis.sites() {
            if let Some(r) = basis.index(s ^ (1 << j)) {
                let v = if basis.local(s, j) == 0 { c } else { c.conj() };
                t.push((r, col, v));
            }
        }
    }
    SparseOperator::from_triplets(basis.dim(), t)
}

/// Phase conjugation for the opposite pulse order.
fn oriented(p: &PxpParams, z: C64) -> C64 {
    match p.order {
        PulseOrder::PlusFirst => z,
        PulseOrder::MinusFirst => z.conj(),
    }
}

/// `Omega sinc(lambda_0 T/4) sum_j e^{-i lambda_0 T/4} sigma~+_j + h.c.`
pub fn pxp_hf1(p: &PxpParams, basis: &FockBasis) -> Result<SparseOperator> {
    check_params_basis(p, basis)?;
    let x = p.lambda0 * p.period() / 4.0;
    let c = C64::from_polar(p.omega * crate::drive::sinc(x), -x);
    Ok(dressed_flip(basis, oriented(p, c)))
}

/// Bracketed phase polynomial of `A_0` in `u = lambda_0 T`, divided by `u^3`.
fn bracket_over_u3(u: f64) -> C64 {
    if u.abs() < SERIES_BELOW {
        bracket_series(u)
    } else {
        bracket_direct(u)
    }
}

fn bracket_direct(u: f64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let e = |a: f64| C64::from_polar(1.0, a * u);
    (e(1.5) + 3.0 * e(0.5) * (1.0 + i * u) + 2.0 * (1.0 - 3.0 * e(1.0))) / (u * u * u)
}

/// Taylor series; the coefficients of `u^m` vanish for `m < 4`.
fn bracket_series(u: f64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let h = 0.5 * i;
    let mut acc = C64::new(0.0, 0.0);
    let mut fact = 1.0;
    for m in 1..=18 {
        fact *= m as f64;
        if m < 4 {
            continue;
        }
        let c = (1.5 * i).powu(m) + 3.0 * h.powu(m) + 3.0 * i * m as f64 * h.powu(m - 1) - 6.0 * i.powu(m);
        acc += c / fact * u.powi(m as i32 - 3);
    }
    acc
}

/// Closed form `[...] Omega^3 e^{-i lambda_0 T} / (3 i lambda_0^3 T)` for the `+lambda_0`-first order.
pub fn a0_closed_form(p: &PxpParams) -> C64 {
    let t = p.period();
    let u = p.lambda0 * t;
    let i = C64::new(0.0, 1.0);
    let z = bracket_over_u3(u) * p.omega.powi(3) * C64::from_polar(1.0, -u) * t * t / (3.0 * i);
    oriented(p, z)
}

/// Third-order coupling `A_0`; the exact propagator fixes it to `-a0_closed_form`.
pub fn a0(p: &PxpParams) -> C64 {
    -a0_closed_form(p)
}

/// Third-order correction with the same orientation convention as [`pxp_hf1`].
pub fn pxp_hf3(p: &PxpParams, basis: &FockBasis) -> Result<SparseOperator> {
    check_params_basis(p, basis)?;
    let a = a0(p);
    let dim = basis.dim();
    let ups: Vec<SparseOperator> = (0..p.l).map(|j| sigma_plus(basis, j)).collect();
    let mut k = SparseOperator::zero(dim);
    for j in 0..p.l {
        k = k.add_scaled(&ups[j], -6.0 * a);
        if let Some((jm, jp)) = p.neighbours(j) {
            let down = ups[j].adjoint();
            let pair = ups[jm].mul(&ups[jp]).add(&ups[jp].mul(&ups[jm]));
            k = k.add_scaled(&pair.mul(&down), a);
        }
    }
    let h = k.add(&k.adjoint());
    h.ensure_hermitian(HERMITIAN_TOL, "H_F^(3)")?;
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PxpInitial {
    /// `|1010...>`, site 0 excited
    Z2,
    /// all sites in the ground state
    Vacuum,
}

impl PxpInitial {
    pub fn config(&self, l: usize) -> u64 {
        match self {
            PxpInitial::Z2 => (0..l).step_by(2).fold(0, |c, j| c | 1 << j),
            PxpInitial::Vacuum => 0,
        }
    }

    pub fn state(&self, basis: &FockBasis) -> Result<Vec<C64>> {
        basis.product_state(self.config(basis.sites()))
    }
}

/// `F(n) = |<psi(nT)|psi(0)>|` for n = 0..=n_cycles.
pub fn fidelity_run(u: &FloquetOperator, basis: &FockBasis, initial: PxpInitial, n_cycles: usize) -> Result<TimeSeries> {
    let psi0 = initial.state(basis)?;
    let i0 = basis.index(initial.config(basis.sites())).expect("product state is in the sector");
    let mut out = TimeSeries::new(format!("F_{initial:?}"), u.period());
    let mut psi = psi0;
    out.push(1.0);
    for _ in 0..n_cycles {
        psi = u.apply(&psi)?;
        out.push(psi[i0].norm());
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Su2Closure {
    pub h_plus: SparseOperator,
    pub h_minus: SparseOperator,
    pub s_z: Vec<f64>,
    pub o_z: Vec<f64>,
    /// `max |[H_+, H_-] - (S_z + O_z)|`
    pub defect: f64,
}

/// Staggered raising operators built with `sigma^+- = sigma^x +- i sigma^y`.
pub fn su2_closure(basis: &FockBasis) -> Result<Su2Closure> {
    check_blockade(basis)?;
    let l = basis.sites();
    let pbc = basis.constraint() == Constraint::BlockadePbc;
    let mut h_plus = SparseOperator::zero(basis.dim());
    for j in 0..l {
        let up = sigma_plus(basis, j).scaled(C64::new(2.0, 0.0));
        h_plus = h_plus.add(&if j % 2 == 0 { up } else { up.adjoint() });
    }
    let h_minus = h_plus.adjoint();
    let sign = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
    let mut s_z = Vec::with_capacity(basis.dim());
    let mut o_z = Vec::with_capacity(basis.dim());
    for &s in basis.states() {
        s_z.push((0..l).map(|j| sign(j) * sz(basis, s, j)).sum());
        let inner = |j: usize| pbc || (j > 0 && j + 1 < l);
        o_z.push(
            (0..l)
                .filter(|&j| inner(j))
                .map(|j| sign(j) * sz(basis, s, (j + l - 1) % l) * sz(basis, s, j) * sz(basis, s, (j + 1) % l))
                .sum(),
        );
    }
    let total: Vec<f64> = s_z.iter().zip(&o_z).map(|(a, b)| a + b).collect();
    let defect = h_plus.commutator(&h_minus).sub(&SparseOperator::diagonal(&total)).max_abs();
    Ok(Su2Closure { h_plus, h_minus, s_z, o_z, defect })
}

/// `n_a n_b` as a diagonal operator.
pub fn density_pair(basis: &FockBasis, a: usize, b: usize) -> SparseOperator {
    let d: Vec<f64> = basis
        .states()
        .iter()
        .map(|&s| (basis.local(s, a) * basis.local(s, b)) as f64)
        .collect();
    SparseOperator::diagonal(&d)
}

/// Floquet eigenstates with half-chain entropy, overlaps with `Z2` and the
/// vacuum, and `O22 = n_2 n_4` (sites counted from one).
pub fn eigenstate_scan(u: &FloquetOperator, basis: &FockBasis) -> Result<EigenReport> {
    check_blockade(basis)?;
    if basis.sites() < 4 {
        return Err(Error::invalid("O22 needs at least four sites"));
    }
    quasienergies(u)?
        .with_entropy(basis, basis.sites() / 2)?
        .with_overlap("Z2", &PxpInitial::Z2.state(basis)?)?
        .with_overlap("0", &PxpInitial::Vacuum.state(basis)?)?
        .with_observable("O22", &density_pair(basis, 1, 3))
}

#[derive(Debug, Clone)]
pub struct ScarFamilies {
    pub vacuum: Vec<usize>,
    pub z2: Vec<usize>,
    pub median_entropy: f64,
    pub disjoint: bool,
    /// members of each family with entropy below the median
    pub vacuum_low_entropy: usize,
    pub z2_low_entropy: usize,
}

/// Eigenstates with overlap above `threshold` on each reference state.
pub fn scar_families(r: &EigenReport, threshold: f64) -> Result<ScarFamilies> {
    let s = r.entropies.as_ref().ok_or_else(|| Error::invalid("scan has no entropies"))?;
    let pick = |name: &str| -> Result<Vec<usize>> {
        let o = r.overlap(name).ok_or_else(|| Error::invalid(format!("scan has no '{name}' overlap")))?;
        Ok((0..o.len()).filter(|&i| o[i] > threshold).collect())
    };
    let (vacuum, z2) = (pick("0")?, pick("Z2")?);
    let median_entropy = median(s.clone());
    let low = |f: &[usize]| f.iter().filter(|&&i| s[i] < median_entropy).count();
    Ok(ScarFamilies {
        disjoint: vacuum.iter().all(|i| !z2.contains(i)),
        vacuum_low_entropy: low(&vacuum),
        z2_low_entropy: low(&z2),
        median_entropy,
        vacuum,
        z2,
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn quartiles(mut v: Vec<f64>) -> (f64, f64) {
    v.sort_by(f64::total_cmp);
    let q = |f: f64| {
        let x = f * (v.len() - 1) as f64;
        let (lo, hi) = (x.floor() as usize, x.ceil() as usize);
        v[lo] + (v[hi] - v[lo]) * (x - lo as f64)
    };
    (q(0.25), q(0.75))
}

/// Indices whose `O22` deviates from a running median over the `window`
/// nearest eigenstates in quasienergy by more than three interquartile ranges
/// of all such deviations.
pub fn o22_outliers(r: &EigenReport, window: usize) -> Result<Vec<usize>> {
    let o = r.observable("O22").ok_or_else(|| Error::invalid("scan has no O22 column"))?;
    let n = o.len();
    if n < 8 {
        return Err(Error::invalid("too few eigenstates for an outlier analysis"));
    }
    let w = window.clamp(3, n);
    let dev: Vec<f64> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(w / 2).min(n - w);
            o[i] - median(o[lo..lo + w].to_vec())
        })
        .collect();
    let (q1, q3) = quartiles(dev.clone());
    let iqr = q3 - q1;
    Ok((0..n).filter(|&i| dev[i].abs() > 3.0 * iqr).collect())
}

/// Half-chain entropy of the state after each period, for diagnostics.
pub fn entropy_run(u: &FloquetOperator, basis: &FockBasis, initial: PxpInitial, n_cycles: usize) -> Result<TimeSeries> {
    let mut psi = initial.state(basis)?;
    let cut = basis.sites() / 2;
    let mut out = TimeSeries::new("S_half", u.period());
    out.push(entanglement_entropy(&psi, basis, cut)?);
    for _ in 0..n_cycles {
        psi = u.apply(&psi)?;
        out.push(entanglement_entropy(&psi, basis, cut)?);
    }
    Ok(out)
}

/// Spectral norm of `U - exp(-i H T)`.
pub fn propagator_error(u: &FloquetOperator, h: &SparseOperator) -> Result<f64> {
    let exact = u.dense().ok_or_else(|| Error::invalid("propagator comparison needs the dense path"))?;
    let approx = linalg::expm_hermitian(&h.to_dense(), u.period());
    Ok(linalg::spectral_norm(&linalg::sub(exact, &approx)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obc(l: usize) -> FockBasis {
        FockBasis::build(l, Constraint::BlockadeObc).unwrap()
    }

    #[test]
    fn static_spectrum_is_symmetric() {
        let b = obc(10);
        let h = pxp_hamiltonian(1.0, 0.0, &b).unwrap();
        let mut e = linalg::hermitian_eigenvalues(&h.to_dense());
        let mut neg: Vec<f64> = e.iter().map(|x| -x).collect();
        e.sort_by(f64::total_cmp);
        neg.sort_by(f64::total_cmp);
        assert!(e.iter().zip(&neg).all(|(a, b)| (a - b).abs() < 1e-10));
    }

    #[test]
    fn detuning_only_is_diagonal() {
        let b = obc(6);
        let h = pxp_hamiltonian(0.0, 0.8, &b).unwrap();
        assert!(h.is_diagonal());
        for (i, &s) in b.states().iter().enumerate() {
            let up = s.count_ones() as f64;
            assert!((h.get(i, i).re + 0.8 * (up - (6.0 - up))).abs() < 1e-14);
        }
    }

    #[test]
    fn no_adjacent_excitations_created() {
        let b = obc(8);
        let h = pxp_hamiltonian(1.0, 0.3, &b).unwrap();
        for (r, _, _) in h.entries() {
            let s = b.state(r);
            assert_eq!(s & (s >> 1), 0);
        }
    }

    #[test]
    fn first_order_vanishes_at_special_points() {
        let p = PxpParams::special(8, 1.0, 15.0, 1, Boundary::Obc).unwrap();
        assert!(p.is_special());
        let b = p.basis().unwrap();
        assert!(pxp_hf1(&p, &b).unwrap().max_abs() < 1e-12);
        let q = PxpParams::new(8, 1.0, 15.0, 9.0, Boundary::Obc).unwrap();
        assert!(!q.is_special());
    }

    #[test]
    fn first_order_static_limit() {
        let p = PxpParams::new(8, 1.0, 0.0, 3.0, Boundary::Obc).unwrap();
        let b = p.basis().unwrap();
        let h = pxp_hamiltonian(1.0, 0.0, &b).unwrap();
        assert!(pxp_hf1(&p, &b).unwrap().sub(&h).max_abs() < 1e-14);
        let u = pxp_floquet(&p, &b, Path::Dense).unwrap();
        assert!(propagator_error(&u, &h).unwrap() < 1e-10);
    }

    #[test]
    fn series_branch_is_continuous() {
        let (a, b) = (bracket_series(SERIES_BELOW), bracket_direct(SERIES_BELOW));
        assert!((a - b).norm() < 1e-12 * a.norm());
        assert_eq!(bracket_over_u3(0.0), C64::new(0.0, 0.0));
        assert!((bracket_over_u3(1e-6) - C64::new(1e-6 / 32.0, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn third_order_scales_as_cube() {
        let b = obc(8);
        let p = PxpParams::new(8, 1.0, 15.0, 8.5, Boundary::Obc).unwrap();
        let q = PxpParams { omega: 0.5, ..p };
        let r = pxp_hf3(&p, &b).unwrap().max_abs() / pxp_hf3(&q, &b).unwrap().max_abs();
        assert!((r - 8.0).abs() < 0.4);
    }

    #[test]
    fn closure_identity_periodic() {
        for l in [8, 10] {
            let b = FockBasis::build(l, Constraint::BlockadePbc).unwrap();
            let c = su2_closure(&b).unwrap();
            assert!(c.defect < 1e-10, "L={l}: {}", c.defect);
            let z2 = b.index(PxpInitial::Z2.config(l)).unwrap();
            let vac = b.index(0).unwrap();
            assert_eq!(c.o_z[z2].abs(), l as f64);
            assert_eq!(c.o_z[vac], 0.0);
        }
    }

    #[test]
    fn pulse_order_conjugates() {
        let b = obc(8);
        let p = PxpParams::new(8, 1.0, 15.0, 8.5, Boundary::Obc).unwrap();
        let q = PxpParams { order: PulseOrder::PlusFirst, ..p };
        let f = fidelity_run(&pxp_floquet(&p, &b, Path::Dense).unwrap(), &b, PxpInitial::Z2, 30).unwrap();
        let g = fidelity_run(&pxp_floquet(&q, &b, Path::Dense).unwrap(), &b, PxpInitial::Z2, 30).unwrap();
        assert!(f.values.iter().zip(&g.values).all(|(a, b)| (a - b).abs() < 1e-10));
        let (h1p, h1q) = (pxp_hf1(&p, &b).unwrap(), pxp_hf1(&q, &b).unwrap());
        assert!(h1p.sub(&h1q.adjoint().adjoint()).max_abs() > 1e-3);
        let conj = SparseOperator::from_triplets(b.dim(), h1q.entries().map(|(r, c, v)| (r, c, v.conj())).collect());
        assert!(h1p.sub(&conj).max_abs() < 1e-14);
    }

    #[test]
    fn scan_overlaps_sum_to_one() {
        let p = PxpParams::new(10, 1.0, 15.0, 8.5, Boundary::Obc).unwrap();
        let b = p.basis().unwrap();
        let r = eigenstate_scan(&pxp_floquet(&p, &b, Path::Dense).unwrap(), &b).unwrap();
        let total: f64 = r.overlap("Z2").unwrap().iter().sum();
        assert!((total - 1.0).abs() < 1e-8);
        let (head, _) = r.table();
        assert_eq!(head, vec!["eps", "S_half", "ov_Z2", "ov_0", "O22"]);
    }
}
