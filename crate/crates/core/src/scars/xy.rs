//! Spin-one XY chain in a field and its bimagnon tower.

use crate::ed::{Constraint, FockBasis, SparseOperator};
use crate::error::{Error, Result};
use crate::C64;

pub const MAX_SITES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyParams {
    pub l: usize,
    pub j: f64,
    pub b0: f64,
}

impl XyParams {
    pub fn new(l: usize, j: f64, b0: f64) -> Result<Self> {
        let p = XyParams { l, j, b0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 || self.l > MAX_SITES {
            return Err(Error::invalid(format!("XY chain needs 2 <= L <= {MAX_SITES}, got {}", self.l)));
        }
        if !(self.j.is_finite() && self.b0.is_finite()) {
            return Err(Error::invalid("J and B_0 must be finite"));
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<FockBasis> {
        FockBasis::build(self.l, Constraint::FullSpinOne)
    }
}

/// `m` of local code `c` (codes 0, 1, 2 are m = -1, 0, +1).
fn m_of(code: u64) -> f64 {
    code as f64 - 1.0
}

fn check_spin_one(basis: &FockBasis) -> Result<()> {
    if !basis.is_spin_one() {
        return Err(Error::invalid("spin-one basis required"));
    }
    Ok(())
}

/// `S^+ = (S^x + i S^y)/2`, so `<m+1|S^+|m> = sqrt(2)/2` for spin one.
const HALF_RAISE: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// `-J sum_<ij> (S_i^+ S_j^- + h.c.) - B_0 sum S^z` on an open chain.
pub fn xy_hamiltonian(p: &XyParams, basis: &FockBasis) -> Result<SparseOperator> {
    p.validate()?;
    check_spin_one(basis)?;
    if basis.sites() != p.l {
        return Err(Error::invalid("basis length differs from L"));
    }
    let mut t = Vec::new();
    for (c, &s) in basis.states().iter().enumerate() {
        let sz: f64 = (0..p.l).map(|i| m_of(basis.local(s, i))).sum();
        t.push((c, c, C64::new(-p.b0 * sz, 0.0)));
        for i in 0..p.l - 1 {
            for (a, b) in [(i, i + 1), (i + 1, i)] {
                let (ma, mb) = (basis.local(s, a), basis.local(s, b));
                if ma == 2 || mb == 0 {
                    continue;
                }
                let s2 = basis.with_local(basis.with_local(s, a, ma + 1), b, mb - 1);
                let r = basis.index(s2).expect("spin-one basis is complete");
                t.push((r, c, C64::new(-p.j * HALF_RAISE * HALF_RAISE, 0.0)));
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), t))
}

/// `(J_+, J_-, J_z)` with `J_+ = sum_l (-1)^l |+1><-1|_l` and `J_z = [J_+, J_-]/2`.
pub fn su2_generators(basis: &FockBasis) -> Result<(SparseOperator, SparseOperator, SparseOperator)> {
    check_spin_one(basis)?;
    let mut t = Vec::new();
    for (c, &s) in basis.states().iter().enumerate() {
        for l in 0..basis.sites() {
            if basis.local(s, l) == 0 {
                let r = basis.index(basis.with_local(s, l, 2)).expect("spin-one basis is complete");
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                t.push((r, c, C64::new(sign, 0.0)));
            }
        }
    }
    let jp = SparseOperator::from_triplets(basis.dim(), t);
    let jm = jp.adjoint();
    let jz = jp.commutator(&jm).scaled(C64::new(0.5, 0.0));
    Ok((jp, jm, jz))
}

/// Total `sum_l S^z_l` as a diagonal operator.
pub fn total_sz(basis: &FockBasis) -> Vec<f64> {
    basis
        .states()
        .iter()
        .map(|&s| (0..basis.sites()).map(|i| m_of(basis.local(s, i))).sum())
        .collect()
}

#[derive(Debug, Clone)]
pub struct Tower {
    pub states: Vec<Vec<C64>>,
    /// `<n|H|n>`
    pub energies: Vec<f64>,
    /// `max_n ||H|n> - E_n|n>||`
    pub max_residual: f64,
    /// `<n+1|J_+|n>`
    pub ladder: Vec<f64>,
}

impl Tower {
    /// `E_{n+1} - E_n`, with the largest deviation from the mean spacing.
    pub fn spacing(&self) -> (f64, f64) {
        let d: Vec<f64> = self.energies.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        (mean, d.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max))
    }
}

/// `|n> ~ (J_+)^n |-1,...,-1>` for n = 0..=L.
pub fn bimagnon_tower(p: &XyParams) -> Result<Tower> {
    p.validate()?;
    let basis = p.basis()?;
    let h = xy_hamiltonian(p, &basis)?;
    let (jp, _, _) = su2_generators(&basis)?;
    let g = basis.product_state(0)?;
    let mut states = vec![g];
    let mut ladder = Vec::new();
    for n in 0..p.l {
        let next = jp.apply(&states[n]);
        let norm = next.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::Numerical(format!("tower state {} vanished before n = L", n + 1)));
        }
        ladder.push(norm);
        states.push(next.into_iter().map(|z| z / norm).collect());
    }
    let top = jp.apply(&states[p.l]);
    if top.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-20 {
        return Err(Error::Numerical("J_+ does not annihilate the top of the tower".into()));
    }
    let mut energies = Vec::new();
    let mut max_residual = 0.0f64;
    for s in &states {
        let hs = h.apply(s);
        let e = s.iter().zip(&hs).map(|(a, b)| a.conj() * b).sum::<C64>().re;
        let r = hs.iter().zip(s).map(|(a, b)| (a - b * e).norm_sqr()).sum::<f64>().sqrt();
        energies.push(e);
        max_residual = max_residual.max(r);
    }
    Ok(Tower { states, energies, max_residual, ladder })
}

/// Spin-`L/2` ladder coefficient `<n+1|J_+|n> = sqrt((n+1)(L-n))`.
pub fn ladder_coefficient(l: usize, n: usize) -> f64 {
    (((n + 1) * (l - n)) as f64).sqrt()
}
