use super::basis::{Constraint, FockBasis};
use crate::error::{Error, Result};
use crate::linalg::to_faer;
use crate::C64;
use faer::complex_native::c64;
use faer::Mat;
use std::collections::{BTreeMap, HashMap};

const NORM_TOL: f64 = 1e-8;

/// Von Neumann entropy of sites `[0, cut)`.
///
/// Amplitudes are grouped into Schmidt matrices keyed by the left
/// configuration. Configurations outside the sector carry zero amplitude, so
/// this equals the entropy of the state embedded in the full product space.
/// For number sectors the matrix splits into blocks of fixed left particle
/// number.
pub fn entanglement_entropy(state: &[C64], basis: &FockBasis, cut: usize) -> Result<f64> {
    if state.len() != basis.dim() {
        return Err(Error::invalid(format!("state length {} does not match basis dimension {}", state.len(), basis.dim())));
    }
    if cut > basis.sites() {
        return Err(Error::invalid(format!("cut {cut} exceeds chain length {}", basis.sites())));
    }
    let n2: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if (n2.sqrt() - 1.0).abs() > NORM_TOL {
        return Err(Error::BadNorm { norm: n2.sqrt() });
    }
    if cut == 0 || cut == basis.sites() {
        return Ok(0.0);
    }
    let shift = basis.bits_per_site() * cut;
    let mask = (1u64 << shift) - 1;
    let by_charge = matches!(basis.constraint(), Constraint::NumberSector(_));
    // charge -> (left index map, right index map, entries)
    let mut blocks: BTreeMap<u32, Block> = BTreeMap::new();
    for (i, &s) in basis.states().iter().enumerate() {
        let amp = state[i];
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        let (left, right) = (s & mask, s >> shift);
        let charge = if by_charge { left.count_ones() } else { 0 };
        blocks.entry(charge).or_default().push(left, right, amp);
    }
    let mut s = 0.0;
    for block in blocks.values() {
        for p in block.schmidt_weights() {
            if p > 1e-300 {
                s -= p * p.ln();
            }
        }
    }
    Ok(s)
}

#[derive(Default)]
struct Block {
    rows: HashMap<u64, usize>,
    cols: HashMap<u64, usize>,
    entries: Vec<(usize, usize, C64)>,
}

impl Block {
    fn push(&mut self, left: u64, right: u64, amp: C64) {
        let r = self.rows.len();
        let r = *self.rows.entry(left).or_insert(r);
        let c = self.cols.len();
        let c = *self.cols.entry(right).or_insert(c);
        self.entries.push((r, c, amp));
    }

    fn schmidt_weights(&self) -> Vec<f64> {
        let (nr, nc) = (self.rows.len(), self.cols.len());
        if nr == 1 || nc == 1 {
            return vec![self.entries.iter().map(|e| e.2.norm_sqr()).sum()];
        }
        let mut m = Mat::<c64>::zeros(nr, nc);
        for &(r, c, v) in &self.entries {
            m.write(r, c, to_faer(v));
        }
        // eigenvalues of the smaller Gram matrix are the squared singular values
        let g = if nr <= nc { &m * m.adjoint() } else { m.adjoint() * &m };
        g.selfadjoint_eigenvalues(faer::Side::Lower).into_iter().map(|x| x.max(0.0)).collect()
    }
}

/// Mean entanglement of a random pure state, `ln d_A - d_A / (2 d_B)`.
pub fn page_value(dim_a: usize, dim_b: usize) -> Result<f64> {
    if dim_a == 0 || dim_a > dim_b {
        return Err(Error::invalid(format!("page_value needs 0 < dim_A <= dim_B, got ({dim_a}, {dim_b})")));
    }
    Ok((dim_a as f64).ln() - dim_a as f64 / (2.0 * dim_b as f64))
}
