use super::basis::FockBasis;
use super::entropy::entanglement_entropy;
use super::floquet::FloquetOperator;
use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix};
use crate::C64;
use std::f64::consts::PI;

pub const DEGENERACY_GAP: f64 = 1e-12;

/// Floquet eigenstates sorted by quasienergy, with optional per-state columns.
#[derive(Debug, Clone)]
pub struct EigenReport {
    pub period: f64,
    /// in `(-pi/T, pi/T]`, ascending
    pub quasienergies: Vec<f64>,
    /// columns are eigenvectors, in the order of `quasienergies`
    pub vectors: DenseMatrix,
    pub entropies: Option<Vec<f64>>,
    pub overlaps: Vec<(String, Vec<f64>)>,
    pub observables: Vec<(String, Vec<f64>)>,
    /// indices `i` such that `eps[i+1] - eps[i]` (cyclically) is below [`DEGENERACY_GAP`]
    pub near_degenerate: Vec<usize>,
}

/// Principal quasienergy `-arg(z)/T` in `(-pi/T, pi/T]`.
pub fn fold_quasienergy(z: C64, period: f64) -> f64 {
    let mut e = -z.arg() / period;
    if e <= -PI / period {
        e = PI / period;
    }
    e
}

pub fn quasienergies(u: &FloquetOperator) -> Result<EigenReport> {
    let m = u
        .dense()
        .ok_or_else(|| Error::invalid("quasienergy analysis needs the dense propagator"))?;
    let eig = linalg::unitary_eigen(m)?;
    let t = u.period();
    let mut order: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &z)| (fold_quasienergy(z, t), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let n = order.len();
    let vectors = faer::Mat::from_fn(n, n, |i, j| eig.vectors.read(i, order[j].1));
    let quasienergies: Vec<f64> = order.iter().map(|o| o.0).collect();
    let mut near_degenerate = Vec::new();
    for i in 0..n {
        let gap = if i + 1 < n {
            quasienergies[i + 1] - quasienergies[i]
        } else {
            quasienergies[0] + 2.0 * PI / t - quasienergies[i]
        };
        if n > 1 && gap < DEGENERACY_GAP {
            near_degenerate.push(i);
        }
    }
    Ok(EigenReport {
        period: t,
        quasienergies,
        vectors,
        entropies: None,
        overlaps: Vec::new(),
        observables: Vec::new(),
        near_degenerate,
    })
}

impl EigenReport {
    pub fn len(&self) -> usize {
        self.quasienergies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quasienergies.is_empty()
    }

    pub fn vector(&self, j: usize) -> Vec<C64> {
        linalg::column(&self.vectors, j)
    }

    pub fn with_entropy(mut self, basis: &FockBasis, cut: usize) -> Result<Self> {
        let s = (0..self.len())
            .map(|j| entanglement_entropy(&self.vector(j), basis, cut))
            .collect::<Result<Vec<_>>>()?;
        self.entropies = Some(s);
        Ok(self)
    }

    /// Adds `|<ref|E>|^2` for every eigenstate.
    pub fn with_overlap(mut self, name: &str, reference: &[C64]) -> Result<Self> {
        if reference.len() != self.vectors.nrows() {
            return Err(Error::invalid(format!("reference '{name}' has the wrong dimension")));
        }
        let v = (0..self.len())
            .map(|j| {
                let e = self.vector(j);
                reference.iter().zip(&e).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr()
            })
            .collect();
        self.overlaps.push((name.to_string(), v));
        Ok(self)
    }

    /// Adds `Re <E|O|E>` for every eigenstate.
    pub fn with_observable(mut self, name: &str, op: &SparseOperator) -> Result<Self> {
        if op.dim() != self.vectors.nrows() {
            return Err(Error::invalid(format!("observable '{name}' has the wrong dimension")));
        }
        let v = (0..self.len()).map(|j| op.expectation(&self.vector(j)).re).collect();
        self.observables.push((name.to_string(), v));
        Ok(self)
    }

    pub fn overlap(&self, name: &str) -> Option<&[f64]> {
        self.overlaps.iter().find(|o| o.0 == name).map(|o| o.1.as_slice())
    }

    pub fn observable(&self, name: &str) -> Option<&[f64]> {
        self.observables.iter().find(|o| o.0 == name).map(|o| o.1.as_slice())
    }

    /// Column names and rows for tabular output: `eps, S_half, ov_*, *`.
    pub fn table(&self) -> (Vec<String>, Vec<Vec<f64>>) {
        let mut header = vec!["eps".to_string()];
        if self.entropies.is_some() {
            header.push("S_half".to_string());
        }
        header.extend(self.overlaps.iter().map(|o| format!("ov_{}", o.0)));
        header.extend(self.observables.iter().map(|o| o.0.clone()));
        let rows = (0..self.len())
            .map(|j| {
                let mut r = vec![self.quasienergies[j]];
                if let Some(s) = &self.entropies {
                    r.push(s[j]);
                }
                r.extend(self.overlaps.iter().map(|o| o.1[j]));
                r.extend(self.observables.iter().map(|o| o.1[j]));
                r
            })
            .collect();
        (header, rows)
    }
}
