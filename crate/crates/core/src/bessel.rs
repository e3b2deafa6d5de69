//! Bessel functions of the first kind and the zeros of `J_0`.
//!
//! Small arguments use the ascending power series. Everything else goes through
//! Miller's downward recurrence normalised by `J_0 + 2 sum_k J_2k = 1`, which is
//! stable for every order because only the minimal solution survives the
//! downward sweep.

use crate::error::{Error, Result};
use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 1.0;
const RESCALE_AT: f64 = 1e250;

/// `J_n(x)` for integer order `n >= 0`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n % 2 == 0 { v } else { -v };
    }
    if x <= SERIES_LIMIT {
        return ascending_series(n, x);
    }
    miller(n, x)
}

/// All orders `J_0(x) .. J_nmax(x)` from a single downward sweep.
pub fn bessel_j_table(nmax: u32, x: f64) -> Vec<f64> {
    if x == 0.0 || x.abs() <= SERIES_LIMIT {
        return (0..=nmax).map(|n| bessel_j(n, x)).collect();
    }
    let sign_flip = x < 0.0;
    let ax = x.abs();
    let mut out = miller_table(nmax, ax);
    if sign_flip {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

fn ascending_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // (x/2)^n / n!
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / k as f64;
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = term;
    for k in 1..60 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn start_order(n: u32, x: f64) -> usize {
    let top = (n as f64).max(x);
    let m = (top + 30.0 + (40.0 * top).sqrt()).ceil() as usize;
    m + (m % 2)
}

fn miller(n: u32, x: f64) -> f64 {
    let m = start_order(n, x);
    let two_over_x = 2.0 / x;
    let mut above = 0.0; // j_{k+1}
    let mut cur = 1e-30; // j_k
    let mut norm = 0.0;
    let mut answer = 0.0;
    for k in (1..=m).rev() {
        if k == n as usize {
            answer = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let below = k as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            above /= RESCALE_AT;
            norm /= RESCALE_AT;
            answer /= RESCALE_AT;
        }
    }
    if n == 0 {
        answer = cur;
    }
    norm += cur;
    answer / norm
}

fn miller_table(nmax: u32, x: f64) -> Vec<f64> {
    let m = start_order(nmax, x);
    let two_over_x = 2.0 / x;
    let mut vals = vec![0.0; m + 2];
    vals[m] = 1e-30;
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        if k % 2 == 0 {
            norm += 2.0 * vals[k];
        }
        vals[k - 1] = k as f64 * two_over_x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > RESCALE_AT {
            for v in vals[k - 1..].iter_mut() {
                *v /= RESCALE_AT;
            }
            norm /= RESCALE_AT;
        }
    }
    norm += vals[0];
    vals.truncate(nmax as usize + 1);
    vals.iter().map(|v| v / norm).collect()
}

/// The `n`-th positive zero of `J_0` (`n >= 1`).
pub fn bessel_zero(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("bessel_zero requires n >= 1"));
    }
    // McMahon's asymptotic estimate is within 0.01 of the root already at n = 1.
    let b = (n as f64 - 0.25) * PI;
    let mut x = b + 1.0 / (8.0 * b);
    for _ in 0..50 {
        let step = bessel_j(0, x) / bessel_j(1, x);
        x += step;
        if step.abs() < 1e-15 * x {
            break;
        }
    }
    // polish by bisection on a tight bracket in case Newton stalled on a flat spot
    let (mut lo, mut hi) = (x - 1e-9, x + 1e-9);
    let (flo, fhi) = (bessel_j(0, lo), bessel_j(0, hi));
    if flo * fhi > 0.0 {
        return Err(Error::NonConvergence {
            what: "bessel_zero",
            iterations: 50,
            residual: bessel_j(0, x).abs(),
        });
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if bessel_j(0, mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
