//! Occupation fluctuation `<n^2>(t)` of free fermions in an AC field.

use crate::bessel::bessel_j;
use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcLatticeParams {
    pub j_prime: f64,
    pub e0: f64,
    pub omega: f64,
    pub l: usize,
    pub filling: f64,
}

impl Default for AcLatticeParams {
    fn default() -> Self {
        AcLatticeParams { j_prime: 1.0, e0: 1.0, omega: 1.0, l: 1000, filling: 0.5 }
    }
}

impl AcLatticeParams {
    /// Parameters with `E_0 / omega = x` at `E_0 = 1`.
    pub fn at_ratio(x: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::invalid(format!("x = E_0/omega must be positive, got {x}")));
        }
        let p = AcLatticeParams { omega: 1.0 / x, ..Default::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn x(&self) -> f64 {
        self.e0 / self.omega
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::invalid("omega must be positive"));
        }
        if !(self.e0.is_finite() && self.j_prime.is_finite()) {
            return Err(Error::invalid("E_0 and J' must be finite"));
        }
        if self.filling == 0.5 && self.l % 2 != 0 {
            return Err(Error::invalid("half filling needs even L"));
        }
        if !(self.filling > 0.0 && self.filling <= 1.0) {
            return Err(Error::invalid("filling must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// `(mu(t), nu(t))`; `+-n` terms are paired so `mu` keeps even and `nu` odd orders.
pub fn mu_nu(t: f64, x: f64, omega: f64, tol: f64) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let (mut mu, mut nu) = (0.0, 0.0);
    let mut n = 1u32;
    loop {
        let jn = bessel_j(n, x);
        let nw = n as f64 * omega;
        let th = nw * t;
        if n % 2 == 0 {
            mu += 2.0 * jn * th.sin() / nw;
        } else {
            nu += 2.0 * jn * (1.0 - th.cos()) / nw;
        }
        if n as f64 > x && jn.abs() * 2.0 / nw < tol {
            break;
        }
        if n > 400 {
            return Err(Error::NonConvergence { what: "Bessel series", iterations: n as usize, residual: jn.abs() });
        }
        n += 1;
    }
    Ok((mu, nu))
}

const SERIES_TOL: f64 = 1e-15;

/// `2 J' [(J_0(x) t + mu)^2 + nu^2]`, half filling only.
pub fn n2_analytic(t: f64, p: &AcLatticeParams) -> Result<f64> {
    p.validate()?;
    if p.filling != 0.5 {
        return Err(Error::invalid("the closed form holds at half filling only"));
    }
    let x = p.x();
    let (mu, nu) = mu_nu(t, x, p.omega, SERIES_TOL)?;
    Ok(2.0 * p.j_prime * ((bessel_j(0, x) * t + mu).powi(2) + nu.powi(2)))
}

/// Mean over the occupied momenta of `(d f / d k)^2`, with the phase
/// `f(k, t) = -2J' int_0^t cos(k + A(t')) dt'`, `A(t) = -x sin(omega t)`,
/// integrated by adaptive quadrature for each `k`.
pub fn n2_numeric(t: f64, p: &AcLatticeParams) -> Result<f64> {
    p.validate()?;
    let l = p.l;
    let occupied = (p.filling * l as f64).round() as i64;
    let x = p.x();
    // a contiguous block of occupied momenta centred on k = 0
    let first = -(occupied / 2) + 1 - (occupied % 2);
    let mut acc = 0.0;
    for m in first..first + occupied {
        let k = 2.0 * PI * m as f64 / l as f64;
        let dfdk = 2.0 * p.j_prime * integrate(|s| (k - x * (p.omega * s).sin()).sin(), 0.0, t, p.period())?;
        acc += dfdk * dfdk;
    }
    Ok(acc / occupied as f64)
}

const QUAD_TOL: f64 = 1e-13;
const QUAD_DEPTH: u32 = 40;

/// Adaptive Simpson over panels no longer than `panel`.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panel: f64) -> Result<f64> {
    if b == a {
        return Ok(0.0);
    }
    let panels = ((b - a).abs() / panel).ceil().max(1.0) as usize * 4;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        let (f0, f1, fm) = (f(x0), f(x1), f(0.5 * (x0 + x1)));
        let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson(&f, x0, x1, f0, fm, f1, whole, QUAD_TOL / panels as f64, QUAD_DEPTH)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NonConvergence { what: "adaptive quadrature", iterations: QUAD_DEPTH as usize, residual: delta.abs() });
    }
    Ok(simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Largest `<n^2>` on a uniform grid of `samples` points over one period.
pub fn one_period_max(p: &AcLatticeParams, samples: usize) -> Result<f64> {
    let t = p.period();
    (0..=samples).try_fold(0.0f64, |m, i| Ok(m.max(n2_analytic(t * i as f64 / samples as f64, p)?)))
}
