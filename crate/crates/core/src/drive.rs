//! Drive waveforms and the special frequencies at which the leading Floquet
//! Hamiltonian acquires an extra conservation law.
//!
//! Units: `hbar = 1` everywhere.

use crate::bessel::{bessel_j, bessel_zero};
use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveKind {
    /// `h_s + h_1 cos(omega t) + i gamma`
    Cosine,
    /// `-amplitude` on `[0, T/2]`, `+amplitude` on `(T/2, T]`
    SquarePulse,
    /// instantaneous kick of the given angle at every `t = kT`
    DeltaKick,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveProtocol {
    pub kind: DriveKind,
    pub amplitude: f64,
    pub offset: f64,
    pub gamma: f64,
    pub period: f64,
}

impl DriveProtocol {
    pub fn cosine(amplitude: f64, offset: f64, gamma: f64, omega: f64) -> Result<Self> {
        Self::new(DriveKind::Cosine, amplitude, offset, gamma, 2.0 * PI / omega)
    }

    pub fn square_pulse(amplitude: f64, omega: f64) -> Result<Self> {
        Self::new(DriveKind::SquarePulse, amplitude, 0.0, 0.0, 2.0 * PI / omega)
    }

    pub fn delta_kick(angle: f64, period: f64) -> Result<Self> {
        Self::new(DriveKind::DeltaKick, angle, 0.0, 0.0, period)
    }

    pub fn new(kind: DriveKind, amplitude: f64, offset: f64, gamma: f64, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::invalid(format!("drive period must be positive, got {period}")));
        }
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::invalid(format!("drive amplitude must be >= 0, got {amplitude}")));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::invalid(format!("dissipation must be >= 0, got {gamma}")));
        }
        if gamma > 0.0 && kind != DriveKind::Cosine {
            return Err(Error::invalid("dissipation is only defined for the cosine protocol"));
        }
        if !offset.is_finite() {
            return Err(Error::invalid("offset must be finite"));
        }
        Ok(DriveProtocol { kind, amplitude, offset, gamma, period })
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Real part of the time-dependent coupling. Kicks have no finite-time value
    /// (they are applied as unitaries), so this returns the offset for them.
    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            DriveKind::Cosine => self.offset + self.amplitude * (self.omega() * t).cos(),
            DriveKind::SquarePulse => {
                let phase = t.rem_euclid(self.period);
                if phase <= 0.5 * self.period {
                    self.offset - self.amplitude
                } else {
                    self.offset + self.amplitude
                }
            }
            DriveKind::DeltaKick => self.offset,
        }
    }

    /// Argument whose vanishing suppression factor defines freezing:
    /// `mu = 4 h_1 / omega` (cosine) or `h_1 T` (square pulse; a chain with
    /// `gamma_1 = V_1 T / 4` corresponds to amplitude `V_1 / 4`).
    pub fn freezing_argument(&self) -> Result<f64> {
        match self.kind {
            DriveKind::Cosine => Ok(4.0 * self.amplitude / self.omega()),
            DriveKind::SquarePulse => Ok(self.amplitude * self.period),
            DriveKind::DeltaKick => Err(Error::invalid("kicks have no freezing argument")),
        }
    }

    /// `J_0(mu)` for the cosine drive, `sin(gamma_1)/gamma_1` for the square pulse.
    pub fn suppression_factor(&self) -> Result<f64> {
        let arg = self.freezing_argument()?;
        Ok(match self.kind {
            DriveKind::Cosine => bessel_j(0, arg),
            _ => sinc(arg),
        })
    }
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    }
}

/// Angular frequency `omega_n^*` at which the suppression factor vanishes.
///
/// Cosine: `4 h_1 / beta_n`; square pulse: `2 h_1 / n`.
pub fn special_frequency(kind: DriveKind, amplitude: f64, n: usize) -> Result<f64> {
    if !(amplitude > 0.0) {
        return Err(Error::invalid("special frequencies need a positive amplitude"));
    }
    if n < 1 {
        return Err(Error::invalid("special frequency index starts at 1"));
    }
    match kind {
        DriveKind::Cosine => Ok(4.0 * amplitude / bessel_zero(n)?),
        DriveKind::SquarePulse => Ok(2.0 * amplitude / n as f64),
        DriveKind::DeltaKick => Err(Error::invalid("no freezing frequency is defined for kicks")),
    }
}
