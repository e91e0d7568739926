use num_complex::Complex64;

use crate::constants::{ev_to_rad_s, C};
use crate::error::{Error, Result};

/// Free-electron (Drude) metal, `ε(ω) = 1 − Ω_P² / [ω(ω + iΓ)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeMetal {
    plasma_frequency: f64,
    relaxation_rate: f64,
}

impl DrudeMetal {
    pub fn new(plasma_frequency: f64, relaxation_rate: f64) -> Result<Self> {
        if !(plasma_frequency > 0.0 && plasma_frequency.is_finite()) {
            return Err(Error::Domain(format!(
                "plasma frequency must be positive, got {plasma_frequency:e}"
            )));
        }
        if !(relaxation_rate >= 0.0 && relaxation_rate.is_finite()) {
            return Err(Error::Domain(format!(
                "relaxation rate must be non-negative, got {relaxation_rate:e}"
            )));
        }
        Ok(Self {
            plasma_frequency,
            relaxation_rate,
        })
    }

    /// Gold with Ω_P = 9 eV and Γ = 35 meV.
    pub fn gold() -> Self {
        Self {
            plasma_frequency: ev_to_rad_s(9.0),
            relaxation_rate: ev_to_rad_s(0.035),
        }
    }

    pub fn from_ev(plasma_ev: f64, relaxation_ev: f64) -> Result<Self> {
        Self::new(ev_to_rad_s(plasma_ev), ev_to_rad_s(relaxation_ev))
    }

    pub fn plasma_frequency(&self) -> f64 {
        self.plasma_frequency
    }

    pub fn relaxation_rate(&self) -> f64 {
        self.relaxation_rate
    }

    /// Asymptotic surface-plasmon frequency Ω_sp = Ω_P/√2.
    pub fn surface_plasmon_frequency(&self) -> f64 {
        self.plasma_frequency / std::f64::consts::SQRT_2
    }

    /// Plasma wavelength λ_P = 2πc/Ω_P.
    pub fn plasma_wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI * C / self.plasma_frequency
    }

    /// The same metal with Γ set to zero.
    pub fn lossless(&self) -> Self {
        Self {
            relaxation_rate: 0.0,
            ..*self
        }
    }

    /// Permittivity on the real frequency axis.
    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0) {
            return Err(Error::Domain(format!(
                "Drude permittivity needs ω > 0, got {omega:e}"
            )));
        }
        Ok(drude_permittivity_unchecked(
            omega,
            self.plasma_frequency,
            self.relaxation_rate,
        ))
    }

    /// Permittivity at imaginary frequency ω = iξ (real and > 1).
    pub fn permittivity_imag_axis(&self, xi: f64) -> f64 {
        let wp = self.plasma_frequency;
        1.0 + wp * wp / (xi * (xi + self.relaxation_rate))
    }
}

pub(crate) fn drude_permittivity_unchecked(omega: f64, wp: f64, gamma: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) - wp * wp / (omega * Complex64::new(omega, gamma))
}

/// `ε(ω) = 1 − Ω_P²/[ω(ω + iΓ)]`.
pub fn drude_permittivity(omega: f64, metal: &DrudeMetal) -> Result<Complex64> {
    metal.permittivity(omega)
}
