use num_complex::Complex64;

use super::fresnel::{branch_fix, interface_coefficients, Polarization};
use super::{DrudeMetal, LayerStack};
use crate::constants::C;
use crate::error::{Error, Result};

/// Body filling `z < 0` as seen by an atom in vacuum at `z > 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    /// Drude half-space.
    Drude(DrudeMetal),
    /// Non-dispersive half-space with constant permittivity.
    Dielectric(Complex64),
    /// Glass / film / vacuum stack. Real frequencies inside the glass table only.
    Stack(LayerStack),
}

/// `(r_TE, r_TM)` pair.
pub type Reflection<T> = (T, T);

impl Surface {
    pub fn gold() -> Self {
        Surface::Drude(DrudeMetal::gold())
    }

    /// Ω_P of the metal in contact with vacuum.
    pub fn plasma_frequency(&self) -> Option<f64> {
        match self {
            Surface::Drude(m) => Some(m.plasma_frequency()),
            Surface::Stack(s) => Some(s.film.plasma_frequency()),
            Surface::Dielectric(_) => None,
        }
    }

    pub fn relaxation_rate(&self) -> Option<f64> {
        match self {
            Surface::Drude(m) => Some(m.relaxation_rate()),
            Surface::Stack(s) => Some(s.film.relaxation_rate()),
            Surface::Dielectric(_) => None,
        }
    }

    /// Reflection amplitudes at real ω > 0, parametrized by the vacuum normal
    /// component `κ` (real for evanescent waves, `−iq` for propagating ones).
    pub fn reflection_real(&self, omega: f64, kappa: Complex64) -> Result<Reflection<Complex64>> {
        let q2 = (omega / C).powi(2);
        let one = Complex64::new(1.0, 0.0);
        // κ_m² = κ² + (1 − ε)ω²/c², formed without the cancellation in k² − εω²/c².
        let inside = |susc_w2: Complex64| branch_fix((kappa * kappa + susc_w2).sqrt());
        match self {
            Surface::Drude(m) => {
                let wp = m.plasma_frequency();
                let s = wp * wp * omega / (Complex64::new(omega, m.relaxation_rate()) * C * C);
                let eps = one - wp * wp / (omega * Complex64::new(omega, m.relaxation_rate()));
                let km = inside(s);
                pair(one, kappa, eps, km)
            }
            Surface::Dielectric(eps) => {
                let km = inside((one - eps) * q2);
                pair(one, kappa, *eps, km)
            }
            Surface::Stack(stack) => {
                let eps_m = stack.film.permittivity(omega)?;
                let eps_g = stack.glass.permittivity(omega)?;
                let km = inside((one - eps_m) * q2);
                let kg = inside((one - eps_g) * q2);
                let p2 = (-2.0 * km * stack.thickness()).exp();
                let mut out = [Complex64::new(0.0, 0.0); 2];
                for (i, pol) in [Polarization::TE, Polarization::TM].into_iter().enumerate() {
                    let (r_vm, _) = interface_coefficients(pol, one, kappa, eps_m, km)?;
                    let (r_mg, _) = interface_coefficients(pol, eps_m, km, eps_g, kg)?;
                    out[i] = (r_vm + r_mg * p2) / (1.0 + r_vm * r_mg * p2);
                }
                Ok((out[0], out[1]))
            }
        }
    }

    /// Reflection amplitudes at imaginary frequency ω = iξ, ξ > 0, with the
    /// real vacuum `κ = √(k² + ξ²/c²)`.
    pub fn reflection_imag(&self, xi: f64, kappa: f64) -> Result<Reflection<f64>> {
        let (eps, susc_xi2) = match self {
            Surface::Drude(m) => {
                let wp = m.plasma_frequency();
                // (ε(iξ) − 1)ξ² stays finite as ξ → 0.
                (m.permittivity_imag_axis(xi), wp * wp * xi / (xi + m.relaxation_rate()))
            }
            Surface::Dielectric(eps) => {
                if eps.im != 0.0 {
                    return Err(Error::Unsupported(
                        "lossy constant permittivity has no causal continuation to imaginary frequency".into(),
                    ));
                }
                (eps.re, (eps.re - 1.0) * xi * xi)
            }
            Surface::Stack(_) => {
                return Err(Error::Unsupported(
                    "tabulated glass has no imaginary-frequency permittivity".into(),
                ))
            }
        };
        let km = (kappa * kappa + susc_xi2 / (C * C)).sqrt();
        let te = (kappa - km) / (kappa + km);
        let tm = (eps * kappa - km) / (eps * kappa + km);
        Ok((te, tm))
    }

    /// TM reflection in the static limit ξ → 0: 1 for a metal, (ε−1)/(ε+1) otherwise.
    pub fn static_tm_reflection(&self) -> Result<f64> {
        match self {
            Surface::Drude(_) => Ok(1.0),
            Surface::Dielectric(eps) if eps.im == 0.0 => Ok((eps.re - 1.0) / (eps.re + 1.0)),
            Surface::Dielectric(_) | Surface::Stack(_) => Err(Error::Unsupported(
                "static reflection needs a causal model at zero frequency".into(),
            )),
        }
    }

    /// Lossless surface-plasmon wavevector at ω (metal half-space only).
    pub(crate) fn plasmon_kappa(&self, omega: f64) -> Option<f64> {
        let wp = self.plasma_frequency()?;
        let w2 = omega * omega;
        let wp2 = wp * wp;
        if 2.0 * w2 >= wp2 {
            return None;
        }
        let k2 = w2 / (C * C) * (w2 - wp2) / (2.0 * w2 - wp2);
        Some((k2 - w2 / (C * C)).max(0.0).sqrt())
    }
}

fn pair(
    eps_out: Complex64,
    kappa: Complex64,
    eps: Complex64,
    km: Complex64,
) -> Result<Reflection<Complex64>> {
    let (te, _) = interface_coefficients(Polarization::TE, eps_out, kappa, eps, km)?;
    let (tm, _) = interface_coefficients(Polarization::TM, eps_out, kappa, eps, km)?;
    Ok((te, tm))
}
