use num_complex::Complex64;

use super::fresnel::{interface_coefficients, kappa_unchecked, Polarization};
use super::{DrudeMetal, TabulatedDielectric};
use crate::constants::C;
use crate::error::{Error, Result};

/// Glass half-space / metal film / vacuum half-space (Kretschmann geometry).
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    pub glass: TabulatedDielectric,
    pub film: DrudeMetal,
    thickness: f64,
}

impl LayerStack {
    pub fn new(glass: TabulatedDielectric, film: DrudeMetal, thickness: f64) -> Result<Self> {
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(Error::Domain(format!(
                "film thickness must be positive, got {thickness:e}"
            )));
        }
        Ok(Self {
            glass,
            film,
            thickness,
        })
    }

    /// Sapphire / 50 nm gold / vacuum.
    pub fn sapphire_gold_50nm() -> Result<Self> {
        Self::new(TabulatedDielectric::sapphire()?, DrudeMetal::gold(), 50e-9)
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn with_thickness(&self, thickness: f64) -> Result<Self> {
        Self::new(self.glass.clone(), self.film, thickness)
    }

    /// Real part of the glass refractive index.
    pub fn glass_index(&self, omega: f64) -> Result<f64> {
        Ok(self.glass.refractive_index(omega)?.re)
    }

    /// TM field transmission glass → vacuum through the film:
    ///
    /// `t_str = t_gl/m t_m/vac e^{−κ_m δ} / (1 + r_gl/m r_m/vac e^{−2κ_m δ})`.
    pub fn t_str(&self, omega: f64, k: f64) -> Result<Complex64> {
        let eps_gl = self.glass.permittivity(omega)?;
        let k_max = eps_gl.re.sqrt() * omega / C;
        if !(k >= 0.0 && k <= k_max * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "in-plane wavevector {k:e} outside [0, n_gl ω/c = {k_max:e}]"
            )));
        }
        let eps_m = self.film.permittivity(omega)?;
        let one = Complex64::new(1.0, 0.0);
        let kg = kappa_unchecked(omega, k, eps_gl);
        let km = kappa_unchecked(omega, k, eps_m);
        let kv = kappa_unchecked(omega, k, one);
        let (r_gm, t_gm) = interface_coefficients(Polarization::TM, eps_gl, kg, eps_m, km)?;
        let (r_mv, t_mv) = interface_coefficients(Polarization::TM, eps_m, km, one, kv)?;
        let phase = (-km * self.thickness).exp();
        let den = 1.0 + r_gm * r_mv * phase * phase;
        if den.norm() < 1e-14 {
            return Err(Error::Pole("stack transmission denominator vanishes".into()));
        }
        Ok(t_gm * t_mv * phase / den)
    }

    /// Reflection seen from the vacuum side of the stack.
    pub fn reflection_from_vacuum(&self, omega: f64, k: f64, pol: Polarization) -> Result<Complex64> {
        let eps_gl = self.glass.permittivity(omega)?;
        let eps_m = self.film.permittivity(omega)?;
        let one = Complex64::new(1.0, 0.0);
        let kg = kappa_unchecked(omega, k, eps_gl);
        let km = kappa_unchecked(omega, k, eps_m);
        let kv = kappa_unchecked(omega, k, one);
        let (r_vm, _) = interface_coefficients(pol, one, kv, eps_m, km)?;
        let (r_mg, _) = interface_coefficients(pol, eps_m, km, eps_gl, kg)?;
        let p2 = (-2.0 * km * self.thickness).exp();
        Ok((r_vm + r_mg * p2) / (1.0 + r_vm * r_mg * p2))
    }
}

/// Critical angle `θ_T = arcsin(1/n_gl)` of the bare glass/vacuum interface.
pub fn tir_angle(glass: &TabulatedDielectric, omega: f64) -> Result<f64> {
    let n = glass.refractive_index(omega)?.re;
    tir_angle_for_index(n)
}

pub fn tir_angle_for_index(n: f64) -> Result<f64> {
    if !(n > 1.0) {
        return Err(Error::Domain(format!(
            "no total internal reflection for n = {n} ≤ 1"
        )));
    }
    Ok((1.0 / n).asin())
}

/// Transmission of a single glass → vacuum interface (TM).
pub fn glass_vacuum_t(glass: &TabulatedDielectric, omega: f64, k: f64) -> Result<Complex64> {
    let eps_gl = glass.permittivity(omega)?;
    let one = Complex64::new(1.0, 0.0);
    let kg = kappa_unchecked(omega, k, eps_gl);
    let kv = kappa_unchecked(omega, k, one);
    interface_coefficients(Polarization::TM, eps_gl, kg, one, kv).map(|(_, t)| t)
}
