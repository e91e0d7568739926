//! Wavevector components and Fresnel coefficients for planar interfaces.
//!
//! Conventions: fields vary as `exp(i k·r − iωt)`, and in every medium the
//! normal component enters through `κ = √(k² − εω²/c²)` with `Re κ ≥ 0`; on the
//! propagating branch (`Re κ = 0`) we take `Im κ ≤ 0`, so `exp(−κz)` is either
//! decaying or outgoing. TM coefficients refer to the magnetic field:
//!
//! ```text
//! r_ij = (ε_j κ_i − ε_i κ_j) / (ε_j κ_i + ε_i κ_j),   t_ij = 1 + r_ij
//! ```

use num_complex::Complex64;

use crate::constants::C;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    TE,
    TM,
}

/// Relative size below which a denominator counts as an exact pole.
const POLE_EPS: f64 = 1e-13;

/// κ with the decaying/outgoing branch fixed.
#[inline]
pub fn kappa_unchecked(omega: f64, k: f64, eps: Complex64) -> Complex64 {
    let q = omega / C;
    let z = Complex64::new(k * k, 0.0) - eps * (q * q);
    branch_fix(z.sqrt())
}

#[inline]
pub(crate) fn branch_fix(mut s: Complex64) -> Complex64 {
    if s.re < 0.0 {
        s = -s;
    }
    if s.re <= 1e-15 * s.im.abs() {
        s = Complex64::new(s.re.abs(), -s.im.abs());
    }
    s
}

/// `κ = √(k² − εω²/c²)`, `Re κ ≥ 0`, `Im κ ≤ 0` on the propagating branch.
pub fn kappa(omega: f64, k: f64, eps: Complex64) -> Result<Complex64> {
    check_wave(omega, k)?;
    Ok(kappa_unchecked(omega, k, eps))
}

fn check_wave(omega: f64, k: f64) -> Result<()> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("need ω > 0, got {omega:e}")));
    }
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("need k ≥ 0, got {k:e}")));
    }
    Ok(())
}

/// Reflection and transmission amplitudes from medium `i` into medium `j`,
/// given their permittivities and normal wavevector components.
#[inline]
pub fn interface_coefficients(
    pol: Polarization,
    eps_i: Complex64,
    kappa_i: Complex64,
    eps_j: Complex64,
    kappa_j: Complex64,
) -> Result<(Complex64, Complex64)> {
    let (a, b) = match pol {
        Polarization::TE => (kappa_i, kappa_j),
        Polarization::TM => (eps_j * kappa_i, eps_i * kappa_j),
    };
    let den = a + b;
    if den.norm() <= POLE_EPS * (a.norm() + b.norm()) {
        return Err(Error::Pole(format!(
            "{pol:?} interface denominator vanishes (a = {a}, b = {b})"
        )));
    }
    Ok(((a - b) / den, 2.0 * a / den))
}

/// Vacuum → medium reflection: `r_TE = (κ−κ_m)/(κ+κ_m)`, `r_TM = (εκ−κ_m)/(εκ+κ_m)`.
pub fn fresnel(omega: f64, k: f64, eps: Complex64, pol: Polarization) -> Result<Complex64> {
    check_wave(omega, k)?;
    let one = Complex64::new(1.0, 0.0);
    let kv = kappa_unchecked(omega, k, one);
    let km = kappa_unchecked(omega, k, eps);
    interface_coefficients(pol, one, kv, eps, km).map(|(r, _)| r)
}

/// TM transmission amplitude from a half-space `ε_from` into `ε_to`.
pub fn fresnel_interface_t(
    omega: f64,
    k: f64,
    eps_from: Complex64,
    eps_to: Complex64,
    pol: Polarization,
) -> Result<Complex64> {
    check_wave(omega, k)?;
    let ki = kappa_unchecked(omega, k, eps_from);
    let kj = kappa_unchecked(omega, k, eps_to);
    interface_coefficients(pol, eps_from, ki, eps_to, kj).map(|(_, t)| t)
}
