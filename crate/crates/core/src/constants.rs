//! Physical constants (CODATA 2018, SI) and unit conversions.

use std::f64::consts::PI;

/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Angular frequency (rad/s) corresponding to a photon energy in eV.
pub fn ev_to_rad_s(ev: f64) -> f64 {
    ev * E_CHARGE / HBAR
}

/// Energy in joules expressed as a temperature in microkelvin (E/k_B).
pub fn joule_to_microkelvin(energy: f64) -> f64 {
    energy / K_B * 1e6
}

pub fn microkelvin_to_joule(mk: f64) -> f64 {
    mk * 1e-6 * K_B
}

/// 4πε₀, the factor between SI polarizability and polarizability volume.
pub fn four_pi_eps0() -> f64 {
    4.0 * PI * EPS0
}

/// `coth(ħω / 2 k_B T)`; returns 1 at zero temperature.
pub fn thermal_coth(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 1.0;
    }
    let x = HBAR * omega / (2.0 * K_B * temperature);
    if x > 20.0 {
        // coth(x) = 1 + 2e^{-2x} + ...
        1.0 + 2.0 * (-2.0 * x).exp()
    } else {
        1.0 / x.tanh()
    }
}

/// Bose-Einstein occupation `1 / (exp(ħω/k_B T) - 1)`.
pub fn bose_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad.to_degrees()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gold_plasma_frequency_in_rad_s() {
        let wp = ev_to_rad_s(9.0);
        assert!((wp / 1.367_34e16 - 1.0).abs() < 1e-4, "{wp}");
    }

    #[test]
    fn coth_limits() {
        assert_eq!(thermal_coth(1e15, 0.0), 1.0);
        // High temperature: coth(x) ≈ 1/x
        let w = 1e10;
        let t = 1e4;
        let x = HBAR * w / (2.0 * K_B * t);
        assert!((thermal_coth(w, t) * x - 1.0).abs() < 1e-6);
        // Continuity across the asymptotic switch.
        let t_switch = HBAR * 1e15 / (2.0 * K_B * 20.0);
        let a = thermal_coth(1e15, t_switch * 0.999_999);
        let b = thermal_coth(1e15, t_switch * 1.000_001);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn coth_matches_occupation() {
        let (w, t) = (3e14, 2000.0);
        let lhs = thermal_coth(w, t);
        let rhs = 2.0 * bose_occupation(w, t) + 1.0;
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
