//! Laser-driven evanescent contributions in the Kretschmann geometry.
//!
//! A TM beam in the glass with power `P`, waist `w` and in-plane wavevector
//! `k = n_gl ω sinθ / c` leaves an evanescent field beyond the film whose
//! energy shift is
//!
//! ```text
//! Ũ = −[2P / (c n_gl w²)] Re[α(ω)/4πε₀] |t_str(ω, k)|² e^{−2κL}
//! ```
//!
//! with the glass intensity convention `I_gl = P/(2πw²)`. `t_str` here is the
//! electric-field transmission, `n_gl` times the magnetic-field coefficient
//! returned by [`LayerStack::t_str`]. Only Re α enters;
//! the laser term counts photons `⟨n̂⟩` and never the vacuum `1/2`, which is
//! already part of the equilibrium energy.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::atom::TransitionAtom;
use crate::constants::C;
use crate::error::{Error, Result};
use crate::materials::{tir_angle, LayerStack};
use crate::numerics::optimize::golden_max;
use crate::numerics::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::spectral::k_sp;

/// Closest a laser may sit to an atomic line, in linewidths.
pub const MIN_DETUNING_LINEWIDTHS: f64 = 100.0;

/// Sign of the in-plane propagation along x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// A TM laser beam inside the glass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserBeam {
    omega: f64,
    theta: f64,
    power: f64,
    waist: f64,
    phase: f64,
    direction: Direction,
}

impl LaserBeam {
    /// `theta` in radians, power in W and waist in m, both measured in the glass.
    pub fn new(omega: f64, theta: f64, power: f64, waist: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("laser frequency must be positive, got {omega:e}")));
        }
        if !(theta > 0.0 && theta < 0.5 * PI) {
            return Err(Error::Domain(format!("incidence angle {theta} rad outside (0, π/2)")));
        }
        if !(power >= 0.0 && power.is_finite()) {
            return Err(Error::Domain(format!("laser power must be ≥ 0, got {power:e}")));
        }
        if !(waist > 0.0 && waist.is_finite()) {
            return Err(Error::Domain(format!("waist must be positive, got {waist:e}")));
        }
        Ok(Self {
            omega,
            theta,
            power,
            waist,
            phase: 0.0,
            direction: Direction::Forward,
        })
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_power(self, power: f64) -> Result<Self> {
        Self::new(self.omega, self.theta, power, self.waist).map(|b| b.with_phase(self.phase).with_direction(self.direction))
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        let b = Self::new(self.omega, theta, self.power, self.waist)?;
        self.theta = b.theta;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

/// In-plane wavevector `n_gl(ω) ω sinθ / c`.
pub fn k_parallel(beam: &LaserBeam, stack: &LayerStack) -> Result<f64> {
    Ok(stack.glass_index(beam.omega)? * beam.omega * beam.theta.sin() / C)
}

/// Incidence angle at which the in-plane wavevector equals the bare
/// metal/vacuum plasmon wavevector.
pub fn plasmon_matching_angle(omega: f64, stack: &LayerStack) -> Result<f64> {
    let k = k_sp(omega, stack.film.plasma_frequency())?;
    let s = k * C / (stack.glass_index(omega)? * omega);
    if s >= 1.0 {
        return Err(Error::Domain(format!(
            "plasmon at ω = {omega:e} lies beyond the glass light line"
        )));
    }
    Ok(s.asin())
}

/// Angle in `(θ_T, θ_T + span)` maximizing `|t_str|²`.
pub fn transmission_peak_angle(omega: f64, stack: &LayerStack, span: f64) -> Result<f64> {
    let theta_t = tir_angle(&stack.glass, omega)?;
    let n = stack.glass_index(omega)?;
    let mut failure = None;
    let (theta, _) = golden_max(
        |th| match stack.t_str(omega, n * omega * th.sin() / C) {
            Ok(t) => t.norm_sqr(),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        theta_t,
        theta_t + span,
        1e-10,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(theta),
    }
}

/// The evanescent field of one beam beyond the stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvanescentMode {
    pub omega: f64,
    /// Signed in-plane wavevector along x.
    pub k: f64,
    /// Vacuum decay constant.
    pub kappa: f64,
    pub n_glass: f64,
    /// Electric-field transmission `n_gl · t_str`.
    pub t_field: Complex64,
    /// `Re α(ω)/4πε₀` in m³.
    pub alpha_re: f64,
    beam: LaserBeam,
}

impl EvanescentMode {
    pub fn new(beam: &LaserBeam, stack: &LayerStack, atom: &TransitionAtom) -> Result<Self> {
        let detuning = atom.detuning_in_linewidths(beam.omega);
        if detuning < MIN_DETUNING_LINEWIDTHS {
            return Err(Error::Domain(format!(
                "laser at ω = {:e} is {detuning:.1} linewidths from an atomic line (minimum {MIN_DETUNING_LINEWIDTHS})",
                beam.omega
            )));
        }
        let theta_t = tir_angle(&stack.glass, beam.omega)?;
        if beam.theta <= theta_t {
            log::warn!(
                "beam at θ = {:.4}° is not beyond total internal reflection ({:.4}°)",
                beam.theta.to_degrees(),
                theta_t.to_degrees()
            );
            return Err(Error::Domain(format!(
                "θ_i = {:.6}° ≤ θ_T = {:.6}°: transmitted wave propagates",
                beam.theta.to_degrees(),
                theta_t.to_degrees()
            )));
        }
        let n = stack.glass_index(beam.omega)?;
        let k = n * beam.omega * beam.theta.sin() / C;
        let kappa = (k * k - (beam.omega / C).powi(2)).sqrt();
        let alpha = atom.polarizability_volume(beam.omega);
        if alpha.im.abs() > 1e-3 * alpha.re.abs() {
            log::warn!("Im α/Re α = {:.2e} at the laser frequency is dropped", alpha.im / alpha.re);
        }
        Ok(Self {
            omega: beam.omega,
            k: beam.direction.sign() * k,
            kappa,
            n_glass: n,
            t_field: n * stack.t_str(beam.omega, k)?,
            alpha_re: alpha.re,
            beam: *beam,
        })
    }

    /// `√(2P/(c n w²))·|t_field|`, the field amplitude factor entering all terms.
    fn amplitude(&self) -> f64 {
        (2.0 * self.beam.power / (C * self.n_glass * self.beam.waist.powi(2))).sqrt() * self.t_field.norm()
    }

    /// Energy at the interface, `L = 0`.
    pub fn contact_energy(&self) -> f64 {
        -self.amplitude().powi(2) * self.alpha_re
    }

    pub fn energy(&self, l: f64) -> f64 {
        self.contact_energy() * (-2.0 * self.kappa * l).exp()
    }

    /// Mode phase at x: `arg t + k x`.
    fn mode_phase(&self, x: f64) -> f64 {
        self.t_field.arg() + self.k * x
    }

    /// TM polarization in the glass, `(sinθ, ±cosθ)` along (z, x) up to a common sign.
    fn polarization_dot(&self, other: &Self) -> f64 {
        let (s1, c1) = self.beam.theta.sin_cos();
        let (s2, c2) = other.beam.theta.sin_cos();
        s1 * s2 + self.beam.direction.sign() * other.beam.direction.sign() * c1 * c2
    }
}

/// One-laser energy shift at distance `l`.
pub fn one_laser_potential(beam: &LaserBeam, stack: &LayerStack, atom: &TransitionAtom, l: f64) -> Result<f64> {
    check_distance(l)?;
    Ok(EvanescentMode::new(beam, stack, atom)?.energy(l))
}

fn check_distance(l: f64) -> Result<()> {
    if !(l >= 0.0 && l.is_finite()) {
        return Err(Error::Domain(format!("need L ≥ 0, got {l:e}")));
    }
    Ok(())
}

/// How the two-beam cross term is treated in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeMode {
    /// Evaluate at time t (s).
    At(f64),
    /// Average over a beat period; the cross term survives only for equal frequencies.
    Averaged,
}

/// A pair of beams sharing a stack and an atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBeamField {
    pub first: EvanescentMode,
    pub second: EvanescentMode,
}

impl TwoBeamField {
    pub fn new(b1: &LaserBeam, b2: &LaserBeam, stack: &LayerStack, atom: &TransitionAtom) -> Result<Self> {
        Ok(Self {
            first: EvanescentMode::new(b1, stack, atom)?,
            second: EvanescentMode::new(b2, stack, atom)?,
        })
    }

    /// Interference term alone.
    pub fn cross_energy(&self, x: f64, l: f64, time: TimeMode) -> f64 {
        let (m1, m2) = (&self.first, &self.second);
        let beat = m1.omega - m2.omega;
        let arg = m1.mode_phase(x) - m2.mode_phase(x) + m1.beam.phase - m2.beam.phase;
        let oscillation = match time {
            TimeMode::At(t) => (arg - beat * t).cos(),
            TimeMode::Averaged if beat == 0.0 => arg.cos(),
            TimeMode::Averaged => return 0.0,
        };
        -m1.amplitude() * m2.amplitude() * (m1.alpha_re + m2.alpha_re)
            * (-(m1.kappa + m2.kappa) * l).exp()
            * m1.polarization_dot(m2)
            * oscillation
    }

    pub fn energy(&self, x: f64, l: f64, time: TimeMode) -> f64 {
        self.first.energy(l) + self.second.energy(l) + self.cross_energy(x, l, time)
    }
}

/// Two-laser energy shift at in-plane position x and distance l.
pub fn two_laser_potential(
    b1: &LaserBeam,
    b2: &LaserBeam,
    stack: &LayerStack,
    atom: &TransitionAtom,
    x: f64,
    l: f64,
    time: TimeMode,
) -> Result<f64> {
    check_distance(l)?;
    Ok(TwoBeamField::new(b1, b2, stack, atom)?.energy(x, l, time))
}

/// Standing-wave energy of two identical counter-propagating beams:
/// `2 Ũ₁(L) [1 − cos2θ cos(2kx + Δζ)]`, with Δζ = ζ₁ − ζ₂ and k signed by beam 1.
pub fn counterprop_lattice(
    b1: &LaserBeam,
    b2: &LaserBeam,
    stack: &LayerStack,
    atom: &TransitionAtom,
    x: f64,
    l: f64,
) -> Result<f64> {
    check_distance(l)?;
    if b1.omega != b2.omega || b1.theta != b2.theta || b1.power != b2.power || b1.waist != b2.waist {
        return Err(Error::Domain("lattice beams must share ω, θ, P and w".into()));
    }
    if b1.direction == b2.direction {
        return Err(Error::Domain("lattice beams must counter-propagate".into()));
    }
    let m = EvanescentMode::new(b1, stack, atom)?;
    let modulation = (2.0 * b1.theta).cos() * (2.0 * m.k * x + b1.phase - b2.phase).cos();
    Ok(2.0 * m.energy(l) * (1.0 - modulation))
}

/// Lattice period along x, `π / k`.
pub fn lattice_period(beam: &LaserBeam, stack: &LayerStack) -> Result<f64> {
    Ok(PI / k_parallel(beam, stack)?)
}

/// State of the laser-matched mode: coherent amplitude `β = |β|e^{iζ}` on
/// top of a thermal occupation ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentModeState {
    amplitude: f64,
    phase: f64,
    thermal_occupation: f64,
}

impl CoherentModeState {
    pub fn new(amplitude: f64, phase: f64, thermal_occupation: f64) -> Result<Self> {
        if !(amplitude >= 0.0 && thermal_occupation >= 0.0) {
            return Err(Error::Domain("need |β| ≥ 0 and ν ≥ 0".into()));
        }
        Ok(Self {
            amplitude,
            phase,
            thermal_occupation,
        })
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }

    /// `⟨n̂ + 1/2⟩` of the combined state.
    pub fn total_number(&self) -> f64 {
        self.amplitude.powi(2) + self.thermal_occupation + 0.5
    }

    /// `⟨â²⟩` of the combined state; the thermal part contributes nothing.
    pub fn a_squared(&self) -> Complex64 {
        self.beta() * self.beta()
    }

    /// Bracket multiplying the laser term for a mode of phase φ at time t:
    /// `2⟨n̂⟩_co − ⟨â²⟩e^{2i(φ−ωt)} − c.c.`, i.e. `2|β|²[1 − cos 2(φ + ζ − ωt)]`.
    /// Only the coherent excess enters; ν and the vacuum belong to U(T).
    pub fn laser_bracket(&self, mode_phase: f64, omega: f64, t: f64) -> f64 {
        let rot = Complex64::from_polar(1.0, 2.0 * (mode_phase - omega * t));
        2.0 * self.amplitude.powi(2) - 2.0 * (self.a_squared() * rot).re
    }
}

/// Moments `(⟨n̂ + 1/2⟩, ⟨â²⟩)` of the convolution of a coherent and a thermal
/// P-function, by quadrature over the complex-amplitude plane.
pub fn verify_thermal_decoupling(beta_abs: f64, nu: f64) -> Result<(f64, Complex64)> {
    let state = CoherentModeState::new(beta_abs, 0.0, nu)?;
    let beta = state.beta();
    if nu == 0.0 {
        // The thermal P-function degenerates to δ²(α).
        return Ok((beta.norm_sqr() + 0.5, beta * beta));
    }
    let sq = nu.sqrt();
    let opts = QuadOptions::rel(1e-10).with_abs(1e-11 * (1.0 + beta_abs * beta_abs + nu));
    // α = β + √ν r e^{iφ}; P_th d²α = e^{−r²} r dr dφ / π.
    let ring = |r: f64| -> Result<(f64, Complex64)> {
        // The a² ring vanishes for β = 0, so the floor follows the integrand size.
        let scale = (beta_abs + sq * r).powi(2) + 0.5;
        let opts = QuadOptions::rel(1e-10).with_abs(1e-13 * scale);
        let n = integrate(
            |phi: f64| (beta + sq * Complex64::from_polar(r, phi)).norm_sqr() + 0.5,
            0.0,
            2.0 * PI,
            &opts,
        )?;
        let a2 = integrate(
            |phi: f64| {
                let a = beta + sq * Complex64::from_polar(r, phi);
                a * a
            },
            0.0,
            2.0 * PI,
            &opts,
        )?;
        Ok((n.value, a2.value))
    };
    let mut failure = None;
    let mut record = |e: Error| {
        failure.get_or_insert(e);
    };
    let n = integrate_to_infinity(
        |r: f64| match ring(r) {
            Ok((n, _)) => n * r * (-r * r).exp() / PI,
            Err(e) => {
                record(e);
                0.0
            }
        },
        0.0,
        1.0,
        &opts,
    )?;
    let a2 = integrate_to_infinity(
        |r: f64| match ring(r) {
            Ok((_, a)) => a * (r * (-r * r).exp() / PI),
            Err(e) => {
                record(e);
                Complex64::new(0.0, 0.0)
            }
        },
        0.0,
        1.0,
        &opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((n.value, a2.value))
}
