//! Atomic polarizabilities.
//!
//! Polarizabilities are SI (C·m²/V) unless a function name says `volume`,
//! in which case they are `α/4πε₀` in m³. Dipole matrix elements are full
//! moduli `|d|`; the isotropic average contributes `|d|²/3` per axis.

use num_complex::Complex64;

use crate::constants::{four_pi_eps0, HBAR, K_B};
use crate::error::{Error, Result};

/// Dipole transition out of the ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub frequency: f64,
    pub dipole: f64,
    pub linewidth: f64,
}

impl Transition {
    pub fn new(frequency: f64, dipole: f64, linewidth: f64) -> Result<Self> {
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::Domain(format!("transition frequency must be positive, got {frequency:e}")));
        }
        if !(dipole > 0.0 && dipole.is_finite()) {
            return Err(Error::Domain(format!("dipole matrix element must be positive, got {dipole:e}")));
        }
        if !(linewidth >= 0.0 && linewidth.is_finite()) {
            return Err(Error::Domain(format!("linewidth must be non-negative, got {linewidth:e}")));
        }
        if linewidth > 1e-3 * frequency {
            log::warn!(
                "linewidth {linewidth:e} exceeds 1e-3 of the transition frequency {frequency:e}"
            );
        }
        Ok(Self {
            frequency,
            dipole,
            linewidth,
        })
    }

    /// Contribution `(2/3ħ) ω_i d_i² / (ω_i² − (ω + iγ_i)²)` in SI.
    fn response(&self, omega: f64) -> Complex64 {
        let w = Complex64::new(omega, self.linewidth);
        let num = 2.0 * self.frequency * self.dipole * self.dipole / (3.0 * HBAR);
        num / (self.frequency * self.frequency - w * w)
    }

    /// Same at ω = iξ, where `(ω + iγ)² = −(ξ + γ)²`.
    fn response_imag_axis(&self, xi: f64) -> f64 {
        let num = 2.0 * self.frequency * self.dipole * self.dipole / (3.0 * HBAR);
        let s = xi + self.linewidth;
        num / (self.frequency * self.frequency + s * s)
    }
}

/// Result of evaluating a polarizability with an isolated real pole:
/// `α(ω) = smooth_part + i·resonance_weight·δ(ω − ω_a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizabilityValue {
    pub smooth_part: Complex64,
    pub resonance_weight: f64,
}

/// Two-level isotropic atom with thermal ground/excited population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelAtom {
    omega_a: f64,
    static_polarizability: f64,
    temperature: f64,
}

impl TwoLevelAtom {
    /// `static_polarizability` is the ground-state α_g(0) in SI.
    pub fn new(omega_a: f64, static_polarizability: f64, temperature: f64) -> Result<Self> {
        if !(omega_a > 0.0 && omega_a.is_finite()) {
            return Err(Error::Domain(format!("ω_a must be positive, got {omega_a:e}")));
        }
        if !(static_polarizability > 0.0 && static_polarizability.is_finite()) {
            return Err(Error::Domain(format!(
                "static polarizability must be positive, got {static_polarizability:e}"
            )));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::Domain(format!("temperature must be ≥ 0, got {temperature}")));
        }
        Ok(Self {
            omega_a,
            static_polarizability,
            temperature,
        })
    }

    /// From the polarizability volume `α_g(0)/4πε₀` in m³.
    pub fn from_volume(omega_a: f64, volume: f64, temperature: f64) -> Result<Self> {
        Self::new(omega_a, volume * four_pi_eps0(), temperature)
    }

    /// The two-level reduction of rubidium: ω_a = 2.4×10¹⁵ rad/s, 46×10⁻³⁰ m³.
    pub fn rubidium_reduced(temperature: f64) -> Self {
        Self::from_volume(2.4e15, 46e-30, temperature).expect("valid constants")
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn static_polarizability(&self) -> f64 {
        self.static_polarizability
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(self.omega_a, self.static_polarizability, temperature)
    }

    /// `|d|` such that `α_g(0) = 2|d|²/(3ħω_a)`.
    pub fn equivalent_dipole(&self) -> f64 {
        (1.5 * HBAR * self.omega_a * self.static_polarizability).sqrt()
    }

    /// `α^{(T_a)}(iξ) = α^{(T_a)}(0) ω_a²/(ω_a² + ξ²)`.
    pub fn polarizability_imag_axis(&self, xi: f64) -> f64 {
        let wa2 = self.omega_a * self.omega_a;
        thermal_static(self) * wa2 / (wa2 + xi * xi)
    }
}

/// `α^{(T_a)}(0) = tanh(ħω_a/2k_BT_a) α_g(0)`.
pub fn thermal_static(atom: &TwoLevelAtom) -> f64 {
    if atom.temperature <= 0.0 {
        return atom.static_polarizability;
    }
    let x = HBAR * atom.omega_a / (2.0 * K_B * atom.temperature);
    x.tanh() * atom.static_polarizability
}

/// Two-level polarizability on the real axis with the resonance kept
/// symbolic. The smooth part is a pole at `ω = ω_a`, which is an error.
pub fn two_level_polarizability(atom: &TwoLevelAtom, omega: f64) -> Result<PolarizabilityValue> {
    if !(omega >= 0.0) {
        return Err(Error::Domain(format!("need ω ≥ 0, got {omega:e}")));
    }
    let wa2 = atom.omega_a * atom.omega_a;
    let den = wa2 - omega * omega;
    if den == 0.0 {
        return Err(Error::Pole(format!(
            "two-level polarizability evaluated on its resonance ω_a = {:e}",
            atom.omega_a
        )));
    }
    let a0 = thermal_static(atom);
    Ok(PolarizabilityValue {
        smooth_part: Complex64::new(a0 * wa2 / den, 0.0),
        resonance_weight: 0.5 * std::f64::consts::PI * atom.omega_a * a0,
    })
}

/// Dipole coupling between two levels of a multi-level atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCoupling {
    pub lower: usize,
    pub upper: usize,
    pub dipole: f64,
    pub linewidth: f64,
}

/// Thermal average `Z⁻¹ Σ_n α^{(n)}(ω) e^{−ħω_n/k_BT_a}` of the state
/// polarizabilities `α^{(n)} = (2/3ħ) Σ_{m≠n} ω_mn |d_mn|² / (ω_mn² − (ω+iγ)²)`.
///
/// `level_frequencies[n] = E_n/ħ`. Each coupling contributes to both of the
/// states it connects, with opposite sign of `ω_mn`.
pub fn multilevel_thermal_polarizability(
    couplings: &[LevelCoupling],
    level_frequencies: &[f64],
    temperature: f64,
    omega: f64,
) -> Result<Complex64> {
    if level_frequencies.is_empty() {
        return Err(Error::Domain("empty level set".into()));
    }
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!("temperature must be ≥ 0, got {temperature}")));
    }
    let n_levels = level_frequencies.len();
    for c in couplings {
        if c.lower >= n_levels || c.upper >= n_levels || c.lower == c.upper {
            return Err(Error::Domain(format!(
                "coupling {}→{} invalid for {n_levels} levels",
                c.lower, c.upper
            )));
        }
    }
    let e0 = level_frequencies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = level_frequencies
        .iter()
        .map(|&w| {
            if temperature == 0.0 {
                if w == e0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-HBAR * (w - e0) / (K_B * temperature)).exp()
            }
        })
        .collect();
    let z: f64 = weights.iter().sum();
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain("partition function not finite".into()));
    }
    let w = Complex64::new(omega, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    for c in couplings {
        let w_mn = level_frequencies[c.upper] - level_frequencies[c.lower];
        let z_w = w + Complex64::new(0.0, c.linewidth);
        let term = 2.0 * w_mn * c.dipole * c.dipole / (3.0 * HBAR) / (w_mn * w_mn - z_w * z_w);
        // Seen from the upper state the transition frequency is −ω_mn.
        total += term * (weights[c.lower] - weights[c.upper]);
    }
    Ok(total / z)
}

/// Ground-state atom with several lossy dipole transitions.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionAtom {
    transitions: Vec<Transition>,
}

impl TransitionAtom {
    pub fn new(transitions: Vec<Transition>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::Domain("atom needs at least one transition".into()));
        }
        Ok(Self { transitions })
    }

    /// Rubidium D1 and D2 lines.
    pub fn rubidium() -> Self {
        Self {
            transitions: vec![
                Transition {
                    frequency: 23.6943e14,
                    dipole: 25.377e-30,
                    linewidth: 36.1283e6,
                },
                Transition {
                    frequency: 24.1419e14,
                    dipole: 35.842e-30,
                    linewidth: 38.1201e6,
                },
            ],
        }
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// SI polarizability on the real axis.
    pub fn polarizability(&self, omega: f64) -> Complex64 {
        self.transitions.iter().map(|t| t.response(omega)).sum()
    }

    /// `α/4πε₀` in m³.
    pub fn polarizability_volume(&self, omega: f64) -> Complex64 {
        self.polarizability(omega) / four_pi_eps0()
    }

    pub fn polarizability_imag_axis(&self, xi: f64) -> f64 {
        self.transitions.iter().map(|t| t.response_imag_axis(xi)).sum()
    }

    /// Distance in units of linewidth to the nearest line.
    pub fn detuning_in_linewidths(&self, omega: f64) -> f64 {
        self.transitions
            .iter()
            .map(|t| (omega - t.frequency).abs() / t.linewidth.max(f64::MIN_POSITIVE))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Two-line rubidium polarizability `α/4πε₀` in m³.
pub fn rb_polarizability(omega: f64) -> Complex64 {
    TransitionAtom::rubidium().polarizability_volume(omega)
}

/// Two-line rubidium polarizability in SI.
pub fn rb_polarizability_si(omega: f64) -> Complex64 {
    TransitionAtom::rubidium().polarizability(omega)
}

/// Either atomic model, as used by the energy routines.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomModel {
    TwoLevel(TwoLevelAtom),
    Lines(TransitionAtom),
}

impl AtomModel {
    /// SI polarizability at ω = iξ (real, positive, decreasing).
    pub fn polarizability_imag_axis(&self, xi: f64) -> f64 {
        match self {
            AtomModel::TwoLevel(a) => a.polarizability_imag_axis(xi),
            AtomModel::Lines(a) => a.polarizability_imag_axis(xi),
        }
    }

    /// The model with its thermal population set to `temperature`. The line
    /// model is ground-state only and is returned unchanged.
    pub fn at_temperature(&self, temperature: f64) -> Result<Self> {
        match self {
            AtomModel::TwoLevel(a) => Ok(AtomModel::TwoLevel(a.with_temperature(temperature)?)),
            AtomModel::Lines(_) => Ok(self.clone()),
        }
    }

    /// Largest transition frequency, used to set frequency cutoffs.
    pub fn max_frequency(&self) -> f64 {
        match self {
            AtomModel::TwoLevel(a) => a.omega_a,
            AtomModel::Lines(a) => a
                .transitions
                .iter()
                .map(|t| t.frequency)
                .fold(0.0, f64::max),
        }
    }
}

impl From<TwoLevelAtom> for AtomModel {
    fn from(a: TwoLevelAtom) -> Self {
        AtomModel::TwoLevel(a)
    }
}

impl From<TransitionAtom> for AtomModel {
    fn from(a: TransitionAtom) -> Self {
        AtomModel::Lines(a)
    }
}
