//! Scattered Green tensor trace and Casimir-Polder energies.
//!
//! Both frequency axes use the vacuum normal wavevector `κ` as integration
//! variable (`k dk = κ dκ`), which removes the inverse square-root light-line
//! singularity of the `k` form:
//!
//! ```text
//! Tr 𝒢 = (1/4πε₀) ∫ dκ X(κ) e^{−2κL},   X = (ω²/c²) r_TE + (κ² + k²) r_TM
//! ```
//!
//! On the real axis the propagating sector `κ = −iq` contributes
//! `i ∫₀^{ω/c} X e^{2iqL} dq`; at ω = iξ the lower limit becomes `ξ/c`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::atom::{thermal_static, AtomModel, TwoLevelAtom};
use crate::constants::{four_pi_eps0, thermal_coth, C, EPS0, HBAR, K_B};
use crate::error::{Error, Result};
use crate::materials::Surface;
use crate::numerics::quad::{integrate, integrate_breaks, integrate_oscillatory_tail, integrate_to_infinity};
use crate::numerics::{Numerics, QuadOptions};

/// Frequency at which the Green tensor is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    Real(f64),
    Imaginary(f64),
}

/// `Tr 𝒢(L, ω)` in SI units (V/(C·m)), tagged with its frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenTrace {
    pub frequency: Frequency,
    pub value: Complex64,
}

pub fn green_trace(l: f64, freq: Frequency, surface: &Surface, num: &Numerics) -> Result<GreenTrace> {
    let value = match freq {
        Frequency::Real(w) => green_trace_real(l, w, surface, num)?,
        Frequency::Imaginary(xi) => Complex64::new(green_trace_imag(l, xi, surface, num)?, 0.0),
    };
    Ok(GreenTrace {
        frequency: freq,
        value,
    })
}

/// Runs a fallible integrand inside an infallible quadrature, remembering
/// the first error.
struct Guard {
    first: std::sync::Mutex<Option<Error>>,
}

impl Guard {
    fn new() -> Self {
        Self {
            first: std::sync::Mutex::new(None),
        }
    }

    fn eval<V: Default>(&self, r: Result<V>) -> V {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.first.lock().unwrap().get_or_insert(e);
                V::default()
            }
        }
    }

    fn check(self) -> Result<()> {
        match self.first.into_inner().unwrap() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

fn check_distance(l: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Domain(format!("atom-surface distance must be positive, got {l:e}")));
    }
    Ok(())
}

/// `[a, b₁, …, b_n, end]` with the interior breaks sorted, deduplicated and clipped.
fn panel_points(a: f64, end: f64, breaks: &[f64]) -> Vec<f64> {
    let mut pts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < end).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
    pts.extend(inner);
    pts.push(end);
    pts
}

/// `Tr 𝒢(L, iξ)`, real and positive. ξ = 0 returns the static image value
/// `r_TM(0)/(8πε₀L³)`.
pub fn green_trace_imag(l: f64, xi: f64, surface: &Surface, num: &Numerics) -> Result<f64> {
    check_distance(l)?;
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::Domain(format!("need ξ ≥ 0, got {xi:e}")));
    }
    if xi == 0.0 {
        return Ok(surface.static_tm_reflection()? / (8.0 * PI * EPS0 * l.powi(3)));
    }
    let k0 = xi / C;
    let damp = (-2.0 * k0 * l).exp();
    if damp == 0.0 {
        return Ok(0.0);
    }
    surface.reflection_imag(xi, k0)?;
    let x2 = k0 * k0;
    let guard = Guard::new();
    // κ = ξ/c + t, with e^{−2ξL/c} factored out.
    let f = |t: f64| -> f64 {
        let kap = k0 + t;
        let (te, tm) = guard.eval(surface.reflection_imag(xi, kap));
        (-x2 * te + (2.0 * kap * kap - x2) * tm) * (-2.0 * t * l).exp()
    };
    let s = 0.5 / l;
    let end = 40.0 * s * num.cutoff_scale;
    let mut breaks = vec![4.0 * s];
    if let Some(wp) = surface.plasma_frequency() {
        breaks.push(wp / C);
    }
    let opts = num.inner_quad();
    let body = integrate_breaks(&f, &panel_points(0.0, end, &breaks), &opts)?;
    let tail = integrate_to_infinity(&f, end, s, &opts)?;
    guard.check()?;
    Ok((body.value + tail.value) * damp / four_pi_eps0())
}

/// `Tr 𝒢(L, ω)` on the real axis, ω > 0.
pub fn green_trace_real(l: f64, omega: f64, surface: &Surface, num: &Numerics) -> Result<Complex64> {
    check_distance(l)?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("need ω > 0, got {omega:e}")));
    }
    let q0 = omega / C;
    let q02 = q0 * q0;
    surface.reflection_real(omega, Complex64::new(q0, 0.0))?;
    let opts = num.inner_quad();
    let guard = Guard::new();

    // Evanescent sector, κ ∈ [0, ∞).
    let f_ev = |kap: f64| -> Complex64 {
        let (te, tm) = guard.eval(surface.reflection_real(omega, Complex64::new(kap, 0.0)));
        (q02 * te + (2.0 * kap * kap + q02) * tm) * (-2.0 * kap * l).exp()
    };
    let s = 0.5 / l;
    let mut breaks = vec![4.0 * s];
    let mut end = 40.0 * s;
    if let Some(ksp) = surface.plasmon_kappa(omega) {
        if ksp * l < 50.0 {
            breaks.push(ksp);
            end = end.max(1.5 * ksp);
        }
    }
    if let Surface::Stack(st) = surface {
        let n = st.glass_index(omega)?;
        if n > 1.0 {
            breaks.push((n * n - 1.0).sqrt() * q0);
        }
    }
    let end = end * num.cutoff_scale;
    let ev_body = integrate_breaks(&f_ev, &panel_points(0.0, end, &breaks), &opts)?;
    let ev_tail = integrate_to_infinity(&f_ev, end, s, &opts)?;

    // Propagating sector, κ = −iq, q ∈ [0, ω/c].
    let f_pr = |q: f64| -> Complex64 {
        let (te, tm) = guard.eval(surface.reflection_real(omega, Complex64::new(0.0, -q)));
        (q02 * te + (q02 - 2.0 * q * q) * tm) * Complex64::from_polar(1.0, 2.0 * q * l)
    };
    let half = 0.5 * PI / l;
    let n_osc = (q0 / half).ceil().min(20_000.0) as usize;
    let pts: Vec<f64> = (0..=n_osc.max(1)).map(|j| q0 * j as f64 / n_osc.max(1) as f64).collect();
    let pr = integrate_breaks(&f_pr, &pts, &opts)?;
    guard.check()?;

    let total = ev_body.value + ev_tail.value + Complex64::i() * pr.value;
    Ok(total / four_pi_eps0())
}

/// Frequency scale beyond which the imaginary-axis integrand is a smooth tail.
fn xi_scale(l: f64, atom: &AtomModel, num: &Numerics) -> f64 {
    num.cutoff_scale * (10.0 * atom.max_frequency()).max(10.0 * C / l)
}

fn xi_breaks(l: f64, atom: &AtomModel, surface: &Surface) -> Vec<f64> {
    let mut b = vec![atom.max_frequency(), 0.5 * C / l];
    if let Some(wp) = surface.plasma_frequency() {
        b.push(wp / std::f64::consts::SQRT_2);
    }
    b
}

/// `∫_a^∞ α(iξ) Tr 𝒢(iξ) dξ`.
fn imag_axis_integral(
    l: f64,
    a: f64,
    atom: &AtomModel,
    surface: &Surface,
    num: &Numerics,
) -> Result<f64> {
    let guard = Guard::new();
    let f = |xi: f64| -> f64 {
        atom.polarizability_imag_axis(xi) * guard.eval(green_trace_imag(l, xi, surface, num))
    };
    let opts = num.quad();
    let end = xi_scale(l, atom, num);
    let mut value = 0.0;
    if a < end {
        value += integrate_breaks(&f, &panel_points(a, end, &xi_breaks(l, atom, surface)), &opts)?.value;
    }
    let start = a.max(end);
    value += integrate_to_infinity(&f, start, start, &opts)?.value;
    guard.check()?;
    Ok(value)
}

/// Equilibrium energy at T = 0, `U = −ħ/2π ∫₀^∞ α(iξ) Tr 𝒢(iξ) dξ`, with the
/// ground-state polarizability.
pub fn equilibrium_u_t0(l: f64, atom: &AtomModel, surface: &Surface, num: &Numerics) -> Result<f64> {
    check_distance(l)?;
    let ground = atom.at_temperature(0.0)?;
    Ok(-HBAR / (2.0 * PI) * imag_axis_integral(l, 0.0, &ground, surface, num)?)
}

/// Largest Matsubara index summed explicitly before switching to the
/// integral tail.
pub const MATSUBARA_DIRECT_TERMS: usize = 4000;

/// Equilibrium energy at temperature T (atom and field both at T):
/// `U = −k_BT Σ'_n α(iξ_n) Tr 𝒢(iξ_n)`, `ξ_n = 2πnk_BT/ħ`.
///
/// Terms beyond `N` are replaced by the midpoint-rule integral
/// `(ħ/2πk_BT)·∫_{(N+½)ξ₁}^∞`, exact to `O(ξ₁²)` relative to the term scale.
pub fn equilibrium_u_finite_t(
    l: f64,
    temperature: f64,
    atom: &AtomModel,
    surface: &Surface,
    num: &Numerics,
) -> Result<f64> {
    check_distance(l)?;
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::Domain(format!("temperature must be ≥ 0, got {temperature}")));
    }
    if temperature == 0.0 {
        return equilibrium_u_t0(l, atom, surface, num);
    }
    let atom_t = atom.at_temperature(temperature)?;
    let h = 2.0 * PI * K_B * temperature / HBAR;
    let n_cap = (MATSUBARA_DIRECT_TERMS as f64 * num.cutoff_scale) as usize;
    let n = ((xi_scale(l, &atom_t, num) / h).ceil() as usize).min(n_cap);
    let terms: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let xi = j as f64 * h;
            Ok(atom_t.polarizability_imag_axis(xi) * green_trace_imag(l, xi, surface, num)?)
        })
        .collect::<Result<_>>()?;
    let sum = 0.5 * terms[0] + terms[1..].iter().sum::<f64>();
    let tail = imag_axis_integral(l, (n as f64 + 0.5) * h, &atom_t, surface, num)?;
    Ok(-HBAR / (2.0 * PI) * (h * sum + tail))
}

/// `U(T)`, dispatching to the T = 0 integral or the Matsubara sum.
pub fn equilibrium_u(l: f64, temperature: f64, atom: &AtomModel, surface: &Surface, num: &Numerics) -> Result<f64> {
    if temperature == 0.0 {
        equilibrium_u_t0(l, atom, surface, num)
    } else {
        equilibrium_u_finite_t(l, temperature, atom, surface, num)
    }
}

/// Atom term `U_a = −(ħα_g(0)ω_a/4) Re Tr 𝒢(ω_a)`.
///
/// The resonance weight of the thermal polarizability carries
/// `tanh(ħω_a/2k_BT_a)`, which cancels the `coth` of the atomic fluctuations,
/// so the result does not depend on T_a.
pub fn atom_energy(l: f64, atom: &TwoLevelAtom, surface: &Surface, num: &Numerics) -> Result<f64> {
    let g = green_trace_real(l, atom.omega_a(), surface, num)?;
    Ok(-0.25 * HBAR * atom.static_polarizability() * atom.omega_a() * g.re)
}

/// Field term on the real axis at field temperature `t_f`:
/// `U_f = −ħ/2π P∫₀^∞ coth(ħω/2k_BT_f) α_R^{(T_a)}(ω) Im Tr 𝒢(ω) dω`.
///
/// The pole at ω_a is folded symmetrically; the oscillating tail beyond the
/// frequency cutoff is summed in half-period panels with ε-acceleration.
pub fn field_energy_real_axis(
    l: f64,
    t_f: f64,
    atom: &TwoLevelAtom,
    surface: &Surface,
    num: &Numerics,
) -> Result<f64> {
    check_distance(l)?;
    let wa = atom.omega_a();
    let a0 = thermal_static(atom);
    let guard = Guard::new();
    // U_f = (ħ a0 ω_a²/2π) P∫ g(ω)/(ω − ω_a), g = coth·Im Tr 𝒢/(ω + ω_a).
    let g = |w: f64| -> f64 {
        thermal_coth(w, t_f) * guard.eval(green_trace_real(l, w, surface, num)).im / (w + wa)
    };
    let half = 0.5 * PI * C / l;
    let mut physical = Vec::new();
    let mut top = wa;
    if let (Some(wp), Some(gamma)) = (surface.plasma_frequency(), surface.relaxation_rate()) {
        let wsp = wp / std::f64::consts::SQRT_2;
        let g5 = 5.0 * gamma.max(1e-6 * wsp);
        physical.extend([wsp - g5, wsp, wsp + g5, wp]);
        top = top.max(wp);
    }
    let w_max = num.cutoff_scale * 4.0 * top.max(wa);
    let mut window = (0.5 * wa).min(half);
    for &b in &physical {
        let d = (b - wa).abs();
        if d > 0.0 {
            window = window.min(0.5 * d);
        }
    }
    let n_half = ((w_max / half).ceil() as usize).min(20_000);
    let mut pts: Vec<f64> = (1..n_half).map(|j| j as f64 * w_max / n_half as f64).collect();
    pts.extend(physical.iter().copied());
    pts.retain(|&x| (x - wa).abs() > window);
    pts.extend([wa - window, wa + window]);
    let pts = panel_points(0.0, w_max, &pts);

    let opts = num.quad();
    let folded = integrate(|s: f64| (g(wa + s) - g(wa - s)) / s, 0.0, window, &opts)?;
    let panels: Vec<(f64, f64)> = pts
        .windows(2)
        .map(|p| (p[0], p[1]))
        .filter(|&(a, b)| !(a >= wa - window * 1.000_001 && b <= wa + window * 1.000_001))
        .collect();
    let parts: Vec<f64> = panels
        .par_iter()
        .map(|&(a, b)| integrate(|x: f64| g(x) / (x - wa), a, b, &opts).map(|e| e.value))
        .collect::<Result<_>>()?;
    let main = folded.value + parts.iter().sum::<f64>();
    let tail_opts = QuadOptions::rel(num.rel_tol).with_abs(num.rel_tol * main.abs());
    let tail = integrate_oscillatory_tail(|x: f64| g(x) / (x - wa), w_max, half, 8, 2000, &tail_opts)?;
    guard.check()?;
    Ok(HBAR * a0 * wa * wa / (2.0 * PI) * (main + tail.value))
}

/// Δ from its real-frequency definition, `Δ = (U_f − U_a)/2`, with the
/// field integral evaluated on the real axis at temperature T.
pub fn delta_real_axis(l: f64, temperature: f64, atom: &TwoLevelAtom, surface: &Surface, num: &Numerics) -> Result<f64> {
    let atom_t = atom.with_temperature(temperature)?;
    let uf = field_energy_real_axis(l, temperature, &atom_t, surface, num)?;
    let ua = atom_energy(l, &atom_t, surface, num)?;
    Ok(0.5 * (uf - ua))
}

/// Δ after rotating the frequency integral, `Δ = U/2 + (ħα_g(0)ω_a/4) Re Tr 𝒢(ω_a)`.
///
/// Valid at any common equilibrium temperature T of atom and field.
pub fn delta_rotated(l: f64, temperature: f64, atom: &TwoLevelAtom, surface: &Surface, num: &Numerics) -> Result<f64> {
    let atom_t = atom.with_temperature(temperature)?;
    let u = equilibrium_u(l, temperature, &AtomModel::TwoLevel(atom_t), surface, num)?;
    let ua = atom_energy(l, &atom_t, surface, num)?;
    Ok(0.5 * u - ua)
}

/// Total energy with its field/atom decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit {
    pub u_total: f64,
    pub u_field: f64,
    pub u_atom: f64,
    pub delta: f64,
}

impl EnergySplit {
    pub fn from_total_and_delta(u_total: f64, delta: f64) -> Self {
        Self {
            u_total,
            u_field: 0.5 * u_total + delta,
            u_atom: 0.5 * u_total - delta,
            delta,
        }
    }

    /// `|U_f + U_a| / max(|U_f|, |U_a|)`.
    pub fn cancellation_ratio(&self) -> f64 {
        (self.u_field + self.u_atom).abs() / self.u_field.abs().max(self.u_atom.abs())
    }
}

/// Equilibrium split at temperature T using the rotated Δ.
pub fn split_energies(l: f64, temperature: f64, atom: &TwoLevelAtom, surface: &Surface, num: &Numerics) -> Result<EnergySplit> {
    Ok(EnergySplit::from_total_and_delta(
        equilibrium_u(l, temperature, &AtomModel::TwoLevel(atom.with_temperature(temperature)?), surface, num)?,
        delta_rotated(l, temperature, atom, surface, num)?,
    ))
}

/// Near-field, lossless closed forms `(U_f, U_a)` for a Drude half-space with
/// asymptotic plasmon frequency `omega_sp`; the atom carries T_a.
pub fn nonretarded_split(l: f64, t_f: f64, atom: &TwoLevelAtom, omega_sp: f64) -> Result<(f64, f64)> {
    check_distance(l)?;
    let wa = atom.omega_a();
    let den = omega_sp * omega_sp - wa * wa;
    if den == 0.0 {
        return Err(Error::Pole("ω_a coincides with Ω_sp".into()));
    }
    let a0 = thermal_static(atom);
    let geo = a0 / (8.0 * PI * EPS0 * l.powi(3));
    let uf = 0.25 * HBAR * omega_sp * thermal_coth(omega_sp, t_f) * (wa * wa / den) * geo;
    let ua = -0.25 * HBAR * wa * thermal_coth(wa, atom.temperature()) * (omega_sp * omega_sp / den) * geo;
    Ok((uf, ua))
}

/// Near-field split for a non-dispersive dielectric of index `n`: the field
/// term vanishes and the atom term uses `(n² − 1)/(n² + 1)`.
pub fn nonretarded_split_dielectric(l: f64, atom: &TwoLevelAtom, n: f64) -> Result<(f64, f64)> {
    check_distance(l)?;
    let r = (n * n - 1.0) / (n * n + 1.0);
    let wa = atom.omega_a();
    let a0 = thermal_static(atom);
    let ua = -0.25 * HBAR * wa * thermal_coth(wa, atom.temperature()) * r * a0 / (8.0 * PI * EPS0 * l.powi(3));
    Ok((0.0, ua))
}
