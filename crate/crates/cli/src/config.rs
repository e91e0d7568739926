//! Run configuration: a TOML file with fixed blocks. Unknown keys are errors.
//!
//! Every field has a default, so an empty file (or no file) is a valid
//! configuration; commands fill unset scan ranges and beams with their own
//! defaults. Angles are degrees here and radians everywhere past this module.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub material: MaterialConfig,
    pub atom: AtomConfig,
    pub temperature: TemperatureConfig,
    pub beams: Vec<BeamConfig>,
    pub scan: ScanConfig,
    pub numerics: NumericsConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialConfig {
    /// Drude plasma frequency ħΩ_P in eV.
    pub plasma_ev: f64,
    /// Drude damping ħΓ in meV.
    pub relaxation_mev: f64,
    /// Glass permittivity table; the bundled sapphire table when unset.
    pub glass_table: Option<PathBuf>,
    /// Metal film thickness δ in m.
    pub film_thickness_m: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self {
            plasma_ev: 9.0,
            relaxation_mev: 35.0,
            glass_table: None,
            film_thickness_m: 50e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomKind {
    /// Single transition with a given static polarizability.
    TwoLevel,
    /// Rubidium D1 and D2 lines.
    Rubidium,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtomConfig {
    /// Command default when unset: two-level for the Casimir-Polder
    /// commands, rubidium for the laser commands.
    pub model: Option<AtomKind>,
    /// Two-level transition frequency in rad/s.
    pub omega_a_rad_s: Option<f64>,
    /// Two-level transition frequency in units of Ω_P/√2.
    pub omega_a_over_wsp: Option<f64>,
    /// Two-level static polarizability α(0)/4πε₀ in m³.
    pub polarizability_m3: f64,
}

impl Default for AtomConfig {
    fn default() -> Self {
        Self {
            model: None,
            omega_a_rad_s: None,
            omega_a_over_wsp: None,
            polarizability_m3: 46e-30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TemperatureConfig {
    /// Field (and surface) temperature in K.
    pub t_k: f64,
    /// Atom temperature in K for the near-field split; `t_k` when unset.
    pub t_atom_k: Option<f64>,
    /// Plasmon temperatures in K for `imbalance`.
    pub t_sp_k: Vec<f64>,
}

impl Default for TemperatureConfig {
    fn default() -> Self {
        Self {
            t_k: 300.0,
            t_atom_k: None,
            t_sp_k: vec![300.0, 1100.0, 2000.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionConfig {
    #[default]
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    pub omega_rad_s: f64,
    /// Incidence angle in the glass; exactly one of this and `offset_deg`.
    #[serde(default)]
    pub theta_deg: Option<f64>,
    /// Incidence angle beyond total internal reflection, θ_i − θ_T.
    #[serde(default)]
    pub offset_deg: Option<f64>,
    #[serde(rename = "power_W")]
    pub power_w: f64,
    #[serde(default = "default_waist")]
    pub waist_m: f64,
    #[serde(default)]
    pub phase_rad: f64,
    #[serde(default)]
    pub direction: DirectionConfig,
}

fn default_waist() -> f64 {
    180e-6
}

impl BeamConfig {
    pub fn at_offset(omega_rad_s: f64, offset_deg: f64, power_w: f64) -> Self {
        Self {
            omega_rad_s,
            theta_deg: None,
            offset_deg: Some(offset_deg),
            power_w,
            waist_m: default_waist(),
            phase_rad: 0.0,
            direction: DirectionConfig::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParam {
    /// θ_i − θ_T of a beam, degrees.
    OffsetDeg,
    /// θ_i of a beam, degrees.
    ThetaDeg,
    #[serde(rename = "power_W")]
    PowerW,
    OmegaRadS,
    /// In-plane position, m.
    XM,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub param: AxisParam,
    /// Beam index for beam parameters.
    #[serde(default)]
    pub beam: usize,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    /// Log-spaced distance grid.
    pub l_min_m: Option<f64>,
    pub l_max_m: Option<f64>,
    pub l_points: Option<usize>,
    /// Dispersion table: k range in units of Ω_P/c, and the distance.
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub k_points: Option<usize>,
    pub dispersion_l_m: Option<f64>,
    /// In-plane position for two-beam commands.
    pub x_m: f64,
    /// Time for the two-beam cross term when the beams share a frequency.
    pub time_s: f64,
    /// Up to two swept parameters.
    pub axes: Vec<AxisConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub rel_tol: f64,
    pub cutoff_scale: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        let n = neqcp::numerics::Numerics::default();
        Self {
            rel_tol: n.rel_tol,
            cutoff_scale: n.cutoff_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Format,
    /// Output file; standard output when unset.
    pub path: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        let m = &self.material;
        if !(m.plasma_ev > 0.0 && m.relaxation_mev >= 0.0 && m.film_thickness_m > 0.0) {
            return bad("material: need plasma_ev > 0, relaxation_mev ≥ 0, film_thickness_m > 0".into());
        }
        let a = &self.atom;
        if a.omega_a_rad_s.is_some() && a.omega_a_over_wsp.is_some() {
            return bad("atom: give omega_a_rad_s or omega_a_over_wsp, not both".into());
        }
        if a.model == Some(AtomKind::Rubidium) && (a.omega_a_rad_s.is_some() || a.omega_a_over_wsp.is_some()) {
            return bad("atom: the rubidium model has fixed lines".into());
        }
        if !(a.polarizability_m3 > 0.0) {
            return bad("atom: polarizability_m3 must be positive".into());
        }
        let t = &self.temperature;
        if !(t.t_k >= 0.0) || t.t_atom_k.is_some_and(|x| !(x >= 0.0)) || t.t_sp_k.iter().any(|x| !(*x >= 0.0)) {
            return bad("temperature: all temperatures must be ≥ 0 K".into());
        }
        for (i, b) in self.beams.iter().enumerate() {
            if b.theta_deg.is_some() == b.offset_deg.is_some() {
                return bad(format!("beams[{i}]: give exactly one of theta_deg and offset_deg"));
            }
            if !(b.omega_rad_s > 0.0 && b.power_w >= 0.0 && b.waist_m > 0.0) {
                return bad(format!("beams[{i}]: need omega_rad_s > 0, power_W ≥ 0, waist_m > 0"));
            }
        }
        let s = &self.scan;
        if let (Some(lo), Some(hi)) = (s.l_min_m, s.l_max_m) {
            if !(lo > 0.0 && hi > lo) {
                return bad("scan: need 0 < l_min_m < l_max_m".into());
            }
        }
        if s.l_points.is_some_and(|n| n < 3) || s.k_points.is_some_and(|n| n < 2) {
            return bad("scan: l_points ≥ 3 and k_points ≥ 2".into());
        }
        if s.axes.len() > 2 {
            return bad("scan: at most two axes".into());
        }
        for ax in &s.axes {
            if ax.points < 1 || !ax.from.is_finite() || !ax.to.is_finite() {
                return bad(format!("scan axis {:?}: need finite range and ≥ 1 point", ax.param));
            }
        }
        if !(self.numerics.rel_tol > 0.0 && self.numerics.cutoff_scale >= 1.0) {
            return bad("numerics: need rel_tol > 0 and cutoff_scale ≥ 1".into());
        }
        Ok(())
    }

    /// SHA-256 of the effective configuration (defaults filled in).
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(RunConfig::parse("[material]\nplasma = 9.0\n"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::parse("colour = 1\n"), Err(CliError::Config(_))));
    }

    #[test]
    fn beams_and_axes_parse() {
        let cfg = RunConfig::parse(
            r#"
            [[beams]]
            omega_rad_s = 2.46e15
            offset_deg = 0.7
            power_W = 0.2
            direction = "backward"

            [scan]
            axes = [{ param = "power_W", beam = 0, from = 0.1, to = 1.0, points = 4 }]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.beams[0].direction, DirectionConfig::Backward);
        assert_eq!(cfg.beams[0].waist_m, 180e-6);
        assert_eq!(cfg.scan.axes[0].param, AxisParam::PowerW);
        let both = "[[beams]]\nomega_rad_s = 2.46e15\noffset_deg = 0.7\ntheta_deg = 35.0\npower_W = 0.2\n";
        assert!(RunConfig::parse(both).is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.temperature.t_k = 301.0;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
