//! Subcommands. Each builds a [`Table`]; sweeps run in parallel and come back
//! in grid order.

use rayon::prelude::*;

use neqcp::atom::{AtomModel, TransitionAtom, TwoLevelAtom};
use neqcp::constants::{deg_to_rad, joule_to_microkelvin, C};
use neqcp::landscape::{
    analyze, sweep_1d, sweep_2d, Axis, Background, CpCurve, FeatureReport, Landscape, LaserTerms, PotentialMap,
    MIN_FEATURE_POINTS,
};
use neqcp::laser::{
    lattice_period, verify_thermal_decoupling, Direction, EvanescentMode, LaserBeam, TimeMode, TwoBeamField,
};
use neqcp::materials::{tir_angle, DrudeMetal, LayerStack, Surface, TabulatedDielectric};
use neqcp::numerics::{linspace, logspace, Numerics};
use neqcp::potentials::{delta_real_axis, delta_rotated, nonretarded_split, split_energies};
use neqcp::spectral::{
    imbalanced_total, k_sp, omega_pm, omega_sp, plasmonic_ua, plasmonic_uf, residue, ImbalanceConfig,
};

use crate::config::{AtomKind, AxisConfig, AxisParam, BeamConfig, DirectionConfig, RunConfig};
use crate::output::Table;
use crate::CliError;

/// Frequency separation above which the two-beam cross term is time-averaged.
pub const AVERAGING_THRESHOLD: f64 = 1e9;

const RED: f64 = 21.0e14;
const BLUE: f64 = 24.6e14;

pub struct Context {
    pub cfg: RunConfig,
    pub num: Numerics,
}

impl Context {
    pub fn new(cfg: RunConfig) -> Self {
        let num = Numerics {
            rel_tol: cfg.numerics.rel_tol,
            cutoff_scale: cfg.numerics.cutoff_scale,
        };
        Self { cfg, num }
    }

    fn metal(&self) -> Result<DrudeMetal, CliError> {
        let m = &self.cfg.material;
        Ok(DrudeMetal::from_ev(m.plasma_ev, m.relaxation_mev * 1e-3)?)
    }

    fn warn_lossy_branch(&self, metal: &DrudeMetal) {
        if metal.relaxation_rate() > 0.0 {
            log::warn!(
                "Γ = {:e} rad/s is ignored on the plasmon branch, which uses the lossless dispersion",
                metal.relaxation_rate()
            );
        }
    }

    fn stack(&self) -> Result<LayerStack, CliError> {
        let glass = match &self.cfg.material.glass_table {
            Some(p) => TabulatedDielectric::from_file(p)?,
            None => TabulatedDielectric::sapphire()?,
        };
        Ok(LayerStack::new(glass, self.metal()?, self.cfg.material.film_thickness_m)?)
    }

    fn two_level(&self, temperature: f64) -> Result<TwoLevelAtom, CliError> {
        let a = &self.cfg.atom;
        if a.model == Some(AtomKind::Rubidium) {
            return Err(CliError::Config("this command needs atom.model = \"two-level\"".into()));
        }
        let omega = match (a.omega_a_rad_s, a.omega_a_over_wsp) {
            (Some(w), _) => w,
            (None, Some(f)) => f * self.metal()?.surface_plasmon_frequency(),
            (None, None) => 2.4e15,
        };
        Ok(TwoLevelAtom::from_volume(omega, a.polarizability_m3, temperature)?)
    }

    fn rubidium(&self) -> Result<TransitionAtom, CliError> {
        if self.cfg.atom.model == Some(AtomKind::TwoLevel) {
            return Err(CliError::Config("laser commands need atom.model = \"rubidium\"".into()));
        }
        Ok(TransitionAtom::rubidium())
    }

    fn distances(&self, (lo, hi, n): (f64, f64, usize)) -> Vec<f64> {
        let s = &self.cfg.scan;
        logspace(s.l_min_m.unwrap_or(lo), s.l_max_m.unwrap_or(hi), s.l_points.unwrap_or(n))
    }

    fn beams(&self, defaults: Vec<BeamConfig>, needed: usize) -> Result<Vec<BeamConfig>, CliError> {
        let beams = if self.cfg.beams.is_empty() { defaults } else { self.cfg.beams.clone() };
        if beams.len() != needed {
            return Err(CliError::Config(format!("this command needs {needed} beam(s), got {}", beams.len())));
        }
        for ax in &self.cfg.scan.axes {
            if ax.param != AxisParam::XM && ax.beam >= needed {
                return Err(CliError::Config(format!("scan axis refers to beam {} of {needed}", ax.beam)));
            }
        }
        Ok(beams)
    }

    /// CP energy of rubidium above the metal, tabulated to cover `ls`.
    fn cp_curve(&self, ls: &[f64]) -> Result<CpCurve, CliError> {
        let lo = ls[0].min(10e-9);
        let hi = ls[ls.len() - 1].max(20e-6);
        let atom = AtomModel::Lines(self.rubidium()?);
        Ok(CpCurve::tabulate(
            &atom,
            &Surface::Drude(self.metal()?),
            self.cfg.temperature.t_k,
            (lo, hi),
            120,
            &self.num,
        )?)
    }
}

fn build_beam(b: &BeamConfig, stack: &LayerStack) -> neqcp::Result<LaserBeam> {
    let theta = match (b.theta_deg, b.offset_deg) {
        (Some(t), _) => deg_to_rad(t),
        (None, Some(o)) => tir_angle(&stack.glass, b.omega_rad_s)? + deg_to_rad(o),
        (None, None) => unreachable!("validated: one angle is set"),
    };
    let dir = match b.direction {
        DirectionConfig::Forward => Direction::Forward,
        DirectionConfig::Backward => Direction::Backward,
    };
    Ok(LaserBeam::new(b.omega_rad_s, theta, b.power_w, b.waist_m)?
        .with_phase(b.phase_rad)
        .with_direction(dir))
}

fn apply_axis(beams: &mut [BeamConfig], x: &mut f64, ax: &AxisConfig, v: f64) {
    match ax.param {
        AxisParam::XM => *x = v,
        AxisParam::OffsetDeg => {
            beams[ax.beam].offset_deg = Some(v);
            beams[ax.beam].theta_deg = None;
        }
        AxisParam::ThetaDeg => {
            beams[ax.beam].theta_deg = Some(v);
            beams[ax.beam].offset_deg = None;
        }
        AxisParam::PowerW => beams[ax.beam].power_w = v,
        AxisParam::OmegaRadS => beams[ax.beam].omega_rad_s = v,
    }
}

fn axis_label(ax: &AxisConfig) -> (String, &'static str) {
    let (name, unit) = match ax.param {
        AxisParam::XM => return ("x".into(), "m"),
        AxisParam::OffsetDeg => ("offset", "deg"),
        AxisParam::ThetaDeg => ("theta", "deg"),
        AxisParam::PowerW => ("power", "W"),
        AxisParam::OmegaRadS => ("omega", "rad/s"),
    };
    (format!("{name}(beam {})", ax.beam), unit)
}

fn axis_values(ax: &AxisConfig) -> Vec<f64> {
    linspace(ax.from, ax.to, ax.points)
}

/// Runs `cell` over the configured axes; the result rows start with the axis values.
fn sweep<F>(axes: &[AxisConfig], cell: F) -> Result<Vec<Vec<Option<f64>>>, CliError>
where
    F: Fn(&[(usize, f64)]) -> neqcp::Result<Vec<Option<f64>>> + Sync,
{
    let map: PotentialMap<Vec<Option<f64>>> = match axes {
        [a] => sweep_1d(Axis::new("a", "", axis_values(a)), |v| cell(&[(0, v)])),
        [a, b] => sweep_2d(Axis::new("a", "", axis_values(a)), Axis::new("b", "", axis_values(b)), |u, v| {
            cell(&[(0, u), (1, v)])
        }),
        _ => unreachable!("one or two axes"),
    };
    let nx = map.x.values.len();
    let mut rows = vec![];
    for (i, c) in map.cells.into_iter().enumerate() {
        let mut row = vec![Some(map.x.values[i % nx])];
        if let Some(y) = &map.y {
            row.push(Some(y.values[i / nx]));
        }
        row.extend(c?);
        rows.push(row);
    }
    Ok(rows)
}

fn feature_columns(t: Table) -> Table {
    t.column("barrier_L", "m")
        .column("barrier_U", "J")
        .column("barrier_U", "uK")
        .column("well_L", "m")
        .column("well_depth", "J")
        .column("well_depth", "uK")
}

fn feature_cells(r: &FeatureReport) -> Vec<Option<f64>> {
    vec![
        r.barrier.map(|b| b.l),
        r.barrier.map(|b| b.u),
        r.barrier.map(|b| joule_to_microkelvin(b.u)),
        r.well.map(|w| w.l),
        r.well.map(|w| w.depth),
        r.well.map(|w| joule_to_microkelvin(w.depth)),
    ]
}

fn describe(r: &FeatureReport) -> String {
    let b = r.barrier.map_or("none".into(), |b| {
        format!("{:.4} uK at {:.4e} m", joule_to_microkelvin(b.u), b.l)
    });
    let w = r.well.map_or("none".into(), |w| {
        format!("{:.4} uK deep at {:.4e} m", joule_to_microkelvin(w.depth), w.l)
    });
    format!("barrier {b}; well {w}")
}

pub fn dispersion(ctx: &Context) -> Result<Table, CliError> {
    let metal = ctx.metal()?;
    ctx.warn_lossy_branch(&metal);
    let wp = metal.plasma_frequency();
    let s = &ctx.cfg.scan;
    let l = s.dispersion_l_m.unwrap_or(30e-9);
    let ks = logspace(s.k_min.unwrap_or(0.03) * wp / C, s.k_max.unwrap_or(30.0) * wp / C, s.k_points.unwrap_or(200));
    let mut t = Table::new("dispersion")
        .column("k", "1/m")
        .column("k c/Omega_P", "1")
        .column("omega_sp", "rad/s")
        .column("omega_sp/Omega_sp", "1")
        .column("omega_minus", "rad/s")
        .column("residue", "rad s^-1 F^-1 m^-1");
    t.meta("L_m", crate::output::fmt(l));
    t.meta("Omega_P_rad_s", crate::output::fmt(wp));
    let wsp = metal.surface_plasmon_frequency();
    for k in ks {
        let w = omega_sp(k, wp);
        t.push(vec![
            Some(k),
            Some(k * C / wp),
            Some(w),
            Some(w / wsp),
            Some(omega_pm(k, wp).0),
            Some(residue(l, k, wp)),
        ]);
    }
    Ok(t)
}

pub fn split(ctx: &Context) -> Result<Table, CliError> {
    let tk = ctx.cfg.temperature.t_k;
    let atom = ctx.two_level(tk)?;
    let atom_a = ctx.two_level(ctx.cfg.temperature.t_atom_k.unwrap_or(tk))?;
    let metal = ctx.metal()?;
    let surface = Surface::Drude(metal);
    let lp = metal.plasma_wavelength();
    let u0 = split_energies(lp, tk, &atom, &surface, &ctx.num)?.u_total;
    let ls = ctx.distances((10e-9, 10e-6, 40));
    let rows = ls
        .par_iter()
        .map(|&l| -> neqcp::Result<Vec<Option<f64>>> {
            let s = split_energies(l, tk, &atom, &surface, &ctx.num)?;
            let (f0, a0) = nonretarded_split(l, tk, &atom_a, metal.surface_plasmon_frequency())?;
            Ok([l, l / lp, s.u_total / u0, s.u_field / u0, s.u_atom / u0, s.u_total, s.u_field, s.u_atom, f0, a0]
                .map(Some)
                .to_vec())
        })
        .collect::<neqcp::Result<Vec<_>>>()?;
    let mut t = Table::new("split")
        .column("L", "m")
        .column("L/lambda_P", "1")
        .column("U/U0", "1")
        .column("U_f/U0", "1")
        .column("U_a/U0", "1")
        .column("U", "J")
        .column("U_f", "J")
        .column("U_a", "J")
        .column("U_f nonretarded", "J")
        .column("U_a nonretarded", "J");
    t.meta("U0_J", crate::output::fmt(u0));
    t.meta("lambda_P_m", crate::output::fmt(lp));
    t.meta("omega_a_rad_s", crate::output::fmt(atom.omega_a()));
    t.rows = rows;
    Ok(t)
}

pub fn imbalance(ctx: &Context) -> Result<Table, CliError> {
    let metal = ctx.metal()?;
    ctx.warn_lossy_branch(&metal);
    let tk = ctx.cfg.temperature.t_k;
    let atom = ctx.two_level(tk)?;
    let ls = ctx.distances((50e-9, 5e-6, 60));
    let mut t = Table::new("imbalance").column("L", "m");
    let mut curves = vec![];
    for &tsp in &ctx.cfg.temperature.t_sp_k {
        let cfg = ImbalanceConfig::new(tk, tsp)?;
        let u = ls
            .par_iter()
            .map(|&l| imbalanced_total(l, &cfg, &atom, &metal, &ctx.num))
            .collect::<neqcp::Result<Vec<_>>>()?;
        let curve = neqcp::landscape::PotentialCurve::new(ls.clone(), u.clone())?;
        let (maxima, minima) = curve.extremum_counts();
        t.meta(&format!("extrema(T_sp={tsp}K)"), format!("maxima={maxima} minima={minima}"));
        t = t.column(&format!("U_oe(T_sp={tsp}K)"), "J").column(&format!("U_oe(T_sp={tsp}K)"), "uK");
        curves.push(u);
    }
    for (i, &l) in ls.iter().enumerate() {
        let mut row = vec![Some(l)];
        for c in &curves {
            row.push(Some(c[i]));
            row.push(Some(joule_to_microkelvin(c[i])));
        }
        t.push(row);
    }
    Ok(t)
}

fn need_feature_grid(ls: &[f64]) -> Result<(), CliError> {
    if ls.len() < MIN_FEATURE_POINTS {
        return Err(CliError::Config(format!("feature search needs scan.l_points ≥ {MIN_FEATURE_POINTS}")));
    }
    Ok(())
}

fn curve_table(command: &str, land: &Landscape, x: f64, ls: &[f64]) -> Result<Table, CliError> {
    let mut t = Table::new(command)
        .column("L", "m")
        .column("U_cp", "J")
        .column("U_laser", "J")
        .column("U", "J")
        .column("U", "uK");
    for &l in ls {
        let (cp, las) = (land.background(l)?, land.laser(x, l));
        t.push(vec![Some(l), Some(cp), Some(las), Some(cp + las), Some(joule_to_microkelvin(cp + las))]);
    }
    if ls.len() >= MIN_FEATURE_POINTS {
        t.meta("features", describe(&analyze(land, x, ls)?));
    }
    Ok(t)
}

pub fn laser1(ctx: &Context) -> Result<Table, CliError> {
    let stack = ctx.stack()?;
    let rb = ctx.rubidium()?;
    let beams = ctx.beams(vec![BeamConfig::at_offset(BLUE, 0.7, 0.2)], 1)?;
    let ls = ctx.distances((20e-9, 5e-6, 150));
    let cp = ctx.cp_curve(&ls)?;
    let axes = &ctx.cfg.scan.axes;
    let land = |b: &[BeamConfig]| -> neqcp::Result<Landscape> {
        let m = EvanescentMode::new(&build_beam(&b[0], &stack)?, &stack, &rb)?;
        Ok(Landscape::new(Background::Cached(cp.clone()), LaserTerms::One(m)))
    };
    if axes.is_empty() {
        return curve_table("laser1", &land(&beams)?, 0.0, &ls);
    }
    need_feature_grid(&ls)?;
    let rows = sweep(axes, |vals| {
        let mut b = beams.clone();
        let mut x = 0.0;
        for &(i, v) in vals {
            apply_axis(&mut b, &mut x, &axes[i], v);
        }
        let l = land(&b)?;
        let LaserTerms::One(m) = l.lasers else { unreachable!() };
        let mut row = vec![Some(m.t_field.norm_sqr())];
        row.extend(feature_cells(&analyze(&l, x, &ls)?));
        Ok(row)
    })?;
    let mut t = Table::new("laser1");
    for ax in axes {
        let (n, u) = axis_label(ax);
        t = t.column(&n, u);
    }
    let mut t = feature_columns(t.column("|t_field|^2", "1"));
    t.rows = rows;
    Ok(t)
}

fn time_mode(b: &[LaserBeam], time: f64) -> TimeMode {
    if (b[0].omega() - b[1].omega()).abs() > AVERAGING_THRESHOLD {
        TimeMode::Averaged
    } else {
        TimeMode::At(time)
    }
}

pub fn laser2(ctx: &Context) -> Result<Table, CliError> {
    let stack = ctx.stack()?;
    let rb = ctx.rubidium()?;
    let beams = ctx.beams(
        vec![BeamConfig::at_offset(BLUE, 0.691, 1.2), BeamConfig::at_offset(RED, 0.502, 1.2)],
        2,
    )?;
    let ls = ctx.distances((20e-9, 5e-6, 150));
    let cp = ctx.cp_curve(&ls)?;
    let axes = &ctx.cfg.scan.axes;
    let time = ctx.cfg.scan.time_s;
    let land = |b: &[BeamConfig]| -> neqcp::Result<Landscape> {
        let lb = [build_beam(&b[0], &stack)?, build_beam(&b[1], &stack)?];
        let field = TwoBeamField::new(&lb[0], &lb[1], &stack, &rb)?;
        Ok(Landscape::new(Background::Cached(cp.clone()), LaserTerms::Two(field, time_mode(&lb, time))))
    };
    if axes.is_empty() {
        let l = land(&beams)?;
        let mut t = curve_table("laser2", &l, ctx.cfg.scan.x_m, &ls)?;
        let LaserTerms::Two(_, mode) = l.lasers else { unreachable!() };
        t.meta("time_mode", format!("{mode:?}"));
        return Ok(t);
    }
    need_feature_grid(&ls)?;
    let rows = sweep(axes, |vals| {
        let mut b = beams.clone();
        let mut x = ctx.cfg.scan.x_m;
        for &(i, v) in vals {
            apply_axis(&mut b, &mut x, &axes[i], v);
        }
        Ok(feature_cells(&analyze(&land(&b)?, x, &ls)?))
    })?;
    let mut t = Table::new("laser2");
    for ax in axes {
        let (n, u) = axis_label(ax);
        t = t.column(&n, u);
    }
    let mut t = feature_columns(t);
    t.rows = rows;
    Ok(t)
}

pub fn lattice(ctx: &Context) -> Result<Table, CliError> {
    let stack = ctx.stack()?;
    let rb = ctx.rubidium()?;
    let fwd = BeamConfig::at_offset(BLUE, 0.7, 0.2);
    let bwd = BeamConfig {
        direction: DirectionConfig::Backward,
        ..fwd.clone()
    };
    let beams = ctx.beams(vec![fwd, bwd], 2)?;
    let lb = [build_beam(&beams[0], &stack)?, build_beam(&beams[1], &stack)?];
    let period = lattice_period(&lb[0], &stack)?;
    let xs = match ctx.cfg.scan.axes.as_slice() {
        [] => linspace(0.0, 2.0 * period, 81),
        [a] if a.param == AxisParam::XM => axis_values(a),
        _ => return Err(CliError::Config("lattice takes at most one scan axis, of param \"x_m\"".into())),
    };
    let ls = ctx.distances((20e-9, 1e-6, 40));
    let cp = ctx.cp_curve(&ls)?;
    let field = TwoBeamField::new(&lb[0], &lb[1], &stack, &rb)?;
    let land = Landscape::new(Background::Cached(cp), LaserTerms::Two(field, time_mode(&lb, ctx.cfg.scan.time_s)));
    let cells: Vec<(f64, f64)> = ls.iter().flat_map(|&l| xs.iter().map(move |&x| (x, l))).collect();
    let rows = cells
        .par_iter()
        .map(|&(x, l)| -> neqcp::Result<Vec<Option<f64>>> {
            let las = land.laser(x, l);
            let total = land.total(x, l)?;
            Ok(vec![Some(x), Some(l), Some(las), Some(joule_to_microkelvin(las)), Some(total), Some(joule_to_microkelvin(total))])
        })
        .collect::<neqcp::Result<Vec<_>>>()?;
    let mut t = Table::new("lattice")
        .column("x", "m")
        .column("L", "m")
        .column("U_laser", "J")
        .column("U_laser", "uK")
        .column("U", "J")
        .column("U", "uK");
    t.meta("period_m", crate::output::fmt(period));
    t.rows = rows;
    Ok(t)
}

/// One oracle check: name, pass, detail.
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

pub fn verify(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let metal = ctx.metal()?;
    let surface = Surface::Drude(metal);
    let mut out = vec![];

    let atom0 = ctx.two_level(0.0)?;
    let mut worst = 0.0f64;
    for l in [50e-9, metal.plasma_wavelength(), 1e-6] {
        let a = delta_real_axis(l, 0.0, &atom0, &surface, &ctx.num)?;
        let b = delta_rotated(l, 0.0, &atom0, &surface, &ctx.num)?;
        worst = worst.max((a / b - 1.0).abs());
    }
    out.push(Check {
        name: "delta dual formula",
        pass: worst < 1e-4,
        detail: format!("worst relative difference {worst:.2e} (tolerance 1e-4)"),
    });

    let mut worst = 0.0f64;
    for (b, nu) in [(0.0, 1.0), (0.5, 0.3), (1.3, 0.7), (2.0, 2.5), (2.9, 0.05)] {
        let (n, a2) = verify_thermal_decoupling(b, nu)?;
        worst = worst
            .max((n - (b * b + nu + 0.5)).abs() / (b * b + nu + 0.5))
            .max((a2 - b * b).norm() / (1.0 + b * b));
    }
    out.push(Check {
        name: "thermal decoupling",
        pass: worst < 1e-6,
        detail: format!("worst relative error {worst:.2e} (tolerance 1e-6)"),
    });

    let tk = ctx.cfg.temperature.t_k;
    let atom = ctx.two_level(tk)?;
    let wp = metal.plasma_frequency();
    let wsp = metal.surface_plasmon_frequency();
    let l = metal.plasma_wavelength() / 100.0;
    let (f0, a0) = nonretarded_split(l, tk, &atom, wsp)?;
    let rf = plasmonic_uf(l, tk, &atom, wp, &ctx.num)? / f0;
    let ra = plasmonic_ua(l, &atom, wp, &ctx.num)? / a0;
    out.push(Check {
        name: "plasmon near field",
        pass: (rf - 1.0).abs() < 0.02 && (ra - 1.0).abs() < 0.02,
        detail: format!("U_f ratio {rf:.4}, U_a ratio {ra:.4} at lambda_P/100 (tolerance 2%)"),
    });

    let l = 5e-9;
    let s = split_energies(l, tk, &atom, &surface, &ctx.num)?;
    let (f0, a0) = nonretarded_split(l, tk, &atom, wsp)?;
    let (r, r0) = ((s.u_field / s.u_atom).abs(), (f0 / a0).abs());
    out.push(Check {
        name: "split near field",
        pass: (r / r0 - 1.0).abs() < 0.25,
        detail: format!("|U_f/U_a| numeric {r:.4}, closed form {r0:.4} at 5 nm (tolerance 25%)"),
    });

    let w = 0.5 * wsp;
    let back = omega_sp(k_sp(w, wp)?, wp);
    out.push(Check {
        name: "dispersion round trip",
        pass: (back / w - 1.0).abs() < 1e-12,
        detail: format!("relative error {:.2e} (tolerance 1e-12)", (back / w - 1.0).abs()),
    });
    Ok(out)
}
