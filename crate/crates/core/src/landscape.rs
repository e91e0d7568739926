//! Total out-of-equilibrium potentials and their barriers and wells.

use rayon::prelude::*;

use crate::atom::{AtomModel, TwoLevelAtom};
use crate::error::{Error, Result};
use crate::laser::{EvanescentMode, TimeMode, TwoBeamField};
use crate::materials::{DrudeMetal, Surface};
use crate::numerics::optimize::{golden_max, golden_min};
use crate::numerics::spline::CubicSpline;
use crate::numerics::{logspace, Numerics};
use crate::potentials::equilibrium_u;
use crate::spectral::{imbalanced_total, ImbalanceConfig};

/// Shortest distance considered by the feature searches.
pub const L_MIN: f64 = 20e-9;

/// Equilibrium Casimir-Polder energy tabulated once and interpolated as
/// `ln(−U)` against `ln L`.
#[derive(Debug, Clone)]
pub struct CpCurve {
    spline: CubicSpline,
}

impl CpCurve {
    /// Tabulates `U(T)` on `nodes` log-spaced distances in `[lo, hi]`.
    pub fn tabulate(
        atom: &AtomModel,
        surface: &Surface,
        temperature: f64,
        (lo, hi): (f64, f64),
        nodes: usize,
        num: &Numerics,
    ) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) || nodes < 4 {
            return Err(Error::Domain("CP table needs 0 < lo < hi and ≥ 4 nodes".into()));
        }
        let ls = logspace(lo, hi, nodes);
        let us: Vec<f64> = ls
            .par_iter()
            .map(|&l| equilibrium_u(l, temperature, atom, surface, num))
            .collect::<Result<_>>()?;
        if let Some(u) = us.iter().find(|u| !(**u < 0.0)) {
            return Err(Error::Domain(format!("CP energy {u:e} is not attractive; cannot tabulate ln(−U)")));
        }
        let spline = CubicSpline::new(ls.iter().map(|l| l.ln()).collect(), us.iter().map(|u| (-u).ln()).collect())?;
        Ok(Self { spline })
    }

    /// Rubidium (two lines) above a gold half-space at T, on `[10 nm, 20 µm]`.
    pub fn rubidium_gold(temperature: f64, num: &Numerics) -> Result<Self> {
        let atom = AtomModel::Lines(crate::atom::TransitionAtom::rubidium());
        Self::tabulate(&atom, &Surface::gold(), temperature, (10e-9, 20e-6), 120, num)
    }

    pub fn domain(&self) -> (f64, f64) {
        let (a, b) = self.spline.domain();
        (a.exp(), b.exp())
    }

    pub fn eval(&self, l: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        // Absorb the rounding of exp(ln x) at the ends.
        let t = l.ln().clamp(lo.ln(), hi.ln());
        if l < lo * (1.0 - 1e-12) || l > hi * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("L = {l:e} outside tabulated [{lo:e}, {hi:e}]")));
        }
        Ok(-self.spline.eval(t)?.exp())
    }
}

/// Source of the equilibrium part of the energy.
#[derive(Debug, Clone)]
pub enum Background {
    /// No equilibrium term; only the laser terms.
    None,
    /// Direct evaluation of U(T).
    Exact {
        atom: AtomModel,
        surface: Surface,
        temperature: f64,
        num: Numerics,
    },
    Cached(CpCurve),
    /// U(T) with the plasmon branch at its own temperature.
    Imbalanced {
        cfg: ImbalanceConfig,
        atom: TwoLevelAtom,
        metal: DrudeMetal,
        num: Numerics,
    },
}

/// Laser terms added on top of the background.
#[derive(Debug, Clone, Copy)]
pub enum LaserTerms {
    None,
    One(EvanescentMode),
    Two(TwoBeamField, TimeMode),
}

/// `U_oe(x, L)` = equilibrium (possibly imbalanced) + laser terms.
#[derive(Debug, Clone)]
pub struct Landscape {
    pub background: Background,
    pub lasers: LaserTerms,
}

impl Landscape {
    pub fn new(background: Background, lasers: LaserTerms) -> Self {
        Self { background, lasers }
    }

    pub fn background(&self, l: f64) -> Result<f64> {
        match &self.background {
            Background::None => Ok(0.0),
            Background::Exact {
                atom,
                surface,
                temperature,
                num,
            } => equilibrium_u(l, *temperature, atom, surface, num),
            Background::Cached(c) => c.eval(l),
            Background::Imbalanced { cfg, atom, metal, num } => imbalanced_total(l, cfg, atom, metal, num),
        }
    }

    pub fn laser(&self, x: f64, l: f64) -> f64 {
        match &self.lasers {
            LaserTerms::None => 0.0,
            LaserTerms::One(m) => m.energy(l),
            LaserTerms::Two(f, t) => f.energy(x, l, *t),
        }
    }

    pub fn total(&self, x: f64, l: f64) -> Result<f64> {
        if !(l > 0.0) {
            return Err(Error::Domain(format!("need L > 0, got {l:e}")));
        }
        Ok(self.background(l)? + self.laser(x, l))
    }

    /// Samples `U_oe(x, ·)` on a grid; points are evaluated in parallel and
    /// returned in grid order.
    pub fn curve(&self, x: f64, ls: &[f64]) -> Result<PotentialCurve> {
        let us = ls.par_iter().map(|&l| self.total(x, l)).collect::<Result<Vec<_>>>()?;
        PotentialCurve::new(ls.to_vec(), us)
    }
}

/// `U(L)` sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCurve {
    l: Vec<f64>,
    u: Vec<f64>,
}

impl PotentialCurve {
    pub fn new(l: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if l.len() != u.len() || l.len() < 3 {
            return Err(Error::Domain("curve needs ≥ 3 matching points".into()));
        }
        if l.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("curve grid not strictly increasing".into()));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("curve has non-finite values".into()));
        }
        Ok(Self { l, u })
    }

    pub fn distances(&self) -> &[f64] {
        &self.l
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    /// Number of strict interior local maxima and minima.
    pub fn extremum_counts(&self) -> (usize, usize) {
        let mut maxima = 0;
        let mut minima = 0;
        for w in self.u.windows(3) {
            if w[1] > w[0] && w[1] > w[2] {
                maxima += 1;
            }
            if w[1] < w[0] && w[1] < w[2] {
                minima += 1;
            }
        }
        (maxima, minima)
    }
}

/// A located extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub l: f64,
    pub u: f64,
}

/// A located minimum and its depth below the far-grid value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Well {
    pub l: f64,
    pub u: f64,
    pub depth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FeatureReport {
    pub barrier: Option<Feature>,
    pub well: Option<Well>,
}

/// Grid points required by the feature searches.
pub const MIN_FEATURE_POINTS: usize = 50;

fn refine_bracket(curve: &PotentialCurve, i: usize) -> (f64, f64) {
    (curve.l[i - 1], curve.l[i + 1])
}

/// Highest positive interior maximum, refined on the continuous evaluator
/// to `10⁻⁴` relative in L. Ties on the grid go to the smallest L.
pub fn find_barrier<F>(curve: &PotentialCurve, eval: F) -> Result<Option<Feature>>
where
    F: Fn(f64) -> Result<f64>,
{
    if curve.l.len() < MIN_FEATURE_POINTS {
        return Err(Error::Domain(format!("feature search needs ≥ {MIN_FEATURE_POINTS} points")));
    }
    let mut best = 0;
    for (i, &v) in curve.u.iter().enumerate() {
        if v > curve.u[best] {
            best = i;
        }
    }
    if curve.u[best] <= 0.0 || best == 0 || best == curve.l.len() - 1 {
        return Ok(None);
    }
    let (a, b) = refine_bracket(curve, best);
    let mut failure = None;
    let (l, u) = golden_max(
        |l| {
            eval(l).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            })
        },
        a,
        b,
        1e-4 * curve.l[best],
    );
    if let Some(e) = failure {
        return Err(e);
    }
    // The refinement never does worse than the grid.
    Ok(Some(if u >= curve.u[best] { Feature { l, u } } else { Feature { l: curve.l[best], u: curve.u[best] } }))
}

/// Deepest interior local minimum beyond `after` (a barrier position, if any),
/// with depth `U(L_far) − U_min`, `L_far` the last grid point.
pub fn find_well<F>(curve: &PotentialCurve, after: Option<f64>, eval: F) -> Result<Option<Well>>
where
    F: Fn(f64) -> Result<f64>,
{
    if curve.l.len() < MIN_FEATURE_POINTS {
        return Err(Error::Domain(format!("feature search needs ≥ {MIN_FEATURE_POINTS} points")));
    }
    let n = curve.l.len();
    let start = after.map_or(1, |l0| curve.l.partition_point(|&l| l <= l0).max(1));
    let mut best: Option<usize> = None;
    for i in start..n - 1 {
        let v = curve.u[i];
        if v < curve.u[i - 1] && v <= curve.u[i + 1] && best.map_or(true, |b| v < curve.u[b]) {
            best = Some(i);
        }
    }
    let Some(i) = best else { return Ok(None) };
    let far = curve.u[n - 1];
    let (a, b) = refine_bracket(curve, i);
    let mut failure = None;
    let (l, u) = golden_min(
        |l| {
            eval(l).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                f64::INFINITY
            })
        },
        a,
        b,
        1e-4 * curve.l[i],
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let (l, u) = if u <= curve.u[i] { (l, u) } else { (curve.l[i], curve.u[i]) };
    let depth = far - u;
    Ok((depth > 0.0).then_some(Well { l, u, depth }))
}

/// Barrier and well of `landscape` at in-plane position `x` on the grid `ls`.
pub fn analyze(landscape: &Landscape, x: f64, ls: &[f64]) -> Result<FeatureReport> {
    let curve = landscape.curve(x, ls)?;
    let eval = |l: f64| landscape.total(x, l);
    let barrier = find_barrier(&curve, eval)?;
    let well = find_well(&curve, barrier.map(|b| b.l), eval)?;
    Ok(FeatureReport { barrier, well })
}

/// Log grid from [`L_MIN`] to `hi`.
pub fn feature_grid(hi: f64, points: usize) -> Vec<f64> {
    logspace(L_MIN, hi, points)
}

/// A named sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, unit: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
            values,
        }
    }
}

/// Results of a 1D or 2D sweep in row-major order (`y` outer, `x` inner).
/// A failed point is recorded and the sweep carries on.
#[derive(Debug, Clone)]
pub struct PotentialMap<T> {
    pub x: Axis,
    pub y: Option<Axis>,
    pub cells: Vec<Result<T>>,
}

impl<T> PotentialMap<T> {
    pub fn get(&self, ix: usize, iy: usize) -> &Result<T> {
        &self.cells[iy * self.x.values.len() + ix]
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.is_err()).count()
    }
}

pub fn sweep_1d<T, F>(x: Axis, f: F) -> PotentialMap<T>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync,
{
    let cells = x.values.par_iter().map(|&v| f(v)).collect();
    PotentialMap { x, y: None, cells }
}

pub fn sweep_2d<T, F>(x: Axis, y: Axis, f: F) -> PotentialMap<T>
where
    T: Send,
    F: Fn(f64, f64) -> Result<T> + Sync,
{
    let nx = x.values.len();
    let cells = (0..nx * y.values.len())
        .into_par_iter()
        .map(|i| f(x.values[i % nx], y.values[i / nx]))
        .collect();
    PotentialMap { x, y: Some(y), cells }
}
