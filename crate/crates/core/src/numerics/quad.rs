//! Adaptive Gauss-Kronrod quadrature with helpers for semi-infinite ranges,
//! Cauchy principal values and slowly convergent oscillatory tails.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn norm(&self) -> f64;
}

impl QuadValue for f64 {
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
}

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Integral estimate with its error bound and the number of integrand calls.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_814_602,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// One 21-point Kronrod / 10-point Gauss panel. Returns (Kronrod value, error).
fn gk21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = V::default();
    for j in 0..10 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod = kronrod + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    let err = (kronrod - gauss).norm();
    (kronrod, err)
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integration of `f` over `[a, b]` with optional interior break points.
///
/// Panels are bisected in order of decreasing error estimate until the summed
/// error falls below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate_breaks<V, F>(
    mut f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if points.len() < 2 {
        return Err(Error::Domain("integration needs at least two points".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let mut total = V::default();
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            if b == a {
                continue;
            }
            return Err(Error::Domain(format!("break points not increasing: {a} > {b}")));
        }
        let (value, error) = gk21(&mut f, a, b);
        evaluations += 21;
        total = total + value;
        total_err += error;
        heap.push(Panel { a, b, value, error });
    }
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Tolerance {
                context: "adaptive Gauss-Kronrod".into(),
                estimate: total.norm(),
                error: total_err,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * worst.a.abs().max(worst.b.abs()) {
            // Interval cannot be refined further in floating point.
            heap.push(Panel { error: 0.0, ..worst });
            total_err = heap.iter().map(|p| p.error).sum();
            if total_err <= target {
                break;
            }
            continue;
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid);
        let (v2, e2) = gk21(&mut f, mid, worst.b);
        evaluations += 42;
        total = total - worst.value + v1 + v2;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        if heap.len() % 64 == 0 {
            // Re-sum to avoid drift from repeated subtraction.
            total = heap.iter().fold(V::default(), |acc, p| acc + p.value);
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(Estimate {
        value: total,
        error: total_err,
        evaluations,
    })
}

/// Adaptive integration over `[a, b]`.
pub fn integrate<V, F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    integrate_breaks(f, &[a, b], opts)
}

/// Integral over `[a, ∞)` using `x = a + scale·t/(1-t)`.
///
/// `scale` should be the length over which `f` varies appreciably.
pub fn integrate_to_infinity<V, F>(
    mut f: F,
    a: f64,
    scale: f64,
    opts: &QuadOptions,
) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if !(scale > 0.0) {
        return Err(Error::Domain(format!("non-positive scale {scale}")));
    }
    integrate(
        |t: f64| {
            let one_minus = 1.0 - t;
            let x = a + scale * t / one_minus;
            f(x) * (scale / (one_minus * one_minus))
        },
        0.0,
        1.0,
        opts,
    )
}

/// Cauchy principal value of `∫_a^b h(x)/(x - pole) dx`.
///
/// A window of half-width `w = window · min(pole-a, b-pole)` around the pole
/// is folded onto itself, giving the regular integrand `[h(p+s) - h(p-s)]/s`;
/// the remainder is integrated as an ordinary integral. `breaks` lists extra
/// points where `h` is known to vary rapidly.
pub fn principal_value<F>(
    mut h: F,
    a: f64,
    b: f64,
    pole: f64,
    window: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<Estimate<f64>>
where
    F: FnMut(f64) -> f64,
{
    if !(pole > a && pole < b) {
        return Err(Error::Domain(format!(
            "pole {pole:e} not inside ({a:e}, {b:e})"
        )));
    }
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::Domain(format!("fold window fraction {window} not in (0, 1]")));
    }
    let mut w = window * (pole - a).min(b - pole);
    // Keep rapidly varying features out of the fold window.
    for &x in breaks {
        let d = (x - pole).abs();
        if d > 0.0 && d < 2.0 * w {
            w = 0.5 * d;
        }
    }
    let folded = integrate_breaks(
        |s: f64| (h(pole + s) - h(pole - s)) / s,
        &[0.0, w],
        opts,
    )?;
    let mut value = folded.value;
    let mut error = folded.error;
    let mut evaluations = folded.evaluations;

    let mut outer = |lo: f64, hi: f64, h: &mut F| -> Result<()> {
        if hi - lo <= 0.0 {
            return Ok(());
        }
        let mut pts = vec![lo];
        pts.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
        pts.push(hi);
        let est = integrate_breaks(|x: f64| h(x) / (x - pole), &pts, opts)?;
        value += est.value;
        error += est.error;
        evaluations += est.evaluations;
        Ok(())
    };
    outer(a, pole - w, &mut h)?;
    outer(pole + w, b, &mut h)?;
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}

/// Wynn ε-algorithm: best extrapolated limit of a sequence of partial sums.
pub fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    if n < 3 {
        return partial_sums.last().copied().unwrap_or(0.0);
    }
    // prev = column k-1, cur = column k
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = *partial_sums.last().unwrap();
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut broke = false;
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 || !d.is_finite() {
                broke = true;
                break;
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        if broke {
            break;
        }
        k += 1;
        prev = cur;
        cur = next;
        if k % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
    }
    best
}

/// Integral over `[a, ∞)` of an oscillatory integrand, summed panel by panel
/// (panel width `period_half`, ideally half an oscillation) and accelerated
/// with the Wynn ε-algorithm.
pub fn integrate_oscillatory_tail<F>(
    mut f: F,
    a: f64,
    period_half: f64,
    min_panels: usize,
    max_panels: usize,
    opts: &QuadOptions,
) -> Result<Estimate<f64>>
where
    F: FnMut(f64) -> f64,
{
    let mut sums = Vec::new();
    let mut running = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut last_extrap = f64::NAN;
    let mut stable = 0;
    for j in 0..max_panels {
        let lo = a + j as f64 * period_half;
        let est = integrate(&mut f, lo, lo + period_half, opts)?;
        running += est.value;
        error += est.error;
        evaluations += est.evaluations;
        sums.push(running);
        if j + 1 >= min_panels.max(6) {
            let window = &sums[sums.len().saturating_sub(24)..];
            let extrap = wynn_epsilon(window);
            let scale = extrap.abs().max(opts.abs_tol);
            if (extrap - last_extrap).abs() <= opts.rel_tol * scale {
                stable += 1;
                if stable >= 3 {
                    return Ok(Estimate {
                        value: extrap,
                        error: error + (extrap - last_extrap).abs(),
                        evaluations,
                    });
                }
            } else {
                stable = 0;
            }
            last_extrap = extrap;
        }
    }
    Err(Error::Tolerance {
        context: "oscillatory tail".into(),
        estimate: last_extrap,
        error: error,
        evaluations,
    })
}
