//! Numerical building blocks: quadrature, extremum search, interpolation.

pub mod optimize;
pub mod quad;
pub mod spline;

pub use quad::{Estimate, QuadOptions};

/// Accuracy knobs shared by every energy evaluation.
///
/// `cutoff_scale` multiplies every truncation cutoff (k-space, frequency,
/// Matsubara index); `rel_tol` is the relative tolerance handed to the
/// quadratures. [`Numerics::refined`] halves the tolerance and doubles every
/// cutoff, which is how convergence is checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub rel_tol: f64,
    pub cutoff_scale: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            cutoff_scale: 1.0,
        }
    }
}

impl Numerics {
    pub fn refined(&self) -> Self {
        Self {
            rel_tol: self.rel_tol * 0.5,
            cutoff_scale: self.cutoff_scale * 2.0,
        }
    }

    pub fn quad(&self) -> QuadOptions {
        QuadOptions::rel(self.rel_tol)
    }

    /// Options for inner integrals nested inside an outer quadrature.
    pub fn inner_quad(&self) -> QuadOptions {
        QuadOptions::rel(self.rel_tol * 0.1)
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
