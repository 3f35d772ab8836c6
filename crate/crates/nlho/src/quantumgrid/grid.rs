//! Uniform symmetric grids and sampled states.

use crate::error::{domain, Result};
use crate::params::OscillatorParams;
use num_complex::Complex64;

/// Uniform grid on [−L, L] with N points, symmetric about the origin
/// (X_j = −X_{N−1−j} exactly).
#[derive(Debug, Clone)]
pub struct Grid {
    pub l: f64,
    pub n: usize,
    pub h: f64,
    pub points: Vec<f64>,
}

impl Grid {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(domain("grid half-width must be positive and finite"));
        }
        if n < 16 {
            return Err(domain("grid needs at least 16 points"));
        }
        let h = 2.0 * l / (n as f64 - 1.0);
        let c = (n as f64 - 1.0) / 2.0;
        // (j − c) is exact in f64, so the mirror symmetry is exact.
        let points = (0..n).map(|j| (j as f64 - c) * h).collect();
        Ok(Self { l, n, h, points })
    }

    /// Default box for bound-state work: wide enough for the weakly bound
    /// top level's decay length and for the λ → 0 Gaussian width.
    pub fn default_for(params: &OscillatorParams, n: usize) -> Result<Self> {
        params.validate()?;
        if !(params.lambda > 0.0) {
            return Err(domain("default grid sizing requires lambda > 0"));
        }
        let b = (params.hbar / (params.m * params.omega)).sqrt();
        Self::new((10.0 / params.lambda.sqrt()).max(12.0 * b), n)
    }

    /// Interior index range N/8 .. 7N/8: operator-identity checks are
    /// restricted here to exclude stencil-boundary artifacts.
    pub fn interior(&self) -> std::ops::Range<usize> {
        self.n / 8..7 * self.n / 8
    }
}

/// A state sampled on a grid, with the discrete L² norm Σ|ψ_j|²·h.
#[derive(Debug, Clone)]
pub struct GridState {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl GridState {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(domain("state length does not match grid"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(domain("state contains non-finite samples"));
        }
        Ok(Self { grid, values })
    }

    /// Discrete L² norm √(Σ|ψ_j|²·h).
    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.h).sqrt()
    }

    /// h-weighted inner product ⟨self|other⟩.
    pub fn inner(&self, other: &GridState) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.h
    }

    /// Box-adequacy diagnostic: max boundary magnitude relative to the peak.
    /// Bound states need this < 1e−8.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        self.values[0].norm().max(self.values[self.grid.n - 1].norm()) / peak
    }

    /// Same state scaled to unit norm.
    pub fn normalized(&self) -> Result<GridState> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(domain("cannot normalize a zero or non-finite state"));
        }
        Ok(GridState {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v / n).collect(),
        })
    }
}
