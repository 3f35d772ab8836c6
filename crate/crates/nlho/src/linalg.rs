//! Banded symmetric eigensolvers (Sturm/inertia bisection + inverse
//! iteration) and a small banded LU. Self-contained so the finite-difference
//! oracles carry no external linear-algebra dependency.

use crate::error::{domain, numerical, Result};

/// Symmetric tridiagonal matrix: `diag` length n, `off` length n−1.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Symmetric pentadiagonal matrix: `diag` length n, `off1` (first
/// superdiagonal) length n−1, `off2` (second superdiagonal) length n−2.
#[derive(Debug, Clone)]
pub struct SymPentadiagonal {
    pub diag: Vec<f64>,
    pub off1: Vec<f64>,
    pub off2: Vec<f64>,
}

impl SymTridiagonal {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    fn check(&self) -> Result<()> {
        if self.off.len() + 1 != self.diag.len() {
            return Err(domain("tridiagonal band lengths inconsistent"));
        }
        Ok(())
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..n {
            let mut r = 0.0;
            if j > 0 {
                r += self.off[j - 1].abs();
            }
            if j + 1 < n {
                r += self.off[j].abs();
            }
            lo = lo.min(self.diag[j] - r);
            hi = hi.max(self.diag[j] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via LDLᵀ).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.n();
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for j in 1..n {
            let b = self.off[j - 1];
            let mut prev = d;
            if prev == 0.0 {
                prev = f64::MIN_POSITIVE.sqrt();
            }
            d = self.diag[j] - x - b * b / prev;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k` smallest eigenvalues by bisection.
    pub fn smallest_eigenvalues(&self, k: usize, tol: f64) -> Result<Vec<f64>> {
        self.check()?;
        let count = |x: f64| self.count_below(x);
        bisect_eigenvalues(self.gershgorin(), k, tol, &count)
    }
}

impl SymPentadiagonal {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    fn check(&self) -> Result<()> {
        if self.off1.len() + 1 != self.diag.len() || self.off2.len() + 2 != self.diag.len() {
            return Err(domain("pentadiagonal band lengths inconsistent"));
        }
        Ok(())
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..n {
            let mut r = 0.0;
            for (dist, band) in [(1usize, &self.off1), (2usize, &self.off2)] {
                if j >= dist {
                    r += band[j - dist].abs();
                }
                if j + dist < n {
                    r += band[j].abs();
                }
            }
            lo = lo.min(self.diag[j] - r);
            hi = hi.max(self.diag[j] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`, by the inertia of the
    /// banded LDLᵀ factorization of A − xI (Sylvester's law).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.n();
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        // d: pivots; l1, l2: subdiagonal multipliers of L (one and two below).
        let mut d_prev2 = 0.0; // d_{j-2}
        let mut d_prev1 = 0.0; // d_{j-1}
        let mut l1_prev = 0.0; // l1_{j-1}
        let mut l2_prev1 = 0.0; // l2_{j-1}
        let mut l2_prev2 = 0.0; // l2_{j-2}
        for j in 0..n {
            let a = self.diag[j] - x;
            let mut d = a;
            if j >= 1 {
                d -= d_prev1 * l1_prev * l1_prev;
            }
            if j >= 2 {
                d -= d_prev2 * l2_prev2 * l2_prev2;
            }
            if d == 0.0 {
                d = tiny;
            }
            if d < 0.0 {
                count += 1;
            }
            let l1 = if j + 1 < n {
                let b = self.off1[j];
                let correction = if j >= 1 { d_prev1 * l1_prev * l2_prev1 } else { 0.0 };
                (b - correction) / d
            } else {
                0.0
            };
            let l2 = if j + 2 < n { self.off2[j] / d } else { 0.0 };
            d_prev2 = d_prev1;
            d_prev1 = d;
            l2_prev2 = l2_prev1;
            l2_prev1 = l2;
            l1_prev = l1;
        }
        count
    }

    pub fn smallest_eigenvalues(&self, k: usize, tol: f64) -> Result<Vec<f64>> {
        self.check()?;
        let count = |x: f64| self.count_below(x);
        bisect_eigenvalues(self.gershgorin(), k, tol, &count)
    }

    /// Eigenvector for an isolated eigenvalue `mu` by inverse iteration with
    /// a banded LU of A − μ′I (μ′ slightly shifted off the eigenvalue).
    pub fn eigenvector(&self, mu: f64) -> Result<Vec<f64>> {
        self.check()?;
        let n = self.n();
        let (lo, hi) = self.gershgorin();
        let scale = (hi - lo).max(1.0);
        let shift = mu + 1e-11 * scale;
        let mut band = BandedMatrix::zeros(n, 2, 2);
        for j in 0..n {
            band.set(j, j, self.diag[j] - shift);
            if j + 1 < n {
                band.set(j, j + 1, self.off1[j]);
                band.set(j + 1, j, self.off1[j]);
            }
            if j + 2 < n {
                band.set(j, j + 2, self.off2[j]);
                band.set(j + 2, j, self.off2[j]);
            }
        }
        let lu = band.lu()?;
        // Deterministic start with all Fourier contents populated.
        let mut v: Vec<f64> = (0..n)
            .map(|j| 1.0 + 0.3 * ((j as f64 * 0.7312).sin() + 0.1 * (j as f64 * 2.9).cos()))
            .collect();
        normalize(&mut v);
        let mut last_norm = 0.0;
        for _ in 0..8 {
            let mut w = lu.solve(&v)?;
            last_norm = norm(&w);
            if !last_norm.is_finite() {
                return Err(numerical("inverse iteration diverged"));
            }
            for x in &mut w {
                *x /= last_norm;
            }
            v = w;
            // Growth ~1/(gap from shift); 1e9 means we are well converged.
            if last_norm > 1e9 {
                break;
            }
        }
        if last_norm < 1e4 {
            return Err(numerical(format!(
                "inverse iteration did not lock onto eigenvalue {mu} (growth {last_norm:.2e})"
            )));
        }
        // Fix an overall sign: make the largest-magnitude entry positive.
        let mut imax = 0;
        for j in 0..n {
            if v[j].abs() > v[imax].abs() {
                imax = j;
            }
        }
        if v[imax] < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
        Ok(v)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let s = norm(v);
    for x in v {
        *x /= s;
    }
}

/// Find the `k` smallest eigenvalues given a spectrum interval and a
/// count-below function, by bisection to relative tolerance `tol` (relative
/// to the eigenvalue magnitude, not the Gershgorin width, which can exceed
/// the low eigenvalues by many orders for fine grids).
fn bisect_eigenvalues(
    (glo, ghi): (f64, f64),
    k: usize,
    tol: f64,
    count: &dyn Fn(f64) -> usize,
) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(domain("bisection tolerance must be positive"));
    }
    let scale = (ghi - glo).abs().max(1.0);
    let mut out = Vec::with_capacity(k);
    for idx in 0..k {
        // Smallest x with count_below(x) ≥ idx+1.
        let mut lo = glo;
        let mut hi = ghi + scale * 1e-12;
        if count(hi) < idx + 1 {
            return Err(numerical(format!(
                "matrix has fewer than {} eigenvalues below the Gershgorin bound",
                idx + 1
            )));
        }
        while hi - lo > tol * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break; // f64 resolution reached
            }
            if count(mid) >= idx + 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// General banded matrix in LAPACK-style band storage with room for fill-in
/// during partially pivoted LU.
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// rows: 2·kl+ku+1 working diagonals; data[band][col].
    data: Vec<Vec<f64>>,
}

pub struct BandedLu {
    n: usize,
    kl: usize,
    ku_work: usize,
    data: Vec<Vec<f64>>,
    pivots: Vec<usize>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let rows = 2 * kl + ku + 1;
        Self { n, kl, ku, data: vec![vec![0.0; n]; rows] }
    }

    /// Band-storage row index for entry (i, j); entries outside the band are
    /// silently ignored by `set`.
    fn band_row(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = (i as isize, j as isize);
        let d = j - i; // diagonal offset
        if d > self.ku as isize + self.kl as isize || d < -(self.kl as isize) {
            return None;
        }
        Some((self.kl as isize + self.ku as isize + i - j) as usize)
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        if let Some(r) = self.band_row(i, j) {
            self.data[r][j] = value;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.band_row(i, j) {
            Some(r) => self.data[r][j],
            None => 0.0,
        }
    }

    /// LU with partial pivoting (row interchanges stay within the band
    /// working area, upper bandwidth grows to ku+kl).
    pub fn lu(mut self) -> Result<BandedLu> {
        let n = self.n;
        let kl = self.kl;
        let ku_work = self.ku + self.kl;
        let mut pivots = vec![0usize; n];
        for col in 0..n {
            // Pivot among rows col..min(col+kl, n-1).
            let last = (col + kl).min(n - 1);
            let mut piv = col;
            let mut best = self.get(col, col).abs();
            for r in col + 1..=last {
                let v = self.get(r, col).abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return Err(numerical(format!("banded LU: zero pivot at column {col}")));
            }
            pivots[col] = piv;
            if piv != col {
                // Swap rows col and piv across the working band.
                let jmax = (col + ku_work).min(n - 1);
                for j in col..=jmax {
                    let a = self.get(col, j);
                    let b = self.get(piv, j);
                    self.set(col, j, b);
                    self.set(piv, j, a);
                }
            }
            let d = self.get(col, col);
            for r in col + 1..=last {
                let m = self.get(r, col) / d;
                self.set(r, col, m); // store multiplier in place
                if m != 0.0 {
                    let jmax = (col + ku_work).min(n - 1);
                    for j in col + 1..=jmax {
                        let v = self.get(r, j) - m * self.get(col, j);
                        self.set(r, j, v);
                    }
                }
            }
        }
        Ok(BandedLu { n, kl, ku_work, data: self.data, pivots })
    }
}

impl BandedLu {
    fn get(&self, i: usize, j: usize) -> f64 {
        let d = j as isize - i as isize;
        if d > self.ku_work as isize || d < -(self.kl as isize) {
            return 0.0;
        }
        // Same storage layout as BandedMatrix: row kl+ku+i−j = ku_work+i−j.
        let r = (self.ku_work as isize + i as isize - j as isize) as usize;
        self.data[r][j]
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.n {
            return Err(domain("rhs length mismatch"));
        }
        let n = self.n;
        let mut x = rhs.to_vec();
        // Forward: apply pivots and L.
        for col in 0..n {
            let piv = self.pivots[col];
            if piv != col {
                x.swap(col, piv);
            }
            let last = (col + self.kl).min(n - 1);
            for r in col + 1..=last {
                let m = self.get(r, col);
                if m != 0.0 {
                    x[r] -= m * x[col];
                }
            }
        }
        // Back substitution with U.
        for col in (0..n).rev() {
            let jmax = (col + self.ku_work).min(n - 1);
            let mut s = x[col];
            for j in col + 1..=jmax {
                s -= self.get(col, j) * x[j];
            }
            x[col] = s / self.get(col, col);
        }
        Ok(x)
    }
}
