//! Grid operators: position/momentum stencils, the canonical-chart
//! Hamiltonian with its banded oracle form, the two ordering representations
//! in the physical chart, and banded eigensolver fronts.

use crate::error::{domain, numerical, Result};
use crate::linalg::{SymPentadiagonal, SymTridiagonal};
use crate::params::OscillatorParams;
use crate::quantumgrid::grid::{Grid, GridState};
use ndarray::Array2;
use num_complex::Complex64;

/// Dense matrices are capped so operator work stays in memory budget
/// (64 MB per matrix at the cap); products and exponentials should stay
/// well below it, and large-N eigensolves go through the banded paths.
const MAX_DENSE: usize = 2048;

/// Dense operator on a grid. The Hermitian flag is measured at build time
/// (max|M−M†| < 1e−12·max|M|), never assumed.
#[derive(Debug, Clone)]
pub struct GridOperator {
    pub grid: Grid,
    pub entries: Array2<Complex64>,
    pub hermitian: bool,
}

impl GridOperator {
    pub fn new(grid: Grid, entries: Array2<Complex64>) -> Result<Self> {
        if entries.nrows() != grid.n || entries.ncols() != grid.n {
            return Err(domain("operator shape does not match grid"));
        }
        if grid.n > MAX_DENSE {
            return Err(domain(format!(
                "dense grid operators are limited to N ≤ {MAX_DENSE}; use the banded forms"
            )));
        }
        let mut scale = 0.0f64;
        let mut dev = 0.0f64;
        for i in 0..grid.n {
            for j in 0..grid.n {
                scale = scale.max(entries[(i, j)].norm());
                dev = dev.max((entries[(i, j)] - entries[(j, i)].conj()).norm());
            }
        }
        let hermitian = dev < 1e-12 * scale.max(f64::MIN_POSITIVE);
        Ok(Self { grid, entries, hermitian })
    }

    pub fn apply(&self, state: &GridState) -> Result<GridState> {
        if state.grid.n != self.grid.n {
            return Err(domain("state and operator grids differ"));
        }
        let n = self.grid.n;
        let mut out = vec![Complex64::ZERO; n];
        for i in 0..n {
            let mut acc = Complex64::ZERO;
            for j in 0..n {
                acc += self.entries[(i, j)] * state.values[j];
            }
            out[i] = acc;
        }
        GridState::new(self.grid.clone(), out)
    }

    /// Adjoint with respect to the grid inner product (plain conjugate
    /// transpose on a uniform grid).
    pub fn adjoint(&self) -> Result<Self> {
        Self::new(self.grid.clone(), self.entries.t().mapv(|v| v.conj()))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if other.grid.n != self.grid.n {
            return Err(domain("operator grids differ"));
        }
        Self::new(self.grid.clone(), self.entries.dot(&other.entries))
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.entries.dot(&other.entries);
        let ba = other.entries.dot(&self.entries);
        Self::new(self.grid.clone(), ab - ba)
    }

    /// Frobenius norm of the interior block (N/8..7N/8 on both indices).
    pub fn interior_norm(&self) -> f64 {
        let r = self.grid.interior();
        let mut s = 0.0;
        for i in r.clone() {
            for j in r.clone() {
                s += self.entries[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    }
}

/// First-derivative matrix d/dX: antisymmetric central differences of the
/// requested order with Dirichlet closure (off-grid points dropped).
pub fn d1_matrix(grid: &Grid, order: usize) -> Result<Array2<f64>> {
    let n = grid.n;
    let h = grid.h;
    let mut m = Array2::zeros((n, n));
    match order {
        2 => {
            for i in 0..n {
                if i >= 1 {
                    m[(i, i - 1)] = -1.0 / (2.0 * h);
                }
                if i + 1 < n {
                    m[(i, i + 1)] = 1.0 / (2.0 * h);
                }
            }
        }
        4 => {
            for i in 0..n {
                let set = |m: &mut Array2<f64>, j: isize, v: f64| {
                    if j >= 0 && (j as usize) < n {
                        m[(i, j as usize)] = v;
                    }
                };
                let i = i as isize;
                set(&mut m, i - 2, 1.0 / (12.0 * h));
                set(&mut m, i - 1, -8.0 / (12.0 * h));
                set(&mut m, i + 1, 8.0 / (12.0 * h));
                set(&mut m, i + 2, -1.0 / (12.0 * h));
            }
        }
        _ => return Err(domain("difference order must be 2 or 4")),
    }
    Ok(m)
}

/// Second-derivative matrix d²/dX² of the requested order with Dirichlet
/// closure.
pub fn d2_matrix(grid: &Grid, order: usize) -> Result<Array2<f64>> {
    let n = grid.n;
    let h2 = grid.h * grid.h;
    let mut m = Array2::zeros((n, n));
    let stencil: &[(isize, f64)] = match order {
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        4 => &[
            (-2, -1.0 / 12.0),
            (-1, 16.0 / 12.0),
            (0, -30.0 / 12.0),
            (1, 16.0 / 12.0),
            (2, -1.0 / 12.0),
        ],
        _ => return Err(domain("difference order must be 2 or 4")),
    };
    for i in 0..n as isize {
        for &(off, w) in stencil {
            let j = i + off;
            if j >= 0 && (j as usize) < n {
                m[(i as usize, j as usize)] = w / h2;
            }
        }
    }
    Ok(m)
}

fn to_complex(m: &Array2<f64>) -> Array2<Complex64> {
    m.mapv(|v| Complex64::new(v, 0.0))
}

/// X̂: diagonal multiplication by the grid points.
pub fn position_op(grid: &Grid) -> Result<GridOperator> {
    let n = grid.n;
    let mut m = Array2::zeros((n, n));
    for j in 0..n {
        m[(j, j)] = Complex64::new(grid.points[j], 0.0);
    }
    GridOperator::new(grid.clone(), m)
}

/// P̂ = −iħ·d/dX at the chosen difference order; Hermitian because the
/// stencil is antisymmetric.
pub fn momentum_op(grid: &Grid, order: usize, hbar: f64) -> Result<GridOperator> {
    if !(hbar > 0.0) {
        return Err(domain("hbar must be positive"));
    }
    let d1 = d1_matrix(grid, order)?;
    let m = d1.mapv(|v| Complex64::new(0.0, -hbar * v));
    GridOperator::new(grid.clone(), m)
}

/// Potential in the canonical chart: (mω²/2λ)·tanh²(√λX).
fn well_potential(params: &OscillatorParams, x: f64) -> f64 {
    let sl = params.lambda.sqrt();
    params.m * params.omega * params.omega / (2.0 * params.lambda) * (sl * x).tanh().powi(2)
}

/// Banded canonical-chart Hamiltonian −(ħ²/2m)·D₂ + diag V(X_j), the oracle
/// form used for large-N eigensolves (off2 is zero at order 2).
pub fn hamiltonian_bands(
    params: &OscillatorParams,
    grid: &Grid,
    order: usize,
) -> Result<SymPentadiagonal> {
    params.validate()?;
    if !(params.lambda > 0.0) {
        return Err(domain("canonical-chart Hamiltonian requires lambda > 0"));
    }
    let n = grid.n;
    let k = params.hbar * params.hbar / (2.0 * params.m);
    let h2 = grid.h * grid.h;
    let (c0, c1, c2) = match order {
        2 => (2.0, -1.0, 0.0),
        4 => (30.0 / 12.0, -16.0 / 12.0, 1.0 / 12.0),
        _ => return Err(domain("difference order must be 2 or 4")),
    };
    let diag = (0..n)
        .map(|j| k * c0 / h2 + well_potential(params, grid.points[j]))
        .collect();
    Ok(SymPentadiagonal {
        diag,
        off1: vec![k * c1 / h2; n - 1],
        off2: vec![k * c2 / h2; n - 2],
    })
}

/// Dense canonical-chart Hamiltonian for operator algebra at modest N.
pub fn hamiltonian_x(params: &OscillatorParams, grid: &Grid, order: usize) -> Result<GridOperator> {
    params.validate()?;
    if !(params.lambda > 0.0) {
        return Err(domain("canonical-chart Hamiltonian requires lambda > 0"));
    }
    let k = params.hbar * params.hbar / (2.0 * params.m);
    let mut m = d2_matrix(grid, order)?.mapv(|v| -k * v);
    for j in 0..grid.n {
        m[(j, j)] += well_potential(params, grid.points[j]);
    }
    GridOperator::new(grid.clone(), to_complex(&m))
}

/// k lowest eigenpairs of a real symmetric tridiagonal matrix (Sturm
/// bisection + inverse iteration). Residual contract: ‖Tv − θv‖ ≤
/// 1e−10·‖T‖.
pub fn eigs_tridiagonal(t: &SymTridiagonal, k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let p = SymPentadiagonal {
        diag: t.diag.clone(),
        off1: t.off.clone(),
        off2: vec![0.0; t.diag.len().saturating_sub(2)],
    };
    eigs_pentadiagonal(&p, k)
}

/// k lowest eigenpairs of a real symmetric pentadiagonal matrix.
pub fn eigs_pentadiagonal(p: &SymPentadiagonal, k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    if k > p.n() {
        return Err(domain("requested more eigenpairs than the matrix dimension"));
    }
    let values = p.smallest_eigenvalues(k, 1e-13)?;
    let (glo, ghi) = p.gershgorin();
    let t_norm = glo.abs().max(ghi.abs());
    let mut out = Vec::with_capacity(k);
    for (idx, &val) in values.iter().enumerate() {
        let vec = p.eigenvector(val).map_err(|e| {
            numerical(format!("eigenpair {idx} did not converge: {e}"))
        })?;
        let res = residual_banded(p, val, &vec);
        if res > 1e-10 * t_norm {
            return Err(numerical(format!(
                "eigenpair {idx} residual {res:.3e} exceeds 1e-10·‖T‖ = {:.3e}",
                1e-10 * t_norm
            )));
        }
        out.push((val, vec));
    }
    Ok(out)
}

fn residual_banded(p: &SymPentadiagonal, val: f64, v: &[f64]) -> f64 {
    let n = p.n();
    let mut s = 0.0;
    for i in 0..n {
        let mut acc = p.diag[i] * v[i];
        if i >= 1 {
            acc += p.off1[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            acc += p.off1[i] * v[i + 1];
        }
        if i >= 2 {
            acc += p.off2[i - 2] * v[i - 2];
        }
        if i + 2 < n {
            acc += p.off2[i] * v[i + 2];
        }
        acc -= val * v[i];
        s += acc * acc;
    }
    s.sqrt()
}

/// The two orderings of the physical-chart kinetic operator, assembled with
/// shared order-2 stencils on an x grid:
/// P̂₁² = −ħ²(λx·d/dx + (1+λx²)·d²/dx²),
/// P̂₂² = −ħ²(λ + 3λx·d/dx + (1+λx²)·d²/dx²),
/// each plus the potential mω²x²/(2(1+λx²)). The matrices are returned as
/// tridiagonal band triples (diag, super, sub); they are not symmetric.
pub struct OrderingBands {
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub sub: Vec<f64>,
}

pub fn hamiltonian_orderings(
    params: &OscillatorParams,
    grid: &Grid,
) -> Result<(OrderingBands, OrderingBands)> {
    params.validate()?;
    let n = grid.n;
    let h = grid.h;
    let lam = params.lambda;
    let k = params.hbar * params.hbar / (2.0 * params.m);
    let mut h1 = OrderingBands {
        diag: vec![0.0; n],
        sup: vec![0.0; n - 1],
        sub: vec![0.0; n - 1],
    };
    let mut h2 = OrderingBands {
        diag: vec![0.0; n],
        sup: vec![0.0; n - 1],
        sub: vec![0.0; n - 1],
    };
    for j in 0..n {
        let x = grid.points[j];
        let u2 = 1.0 + lam * x * x;
        let pot = params.m * params.omega * params.omega * x * x / (2.0 * u2);
        // −ħ²/2m times the second-difference part, shared by both orderings.
        h1.diag[j] = k * 2.0 * u2 / (h * h) + pot;
        h2.diag[j] = h1.diag[j] - k * lam; // −ħ²λ/2m identity term of P̂₂²
        if j + 1 < n {
            h1.sup[j] = -k * (u2 / (h * h) + lam * x / (2.0 * h));
            h2.sup[j] = -k * (u2 / (h * h) + 3.0 * lam * x / (2.0 * h));
        }
        if j >= 1 {
            h1.sub[j - 1] = -k * (u2 / (h * h) - lam * x / (2.0 * h));
            h2.sub[j - 1] = -k * (u2 / (h * h) - 3.0 * lam * x / (2.0 * h));
        }
    }
    Ok((h1, h2))
}

/// Lowest k eigenvalues of an ordering matrix via diagonal balancing: a
/// tridiagonal matrix with positive super·sub products is similar to the
/// symmetric tridiagonal with off-diagonals √(sup·sub).
pub fn ordering_eigenvalues(bands: &OrderingBands, k: usize) -> Result<Vec<f64>> {
    let n = bands.diag.len();
    let mut off = vec![0.0; n - 1];
    for j in 0..n - 1 {
        let prod = bands.sup[j] * bands.sub[j];
        if prod <= 0.0 {
            return Err(numerical(
                "ordering matrix cannot be balanced: off-diagonal product is not positive",
            ));
        }
        off[j] = prod.sqrt();
    }
    let t = SymTridiagonal { diag: bands.diag.clone(), off };
    t.smallest_eigenvalues(k, 1e-13)
}

/// Interior-block Frobenius distance between F·H1·F⁻¹ and H2 with
/// F = diag((1+λx_j²)^{−1/2}), relative to the interior norm of H2.
pub fn similarity_residual(params: &OscillatorParams, grid: &Grid) -> Result<f64> {
    let (h1, h2) = hamiltonian_orderings(params, grid)?;
    let f: Vec<f64> = grid
        .points
        .iter()
        .map(|&x| (1.0 + params.lambda * x * x).powf(-0.5))
        .collect();
    let r = grid.interior();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in r.clone() {
        // Conjugated tridiagonal entries: (F H1 F⁻¹)_{ij} = f_i·H1_{ij}/f_j.
        let conj_diag = h1.diag[i];
        let d = conj_diag - h2.diag[i];
        num += d * d;
        den += h2.diag[i] * h2.diag[i];
        if r.contains(&(i + 1)) {
            let c_sup = f[i] * h1.sup[i] / f[i + 1];
            let d = c_sup - h2.sup[i];
            num += d * d;
            den += h2.sup[i] * h2.sup[i];
            let c_sub = f[i + 1] * h1.sub[i] / f[i];
            let d = c_sub - h2.sub[i];
            num += d * d;
            den += h2.sub[i] * h2.sub[i];
        }
    }
    Ok((num / den).sqrt())
}
