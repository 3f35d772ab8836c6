//! Deformed ladder operators on the grid: the closed-form Ẑ, its commutator
//! series representation, the undeformed Â, and commutator consistency
//! checks against the BCH closed forms.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

use crate::error::{domain, numerical, Result};
use crate::params::OscillatorParams;
use crate::quantumgrid::expm::{cosm, sinhm};
use crate::quantumgrid::grid::{Grid, GridState};
use crate::quantumgrid::operators::{d1_matrix, momentum_op, GridOperator};

/// Stencil order used for every first-derivative matrix in this module.
const ORDER: usize = 4;

/// M = √λ(X̂ + b²·d/dX), the real argument of the closed-form Ẑ. With
/// P̂ = −iħ·d/dX the textbook combination √λX̂ + i√λP̂/(mω) is exactly this
/// real matrix.
fn m_matrix(params: &OscillatorParams, grid: &Grid) -> Result<Array2<f64>> {
    let b2 = params.derive().b2;
    let sl = params.lambda.sqrt();
    let mut m = d1_matrix(grid, ORDER)?;
    m.mapv_inplace(|v| v * sl * b2);
    for j in 0..grid.n {
        m[(j, j)] += sl * grid.points[j];
    }
    Ok(m)
}

fn to_complex(m: &Array2<f64>) -> Array2<Complex64> {
    m.mapv(|v| Complex64::new(v, 0.0))
}

/// Closed-form deformed annihilation operator
/// Ẑ = √(mω/2λ)·e^{λħ/mω}·sinh(M), M = √λ(X̂ + b²·d/dX),
/// built by scaling-and-squaring matrix exponentials.
pub fn quantum_z(params: &OscillatorParams, grid: &Grid) -> Result<GridOperator> {
    params.validate()?;
    if !(params.lambda > 0.0) {
        return Err(domain("the deformed ladder operator requires lambda > 0"));
    }
    let m = to_complex(&m_matrix(params, grid)?);
    let s = sinhm(&m)?;
    let kappa = (params.m * params.omega / (2.0 * params.lambda)).sqrt();
    let pref = (params.lambda * params.derive().b2).exp();
    GridOperator::new(grid.clone(), s.mapv(|v| v * kappa * pref))
}

/// Undeformed annihilation operator Â = √(mω/2ħ)X̂ + iP̂/√(2mωħ); real on
/// the grid because iP̂ = ħ·d/dX.
pub fn quantum_a(params: &OscillatorParams, grid: &Grid) -> Result<GridOperator> {
    params.validate()?;
    let b = params.derive().b2.sqrt();
    let cx = (params.m * params.omega / (2.0 * params.hbar)).sqrt();
    let mut m = d1_matrix(grid, ORDER)?;
    m.mapv_inplace(|v| v * b / SQRT_2);
    for j in 0..grid.n {
        m[(j, j)] += cx * grid.points[j];
    }
    GridOperator::new(grid.clone(), to_complex(&m))
}

/// Commutator-series form of the deformed ladder operator:
/// √(mω/2λ)·Σ_{n<N_terms} (η/2)ⁿ(−1)ⁿ/n!·[S, D²]_(n), η = ħ/mω,
/// with S = diag sinh(√λX_j) and the nested commutators
/// [S,D²]_(0) = S, [S,D²]_(n) = [[S,D²]_(n−1), D²].
///
/// D² is the square of the first-difference matrix, so the grid algebra
/// closes exactly as in the continuum: the full series is the conjugation
/// e^{(η/2)D²}·S·e^{−(η/2)D²} and sums to e^{−λħ/mω}·Ẑ in the interior.
pub fn quantum_z_series(
    params: &OscillatorParams,
    grid: &Grid,
    n_terms: usize,
) -> Result<GridOperator> {
    params.validate()?;
    if !(params.lambda > 0.0) {
        return Err(domain("the deformed ladder operator requires lambda > 0"));
    }
    if n_terms == 0 {
        return Err(domain("the commutator series needs at least one term"));
    }
    let b2 = params.derive().b2;
    let sl = params.lambda.sqrt();
    let n = grid.n;
    let d1 = d1_matrix(grid, ORDER)?;
    let d2 = d1.dot(&d1);
    let mut s = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        s[(j, j)] = (sl * grid.points[j]).sinh();
    }
    let mut acc = s.clone();
    let mut term = s;
    let mut coeff = 1.0f64;
    for k in 1..n_terms {
        term = term.dot(&d2) - d2.dot(&term);
        coeff *= -b2 / (2.0 * k as f64);
        acc.scaled_add(coeff, &term);
    }
    let kappa = (params.m * params.omega / (2.0 * params.lambda)).sqrt();
    GridOperator::new(grid.clone(), acc.mapv(|v| Complex64::new(kappa * v, 0.0)))
}

/// Displaced Gaussian probe for operator-identity checks. The centered
/// width-b Gaussian is annihilated by X̂ + b²·d/dX and hence by every matrix
/// function of M, which turns relative residuals into 0/0; the probe is
/// therefore widened and displaced in both position and momentum.
pub fn gaussian_probe(params: &OscillatorParams, grid: &Grid) -> Result<GridState> {
    params.validate()?;
    let b = params.derive().b2.sqrt();
    let w = 1.2 * b;
    let x0 = 0.5 * b;
    let k0 = 0.4 / b;
    let vals = grid
        .points
        .iter()
        .map(|&x| {
            let g = (-(x - x0) * (x - x0) / (2.0 * w * w)).exp();
            Complex64::from_polar(g, k0 * x)
        })
        .collect();
    GridState::new(grid.clone(), vals)?.normalized()
}

/// Relative interior distance ‖(L−R)ψ‖/‖Rψ‖ between two operators applied
/// to the same state. Matrix functions spread Dirichlet-boundary rows over
/// the whole matrix, so identities that hold in the continuum are measured
/// on contained states rather than entrywise.
pub fn applied_gap(lhs: &GridOperator, rhs: &GridOperator, psi: &GridState) -> Result<f64> {
    let a = lhs.apply(psi)?;
    let b = rhs.apply(psi)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for j in psi.grid.interior() {
        num += (a.values[j] - b.values[j]).norm_sqr();
        den += b.values[j].norm_sqr();
    }
    if !(den > 0.0) {
        return Err(numerical("reference operator annihilates the probe on the interior"));
    }
    Ok((num / den).sqrt())
}

/// Closed form of [Ẑ,Ẑ†]:
/// (mω/2λ)·e^{2λħ/mω}·sinh(λħ/mω)·[cosh(2√λX̂) + cos(2√λP̂/mω)].
/// The cosine of the momentum term is a matrix cosine and equals
/// cosh(2√λb²·d/dX). Both this and the symmetric-product form follow from
/// the central commutator [√λX̂, √λb²·d/dX] = −λħ/mω.
pub fn commutator_closed_form(params: &OscillatorParams, grid: &Grid) -> Result<GridOperator> {
    params.validate()?;
    if !(params.lambda > 0.0) {
        return Err(domain("the deformed ladder operator requires lambda > 0"));
    }
    let eta = params.derive().b2;
    let le = params.lambda * eta;
    let sl = params.lambda.sqrt();
    let pref = params.m * params.omega / (2.0 * params.lambda) * (2.0 * le).exp() * le.sinh();
    let p = momentum_op(grid, ORDER, params.hbar)?;
    let scale = Complex64::new(2.0 * sl / (params.m * params.omega), 0.0);
    let mut total = cosm(&p.entries.mapv(|v| v * scale))?;
    for j in 0..grid.n {
        total[(j, j)] += Complex64::new((2.0 * sl * grid.points[j]).cosh(), 0.0);
    }
    GridOperator::new(grid.clone(), total.mapv(|v| v * pref))
}

/// Closed form of the symmetric product ½(ẐẐ†+Ẑ†Ẑ):
/// (mω/2λ)·e^{2λħ/mω}·cosh(λħ/mω)·[cosh²(√λX̂) − cos²(√λP̂/mω)].
pub fn symmetric_closed_form(params: &OscillatorParams, grid: &Grid) -> Result<GridOperator> {
    params.validate()?;
    if !(params.lambda > 0.0) {
        return Err(domain("the deformed ladder operator requires lambda > 0"));
    }
    let eta = params.derive().b2;
    let le = params.lambda * eta;
    let sl = params.lambda.sqrt();
    let pref = params.m * params.omega / (2.0 * params.lambda) * (2.0 * le).exp() * le.cosh();
    let p = momentum_op(grid, ORDER, params.hbar)?;
    let scale = Complex64::new(sl / (params.m * params.omega), 0.0);
    let c = cosm(&p.entries.mapv(|v| v * scale))?;
    let mut total = c.dot(&c).mapv(|v| -v);
    for j in 0..grid.n {
        let ch = (sl * grid.points[j]).cosh();
        total[(j, j)] += Complex64::new(ch * ch, 0.0);
    }
    GridOperator::new(grid.clone(), total.mapv(|v| v * pref))
}

/// Interior-block matrix residual ‖[Ẑ,Ẑ†] − closed form‖/‖[Ẑ,Ẑ†]‖. The
/// matrix reading retains boundary-row artifacts that the matrix
/// exponentials spread into the interior block; see [`commutator_check_z_applied`]
/// for the contained-state reading.
pub fn commutator_check_z(params: &OscillatorParams, grid: &Grid) -> Result<f64> {
    let (comm, closed) = commutator_pair(params, grid)?;
    matrix_gap(&comm, &closed)
}

/// Probe-applied residual of the same identity: relative interior distance
/// of [Ẑ,Ẑ†]ψ and the closed form applied to the displaced Gaussian probe.
pub fn commutator_check_z_applied(params: &OscillatorParams, grid: &Grid) -> Result<f64> {
    let (comm, closed) = commutator_pair(params, grid)?;
    let psi = gaussian_probe(params, grid)?;
    applied_gap(&comm, &closed, &psi)
}

/// Interior-block matrix residual for the symmetric product closed form.
pub fn symmetric_product_check(params: &OscillatorParams, grid: &Grid) -> Result<f64> {
    let (sym, closed) = symmetric_pair(params, grid)?;
    matrix_gap(&sym, &closed)
}

/// Probe-applied residual for the symmetric product closed form.
pub fn symmetric_product_check_applied(params: &OscillatorParams, grid: &Grid) -> Result<f64> {
    let (sym, closed) = symmetric_pair(params, grid)?;
    let psi = gaussian_probe(params, grid)?;
    applied_gap(&sym, &closed, &psi)
}

fn commutator_pair(
    params: &OscillatorParams,
    grid: &Grid,
) -> Result<(GridOperator, GridOperator)> {
    let z = quantum_z(params, grid)?;
    let zd = z.adjoint()?;
    let comm = z.commutator(&zd)?;
    let closed = commutator_closed_form(params, grid)?;
    Ok((comm, closed))
}

fn symmetric_pair(params: &OscillatorParams, grid: &Grid) -> Result<(GridOperator, GridOperator)> {
    let z = quantum_z(params, grid)?;
    let zd = z.adjoint()?;
    let zzd = z.matmul(&zd)?;
    let zdz = zd.matmul(&z)?;
    let sym = GridOperator::new(
        grid.clone(),
        (&zzd.entries + &zdz.entries).mapv(|v| v * 0.5),
    )?;
    let closed = symmetric_closed_form(params, grid)?;
    Ok((sym, closed))
}

fn matrix_gap(lhs: &GridOperator, rhs: &GridOperator) -> Result<f64> {
    let diff = GridOperator::new(lhs.grid.clone(), &lhs.entries - &rhs.entries)?;
    let den = lhs.interior_norm();
    if !(den > 0.0) {
        return Err(numerical("operator vanishes on the interior block"));
    }
    Ok(diff.interior_norm() / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural(lambda: f64) -> OscillatorParams {
        OscillatorParams::new(1.0, 1.0, lambda, 1.0).unwrap()
    }

    #[test]
    fn series_single_term_is_diagonal_sinh() {
        let p = natural(0.1);
        let grid = Grid::new(8.0, 64).unwrap();
        let op = quantum_z_series(&p, &grid, 1).unwrap();
        let kappa = (1.0f64 / (2.0 * 0.1)).sqrt();
        for i in 0..grid.n {
            for j in 0..grid.n {
                if i == j {
                    let want = kappa * (0.1f64.sqrt() * grid.points[j]).sinh();
                    assert!((op.entries[(i, j)].re - want).abs() <= 1e-14 * want.abs());
                    assert_eq!(op.entries[(i, j)].im, 0.0);
                } else {
                    assert_eq!(op.entries[(i, j)], Complex64::ZERO);
                }
            }
        }
    }

    #[test]
    fn series_rejects_zero_terms() {
        let p = natural(0.1);
        let grid = Grid::new(8.0, 64).unwrap();
        let err = quantum_z_series(&p, &grid, 0).unwrap_err();
        assert!(err.to_string().contains("at least one"));
    }

    #[test]
    fn series_second_term_has_sinh_plus_cosh_derivative_structure() {
        // Term 1 of the series is (η/2)[D²,S] = (η/2)(λ·sinh·ψ + 2√λ·cosh·ψ′)
        // in the continuum; check against an analytic derivative of a
        // Gaussian probe (residual is pure stencil error).
        let p = natural(0.05);
        let grid = Grid::new(10.0, 256).unwrap();
        let sl = 0.05f64.sqrt();
        let (w, x0, k0) = (1.3, 0.4, 0.6);
        let vals: Vec<Complex64> = grid
            .points
            .iter()
            .map(|&x| Complex64::from_polar((-(x - x0) * (x - x0) / (2.0 * w * w)).exp(), k0 * x))
            .collect();
        let psi = GridState::new(grid.clone(), vals).unwrap();
        let s1 = quantum_z_series(&p, &grid, 1).unwrap().apply(&psi).unwrap();
        let s2 = quantum_z_series(&p, &grid, 2).unwrap().apply(&psi).unwrap();
        let kappa = (1.0f64 / (2.0 * 0.05)).sqrt();
        let mut num = 0.0;
        let mut den = 0.0;
        for j in grid.interior() {
            let x = grid.points[j];
            let dpsi = psi.values[j] * Complex64::new(-(x - x0) / (w * w), k0);
            let analytic = kappa
                * 0.5
                * (0.05 * (sl * x).sinh() * psi.values[j] + 2.0 * sl * (sl * x).cosh() * dpsi);
            let got = s2.values[j] - s1.values[j];
            num += (got - analytic).norm_sqr();
            den += analytic.norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel < 1e-3, "structure residual {rel}");
    }

    #[test]
    fn series_converges_to_prefactor_free_closed_form() {
        // The series sums to e^{−λħ/mω}·Ẑ; the probe-applied distance must
        // fall monotonically to the stencil floor.
        let p = natural(0.05);
        let grid = Grid::new(10.0, 128).unwrap();
        let z = quantum_z(&p, &grid).unwrap();
        let target =
            GridOperator::new(grid.clone(), z.entries.mapv(|v| v * (-0.05f64).exp())).unwrap();
        let psi = gaussian_probe(&p, &grid).unwrap();
        let d: Vec<f64> = (1..=10)
            .map(|k| {
                let s = quantum_z_series(&p, &grid, k).unwrap();
                applied_gap(&s, &target, &psi).unwrap()
            })
            .collect();
        for k in 1..d.len() {
            assert!(
                d[k] < d[k - 1] || d[k] < 2e-3,
                "distance not decreasing at {} terms: {:?}",
                k + 1,
                d
            );
        }
        assert!(d[9] < 1e-3, "ten-term distance {}", d[9]);
    }

    #[test]
    fn undeformed_op_annihilates_sampled_ground_gaussian() {
        let p = natural(0.05);
        let grid = Grid::new(12.0, 800).unwrap();
        let vals: Vec<Complex64> = grid
            .points
            .iter()
            .map(|&x| Complex64::new(std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp(), 0.0))
            .collect();
        let psi = GridState::new(grid.clone(), vals).unwrap();
        let a = quantum_a(&p, &grid).unwrap();
        let res = a.apply(&psi).unwrap().norm();
        assert!(res < 1e-6, "residual {res}");
    }

    #[test]
    fn deformed_op_reduces_to_scaled_undeformed_at_tiny_lambda() {
        // Ẑ → √ħ·Â as λ → 0 (relative gap O(λL²)).
        let p = natural(1e-6);
        let grid = Grid::new(12.0, 320).unwrap();
        let z = quantum_z(&p, &grid).unwrap();
        let scaled =
            GridOperator::new(grid.clone(), z.entries.mapv(|v| v / p.hbar.sqrt())).unwrap();
        let a = quantum_a(&p, &grid).unwrap();
        let psi = gaussian_probe(&p, &grid).unwrap();
        let gap = applied_gap(&scaled, &a, &psi).unwrap();
        assert!(gap < 1e-4, "gap {gap}");
    }

    #[test]
    fn commutator_matches_closed_form_on_probe() {
        let p = natural(0.05);
        let grid = Grid::new(10.0, 256).unwrap();
        let applied = commutator_check_z_applied(&p, &grid).unwrap();
        assert!(applied < 1e-4, "probe residual {applied}");
        // The literal matrix reading is dominated by boundary rows that the
        // exponentials spread through the interior block; it is logged by
        // the validation harness rather than asserted small.
        let matrix = commutator_check_z(&p, &grid).unwrap();
        assert!(matrix.is_finite());
    }

    #[test]
    fn commutator_approaches_hbar_identity_at_tiny_lambda() {
        let p = natural(1e-6);
        let grid = Grid::new(12.0, 256).unwrap();
        let (comm, _) = commutator_pair(&p, &grid).unwrap();
        let psi = gaussian_probe(&p, &grid).unwrap();
        let applied = comm.apply(&psi).unwrap();
        let mut num = 0.0;
        let mut den = 0.0;
        for j in grid.interior() {
            num += (applied.values[j] - psi.values[j]).norm_sqr();
            den += psi.values[j].norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel < 1e-4, "distance from ħ·identity {rel}");
    }

    #[test]
    fn symmetric_product_matches_closed_form_on_probe() {
        let p = natural(0.05);
        let grid = Grid::new(10.0, 256).unwrap();
        let applied = symmetric_product_check_applied(&p, &grid).unwrap();
        assert!(applied < 1e-4, "probe residual {applied}");
        let matrix = symmetric_product_check(&p, &grid).unwrap();
        assert!(matrix.is_finite());
    }

    #[test]
    fn overflowing_box_is_reported_with_remedy() {
        let p = natural(1e4);
        let grid = Grid::new(20.0, 64).unwrap();
        let err = quantum_z(&p, &grid).unwrap_err();
        assert!(err.to_string().contains("λ·L²"), "got: {err}");
    }

    #[test]
    fn ehrenfest_rate_matches_commutator_to_second_order() {
        // d⟨Â⟩/dt under e^{−iĤdt/ħ} propagation vs ⟨(1/iħ)[Â,Ĥ]⟩: the
        // central-difference error must shrink by ≈4 when dt is halved.
        use crate::quantumgrid::expm::expm;
        use crate::quantumgrid::operators::hamiltonian_x;
        let p = natural(0.05);
        let grid = Grid::new(10.0, 200).unwrap();
        let h = hamiltonian_x(&p, &grid, ORDER).unwrap();
        let a = quantum_a(&p, &grid).unwrap();
        let psi = gaussian_probe(&p, &grid).unwrap();
        let comm = a.commutator(&h).unwrap();
        let rate = psi.inner(&comm.apply(&psi).unwrap()) / Complex64::new(0.0, p.hbar);
        let expect_at = |dt: f64| -> Complex64 {
            let u = expm(&h.entries.mapv(|v| v * Complex64::new(0.0, -dt / p.hbar))).unwrap();
            let moved = GridOperator::new(grid.clone(), u).unwrap().apply(&psi).unwrap();
            moved.inner(&a.apply(&moved).unwrap())
        };
        let central = |dt: f64| (expect_at(dt) - expect_at(-dt)) / (2.0 * dt);
        let e1 = (central(0.05) - rate).norm();
        let e2 = (central(0.025) - rate).norm();
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio} (errors {e1}, {e2})");
    }

    #[test]
    fn probe_is_normalized_and_contained() {
        let p = natural(0.05);
        let grid = Grid::new(10.0, 256).unwrap();
        let psi = gaussian_probe(&p, &grid).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!(psi.boundary_ratio() < 1e-8);
    }
}
