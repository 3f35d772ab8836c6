//! Truncated number-basis realization of the deformed ladder algebra, the
//! diagonal Fock Hamiltonian, and deformed (type-2) coherent states.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{domain, numerical, Result};
use crate::params::OscillatorParams;
use crate::spectrum::{f_cutoff, f_deformation};

/// Structural tag for the populated band of a Fock-space matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Diagonal,
    Sub,
    Super,
}

/// Real matrix on the truncated number basis whose populated band is part
/// of the contract and verified at construction.
#[derive(Debug, Clone)]
pub struct FockOperator {
    pub dim: usize,
    pub entries: Array2<f64>,
    pub band: Band,
}

impl FockOperator {
    pub fn new(entries: Array2<f64>, band: Band) -> Result<Self> {
        let dim = entries.nrows();
        if dim == 0 || entries.ncols() != dim {
            return Err(domain("Fock operators must be square and non-empty"));
        }
        for i in 0..dim {
            for j in 0..dim {
                let allowed = match band {
                    Band::Diagonal => i == j,
                    Band::Super => j == i + 1,
                    Band::Sub => i == j + 1,
                };
                if !allowed && entries[(i, j)] != 0.0 {
                    return Err(domain(format!(
                        "entry ({i},{j}) is outside the declared {band:?} band"
                    )));
                }
            }
        }
        Ok(Self { dim, entries, band })
    }

    /// Transpose with the band tag mirrored.
    pub fn transposed(&self) -> Self {
        let band = match self.band {
            Band::Diagonal => Band::Diagonal,
            Band::Super => Band::Sub,
            Band::Sub => Band::Super,
        };
        Self { dim: self.dim, entries: self.entries.t().to_owned(), band }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|j| self.entries[(j, j)]).collect()
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(domain("vector length does not match operator dimension"));
        }
        let mut out = vec![Complex64::ZERO; self.dim];
        for i in 0..self.dim {
            let mut acc = Complex64::ZERO;
            for j in 0..self.dim {
                acc += self.entries[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }
}

/// Undeformed ladder triple (a, a†, n̂) on D states: a|n⟩ = √n|n−1⟩, so the
/// truncation edge gives [a,a†] = I − D·|D−1⟩⟨D−1|.
pub fn ladder_ops(d: usize) -> Result<(FockOperator, FockOperator, FockOperator)> {
    if d < 2 {
        return Err(domain("ladder operators need at least two basis states"));
    }
    let mut a = Array2::zeros((d, d));
    let mut nop = Array2::zeros((d, d));
    for n in 1..d {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    for n in 0..d {
        nop[(n, n)] = n as f64;
    }
    let a = FockOperator::new(a, Band::Super)?;
    let adag = a.transposed();
    Ok((a, adag, FockOperator::new(nop, Band::Diagonal)?))
}

/// Deformed ladder pair with the truncation record.
#[derive(Debug, Clone)]
pub struct DeformedLadder {
    pub b: FockOperator,
    pub bdag: FockOperator,
    /// Set when the requested dimension exceeded the f-positivity cutoff
    /// and the matrices were truncated to cutoff+1 states.
    pub truncated: bool,
}

/// Deformed ladder pair b = a·f(n̂), i.e. b|n⟩ = √n·f(n)|n−1⟩, and its
/// transpose. Dimensions past the f-positivity cutoff are truncated (the
/// deformation is kept real, never continued past the sign change) and the
/// truncation is flagged in the result.
pub fn deformed_ops(params: &OscillatorParams, d: usize) -> Result<DeformedLadder> {
    params.validate()?;
    if d < 2 {
        return Err(domain("ladder operators need at least two basis states"));
    }
    let (d_eff, truncated) = if params.is_undeformed() {
        (d, false)
    } else {
        let cut = f_cutoff(params)?;
        if d > cut + 1 {
            (cut + 1, true)
        } else {
            (d, false)
        }
    };
    let mut b = Array2::zeros((d_eff, d_eff));
    for n in 1..d_eff {
        b[(n - 1, n)] = (n as f64).sqrt() * f_deformation(n, params)?;
    }
    let b = FockOperator::new(b, Band::Super)?;
    let bdag = b.transposed();
    Ok(DeformedLadder { b, bdag, truncated })
}

/// Number-conserving product pair (bb†, b†b) evaluated one dimension up and
/// cut back to D×D, so the requested block carries no truncation-edge
/// artifact in its last entry.
fn product_diagonals(params: &OscillatorParams, d: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !params.is_undeformed() {
        let cut = f_cutoff(params)?;
        if d > cut {
            return Err(domain(format!(
                "dimension {d} exceeds the f-positivity cutoff {cut}: the last \
                 diagonal entry would need f({d})"
            )));
        }
    }
    let ladder = deformed_ops(params, d + 1)?;
    debug_assert!(!ladder.truncated);
    let bbd = ladder.b.entries.dot(&ladder.bdag.entries);
    let bdb = ladder.bdag.entries.dot(&ladder.b.entries);
    Ok(((0..d).map(|n| bbd[(n, n)]).collect(), (0..d).map(|n| bdb[(n, n)]).collect()))
}

/// Fock-space Hamiltonian H = (ħω/2)(bb† + b†b): diagonal, with entry n
/// equal to the closed-form level energy (ħω/2)[(n+1)f(n+1)² + n·f(n)²].
pub fn hamiltonian_fock(params: &OscillatorParams, d: usize) -> Result<FockOperator> {
    params.validate()?;
    let (bbd, bdb) = product_diagonals(params, d)?;
    let half = 0.5 * params.hbar * params.omega;
    let mut h = Array2::zeros((d, d));
    for n in 0..d {
        h[(n, n)] = half * (bbd[n] + bdb[n]);
    }
    FockOperator::new(h, Band::Diagonal)
}

/// Weighted ladder commutator (ħω/2)[b,b†], diagonal with entry
/// (ħω/2√v)[√(¼+v) − (n+½)]; the matrix product and the closed form are
/// required to agree to 1e−12 relative. The ħω/2 weight follows the printed
/// form even though b itself is dimensionless.
pub fn commutator_bb(params: &OscillatorParams, d: usize) -> Result<FockOperator> {
    params.validate()?;
    let (bbd, bdb) = product_diagonals(params, d)?;
    let half = 0.5 * params.hbar * params.omega;
    let mut c = Array2::zeros((d, d));
    for n in 0..d {
        let product = half * (bbd[n] - bdb[n]);
        let closed = if params.is_undeformed() {
            half
        } else {
            let v = params.derive().v;
            half / v.sqrt() * ((0.25 + v).sqrt() - (n as f64 + 0.5))
        };
        if (product - closed).abs() > 1e-12 * closed.abs().max(half) {
            return Err(numerical(format!(
                "ladder commutator paths disagree at n={n}: product {product} vs closed {closed}"
            )));
        }
        c[(n, n)] = product;
    }
    FockOperator::new(c, Band::Diagonal)
}

/// Deformed coherent state |f,β⟩ on the truncated basis.
#[derive(Debug, Clone)]
pub struct DeformedCoherent {
    pub beta: Complex64,
    /// Unit-norm coefficients; c₀ is real positive.
    pub coeffs: Vec<Complex64>,
    /// Last populated index; coefficients above it are exactly zero (only
    /// below the basis dimension when f(n) hits an exact zero).
    pub cutoff: usize,
    /// Σ_{n≥D−2}|c_n|², the truncation-tail weight.
    pub tail_mass: f64,
    /// Measured ‖(b−β)c‖; equals |β|·|c_cutoff| (last-coefficient leakage).
    pub residual: f64,
}

/// Right eigenvector construction b|f,β⟩ = β|f,β⟩:
/// c_{n+1} = β·c_n/(√(n+1)·f(n+1)), truncated at the basis edge or at an
/// exact zero of f, then normalized with c₀ real positive.
pub fn coherent_type2(
    beta: Complex64,
    params: &OscillatorParams,
    d: usize,
) -> Result<DeformedCoherent> {
    params.validate()?;
    if d < 4 {
        return Err(domain("type-2 coherent states need at least four basis states"));
    }
    let ladder = deformed_ops(params, d)?;
    let dim = ladder.b.dim;
    let mut coeffs = vec![Complex64::ZERO; dim];
    coeffs[0] = Complex64::new(1.0, 0.0);
    let mut cutoff = dim - 1;
    for n1 in 1..dim {
        // A rounding-level negative radicand at the positivity edge is an
        // exact zero of f for this purpose: the state lives in a finite
        // block and the recurrence stops.
        let f = f_deformation(n1, params).unwrap_or(0.0);
        if f == 0.0 {
            cutoff = n1 - 1;
            break;
        }
        coeffs[n1] = beta * coeffs[n1 - 1] / ((n1 as f64).sqrt() * f);
    }
    let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut coeffs {
        *c /= norm;
    }
    let tail_mass = coeffs[dim.saturating_sub(2)..].iter().map(|c| c.norm_sqr()).sum();
    let applied = ladder.b.apply(&coeffs)?;
    let residual = applied
        .iter()
        .zip(&coeffs)
        .map(|(a, c)| (a - beta * c).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(DeformedCoherent { beta, coeffs, cutoff, tail_mass, residual })
}
