//! Closed-form bound-state spectrum, level count, hypergeometric parameter
//! bookkeeping, and the Fock-space deformation function f(n).

use crate::error::{domain, Result};
use crate::params::OscillatorParams;

/// Everything the closed-form solution attaches to one bound level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRecord {
    pub n: usize,
    /// Dimensionless energy ε_n = v − [√(¼+v) − (n+½)]².
    pub epsilon_n: f64,
    /// Physical energy E_n = (λħ²/2m)·ε_n.
    pub energy_n: f64,
    /// Deformation value f(n).
    pub f_n: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub sigma: f64,
}

/// Number of bound states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelCount {
    Finite(usize),
    /// λ = 0: the ordinary harmonic oscillator has infinitely many levels.
    Unbounded,
}

/// ε_n without the range check, in the cancellation-free arrangement
/// 2s(n+½) − (n+½)² − ¼ with s = √(¼+v), which evaluates v=0 → −n² exactly.
pub(crate) fn epsilon_raw(n: usize, v: f64) -> f64 {
    let s = (0.25 + v).sqrt();
    let k = n as f64 + 0.5;
    2.0 * s * k - k * k - 0.25
}

/// Dimensionless bound-state energy ε_n = v − [√(¼+v) − (n+½)]².
///
/// `n` must lie within the bound spectrum for this `v`.
pub fn epsilon_level(n: usize, v: f64) -> Result<f64> {
    if !v.is_finite() || v < 0.0 {
        return Err(domain(format!("v must be finite and nonnegative, got {v}")));
    }
    let n_max = ((0.25 + v).sqrt() - 0.5).floor() as usize;
    if n > n_max {
        return Err(domain(format!(
            "level n={n} is outside the bound spectrum (n_max={n_max} at v={v})"
        )));
    }
    Ok(epsilon_raw(n, v))
}

/// Physical bound-state energy.
///
/// E_n = mω²/2λ − (λħ²/2m)[√(¼+v) − (n+½)]²; the λ=0 branch is (n+½)ħω.
pub fn energy_level(n: usize, params: &OscillatorParams) -> Result<f64> {
    params.validate()?;
    if params.is_undeformed() {
        return Ok((n as f64 + 0.5) * params.hbar * params.omega);
    }
    let d = params.derive();
    let eps = epsilon_level(n, d.v)?;
    Ok(eps / d.epsilon_scale)
}

/// How many bound levels the deformed well supports.
///
/// The decay exponent √(v−ε_n) = √(¼+v) − (n+½) must stay nonnegative for a
/// normalizable state, so count = 1 + floor(√(¼+v) − ½) with the marginal
/// (exact-tie) level included.
pub fn bound_state_count(params: &OscillatorParams) -> Result<LevelCount> {
    params.validate()?;
    if params.is_undeformed() {
        return Ok(LevelCount::Unbounded);
    }
    let v = params.derive().v;
    let n_max = ((0.25 + v).sqrt() - 0.5).floor();
    Ok(LevelCount::Finite(1 + n_max as usize))
}

/// Largest valid argument of [`f_deformation`]: floor(√(1+4v)).
pub fn f_cutoff(params: &OscillatorParams) -> Result<usize> {
    params.validate()?;
    if params.is_undeformed() {
        return Err(domain("f(n) has no positivity cutoff at λ=0"));
    }
    let v = params.derive().v;
    Ok((1.0 + 4.0 * v).sqrt().floor() as usize)
}

/// Fock-deformation function f(n) = [√(1/(4v)+1) − n/(2√v)]^{1/2}, the
/// positive root; f ≡ 1 on the undeformed branch.
pub fn f_deformation(n: usize, params: &OscillatorParams) -> Result<f64> {
    params.validate()?;
    if params.is_undeformed() {
        return Ok(1.0);
    }
    let v = params.derive().v;
    let f2 = (1.0 / (4.0 * v) + 1.0).sqrt() - n as f64 / (2.0 * v.sqrt());
    if f2 < 0.0 {
        let cutoff = (1.0 + 4.0 * v).sqrt().floor() as usize;
        return Err(domain(format!(
            "f(n)² < 0 for n={n}: the deformed algebra truncates at n={cutoff}"
        )));
    }
    Ok(f2.sqrt())
}

/// Hypergeometric parameters (α, β, γ, σ) of the bound-state equation.
///
/// γ = 2σ and β = 2σ − ½ + √(v−ε_n) with the root branch fixed by the
/// quantization condition, √(v−ε_n) → (n+½) − √(¼+v), so that β = n+1;
/// α = 4σ − n − 2.
pub fn hypergeometric_params(n: usize, params: &OscillatorParams) -> Result<(f64, f64, f64, f64)> {
    params.validate()?;
    if params.is_undeformed() {
        return Err(domain("hypergeometric parameters require λ > 0"));
    }
    let d = params.derive();
    let eps = epsilon_level(n, d.v)?;
    let root = (d.v - eps).max(0.0).sqrt();
    let beta = 2.0 * d.sigma - 0.5 - root;
    let alpha = 4.0 * d.sigma - n as f64 - 2.0;
    let gamma = 2.0 * d.sigma;
    Ok((alpha, beta, gamma, d.sigma))
}

/// Full per-level record.
pub fn level(n: usize, params: &OscillatorParams) -> Result<LevelRecord> {
    let d = params.derive();
    let (alpha, beta, gamma, sigma) = hypergeometric_params(n, params)?;
    let epsilon_n = epsilon_level(n, d.v)?;
    Ok(LevelRecord {
        n,
        epsilon_n,
        energy_n: energy_level(n, params)?,
        f_n: f_deformation(n, params)?,
        alpha,
        beta,
        gamma,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural(lambda: f64) -> OscillatorParams {
        OscillatorParams::natural(lambda).unwrap()
    }

    // Reference values computed with an independent arbitrary-precision
    // script (60-digit working precision) at m=ω=ħ=1, λ=0.1 (v=100).
    const EPS_V100: [(usize, f64); 5] = [
        (0, 9.512_492_197_250_392_863_8),
        (1, 27.537_476_591_751_178_592),
        (2, 43.562_460_986_251_964_319),
        (5, 79.637_414_169_754_321_502),
        (9, 99.737_351_747_757_464_413),
    ];
    const E_V100: [(usize, f64); 5] = [
        (0, 0.475_624_609_862_519_643_19),
        (1, 1.376_873_829_587_558_929_6),
        (2, 2.178_123_049_312_598_216),
        (5, 3.981_870_708_487_716_075_1),
        (9, 4.986_867_587_387_873_220_7),
    ];

    #[test]
    fn epsilon_matches_reference() {
        for &(n, want) in &EPS_V100 {
            let got = epsilon_level(n, 100.0).unwrap();
            assert!((got - want).abs() < 1e-13 * want.abs(), "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn epsilon_at_v_zero_is_minus_n_squared() {
        // Only n=0 is inside the bound range at v=0; the raw form continues
        // the formula and reproduces −n² exactly.
        assert_eq!(epsilon_level(0, 0.0).unwrap(), 0.0);
        for n in 0..40 {
            assert_eq!(epsilon_raw(n, 0.0), -((n * n) as f64));
        }
    }

    #[test]
    fn epsilon_range_enforced() {
        assert!(epsilon_level(9, 100.0).is_ok());
        assert!(epsilon_level(10, 100.0).is_err());
        assert!(epsilon_level(1, 0.0).is_err());
        assert!(epsilon_level(0, f64::NAN).is_err());
    }

    #[test]
    fn energy_matches_reference() {
        let p = natural(0.1);
        for &(n, want) in &E_V100 {
            let got = energy_level(n, &p).unwrap();
            assert!((got - want).abs() < 1e-13 * want, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn energy_undeformed_is_harmonic() {
        let p = natural(0.0);
        for n in 0..20 {
            assert_eq!(energy_level(n, &p).unwrap(), n as f64 + 0.5);
        }
    }

    #[test]
    fn energies_increase_and_stay_below_threshold() {
        let p = natural(0.1);
        let threshold = p.m * p.omega * p.omega / (2.0 * p.lambda);
        let mut prev = f64::NEG_INFINITY;
        for n in 0..10 {
            let e = energy_level(n, &p).unwrap();
            assert!(e > prev, "E_{n} not increasing");
            assert!(e < threshold, "E_{n} above continuum threshold");
            prev = e;
        }
    }

    #[test]
    fn level_counts() {
        assert_eq!(bound_state_count(&natural(0.1)).unwrap(), LevelCount::Finite(10));
        assert_eq!(bound_state_count(&natural(0.0)).unwrap(), LevelCount::Unbounded);
        // v → 0 (λ → ∞) keeps exactly the marginal n=0 level.
        let huge = natural(1e9);
        assert_eq!(bound_state_count(&huge).unwrap(), LevelCount::Finite(1));
    }

    #[test]
    fn sho_energy_limit() {
        for &lambda in &[1e-6, 1e-8] {
            let p = natural(lambda);
            for n in 0..=5 {
                let e = energy_level(n, &p).unwrap();
                let sho = n as f64 + 0.5;
                assert!((e - sho).abs() <= 16.0 * lambda, "λ={lambda}, n={n}");
            }
        }
    }

    #[test]
    fn f_values_and_cutoff() {
        let p = natural(0.1);
        assert!((f_deformation(0, &p).unwrap() - 1.000_624_414_915_526_277_3).abs() < 1e-15);
        assert!((f_deformation(1, &p).unwrap() - 0.975_320_060_146_944_422_72).abs() < 1e-15);
        assert_eq!(f_cutoff(&p).unwrap(), 20);
        assert!(f_deformation(20, &p).is_ok());
        let err = f_deformation(21, &p).unwrap_err();
        assert!(err.to_string().contains("20"), "error should carry the cutoff: {err}");
        // Undeformed branch: f ≡ 1.
        let p0 = natural(0.0);
        for n in [0, 3, 57] {
            assert_eq!(f_deformation(n, &p0).unwrap(), 1.0);
        }
    }

    #[test]
    fn fock_identity_reconstructs_energy() {
        // E_n = (ħω/2)[(n+1)f(n+1)² + n f(n)²]
        let p = natural(0.1);
        for n in 0..10 {
            let fn0 = f_deformation(n, &p).unwrap();
            let fn1 = f_deformation(n + 1, &p).unwrap();
            let rebuilt = 0.5 * ((n as f64 + 1.0) * fn1 * fn1 + n as f64 * fn0 * fn0);
            let e = energy_level(n, &p).unwrap();
            assert!((rebuilt - e).abs() < 1e-12 * e, "n={n}: {rebuilt} vs {e}");
        }
    }

    #[test]
    fn commutator_diagonal_closed_form() {
        // (ħω/2)[(n+1)f(n+1)² − n f(n)²] = (ħω/2√v)[√(¼+v) − (n+½)]
        let p = natural(0.1);
        let v = p.derive().v;
        for n in 0..10 {
            let fn0 = f_deformation(n, &p).unwrap();
            let fn1 = f_deformation(n + 1, &p).unwrap();
            let lhs = 0.5 * ((n as f64 + 1.0) * fn1 * fn1 - n as f64 * fn0 * fn0);
            let rhs = 0.5 / v.sqrt() * ((0.25 + v).sqrt() - (n as f64 + 0.5));
            assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1e-3), "n={n}");
        }
    }

    #[test]
    fn hypergeometric_identities() {
        let p = natural(0.1);
        let sigma_want = 5.506_246_098_625_196_431_9;
        for n in 0..10 {
            let (alpha, beta, gamma, sigma) = hypergeometric_params(n, &p).unwrap();
            assert!((beta - (n as f64 + 1.0)).abs() < 1e-10, "β quantization at n={n}");
            assert!((alpha + beta + 1.0 - 4.0 * sigma).abs() < 1e-10, "α+β+1=4σ at n={n}");
            assert!((gamma - 2.0 * sigma).abs() < 1e-12);
            assert!((sigma - sigma_want).abs() < 1e-13);
            assert!((alpha - (4.0 * sigma - n as f64 - 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn level_record_is_consistent() {
        let p = natural(0.1);
        let rec = level(3, &p).unwrap();
        assert_eq!(rec.n, 3);
        assert!((rec.energy_n - epsilon_level(3, 100.0).unwrap() * 0.05).abs() < 1e-14);
        assert!((rec.beta - 4.0).abs() < 1e-10);
        assert!((rec.f_n - f_deformation(3, &p).unwrap()).abs() == 0.0);
        // Decay exponent stays nonnegative across the bound range.
        let v = 100.0;
        for n in 0..10 {
            let eps = epsilon_level(n, v).unwrap();
            assert!(v - eps >= 0.0, "decay exponent imaginary at n={n}");
        }
    }
}
