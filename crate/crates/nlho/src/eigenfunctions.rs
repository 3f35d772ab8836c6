//! Bound-state eigenfunctions: real symmetric-parameter Jacobi polynomials
//! under a cosh-power envelope, with a Rodrigues-form cross-check and the
//! Hermite limit of the undeformed oscillator.

use crate::error::{domain, numerical, Result};
use crate::params::OscillatorParams;
use crate::quadrature;
use crate::spectrum;

/// Real form of the symmetric Jacobi polynomial with equal parameters `a`:
/// R_n(s) has real coefficients, definite parity (−1)ⁿ, and satisfies the
/// three-term recurrence
/// 2n(n+2a)(2n+2a−2)·R_n = (2n+2a−1)(2n+2a)(2n+2a−2)·s·R_{n−1}
///                        + 2(n+a−1)²(2n+2a)·R_{n−2}.
#[derive(Debug, Clone)]
pub struct JacobiPoly {
    pub n: usize,
    pub a: f64,
    /// Monomial coefficients c_0..c_n of R_n(s); entries whose index has the
    /// wrong parity are exactly zero.
    pub coeffs: Vec<f64>,
}

/// Recurrence coefficients (c1·s·R_{n−1} + c2·R_{n−2}) / d at step k, with a
/// pole guard for parameter values where the denominator degenerates.
fn recurrence_coeffs(k: usize, a: f64) -> Result<(f64, f64, f64)> {
    let k = k as f64;
    let t = 2.0 * k + 2.0 * a;
    let d = 2.0 * k * (k + 2.0 * a) * (t - 2.0);
    if d.abs() < 1e-12 * (1.0 + a.abs()).powi(3) {
        return Err(numerical(format!(
            "Jacobi recurrence pole at step {k} for parameter a = {a}"
        )));
    }
    Ok(((t - 1.0) * t * (t - 2.0), 2.0 * (k + a - 1.0) * (k + a - 1.0) * t, d))
}

/// R_n(a; s) by the real three-term value recurrence.
pub fn jacobi_real(n: usize, a: f64, s: f64) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    let mut rm2 = 1.0;
    let mut rm1 = (a + 1.0) * s;
    for k in 2..=n {
        let (c1, c2, d) = recurrence_coeffs(k, a)?;
        let r = (c1 * s * rm1 + c2 * rm2) / d;
        rm2 = rm1;
        rm1 = r;
    }
    Ok(rm1)
}

impl JacobiPoly {
    /// Build the monomial coefficients by the same recurrence applied to
    /// coefficient vectors; parity zeros are preserved exactly.
    pub fn new(n: usize, a: f64) -> Result<Self> {
        let mut prev2 = vec![1.0];
        if n == 0 {
            return Ok(Self { n, a, coeffs: prev2 });
        }
        let mut prev1 = vec![0.0, a + 1.0];
        for k in 2..=n {
            let (c1, c2, d) = recurrence_coeffs(k, a)?;
            let mut next = vec![0.0; k + 1];
            for (i, &c) in prev1.iter().enumerate() {
                next[i + 1] += c1 * c / d;
            }
            for (i, &c) in prev2.iter().enumerate() {
                next[i] += c2 * c / d;
            }
            prev2 = prev1;
            prev1 = next;
        }
        Ok(Self { n, a, coeffs: prev1 })
    }

    /// Horner evaluation of the stored coefficients.
    pub fn eval(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    /// Parity of R_n under s → −s: +1 for even n, −1 for odd n.
    pub fn parity(&self) -> i32 {
        if self.n % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Rodrigues-form evaluation of the same polynomial at s = √λ·x: the n-th
/// derivative of (1+λx²)^{a+n} is (1+λx²)^a·Q_n(x) with Q₀ = 1 and
/// Q_{k+1} = (1+λx²)·Q_k′ + 2λx·(a+n−k)·Q_k, and
/// R_n(√λ·x) = λ^{−n/2}·Q_n(x)/(2ⁿ·n!). Exact coefficient arithmetic, so it
/// is an independent path to `jacobi_real` (stays well-conditioned for
/// n ≲ 30).
pub fn rodrigues_eval(n: usize, a: f64, x: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain("rodrigues_eval requires lambda > 0"));
    }
    // Q as monomial coefficients in x.
    let mut q = vec![1.0];
    for k in 0..n {
        // dq = Q'
        let dq: Vec<f64> = (1..q.len()).map(|i| q[i] * i as f64).collect();
        let mut next = vec![0.0; q.len() + 1];
        // (1 + λx²)·Q′
        for (i, &c) in dq.iter().enumerate() {
            next[i] += c;
            next[i + 2] += lambda * c;
        }
        // 2λx·(a+n−k)·Q
        let g = 2.0 * lambda * (a + (n - k) as f64);
        for (i, &c) in q.iter().enumerate() {
            next[i + 1] += g * c;
        }
        q = next;
    }
    let mut val = 0.0;
    for &c in q.iter().rev() {
        val = val * x + c;
    }
    let mut fact = 1.0;
    for k in 1..=n {
        fact *= 2.0 * k as f64;
    }
    Ok(val * lambda.powf(-(n as f64) / 2.0) / fact)
}

/// Hermite polynomial H_n(y) recovered as the large-parameter limit of the
/// real Jacobi form: H_n(y) = lim_{ξ→∞} (−1)ⁿ·2ⁿ·n!·ξ^{−n/2}·R_n(−ξ; y/√ξ).
/// The deviation at finite ξ is O(1/ξ).
pub fn hermite_limit(n: usize, xi: f64, y: f64) -> Result<f64> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(domain("hermite_limit requires xi > 0"));
    }
    let r = jacobi_real(n, -xi, y / xi.sqrt())?;
    let mut factor = xi.powf(-(n as f64) / 2.0);
    for k in 1..=n {
        factor *= 2.0 * k as f64;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * factor * r)
}

/// ln cosh(t), overflow-safe for large |t| and cancellation-free for small
/// |t| (the small branch must stay accurate to full relative precision:
/// downstream it is multiplied by exponents of order σ ~ 1/λ).
pub(crate) fn ln_cosh(t: f64) -> f64 {
    let u = t.abs();
    if u <= 1.0 {
        let s = (0.5 * u).sinh();
        (2.0 * s * s).ln_1p()
    } else {
        u + (-2.0 * u).exp().ln_1p() - std::f64::consts::LN_2
    }
}

/// Normalized bound-state eigenfunction in the canonical chart:
/// φ_n(X) = N_n·cosh(√λX)^{3/2−2σ}·R_n(sinh √λX), with signed N_n fixing
/// φ_n(0) > 0 for even n and φ_n′(0) > 0 for odd n.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub n: usize,
    pub params: OscillatorParams,
    pub poly: JacobiPoly,
    /// Signed normalization constant (sign carries the phase convention).
    pub norm_const: f64,
    sigma: f64,
    energy: f64,
}

/// Decay rate of φ_n: √λ·(2σ−3/2−n), equal to √λ·√(v−ε_n).
fn decay_rate(n: usize, lambda: f64, sigma: f64) -> f64 {
    lambda.sqrt() * (2.0 * sigma - 1.5 - n as f64)
}

/// Unnormalized value of cosh(√λX)^{3/2−2σ}·R_n(sinh √λX), evaluated as
/// exp((3/2−2σ+n)·ln cosh t)·Σ_k c_k·tanhᵏt·sech^{n−k}t so every factor is
/// bounded and large |X| underflows gracefully. Parity is applied by
/// construction (the sum is evaluated at |t|), so φ(−X) = ±φ(X) exactly.
fn envelope_value(poly: &JacobiPoly, sigma: f64, lambda: f64, x_canonical: f64) -> f64 {
    let t = lambda.sqrt() * x_canonical;
    let u = t.abs();
    let lc = ln_cosh(u);
    let th = u.tanh();
    let sc = (-lc).exp();
    let n = poly.n;
    // powers th^k·sc^(n−k), built incrementally from k = 0.
    let mut thk = 1.0;
    let mut sum = 0.0;
    let mut sc_pows = vec![1.0; n + 1];
    for k in 1..=n {
        sc_pows[k] = sc_pows[k - 1] * sc;
    }
    for (k, &c) in poly.coeffs.iter().enumerate() {
        if c != 0.0 {
            sum += c * thk * sc_pows[n - k];
        }
        thk *= th;
    }
    let envelope = ((1.5 - 2.0 * sigma + n as f64) * lc).exp();
    let sign = if t < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    sign * envelope * sum
}

/// Positive normalization constant N_n = (∫|φ̃_n|²dX)^{−1/2} by adaptive
/// quadrature to relative tolerance `tol`, truncating the tails where the
/// integrand falls below 1e−18 of its peak.
pub fn normalize(n: usize, params: &OscillatorParams, tol: f64) -> Result<f64> {
    params.validate()?;
    if params.is_undeformed() {
        return Err(domain(
            "normalize requires lambda > 0; the undeformed oscillator has Hermite eigenstates",
        ));
    }
    if !(tol > 0.0) {
        return Err(domain("normalize requires tol > 0"));
    }
    let der = params.derive();
    spectrum::epsilon_level(n, der.v)?; // range-check n against the bound count
    let gamma = decay_rate(n, params.lambda, der.sigma);
    if gamma <= 1e-6 * params.lambda.sqrt() {
        return Err(domain(format!(
            "level n = {n} sits at the continuum threshold and is not square-integrable"
        )));
    }
    let poly = JacobiPoly::new(n, 1.0 - 2.0 * der.sigma)?;
    let sl = params.lambda.sqrt();
    let f = |x: f64| {
        let v = envelope_value(&poly, der.sigma, params.lambda, x);
        v * v
    };
    // Scan out to the lesser of the envelope saturation scale (t ≈ 4) and a
    // generous multiple of the oscillator-width scale, so both the λ → 0
    // Gaussian regime and the strongly deformed regime are resolved.
    let b = (params.hbar / (params.m * params.omega)).sqrt();
    let x_scan = (4.0 / sl).min(12.0 * b * ((n + 1) as f64).sqrt());
    let mut peak = 0.0f64;
    for k in 0..=400 {
        peak = peak.max(f(x_scan * k as f64 / 400.0));
    }
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(numerical("eigenfunction peak scan failed"));
    }
    // Tail cutoff where the integrand is below 1e−18 of the peak; the scan
    // boundary is already past the last node, so march outward from there.
    let mut x_cut = x_scan;
    let mut tries = 0;
    while f(x_cut) > 1e-18 * peak {
        x_cut *= 1.25;
        tries += 1;
        if tries > 300 {
            return Err(numerical("eigenfunction tail does not decay; cutoff search failed"));
        }
    }
    let (rough, _) = quadrature::integrate(&f, -x_cut, x_cut, 1e-2 * peak * x_cut)?;
    if !(rough > 0.0) {
        return Err(numerical("norm integral evaluated to a non-positive value"));
    }
    let (integral, _) = quadrature::integrate(&f, -x_cut, x_cut, tol * rough)?;
    Ok(1.0 / integral.sqrt())
}

/// Construct the normalized n-th bound state (tolerance 1e−10 on the norm
/// integral), applying the sign convention.
pub fn eigenfunction(n: usize, params: &OscillatorParams) -> Result<Eigenfunction> {
    let n_mag = normalize(n, params, 1e-10)?;
    let der = params.derive();
    let poly = JacobiPoly::new(n, 1.0 - 2.0 * der.sigma)?;
    let energy = spectrum::energy_level(n, params)?;
    // Even n: sign of φ(0) is sign(c₀); odd n: sign of φ′(0) is sign(c₁).
    let lead = poly.coeffs[n % 2];
    if lead == 0.0 {
        return Err(numerical(format!(
            "sign convention undetermined: coefficient c_{} vanishes at n = {n}",
            n % 2
        )));
    }
    let norm_const = n_mag * lead.signum();
    Ok(Eigenfunction { n, params: *params, poly, norm_const, sigma: der.sigma, energy })
}

impl Eigenfunction {
    /// Value at canonical coordinate X.
    pub fn evaluate(&self, x_canonical: f64) -> f64 {
        self.norm_const * envelope_value(&self.poly, self.sigma, self.params.lambda, x_canonical)
    }

    /// Value at the physical coordinate x (the same function composed with
    /// the chart map X(x); no Jacobian factor is applied).
    pub fn evaluate_x(&self, x_physical: f64) -> f64 {
        self.evaluate(self.params.to_canonical_x(x_physical))
    }

    /// Energy eigenvalue of this level.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Exponential decay rate in X: φ_n ~ e^{−decay·|X|} for large |X|.
    pub fn decay_exponent(&self) -> f64 {
        decay_rate(self.n, self.params.lambda, self.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A_V100: f64 = -10.012_492_197_250_393; // 1−2σ at v = 100

    fn params01() -> OscillatorParams {
        OscillatorParams::natural(0.1).unwrap()
    }

    #[test]
    fn value_recurrence_matches_stored_coefficients() {
        for n in 0..=10 {
            let poly = JacobiPoly::new(n, A_V100).unwrap();
            for s in [-1.7, -0.3, 0.05, 0.8, 2.2] {
                let v1 = jacobi_real(n, A_V100, s).unwrap();
                let v2 = poly.eval(s);
                let scale = v1.abs().max(1.0);
                assert!((v1 - v2).abs() < 1e-12 * scale, "n={n} s={s}: {v1} vs {v2}");
            }
        }
    }

    #[test]
    fn frozen_polynomial_values() {
        // Independently computed with 40-digit arithmetic.
        let s = 0.1f64.sqrt() * 0.3;
        let r5 = jacobi_real(5, A_V100, s).unwrap();
        assert!((r5 - -0.578_065_928_964_838_7).abs() < 1e-13);
        let q5 = rodrigues_eval(5, A_V100, 0.3, 0.1).unwrap();
        assert!((q5 - -0.578_065_928_964_838_7).abs() < 1e-13);
    }

    #[test]
    fn dual_path_agreement() {
        for n in 0..=10 {
            for x in [0.2, 0.9, 2.4] {
                let s = 0.1f64.sqrt() * x;
                let v1 = jacobi_real(n, A_V100, s).unwrap();
                let v2 = rodrigues_eval(n, A_V100, x, 0.1).unwrap();
                let scale = v1.abs().max(1e-6);
                assert!((v1 - v2).abs() < 1e-10 * scale, "n={n} x={x}: {v1} vs {v2}");
            }
        }
    }

    #[test]
    fn coefficients_have_exact_parity_zeros() {
        for n in 0..=9 {
            let poly = JacobiPoly::new(n, A_V100).unwrap();
            for (k, &c) in poly.coeffs.iter().enumerate() {
                if (k % 2) != (n % 2) {
                    assert_eq!(c, 0.0, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn recurrence_pole_is_reported() {
        assert!(JacobiPoly::new(2, -1.0).is_err());
        assert!(jacobi_real(4, -2.0, 0.5).is_err());
    }

    #[test]
    fn hermite_limit_frozen_values() {
        // H₁(0.5) = 1, H₄(1.3) = −23.4224 exactly.
        let h1 = hermite_limit(1, 1e8, 0.5).unwrap();
        assert!((h1 - 1.0).abs() < 1e-6, "{h1}");
        let h4 = hermite_limit(4, 1e8, 1.3).unwrap();
        assert!((h4 - -23.4224).abs() < 1e-4, "{h4}");
        let h0 = hermite_limit(0, 1e8, 0.9).unwrap();
        assert_eq!(h0, 1.0);
    }

    #[test]
    fn hermite_limit_error_scales_as_inverse_xi() {
        let hermite6 = |y: f64| ((64.0 * y * y - 480.0) * y * y + 720.0) * y * y - 120.0;
        let sup_err = |xi: f64| {
            let mut e = 0.0f64;
            let mut y = -3.0;
            while y <= 3.0 {
                e = e.max((hermite_limit(6, xi, y).unwrap() - hermite6(y)).abs());
                y += 0.5;
            }
            e
        };
        let (e6, e7) = (sup_err(1e6), sup_err(1e7));
        assert!(e6 < 1.0, "{e6}");
        let ratio = e6 / e7;
        assert!((8.0..12.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn frozen_normalization_constants() {
        let p = params01();
        assert!((normalize(0, &p, 1e-10).unwrap() - 0.736_943_124_708_604).abs() < 1e-9);
        assert!((normalize(1, &p, 1e-10).unwrap() - 0.337_390_174_584_791_4).abs() < 1e-9);
        assert!((normalize(2, &p, 1e-10).unwrap() - 0.237_509_459_572_525_3).abs() < 1e-9);
    }

    #[test]
    fn frozen_eigenfunction_values_with_sign_convention() {
        let p = params01();
        let e0 = eigenfunction(0, &p).unwrap();
        assert!((e0.evaluate(0.0) - 0.736_943_124_708_604).abs() < 1e-9);
        assert!((e0.evaluate(0.7) - 0.584_837_157_159_644_8).abs() < 1e-9);
        // c₀ < 0 at n = 2, so the convention flips the raw polynomial sign.
        let e2 = eigenfunction(2, &p).unwrap();
        assert!(e2.evaluate(0.0) > 0.0);
        assert!((e2.evaluate(1.1) - -0.309_695_431_247_726_6).abs() < 1e-8);
        // Odd levels: slope at the origin is positive.
        let e1 = eigenfunction(1, &p).unwrap();
        let h = 1e-5;
        let slope = (e1.evaluate(h) - e1.evaluate(-h)) / (2.0 * h);
        assert!((slope - 0.961_562_089_937_565_2).abs() < 1e-6, "{slope}");
    }

    #[test]
    fn parity_is_exact() {
        let p = params01();
        let e2 = eigenfunction(2, &p).unwrap();
        let e3 = eigenfunction(3, &p).unwrap();
        let mut x = 0.05;
        while x < 20.0 {
            assert_eq!(e2.evaluate(-x), e2.evaluate(x));
            assert_eq!(e3.evaluate(-x), -e3.evaluate(x));
            x += 0.37;
        }
    }

    #[test]
    fn interior_node_count_matches_level() {
        let p = params01();
        let e3 = eigenfunction(3, &p).unwrap();
        let mut nodes = 0;
        let mut prev = e3.evaluate(-25.0);
        let mut x = -25.0 + 1e-3;
        while x <= 25.0 {
            let v = e3.evaluate(x);
            if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() {
                nodes += 1;
            }
            prev = v;
            x += 1e-3;
        }
        assert_eq!(nodes, 3);
    }

    #[test]
    fn tail_slope_matches_decay_exponent() {
        let p = params01();
        let e0 = eigenfunction(0, &p).unwrap();
        let gamma = e0.decay_exponent();
        let sl = 0.1f64.sqrt();
        let (x1, x2) = (5.0 / sl, 7.0 / sl);
        let slope = (e0.evaluate(x2).abs().ln() - e0.evaluate(x1).abs().ln()) / (x2 - x1);
        assert!(((-slope - gamma) / gamma).abs() < 0.02, "slope {slope} vs −{gamma}");
    }

    #[test]
    fn orthonormality() {
        let p = params01();
        let efs: Vec<_> = (0..=5).map(|n| eigenfunction(n, &p).unwrap()).collect();
        for i in 0..=5 {
            for j in i..=5 {
                let f = |x: f64| efs[i].evaluate(x) * efs[j].evaluate(x);
                let (overlap, _) = quadrature::integrate(&f, -40.0, 40.0, 1e-11).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((overlap - expect).abs() < 1e-8, "({i},{j}): {overlap}");
            }
        }
    }

    #[test]
    fn trapezoid_norm_cross_check() {
        // Exponentially decaying analytic integrand: the trapezoid rule on a
        // wide uniform grid is an independent high-accuracy check.
        let p = params01();
        let e1 = eigenfunction(1, &p).unwrap();
        let h = 0.02;
        let half = (40.0 / h) as i64;
        let mut total = 0.0;
        for k in -half..=half {
            let x = k as f64 * h;
            let w = if k == -half || k == half { 0.5 } else { 1.0 };
            let v = e1.evaluate(x);
            total += w * v * v * h;
        }
        assert!((total - 1.0).abs() < 1e-8, "{total}");
    }

    #[test]
    fn schrodinger_residual_is_small() {
        // Order-4 finite-difference check of the eigenvalue equation.
        let p = params01();
        let sl = p.lambda.sqrt();
        let well = p.m * p.omega * p.omega / (2.0 * p.lambda);
        for n in [0usize, 2, 5] {
            let ef = eigenfunction(n, &p).unwrap();
            let en = ef.energy();
            let h = 1e-3 / sl;
            let x_max = 8.0 / sl;
            let m = (2.0 * x_max / h) as usize;
            let vals: Vec<f64> = (0..=m).map(|i| ef.evaluate(-x_max + i as f64 * h)).collect();
            let mut res2 = 0.0;
            let mut phi2 = 0.0;
            for i in 2..=m - 2 {
                let d2 = (-vals[i - 2] + 16.0 * vals[i - 1] - 30.0 * vals[i]
                    + 16.0 * vals[i + 1]
                    - vals[i + 2])
                    / (12.0 * h * h);
                let x = -x_max + i as f64 * h;
                let pot = well * (sl * x).tanh().powi(2);
                let r = -p.hbar * p.hbar / (2.0 * p.m) * d2 + pot * vals[i] - en * vals[i];
                res2 += r * r;
                phi2 += vals[i] * vals[i];
            }
            let rel = (res2 / phi2).sqrt();
            assert!(rel < 1e-6, "n={n}: residual {rel}");
        }
    }

    #[test]
    fn undeformed_limit_recovers_hermite_functions() {
        // λ → 0: the n = 2 state approaches the harmonic-oscillator
        // eigenfunction (πb²)^{−1/4}/√(2²·2!)·H₂(x/b)·e^{−x²/2b²}, up to the
        // origin-positive sign convention (H₂(0) = −2, so the reference is
        // flipped).
        let p = OscillatorParams::natural(1e-10).unwrap();
        let e2 = eigenfunction(2, &p).unwrap();
        let norm = std::f64::consts::PI.powf(-0.25) / 8.0f64.sqrt();
        let mut x = -5.0;
        while x <= 5.0 {
            let sho = -norm * (4.0 * x * x - 2.0) * (-x * x / 2.0).exp();
            assert!((e2.evaluate_x(x) - sho).abs() < 1e-5, "x={x}");
            x += 0.25;
        }
    }

    #[test]
    fn ground_norm_approaches_gaussian_constant() {
        let p = OscillatorParams::natural(1e-8).unwrap();
        let n0 = normalize(0, &p, 1e-10).unwrap();
        assert!((n0 - std::f64::consts::PI.powf(-0.25)).abs() < 1e-6);
    }

    #[test]
    fn construction_rejects_invalid_requests() {
        let p = params01();
        assert!(eigenfunction(10, &p).is_err()); // only n ≤ 9 are bound at v = 100
        let p0 = OscillatorParams::natural(0.0).unwrap();
        assert!(eigenfunction(0, &p0).is_err());
        assert!(normalize(0, &params01(), 0.0).is_err());
    }

    #[test]
    fn threshold_tie_level_is_rejected() {
        // v = 12 makes √(¼+v) = 3.5: the n = 3 level sits exactly at the
        // continuum threshold (zero decay) and cannot be normalized, even
        // though the bound-level count includes it.
        let lambda = 1.0 / 12.0f64.sqrt();
        let p = OscillatorParams::natural(lambda).unwrap();
        assert!(eigenfunction(3, &p).is_err());
        assert!(eigenfunction(2, &p).is_ok());
    }
}
