//! Classical dynamics of the nonlinear oscillator: Hamiltonians in both
//! charts, ODE integration, the exact orbit, numerical Poisson brackets, and
//! the complexifier maps z, Z, A with their identities.

use num_complex::Complex64;

use crate::error::{domain, numerical, Result};
use crate::params::OscillatorParams;

/// Which phase-space chart a state lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// The physical chart (x, p): curved kinetic term (1+λx²)p²/2m.
    Physical,
    /// The canonical chart (X, P): flat kinetic term, tanh² potential.
    Canonical,
}

/// A point of phase space, tagged with its chart and a time stamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub q: f64,
    pub p: f64,
    pub chart: Chart,
    pub t: f64,
}

impl PhaseState {
    pub fn physical(x: f64, p: f64) -> Self {
        Self { q: x, p, chart: Chart::Physical, t: 0.0 }
    }

    pub fn canonical(x: f64, p: f64) -> Self {
        Self { q: x, p, chart: Chart::Canonical, t: 0.0 }
    }

    /// Express the same phase point in another chart.
    pub fn to_chart(&self, chart: Chart, params: &OscillatorParams) -> PhaseState {
        match (self.chart, chart) {
            (a, b) if a == b => *self,
            (Chart::Physical, Chart::Canonical) => PhaseState {
                q: params.to_canonical_x(self.q),
                p: params.to_canonical_p(self.q, self.p),
                chart: Chart::Canonical,
                t: self.t,
            },
            _ => PhaseState {
                q: params.from_canonical_x(self.q),
                p: params.from_canonical_p(self.q, self.p),
                chart: Chart::Physical,
                t: self.t,
            },
        }
    }
}

/// Result of an orbit integration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<PhaseState>,
    pub dt: f64,
    /// max over recorded steps of |E(t)−E(0)| / |E(0)| (absolute if E(0)=0).
    pub energy_drift: f64,
}

/// Integration scheme. Leapfrog (velocity Verlet) requires the canonical
/// chart, where the Hamiltonian is separable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    LeapfrogCanonical,
}

/// Energy of a phase point in its own chart.
///
/// Physical: H = (1+λx²)p²/2m + mω²x²/(2(1+λx²));
/// canonical: H = P²/2m + (mω²/2λ)tanh²(√λX), with λ=0 giving the harmonic
/// potential mω²X²/2.
pub fn hamiltonian(state: &PhaseState, params: &OscillatorParams) -> f64 {
    let OscillatorParams { m, omega, lambda, .. } = *params;
    match state.chart {
        Chart::Physical => {
            let u = 1.0 + lambda * state.q * state.q;
            u * state.p * state.p / (2.0 * m) + m * omega * omega * state.q * state.q / (2.0 * u)
        }
        Chart::Canonical => {
            let kin = state.p * state.p / (2.0 * m);
            if lambda == 0.0 {
                kin + 0.5 * m * omega * omega * state.q * state.q
            } else {
                let th = (lambda.sqrt() * state.q).tanh();
                kin + m * omega * omega / (2.0 * lambda) * th * th
            }
        }
    }
}

/// Hamiltonian vector field (dq/dt, dp/dt) in the state's chart.
pub fn rhs(state: &PhaseState, params: &OscillatorParams) -> (f64, f64) {
    let OscillatorParams { m, omega, lambda, .. } = *params;
    match state.chart {
        Chart::Physical => {
            let u = 1.0 + lambda * state.q * state.q;
            let qdot = u * state.p / m;
            let pdot = -lambda * state.q * state.p * state.p / m
                - m * omega * omega * state.q / (u * u);
            (qdot, pdot)
        }
        Chart::Canonical => (state.p / m, canonical_force(state.q, params)),
    }
}

/// −dV/dX for the canonical-chart potential V = (mω²/2λ)tanh²(√λX).
fn canonical_force(x: f64, params: &OscillatorParams) -> f64 {
    let OscillatorParams { m, omega, lambda, .. } = *params;
    if lambda == 0.0 {
        return -m * omega * omega * x;
    }
    let sl = lambda.sqrt();
    let c = (sl * x).cosh();
    -m * omega * omega / sl * (sl * x).sinh() / (c * c * c)
}

fn rk4_step(state: &PhaseState, dt: f64, params: &OscillatorParams) -> PhaseState {
    let deriv = |q: f64, p: f64| {
        rhs(&PhaseState { q, p, chart: state.chart, t: 0.0 }, params)
    };
    let (k1q, k1p) = deriv(state.q, state.p);
    let (k2q, k2p) = deriv(state.q + 0.5 * dt * k1q, state.p + 0.5 * dt * k1p);
    let (k3q, k3p) = deriv(state.q + 0.5 * dt * k2q, state.p + 0.5 * dt * k2p);
    let (k4q, k4p) = deriv(state.q + dt * k3q, state.p + dt * k3p);
    PhaseState {
        q: state.q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
        p: state.p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        chart: state.chart,
        t: state.t + dt,
    }
}

fn leapfrog_step(state: &PhaseState, dt: f64, params: &OscillatorParams) -> PhaseState {
    // kick–drift–kick velocity Verlet
    let p_half = state.p + 0.5 * dt * canonical_force(state.q, params);
    let q_new = state.q + dt * p_half / params.m;
    let p_new = p_half + 0.5 * dt * canonical_force(q_new, params);
    PhaseState { q: q_new, p: p_new, chart: Chart::Canonical, t: state.t + dt }
}

/// Integrate an orbit, recording every sample. See
/// [`integrate_orbit_strided`] for long runs.
pub fn integrate_orbit(
    initial: &PhaseState,
    dt: f64,
    n_steps: usize,
    scheme: Scheme,
    params: &OscillatorParams,
) -> Result<Trajectory> {
    integrate_orbit_strided(initial, dt, n_steps, scheme, 1, params)
}

/// Integrate an orbit, storing every `stride`-th sample (the initial and
/// final states are always stored). Energy drift is monitored at every step
/// regardless of the stride.
pub fn integrate_orbit_strided(
    initial: &PhaseState,
    dt: f64,
    n_steps: usize,
    scheme: Scheme,
    stride: usize,
    params: &OscillatorParams,
) -> Result<Trajectory> {
    params.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(domain(format!("dt must be positive and finite, got {dt}")));
    }
    if stride == 0 {
        return Err(domain("stride must be at least 1"));
    }
    if scheme == Scheme::LeapfrogCanonical && initial.chart != Chart::Canonical {
        return Err(domain("leapfrog requires the canonical chart (separable Hamiltonian)"));
    }
    let e0 = hamiltonian(initial, params);
    let denom = if e0 == 0.0 { 1.0 } else { e0.abs() };
    let mut drift: f64 = 0.0;
    let mut samples = Vec::with_capacity(n_steps / stride + 2);
    samples.push(*initial);
    let mut state = *initial;
    for step in 1..=n_steps {
        state = match scheme {
            Scheme::Rk4 => rk4_step(&state, dt, params),
            Scheme::LeapfrogCanonical => leapfrog_step(&state, dt, params),
        };
        if !(state.q.is_finite() && state.p.is_finite()) {
            return Err(numerical(format!("non-finite state at step {step}")));
        }
        drift = drift.max((hamiltonian(&state, params) - e0).abs() / denom);
        if step % stride == 0 || step == n_steps {
            samples.push(state);
        }
    }
    Ok(Trajectory { samples, dt, energy_drift: drift })
}

/// The exact orbit x(t) = A sin(Ωt + Φ) with Ω = ω/√(1+λA²).
pub fn exact_orbit(amplitude: f64, phase: f64, params: &OscillatorParams, t: f64) -> f64 {
    amplitude * (orbit_frequency(amplitude, params) * t + phase).sin()
}

/// Amplitude-dependent frequency Ω = ω/√(1+λA²).
pub fn orbit_frequency(amplitude: f64, params: &OscillatorParams) -> f64 {
    params.omega / (1.0 + params.lambda * amplitude * amplitude).sqrt()
}

/// Orbit energy E = (mω²/2λ)[1 − 1/(1+λA²)] (λ=0 branch: mω²A²/2).
pub fn orbit_energy(amplitude: f64, params: &OscillatorParams) -> f64 {
    let OscillatorParams { m, omega, lambda, .. } = *params;
    let a2 = amplitude * amplitude;
    if lambda == 0.0 {
        0.5 * m * omega * omega * a2
    } else {
        // 1 − 1/(1+λA²) = λA²/(1+λA²), written cancellation-free.
        0.5 * m * omega * omega * a2 / (1.0 + lambda * a2)
    }
}

/// Period from successive upward zero crossings of q(t), each refined by a
/// local quadratic fit through the three samples around the crossing.
pub fn measured_period(traj: &Trajectory) -> Result<f64> {
    let s = &traj.samples;
    let mut crossings = Vec::new();
    for i in 1..s.len().saturating_sub(1) {
        if s[i].q < 0.0 && s[i + 1].q >= 0.0 {
            // Parabola through (t_{i−1}, q_{i−1}), (t_i, q_i), (t_{i+1}, q_{i+1});
            // root nearest the linear-interpolation estimate.
            let (t0, y0) = (s[i - 1].t, s[i - 1].q);
            let (t1, y1) = (s[i].t, s[i].q);
            let (t2, y2) = (s[i + 1].t, s[i + 1].q);
            let linear = t1 + (t2 - t1) * y1 / (y1 - y2);
            crossings.push(quadratic_root(t0, y0, t1, y1, t2, y2).unwrap_or(linear));
        }
    }
    if crossings.len() < 2 {
        return Err(numerical(format!(
            "need at least two upward zero crossings, found {}",
            crossings.len()
        )));
    }
    let k = crossings.len() - 1;
    Ok((crossings[k] - crossings[0]) / k as f64)
}

/// Root of the interpolating parabola through three points, preferring the
/// one inside [t1, t2]; None if the parabola has no real root there.
fn quadratic_root(t0: f64, y0: f64, t1: f64, y1: f64, t2: f64, y2: f64) -> Option<f64> {
    // Newton form y(t) = y0 + d01·(t−t0) + a·(t−t0)(t−t1) expands to
    // a·t² + b·t + c with the coefficients below.
    let d01 = (y1 - y0) / (t1 - t0);
    let d12 = (y2 - y1) / (t2 - t1);
    let a = (d12 - d01) / (t2 - t0);
    let b = d01 - a * (t0 + t1);
    let c = y0 - d01 * t0 + a * t0 * t1;
    if a.abs() < 1e-300 {
        if b == 0.0 {
            return None;
        }
        let r = -c / b;
        return (r >= t1 && r <= t2).then_some(r);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    for r in [q / a, c / q] {
        if r >= t1 && r <= t2 {
            return Some(r);
        }
    }
    None
}

/// Default finite-difference step for brackets at coordinate scale |q|.
pub fn bracket_step(q: f64) -> f64 {
    1e-4 * (1.0 + q.abs())
}

/// Numerical Poisson bracket {f,g} = ∂f/∂q ∂g/∂p − ∂f/∂p ∂g/∂q at a phase
/// point, by Richardson-extrapolated central differences (error O(h⁴)).
/// `f` and `g` take (q, p) in the chart of `at`.
pub fn poisson_bracket<F, G>(f: F, g: G, at: &PhaseState, h: f64) -> Complex64
where
    F: Fn(f64, f64) -> Complex64,
    G: Fn(f64, f64) -> Complex64,
{
    let dq = |func: &dyn Fn(f64, f64) -> Complex64| {
        let d = |hh: f64| (func(at.q + hh, at.p) - func(at.q - hh, at.p)) / (2.0 * hh);
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    };
    let dp = |func: &dyn Fn(f64, f64) -> Complex64| {
        let d = |hh: f64| (func(at.q, at.p + hh) - func(at.q, at.p - hh)) / (2.0 * hh);
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    };
    dq(&f) * dp(&g) - dp(&f) * dq(&g)
}

/// Complex phase-space coordinate generated by the complexifier, in the
/// chart of `state`: z(x,p) on the physical chart, Z(X,P) on the canonical
/// chart. The two expressions agree on corresponding points.
pub fn complexifier(state: &PhaseState, params: &OscillatorParams) -> Complex64 {
    let OscillatorParams { m, omega, lambda, .. } = *params;
    match state.chart {
        Chart::Physical => {
            let (x, p) = (state.q, state.p);
            if lambda == 0.0 {
                return Complex64::new(
                    (0.5 * m * omega).sqrt() * x,
                    p / (2.0 * m * omega).sqrt(),
                );
            }
            let u = 1.0 + lambda * x * x;
            let theta = p * (lambda * u).sqrt() / (m * omega);
            (0.5 * m * omega).sqrt()
                * Complex64::new(x * theta.cos(), (u / lambda).sqrt() * theta.sin())
        }
        Chart::Canonical => {
            let (xc, pc) = (state.q, state.p);
            if lambda == 0.0 {
                return harmonic_a(xc, pc, params);
            }
            let sl = lambda.sqrt();
            let arg = Complex64::new(sl * xc, sl * pc / (m * omega));
            (0.5 * m * omega / lambda).sqrt() * arg.sinh()
        }
    }
}

/// Partial sum of the complexifier bracket tower on the physical chart:
/// √(mω/2)·Σ_{n<N} (iⁿ/n!)·{x,C}_(n), with the closed tower forms
/// {x,C}_(2k) = (p/mω)^{2k} λᵏ (1+λx²)ᵏ x and
/// {x,C}_(2k+1) = (p/mω)^{2k+1} λᵏ (1+λx²)^{k+1}.
pub fn complexifier_series(
    x: f64,
    p: f64,
    params: &OscillatorParams,
    n_terms: usize,
) -> Result<Complex64> {
    params.validate()?;
    if n_terms == 0 {
        return Err(domain("series needs at least one term"));
    }
    let OscillatorParams { m, omega, lambda, .. } = *params;
    let u = 1.0 + lambda * x * x;
    let pw = p / (m * omega);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut factorial = 1.0;
    for n in 0..n_terms {
        if n > 0 {
            factorial *= n as f64;
        }
        let k = n / 2;
        let tower = if n % 2 == 0 {
            pw.powi(n as i32) * lambda.powi(k as i32) * u.powi(k as i32) * x
        } else {
            pw.powi(n as i32) * lambda.powi(k as i32) * u.powi(k as i32 + 1)
        };
        sum += Complex64::i().powu(n as u32) * (tower / factorial);
    }
    Ok((0.5 * m * omega).sqrt() * sum)
}

/// Harmonic complex coordinate A = √(mω/2)·X + iP/√(2mω) on the canonical
/// chart.
pub fn harmonic_a(x_can: f64, p_can: f64, params: &OscillatorParams) -> Complex64 {
    let OscillatorParams { m, omega, .. } = *params;
    Complex64::new(
        (0.5 * m * omega).sqrt() * x_can,
        p_can / (2.0 * m * omega).sqrt(),
    )
}

/// Closed form of the bracket {Z, Z*} at a canonical-chart point:
/// (−i/2)[cosh(2√λX) + cos(2√λP/mω)]; the λ=0 limit is −i.
pub fn bracket_zzstar_closed(x_can: f64, p_can: f64, params: &OscillatorParams) -> Complex64 {
    let OscillatorParams { m, omega, lambda, .. } = *params;
    if lambda == 0.0 {
        return Complex64::new(0.0, -1.0);
    }
    let sl = lambda.sqrt();
    let value = (2.0 * sl * x_can).cosh() + (2.0 * sl * p_can / (m * omega)).cos();
    Complex64::new(0.0, -0.5 * value)
}

/// Closed form of Ż on the canonical chart:
/// √(mω/2)·(P/m − (iω/√λ)·sinh√λX/cosh³√λX)·cosh(√λX + i√λP/mω);
/// the λ=0 limit is −iωA.
pub fn zdot_closed(x_can: f64, p_can: f64, params: &OscillatorParams) -> Complex64 {
    let OscillatorParams { m, omega, lambda, .. } = *params;
    if lambda == 0.0 {
        return Complex64::new(0.0, -omega) * harmonic_a(x_can, p_can, params);
    }
    let sl = lambda.sqrt();
    let c = (sl * x_can).cosh();
    let radial = Complex64::new(
        p_can / m,
        -omega / sl * (sl * x_can).sinh() / (c * c * c),
    );
    let envelope = Complex64::new(sl * x_can, sl * p_can / (m * omega)).cosh();
    (0.5 * m * omega).sqrt() * radial * envelope
}

/// |{Z,H}_numerical − Ż_closed| at a canonical-chart point, using the
/// numerical bracket with step `h`.
pub fn zdot_residual(x_can: f64, p_can: f64, params: &OscillatorParams, h: f64) -> f64 {
    let at = PhaseState::canonical(x_can, p_can);
    let p = *params;
    let z = move |q: f64, pp: f64| complexifier(&PhaseState::canonical(q, pp), &p);
    let ham = move |q: f64, pp: f64| {
        Complex64::new(hamiltonian(&PhaseState::canonical(q, pp), &p), 0.0)
    };
    let numeric = poisson_bracket(z, ham, &at, h);
    (numeric - zdot_closed(x_can, p_can, params)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn natural(lambda: f64) -> OscillatorParams {
        OscillatorParams::natural(lambda).unwrap()
    }

    #[test]
    fn hamiltonian_values() {
        let p = natural(0.1);
        assert_eq!(hamiltonian(&PhaseState::physical(0.0, 0.0), &p), 0.0);
        let sho = natural(0.0);
        assert!((hamiltonian(&PhaseState::physical(1.0, 1.0), &sho) - 1.0).abs() < 1e-15);
        let five_elevenths = 5.0 / 11.0;
        let st = PhaseState::physical(1.0, 0.0);
        assert!((hamiltonian(&st, &p) - five_elevenths).abs() < 1e-15);
        // The two charts agree on corresponding points.
        let mapped = st.to_chart(Chart::Canonical, &p);
        assert!((hamiltonian(&mapped, &p) - five_elevenths).abs() < 1e-14);
    }

    #[test]
    fn charts_agree_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = natural(rng.random_range(0.01..2.0));
            let st = PhaseState::physical(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let canon = st.to_chart(Chart::Canonical, &p);
            let (ha, hb) = (hamiltonian(&st, &p), hamiltonian(&canon, &p));
            assert!((ha - hb).abs() <= 1e-12 * ha.abs().max(1.0));
            let back = canon.to_chart(Chart::Physical, &p);
            assert!((back.q - st.q).abs() <= 1e-12 * st.q.abs().max(1.0));
            assert!((back.p - st.p).abs() <= 1e-12 * st.p.abs().max(1.0));
        }
    }

    #[test]
    fn vector_field_values() {
        let p1 = natural(1.0);
        assert_eq!(rhs(&PhaseState::physical(0.0, 0.0), &p1), (0.0, 0.0));
        let sho = natural(0.0);
        let (qd, pd) = rhs(&PhaseState::physical(0.3, -0.7), &sho);
        assert!((qd - -0.7).abs() < 1e-15 && (pd - -0.3).abs() < 1e-15);
        let (qd, pd) = rhs(&PhaseState::physical(1.0, 1.0), &p1);
        assert!((qd - 2.0).abs() < 1e-15);
        assert!((pd - -1.25).abs() < 1e-15);
    }

    #[test]
    fn canonical_force_matches_potential_gradient() {
        let p = natural(0.4);
        let h = 1e-5;
        for &x in &[-1.3, 0.2, 2.5] {
            let v = |q: f64| hamiltonian(&PhaseState::canonical(q, 0.0), &p);
            let grad = (v(x + h) - v(x - h)) / (2.0 * h);
            let (_, force) = rhs(&PhaseState::canonical(x, 0.0), &p);
            assert!((force + grad).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn rk4_reproduces_sho_cosine() {
        let sho = natural(0.0);
        let dt = 1e-3;
        let n = (10.0 * 2.0 * std::f64::consts::PI / dt) as usize;
        let traj =
            integrate_orbit(&PhaseState::physical(1.0, 0.0), dt, n, Scheme::Rk4, &sho).unwrap();
        let max_dev = traj
            .samples
            .iter()
            .map(|s| (s.q - s.t.cos()).abs())
            .fold(0.0f64, f64::max);
        assert!(max_dev < 1e-8, "max deviation {max_dev}");
    }

    #[test]
    fn leapfrog_requires_canonical_chart() {
        let p = natural(0.1);
        let r = integrate_orbit(
            &PhaseState::physical(1.0, 0.0),
            1e-3,
            10,
            Scheme::LeapfrogCanonical,
            &p,
        );
        assert!(r.is_err());
    }

    #[test]
    fn leapfrog_energy_drift_scales_as_dt_squared() {
        let p = natural(0.1);
        let x0 = p.to_canonical_x(1.0);
        let period = 2.0 * std::f64::consts::PI / orbit_frequency(1.0, &p);
        let drift_at = |steps_per_period: usize| {
            let dt = period / steps_per_period as f64;
            let n = steps_per_period * 100;
            integrate_orbit_strided(
                &PhaseState::canonical(x0, 0.0),
                dt,
                n,
                Scheme::LeapfrogCanonical,
                n / 100,
                &p,
            )
            .unwrap()
            .energy_drift
        };
        let d1000 = drift_at(1000);
        let d4000 = drift_at(4000);
        // O(dt²) conservation: measured ≈1.0e−5 at 1000 steps/period.
        assert!(d1000 < 2e-5, "drift {d1000}");
        assert!(d4000 < 1.5e-6, "drift {d4000}");
        let ratio = d1000 / d4000;
        assert!(ratio > 8.0 && ratio < 32.0, "dt² scaling broken: {ratio}");
    }

    #[test]
    fn rk4_energy_drift_small() {
        let p = natural(0.1);
        let period = 2.0 * std::f64::consts::PI / orbit_frequency(1.0, &p);
        let n = 1000 * 100;
        let traj = integrate_orbit_strided(
            &PhaseState::physical(1.0, 0.0),
            period / 1000.0,
            n,
            Scheme::Rk4,
            n / 100,
            &p,
        )
        .unwrap();
        assert!(traj.energy_drift < 1e-7, "drift {}", traj.energy_drift);
    }

    #[test]
    fn exact_orbit_values() {
        let p = natural(0.1);
        assert_eq!(exact_orbit(0.0, 0.3, &p, 1.7), 0.0);
        assert_eq!(orbit_energy(0.0, &p), 0.0);
        let sho = natural(0.0);
        assert_eq!(orbit_frequency(2.0, &sho), 1.0);
        assert!((orbit_energy(2.0, &sho) - 2.0).abs() < 1e-15);
        assert!((orbit_frequency(1.0, &p) - 0.953_462_589_245_592_315_45).abs() < 1e-15);
        assert!((orbit_energy(1.0, &p) - 5.0 / 11.0).abs() < 1e-15);
        // Consistency with the Hamiltonian at the turning point.
        let turn = PhaseState::physical(1.0, 0.0);
        assert!((orbit_energy(1.0, &p) - hamiltonian(&turn, &p)).abs() < 1e-15);
    }

    #[test]
    fn measured_periods_match_frequency_law() {
        for &lambda in &[0.0, 0.1, 1.0, 10.0] {
            let p = natural(lambda);
            let a = 1.0;
            let period = 2.0 * std::f64::consts::PI / orbit_frequency(a, &p);
            let dt = period / 3000.0;
            let n = (30.2 * period / dt) as usize;
            let traj =
                integrate_orbit(&PhaseState::physical(a, 0.0), dt, n, Scheme::Rk4, &p).unwrap();
            let measured = measured_period(&traj).unwrap();
            let rel = (measured - period).abs() / period;
            assert!(rel < 1e-6, "λ={lambda}: rel {rel}");
        }
    }

    #[test]
    fn bracket_canonical_pair() {
        let at = PhaseState::physical(0.7, -0.4);
        let one = poisson_bracket(
            |q, _| Complex64::new(q, 0.0),
            |_, p| Complex64::new(p, 0.0),
            &at,
            bracket_step(at.q),
        );
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn bracket_chart_maps_are_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = natural(0.1);
        for _ in 0..100 {
            let at = PhaseState::physical(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let b = poisson_bracket(
                |q, _| Complex64::new(p.to_canonical_x(q), 0.0),
                |q, pp| Complex64::new(p.to_canonical_p(q, pp), 0.0),
                &at,
                bracket_step(at.q),
            );
            assert!((b - Complex64::new(1.0, 0.0)).norm() < 1e-8, "at {at:?}");
        }
    }

    #[test]
    fn bracket_zzstar_matches_closed_form() {
        let p = natural(0.1);
        let at = PhaseState::canonical(0.5, 0.3);
        let pp = p;
        let numeric = poisson_bracket(
            move |q, pc| complexifier(&PhaseState::canonical(q, pc), &pp),
            move |q, pc| complexifier(&PhaseState::canonical(q, pc), &pp).conj(),
            &at,
            bracket_step(at.q),
        );
        let closed = bracket_zzstar_closed(0.5, 0.3, &p);
        assert!((numeric - closed).norm() < 1e-7, "{numeric} vs {closed}");
        assert_eq!(bracket_zzstar_closed(0.0, 0.0, &p), Complex64::new(0.0, -1.0));
        assert_eq!(bracket_zzstar_closed(0.4, 0.2, &natural(0.0)), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn bracket_aastar_is_minus_i() {
        let p = natural(0.1);
        let at = PhaseState::canonical(0.8, -0.6);
        let numeric = poisson_bracket(
            move |q, pc| harmonic_a(q, pc, &p),
            move |q, pc| harmonic_a(q, pc, &p).conj(),
            &at,
            bracket_step(at.q),
        );
        assert!((numeric - Complex64::new(0.0, -1.0)).norm() < 1e-8);
    }

    #[test]
    fn complexifier_special_sections() {
        let p = natural(0.1);
        // p = 0: purely real, √(mω/2)x.
        let z = complexifier(&PhaseState::physical(1.3, 0.0), &p);
        assert!((z - Complex64::new(0.5f64.sqrt() * 1.3, 0.0)).norm() < 1e-15);
        // λ = 0 physical branch.
        let sho = natural(0.0);
        let z0 = complexifier(&PhaseState::physical(1.0, 0.6), &sho);
        assert!((z0 - Complex64::new(0.5f64.sqrt(), 0.6 / 2.0f64.sqrt())).norm() < 1e-15);
        // Origin maps to zero in both charts.
        assert_eq!(complexifier(&PhaseState::canonical(0.0, 0.0), &p), Complex64::ZERO);
        // P = 0: Z real.
        let zc = complexifier(&PhaseState::canonical(0.9, 0.0), &p);
        assert!(zc.im.abs() < 1e-15);
        // λ = 0 canonical branch reduces to A.
        let a = complexifier(&PhaseState::canonical(0.4, -1.1), &sho);
        assert_eq!(a, harmonic_a(0.4, -1.1, &sho));
    }

    #[test]
    fn complexifier_chart_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let p = natural(0.1);
        for _ in 0..100 {
            let st = PhaseState::physical(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let z = complexifier(&st, &p);
            let zc = complexifier(&st.to_chart(Chart::Canonical, &p), &p);
            assert!((z - zc).norm() <= 1e-12 * z.norm().max(1.0), "at {st:?}");
        }
    }

    #[test]
    fn z_relates_to_a_through_sinh() {
        // Z = √(mω/2λ)·sinh(√(2λ/mω)·A) exactly.
        let p = natural(0.1);
        let (xc, pc) = (0.5, 0.3);
        let z = complexifier(&PhaseState::canonical(xc, pc), &p);
        let a = harmonic_a(xc, pc, &p);
        let scale = (0.5 / p.lambda).sqrt(); // √(mω/2λ) at m=ω=1
        let arg = (2.0 * p.lambda).sqrt() * a; // √(2λ/mω)·A
        assert!((z - scale * arg.sinh()).norm() < 1e-14);
    }

    #[test]
    fn series_first_terms_and_termination() {
        let p = natural(0.1);
        let one = complexifier_series(1.4, 0.8, &p, 1).unwrap();
        assert!((one - Complex64::new(0.5f64.sqrt() * 1.4, 0.0)).norm() < 1e-15);
        let sho = natural(0.0);
        let two = complexifier_series(1.4, 0.8, &sho, 2).unwrap();
        let closed = complexifier(&PhaseState::physical(1.4, 0.8), &sho);
        assert!((two - closed).norm() < 1e-15, "λ=0 series terminates at two terms");
        assert!(complexifier_series(1.0, 1.0, &p, 0).is_err());
    }

    #[test]
    fn series_converges_to_closed_form() {
        let p = natural(0.1);
        let closed = complexifier(&PhaseState::physical(1.0, 0.5), &p);
        let err = |n: usize| {
            (complexifier_series(1.0, 0.5, &p, n).unwrap() - closed).norm()
        };
        assert!(err(40) < 1e-12, "N=40 error {}", err(40));
        // Super-geometric decay of the truncation error.
        let (e5, e10, e20) = (err(5), err(10), err(20));
        assert!(e10 < e5 * 1e-3 && e20 < e10 * 1e-4, "{e5} {e10} {e20}");
    }

    #[test]
    fn zdot_residuals() {
        let p = natural(0.1);
        assert_eq!(zdot_closed(0.0, 0.0, &p), Complex64::ZERO);
        let r = zdot_residual(0.5, 0.3, &p, bracket_step(0.5));
        assert!(r < 1e-6, "residual {r}");
        let sho = natural(0.0);
        let r0 = zdot_residual(0.5, 0.3, &sho, bracket_step(0.5));
        assert!(r0 < 1e-8, "λ=0 residual {r0}");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn chart_roundtrip_and_complexifier_agree(
                x in -4.0f64..4.0,
                p in -4.0f64..4.0,
                lambda in 1e-4f64..4.0,
            ) {
                let params = natural(lambda);
                let st = PhaseState::physical(x, p);
                let canon = st.to_chart(Chart::Canonical, &params);
                let back = canon.to_chart(Chart::Physical, &params);
                prop_assert!((back.q - x).abs() <= 1e-10 * x.abs().max(1.0));
                prop_assert!((back.p - p).abs() <= 1e-10 * p.abs().max(1.0));
                let z = complexifier(&st, &params);
                let zc = complexifier(&canon, &params);
                prop_assert!((z - zc).norm() <= 1e-9 * z.norm().max(1.0));
            }
        }
    }
}
