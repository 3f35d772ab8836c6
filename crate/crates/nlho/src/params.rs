//! Oscillator parameters, derived dimensionless quantities, and the canonical
//! coordinate maps between the physical chart (x, p) and the canonical chart
//! (X, P) in which the kinetic term is flat.

use crate::error::{domain, Result};

/// Physical parameters of the nonlinear oscillator
/// H = (1+λx²)p²/2m + mω²x²/(2(1+λx²)).
///
/// Unit-agnostic; natural units m = ω = ħ = 1 are the documented default.
/// λ ≥ 0 has dimension 1/length²; λ = 0 is the ordinary harmonic oscillator
/// (the undeformed branch) and every operation dispatches to its analytic
/// λ→0 limit instead of dividing by λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn new(m: f64, omega: f64, lambda: f64, hbar: f64) -> Result<Self> {
        let p = Self { m, omega, lambda, hbar };
        p.validate()?;
        Ok(p)
    }

    /// Natural units m = ω = ħ = 1 with the given deformation.
    pub fn natural(lambda: f64) -> Result<Self> {
        Self::new(1.0, 1.0, lambda, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite();
        if !(ok(self.m) && ok(self.omega) && ok(self.lambda) && ok(self.hbar)) {
            return Err(domain("all parameters must be finite"));
        }
        if self.m <= 0.0 {
            return Err(domain(format!("mass must be positive, got {}", self.m)));
        }
        if self.omega <= 0.0 {
            return Err(domain(format!("omega must be positive, got {}", self.omega)));
        }
        if self.hbar <= 0.0 {
            return Err(domain(format!("hbar must be positive, got {}", self.hbar)));
        }
        if self.lambda < 0.0 {
            return Err(domain(format!("lambda must be nonnegative, got {}", self.lambda)));
        }
        Ok(())
    }

    /// Whether this is the undeformed (λ = 0) harmonic-oscillator branch.
    pub fn is_undeformed(&self) -> bool {
        self.lambda == 0.0
    }

    /// Dimensionless derived quantities.
    pub fn derive(&self) -> DerivedParams {
        let b2 = self.hbar / (self.m * self.omega);
        if self.is_undeformed() {
            return DerivedParams {
                v: f64::INFINITY,
                sigma: f64::INFINITY,
                b2,
                xi: f64::INFINITY,
                epsilon_scale: f64::INFINITY,
                undeformed: true,
            };
        }
        let v = (self.m * self.omega / (self.hbar * self.lambda)).powi(2);
        DerivedParams {
            v,
            sigma: 0.5 + 0.5 * (0.25 + v).sqrt(),
            b2,
            xi: 1.0 / (self.lambda * b2),
            epsilon_scale: 2.0 * self.m / (self.lambda * self.hbar * self.hbar),
            undeformed: false,
        }
    }

    /// Canonical chart position: X = sinh⁻¹(√λ x)/√λ (X = x when λ = 0).
    pub fn to_canonical_x(&self, x: f64) -> f64 {
        if self.is_undeformed() {
            x
        } else {
            let sl = self.lambda.sqrt();
            (sl * x).asinh() / sl
        }
    }

    /// Inverse of [`to_canonical_x`](Self::to_canonical_x): x = sinh(√λ X)/√λ.
    pub fn from_canonical_x(&self, x_can: f64) -> f64 {
        if self.is_undeformed() {
            x_can
        } else {
            let sl = self.lambda.sqrt();
            (sl * x_can).sinh() / sl
        }
    }

    /// Canonical chart momentum: P = √(1+λx²)·p (physical position x).
    pub fn to_canonical_p(&self, x: f64, p: f64) -> f64 {
        (1.0 + self.lambda * x * x).sqrt() * p
    }

    /// Inverse of [`to_canonical_p`](Self::to_canonical_p): p = P/cosh(√λ X).
    pub fn from_canonical_p(&self, x_can: f64, p_can: f64) -> f64 {
        if self.is_undeformed() {
            p_can
        } else {
            p_can / (self.lambda.sqrt() * x_can).cosh()
        }
    }
}

/// Dimensionless quantities derived from [`OscillatorParams`].
///
/// For λ = 0 the fields that scale as inverse powers of λ (`v`, `sigma`, `xi`,
/// `epsilon_scale`) are `+∞` sentinels and `undeformed` is set; consumers must
/// branch on the flag rather than propagate the sentinels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// v = m²ω²/(ħ²λ²) = ξ².
    pub v: f64,
    /// σ = ½ + ½√(¼+v), the positive root of σ² − σ = v/4 − 3/16.
    pub sigma: f64,
    /// b² = ħ/(mω), squared oscillator length.
    pub b2: f64,
    /// ξ = 1/(λb²) = √v.
    pub xi: f64,
    /// 2m/(λħ²): multiplies an energy E to give the dimensionless ε.
    pub epsilon_scale: f64,
    /// λ = 0 branch flag.
    pub undeformed: bool,
}
