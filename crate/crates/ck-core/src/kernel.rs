//! Damping kernel: the regime parameter ζ = √(1 − ω²/λ²), the time basis
//! Γ(τ) = (cosh²(ζτ), sinh(ζτ)cosh(ζτ), sinh²(ζτ)) and the coefficient
//! 3-vectors that every energy expression contracts against it.
//!
//! One complex formula set covers the overdamped (ζ real), underdamped
//! (ζ imaginary) and drag (ζ = 1) regimes; a reality assertion on each
//! contraction enforces regime correctness instead of duplicated trig and
//! hyperbolic code paths. Critical damping (ω = λ) is the ζ → 0 limit: every
//! expression contains sinh(ζτ) only in ratios with ζ, so the basis becomes
//! (1, τ, τ²) and the 1/ζ powers are dropped from the coefficient vectors.
//!
//! Decayed products e^{−2τ}Γ are assembled from e^{(ζ∓1)τ} factors before
//! any exponential can grow, so series stay finite at arbitrarily large τ.

use num_complex::Complex64;

use crate::error::{CkError, Result};

/// Tolerance on the relative imaginary residue of a contraction.
pub const REALITY_TOL: f64 = 1e-10;

/// |1 − (ω/λ)²| below this is treated as critical damping.
pub const CRITICAL_THRESHOLD: f64 = 1e-12;

/// Cap on τ for quantities that intrinsically carry an e^{+2τ} factor
/// (canonical-momentum moments). Decayed series have no cap.
pub const TAU_GROWN_MAX: f64 = 20.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Overdamped,
    Underdamped,
    Critical,
}

/// ζ = √(1 − ω²/λ²) together with its regime classification.
#[derive(Clone, Copy, Debug)]
pub struct Zeta {
    value: Complex64,
    regime: Regime,
    ratio: f64,
}

impl Zeta {
    /// Build from the frequency ratio ω/λ (requires λ > 0).
    pub fn from_ratio(omega_over_lambda: f64) -> Result<Self> {
        if !omega_over_lambda.is_finite() || omega_over_lambda < 0.0 {
            return Err(CkError::RejectedParams(format!(
                "omega/lambda must be finite and non-negative, got {omega_over_lambda}"
            )));
        }
        let z2 = 1.0 - omega_over_lambda * omega_over_lambda;
        let (value, regime) = if z2.abs() < CRITICAL_THRESHOLD {
            (Complex64::new(0.0, 0.0), Regime::Critical)
        } else if z2 > 0.0 {
            (Complex64::new(z2.sqrt(), 0.0), Regime::Overdamped)
        } else {
            (Complex64::new(0.0, (-z2).sqrt()), Regime::Underdamped)
        };
        Ok(Zeta {
            value,
            regime,
            ratio: omega_over_lambda,
        })
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    fn is_critical(&self) -> bool {
        self.regime == Regime::Critical
    }

    /// Raw basis Γ(τ). In the critical regime this is the regularized limit
    /// (1, τ, τ²) of (cosh², sinh·cosh/ζ, sinh²/ζ²); coefficient vectors
    /// built from the same `Zeta` drop the matching 1/ζ powers.
    pub fn gamma(&self, tau: f64) -> GammaVector {
        if self.is_critical() {
            return GammaVector::real(1.0, tau, tau * tau);
        }
        let z = self.value * tau;
        let (ch, sh) = (z.cosh(), z.sinh());
        GammaVector {
            g1: ch * ch,
            g2: sh * ch,
            g3: sh * sh,
        }
    }

    /// e^{−2τ}Γ(τ), assembled overflow-safe; valid for any τ ≥ 0.
    pub fn gamma_decayed(&self, tau: f64) -> GammaVector {
        if self.is_critical() {
            let d = (-2.0 * tau).exp();
            return GammaVector::real(d, d * tau, d * tau * tau);
        }
        let a = ((self.value - 1.0) * tau).exp();
        let b = (-(self.value + 1.0) * tau).exp();
        let ch = (a + b) * 0.5; // e^{−τ} cosh(ζτ)
        let sh = (a - b) * 0.5; // e^{−τ} sinh(ζτ)
        GammaVector {
            g1: ch * ch,
            g2: sh * ch,
            g3: sh * sh,
        }
    }

    /// e^{+2τ}Γ(τ) for canonical-momentum moments; capped at τ ≤ 20 to keep
    /// e^{(1+ζ)τ} factors representable.
    pub fn gamma_grown(&self, tau: f64) -> Result<GammaVector> {
        if tau > TAU_GROWN_MAX {
            return Err(CkError::Domain(format!(
                "tau = {tau} exceeds the e^{{+2tau}} evaluation cap {TAU_GROWN_MAX}"
            )));
        }
        if self.is_critical() {
            let g = (2.0 * tau).exp();
            return Ok(GammaVector::real(g, g * tau, g * tau * tau));
        }
        let a = ((self.value + 1.0) * tau).exp();
        let b = ((1.0 - self.value) * tau).exp();
        let ch = (a + b) * 0.5; // e^{+τ} cosh(ζτ)
        let sh = (a - b) * 0.5; // e^{+τ} sinh(ζτ)
        Ok(GammaVector {
            g1: ch * ch,
            g2: sh * ch,
            g3: sh * sh,
        })
    }

    /// (e^{−τ}cosh(ζτ), e^{−τ}sinh(ζτ)/ζ), regular in every regime.
    pub fn decayed_cosh_sinh_over_zeta(&self, tau: f64) -> (Complex64, Complex64) {
        if self.is_critical() {
            let d = (-tau).exp();
            return (Complex64::new(d, 0.0), Complex64::new(d * tau, 0.0));
        }
        let a = ((self.value - 1.0) * tau).exp();
        let b = (-(self.value + 1.0) * tau).exp();
        ((a + b) * 0.5, (a - b) * 0.5 / self.value)
    }

    /// (e^{+τ}cosh(ζτ), e^{+τ}sinh(ζτ)/ζ), regular in every regime.
    pub fn grown_cosh_sinh_over_zeta(&self, tau: f64) -> (Complex64, Complex64) {
        if self.is_critical() {
            let g = tau.exp();
            return (Complex64::new(g, 0.0), Complex64::new(g * tau, 0.0));
        }
        let a = ((self.value + 1.0) * tau).exp();
        let b = ((1.0 - self.value) * tau).exp();
        ((a + b) * 0.5, (a - b) * 0.5 / self.value)
    }
}

/// Time basis 3-vector; see [`Zeta::gamma`] for the critical-regime meaning.
#[derive(Clone, Copy, Debug)]
pub struct GammaVector {
    pub g1: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
}

impl GammaVector {
    fn real(g1: f64, g2: f64, g3: f64) -> Self {
        GammaVector {
            g1: Complex64::new(g1, 0.0),
            g2: Complex64::new(g2, 0.0),
            g3: Complex64::new(g3, 0.0),
        }
    }

    /// Γ(0) = (1, 0, 0) in every regime.
    pub fn at_zero() -> Self {
        GammaVector::real(1.0, 0.0, 0.0)
    }

    /// Undamped basis (cos²(ωt), sin(ωt)cos(ωt), sin²(ωt)) used when λ = 0.
    pub fn undamped(phase: f64) -> Self {
        let (s, c) = phase.sin_cos();
        GammaVector::real(c * c, s * c, s * s)
    }

    pub fn sub(&self, other: &GammaVector) -> GammaVector {
        GammaVector {
            g1: self.g1 - other.g1,
            g2: self.g2 - other.g2,
            g3: self.g3 - other.g3,
        }
    }
}

/// Dimensionless coefficient 3-vector contracted against Γ(τ).
#[derive(Clone, Copy, Debug)]
pub struct CoefficientVector {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
}

impl CoefficientVector {
    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64) -> Self {
        CoefficientVector { c1, c2, c3 }
    }

    fn real(c1: f64, c2: f64, c3: f64) -> Self {
        CoefficientVector {
            c1: Complex64::new(c1, 0.0),
            c2: Complex64::new(c2, 0.0),
            c3: Complex64::new(c3, 0.0),
        }
    }

    /// self + s·other
    pub fn add_scaled(&self, other: &CoefficientVector, s: f64) -> CoefficientVector {
        CoefficientVector {
            c1: self.c1 + s * other.c1,
            c2: self.c2 + s * other.c2,
            c3: self.c3 + s * other.c3,
        }
    }

    pub fn scale(&self, s: f64) -> CoefficientVector {
        CoefficientVector {
            c1: s * self.c1,
            c2: s * self.c2,
            c3: s * self.c3,
        }
    }

    /// Contraction with Γ(0) = (1, 0, 0); used for asymptotes.
    pub fn at_gamma_zero(&self) -> f64 {
        self.c1.re
    }

    /// Re(c·Γ) after asserting the imaginary residue is below
    /// [`REALITY_TOL`]. Both operands must derive from the same `Zeta`.
    pub fn contract(&self, g: &GammaVector) -> Result<f64> {
        let v = self.c1 * g.g1 + self.c2 * g.g2 + self.c3 * g.g3;
        let residual = v.im.abs();
        if residual > REALITY_TOL * v.re.abs().max(1.0) {
            return Err(CkError::ComplexLeak {
                residual,
                context: "coefficient-vector contraction",
            });
        }
        Ok(v.re)
    }
}

fn inv(z: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) / z
}

/// α_cl: classical kinetic energy, K_cl(τ)/K₀ = e^{−2τ} α_cl·Γ(τ).
pub fn alpha_cl(epsilon: f64, zeta: &Zeta) -> CoefficientVector {
    let r = zeta.ratio();
    let root = (epsilon - epsilon * epsilon).max(0.0).sqrt();
    let n = 1.0 - epsilon;
    let c1 = 1.0;
    let c2 = -2.0 * (r * root + n) / n;
    let c3 = (r * r * epsilon + 2.0 * r * root + n) / n;
    apply_zeta_powers(c1, c2, c3, zeta)
}

/// β: quantum-fluctuation correction, (m₀/2)⟨V²⟩/K₀ = e^{−2τ}(α_cl + ϑβ)·Γ.
pub fn beta_fluct(epsilon: f64, epsilon_delta: f64, zeta: &Zeta) -> CoefficientVector {
    let r = zeta.ratio();
    let n = 1.0 - epsilon;
    let c1 = (1.0 - epsilon_delta) / n;
    let c2 = -2.0 * (1.0 - epsilon_delta) / n;
    let c3 = (r * r * epsilon_delta + (1.0 - epsilon_delta)) / n;
    apply_zeta_powers(c1, c2, c3, zeta)
}

/// Position-variance basis: ⟨(ΔX)²⟩/Δ²ₓ₀ = e^{−2τ} d·Γ.
pub fn delta_x_vector(epsilon_delta: f64, zeta: &Zeta) -> CoefficientVector {
    let r = zeta.ratio();
    let c3 = 1.0 + r * r * (1.0 - epsilon_delta) / epsilon_delta;
    apply_zeta_powers(1.0, 2.0, c3, zeta)
}

/// Attach 1/ζ to the second and 1/ζ² to the third component; critical
/// regime keeps the bare numerators (the powers moved into the basis).
fn apply_zeta_powers(c1: f64, c2: f64, c3: f64, zeta: &Zeta) -> CoefficientVector {
    if zeta.is_critical() {
        return CoefficientVector::real(c1, c2, c3);
    }
    let z = zeta.value();
    CoefficientVector::new(
        Complex64::new(c1, 0.0),
        c2 * inv(z),
        c3 * inv(z * z),
    )
}

/// Antiderivative vector for Alicki's work: with γ = α_cl + ϑβ and
/// K_q/K₀ = e^{−2τ} γ·Γ, the vector `a` returned here satisfies
/// d/dτ [e^{−2τ} a·Γ(τ)] = −4 e^{−2τ} γ·Γ(τ), so that
/// W_ak(τ)/K₀ = e^{−2τ} a·Γ(τ) − a·Γ(0).
pub fn alicki_antiderivative(gamma_coeffs: &CoefficientVector, zeta: &Zeta) -> CoefficientVector {
    if zeta.is_critical() {
        // e^{−2τ}(c1 + c2 τ + c3 τ²) integrates in the same polynomial basis.
        let (c1, c2, c3) = (gamma_coeffs.c1, gamma_coeffs.c2, gamma_coeffs.c3);
        return CoefficientVector::new(2.0 * c1 + c2 + c3, 2.0 * (c2 + c3), 2.0 * c3);
    }
    let z = zeta.value();
    let d = z * z - 1.0; // = −ω²/λ², nonzero for ω > 0
    let (g1, g2, g3) = (gamma_coeffs.c1, gamma_coeffs.c2, gamma_coeffs.c3);
    let s = -2.0 * (z * g2 + g1 + g3) / d;
    let c2 = -2.0 * (z * (g1 + g3) + g2) / d;
    let c1 = s * 0.5 + (g1 - g3);
    let c3 = s * 0.5 - (g1 - g3);
    CoefficientVector::new(c1, c2, c3)
}

/// α_a of the Alicki closed form, built from the a₁–a₇ constants.
pub fn alpha_alicki(epsilon: f64, zeta: &Zeta) -> CoefficientVector {
    alicki_antiderivative(&alpha_cl(epsilon, zeta), zeta)
}

/// β_a of the Alicki closed form.
pub fn beta_alicki(epsilon: f64, epsilon_delta: f64, zeta: &Zeta) -> CoefficientVector {
    alicki_antiderivative(&beta_fluct(epsilon, epsilon_delta, zeta), zeta)
}

/// α* of the Liouvillian ensemble: ⟨v(τ)⟩² = e^{−2τ} α*·Γ(τ) (physical units).
pub fn alpha_liouville(
    center_x: f64,
    center_p: f64,
    k0: f64,
    lambda: f64,
    m0: f64,
    zeta: &Zeta,
) -> CoefficientVector {
    let m2 = m0 * m0;
    let kx = k0 * center_x / lambda;
    let c1 = center_p * center_p / m2;
    let c2 = -2.0 * (center_p * center_p + kx * center_p) / m2;
    let c3 = (center_p + kx) * (center_p + kx) / m2;
    apply_zeta_powers(c1, c2, c3, zeta)
}

/// β* of the Liouvillian ensemble: σ_v²(τ) = e^{−2τ} β*·Γ(τ) (physical units).
pub fn beta_liouville(
    sigma_x: f64,
    sigma_p: f64,
    k0: f64,
    lambda: f64,
    m0: f64,
    zeta: &Zeta,
) -> CoefficientVector {
    let m2 = m0 * m0;
    let sp2 = sigma_p * sigma_p;
    let sx2 = sigma_x * sigma_x;
    let c1 = sp2 / m2;
    let c2 = -2.0 * sp2 / m2;
    let c3 = (sp2 + k0 * k0 * sx2 / (lambda * lambda)) / m2;
    apply_zeta_powers(c1, c2, c3, zeta)
}

/// α_cl specialization for λ = 0, contracted against [`GammaVector::undamped`].
pub fn alpha_cl_undamped(epsilon: f64) -> CoefficientVector {
    let n = 1.0 - epsilon;
    let root = (epsilon - epsilon * epsilon).max(0.0).sqrt();
    CoefficientVector::real(1.0, -2.0 * root / n, epsilon / n)
}

/// β specialization for λ = 0.
pub fn beta_fluct_undamped(epsilon: f64, epsilon_delta: f64) -> CoefficientVector {
    let n = 1.0 - epsilon;
    CoefficientVector::real((1.0 - epsilon_delta) / n, 0.0, epsilon_delta / n)
}

/// Liouvillian α* for λ = 0 (basis cos², sin·cos, sin²).
pub fn alpha_liouville_undamped(
    center_x: f64,
    center_p: f64,
    omega: f64,
    m0: f64,
) -> CoefficientVector {
    let m2 = m0 * m0;
    let q = m0 * omega * center_x;
    CoefficientVector::real(
        center_p * center_p / m2,
        -2.0 * center_p * q / m2,
        q * q / m2,
    )
}

/// Liouvillian β* for λ = 0.
pub fn beta_liouville_undamped(sigma_x: f64, sigma_p: f64, omega: f64, m0: f64) -> CoefficientVector {
    let m2 = m0 * m0;
    CoefficientVector::real(
        sigma_p * sigma_p / m2,
        0.0,
        omega * omega * sigma_x * sigma_x / m2,
    )
}
