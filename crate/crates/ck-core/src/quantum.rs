//! Analytic quantum dynamics of the Gaussian state under the Caldirola-Kanai
//! Hamiltonian H = e^{−2λt}P²/2m₀ + k₀e^{2λt}X²/2.
//!
//! The Lie-algebra factorized propagator U_t = e^{ic₊J₊} e^{c₀J₀} e^{ic₋J₋}
//! (J₊ = X²/2ħ, J₋ = P²/2ħ, J₀ = i(PX+XP)/4ħ) evolves a Gaussian into a
//! Gaussian. Expectation values are evaluated on two independent routes:
//!
//! * the explicit hyperbolic displays (k₄–k₆ for ⟨X²⟩, the variance displays
//!   for ⟨(ΔX)²⟩ and ⟨(ΔP)²⟩), contracted against Γ(τ);
//! * the propagator-coefficient route through the smooth products
//!   u = e^{−c₀/2}, w₁ = e^{−c₀/2}(e^{c₀} − c₊c₋), w₂ = e^{−c₀/2}c₊,
//!   w₃ = e^{−c₀/2}c₋, which stay finite where c₋ and e^{c₀} individually
//!   blow up (zeros of u in the underdamped regime).
//!
//! ⟨P²⟩ is assembled as ⟨P⟩² + ⟨(ΔP)²⟩ from the two separately displayed
//! closed forms; the grid-propagator oracle referees that choice.

use num_complex::Complex64;

use crate::error::{CkError, Result};
use crate::kernel::{self, CoefficientVector, GammaVector, TAU_GROWN_MAX};
use crate::scenario::Scenario;

/// Coefficients of the factorized evolution operator at one instant.
#[derive(Clone, Copy, Debug)]
pub struct PropagatorCoefficients {
    /// c₊(τ) = −(k₀/λ) e^{2τ} / (ζcoth(ζτ) + 1); units mass/time.
    pub c_plus: f64,
    /// c₋(τ) = −(1/λm₀) / (ζcoth(ζτ) + 1); units time/mass.
    pub c_minus: f64,
    /// c₀(τ) = −ln(u²(τ)/u²(0)) = 2τ − 2 ln(cosh(ζτ) + sinh(ζτ)/ζ).
    pub c_zero: f64,
    /// u(τ) = e^{−τ}(cosh(ζτ) + sinh(ζτ)/ζ), with u(0) = 1, u̇(0) = 0.
    pub u: f64,
}

/// Smooth products of the propagator coefficients; regular in every regime
/// and at the zeros of u.
#[derive(Clone, Copy, Debug)]
pub(crate) struct WPrimitives {
    /// u = e^{−c₀/2}
    pub u: f64,
    /// w₁ = e^{−c₀/2}(e^{c₀} − c₊c₋) = e^{τ}(cosh(ζτ) − sinh(ζτ)/ζ)
    pub w1: f64,
    /// w₂ = e^{−c₀/2} c₊ = −(k₀/λ) e^{τ} sinh(ζτ)/ζ
    pub w2: f64,
    /// w₃ = e^{−c₀/2} c₋ = −e^{−τ} sinh(ζτ)/ζ / (λm₀)
    pub w3: f64,
}

/// Second moments of the evolved Gaussian.
#[derive(Clone, Copy, Debug)]
pub struct EvolvedGaussian {
    pub mean_x: f64,
    pub mean_p: f64,
    /// ⟨(ΔX)²⟩ = Δ²ₓₜ
    pub var_x: f64,
    /// ⟨(ΔP)²⟩
    pub var_p: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
    /// θ(τ) = ½ arctan(−ħc₋/2Δ²ₓ₀); cancels in every expectation value and
    /// is exposed for the oracle's wavefunction comparison only.
    pub phase_theta: f64,
}

fn require_quantum(scn: &Scenario) -> Result<()> {
    if !scn.is_quantum() {
        return Err(CkError::RejectedParams(
            "operation requires a quantum scenario (theta > 0)".into(),
        ));
    }
    Ok(())
}

fn check_tau_cap(tau: f64) -> Result<()> {
    if tau > TAU_GROWN_MAX {
        return Err(CkError::Domain(format!(
            "tau = {tau} exceeds the raw-moment evaluation cap {TAU_GROWN_MAX}"
        )));
    }
    Ok(())
}

pub(crate) fn w_primitives(scn: &Scenario, t: f64) -> Result<WPrimitives> {
    let p = scn.phys();
    if scn.is_undamped() {
        let phase = scn.phase(t);
        let (s, c) = phase.sin_cos();
        return Ok(WPrimitives {
            u: c,
            w1: c,
            w2: -p.m0 * p.omega * s,
            w3: -s / (p.m0 * p.omega),
        });
    }
    let tau = scn.tau(t);
    check_tau_cap(tau)?;
    let zeta = scn.zeta()?;
    let (dch, dsh) = zeta.decayed_cosh_sinh_over_zeta(tau); // e^{−τ}(cosh, sinh/ζ)
    let (gch, gsh) = zeta.grown_cosh_sinh_over_zeta(tau); // e^{+τ}(cosh, sinh/ζ)
    let reality = |z: Complex64, context: &'static str| -> Result<f64> {
        if z.im.abs() > kernel::REALITY_TOL * z.re.abs().max(1.0) {
            return Err(CkError::ComplexLeak {
                residual: z.im.abs(),
                context,
            });
        }
        Ok(z.re)
    };
    Ok(WPrimitives {
        u: reality(dch + dsh, "propagator u")?,
        w1: reality(gch - gsh, "propagator w1")?,
        w2: -(p.k0 / p.lambda) * reality(gsh, "propagator w2")?,
        w3: -reality(dsh, "propagator w3")? / (p.lambda * p.m0),
    })
}

/// Propagator coefficients c₊, c₋, c₀ and the classical auxiliary u(τ).
///
/// c₀ is −ln(u²); in the underdamped regime u crosses zero at isolated
/// times, where c₀ diverges (only e^{−c₀}-weighted combinations are
/// physical there — see [`WPrimitives`]).
pub fn propagator_coefficients(scn: &Scenario, t: f64) -> Result<PropagatorCoefficients> {
    require_quantum(scn)?;
    let w = w_primitives(scn, t)?;
    if w.u.abs() < 1e-300 {
        return Err(CkError::Domain(
            "c0 and c± are singular at a zero of u; evaluate the smooth products instead".into(),
        ));
    }
    if !scn.is_undamped() && scn.zeta()?.regime() == kernel::Regime::Overdamped && w.u <= 0.0 {
        // cosh(ζτ) + sinh(ζτ)/ζ > 0 for all τ ≥ 0 when ζ is real.
        return Err(CkError::Domain(
            "overdamped u(tau) must stay positive".into(),
        ));
    }
    Ok(PropagatorCoefficients {
        c_plus: w.w2 / w.u,
        c_minus: w.w3 / w.u,
        c_zero: -(w.u * w.u).ln(),
        u: w.u,
    })
}

impl EvolvedGaussian {
    /// Δₓₜ = √⟨(ΔX)²⟩.
    pub fn delta_x(&self) -> f64 {
        self.var_x.sqrt()
    }
}

/// k₄–k₆ coefficient vector of the ⟨X²⟩ display.
fn x2_coefficients(scn: &Scenario, zeta: &kernel::Zeta) -> CoefficientVector {
    let p = scn.phys();
    let i = scn.init();
    let dx2 = i.delta_x0 * i.delta_x0;
    let dp2 = i.delta_p0 * i.delta_p0;
    let lm = p.lambda * p.m0;
    let k4 = i.x0 * i.x0 + dx2;
    let k5 = 2.0 * i.x0 * i.x0 + 2.0 * i.x0 * i.p0 / lm + 2.0 * dx2;
    let k6 = (i.p0 / lm + i.x0).powi(2) + dx2 + dp2 / (lm * lm);
    kernel_vec(k4, k5, k6, zeta)
}

/// Coefficient vector of the ⟨(ΔX)²⟩ display.
fn var_x_coefficients(scn: &Scenario, zeta: &kernel::Zeta) -> CoefficientVector {
    let p = scn.phys();
    let i = scn.init();
    let dx2 = i.delta_x0 * i.delta_x0;
    let dp2 = i.delta_p0 * i.delta_p0;
    let lm = p.lambda * p.m0;
    kernel_vec(dx2, 2.0 * dx2, dx2 + dp2 / (lm * lm), zeta)
}

/// Coefficient vector of the ⟨(ΔP)²⟩ display.
fn var_p_coefficients(scn: &Scenario, zeta: &kernel::Zeta) -> CoefficientVector {
    let p = scn.phys();
    let i = scn.init();
    let dx2 = i.delta_x0 * i.delta_x0;
    let dp2 = i.delta_p0 * i.delta_p0;
    kernel_vec(dp2, -2.0 * dp2, dp2 + dx2 * (p.k0 / p.lambda).powi(2), zeta)
}

fn kernel_vec(c1: f64, c2: f64, c3: f64, zeta: &kernel::Zeta) -> CoefficientVector {
    // Reuse the kernel's 1/ζ-power convention via a scaled alpha builder.
    let raw = CoefficientVector::new(
        Complex64::new(c1, 0.0),
        Complex64::new(c2, 0.0),
        Complex64::new(c3, 0.0),
    );
    match zeta.regime() {
        kernel::Regime::Critical => raw,
        _ => {
            let z = zeta.value();
            CoefficientVector::new(raw.c1, raw.c2 / z, raw.c3 / (z * z))
        }
    }
}

/// All Gaussian moments at physical time t (τ ≤ 20 for the raw canonical
/// momentum moments).
pub fn evolved_gaussian(scn: &Scenario, t: f64) -> Result<EvolvedGaussian> {
    require_quantum(scn)?;
    let i = scn.init();
    let w = w_primitives(scn, t)?;
    let dx2 = i.delta_x0 * i.delta_x0;
    let dp2 = i.delta_p0 * i.delta_p0;

    let mean_p = w.w1 * i.p0 + w.w2 * i.x0;

    let (mean_x, var_x, var_p, mean_x2) = if scn.is_undamped() {
        // λ = 0: the appendix displays do not apply; the propagator route is
        // exact and free of 1/λ factors.
        let mean_x = w.u * i.x0 - w.w3 * i.p0;
        let var_x = w.u * w.u * dx2 + w.w3 * w.w3 * dp2;
        let var_p = w.w1 * w.w1 * dp2 + w.w2 * w.w2 * dx2;
        (mean_x, var_x, var_p, var_x + mean_x * mean_x)
    } else {
        let zeta = scn.zeta()?;
        let tau = scn.tau(t);
        check_tau_cap(tau)?;
        let gd = zeta.gamma_decayed(tau);
        let gg = zeta.gamma_grown(tau)?;
        let (dch, dsh) = zeta.decayed_cosh_sinh_over_zeta(tau);
        let lm = scn.phys().lambda * scn.phys().m0;
        let mean_x_c = i.x0 * dch + (i.x0 + i.p0 / lm) * dsh;
        if mean_x_c.im.abs() > kernel::REALITY_TOL * mean_x_c.re.abs().max(1.0) {
            return Err(CkError::ComplexLeak {
                residual: mean_x_c.im.abs(),
                context: "mean position",
            });
        }
        let mean_x = mean_x_c.re;
        let var_x = var_x_coefficients(scn, &zeta).contract(&gd)?;
        let var_p = var_p_coefficients(scn, &zeta).contract(&gg)?;
        let mean_x2 = x2_coefficients(scn, &zeta).contract(&gd)?;
        (mean_x, var_x, var_p, mean_x2)
    };

    let c_minus = if w.u.abs() > 1e-300 { w.w3 / w.u } else { 0.0 };
    Ok(EvolvedGaussian {
        mean_x,
        mean_p,
        var_x,
        var_p,
        mean_x2,
        mean_p2: mean_p * mean_p + var_p,
        phase_theta: 0.5 * (-scn.phys().hbar_eff * c_minus / (2.0 * dx2)).atan(),
    })
}

/// Propagator-route moments, used to cross-check the hyperbolic displays.
pub fn evolved_gaussian_propagator_route(scn: &Scenario, t: f64) -> Result<EvolvedGaussian> {
    require_quantum(scn)?;
    let i = scn.init();
    let w = w_primitives(scn, t)?;
    let dx2 = i.delta_x0 * i.delta_x0;
    let dp2 = i.delta_p0 * i.delta_p0;
    let mean_x = w.u * i.x0 - w.w3 * i.p0;
    let mean_p = w.w1 * i.p0 + w.w2 * i.x0;
    let var_x = w.u * w.u * dx2 + w.w3 * w.w3 * dp2;
    let var_p = w.w1 * w.w1 * dp2 + w.w2 * w.w2 * dx2;
    Ok(EvolvedGaussian {
        mean_x,
        mean_p,
        var_x,
        var_p,
        mean_x2: var_x + mean_x * mean_x,
        mean_p2: var_p + mean_p * mean_p,
        phase_theta: 0.0,
    })
}

/// Dimensionless expectation values expressed through (ε, ε_Δ, ϑ, ζ, ω/λ, τ)
/// only (position entries relative to the scale in `x_scale`, momentum
/// entries relative to p₀).
#[derive(Clone, Copy, Debug)]
pub struct ScaledExpectations {
    pub x_scale: crate::classical::XScale,
    pub mean_x: f64,
    pub mean_x2: f64,
    pub var_x: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub var_p: f64,
}

/// §-scaled record; every entry equals the unscaled moment divided by its
/// scale (x₀ or x_m, p₀) — asserted by tests at 1e-10.
pub fn scaled_expectations(scn: &Scenario, t: f64) -> Result<ScaledExpectations> {
    require_quantum(scn)?;
    let eps = scn.epsilon();
    let ed = scn.epsilon_delta();
    let th = scn.theta();

    if scn.is_undamped() {
        let phase = scn.phase(t);
        let (s, c) = phase.sin_cos();
        let g = GammaVector::undamped(phase);
        let (x_scale, mean_x, var_pref) = if eps > 0.0 {
            let slope = ((1.0 - eps) / eps).sqrt();
            (
                crate::classical::XScale::X0,
                c + slope * s,
                ed * th / eps,
            )
        } else {
            (
                crate::classical::XScale::Oscillator,
                s,
                ed * th / (1.0 - eps),
            )
        };
        // var_x / scale² = pref · (cos² + (1−ε_Δ)/ε_Δ · sin²)
        let var_x = var_pref * (c * c + (1.0 - ed) / ed * s * s);
        let mean_p = c - (eps / (1.0 - eps)).sqrt() * s;
        let beta0 = kernel::beta_fluct_undamped(eps, ed);
        let var_p = th * beta0.contract(&g)?;
        let alpha0 = kernel::alpha_cl_undamped(eps);
        let mean_p2 = alpha0.add_scaled(&beta0, th).contract(&g)?;
        return Ok(ScaledExpectations {
            x_scale,
            mean_x,
            mean_x2: mean_x * mean_x + var_x,
            var_x,
            mean_p,
            mean_p2,
            var_p,
        });
    }

    let zeta = scn.zeta()?;
    let tau = scn.tau(t);
    check_tau_cap(tau)?;
    let r = scn.dimless().omega_over_lambda;
    let (dch, dsh) = zeta.decayed_cosh_sinh_over_zeta(tau);
    let (gch, gsh) = zeta.grown_cosh_sinh_over_zeta(tau);
    let gd = zeta.gamma_decayed(tau);
    let gg = zeta.gamma_grown(tau)?;

    let (x_scale, mean_x_c, var_pref) = if eps > 0.0 {
        let slope = 1.0 + r * ((1.0 - eps) / eps).sqrt();
        (
            crate::classical::XScale::X0,
            dch + slope * dsh,
            ed * th / eps,
        )
    } else {
        // x_m = p₀/(m₀λ); Δ²ₓ₀/x_m² = ε_Δ ϑ λ²/((1−ε) ω²)
        (
            crate::classical::XScale::Xm,
            dsh,
            ed * th / ((1.0 - eps) * r * r),
        )
    };
    let reality = |z: Complex64, context: &'static str| -> Result<f64> {
        if z.im.abs() > kernel::REALITY_TOL * z.re.abs().max(1.0) {
            return Err(CkError::ComplexLeak {
                residual: z.im.abs(),
                context,
            });
        }
        Ok(z.re)
    };
    let mean_x = reality(mean_x_c, "scaled mean position")?;
    let var_x = var_pref * kernel::delta_x_vector(ed, &zeta).contract(&gd)?;
    let mean_p = reality(
        gch - (1.0 + r * (eps / (1.0 - eps)).sqrt()) * gsh,
        "scaled mean momentum",
    )?;
    let beta = kernel::beta_fluct(eps, ed, &zeta);
    let var_p = th * beta.contract(&gg)?;
    let alpha = kernel::alpha_cl(eps, &zeta);
    let mean_p2 = alpha.add_scaled(&beta, th).contract(&gg)?;
    Ok(ScaledExpectations {
        x_scale,
        mean_x,
        mean_x2: mean_x * mean_x + var_x,
        var_x,
        mean_p,
        mean_p2,
        var_p,
    })
}

/// Evolved wavefunction ψ(x, t) on the given abscissas; exposed for the
/// grid-propagator comparison.
pub fn evolved_wavefunction(scn: &Scenario, t: f64, xs: &[f64]) -> Result<Vec<Complex64>> {
    require_quantum(scn)?;
    let coeffs = propagator_coefficients(scn, t)?;
    let i = scn.init();
    let hbar = scn.phys().hbar_eff;
    let dx2 = i.delta_x0 * i.delta_x0;
    let ec0 = (-coeffs.c_zero).exp(); // e^{−c₀} = u²
    let var_t = ec0 * dx2 * (1.0 + (hbar * coeffs.c_minus).powi(2) / (4.0 * dx2 * dx2));
    let amp = (2.0 * std::f64::consts::PI * var_t).powf(-0.25);
    let center = coeffs.u * (i.x0 - coeffs.c_minus * i.p0);
    let denom = ec0 * Complex64::new(4.0 * dx2, -2.0 * hbar * coeffs.c_minus);
    let phase_const = Complex64::new(0.0, 1.0)
        * (coeffs.c_minus * i.p0 * i.p0 / (2.0 * hbar) - coeffs.phase_theta(hbar, dx2));
    let kx = Complex64::new(0.0, i.p0 / (coeffs.u * hbar));
    let kx2 = Complex64::new(0.0, coeffs.c_plus / (2.0 * hbar));
    Ok(xs
        .iter()
        .map(|&x| {
            let d = Complex64::new(x - center, 0.0);
            amp * (-(d * d) / denom + phase_const + kx * x + kx2 * x * x).exp()
        })
        .collect())
}

impl PropagatorCoefficients {
    fn phase_theta(&self, hbar: f64, dx2: f64) -> f64 {
        0.5 * (-hbar * self.c_minus / (2.0 * dx2)).atan()
    }
}
