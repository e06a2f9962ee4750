//! Closed-form single-trajectory classical dynamics of the damped oscillator
//! ẍ + 2λẋ + ω²x = 0 written in the dimensionless contraction scheme:
//! K_cl(τ)/K₀ = e^{−2τ} α_cl·Γ(τ) and W_cl(τ)/K₀ = K_cl(τ)/K₀ − 1.

use crate::error::Result;
use crate::kernel::{self, GammaVector};
use crate::scenario::Scenario;

/// Which length scale a dimensionless position refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XScale {
    /// x₀ = √(2εE₀/m₀ω²); used whenever ε > 0.
    X0,
    /// x_m = p₀/(m₀λ); the natural scale for ε = 0 with damping.
    Xm,
    /// p₀/(m₀ω); the ε = 0 scale of the undamped oscillator (x_m is
    /// undefined at λ = 0).
    Oscillator,
}

impl XScale {
    pub fn label(self) -> &'static str {
        match self {
            XScale::X0 => "x0",
            XScale::Xm => "xm",
            XScale::Oscillator => "p0_over_m_omega",
        }
    }
}

/// One sampled point of the classical trajectory.
#[derive(Clone, Copy, Debug)]
pub struct ClassicalTrajectoryPoint {
    pub t: f64,
    pub tau: f64,
    pub x_scaled: f64,
    pub x_scale: XScale,
    /// Velocity ẋ.
    pub v: f64,
    /// Canonical momentum p = m₀ ẋ e^{2λt}.
    pub p: f64,
    pub k_over_k0: f64,
}

/// Dimensionless position: x/x₀ for ε > 0, x/x_m for ε = 0 (see [`XScale`]).
pub fn position_scaled(scn: &Scenario, t: f64) -> Result<(f64, XScale)> {
    let eps = scn.epsilon();
    if scn.is_undamped() {
        let phase = scn.phase(t);
        if eps > 0.0 {
            let ratio = (1.0 - eps).sqrt() / eps.sqrt();
            return Ok((phase.cos() + ratio * phase.sin(), XScale::X0));
        }
        return Ok((phase.sin(), XScale::Oscillator));
    }
    let zeta = scn.zeta()?;
    let tau = scn.tau(t);
    let (ch, sh) = zeta.decayed_cosh_sinh_over_zeta(tau); // e^{−τ}(cosh, sinh/ζ)
    if eps > 0.0 {
        let r = scn.dimless().omega_over_lambda;
        let slope = 1.0 + r * ((1.0 - eps) / eps).sqrt();
        Ok(((ch + slope * sh).re, XScale::X0))
    } else {
        Ok((sh.re, XScale::Xm))
    }
}

/// K_cl(τ)/K₀.
pub fn kinetic(scn: &Scenario, t: f64) -> Result<f64> {
    if scn.is_undamped() {
        let a = kernel::alpha_cl_undamped(scn.epsilon());
        return a.contract(&GammaVector::undamped(scn.phase(t)));
    }
    let zeta = scn.zeta()?;
    let a = kernel::alpha_cl(scn.epsilon(), &zeta);
    a.contract(&zeta.gamma_decayed(scn.tau(t)))
}

/// W_cl(τ)/K₀ = α_cl·(e^{−2τ}Γ(τ) − Γ(0)). Shares the kinetic-energy code
/// path so the work-energy identity holds to rounding.
pub fn work(scn: &Scenario, t: f64) -> Result<f64> {
    Ok(kinetic(scn, t)? - kinetic(scn, 0.0)?)
}

/// Velocity ẋ(t) in physical units.
pub fn velocity(scn: &Scenario, t: f64) -> Result<f64> {
    let i = scn.init();
    let p = scn.phys();
    let v0 = i.p0 / p.m0;
    if scn.is_undamped() {
        let phase = scn.phase(t);
        return Ok(v0 * phase.cos() - p.omega * i.x0 * phase.sin());
    }
    let zeta = scn.zeta()?;
    let tau = scn.tau(t);
    let (ch, sh) = zeta.decayed_cosh_sinh_over_zeta(tau);
    let slope = v0 + p.k0 * i.x0 / (p.m0 * p.lambda);
    Ok((v0 * ch - slope * sh).re)
}

/// Sample the trajectory over a grid of physical times.
pub fn trajectory(scn: &Scenario, ts: &[f64]) -> Result<Vec<ClassicalTrajectoryPoint>> {
    ts.iter()
        .map(|&t| {
            let (x_scaled, x_scale) = position_scaled(scn, t)?;
            let v = velocity(scn, t)?;
            let p = scn.phys().m0 * v * (2.0 * scn.tau(t)).exp();
            Ok(ClassicalTrajectoryPoint {
                t,
                tau: scn.tau(t),
                x_scaled,
                x_scale,
                v,
                p,
                k_over_k0: kinetic(scn, t)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{DimensionlessParams, Preset, Scenario};

    #[test]
    fn position_starts_at_equilibrium_for_pure_kinetic_start() {
        let s = Scenario::preset(Preset::UnderdampedOscillator);
        let (x, scale) = position_scaled(&s, 0.0).unwrap();
        assert_eq!(x, 0.0);
        assert_eq!(scale, XScale::Xm);
    }

    #[test]
    fn position_overdamped_frozen_value() {
        // ε = 0, ω/λ = 0.1, τ = 1: e^{−1} sinh(ζ)/ζ with ζ = √0.99,
        // frozen from a high-precision evaluation.
        let s = Scenario::preset(Preset::OverdampedOscillator);
        let t = 1.0; // λ = 1 so τ = t
        let (x, _) = position_scaled(&s, t).unwrap();
        assert!((x - 0.431656010969739).abs() < 1e-13);
    }

    #[test]
    fn underdamped_position_zero_crossings_follow_sine() {
        // x/x_m = e^{−τ} sin(√(ω²−λ²) t)/√(ω²/λ²−1); zeros at √(ω²−λ²) t = nπ.
        let s = Scenario::preset(Preset::UnderdampedOscillator);
        let nu = 99.0f64.sqrt();
        for n in 1..=5 {
            let t = n as f64 * std::f64::consts::PI / nu;
            let (x, _) = position_scaled(&s, t).unwrap();
            assert!(x.abs() < 1e-12, "crossing {n} missed: {x}");
        }
    }

    #[test]
    fn kinetic_normalization_and_positivity() {
        for preset in [
            Preset::UnderdampedOscillator,
            Preset::OverdampedOscillator,
            Preset::Drag,
        ] {
            let s = Scenario::preset(preset);
            assert!((kinetic(&s, 0.0).unwrap() - 1.0).abs() < 1e-14);
            for i in 0..100 {
                let t = 0.1 * i as f64;
                assert!(kinetic(&s, t).unwrap() >= -1e-12);
            }
        }
    }

    #[test]
    fn drag_kinetic_is_pure_exponential() {
        // k₀ = 0: K_cl/K₀ = e^{−4τ}; τ = 0.25 gives e^{−1}.
        let s = Scenario::preset(Preset::Drag);
        let k = kinetic(&s, 0.25).unwrap();
        assert!((k - (-1.0f64).exp()).abs() < 1e-14);
        for i in 0..60 {
            let tau = 0.2 * i as f64;
            let k = kinetic(&s, tau).unwrap();
            assert!((k - (-4.0 * tau).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn drag_work_approaches_minus_one() {
        let s = Scenario::preset(Preset::Drag);
        assert_eq!(work(&s, 0.0).unwrap(), 0.0);
        let w = work(&s, 40.0).unwrap();
        assert!((w + 1.0).abs() < 1e-12);
    }

    #[test]
    fn undamped_kinetic_is_cos_squared_with_period_pi_over_omega() {
        // λ = 0, ε = 0: K_cl/K₀ = cos²(ωt).
        let s = Scenario::preset(Preset::Harmonic);
        for i in 0..50 {
            let t = 0.17 * i as f64;
            let k = kinetic(&s, t).unwrap();
            assert!((k - s.phase(t).cos().powi(2)).abs() < 1e-12);
        }
        let period = std::f64::consts::PI / s.phys().omega;
        assert!((kinetic(&s, 1.3).unwrap() - kinetic(&s, 1.3 + period).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn work_energy_identity_exact() {
        for preset in [
            Preset::UnderdampedOscillator,
            Preset::OverdampedOscillator,
            Preset::Harmonic,
            Preset::Drag,
        ] {
            let s = Scenario::preset(preset);
            for i in 0..80 {
                let t = 0.13 * i as f64;
                let w = work(&s, t).unwrap();
                let dk = kinetic(&s, t).unwrap() - kinetic(&s, 0.0).unwrap();
                assert!((w - dk).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn undamped_energy_conservation() {
        // K_cl/K₀ + (m₀ω²x²/2)/K₀ = E₀/K₀ for λ = 0.
        let p = DimensionlessParams::new(f64::INFINITY, 0.35, 0.5, 0.0);
        let s = Scenario::new(p).unwrap();
        let e_over_k0 = 1.0 / (1.0 - s.epsilon());
        let x0 = s.init().x0;
        for i in 0..60 {
            let t = 0.11 * i as f64;
            let (xs, scale) = position_scaled(&s, t).unwrap();
            assert_eq!(scale, XScale::X0);
            let x = xs * x0;
            let pot = 0.5 * s.phys().m0 * s.phys().omega.powi(2) * x * x / s.k_ref();
            let total = kinetic(&s, t).unwrap() + pot;
            assert!((total - e_over_k0).abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_momentum_relation_holds() {
        let s = Scenario::preset(Preset::OverdampedOscillator);
        let ts: Vec<f64> = (0..20).map(|i| 0.3 * i as f64).collect();
        for pt in trajectory(&s, &ts).unwrap() {
            let expected = s.phys().m0 * pt.v * (2.0 * pt.tau).exp();
            assert!((pt.p - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }
    }
}
