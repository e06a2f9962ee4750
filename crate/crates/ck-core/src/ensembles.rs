//! Statistical states on both sides of the quantum-classical divide:
//!
//! * Liouvillian ensembles — a classical Gaussian phase-space cloud (and its
//!   symmetric two-center mixture) evolved trajectory-wise, with closed-form
//!   velocity moments that reproduce the quantum Gaussian results under the
//!   identifications K₀* = K₀, ε* = ε, ε_Δ* = ε_Δ;
//! * the ρ^μ family interpolating a coherent superposition of two symmetric
//!   Gaussians (μ = 0) and their incoherent mixture (μ → ∞), with moments
//!   from the direct traces and work from the ϑ′-rescaled closed form.

use crate::energetics::{self, WorkSplit};
use crate::error::{CkError, Result};
use crate::kernel;
use crate::quantum;
use crate::scenario::Scenario;

/// Classical Gaussian phase-space distribution; `mixed` selects the
/// symmetric two-center mixture with centers ±(x₀*, p₀*). No ħ constraint
/// ties the spreads — these uncertainties are subjective.
#[derive(Clone, Copy, Debug)]
pub struct LiouvilleGaussian {
    pub center_x: f64,
    pub center_p: f64,
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub mixed: bool,
}

impl LiouvilleGaussian {
    pub fn new(center_x: f64, center_p: f64, sigma_x: f64, sigma_p: f64, mixed: bool) -> Result<Self> {
        if !(sigma_x > 0.0 && sigma_p > 0.0) {
            return Err(CkError::RejectedParams(format!(
                "ensemble spreads must be positive, got sigma_x = {sigma_x}, sigma_p = {sigma_p}"
            )));
        }
        Ok(LiouvilleGaussian {
            center_x,
            center_p,
            sigma_x,
            sigma_p,
            mixed,
        })
    }

    /// Ensemble whose spreads equal the quantum uncertainties of the
    /// scenario (σ = Δ) and whose center is the quantum mean.
    pub fn matched(scn: &Scenario, mixed: bool) -> Result<Self> {
        if !scn.is_quantum() {
            return Err(CkError::RejectedParams(
                "matched ensemble needs a quantum scenario (theta > 0)".into(),
            ));
        }
        let i = scn.init();
        LiouvilleGaussian::new(i.x0, i.p0, i.delta_x0, i.delta_p0, mixed)
    }
}

/// Velocity moments of a Liouvillian ensemble at one instant.
#[derive(Clone, Copy, Debug)]
pub struct VelocityMoments {
    /// ⟨v⟩
    pub mean: f64,
    /// ⟨v⟩²
    pub mean_sq: f64,
    /// ⟨v²⟩
    pub second: f64,
    /// σ_v² = ⟨v²⟩ − ⟨v⟩²
    pub variance: f64,
}

/// Closed-form moments in physical units. The mixture has ⟨v⟩ = 0 and the
/// same ⟨v²⟩ as the single-center ensemble.
pub fn liouville_moments(ens: &LiouvilleGaussian, scn: &Scenario, t: f64) -> Result<VelocityMoments> {
    let p = scn.phys();
    let (mean, mean_sq, variance) = if scn.is_undamped() {
        let phase = scn.phase(t);
        let g = kernel::GammaVector::undamped(phase);
        let alpha = kernel::alpha_liouville_undamped(ens.center_x, ens.center_p, p.omega, p.m0);
        let beta = kernel::beta_liouville_undamped(ens.sigma_x, ens.sigma_p, p.omega, p.m0);
        let (s, c) = phase.sin_cos();
        let mean = ens.center_p / p.m0 * c - p.omega * ens.center_x * s;
        (mean, alpha.contract(&g)?, beta.contract(&g)?)
    } else {
        let zeta = scn.zeta()?;
        let tau = scn.tau(t);
        let gd = zeta.gamma_decayed(tau);
        let alpha =
            kernel::alpha_liouville(ens.center_x, ens.center_p, p.k0, p.lambda, p.m0, &zeta);
        let beta = kernel::beta_liouville(ens.sigma_x, ens.sigma_p, p.k0, p.lambda, p.m0, &zeta);
        let (dch, dsh) = zeta.decayed_cosh_sinh_over_zeta(tau);
        let mean_c =
            ens.center_p / p.m0 * dch - (ens.center_p / p.m0 + p.k0 * ens.center_x / (p.m0 * p.lambda)) * dsh;
        if mean_c.im.abs() > kernel::REALITY_TOL * mean_c.re.abs().max(1.0) {
            return Err(CkError::ComplexLeak {
                residual: mean_c.im.abs(),
                context: "ensemble mean velocity",
            });
        }
        (mean_c.re, alpha.contract(&gd)?, beta.contract(&gd)?)
    };
    if ens.mixed {
        Ok(VelocityMoments {
            mean: 0.0,
            mean_sq: 0.0,
            second: mean_sq + variance,
            variance: mean_sq + variance,
        })
    } else {
        Ok(VelocityMoments {
            mean,
            mean_sq,
            second: mean_sq + variance,
            variance,
        })
    }
}

/// Dimensionless moments (m₀/2)·{⟨v⟩², ⟨v²⟩, σ_v²}/K₀* via the rescaled
/// α_gcl/β_gcl vectors; functionally identical to the quantum record. The
/// `mean` entry is ⟨v⟩ in units of p₀/m₀.
pub fn liouville_moments_scaled(scn: &Scenario, mixed: bool, t: f64) -> Result<VelocityMoments> {
    let eps = scn.epsilon();
    let ed = scn.epsilon_delta();
    let th = scn.theta();
    let r = scn.dimless().omega_over_lambda;
    let (alpha, beta, g, mean) = if scn.is_undamped() {
        let phase = scn.phase(t);
        let (s, c) = phase.sin_cos();
        (
            kernel::alpha_cl_undamped(eps),
            kernel::beta_fluct_undamped(eps, ed),
            kernel::GammaVector::undamped(phase),
            c - (eps / (1.0 - eps)).sqrt() * s,
        )
    } else {
        let zeta = scn.zeta()?;
        let tau = scn.tau(t);
        let (dch, dsh) = zeta.decayed_cosh_sinh_over_zeta(tau);
        let mean = (dch - (1.0 + r * (eps / (1.0 - eps)).sqrt()) * dsh).re;
        (
            kernel::alpha_cl(eps, &zeta),
            kernel::beta_fluct(eps, ed, &zeta),
            zeta.gamma_decayed(tau),
            mean,
        )
    };
    let mean_sq = alpha.contract(&g)?;
    let variance = th * beta.contract(&g)?;
    if mixed {
        Ok(VelocityMoments {
            mean: 0.0,
            mean_sq: 0.0,
            second: mean_sq + variance,
            variance: mean_sq + variance,
        })
    } else {
        Ok(VelocityMoments {
            mean,
            mean_sq,
            second: mean_sq + variance,
            variance,
        })
    }
}

/// Per-τ deviations of the three dimensionless velocity moments between the
/// quantum Gaussian and the matched Liouville ensemble.
#[derive(Clone, Debug)]
pub struct CorrespondenceReport {
    pub max_deviation: f64,
    /// (axis value, [dev ⟨v²⟩, dev ⟨v⟩², dev σ_v²])
    pub rows: Vec<(f64, [f64; 3])>,
}

/// Check the quantum ↔ classical-statistical identities at the given times,
/// failing with `CorrespondenceViolation` beyond `tol` (relative to
/// max(1, |quantum value|)).
pub fn correspondence_check(scn: &Scenario, ts: &[f64], tol: f64) -> Result<CorrespondenceReport> {
    if !scn.is_quantum() {
        return Err(CkError::RejectedParams(
            "correspondence check needs a quantum scenario".into(),
        ));
    }
    let ens = LiouvilleGaussian::matched(scn, false)?;
    let m0 = scn.phys().m0;
    let k0 = scn.k_ref();
    let mut rows = Vec::with_capacity(ts.len());
    let mut max_dev = 0.0f64;
    for &t in ts {
        let lm = liouville_moments(&ens, scn, t)?;
        // Quantum side: (m₀/2)⟨V²⟩/K₀ and its split.
        let k_q = energetics::kinetic_energy(scn, t)?;
        let split_g = {
            let tau_gamma = liouville_moments_scaled(scn, false, t)?;
            (tau_gamma.mean_sq, tau_gamma.variance)
        };
        let q_mean_sq = split_g.0;
        let q_var = split_g.1;
        let c_second = 0.5 * m0 * lm.second / k0;
        let c_mean_sq = 0.5 * m0 * lm.mean_sq / k0;
        let c_var = 0.5 * m0 * lm.variance / k0;
        let devs = [
            (c_second - k_q).abs() / k_q.abs().max(1.0),
            (c_mean_sq - q_mean_sq).abs() / q_mean_sq.abs().max(1.0),
            (c_var - q_var).abs() / q_var.abs().max(1.0),
        ];
        for d in devs {
            max_dev = max_dev.max(d);
        }
        rows.push((t, devs));
    }
    if max_dev > tol {
        return Err(CkError::CorrespondenceViolation(format!(
            "max relative deviation {max_dev:.3e} exceeds {tol:.1e}"
        )));
    }
    Ok(CorrespondenceReport {
        max_deviation: max_dev,
        rows,
    })
}

/// The ρ^μ family built on the scenario's symmetric Gaussian pair ±(x₀, p₀).
#[derive(Clone, Copy, Debug)]
pub struct MuState {
    pub mu: f64,
}

impl MuState {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu >= 0.0) {
            return Err(CkError::RejectedParams(format!(
                "mu must be non-negative, got {mu}"
            )));
        }
        Ok(MuState { mu })
    }

    /// Overlap exponent R = x₀²/(2Δ²ₓ₀) + 2p₀²Δ²ₓ₀/ħ², so that
    /// ⟨ψ|ψ⁻⟩ = e^{−R}.
    pub fn overlap_exponent(scn: &Scenario) -> Result<f64> {
        if !scn.is_quantum() {
            return Err(CkError::RejectedParams(
                "mu states need a quantum scenario".into(),
            ));
        }
        let i = scn.init();
        let hb = scn.phys().hbar_eff;
        let dx2 = i.delta_x0 * i.delta_x0;
        Ok(i.x0 * i.x0 / (2.0 * dx2) + 2.0 * i.p0 * i.p0 * dx2 / (hb * hb))
    }

    /// N_μ = 2(1 + e^{−(μ+R)}) ∈ (2, 4].
    pub fn norm(&self, scn: &Scenario) -> Result<f64> {
        Ok(2.0 * (1.0 + (-(self.mu + Self::overlap_exponent(scn)?)).exp()))
    }
}

/// Moments of ρ^μ(τ); ⟨X⟩ and ⟨P⟩ vanish identically by symmetry.
#[derive(Clone, Copy, Debug)]
pub struct MuMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
}

/// Direct-trace route: diagonal Gaussian terms plus the e^{−μ} off-diagonal
/// overlap terms, assembled from the smooth propagator products.
pub fn mu_state_moments(scn: &Scenario, state: &MuState, t: f64) -> Result<MuMoments> {
    let g = quantum::evolved_gaussian(scn, t)?;
    let i = scn.init();
    let hb = scn.phys().hbar_eff;
    let dx2 = i.delta_x0 * i.delta_x0;
    let w = quantum::w_primitives(scn, t)?;
    let r = MuState::overlap_exponent(scn)?;
    let n_mu = 2.0 * (1.0 + (-(state.mu + r)).exp());
    let off_weight = (-(state.mu + r)).exp();

    // e^{−c₀/2}·Y and e^{−c₀/2}·Z of the off-diagonal traces.
    let u_y = w.w3 * i.x0 * hb / (2.0 * dx2) + 2.0 * w.u * i.p0 * dx2 / hb;
    let u_z = w.w1 * hb * i.x0 / (2.0 * dx2) - 2.0 * w.w2 * i.p0 * dx2 / hb;

    let mean_x2 = (2.0 * (g.var_x + g.mean_x * g.mean_x)
        + 2.0 * off_weight * (g.var_x - u_y * u_y))
        / n_mu;
    let mean_p2 = (2.0 * (g.var_p + g.mean_p * g.mean_p)
        + 2.0 * off_weight * (g.var_p - u_z * u_z))
        / n_mu;
    Ok(MuMoments {
        mean_x: 0.0,
        mean_p: 0.0,
        mean_x2,
        mean_p2,
    })
}

/// (m₀/2)⟨V²⟩^μ/K₀ through the ϑ′ closed form:
/// ⟨V²⟩^μ = ⟨V²⟩ − (1/ϑ′)·⟨(ΔV)²⟩ / (1 + e^{μ + 1/(2ϑ′)}).
pub fn mu_velocity_sq_scaled(scn: &Scenario, state: &MuState, t: f64) -> Result<f64> {
    let theta_prime = scn.theta_prime()?;
    let k_q = energetics::kinetic_energy(scn, t)?;
    let var_part = liouville_moments_scaled(scn, false, t)?.variance; // ϑ e^{−2τ} β·Γ
    let gate = 1.0 + (state.mu + 0.5 / theta_prime).exp();
    Ok(k_q - var_part / (theta_prime * gate))
}

/// Work of the ρ^μ state. The centroid work vanishes for every μ (the mean
/// velocity is zero by symmetry), so W_q^μ = W_th^μ.
pub fn mu_work(scn: &Scenario, state: &MuState, t: f64) -> Result<WorkSplit> {
    let theta_prime = scn.theta_prime()?;
    let base = energetics::quantum_work(scn, t)?;
    let gate = 1.0 + (state.mu + 0.5 / theta_prime).exp();
    let total = base.total - base.thermal / (theta_prime * gate);
    Ok(WorkSplit {
        total,
        centroid: 0.0,
        thermal: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{DimensionlessParams, Preset, Scenario};

    fn uo_theta(theta: f64) -> Scenario {
        Scenario::new(DimensionlessParams::new(10.0, 0.0, 0.5, theta)).unwrap()
    }

    #[test]
    fn mixed_ensemble_mean_velocity_vanishes() {
        let s = Scenario::preset(Preset::UnderdampedOscillator);
        let ens = LiouvilleGaussian::matched(&s, true).unwrap();
        for i in 0..30 {
            let t = 0.1 * i as f64;
            let m = liouville_moments(&ens, &s, t).unwrap();
            assert_eq!(m.mean, 0.0);
            assert_eq!(m.mean_sq, 0.0);
            assert!((m.second - m.variance).abs() < 1e-15);
        }
    }

    #[test]
    fn mixed_second_moment_equals_unmixed() {
        let s = Scenario::preset(Preset::OverdampedOscillator);
        let plain = LiouvilleGaussian::matched(&s, false).unwrap();
        let mixed = LiouvilleGaussian::matched(&s, true).unwrap();
        for i in 0..30 {
            let t = 0.2 * i as f64;
            let a = liouville_moments(&plain, &s, t).unwrap();
            let b = liouville_moments(&mixed, &s, t).unwrap();
            assert!((a.second - b.second).abs() < 1e-14 * a.second.abs().max(1e-300));
        }
    }

    #[test]
    fn initial_second_moment_is_gaussian() {
        // ⟨v²⟩(0) = (p₀*² + σ_p²)/m₀².
        let s = Scenario::preset(Preset::UnderdampedOscillator);
        let ens = LiouvilleGaussian::matched(&s, false).unwrap();
        let m = liouville_moments(&ens, &s, 0.0).unwrap();
        let expect = (ens.center_p.powi(2) + ens.sigma_p.powi(2)) / s.phys().m0.powi(2);
        assert!((m.second - expect).abs() < 1e-13);
    }

    #[test]
    fn correspondence_holds_on_presets() {
        for preset in [Preset::UnderdampedOscillator, Preset::OverdampedOscillator] {
            let s = Scenario::preset(preset);
            let ts: Vec<f64> = (0..50).map(|i| 0.05 * i as f64).collect();
            let rep = correspondence_check(&s, &ts, 1e-10).unwrap();
            assert!(rep.max_deviation <= 1e-10);
        }
    }

    #[test]
    fn correspondence_holds_with_large_fluctuations() {
        // Exact even when quantum fluctuations are significant (ϑ = 1).
        let s = uo_theta(1.0);
        let ts: Vec<f64> = (0..40).map(|i| 0.05 * i as f64).collect();
        assert!(correspondence_check(&s, &ts, 1e-10).is_ok());
    }

    #[test]
    fn mu_norm_bounds() {
        let s = uo_theta(1.0);
        let n0 = MuState::new(0.0).unwrap().norm(&s).unwrap();
        let n50 = MuState::new(50.0).unwrap().norm(&s).unwrap();
        assert!(n0 > 2.0 && n0 <= 4.0);
        assert!((n50 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn overlap_matches_theta_prime() {
        // 2R = 1/ϑ′ (ε = 0 keeps R free of x₀ terms; check a general case too).
        for p in [
            DimensionlessParams::new(10.0, 0.0, 0.5, 1.0),
            DimensionlessParams::new(3.0, 0.4, 0.3, 0.6),
        ] {
            let s = Scenario::new(p).unwrap();
            let r = MuState::overlap_exponent(&s).unwrap();
            let tp = s.theta_prime().unwrap();
            assert!((2.0 * r - 1.0 / tp).abs() < 1e-10 * (1.0 / tp));
        }
    }

    #[test]
    fn mu_means_vanish() {
        let s = uo_theta(1.0);
        let st = MuState::new(0.7).unwrap();
        let m = mu_state_moments(&s, &st, 0.6).unwrap();
        assert_eq!(m.mean_x, 0.0);
        assert_eq!(m.mean_p, 0.0);
    }

    #[test]
    fn trace_route_equals_theta_prime_route() {
        // ⟨P²⟩^μ from the Appendix traces vs the ϑ′ closed form, through
        // the velocity map (m₀/2)⟨V²⟩^μ/K₀ = e^{−4τ}⟨P²⟩^μ/p₀².
        for p in [
            DimensionlessParams::new(10.0, 0.0, 0.5, 1.0),
            DimensionlessParams::new(0.1, 0.0, 0.5, 0.1),
            DimensionlessParams::new(2.5, 0.3, 0.6, 0.4),
        ] {
            let s = Scenario::new(p).unwrap();
            let k0 = s.k_ref();
            let m0 = s.phys().m0;
            for mu in [0.0, 0.5, 2.0, 10.0] {
                let st = MuState::new(mu).unwrap();
                for i in 0..20 {
                    let t = 0.07 * i as f64;
                    let trace = mu_state_moments(&s, &st, t).unwrap();
                    let v2_trace =
                        (-4.0 * s.tau(t)).exp() * trace.mean_p2 / (2.0 * m0 * k0);
                    let v2_formula = mu_velocity_sq_scaled(&s, &st, t).unwrap();
                    assert!(
                        (v2_trace - v2_formula).abs() < 1e-10 * v2_formula.abs().max(1.0),
                        "mu={mu} t={t}: {v2_trace} vs {v2_formula}"
                    );
                }
            }
        }
    }

    #[test]
    fn large_mu_recovers_gaussian_moments() {
        let s = uo_theta(1.0);
        let st = MuState::new(50.0).unwrap();
        for i in 0..15 {
            let t = 0.1 * i as f64;
            let m = mu_state_moments(&s, &st, t).unwrap();
            let g = crate::quantum::evolved_gaussian(&s, t).unwrap();
            let bound = (-50.0f64).exp() + 1e-12;
            assert!((m.mean_p2 - g.mean_p2).abs() <= bound * g.mean_p2.abs().max(1.0));
            assert!((m.mean_x2 - g.mean_x2).abs() <= bound * g.mean_x2.abs().max(1.0));
        }
    }

    #[test]
    fn centroid_work_is_null_for_every_mu() {
        let s = uo_theta(1.0);
        for mu in [0.0, 1.0, 50.0] {
            let st = MuState::new(mu).unwrap();
            let w = mu_work(&s, &st, 0.8).unwrap();
            assert_eq!(w.centroid, 0.0);
            assert_eq!(w.total, w.thermal);
        }
    }

    #[test]
    fn coherence_diminishes_energy_loss() {
        // |W_q^0(τ)| < |W_q^∞(τ)| for τ > 0 at ϑ = 1 (UO).
        let s = uo_theta(1.0);
        let sup = MuState::new(0.0).unwrap();
        let mix = MuState::new(50.0).unwrap();
        for i in 1..60 {
            let t = 0.05 * i as f64;
            let w0 = mu_work(&s, &sup, t).unwrap().total;
            let winf = mu_work(&s, &mix, t).unwrap().total;
            assert!(
                w0.abs() < winf.abs(),
                "t={t}: |{w0}| !< |{winf}|"
            );
        }
    }

    #[test]
    fn momentum_moment_is_nondecreasing_in_mu() {
        let s = uo_theta(0.7);
        let mus = [0.0, 0.3, 1.0, 3.0, 10.0, 30.0];
        for i in 1..12 {
            let t = 0.09 * i as f64;
            let mut prev = f64::NEG_INFINITY;
            for &mu in &mus {
                let st = MuState::new(mu).unwrap();
                let p2 = mu_state_moments(&s, &st, t).unwrap().mean_p2;
                assert!(p2 >= prev - 1e-12 * p2.abs(), "mu={mu}, t={t}");
                prev = p2;
            }
        }
    }

    #[test]
    fn mixed_quantum_work_equals_classical_statistical_work() {
        // For μ ≥ 20 the μ-state work equals the mixed-ensemble work within
        // e^{−μ} + 1e-10 (the mixture inherits the Gaussian ⟨v²⟩).
        let s = uo_theta(1.0);
        let m0 = s.phys().m0;
        let k0 = s.k_ref();
        let ens = LiouvilleGaussian::matched(&s, true).unwrap();
        for mu in [20.0, 50.0] {
            let st = MuState::new(mu).unwrap();
            for i in 1..25 {
                let t = 0.08 * i as f64;
                let wq = mu_work(&s, &st, t).unwrap().total;
                let v2_t = liouville_moments(&ens, &s, t).unwrap().second;
                let v2_0 = liouville_moments(&ens, &s, 0.0).unwrap().second;
                let wcl = 0.5 * m0 * (v2_t - v2_0) / k0;
                assert!(
                    (wq - wcl).abs() <= (-mu).exp() + 1e-10,
                    "mu={mu} t={t}: {wq} vs {wcl}"
                );
            }
        }
    }
}
