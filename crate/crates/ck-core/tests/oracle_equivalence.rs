//! Cross-checks of the analytic engines against the independent numerical
//! oracles: RK4 for the classical trajectory, Crank–Nicolson for the
//! quantum moments, Monte Carlo for the Liouvillian ensembles.

use ck_core::ensembles::LiouvilleGaussian;
use ck_core::oracles::crank_nicolson::{self, GridSpec, InitialWave};
use ck_core::oracles::{monte_carlo, rk4};
use ck_core::scenario::{DimensionlessParams, Preset, Scenario};
use ck_core::{classical, ensembles, quantum};

/// |a − b| ≤ tol·max(1, |b|): relative for O(1) values, absolute in the
/// dimensionless units once a series has decayed below one.
fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn rk4_reproduces_classical_closed_forms() {
    for (ratio, eps) in [
        (0.1, 0.0),
        (1.0, 0.0),
        (10.0, 0.0),
        (0.1, 0.4),
        (10.0, 0.4),
        (0.0, 0.0), // drag
    ] {
        let scn = Scenario::new(DimensionlessParams::new(ratio, eps, 0.5, 0.0)).unwrap();
        let p = scn.phys();
        let i = scn.init();
        let taus: Vec<f64> = (0..=100).map(|k| 0.1 * k as f64).collect();
        let dt = 1e-4 / p.lambda.max(p.omega);
        let pts = rk4::sample_at(p.lambda, p.omega, i.x0, i.p0 / p.m0, &taus, dt).unwrap();
        let k_ref = scn.k_ref();
        for pt in &pts {
            let k_closed = classical::kinetic(&scn, pt.t).unwrap();
            let k_rk = 0.5 * p.m0 * pt.v * pt.v / k_ref;
            assert!(
                close(k_rk, k_closed, 1e-8),
                "ratio={ratio} eps={eps} tau={}: kinetic {k_rk} vs {k_closed}",
                pt.t
            );
            let (x_closed, scale) = classical::position_scaled(&scn, pt.t).unwrap();
            let scale_len = match scale {
                classical::XScale::X0 => i.x0,
                classical::XScale::Xm => i.p0 / (p.m0 * p.lambda),
                classical::XScale::Oscillator => i.p0 / (p.m0 * p.omega),
            };
            assert!(
                close(pt.x / scale_len, x_closed, 1e-8),
                "ratio={ratio} eps={eps} tau={}: position {} vs {x_closed}",
                pt.t,
                pt.x / scale_len
            );
        }
    }
}

/// UO preset at the documented sample times: all Gaussian moments from the
/// grid propagator match the closed forms to 1e-4 relative.
#[test]
fn crank_nicolson_matches_gaussian_moments_uo() {
    let scn = Scenario::preset(Preset::UnderdampedOscillator);
    let p = scn.phys();
    let i = scn.init();
    let grid = GridSpec {
        x_min: -0.55,
        x_max: 0.55,
        n_points: 4096,
        dt: 1e-5,
        boundary_pad: 16,
    };
    let ts = [0.05, 0.1, 0.5];
    let run = crank_nicolson::propagate(
        p.lambda,
        p.omega,
        p.m0,
        p.hbar_eff,
        InitialWave::Gaussian {
            x0: i.x0,
            p0: i.p0,
            var_x: i.delta_x0 * i.delta_x0,
        },
        &grid,
        &ts,
    )
    .unwrap();
    for obs in &run.snapshots {
        let g = quantum::evolved_gaussian(&scn, obs.t).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        assert!(rel(obs.mean_x, g.mean_x) < 1e-4, "t={}: <X>", obs.t);
        assert!(rel(obs.mean_x2, g.mean_x2) < 1e-4, "t={}: <X2>", obs.t);
        assert!(rel(obs.mean_p, g.mean_p) < 1e-4, "t={}: <P>", obs.t);
        assert!(rel(obs.mean_p2, g.mean_p2) < 1e-4, "t={}: <P2>", obs.t);
        let var_x_cn = obs.mean_x2 - obs.mean_x * obs.mean_x;
        let var_p_cn = obs.mean_p2 - obs.mean_p * obs.mean_p;
        assert!(rel(var_x_cn, g.var_x) < 1e-4, "t={}: var X", obs.t);
        assert!(rel(var_p_cn, g.var_p) < 1e-4, "t={}: var P", obs.t);
        let up_cn = var_x_cn.sqrt() * var_p_cn.sqrt();
        let up = g.delta_x() * g.var_p.sqrt();
        assert!(rel(up_cn, up) < 1e-4, "t={}: uncertainty product", obs.t);
    }
    assert!(run.norm_drift_rate < 1e-10);
}

/// The evolved analytic wavefunction agrees with the grid propagator
/// pointwise (probability density), away from zeros of u.
#[test]
fn crank_nicolson_matches_evolved_wavefunction_oo() {
    let scn = Scenario::preset(Preset::OverdampedOscillator);
    let p = scn.phys();
    let i = scn.init();
    let grid = GridSpec {
        x_min: -40.0,
        x_max: 40.0,
        n_points: 4096,
        dt: 2e-3,
        boundary_pad: 16,
    };
    let t = 1.0;
    let run = crank_nicolson::propagate(
        p.lambda,
        p.omega,
        p.m0,
        p.hbar_eff,
        InitialWave::Gaussian {
            x0: i.x0,
            p0: i.p0,
            var_x: i.delta_x0 * i.delta_x0,
        },
        &grid,
        &[t],
    )
    .unwrap();
    // The analytic wavefunction's density must be the Gaussian with the
    // closed-form mean and variance, and the grid moments must agree.
    let probes: Vec<f64> = (0..81).map(|k| -8.0 + 0.2 * k as f64).collect();
    let psi = quantum::evolved_wavefunction(&scn, t, &probes).unwrap();
    let g = quantum::evolved_gaussian(&scn, t).unwrap();
    let peak = (2.0 * std::f64::consts::PI * g.var_x).sqrt().recip();
    for (k, &x) in probes.iter().enumerate() {
        let rho = psi[k].norm_sqr();
        let expect = peak * (-(x - g.mean_x).powi(2) / (2.0 * g.var_x)).exp();
        assert!(
            (rho - expect).abs() <= 1e-8 * peak,
            "x={x}: {rho} vs {expect}"
        );
    }
    let obs = &run.snapshots[0];
    assert!((obs.mean_x - g.mean_x).abs() < 1e-5 * g.mean_x.abs().max(1.0));
    let var_cn = obs.mean_x2 - obs.mean_x * obs.mean_x;
    assert!((var_cn - g.var_x).abs() < 1e-4 * g.var_x);
}

#[test]
fn crank_nicolson_validates_superposition_norm() {
    // ∫|ψ₊ + ψ₋|² = N₀ = 2(1 + e^{−R}); grid integration to 1e-8.
    let scn = Scenario::new(DimensionlessParams::new(10.0, 0.0, 0.5, 1.0)).unwrap();
    let p = scn.phys();
    let i = scn.init();
    let grid = GridSpec {
        x_min: -1.5,
        x_max: 1.5,
        n_points: 4096,
        dt: 1e-4,
        boundary_pad: 16,
    };
    let run = crank_nicolson::propagate(
        p.lambda,
        p.omega,
        p.m0,
        p.hbar_eff,
        InitialWave::SymmetricSuperposition {
            x0: i.x0,
            p0: i.p0,
            var_x: i.delta_x0 * i.delta_x0,
        },
        &grid,
        &[0.0],
    )
    .unwrap();
    let n0 = ensembles::MuState::new(0.0)
        .unwrap()
        .norm(&scn)
        .unwrap();
    assert!(
        (run.initial_norm - n0).abs() < 1e-8 * n0,
        "grid {} vs analytic {n0}",
        run.initial_norm
    );
}

/// μ = 0 closed form vs the grid propagator: evolve the superposition and
/// compare ⟨P²⟩^0 (ϑ = 1, UO).
#[test]
fn crank_nicolson_matches_superposition_momentum_moment() {
    let scn = Scenario::new(DimensionlessParams::new(10.0, 0.0, 0.5, 1.0)).unwrap();
    let p = scn.phys();
    let i = scn.init();
    let grid = GridSpec {
        x_min: -1.5,
        x_max: 1.5,
        n_points: 4096,
        dt: 2e-6,
        boundary_pad: 16,
    };
    let ts = [0.1, 0.3];
    let run = crank_nicolson::propagate(
        p.lambda,
        p.omega,
        p.m0,
        p.hbar_eff,
        InitialWave::SymmetricSuperposition {
            x0: i.x0,
            p0: i.p0,
            var_x: i.delta_x0 * i.delta_x0,
        },
        &grid,
        &ts,
    )
    .unwrap();
    let st = ensembles::MuState::new(0.0).unwrap();
    for obs in &run.snapshots {
        let m = ensembles::mu_state_moments(&scn, &st, obs.t).unwrap();
        let rel = (obs.mean_p2 - m.mean_p2).abs() / m.mean_p2;
        assert!(rel < 1e-4, "t={}: {} vs {}", obs.t, obs.mean_p2, m.mean_p2);
        assert!(obs.mean_p.abs() < 1e-6 * m.mean_p2.sqrt());
    }
}

#[test]
fn monte_carlo_matches_liouville_moments() {
    let n = 100_000;
    for preset in [Preset::UnderdampedOscillator, Preset::OverdampedOscillator] {
        let scn = Scenario::preset(preset);
        for mixed in [false, true] {
            let ens = LiouvilleGaussian::matched(&scn, mixed).unwrap();
            let ts = [0.5, 1.0, 2.0];
            let est =
                monte_carlo::liouville_velocity_moments(&ens, &scn, &ts, n, 20_260_810).unwrap();
            for e in &est {
                let m = ensembles::liouville_moments(&ens, &scn, e.t).unwrap();
                assert!(
                    (e.v_mean - m.mean).abs() <= 5.0 * e.v_mean_se.max(1e-12),
                    "{preset:?} mixed={mixed} t={}: mean {} vs {} (se {})",
                    e.t,
                    e.v_mean,
                    m.mean,
                    e.v_mean_se
                );
                assert!(
                    (e.v2_mean - m.second).abs() <= 5.0 * e.v2_se.max(1e-12),
                    "{preset:?} mixed={mixed} t={}: second {} vs {} (se {})",
                    e.t,
                    e.v2_mean,
                    m.second,
                    e.v2_se
                );
            }
        }
    }
}
