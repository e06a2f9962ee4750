//! Experiment definition: the dimensionless parameter scheme (ω/λ, ε, ε_Δ, ϑ)
//! and its materialization into physical initial conditions.
//!
//! The dimensionless scheme splits the initial mean energy E₀ into an elastic
//! fraction ε and a kinetic fraction 1 − ε, and the fluctuation energy
//! e₀ = ϑE₀ into fractions ε_Δ and 1 − ε_Δ. Every published curve depends on
//! (ω/λ, ε, ε_Δ, ϑ) only, but the numerical oracles need concrete numbers, so
//! `materialize` fixes natural units m₀ = λ = E₀ = 1 (overridable) and derives
//! an effective ħ by inverting ϑ = ħω / (4E₀√(ε_Δ(1−ε_Δ))).

use crate::error::{CkError, Result};
use crate::kernel::Zeta;

/// Dimensionless experiment parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessParams {
    /// ω/λ. `f64::INFINITY` selects the undamped (λ = 0) oscillator.
    pub omega_over_lambda: f64,
    /// Elastic fraction of the mean energy, ε ∈ [0, 1).
    pub epsilon: f64,
    /// Elastic fraction of the fluctuation energy, ε_Δ ∈ (0, 1).
    pub epsilon_delta: f64,
    /// Fluctuation-to-mean energy ratio ϑ = e₀/E₀ ≥ 0. ϑ = 0 is the strict
    /// classical limit; no quantum state is materialized.
    pub theta: f64,
    /// Reference mean energy E₀.
    pub mean_energy: f64,
}

impl DimensionlessParams {
    pub fn new(omega_over_lambda: f64, epsilon: f64, epsilon_delta: f64, theta: f64) -> Self {
        DimensionlessParams {
            omega_over_lambda,
            epsilon,
            epsilon_delta,
            theta,
            mean_energy: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.omega_over_lambda;
        if r.is_nan() || r < 0.0 {
            return Err(CkError::RejectedParams(format!(
                "omega/lambda must be >= 0, got {r}"
            )));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(CkError::RejectedParams(format!(
                "epsilon must lie in [0, 1), got {} (1 - epsilon divides every scaled expression)",
                self.epsilon
            )));
        }
        if !(self.epsilon_delta > 0.0 && self.epsilon_delta < 1.0) {
            return Err(CkError::RejectedParams(format!(
                "epsilon_delta must lie strictly inside (0, 1), got {}",
                self.epsilon_delta
            )));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(CkError::RejectedParams(format!(
                "theta must be finite and >= 0, got {}",
                self.theta
            )));
        }
        if r == 0.0 && self.epsilon > 0.0 {
            return Err(CkError::RejectedParams(
                "omega = 0 cannot store elastic energy: epsilon must be 0 when omega/lambda = 0"
                    .into(),
            ));
        }
        if !(self.mean_energy > 0.0 && self.mean_energy.is_finite()) {
            return Err(CkError::RejectedParams(format!(
                "mean energy E0 must be positive, got {}",
                self.mean_energy
            )));
        }
        Ok(())
    }

    /// ϑ′ = ϑ ε_Δ(1−ε_Δ) / (ε_Δ + ε − 2ε_Δε), the rescaled fluctuation
    /// parameter controlling the coherence correction of the ρ^μ family.
    pub fn theta_prime(&self) -> Result<f64> {
        self.validate()?;
        let d = self.epsilon_delta + self.epsilon - 2.0 * self.epsilon_delta * self.epsilon;
        // d = ε_Δ(1−ε) + ε(1−ε_Δ) > 0 on the validated domain; assert anyway.
        if d <= 0.0 {
            return Err(CkError::RejectedParams(format!(
                "theta-prime denominator must be positive, got {d}"
            )));
        }
        Ok(self.theta * self.epsilon_delta * (1.0 - self.epsilon_delta) / d)
    }
}

/// Unit choice for materialization. Defaults to m₀ = λ = 1 (so τ = t); for
/// the undamped family λ = 0 the time unit comes from `omega_undamped`.
#[derive(Clone, Copy, Debug)]
pub struct UnitChoice {
    pub mass: f64,
    pub lambda: f64,
    pub omega_undamped: f64,
}

impl Default for UnitChoice {
    fn default() -> Self {
        UnitChoice {
            mass: 1.0,
            lambda: 1.0,
            omega_undamped: 1.0,
        }
    }
}

/// Physical constants of one experiment.
#[derive(Clone, Copy, Debug)]
pub struct PhysicalParams {
    pub m0: f64,
    pub lambda: f64,
    pub omega: f64,
    /// k₀ = m₀ω², exactly.
    pub k0: f64,
    /// Effective action quantum; 0 in the strict classical limit ϑ = 0.
    pub hbar_eff: f64,
}

/// Initial conditions, sign convention x₀, p₀ ≥ 0 (the √ε parameterization
/// implies non-negative roots; mirrored centers are covered by the mixed
/// ensembles).
#[derive(Clone, Copy, Debug)]
pub struct InitialState {
    pub x0: f64,
    pub p0: f64,
    /// Initial position spread Δₓ₀; 0 when ϑ = 0.
    pub delta_x0: f64,
    /// Initial momentum spread Δₚ₀ = ħ/(2Δₓ₀); 0 when ϑ = 0.
    pub delta_p0: f64,
}

/// Named parameter sets used throughout the result series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Underdamped oscillator: ω/λ = 10, ε = 0, ε_Δ = 0.5, ϑ = 0.1.
    UnderdampedOscillator,
    /// Overdamped oscillator: ω/λ = 0.1, ε = 0, ε_Δ = 0.5, ϑ = 0.1.
    OverdampedOscillator,
    /// λ = 0: plain harmonic oscillator.
    Harmonic,
    /// k₀ = 0: pure drag, no spring.
    Drag,
}

impl Preset {
    pub fn params(self) -> DimensionlessParams {
        match self {
            Preset::UnderdampedOscillator => DimensionlessParams::new(10.0, 0.0, 0.5, 0.1),
            Preset::OverdampedOscillator => DimensionlessParams::new(0.1, 0.0, 0.5, 0.1),
            Preset::Harmonic => DimensionlessParams::new(f64::INFINITY, 0.0, 0.5, 0.1),
            Preset::Drag => DimensionlessParams::new(0.0, 0.0, 0.5, 0.1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::UnderdampedOscillator => "UO",
            Preset::OverdampedOscillator => "OO",
            Preset::Harmonic => "harmonic",
            Preset::Drag => "drag",
        }
    }
}

/// Axis the published series are plotted against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeAxis {
    /// Dimensionless ωt (all figures with a spring).
    OmegaT,
    /// Dimensionless λt (drag scenarios, where ω = 0).
    LambdaT,
}

impl TimeAxis {
    pub fn column_name(self) -> &'static str {
        match self {
            TimeAxis::OmegaT => "omega_t",
            TimeAxis::LambdaT => "tau",
        }
    }
}

/// A validated experiment: dimensionless parameters plus their physical
/// realization. Immutable after construction.
#[derive(Clone, Copy, Debug)]
pub struct Scenario {
    dimless: DimensionlessParams,
    phys: PhysicalParams,
    init: InitialState,
}

/// Materialize physical parameters and initial conditions from the
/// dimensionless scheme.
///
/// With ω > 0 the fluctuation split gives Δ²ₓ₀ = 2ε_Δe₀/(m₀ω²),
/// Δ²ₚ₀ = 2m₀(1−ε_Δ)e₀ and ħ = 4e₀√(ε_Δ(1−ε_Δ))/ω. With ω = 0 the position
/// spread carries no energy, so only Δₚ₀ is fixed by (ε_Δ, ϑ); a reference
/// ħ = 1 pins Δₓ₀ via the minimum-uncertainty relation, and no dimensionless
/// output depends on that choice.
pub fn materialize(
    dimless: &DimensionlessParams,
    units: &UnitChoice,
) -> Result<(PhysicalParams, InitialState)> {
    dimless.validate()?;
    let m0 = units.mass;
    let e_mean = dimless.mean_energy;
    let (lambda, omega) = if dimless.omega_over_lambda.is_infinite() {
        (0.0, units.omega_undamped)
    } else {
        (units.lambda, dimless.omega_over_lambda * units.lambda)
    };
    if lambda == 0.0 && omega == 0.0 {
        return Err(CkError::RejectedParams(
            "lambda and omega cannot both vanish".into(),
        ));
    }
    let k0 = m0 * omega * omega;
    let x0 = if dimless.epsilon > 0.0 {
        (2.0 * dimless.epsilon * e_mean / (m0 * omega * omega)).sqrt()
    } else {
        0.0
    };
    let p0 = (2.0 * m0 * (1.0 - dimless.epsilon) * e_mean).sqrt();

    let (hbar_eff, delta_x0, delta_p0) = if dimless.theta == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        let e0 = dimless.theta * e_mean;
        let ed = dimless.epsilon_delta;
        let dp = (2.0 * m0 * (1.0 - ed) * e0).sqrt();
        if omega > 0.0 {
            let dx = (2.0 * ed * e0 / (m0 * omega * omega)).sqrt();
            (2.0 * dx * dp, dx, dp)
        } else {
            let hbar = 1.0;
            (hbar, hbar / (2.0 * dp), dp)
        }
    };

    Ok((
        PhysicalParams {
            m0,
            lambda,
            omega,
            k0,
            hbar_eff,
        },
        InitialState {
            x0,
            p0,
            delta_x0,
            delta_p0,
        },
    ))
}

impl Scenario {
    pub fn new(dimless: DimensionlessParams) -> Result<Self> {
        Scenario::with_units(dimless, UnitChoice::default())
    }

    pub fn with_units(dimless: DimensionlessParams, units: UnitChoice) -> Result<Self> {
        let (phys, init) = materialize(&dimless, &units)?;
        Ok(Scenario {
            dimless,
            phys,
            init,
        })
    }

    pub fn preset(p: Preset) -> Self {
        Scenario::new(p.params()).expect("presets are valid by construction")
    }

    pub fn dimless(&self) -> &DimensionlessParams {
        &self.dimless
    }

    pub fn phys(&self) -> &PhysicalParams {
        &self.phys
    }

    pub fn init(&self) -> &InitialState {
        &self.init
    }

    pub fn epsilon(&self) -> f64 {
        self.dimless.epsilon
    }

    pub fn epsilon_delta(&self) -> f64 {
        self.dimless.epsilon_delta
    }

    pub fn theta(&self) -> f64 {
        self.dimless.theta
    }

    pub fn theta_prime(&self) -> Result<f64> {
        self.dimless.theta_prime()
    }

    /// ϑ > 0: quantum state materialized.
    pub fn is_quantum(&self) -> bool {
        self.dimless.theta > 0.0
    }

    /// λ = 0 family (plain harmonic oscillator).
    pub fn is_undamped(&self) -> bool {
        self.phys.lambda == 0.0
    }

    /// k₀ = 0 family (pure drag).
    pub fn is_drag(&self) -> bool {
        self.phys.omega == 0.0
    }

    /// Initial mean kinetic energy K₀ = p₀²/2m₀, the unit of every series.
    pub fn k_ref(&self) -> f64 {
        self.init.p0 * self.init.p0 / (2.0 * self.phys.m0)
    }

    pub fn zeta(&self) -> Result<Zeta> {
        if self.is_undamped() {
            return Err(CkError::Domain(
                "zeta is undefined for the undamped (lambda = 0) family".into(),
            ));
        }
        Zeta::from_ratio(self.dimless.omega_over_lambda)
    }

    pub fn tau(&self, t: f64) -> f64 {
        self.phys.lambda * t
    }

    pub fn phase(&self, t: f64) -> f64 {
        self.phys.omega * t
    }

    pub fn axis(&self) -> TimeAxis {
        if self.is_drag() {
            TimeAxis::LambdaT
        } else {
            TimeAxis::OmegaT
        }
    }

    /// Physical time of one axis value (ωt for oscillators, λt for drag).
    pub fn t_from_axis(&self, value: f64) -> f64 {
        match self.axis() {
            TimeAxis::OmegaT => value / self.phys.omega,
            TimeAxis::LambdaT => value / self.phys.lambda,
        }
    }

    /// Re-derive (ε, ε_Δ, ϑ) from the physical quantities; used by the
    /// round-trip invariant tests.
    pub fn rederive_dimensionless(&self) -> DimensionlessParams {
        let p = &self.phys;
        let i = &self.init;
        let elastic = 0.5 * p.m0 * p.omega * p.omega * i.x0 * i.x0;
        let kinetic = i.p0 * i.p0 / (2.0 * p.m0);
        let e_mean = elastic + kinetic;
        let eps = elastic / e_mean;
        let (ed, theta) = if self.is_quantum() {
            let fe = 0.5 * p.m0 * p.omega * p.omega * i.delta_x0 * i.delta_x0;
            let fk = i.delta_p0 * i.delta_p0 / (2.0 * p.m0);
            let e0 = fe + fk;
            if p.omega > 0.0 {
                (fe / e0, e0 / e_mean)
            } else {
                // Position spread carries no energy when the spring is off.
                (self.dimless.epsilon_delta, fk / ((1.0 - self.dimless.epsilon_delta) * e_mean))
            }
        } else {
            (self.dimless.epsilon_delta, 0.0)
        };
        DimensionlessParams {
            omega_over_lambda: if self.is_undamped() {
                f64::INFINITY
            } else {
                p.omega / p.lambda
            },
            epsilon: eps,
            epsilon_delta: ed,
            theta,
            mean_energy: e_mean,
        }
    }
}
