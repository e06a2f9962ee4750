//! Work and heat accounting, all in units of the initial kinetic energy K₀:
//!
//! * quantum kinetic energy K_q/K₀ = e^{−2τ}(α_cl + ϑβ)·Γ(τ);
//! * the mechanical quantum work W_q = ΔK_q with its centroid/thermal split
//!   W_q = W_c + W_th, where W_c coincides with the classical work;
//! * Alicki's split Ẇ_ak = Tr(ρ ∂H_u/∂t) = −4λ(m₀/2)⟨V²⟩ with heat from the
//!   first law, Q_ak = ΔK_q − W_ak, available in closed form and by
//!   quadrature;
//! * the τ → ∞ asymptotes of every series (λ > 0 only).

use rayon::prelude::*;

use crate::classical;
use crate::error::Result;
use crate::kernel::{self, CoefficientVector, GammaVector};
use crate::oracles::quadrature;
use crate::scenario::{Scenario, TimeAxis};

/// Decomposition of the mechanical quantum work.
#[derive(Clone, Copy, Debug)]
pub struct WorkSplit {
    /// W_q/K₀
    pub total: f64,
    /// W_c/K₀ (mean-force × mean-velocity part)
    pub centroid: f64,
    /// W_th/K₀ (velocity-variance part)
    pub thermal: f64,
}

#[derive(Clone, Copy, Debug)]
pub enum AlickiMethod {
    ClosedForm,
    /// Adaptive quadrature of −4λ(m₀/2)⟨V²⟩ with the given absolute
    /// tolerance on W/K₀.
    Quadrature { tol: f64 },
}

fn fluct_pair(scn: &Scenario) -> Result<(CoefficientVector, CoefficientVector)> {
    if scn.is_undamped() {
        Ok((
            kernel::alpha_cl_undamped(scn.epsilon()),
            kernel::beta_fluct_undamped(scn.epsilon(), scn.epsilon_delta()),
        ))
    } else {
        let zeta = scn.zeta()?;
        Ok((
            kernel::alpha_cl(scn.epsilon(), &zeta),
            kernel::beta_fluct(scn.epsilon(), scn.epsilon_delta(), &zeta),
        ))
    }
}

/// K_q(t)/K₀ = (m₀/2)⟨V²⟩/K₀. At ϑ = 0 this is the classical kinetic energy.
pub fn kinetic_energy(scn: &Scenario, t: f64) -> Result<f64> {
    let (alpha, beta) = fluct_pair(scn)?;
    let c = alpha.add_scaled(&beta, scn.theta());
    if scn.is_undamped() {
        c.contract(&GammaVector::undamped(scn.phase(t)))
    } else {
        c.contract(&scn.zeta()?.gamma_decayed(scn.tau(t)))
    }
}

/// (W_q, W_c, W_th)/K₀ at physical time t. The decomposition identity
/// W_q = W_c + W_th and the work-energy identity W_q = ΔK_q hold to rounding.
pub fn quantum_work(scn: &Scenario, t: f64) -> Result<WorkSplit> {
    let (alpha, beta) = fluct_pair(scn)?;
    let theta = scn.theta();
    let diff = if scn.is_undamped() {
        GammaVector::undamped(scn.phase(t)).sub(&GammaVector::undamped(0.0))
    } else {
        scn.zeta()?
            .gamma_decayed(scn.tau(t))
            .sub(&GammaVector::at_zero())
    };
    let centroid = alpha.contract(&diff)?;
    let thermal = theta * beta.contract(&diff)?;
    Ok(WorkSplit {
        total: alpha.add_scaled(&beta, theta).contract(&diff)?,
        centroid,
        thermal,
    })
}

/// (W_ak, Q_ak)/K₀ at physical time t.
///
/// λ = 0: W_ak ≡ 0 (the system Hamiltonian H_u is time-independent), heat
/// carries the whole kinetic-energy change. k₀ = 0: W_ak = ΔK_q, no heat;
/// this branch also bypasses the (ζ² − 1) denominators of the closed form,
/// which vanish only at ω = 0.
pub fn alicki_work_heat(scn: &Scenario, t: f64, method: AlickiMethod) -> Result<(f64, f64)> {
    let dk = kinetic_energy(scn, t)? - kinetic_energy(scn, 0.0)?;
    if scn.is_undamped() {
        return Ok((0.0, dk));
    }
    if scn.is_drag() {
        return match method {
            AlickiMethod::ClosedForm => Ok((dk, 0.0)),
            AlickiMethod::Quadrature { tol } => {
                let w = alicki_quadrature(scn, t, tol)?;
                Ok((w, dk - w))
            }
        };
    }
    let w = match method {
        AlickiMethod::ClosedForm => {
            let zeta = scn.zeta()?;
            let (alpha, beta) = fluct_pair(scn)?;
            let anti = kernel::alicki_antiderivative(
                &alpha.add_scaled(&beta, scn.theta()),
                &zeta,
            );
            anti.contract(&zeta.gamma_decayed(scn.tau(t)))? - anti.at_gamma_zero()
        }
        AlickiMethod::Quadrature { tol } => alicki_quadrature(scn, t, tol)?,
    };
    Ok((w, dk - w))
}

fn alicki_quadrature(scn: &Scenario, t: f64, tol: f64) -> Result<f64> {
    let tau_end = scn.tau(t);
    if tau_end == 0.0 {
        return Ok(0.0);
    }
    // Ẇ_ak dτ = −4 K_q/K₀ dτ; the integrand is smooth and decaying.
    let scn = *scn;
    quadrature::integrate(
        |tau| {
            let t = tau / scn.phys().lambda;
            -4.0 * kinetic_energy(&scn, t).expect("kinetic energy is total on tau >= 0")
        },
        0.0,
        tau_end,
        tol,
    )
}

/// τ → ∞ limits of every series, in units of K₀. `None` for λ = 0, where
/// the motion is periodic and no asymptote exists.
#[derive(Clone, Copy, Debug)]
pub struct Asymptotes {
    pub w_cl: f64,
    pub w_q: f64,
    pub w_th: f64,
    pub w_ak: f64,
    pub q_ak: f64,
}

pub fn asymptotes(scn: &Scenario) -> Result<Option<Asymptotes>> {
    if scn.is_undamped() {
        return Ok(None);
    }
    let (alpha, beta) = fluct_pair(scn)?;
    let theta = scn.theta();
    let combined = alpha.add_scaled(&beta, theta);
    // e^{−2τ}Γ contractions vanish as τ → ∞ for λ > 0, so each work
    // asymptote is −(coefficients)·Γ(0).
    let w_cl = -alpha.at_gamma_zero();
    let w_q = -combined.at_gamma_zero();
    let w_th = -theta * beta.at_gamma_zero();
    let w_ak = if scn.is_drag() {
        // W_ak = ΔK_q for pure drag.
        w_q
    } else {
        -kernel::alicki_antiderivative(&combined, &scn.zeta()?).at_gamma_zero()
    };
    // ΔK_q(∞) = −K_q(0)/K₀ = w_q, so Q_ak(∞) = w_q − w_ak.
    let q_ak = w_q - w_ak;
    Ok(Some(Asymptotes {
        w_cl,
        w_q,
        w_th,
        w_ak,
        q_ak,
    }))
}

/// Time-indexed record of every energy series, grid in axis units
/// (ωt, or λt for drag scenarios).
#[derive(Clone, Debug)]
pub struct EnergySeries {
    pub axis: TimeAxis,
    pub grid: Vec<f64>,
    pub k_q: Vec<f64>,
    pub w_q: Vec<f64>,
    pub w_c: Vec<f64>,
    pub w_th: Vec<f64>,
    pub w_ak: Vec<f64>,
    pub q_ak: Vec<f64>,
    pub w_cl: Vec<f64>,
    pub asymptotes: Option<Asymptotes>,
}

/// Evaluate every series over a grid. Per-point closed forms are pure, so
/// the result is independent of evaluation order.
pub fn energy_series(scn: &Scenario, grid: &[f64]) -> Result<EnergySeries> {
    let rows: Vec<(f64, WorkSplit, (f64, f64), f64)> = grid
        .par_iter()
        .map(|&axis_value| {
            let t = scn.t_from_axis(axis_value);
            let k = kinetic_energy(scn, t)?;
            let split = quantum_work(scn, t)?;
            let ak = alicki_work_heat(scn, t, AlickiMethod::ClosedForm)?;
            let wcl = classical::work(scn, t)?;
            Ok((k, split, ak, wcl))
        })
        .collect::<Result<_>>()?;
    let mut series = EnergySeries {
        axis: scn.axis(),
        grid: grid.to_vec(),
        k_q: Vec::with_capacity(rows.len()),
        w_q: Vec::with_capacity(rows.len()),
        w_c: Vec::with_capacity(rows.len()),
        w_th: Vec::with_capacity(rows.len()),
        w_ak: Vec::with_capacity(rows.len()),
        q_ak: Vec::with_capacity(rows.len()),
        w_cl: Vec::with_capacity(rows.len()),
        asymptotes: asymptotes(scn)?,
    };
    for (k, split, (w_ak, q_ak), wcl) in rows {
        series.k_q.push(k);
        series.w_q.push(split.total);
        series.w_c.push(split.centroid);
        series.w_th.push(split.thermal);
        series.w_ak.push(w_ak);
        series.q_ak.push(q_ak);
        series.w_cl.push(wcl);
    }
    Ok(series)
}
