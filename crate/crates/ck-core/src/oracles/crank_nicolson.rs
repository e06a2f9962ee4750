//! Crank–Nicolson grid propagator for the time-dependent Schrödinger
//! equation with Hamiltonian H(t) = e^{−2λt}P²/2m₀ + k₀e^{2λt}X²/2.
//!
//! Scheme: (1 + i·h/2ħ·H_mid)ψⁿ⁺¹ = (1 − i·h/2ħ·H_mid)ψⁿ with the
//! time-dependent coefficients frozen at the midpoint of each step
//! (second order in the step, unconditionally norm-conserving). The
//! Laplacian is the 4th-order five-point stencil, solved as a pentadiagonal
//! system. The instantaneous mean energy is subtracted from H each step;
//! that is a global-phase gauge with no effect on observables, and it
//! removes the fast common phase so the step error is set by the energy
//! spread only.
//!
//! Position observables come from |ψ|²; momentum observables from spectral
//! (FFT) differentiation at snapshot times.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{CkError, Result};

/// Spatial grid and step for one propagation run.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub dt: f64,
    /// Number of cells at each edge monitored for probability leakage.
    pub boundary_pad: usize,
}

impl GridSpec {
    pub fn validate(&self, lambda: f64, omega: f64) -> Result<()> {
        if self.n_points < 1 << 10 {
            return Err(CkError::RejectedParams(format!(
                "grid needs at least 2^10 points, got {}",
                self.n_points
            )));
        }
        if !(self.x_max > self.x_min) {
            return Err(CkError::RejectedParams("empty grid extent".into()));
        }
        let scale = 1.0 / lambda.max(omega);
        if self.dt > 0.01 * scale {
            return Err(CkError::RejectedParams(format!(
                "dt = {} exceeds 0.01·min(1/lambda, 1/omega) = {}",
                self.dt,
                0.01 * scale
            )));
        }
        Ok(())
    }

    /// Halved step, doubled resolution; used for self-convergence checks.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            n_points: self.n_points * 2,
            dt: self.dt * 0.5,
            boundary_pad: self.boundary_pad * 2,
            ..*self
        }
    }
}

/// Initial wavefunction.
#[derive(Clone, Copy, Debug)]
pub enum InitialWave {
    /// (2πΔ²)^{-1/4} exp[−(x−x₀)²/4Δ² + ip₀x/ħ]
    Gaussian { x0: f64, p0: f64, var_x: f64 },
    /// Equal-weight coherent superposition of the ±(x₀, p₀) pair, the μ = 0
    /// member of the interpolating family (normalized on the grid).
    SymmetricSuperposition { x0: f64, p0: f64, var_x: f64 },
}

/// Observables extracted from one snapshot.
#[derive(Clone, Copy, Debug)]
pub struct CnObservables {
    pub t: f64,
    pub norm: f64,
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
}

/// Full result of a propagation run.
#[derive(Clone, Debug)]
pub struct CnRun {
    pub snapshots: Vec<CnObservables>,
    /// max |norm − 1| per unit of max(λ,ω)·t over the run.
    pub norm_drift_rate: f64,
    /// Grid integral of |ψ|² as constructed, before rescaling to one; for
    /// superpositions this is N_μ/2 with μ = 0 and checks the analytic
    /// normalization factor.
    pub initial_norm: f64,
}

/// 4th-order second-derivative weights / dx².
struct Stencil {
    w: [f64; 5],
}

impl Stencil {
    fn new(dx: f64) -> Self {
        let d = 12.0 * dx * dx;
        Stencil {
            w: [-1.0 / d, 16.0 / d, -30.0 / d, 16.0 / d, -1.0 / d],
        }
    }
}

fn apply_hamiltonian(
    kin: f64,
    potential: &[f64],
    stencil: &Stencil,
    psi: &[Complex64],
    out: &mut [Complex64],
) {
    let n = psi.len();
    let w = &stencil.w;
    for i in 0..n {
        let mut lap = w[2] * psi[i];
        if i >= 1 {
            lap += w[1] * psi[i - 1];
        }
        if i >= 2 {
            lap += w[0] * psi[i - 2];
        }
        if i + 1 < n {
            lap += w[3] * psi[i + 1];
        }
        if i + 2 < n {
            lap += w[4] * psi[i + 2];
        }
        out[i] = kin * lap + potential[i] * psi[i];
    }
}

/// Banded LU (no pivoting, bandwidth 2) for the CN system; diagonally
/// dominant for steps that pass `GridSpec::validate`.
struct BandedSolver {
    n: usize,
    /// band[i] = row i at column offsets (−2, −1, 0, +1, +2).
    band: Vec<[Complex64; 5]>,
}

impl BandedSolver {
    fn new(n: usize) -> Self {
        BandedSolver {
            n,
            band: vec![[Complex64::new(0.0, 0.0); 5]; n],
        }
    }

    /// Fill A = I + coeff·(kin·∇² + diag(potential)).
    fn fill(&mut self, coeff: Complex64, kin: f64, stencil: &Stencil, potential: &[f64]) {
        let w = &stencil.w;
        let off = [
            coeff * (kin * w[0]),
            coeff * (kin * w[1]),
            coeff * (kin * w[3]),
            coeff * (kin * w[4]),
        ];
        for i in 0..self.n {
            let row = &mut self.band[i];
            row[0] = off[0];
            row[1] = off[1];
            row[2] = Complex64::new(1.0, 0.0) + coeff * (kin * w[2] + potential[i]);
            row[3] = off[2];
            row[4] = off[3];
        }
    }

    /// In-place LU + solve; overwrites the band storage and `rhs`.
    fn solve(&mut self, rhs: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n - 1 {
            let pivot = self.band[i][2];
            let u1 = self.band[i][3];
            let u2 = self.band[i][4];
            let r = rhs[i];

            let m1 = self.band[i + 1][1] / pivot;
            self.band[i + 1][2] -= m1 * u1;
            self.band[i + 1][3] -= m1 * u2;
            rhs[i + 1] -= m1 * r;

            if i + 2 < n {
                let m2 = self.band[i + 2][0] / pivot;
                self.band[i + 2][1] -= m2 * u1;
                self.band[i + 2][2] -= m2 * u2;
                rhs[i + 2] -= m2 * r;
            }
        }
        rhs[n - 1] /= self.band[n - 1][2];
        if n >= 2 {
            let x = rhs[n - 1];
            rhs[n - 2] = (rhs[n - 2] - self.band[n - 2][3] * x) / self.band[n - 2][2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            let x1 = rhs[i + 1];
            let x2 = rhs[i + 2];
            rhs[i] = (rhs[i] - self.band[i][3] * x1 - self.band[i][4] * x2) / self.band[i][2];
        }
    }
}

/// Propagate and report observables at the sorted snapshot times.
pub fn propagate(
    lambda: f64,
    omega: f64,
    m0: f64,
    hbar: f64,
    wave: InitialWave,
    grid: &GridSpec,
    snapshot_ts: &[f64],
) -> Result<CnRun> {
    grid.validate(lambda, omega)?;
    let n = grid.n_points;
    let dx = (grid.x_max - grid.x_min) / n as f64;
    let xs: Vec<f64> = (0..n).map(|i| grid.x_min + i as f64 * dx).collect();
    let stencil = Stencil::new(dx);
    let k0 = m0 * omega * omega;

    let mut psi: Vec<Complex64> = match wave {
        InitialWave::Gaussian { x0, p0, var_x } => xs
            .iter()
            .map(|&x| gaussian_amp(x, x0, p0, var_x, hbar))
            .collect(),
        InitialWave::SymmetricSuperposition { x0, p0, var_x } => xs
            .iter()
            .map(|&x| {
                gaussian_amp(x, x0, p0, var_x, hbar) + gaussian_amp(x, -x0, -p0, var_x, hbar)
            })
            .collect(),
    };
    let initial_norm = norm(&psi, dx);
    let scale = 1.0 / initial_norm.sqrt();
    psi.iter_mut().for_each(|c| *c *= scale);

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);

    let mut solver = BandedSolver::new(n);
    let mut hpsi = vec![Complex64::new(0.0, 0.0); n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    let mut potential = vec![0.0f64; n];

    let mut snapshots = Vec::with_capacity(snapshot_ts.len());
    let mut norm_drift_rate = 0.0f64;
    let rate_scale = lambda.max(omega);

    let mut t = 0.0f64;
    for &target in snapshot_ts {
        if target < -1e-15 {
            return Err(CkError::RejectedParams(
                "snapshot times must be non-negative and sorted".into(),
            ));
        }
        while t < target - 1e-12 * target.max(1.0) {
            let h = grid.dt.min(target - t);
            let tm = t + 0.5 * h;
            let kin = -hbar * hbar * (-2.0 * lambda * tm).exp() / (2.0 * m0);
            let vcoef = 0.5 * k0 * (2.0 * lambda * tm).exp();
            for (v, &x) in potential.iter_mut().zip(&xs) {
                *v = vcoef * x * x;
            }
            apply_hamiltonian(kin, &potential, &stencil, &psi, &mut hpsi);
            // Gauge shift: subtract ⟨H⟩ so only the energy spread advances phase.
            let mut eref = 0.0;
            for (hv, p) in hpsi.iter().zip(&psi) {
                eref += (p.conj() * hv).re;
            }
            eref *= dx;
            for v in potential.iter_mut() {
                *v -= eref;
            }
            let coeff = Complex64::new(0.0, h / (2.0 * hbar));
            for i in 0..n {
                rhs[i] = psi[i] - coeff * (hpsi[i] - eref * psi[i]);
            }
            solver.fill(coeff, kin, &stencil, &potential);
            solver.solve(&mut rhs);
            std::mem::swap(&mut psi, &mut rhs);
            t += h;
        }
        let obs = observe(&psi, &xs, dx, hbar, target, fft.as_ref())?;
        check_leakage(&psi, dx, grid)?;
        let allowed = 1e-10 * (rate_scale * target).max(1.0);
        if (obs.norm - 1.0).abs() > allowed {
            return Err(CkError::Domain(format!(
                "norm drift {:.3e} at t = {target} exceeds {allowed:.1e}",
                obs.norm - 1.0
            )));
        }
        norm_drift_rate =
            norm_drift_rate.max((obs.norm - 1.0).abs() / (rate_scale * target).max(1.0));
        snapshots.push(obs);
    }

    Ok(CnRun {
        snapshots,
        norm_drift_rate,
        initial_norm,
    })
}

fn gaussian_amp(x: f64, x0: f64, p0: f64, var_x: f64, hbar: f64) -> Complex64 {
    let amp = (2.0 * std::f64::consts::PI * var_x).powf(-0.25);
    let arg = Complex64::new(-(x - x0) * (x - x0) / (4.0 * var_x), p0 * x / hbar);
    amp * arg.exp()
}

fn norm(psi: &[Complex64], dx: f64) -> f64 {
    psi.iter().map(|c| c.norm_sqr()).sum::<f64>() * dx
}

fn check_leakage(psi: &[Complex64], dx: f64, grid: &GridSpec) -> Result<()> {
    let pad = grid.boundary_pad.max(1).min(psi.len() / 4);
    let edge: f64 = psi[..pad]
        .iter()
        .chain(psi[psi.len() - pad..].iter())
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        * dx;
    if edge > 1e-12 {
        return Err(CkError::GridTooSmall(format!(
            "boundary probability {edge:.3e} exceeds 1e-12; widen the box"
        )));
    }
    Ok(())
}

fn observe(
    psi: &[Complex64],
    xs: &[f64],
    dx: f64,
    hbar: f64,
    t: f64,
    fft: &dyn rustfft::Fft<f64>,
) -> Result<CnObservables> {
    let n = psi.len();
    let nrm = norm(psi, dx);
    let mut mx = 0.0;
    let mut mx2 = 0.0;
    for (c, &x) in psi.iter().zip(xs) {
        let w = c.norm_sqr();
        mx += w * x;
        mx2 += w * x * x;
    }
    mx *= dx / nrm;
    mx2 *= dx / nrm;

    let mut spec: Vec<Complex64> = psi.to_vec();
    fft.process(&mut spec);
    let length = dx * n as f64;
    let mut wsum = 0.0;
    let mut mp = 0.0;
    let mut mp2 = 0.0;
    for (j, c) in spec.iter().enumerate() {
        let j_signed = if j <= n / 2 {
            j as f64
        } else {
            j as f64 - n as f64
        };
        let k = 2.0 * std::f64::consts::PI * j_signed / length;
        let w = c.norm_sqr();
        wsum += w;
        mp += w * hbar * k;
        mp2 += w * hbar * hbar * k * k;
    }
    mp /= wsum;
    mp2 /= wsum;

    if !(mx.is_finite() && mp2.is_finite()) {
        return Err(CkError::StepRejected(format!(
            "non-finite observables at t = {t}"
        )));
    }
    Ok(CnObservables {
        t,
        norm: nrm,
        mean_x: mx,
        mean_x2: mx2,
        mean_p: mp,
        mean_p2: mp2,
    })
}
