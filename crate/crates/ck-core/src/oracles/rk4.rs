//! Classic fixed-step RK4 for the damped-oscillator equation of motion
//! ẍ + 2λẋ + ω²x = 0.

use crate::error::{CkError, Result};

#[derive(Clone, Copy, Debug)]
pub struct PhasePoint {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

#[inline]
fn accel(lambda: f64, omega: f64, x: f64, v: f64) -> f64 {
    -2.0 * lambda * v - omega * omega * x
}

#[inline]
fn step(lambda: f64, omega: f64, x: f64, v: f64, h: f64) -> (f64, f64) {
    let k1x = v;
    let k1v = accel(lambda, omega, x, v);
    let k2x = v + 0.5 * h * k1v;
    let k2v = accel(lambda, omega, x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    let k3x = v + 0.5 * h * k2v;
    let k3v = accel(lambda, omega, x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    let k4x = v + h * k3v;
    let k4v = accel(lambda, omega, x + h * k3x, v + h * k3v);
    (
        x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// Integrate from (x₀, v₀) and sample at the sorted times `ts` (the step is
/// shortened to land exactly on each sample time).
pub fn sample_at(
    lambda: f64,
    omega: f64,
    x0: f64,
    v0: f64,
    ts: &[f64],
    dt: f64,
) -> Result<Vec<PhasePoint>> {
    if !(dt > 0.0) {
        return Err(CkError::RejectedParams(format!("dt must be positive, got {dt}")));
    }
    let mut out = Vec::with_capacity(ts.len());
    let (mut t, mut x, mut v) = (0.0_f64, x0, v0);
    for &target in ts {
        if target < t - 1e-12 {
            return Err(CkError::RejectedParams(
                "sample times must be sorted and non-negative".into(),
            ));
        }
        while t < target - 1e-12 * target.max(1.0) {
            let h = dt.min(target - t);
            let (nx, nv) = step(lambda, omega, x, v, h);
            if !(nx.is_finite() && nv.is_finite()) {
                return Err(CkError::StepRejected(format!(
                    "non-finite state at t = {t}"
                )));
            }
            x = nx;
            v = nv;
            t += h;
        }
        out.push(PhasePoint { t: target, x, v });
    }
    Ok(out)
}

/// Integrate to `t_end` with uniform output every `dt`.
pub fn integrate(
    lambda: f64,
    omega: f64,
    x0: f64,
    v0: f64,
    t_end: f64,
    dt: f64,
) -> Result<Vec<PhasePoint>> {
    let n = (t_end / dt).ceil() as usize;
    let ts: Vec<f64> = (0..=n).map(|i| (i as f64 * dt).min(t_end)).collect();
    sample_at(lambda, omega, x0, v0, &ts, dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_order_convergence_by_step_halving() {
        // Against the conservative case with known solution x = sin(t).
        let exact = |t: f64| t.sin();
        let err = |dt: f64| {
            let pts = sample_at(0.0, 1.0, 0.0, 1.0, &[2.0], dt).unwrap();
            (pts[0].x - exact(2.0)).abs()
        };
        let e1 = err(0.02);
        let e2 = err(0.01);
        let ratio = e1 / e2;
        assert!(
            (10.0..26.0).contains(&ratio),
            "expected error ratio near 16, got {ratio} ({e1} / {e2})"
        );
    }

    #[test]
    fn conservative_case_energy_drift() {
        // λ = 0, ε = 0: energy drift below 1e-10 over ωt ∈ [0, 10].
        let omega = 1.0;
        let pts = integrate(0.0, omega, 0.0, 1.0, 10.0, 1e-3).unwrap();
        let e0 = 0.5 * (pts[0].v.powi(2) + omega * omega * pts[0].x.powi(2));
        for p in &pts {
            let e = 0.5 * (p.v.powi(2) + omega * omega * p.x.powi(2));
            assert!((e - e0).abs() < 1e-10);
        }
    }

    #[test]
    fn drag_case_matches_elementary_solution() {
        // k₀ = 0: v(t) = v₀ e^{−2λt} to 1e-10.
        let lambda = 1.0;
        let pts = integrate(lambda, 0.0, 0.3, 1.4, 5.0, 1e-3).unwrap();
        for p in &pts {
            let v = 1.4 * (-2.0 * lambda * p.t).exp();
            assert!((p.v - v).abs() < 1e-10, "t = {}", p.t);
        }
    }

    #[test]
    fn rejects_nonfinite_blowup() {
        // A huge step on a stiff oscillator explodes; the guard must fire
        // rather than emit NaN samples.
        let r = sample_at(0.0, 1e8, 1.0, 0.0, &[1e3], 0.5);
        assert!(matches!(r, Err(CkError::StepRejected(_))));
    }
}
