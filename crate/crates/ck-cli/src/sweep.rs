//! Randomized parameter sweep over ε ∈ [0, 0.9], ε_Δ ∈ [0.1, 0.9],
//! ϑ ∈ [0, 1], ω/λ ∈ [0.05, 20]: per draw, check the decomposition,
//! work-energy, centroid-classical and first-law identities over a τ grid.

use anyhow::Result;
use ck_core::classical;
use ck_core::energetics::{self, AlickiMethod};
use ck_core::scenario::{DimensionlessParams, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csvout::Table;

pub struct SweepOutcome {
    pub table: Table,
    pub max_decomposition: f64,
    pub max_work_energy: f64,
    pub max_centroid_classical: f64,
    pub max_first_law: f64,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.max_decomposition <= 1e-12
            && self.max_work_energy <= 1e-12
            && self.max_centroid_classical <= 1e-12
            && self.max_first_law <= 1e-10
    }
}

pub fn random_params(rng: &mut impl Rng) -> DimensionlessParams {
    DimensionlessParams::new(
        rng.gen_range(0.05..20.0),
        rng.gen_range(0.0..0.9),
        rng.gen_range(0.1..0.9),
        rng.gen_range(0.0..1.0),
    )
}

pub fn run(count: usize, tau_points: usize, seed: u64) -> Result<SweepOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(&[
        "omega_over_lambda",
        "epsilon",
        "epsilon_delta",
        "theta",
        "dev_decomposition",
        "dev_work_energy",
        "dev_centroid_classical",
        "dev_first_law",
    ]);
    let mut worst = [0.0f64; 4];
    for _ in 0..count {
        let params = random_params(&mut rng);
        let scn = Scenario::new(params).map_err(|e| anyhow::anyhow!("{e}"))?;
        let mut dev = [0.0f64; 4];
        for j in 0..tau_points {
            let tau = 10.0 * j as f64 / (tau_points - 1) as f64;
            let w = energetics::quantum_work(&scn, tau).map_err(|e| anyhow::anyhow!("{e}"))?;
            let dk = energetics::kinetic_energy(&scn, tau).map_err(|e| anyhow::anyhow!("{e}"))?
                - energetics::kinetic_energy(&scn, 0.0).map_err(|e| anyhow::anyhow!("{e}"))?;
            let wcl = classical::work(&scn, tau).map_err(|e| anyhow::anyhow!("{e}"))?;
            let (w_ak, q_ak) = energetics::alicki_work_heat(&scn, tau, AlickiMethod::ClosedForm)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            dev[0] = dev[0].max((w.total - w.centroid - w.thermal).abs());
            dev[1] = dev[1].max((w.total - dk).abs());
            dev[2] = dev[2].max((w.centroid - wcl).abs());
            dev[3] = dev[3].max((dk - w_ak - q_ak).abs());
        }
        for (w, d) in worst.iter_mut().zip(dev) {
            *w = w.max(d);
        }
        table.push(vec![
            params.omega_over_lambda,
            params.epsilon,
            params.epsilon_delta,
            params.theta,
            dev[0],
            dev[1],
            dev[2],
            dev[3],
        ]);
    }
    Ok(SweepOutcome {
        table,
        max_decomposition: worst[0],
        max_work_energy: worst[1],
        max_centroid_classical: worst[2],
        max_first_law: worst[3],
    })
}
