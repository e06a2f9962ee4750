//! Energetics of the Caldirola-Kanai damped oscillator.
//!
//! The model is the effective Hamiltonian H = e^{−2λt}P²/2m₀ + k₀e^{2λt}X²/2,
//! whose Heisenberg equations reproduce ẍ + 2λẋ + ω²x = 0. This crate
//! implements its complete energy accounting in closed form — classical
//! trajectory, evolved Gaussian state, mechanical quantum work with its
//! centroid/thermal decomposition, Alicki's work/heat split, Liouvillian
//! ensembles and the superposition↔mixture family ρ^μ — together with
//! independent numerical oracles (RK4, Crank–Nicolson, Monte Carlo,
//! adaptive quadrature) that verify every closed form.

pub mod classical;
pub mod energetics;
pub mod ensembles;
pub mod error;
pub mod kernel;
pub mod oracles;
pub mod quantum;
pub mod scenario;

pub use error::{CkError, Result};
pub use scenario::{DimensionlessParams, Preset, Scenario, TimeAxis, UnitChoice};

// The kernel's public surface speaks complex numbers; re-export the crate.
pub use num_complex;

