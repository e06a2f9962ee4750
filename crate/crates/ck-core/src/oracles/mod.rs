//! Independent brute-force verifiers. Nothing in this module touches the
//! closed forms of the analytic engines: the RK4 integrator sees only the
//! equation of motion, the Crank–Nicolson propagator only the Hamiltonian
//! coefficients, the Monte Carlo sampler only initial-condition
//! distributions, and the quadrature routine only a black-box integrand.
//! Each oracle self-validates (convergence order, norm conservation, exact
//! elementary cases) before it referees an engine.

pub mod crank_nicolson;
pub mod monte_carlo;
pub mod quadrature;
pub mod rk4;
