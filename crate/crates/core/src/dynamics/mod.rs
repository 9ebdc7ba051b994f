//! Gibbs sampling, exact harmonic propagation, symplectic integration of the
//! anharmonic chain and Monte Carlo correlation estimates.

mod ensemble;
mod integrate;
mod sampler;
mod spectral;
mod state;

pub use ensemble::{mc_correlations, mc_correlations_with, EnsembleSpec};
pub use integrate::{energy, integrate, nonlinear_force, potential_energy, verlet_step, NonlinearModel};
pub use sampler::gibbs_sample;
pub use spectral::{harmonic_propagate, Spectral};
pub use state::ChainState;
