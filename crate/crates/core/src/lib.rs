//! Correlation functions of harmonic and weakly anharmonic chains with
//! finite-range couplings: localized square roots of circulant interaction
//! matrices, exact and asymptotic equilibrium correlations, the hierarchy of
//! local conserved charges, and Monte Carlo estimates for the anharmonic
//! chain.

pub mod analysis;
pub mod asymptotics;
pub mod circulant;
pub mod correlations;
pub mod dataset;
pub mod dispersion;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod hierarchy;
pub mod par;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use circulant::{CouplingVector, LocalSquareRoot};
pub use dataset::{CorrelationDataset, Method};
pub use dispersion::Dispersion;
pub use error::{Error, Result};
