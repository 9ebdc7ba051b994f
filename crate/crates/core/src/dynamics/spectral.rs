use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::state::ChainState;
use crate::circulant::{check_len, LocalSquareRoot};
use crate::dispersion::omega_eval;
use crate::error::Result;

/// Fourier machinery for a chain of `N` sites: FFT plans and the mode
/// frequencies `|ω_l| = |ω(l/N)|`.
///
/// Convention: `X_l = Σ_j x_j e^{−2πijl/N}`; in these variables the
/// harmonic flow decouples into oscillators of frequency `|ω_l|`.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    freq: Vec<f64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

impl Spectral {
    pub fn new(n: usize, sq: &LocalSquareRoot) -> Result<Self> {
        check_len(n, sq.m())?;
        let mut planner = FftPlanner::new();
        let freq = (0..n)
            .map(|l| if l == 0 { 0.0 } else { omega_eval(l as f64 / n as f64, sq).norm() })
            .collect();
        Ok(Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            freq,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `|ω_l|` for `l = 0 … N−1` (`|ω_0| = 0`).
    pub fn frequencies(&self) -> &[f64] {
        &self.freq
    }

    pub fn max_frequency(&self) -> f64 {
        self.freq.iter().cloned().fold(0.0, f64::max)
    }

    pub fn forward(&self, x: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    pub fn forward_complex(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
    }

    /// Inverse transform including the `1/N`, keeping the real part.
    pub fn inverse_real(&self, mut xh: Vec<Complex64>) -> Vec<f64> {
        self.inv.process(&mut xh);
        let scale = 1.0 / self.n as f64;
        xh.iter().map(|z| z.re * scale).collect()
    }

    pub fn inverse_complex(&self, buf: &mut [Complex64]) {
        self.inv.process(buf);
    }

    /// Exact harmonic flow of the modes over time `t`; mode 0 is pinned.
    pub fn evolve_modes(&self, q: &[Complex64], p: &[Complex64], t: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut qt = vec![Complex64::new(0.0, 0.0); self.n];
        let mut pt = vec![Complex64::new(0.0, 0.0); self.n];
        for l in 1..self.n {
            let w = self.freq[l];
            let (s, c) = (w * t).sin_cos();
            qt[l] = q[l] * c + p[l] * (s / w);
            pt[l] = p[l] * c - q[l] * (w * s);
        }
        (qt, pt)
    }

    /// Exact propagation of a real state by `t`.
    pub fn propagate(&self, state: &ChainState, t: f64, sq: &LocalSquareRoot) -> Result<ChainState> {
        let qh = self.forward(&state.q);
        let ph = self.forward(&state.p);
        let (qt, pt) = self.evolve_modes(&qh, &ph, t);
        ChainState::new(self.inverse_real(pt), self.inverse_real(qt), sq, state.time + t)
    }
}

/// Evolves `state` exactly under the harmonic Hamiltonian for time `t`.
pub fn harmonic_propagate(state: &ChainState, t: f64, sq: &LocalSquareRoot) -> Result<ChainState> {
    Spectral::new(state.len(), sq)?.propagate(state, t, sq)
}
